use std::path::Path;

use imprecise_core::choquet::SetFunction;
use imprecise_core::exchange::{predictive_update, CategorySpace, CountSpace};
use imprecise_core::invariance::{
    credal_weakly_invariant, invariance_report, mixture_lower_prevision, strongly_invariant,
    strongly_invariant_natex, Witness,
};
use imprecise_core::lowprev::{avoids_sure_loss, credal_vertices, natural_extension, Assessment};
use imprecise_core::rational::to_exact_string;
use imprecise_core::shift::{lnex_res, lnex_theta, lsamp_theta, unex_theta, usamp_theta, ShiftParams};
use imprecise_core::transforms::TransformationMonoid;
use imprecise_core::{Gamble, Space};
use serde_json::Value;

use crate::error::CliError;
use crate::report::{Render, Report};
use crate::schema::{
    AssessmentJson, GambleJson, Input, MonoidJson, NatGambleJson, ScenarioJson, SetFunctionJson,
};

/// Everything a command needs besides its own arguments.
pub struct Ctx<'a> {
    pub report: &'a mut Report,
    pub render: Render,
}

impl Ctx<'_> {
    fn load(&mut self, path: &Path) -> Result<Input, CliError> {
        let input = Input::read(path)?;
        self.report.record(&input);
        Ok(input)
    }

    fn model(&mut self, path: &Path) -> Result<Assessment, CliError> {
        self.load(path)?.parse::<AssessmentJson>()?.to_assessment()
    }

    fn gamble(&mut self, path: &Path, space: &Space) -> Result<Gamble, CliError> {
        self.load(path)?.parse::<GambleJson>()?.to_gamble(space, "values")
    }

    fn monoid(&mut self, path: &Path, space: &Space) -> Result<TransformationMonoid, CliError> {
        let m = self.load(path)?.parse::<MonoidJson>()?.to_monoid(space)?;
        if m.is_truncated() {
            self.report
                .note(format!("monoid closure truncated at {} elements", m.len()));
        }
        Ok(m)
    }
}

pub fn asl(ctx: &mut Ctx, model: &Path) -> Result<Value, CliError> {
    let a = ctx.model(model)?;
    Ok(ctx.render.boolean(avoids_sure_loss(&a)))
}

pub fn coherence(ctx: &mut Ctx, model: &Path) -> Result<Value, CliError> {
    let a = ctx.model(model)?;
    if !avoids_sure_loss(&a) {
        ctx.report.note("the assessment incurs a sure loss");
        return Ok(ctx.render.boolean(false));
    }
    let mut coherent = true;
    for (i, (g, b)) in a.items().iter().enumerate() {
        let e = natural_extension(&a, g)?;
        if e != *b {
            coherent = false;
            ctx.report.note(format!(
                "items[{i}]: natural extension {} exceeds the assessed {}",
                to_exact_string(&e),
                to_exact_string(b)
            ));
        }
    }
    Ok(ctx.render.boolean(coherent))
}

pub fn natex(ctx: &mut Ctx, model: &Path, gamble: &Path) -> Result<Value, CliError> {
    let a = ctx.model(model)?;
    let g = ctx.gamble(gamble, a.space())?;
    Ok(ctx.render.rational(&natural_extension(&a, &g)?))
}

pub fn vertices(ctx: &mut Ctx, model: &Path) -> Result<Value, CliError> {
    let a = ctx.model(model)?;
    let vertices = credal_vertices(&a)?;
    let rows = vertices
        .iter()
        .map(|p| p.mass().iter().map(|m| ctx.render.cell(m)).collect())
        .collect();
    Ok(ctx.render.table(a.space().labels().to_vec(), rows))
}

fn describe(w: &Witness, m: &TransformationMonoid) -> String {
    match w {
        Witness::Item { item, generator } => {
            format!("items[{item}] is not dominated after lifting by {:?}", m.generators()[*generator])
        }
        Witness::Vertex { vertex, generator } => format!("{vertex:?} fails under {:?}", m.generators()[*generator]),
    }
}

#[derive(Clone, Copy, Debug)]
pub enum InvarianceMode {
    All,
    Weak,
    Strong,
}

pub fn invariance(ctx: &mut Ctx, model: &Path, monoid: &Path, mode: InvarianceMode) -> Result<Value, CliError> {
    let a = ctx.model(model)?;
    let m = ctx.monoid(monoid, a.space())?;
    match mode {
        InvarianceMode::Weak => Ok(ctx.render.boolean(credal_weakly_invariant(&a, &m)?)),
        InvarianceMode::Strong => Ok(ctx.render.boolean(strongly_invariant(&a, &m)?)),
        InvarianceMode::All => {
            let r = invariance_report(&a, &m)?;
            let opt = |b: Option<bool>| b.map_or(Value::Null, Value::Bool);
            let rows = vec![
                vec!["weak (assessment)".into(), Value::Bool(r.weak_assessment_level)],
                vec!["weak (credal set)".into(), opt(r.weak_credal_level)],
                vec!["strong".into(), opt(r.strong)],
            ];
            if r.strong.is_none() {
                ctx.report.note("the assessment incurs a sure loss; credal-level notions are undefined");
            }
            for (name, w) in [
                ("weak (assessment)", &r.assessment_witness),
                ("weak (credal set)", &r.weak_witness),
                ("strong", &r.strong_witness),
            ] {
                if let Some(w) = w {
                    ctx.report.note(format!("{name}: {}", describe(w, &m)));
                }
            }
            Ok(ctx.render.table(vec!["notion".into(), "holds".into()], rows))
        }
    }
}

pub fn invnatex(ctx: &mut Ctx, model: &Path, monoid: &Path, gamble: &Path) -> Result<Value, CliError> {
    let a = ctx.model(model)?;
    let m = ctx.monoid(monoid, a.space())?;
    let g = ctx.gamble(gamble, a.space())?;
    Ok(ctx.render.rational(&strongly_invariant_natex(&a, &m, &g)?))
}

pub fn mixture(ctx: &mut Ctx, model: &Path, monoid: &Path, gamble: &Path, depth: usize) -> Result<Value, CliError> {
    let a = ctx.model(model)?;
    let m = ctx.monoid(monoid, a.space())?;
    let g = ctx.gamble(gamble, a.space())?;
    let v = mixture_lower_prevision(&a, &m, &g, depth)?;
    let trace: Vec<String> = v.trace.iter().map(to_exact_string).collect();
    ctx.report.note(format!("depth {}; best value by number of terms: {}", v.depth, trace.join(", ")));
    Ok(ctx.render.rational(&v.value))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum ShiftOp {
    Lnex,
    Unex,
    Lsamp,
    Usamp,
    Lres,
}

pub fn shift(ctx: &mut Ctx, gamble: &Path, op: ShiftOp, params: &ShiftParams) -> Result<Value, CliError> {
    let f = ctx.load(gamble)?.parse::<NatGambleJson>()?.to_nat_gamble()?;
    let v = match op {
        ShiftOp::Lnex => lnex_theta(&f, params),
        ShiftOp::Unex => unex_theta(&f, params),
        ShiftOp::Lsamp => lsamp_theta(&f, params),
        ShiftOp::Usamp => usamp_theta(&f, params),
        ShiftOp::Lres => lnex_res(&f, params),
    };
    ctx.report.exact = v.exact;
    if let Some(n) = v.window_length {
        ctx.report.note(format!("attained at window length {n}"));
    }
    if let Some(t) = v.truncation_used {
        ctx.report.note(format!("estimate from the first {t} entries"));
    }
    Ok(ctx.render.rational(&v.value))
}

pub fn exchange_update(ctx: &mut Ctx, scenario: &Path) -> Result<Value, CliError> {
    let s = ctx.load(scenario)?.parse::<ScenarioJson>()?;
    if s.observed.len() >= s.n_star {
        return Err(CliError::Input(format!(
            "observed: {} observations leave nothing to predict in an urn of {}",
            s.observed.len(),
            s.n_star
        )));
    }
    let counts = CountSpace::new(s.kappa, s.n_star)?;
    let l0 = s.count_prior.to_assessment(counts.space())?;
    let future = CategorySpace::new(s.kappa, s.n_star - s.observed.len())?;
    let g = s.query_gamble.to_gamble(future.space(), "query_gamble.values")?;
    Ok(ctx.render.rational(&predictive_update(&l0, s.kappa, &s.observed, &g)?))
}

pub fn choquet(ctx: &mut Ctx, set_function: &Path, gamble: &Path) -> Result<Value, CliError> {
    let json = ctx.load(set_function)?.parse::<SetFunctionJson>()?;
    let space = json.space()?;
    let s = SetFunction::new(&space, json.entries(&space)?)?;
    let g = ctx.gamble(gamble, &space)?;
    if !s.is_normalized() {
        ctx.report.note("the set function is not normalised (s(∅) = 0, s(𝒳) = 1)");
    }
    if !s.is_monotone() {
        ctx.report.note("the set function is not monotone");
    } else if !s.is_n_monotone(2) {
        ctx.report.note("the set function is not 2-monotone; the Choquet integral need not be coherent");
    }
    Ok(ctx.render.rational(&s.choquet_integral(&g)?))
}

/// Detects the kind of a file from its top-level keys and checks it fully.
pub fn validate(ctx: &mut Ctx, file: &Path) -> Result<Value, CliError> {
    let input = ctx.load(file)?;
    let json = input.json()?;
    let has = |k: &str| json.get(k).is_some();
    let kind = if has("items") || (has("space") && !has("events")) {
        input.parse::<AssessmentJson>()?.to_assessment()?;
        "assessment"
    } else if has("generators") {
        let m = input.parse::<MonoidJson>()?;
        let n = m.generators.iter().map(|g| g.map.len()).max().unwrap_or(1);
        m.to_monoid(&Space::range(n)?)?;
        "monoid"
    } else if has("kind") {
        input.parse::<NatGambleJson>()?.to_nat_gamble()?;
        "sequence gamble"
    } else if has("kappa") {
        let s = input.parse::<ScenarioJson>()?;
        let counts = CountSpace::new(s.kappa, s.n_star)?;
        s.count_prior.to_assessment(counts.space())?;
        "exchange scenario"
    } else if has("events") {
        let s = input.parse::<SetFunctionJson>()?;
        let space = s.space()?;
        SetFunction::new(&space, s.entries(&space)?)?;
        "set function"
    } else if has("values") {
        input.parse::<GambleJson>()?;
        "gamble"
    } else {
        return Err(CliError::Input(format!("{}: unrecognised document", input.path)));
    };
    ctx.report.note(format!("valid {kind}"));
    Ok(ctx.render.boolean(true))
}
