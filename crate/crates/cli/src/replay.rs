//! Worked examples replayed against the engine. Each check records the
//! expected and computed values; any mismatch fails the command.

use imprecise_core::exchange::{update_counts, CountSpace, CountVector};
use imprecise_core::invariance::{
    credal_weakly_invariant, invariant_previsions, invariant_previsions_exist, mixture_lower_prevision,
    strongly_invariant, StronglyInvariantNatex,
};
use imprecise_core::lowprev::{is_coherent, Assessment};
use imprecise_core::rational::{int, ratio, to_exact_string};
use imprecise_core::shift::{cesaro_mean, lnex_theta, quadratic_event, unex_theta, ShiftParams};
use imprecise_core::transforms::TransformationMonoid;
use imprecise_core::{Error, Event, Gamble, LowerPrevision, Prevision, Rational, Space, Transformation};
use serde_json::Value;

pub const NAMES: &[&str] = &[
    "dice",
    "two-elements",
    "six-elements",
    "not-directed",
    "not-2-monotone",
    "constant-maps",
    "quadratic-event",
    "urn",
];

pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
}

impl Check {
    pub fn ok(&self) -> bool {
        self.expected == self.actual
    }

    pub fn row(&self) -> Vec<Value> {
        vec![
            self.name.clone().into(),
            self.expected.clone().into(),
            self.actual.clone().into(),
            self.ok().into(),
        ]
    }
}

fn check(name: impl Into<String>, expected: impl ToString, actual: impl ToString) -> Check {
    Check {
        name: name.into(),
        expected: expected.to_string(),
        actual: actual.to_string(),
    }
}

fn rat(name: impl Into<String>, expected: &Rational, actual: &Rational) -> Check {
    check(name, to_exact_string(expected), to_exact_string(actual))
}

fn gamble(space: &Space, values: &[Rational]) -> Gamble {
    Gamble::new(space, values.to_vec()).expect("length matches")
}

fn ints(space: &Space, values: &[i64]) -> Gamble {
    Gamble::from_ints(space, values).expect("length matches")
}

/// Runs the named example; unknown names are an input error.
pub fn run(name: &str) -> Result<Vec<Check>, Error> {
    match name {
        "dice" => dice(),
        "two-elements" => two_elements(),
        "six-elements" => six_elements(),
        "not-directed" => not_directed(),
        "not-2-monotone" => not_two_monotone(),
        "constant-maps" => constant_maps(),
        "quadratic-event" => Ok(quadratic()),
        "urn" => urn(),
        "all" => {
            let mut all = Vec::new();
            for n in NAMES {
                all.extend(run(n)?.into_iter().map(|mut c| {
                    c.name = format!("{n}: {}", c.name);
                    c
                }));
            }
            Ok(all)
        }
        other => Err(Error::InvalidArgument(format!(
            "unknown example `{other}`; expected one of {} or all",
            NAMES.join(", ")
        ))),
    }
}

fn dice() -> Result<Vec<Check>, Error> {
    let dice = Space::new(["1", "2", "3", "4", "5", "6"])?;
    let mut checks = Vec::new();
    for p in [int(0), ratio(1, 12), ratio(1, 6), ratio(1, 5)] {
        let mut a = Assessment::vacuous(&dice);
        for x in 0..6 {
            a.push_event(&Event::from_indices(&dice, [x])?, p.clone())?;
        }
        checks.push(check(
            format!("singletons at {} coherent", to_exact_string(&p)),
            p <= ratio(1, 6),
            is_coherent(&a),
        ));
    }
    Ok(checks)
}

fn two_elements() -> Result<Vec<Check>, Error> {
    let s = Space::new(["1", "2"])?;
    let swap = TransformationMonoid::generated_by(&Transformation::swap(&s, 0, 1)?);
    let grid = [int(0), ratio(1, 2), int(1)];
    let mut checks = Vec::new();
    for eps in &grid {
        for alpha in [ratio(1, 4), ratio(1, 2)] {
            let mut a = Assessment::vacuous(&s);
            a.push_event(&Event::from_indices(&s, [0])?, eps * &alpha)?;
            a.push_event(&Event::from_indices(&s, [1])?, eps * (int(1) - &alpha))?;
            let tag = format!("ε={} α={}", to_exact_string(eps), to_exact_string(&alpha));
            let half = alpha == ratio(1, 2);
            checks.push(check(
                format!("{tag} weakly invariant"),
                half || *eps == int(0),
                credal_weakly_invariant(&a, &swap)?,
            ));
            checks.push(check(
                format!("{tag} strongly invariant"),
                half && *eps == int(1),
                strongly_invariant(&a, &swap)?,
            ));
        }
    }
    Ok(checks)
}

fn six_elements() -> Result<Vec<Check>, Error> {
    let dice = Space::new(["1", "2", "3", "4", "5", "6"])?;
    let swaps = [(0, 2), (2, 4), (1, 3), (3, 5)]
        .iter()
        .map(|&(a, b)| Transformation::swap(&dice, a, b))
        .collect::<Result<Vec<_>, _>>()?;
    let eo = TransformationMonoid::new(&dice, swaps)?;
    let e = StronglyInvariantNatex::new(&Assessment::vacuous(&dice), &eo)?;
    let mut checks = Vec::new();
    for (values, expected) in [
        (&[1, 2, 3, 4, 5, 6][..], int(3)),
        (&[6, 0, 0, 0, 0, 3][..], int(1)),
        (&[0, 9, -3, 0, 6, 0][..], int(1)),
    ] {
        let f = ints(&dice, values);
        checks.push(rat(format!("E{values:?}"), &expected, &e.lower(&f)?));
    }
    Ok(checks)
}

fn not_directed() -> Result<Vec<Check>, Error> {
    let s = Space::new(["1", "2", "3"])?;
    let m = TransformationMonoid::new(
        &s,
        vec![Transformation::new(&s, vec![0, 1, 1])?, Transformation::new(&s, vec![0, 2, 2])?],
    )?;
    let vacuous = Assessment::vacuous(&s);
    let mut checks = Vec::new();
    for values in [[3, 1, 2], [1, 5, -2], [0, -1, -4], [2, 2, 7]] {
        let f = ints(&s, &values);
        let expected = int(values[0].min(values[1].max(values[2])));
        let got = mixture_lower_prevision(&vacuous, &m, &f, 2)?.value;
        checks.push(rat(format!("mixture{values:?}"), &expected, &got));
    }
    let vertices: Vec<String> = invariant_previsions(&m)?.iter().map(|p| format!("{p:?}")).collect();
    let point = format!("{:?}", Prevision::point_mass(&s, 0)?);
    checks.push(check("invariant previsions", point, vertices.join(" ")));
    Ok(checks)
}

fn not_two_monotone() -> Result<Vec<Check>, Error> {
    let s = Space::new(["1", "2", "3", "4"])?;
    let pi = TransformationMonoid::generated_by(&Transformation::new(&s, vec![1, 0, 3, 2])?);
    let e = StronglyInvariantNatex::new(&Assessment::vacuous(&s), &pi)?;
    let f1 = ints(&s, &[0, -1, 1, -1]);
    let f2 = gamble(&s, &[int(-1), ratio(-1, 4), ratio(-3, 2), int(0)]);
    let lattice = e.lower(&f1.meet(&f2))? + e.lower(&f1.join(&f2))?;
    let sum = e.lower(&f1)? + e.lower(&f2)?;
    Ok(vec![
        rat("E(f1∧f2) + E(f1∨f2)", &ratio(-11, 8), &lattice),
        rat("E(f1) + E(f2)", &ratio(-5, 4), &sum),
    ])
}

fn constant_maps() -> Result<Vec<Check>, Error> {
    let s = Space::new(["1", "2", "3"])?;
    let mut generators = (0..3).map(|x| Transformation::constant(&s, x)).collect::<Result<Vec<_>, _>>()?;
    generators.push(Transformation::swap(&s, 0, 1)?);
    let m = TransformationMonoid::new(&s, generators)?;
    let mut lower = Assessment::vacuous(&s);
    lower.push_event(&Event::from_indices(&s, [0])?, ratio(1, 4))?;
    Ok(vec![
        check("vacuous weakly invariant", true, credal_weakly_invariant(&Assessment::vacuous(&s), &m)?),
        check("P({1}) ≥ 1/4 weakly invariant", false, credal_weakly_invariant(&lower, &m)?),
        check("invariant previsions exist", false, invariant_previsions_exist(&m)),
    ])
}

fn quadratic() -> Vec<Check> {
    let a = quadratic_event(10_000).expect("positive truncation");
    let params = ShiftParams::default();
    let mut checks = vec![
        rat("lower mean", &int(0), &lnex_theta(&a, &params).value),
        rat("upper mean", &int(1), &unex_theta(&a, &params).value),
    ];
    for m in [2i64, 10, 50, 90] {
        let n = (m * m - 1) as usize;
        let s = cesaro_mean(&a, n).expect("n ≥ 1");
        checks.push(rat(format!("S_{n}"), &ratio(m, 2 * (m + 1)), &s));
    }
    checks
}

fn urn() -> Result<Vec<Check>, Error> {
    let urn = CountSpace::new(2, 3)?;
    let uniform = Assessment::precise(&Prevision::uniform(urn.space()));
    let rest = CountSpace::new(2, 2)?;
    let next_is_one = Gamble::from_fn(rest.space(), |k| {
        let m = &rest.counts()[k];
        ratio(m.0[0] as i64, m.total() as i64)
    });
    let got = update_counts(&uniform, 2, &CountVector(vec![1, 0]), &next_is_one)?;
    Ok(vec![rat("next draw is type 1 after one type-1 draw", &ratio(2, 3), &got)])
}
