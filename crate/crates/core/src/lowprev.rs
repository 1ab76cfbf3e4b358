//! Lower previsions on finite domains: avoiding sure loss, coherence,
//! natural extension, credal sets, desirability and preference.
//!
//! An [`Assessment`] is a finite list of `(gamble, lower bound)` pairs. Its
//! [`CredalSet`] is the polytope of mass functions `p` with `p·f ≥ b` for
//! every item; all inference reduces to linear programs over that polytope.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::solver::{self, Constraint, LinearProgram, LpOutcome, LpResult, SimplexLp};
use crate::space::{Event, Gamble, LowerPrevision, Prevision, Space};
use crate::Error;

/// A lower prevision on a finite domain of gambles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assessment {
    space: Space,
    items: Vec<(Gamble, Rational)>,
}

impl Assessment {
    /// The empty assessment, whose natural extension is the vacuous model.
    pub fn vacuous(space: &Space) -> Self {
        Assessment {
            space: space.clone(),
            items: Vec::new(),
        }
    }

    pub fn new(space: &Space, items: Vec<(Gamble, Rational)>) -> Result<Self, Error> {
        let mut a = Assessment::vacuous(space);
        for (f, b) in items {
            a.push(f, b)?;
        }
        Ok(a)
    }

    pub fn push(&mut self, gamble: Gamble, lower: Rational) -> Result<(), Error> {
        self.space.ensure_same(gamble.space())?;
        self.items.push((gamble, lower));
        Ok(())
    }

    /// Adds the lower probability `lower` for `event`.
    pub fn push_event(&mut self, event: &Event, lower: Rational) -> Result<(), Error> {
        self.push(event.indicator(), lower)
    }

    /// Adds the items `(f, P(f))` and `(−f, −P(f))` pinning `f` to a precise value.
    pub fn push_precise(&mut self, gamble: Gamble, value: Rational) -> Result<(), Error> {
        let neg = -&gamble;
        self.push(gamble, value.clone())?;
        self.push(neg, -value)
    }

    /// The assessment pinning every singleton to the given mass.
    pub fn precise(prevision: &Prevision) -> Self {
        let space = prevision.space();
        let mut a = Assessment::vacuous(space);
        for (i, p) in prevision.mass().iter().enumerate() {
            let event = Event::from_indices(space, [i]).expect("index in range");
            a.push_precise(event.indicator(), p.clone())
                .expect("same space");
        }
        a
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn items(&self) -> &[(Gamble, Rational)] {
        &self.items
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Largest assessed bound for a gamble equal to `f`, if any.
    pub fn lower_of(&self, f: &Gamble) -> Option<&Rational> {
        self.items
            .iter()
            .filter(|(g, _)| g == f)
            .map(|(_, b)| b)
            .max()
    }

    pub fn credal_set(&self) -> CredalSet {
        CredalSet::from_assessment(self)
    }
}

/// The polytope of mass functions dominating an assessment.
#[derive(Clone, Debug)]
pub struct CredalSet {
    space: Space,
    constraints: Vec<Constraint>,
}

impl CredalSet {
    /// Builds one constraint per item; an item pair `(f, b)`, `(−f, −b)` is
    /// merged into the equality `p·f = b`.
    pub fn from_assessment(a: &Assessment) -> Self {
        let items = a.items();
        let mut used = vec![false; items.len()];
        let mut constraints = Vec::with_capacity(items.len());
        for i in 0..items.len() {
            if used[i] {
                continue;
            }
            used[i] = true;
            let (f, b) = &items[i];
            let neg_f = -f;
            let neg_b = -b;
            let partner = (i + 1..items.len())
                .find(|&j| !used[j] && items[j].0 == neg_f && items[j].1 == neg_b);
            let coeffs = f.values().to_vec();
            match partner {
                Some(j) => {
                    used[j] = true;
                    constraints.push(Constraint::eq(coeffs, b.clone()));
                }
                None => constraints.push(Constraint::ge(coeffs, b.clone())),
            }
        }
        CredalSet {
            space: a.space().clone(),
            constraints,
        }
    }

    pub fn full(space: &Space) -> Self {
        CredalSet {
            space: space.clone(),
            constraints: Vec::new(),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// Intersects with additional linear constraints on the mass vector.
    pub fn with_constraints(mut self, extra: impl IntoIterator<Item = Constraint>) -> Self {
        self.constraints.extend(extra);
        self
    }

    pub fn lp(&self, objective: &Gamble) -> SimplexLp {
        SimplexLp {
            n: self.space.size(),
            objective: objective.values().to_vec(),
            constraints: self.constraints.clone(),
        }
    }

    fn feasibility_lp(&self) -> SimplexLp {
        SimplexLp {
            n: self.space.size(),
            objective: vec![Rational::zero(); self.space.size()],
            constraints: self.constraints.clone(),
        }
    }

    pub fn contains(&self, mass: &[Rational]) -> bool {
        self.feasibility_lp().contains(mass)
    }

    pub fn is_empty(&self) -> bool {
        !solver::solve_min(&self.feasibility_lp()).is_feasible()
    }

    /// `min p·g` over the set together with a minimiser.
    pub fn minimize(&self, g: &Gamble) -> Result<(Rational, Prevision), Error> {
        self.space.ensure_same(g.space())?;
        match solver::solve_min(&self.lp(g)) {
            LpResult::Optimal { value, witness } => {
                Ok((value, Prevision::from_raw(&self.space, witness)))
            }
            LpResult::Infeasible => Err(Error::SureLoss),
        }
    }

    pub fn lower(&self, g: &Gamble) -> Result<Rational, Error> {
        self.minimize(g).map(|(v, _)| v)
    }

    /// Extreme points, lexicographically ordered. Empty when the set is.
    pub fn vertices(&self) -> Result<Vec<Prevision>, Error> {
        let points = solver::enumerate_vertices(&self.feasibility_lp())?;
        Ok(points
            .into_iter()
            .map(|p| Prevision::from_raw(&self.space, p))
            .collect())
    }
}

/// The natural extension of an assessment as a full lower prevision.
#[derive(Clone, Debug)]
pub struct NaturalExtension {
    credal: CredalSet,
}

impl NaturalExtension {
    /// Fails with [`Error::SureLoss`] if the assessment incurs sure loss.
    pub fn new(a: &Assessment) -> Result<Self, Error> {
        NaturalExtension::from_credal_set(a.credal_set())
    }

    pub fn from_credal_set(credal: CredalSet) -> Result<Self, Error> {
        if credal.is_empty() {
            return Err(Error::SureLoss);
        }
        Ok(NaturalExtension { credal })
    }

    pub fn credal_set(&self) -> &CredalSet {
        &self.credal
    }
}

impl LowerPrevision for NaturalExtension {
    fn space(&self) -> &Space {
        self.credal.space()
    }

    fn lower(&self, f: &Gamble) -> Result<Rational, Error> {
        self.credal.lower(f)
    }
}

pub fn avoids_sure_loss(a: &Assessment) -> bool {
    !a.credal_set().is_empty()
}

pub fn natural_extension(a: &Assessment, g: &Gamble) -> Result<Rational, Error> {
    a.credal_set().lower(g)
}

/// Coherent iff the natural extension reproduces every assessed bound.
pub fn is_coherent(a: &Assessment) -> bool {
    let credal = a.credal_set();
    if credal.is_empty() {
        return false;
    }
    a.items()
        .iter()
        .all(|(f, b)| credal.lower(f).map_or(false, |v| v == *b))
}

pub fn credal_vertices(a: &Assessment) -> Result<Vec<Prevision>, Error> {
    let vertices = a.credal_set().vertices()?;
    if vertices.is_empty() {
        return Err(Error::SureLoss);
    }
    Ok(vertices)
}

/// A finite set of gambles judged really desirable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesirableSet {
    space: Space,
    gambles: Vec<Gamble>,
}

impl DesirableSet {
    pub fn new(space: &Space, gambles: Vec<Gamble>) -> Result<Self, Error> {
        for g in &gambles {
            space.ensure_same(g.space())?;
        }
        Ok(DesirableSet {
            space: space.clone(),
            gambles,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn gambles(&self) -> &[Gamble] {
        &self.gambles
    }
}

/// `g ≥ Σ λ_k f_k` for some `λ ≥ 0`.
pub fn desirable_cone_contains(d: &DesirableSet, g: &Gamble) -> Result<bool, Error> {
    d.space.ensure_same(g.space())?;
    let k = d.gambles.len();
    let mut lp = LinearProgram::new(k);
    for x in 0..d.space.size() {
        let coeffs = d.gambles.iter().map(|f| f.value(x).clone()).collect();
        lp.constraints
            .push(Constraint::le(coeffs, g.value(x).clone()));
    }
    Ok(matches!(lp.minimize(), LpOutcome::Optimal { .. }))
}

/// False iff some `λ ≥ 0` makes `Σ λ_k f_k ≤ 0` with a strictly negative
/// coordinate. Decided by maximising the total negative slack
/// `Σ_x s_x` subject to `Σ λ_k f_k + s ≤ 0`, `s ≥ 0`, `Σ s ≤ 1`.
pub fn avoids_partial_loss(d: &DesirableSet) -> bool {
    let k = d.gambles.len();
    let n = d.space.size();
    let mut lp = LinearProgram::new(k + n);
    for x in 0..n {
        let mut coeffs: Vec<Rational> = d.gambles.iter().map(|f| f.value(x).clone()).collect();
        coeffs.resize(k + n, Rational::zero());
        coeffs[k + x] = Rational::one();
        lp.constraints.push(Constraint::le(coeffs, Rational::zero()));
    }
    let mut total = vec![Rational::zero(); k];
    total.resize(k + n, Rational::one());
    lp.constraints.push(Constraint::le(total, Rational::one()));
    for x in 0..n {
        lp.objective[k + x] = -Rational::one();
    }
    match lp.minimize() {
        LpOutcome::Optimal { value, .. } => !value.is_negative(),
        LpOutcome::Infeasible | LpOutcome::Unbounded => {
            unreachable!("the zero combination is feasible and the slack is bounded")
        }
    }
}

/// `f ≽ g` iff the natural extension of `f − g` is non-negative.
pub fn almost_prefers(a: &Assessment, f: &Gamble, g: &Gamble) -> Result<bool, Error> {
    Ok(!natural_extension(a, &(f - g))?.is_negative())
}

pub fn indifferent(a: &Assessment, f: &Gamble, g: &Gamble) -> Result<bool, Error> {
    Ok(almost_prefers(a, f, g)? && almost_prefers(a, g, f)?)
}

pub fn incomparable(a: &Assessment, f: &Gamble, g: &Gamble) -> Result<bool, Error> {
    Ok(!almost_prefers(a, f, g)? && !almost_prefers(a, g, f)?)
}
