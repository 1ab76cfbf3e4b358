//! Weak and strong invariance of lower previsions under transformation
//! monoids, the strongly invariant natural extension, mixture lower
//! previsions, and the atom representation for finite groups.
//!
//! All checks quantify over the generators of a monoid only: pushforwards
//! compose and liftings reverse order, so invariance under the generators
//! carries over to every element of the closure.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::lowprev::{Assessment, CredalSet, NaturalExtension};
use crate::rational::{int, Rational};
use crate::solver::Constraint;
use crate::space::{Gamble, LowerPrevision, Prevision, Space};
use crate::transforms::{self, classify, InvariantAtoms, TransformationMonoid};
use crate::Error;

/// True iff every lifted assessed gamble is assessed again with at least
/// the same bound.
pub fn assessment_weakly_invariant(a: &Assessment, m: &TransformationMonoid) -> bool {
    first_assessment_violation(a, m).is_none()
}

fn first_assessment_violation(a: &Assessment, m: &TransformationMonoid) -> Option<Witness> {
    for (item, (f, b)) in a.items().iter().enumerate() {
        for (generator, t) in m.generators().iter().enumerate() {
            let lifted = t.lift(f).ok()?;
            if a.lower_of(&lifted).map_or(true, |lb| lb < b) {
                return Some(Witness::Item { item, generator });
            }
        }
    }
    None
}

/// True iff `T ℳ ⊆ ℳ` for every generator, checked on the credal vertices.
pub fn credal_weakly_invariant(a: &Assessment, m: &TransformationMonoid) -> Result<bool, Error> {
    Ok(first_credal_violation(a, m, false)?.is_none())
}

/// True iff every credal vertex is a fixed point of every generator.
pub fn strongly_invariant(a: &Assessment, m: &TransformationMonoid) -> Result<bool, Error> {
    Ok(first_credal_violation(a, m, true)?.is_none())
}

fn first_credal_violation(
    a: &Assessment,
    m: &TransformationMonoid,
    strong: bool,
) -> Result<Option<Witness>, Error> {
    a.space().ensure_same(m.space())?;
    let credal = a.credal_set();
    let vertices = credal.vertices()?;
    if vertices.is_empty() {
        return Err(Error::SureLoss);
    }
    for vertex in &vertices {
        for (generator, t) in m.generators().iter().enumerate() {
            let image = transforms::pushforward_mass(t, vertex.mass());
            let ok = if strong {
                image == vertex.mass()
            } else {
                credal.contains(&image)
            };
            if !ok {
                return Ok(Some(Witness::Vertex {
                    vertex: vertex.clone(),
                    generator,
                }));
            }
        }
    }
    Ok(None)
}

/// First violation found, in canonical (item or vertex, generator) order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Item { item: usize, generator: usize },
    Vertex { vertex: Prevision, generator: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvarianceReport {
    pub weak_assessment_level: bool,
    /// `None` when the assessment incurs sure loss.
    pub weak_credal_level: Option<bool>,
    /// `None` when the assessment incurs sure loss.
    pub strong: Option<bool>,
    pub assessment_witness: Option<Witness>,
    pub weak_witness: Option<Witness>,
    pub strong_witness: Option<Witness>,
}

/// All invariance notions at once. For an assessment that incurs sure loss
/// only the assessment-level result is reported.
pub fn invariance_report(a: &Assessment, m: &TransformationMonoid) -> Result<InvarianceReport, Error> {
    let assessment_witness = first_assessment_violation(a, m);
    let mut report = InvarianceReport {
        weak_assessment_level: assessment_witness.is_none(),
        weak_credal_level: None,
        strong: None,
        assessment_witness,
        weak_witness: None,
        strong_witness: None,
    };
    match first_credal_violation(a, m, false) {
        Ok(w) => {
            report.weak_credal_level = Some(w.is_none());
            report.weak_witness = w;
        }
        Err(Error::SureLoss) => return Ok(report),
        Err(e) => return Err(e),
    }
    let w = first_credal_violation(a, m, true)?;
    report.strong = Some(w.is_none());
    report.strong_witness = w;
    Ok(report)
}

/// Rows `(Tp)(y) − p(y) = 0` for every generator `T` and outcome `y`.
pub fn invariance_constraints(m: &TransformationMonoid) -> Vec<Constraint> {
    let n = m.space().size();
    let mut rows = Vec::new();
    for t in m.generators() {
        for y in 0..n {
            let mut coeffs = vec![Rational::zero(); n];
            for x in 0..n {
                if t.apply(x) == y {
                    coeffs[x] += Rational::one();
                }
            }
            coeffs[y] -= Rational::one();
            if coeffs.iter().any(|c| !c.is_zero()) {
                rows.push(Constraint::eq(coeffs, Rational::zero()));
            }
        }
    }
    rows
}

fn invariant_polytope(m: &TransformationMonoid) -> CredalSet {
    CredalSet::full(m.space()).with_constraints(invariance_constraints(m))
}

pub fn invariant_previsions_exist(m: &TransformationMonoid) -> bool {
    !invariant_polytope(m).is_empty()
}

/// Extreme points of the set of invariant mass functions.
pub fn invariant_previsions(m: &TransformationMonoid) -> Result<Vec<Prevision>, Error> {
    invariant_polytope(m).vertices()
}

/// The smallest coherent, strongly invariant lower prevision dominating an
/// assessment.
#[derive(Clone, Debug)]
pub struct StronglyInvariantNatex {
    credal: CredalSet,
}

impl StronglyInvariantNatex {
    pub fn new(a: &Assessment, m: &TransformationMonoid) -> Result<Self, Error> {
        a.space().ensure_same(m.space())?;
        let base = a.credal_set();
        if base.is_empty() {
            return Err(Error::SureLoss);
        }
        let credal = base.with_constraints(invariance_constraints(m));
        if credal.is_empty() {
            return Err(Error::NoInvariantDominator);
        }
        Ok(StronglyInvariantNatex { credal })
    }

    pub fn credal_set(&self) -> &CredalSet {
        &self.credal
    }
}

impl LowerPrevision for StronglyInvariantNatex {
    fn space(&self) -> &Space {
        self.credal.space()
    }

    fn lower(&self, f: &Gamble) -> Result<Rational, Error> {
        self.credal.lower(f)
    }
}

pub fn strongly_invariant_natex(
    a: &Assessment,
    m: &TransformationMonoid,
    g: &Gamble,
) -> Result<Rational, Error> {
    StronglyInvariantNatex::new(a, m)?.lower(g)
}

/// Value of a mixture lower prevision at a finite depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixtureValue {
    pub value: Rational,
    pub depth: usize,
    /// Best value found using averages of at most `k + 1` terms; the
    /// sequence is non-decreasing and ends with `value`.
    pub trace: Vec<Rational>,
}

/// Supremum of `E(avg)` over the uniform averages `(1/k) Σ_i T_iᵗ g` of at
/// most `depth` closure elements (a multiset), where `E` is the natural
/// extension of `a`.
pub fn mixture_lower_prevision(
    a: &Assessment,
    m: &TransformationMonoid,
    g: &Gamble,
    depth: usize,
) -> Result<MixtureValue, Error> {
    if depth == 0 {
        return Err(Error::InvalidArgument("depth must be at least 1".into()));
    }
    a.space().ensure_same(m.space())?;
    let e = NaturalExtension::new(a)?;
    let elements = m.complete_elements()?;
    let lifts = elements
        .iter()
        .map(|t| t.lift(g))
        .collect::<Result<Vec<_>, _>>()?;
    let mut best: Option<Rational> = None;
    let mut trace = Vec::with_capacity(depth);
    for k in 1..=depth {
        let scale = Rational::one() / int(k as i64);
        for combo in (0..lifts.len()).combinations_with_replacement(k) {
            let sum = combo
                .iter()
                .fold(Gamble::zero(g.space()), |acc, &i| &acc + &lifts[i]);
            let value = e.lower(&sum.scale(&scale))?;
            if best.as_ref().map_or(true, |b| value > *b) {
                best = Some(value);
            }
        }
        trace.push(best.clone().expect("the identity is always a candidate"));
    }
    Ok(MixtureValue {
        value: best.expect("depth ≥ 1"),
        depth,
        trace,
    })
}

/// A lower prevision averaged over a finite group: `(1/|G|) Σ_π L(πᵗ g)`.
#[derive(Clone, Debug)]
pub struct Symmetrized<L> {
    inner: L,
    group: TransformationMonoid,
}

impl<L: LowerPrevision> Symmetrized<L> {
    pub fn new(inner: L, group: &TransformationMonoid) -> Result<Self, Error> {
        inner.space().ensure_same(group.space())?;
        if !classify(group)?.group {
            return Err(Error::NotAGroup);
        }
        Ok(Symmetrized {
            inner,
            group: group.clone(),
        })
    }
}

impl<L: LowerPrevision> LowerPrevision for Symmetrized<L> {
    fn space(&self) -> &Space {
        self.inner.space()
    }

    fn lower(&self, f: &Gamble) -> Result<Rational, Error> {
        let mut total = Rational::zero();
        for pi in self.group.elements() {
            total += self.inner.lower(&pi.lift(f)?)?;
        }
        Ok(total / int(self.group.len() as i64))
    }
}

pub fn symmetrize<L: LowerPrevision>(
    e: &L,
    group: &TransformationMonoid,
    g: &Gamble,
) -> Result<Rational, Error> {
    Symmetrized::new(e, group)?.lower(g)
}

/// A lower prevision on the invariant atoms, combined with the uniform
/// distribution inside each atom.
#[derive(Clone, Debug)]
pub struct AtomLowerPrevision {
    atoms: InvariantAtoms,
    quotient: Assessment,
    extension: NaturalExtension,
}

/// The space whose outcomes are the atoms, labelled `{a,b,...}`.
pub fn quotient_space(atoms: &InvariantAtoms) -> Space {
    let labels = atoms.atoms().iter().map(|atom| {
        let names: Vec<&str> = atom
            .iter()
            .map(|&x| atoms.space().labels()[x].as_str())
            .collect();
        format!("{{{}}}", names.join(","))
    });
    Space::new(labels.collect::<Vec<String>>()).expect("atoms are disjoint and nonempty")
}

/// The gamble on the quotient space whose value at an atom is the uniform
/// mean of `g` over that atom.
pub fn quotient_gamble(atoms: &InvariantAtoms, quotient: &Space, g: &Gamble) -> Result<Gamble, Error> {
    atoms.space().ensure_same(g.space())?;
    Gamble::new(quotient, atoms.atom_means(g))
}

impl AtomLowerPrevision {
    pub fn new(atoms: InvariantAtoms, quotient: Assessment) -> Result<Self, Error> {
        if quotient.space().size() != atoms.len() {
            return Err(Error::LengthMismatch {
                expected: atoms.len(),
                found: quotient.space().size(),
            });
        }
        let extension = NaturalExtension::new(&quotient)?;
        Ok(AtomLowerPrevision {
            atoms,
            quotient,
            extension,
        })
    }

    pub fn atoms(&self) -> &InvariantAtoms {
        &self.atoms
    }

    pub fn quotient(&self) -> &Assessment {
        &self.quotient
    }
}

impl LowerPrevision for AtomLowerPrevision {
    fn space(&self) -> &Space {
        self.atoms.space()
    }

    fn lower(&self, g: &Gamble) -> Result<Rational, Error> {
        let q = quotient_gamble(&self.atoms, self.quotient.space(), g)?;
        self.extension.lower(&q)
    }
}

pub fn atom_representation(l0: &AtomLowerPrevision, g: &Gamble) -> Result<Rational, Error> {
    l0.lower(g)
}

/// Quotient model of a strongly invariant assessment under a finite group.
///
/// Every dominating mass function is uniform on each atom, so `p·f` equals
/// the atom marginal applied to the atom means of `f`; each item `(f, b)`
/// therefore maps to `(atom means of f, b)` on the quotient space.
pub fn extract_atom_lowprev(a: &Assessment, g: &TransformationMonoid) -> Result<AtomLowerPrevision, Error> {
    if !classify(g)?.group {
        return Err(Error::NotAGroup);
    }
    if !strongly_invariant(a, g)? {
        return Err(Error::NotStronglyInvariant);
    }
    let atoms = transforms::invariant_atoms(g);
    let quotient = quotient_space(&atoms);
    let items = a
        .items()
        .iter()
        .map(|(f, b)| Ok((quotient_gamble(&atoms, &quotient, f)?, b.clone())))
        .collect::<Result<Vec<_>, Error>>()?;
    AtomLowerPrevision::new(atoms, Assessment::new(&quotient, items)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowprev::natural_extension;
    use crate::rational::ratio;
    use crate::space::{Event, Transformation, Vacuous};
    use proptest::prelude::*;

    fn map(s: &Space, image: &[usize]) -> Transformation {
        Transformation::new(s, image.to_vec()).unwrap()
    }

    fn g(s: &Space, v: &[i64]) -> Gamble {
        Gamble::from_ints(s, v).unwrap()
    }

    fn symmetric_group(s: &Space) -> TransformationMonoid {
        let n = s.size();
        let mut cycle: Vec<usize> = (1..n).collect();
        cycle.push(0);
        TransformationMonoid::new(s, vec![Transformation::swap(s, 0, 1).unwrap(), map(s, &cycle)]).unwrap()
    }

    fn parity_group() -> TransformationMonoid {
        let s = Space::range(6).unwrap();
        TransformationMonoid::new(&s, vec![map(&s, &[2, 1, 4, 3, 0, 5]), map(&s, &[0, 3, 2, 5, 4, 1])]).unwrap()
    }

    fn dice(p: Rational) -> Assessment {
        let s = Space::range(6).unwrap();
        let mut a = Assessment::vacuous(&s);
        for i in 0..6 {
            a.push_event(&Event::from_indices(&s, [i]).unwrap(), p.clone()).unwrap();
        }
        a
    }

    fn linear_vacuous(eps: &Rational, alpha: &Rational) -> Assessment {
        let s = Space::range(2).unwrap();
        let mut a = Assessment::vacuous(&s);
        a.push(g(&s, &[1, 0]), alpha * eps).unwrap();
        a.push(g(&s, &[0, 1]), (int(1) - alpha) * eps).unwrap();
        a
    }

    #[test]
    fn assessment_level_cases() {
        let s = Space::range(3).unwrap();
        let swap = TransformationMonoid::new(&s, vec![Transformation::swap(&s, 0, 1).unwrap()]).unwrap();
        assert!(assessment_weakly_invariant(&Assessment::vacuous(&s), &swap));
        let d = dice(ratio(1, 12));
        assert!(assessment_weakly_invariant(&d, &symmetric_group(d.space())));
        let mut a = Assessment::vacuous(&s);
        a.push(g(&s, &[1, 0, 0]), ratio(1, 2)).unwrap();
        assert!(!assessment_weakly_invariant(&a, &swap));
    }

    #[test]
    fn credal_level_cases() {
        let s = Space::range(3).unwrap();
        let swap = TransformationMonoid::new(&s, vec![Transformation::swap(&s, 0, 1).unwrap()]).unwrap();
        assert!(credal_weakly_invariant(&Assessment::vacuous(&s), &swap).unwrap());
        let uniform = Assessment::precise(&Prevision::uniform(&s));
        let constant = TransformationMonoid::new(&s, vec![Transformation::constant(&s, 0).unwrap()]).unwrap();
        assert!(!credal_weakly_invariant(&uniform, &constant).unwrap());
        let s2 = Space::range(2).unwrap();
        let swap2 = symmetric_group(&s2);
        for eps in [int(0), ratio(1, 3), int(1)] {
            assert!(credal_weakly_invariant(&linear_vacuous(&eps, &ratio(1, 2)), &swap2).unwrap());
        }
    }

    #[test]
    fn strong_cases() {
        let six = Space::range(6).unwrap();
        let uniform = Assessment::precise(&Prevision::uniform(&six));
        assert!(strongly_invariant(&uniform, &symmetric_group(&six)).unwrap());
        let s2 = Space::range(2).unwrap();
        assert!(!strongly_invariant(&Assessment::vacuous(&s2), &symmetric_group(&s2)).unwrap());
        let d = dice(ratio(1, 12));
        assert!(strongly_invariant(&d, &TransformationMonoid::trivial(d.space())).unwrap());
    }

    #[test]
    fn report_for_sure_loss_is_assessment_level_only() {
        let d = dice(ratio(1, 5));
        let r = invariance_report(&d, &symmetric_group(d.space())).unwrap();
        assert!(r.weak_assessment_level);
        assert_eq!((r.weak_credal_level, r.strong), (None, None));
    }

    #[test]
    fn report_witness_is_first_violation() {
        let s2 = Space::range(2).unwrap();
        let r = invariance_report(&Assessment::vacuous(&s2), &symmetric_group(&s2)).unwrap();
        assert_eq!(r.weak_credal_level, Some(true));
        assert_eq!(r.strong, Some(false));
        assert_eq!(
            r.strong_witness,
            Some(Witness::Vertex {
                vertex: Prevision::point_mass(&s2, 1).unwrap(),
                generator: 0
            })
        );
    }

    #[test]
    fn existence_cases() {
        let s = Space::range(4).unwrap();
        assert!(invariant_previsions_exist(&symmetric_group(&s)));
        let two_constants = TransformationMonoid::new(
            &s,
            vec![Transformation::constant(&s, 0).unwrap(), Transformation::constant(&s, 2).unwrap()],
        )
        .unwrap();
        assert!(!invariant_previsions_exist(&two_constants));
        let s3 = Space::range(3).unwrap();
        let nd = TransformationMonoid::new(&s3, vec![map(&s3, &[0, 1, 1]), map(&s3, &[0, 2, 2])]).unwrap();
        let v = invariant_previsions(&nd).unwrap();
        assert_eq!(v, vec![Prevision::point_mass(&s3, 0).unwrap()]);
    }

    #[test]
    fn invnatex_six_elements() {
        let m = parity_group();
        let s = m.space().clone();
        let f = g(&s, &[3, -6, 0, 6, 9, 3]);
        // odd mean 4, even mean 1
        assert_eq!(strongly_invariant_natex(&Assessment::vacuous(&s), &m, &f).unwrap(), int(1));
    }

    #[test]
    fn invnatex_double_transposition() {
        let s = Space::range(4).unwrap();
        let m = TransformationMonoid::new(&s, vec![map(&s, &[1, 0, 3, 2])]).unwrap();
        let f = g(&s, &[4, 0, -1, 7]);
        assert_eq!(strongly_invariant_natex(&Assessment::vacuous(&s), &m, &f).unwrap(), int(2));
    }

    #[test]
    fn invnatex_non_two_monotone_witness() {
        let s = Space::range(4).unwrap();
        let m = TransformationMonoid::new(&s, vec![map(&s, &[1, 0, 3, 2])]).unwrap();
        let e = StronglyInvariantNatex::new(&Assessment::vacuous(&s), &m).unwrap();
        let f1 = g(&s, &[0, -1, 1, -1]);
        let f2 = Gamble::new(&s, vec![int(-1), ratio(-1, 4), ratio(-3, 2), int(0)]).unwrap();
        let lhs = e.lower(&f1.meet(&f2)).unwrap() + e.lower(&f1.join(&f2)).unwrap();
        let rhs = e.lower(&f1).unwrap() + e.lower(&f2).unwrap();
        assert_eq!(lhs, ratio(-11, 8));
        assert_eq!(rhs, ratio(-5, 4));
    }

    #[test]
    fn invnatex_without_dominator() {
        let s = Space::range(2).unwrap();
        let c = TransformationMonoid::new(&s, vec![Transformation::constant(&s, 0).unwrap()]).unwrap();
        let mut a = Assessment::vacuous(&s);
        a.push(g(&s, &[0, 1]), ratio(1, 2)).unwrap();
        assert_eq!(
            strongly_invariant_natex(&a, &c, &g(&s, &[1, 0])),
            Err(Error::NoInvariantDominator)
        );
    }

    #[test]
    fn mixture_cases() {
        let s = Space::range(3).unwrap();
        let f = g(&s, &[2, -1, 5]);
        let d = Assessment::new(&s, vec![(g(&s, &[1, 2, 0]), int(1))]).unwrap();
        let trivial = TransformationMonoid::trivial(&s);
        assert_eq!(
            mixture_lower_prevision(&d, &trivial, &f, 3).unwrap().value,
            natural_extension(&d, &f).unwrap()
        );
        let nd = TransformationMonoid::new(&s, vec![map(&s, &[0, 1, 1]), map(&s, &[0, 2, 2])]).unwrap();
        let v = mixture_lower_prevision(&Assessment::vacuous(&s), &nd, &f, 1).unwrap();
        assert_eq!(v.value, int(2));
        let f = g(&s, &[4, -1, 5]);
        let v = mixture_lower_prevision(&Assessment::vacuous(&s), &nd, &f, 2).unwrap();
        assert_eq!(v.value, int(4));
        assert_eq!(v.trace.len(), 2);
    }

    #[test]
    fn mixture_single_transformation_reaches_cesaro_average() {
        let s = Space::range(3).unwrap();
        let t = map(&s, &[1, 2, 0]);
        let m = TransformationMonoid::generated_by(&t);
        let f = g(&s, &[3, 0, 0]);
        let v = mixture_lower_prevision(&Assessment::vacuous(&s), &m, &f, 3).unwrap();
        assert_eq!(v.trace, vec![int(0), int(0), int(1)]);
    }

    #[test]
    fn symmetrize_cases() {
        let s2 = Space::range(2).unwrap();
        let p = Prevision::point_mass(&s2, 0).unwrap();
        assert_eq!(symmetrize(&p, &symmetric_group(&s2), &g(&s2, &[4, 2])).unwrap(), int(3));
        let s3 = Space::range(3).unwrap();
        let f = g(&s3, &[5, -2, 1]);
        assert_eq!(symmetrize(&Vacuous(s3.clone()), &symmetric_group(&s3), &f).unwrap(), int(-2));
        let nd = TransformationMonoid::new(&s3, vec![map(&s3, &[0, 1, 1])]).unwrap();
        assert_eq!(symmetrize(&Vacuous(s3), &nd, &f).unwrap_err(), Error::NotAGroup);
    }

    #[test]
    fn atom_representation_cases() {
        let m = parity_group();
        let s = m.space().clone();
        let atoms = transforms::invariant_atoms(&m);
        let q = quotient_space(&atoms);
        assert_eq!(q.labels(), &["{1,3,5}", "{2,4,6}"]);
        let vacuous = AtomLowerPrevision::new(atoms.clone(), Assessment::vacuous(&q)).unwrap();
        let f = g(&s, &[3, -6, 0, 6, 9, 3]);
        assert_eq!(atom_representation(&vacuous, &f).unwrap(), int(1));

        let alpha = ratio(1, 4);
        let p0 = Prevision::new(&q, vec![alpha.clone(), int(1) - &alpha]).unwrap();
        let precise = AtomLowerPrevision::new(atoms, Assessment::precise(&p0)).unwrap();
        let v = f.values();
        let expected = &alpha / int(3) * (&v[0] + &v[2] + &v[4])
            + (int(1) - &alpha) / int(3) * (&v[1] + &v[3] + &v[5]);
        assert_eq!(atom_representation(&precise, &f).unwrap(), expected);

        let s3 = Space::range(3).unwrap();
        let full = transforms::invariant_atoms(&symmetric_group(&s3));
        let one = AtomLowerPrevision::new(full.clone(), Assessment::vacuous(&quotient_space(&full))).unwrap();
        let f3 = g(&s3, &[3, 0, 6]);
        assert_eq!(one.lower(&f3).unwrap(), int(3));
        assert_eq!(one.upper(&f3).unwrap(), int(3));
    }

    #[test]
    fn extraction_round_trip() {
        let m = parity_group();
        let s = m.space().clone();
        let mut a = Assessment::vacuous(&s);
        for (x, y) in [(0, 2), (2, 4), (1, 3), (3, 5)] {
            let diff = &Event::from_indices(&s, [x]).unwrap().indicator()
                - &Event::from_indices(&s, [y]).unwrap().indicator();
            a.push_precise(diff, int(0)).unwrap();
        }
        a.push_event(&Event::from_indices(&s, [0, 2, 4]).unwrap(), ratio(1, 3)).unwrap();
        let l0 = extract_atom_lowprev(&a, &m).unwrap();
        for v in [[1, 0, 0, 0, 0, 0], [3, -6, 0, 6, 9, 3], [0, 1, 0, 1, 0, 1]] {
            let f = g(&s, &v);
            assert_eq!(l0.lower(&f).unwrap(), natural_extension(&a, &f).unwrap());
        }
        assert_eq!(
            extract_atom_lowprev(&Assessment::vacuous(&s), &m).unwrap_err(),
            Error::NotStronglyInvariant
        );
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=3).prop_map(|(a, b)| ratio(a, b))
    }

    fn gamble3() -> impl Strategy<Value = Gamble> {
        proptest::collection::vec(small(), 3).prop_map(|v| Gamble::new(&Space::range(3).unwrap(), v).unwrap())
    }

    fn assessment3() -> impl Strategy<Value = Assessment> {
        proptest::collection::vec((gamble3(), small()), 0..4).prop_map(|items| {
            Assessment::new(&Space::range(3).unwrap(), items.into_iter().map(|(f, b)| (f, b / int(4))).collect()).unwrap()
        })
    }

    fn monoid3() -> impl Strategy<Value = TransformationMonoid> {
        proptest::collection::vec(proptest::collection::vec(0usize..3, 3), 0..3).prop_map(|gs| {
            let s = Space::range(3).unwrap();
            TransformationMonoid::new(&s, gs.iter().map(|v| map(&s, v)).collect()).unwrap()
        })
    }

    /// Closes an assessment under the lifts of a monoid's closure.
    fn orbit_closed(a: &Assessment, m: &TransformationMonoid) -> Assessment {
        let mut out = Assessment::vacuous(a.space());
        for (f, b) in a.items() {
            for t in m.elements() {
                out.push(t.lift(f).unwrap(), b.clone()).unwrap();
            }
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn strong_implies_weak(a in assessment3(), m in monoid3()) {
            prop_assume!(crate::lowprev::avoids_sure_loss(&a));
            if strongly_invariant(&a, &m).unwrap() {
                prop_assert!(credal_weakly_invariant(&a, &m).unwrap());
            }
        }

        #[test]
        fn natex_preserves_weak_invariance(a in assessment3(), m in monoid3(), f in gamble3()) {
            let closed = orbit_closed(&a, &m);
            prop_assume!(crate::lowprev::avoids_sure_loss(&closed));
            prop_assert!(assessment_weakly_invariant(&closed, &m));
            let e = NaturalExtension::new(&closed).unwrap();
            for t in m.generators() {
                prop_assert!(e.lower(&t.lift(&f).unwrap()).unwrap() >= e.lower(&f).unwrap());
            }
        }

        #[test]
        fn invnatex_dominates_natex(a in assessment3(), m in monoid3(), f in gamble3()) {
            let a = orbit_closed(&a, &m);
            prop_assume!(crate::lowprev::avoids_sure_loss(&a));
            let Ok(e) = StronglyInvariantNatex::new(&a, &m) else { return Ok(()); };
            let natex = natural_extension(&a, &f).unwrap();
            prop_assert!(e.lower(&f).unwrap() >= natex);
            let atoms = transforms::invariant_atoms(&m);
            let means = atoms.atom_means(&f);
            let invariant = Gamble::from_fn(a.space(), |x| means[atoms.atom_of(x)].clone());
            prop_assert_eq!(e.lower(&invariant).unwrap(), natural_extension(&a, &invariant).unwrap());
        }

        #[test]
        fn mixture_is_monotone_and_dominated(a in assessment3(), m in monoid3(), f in gamble3()) {
            prop_assume!(crate::lowprev::avoids_sure_loss(&a));
            prop_assume!(assessment_weakly_invariant(&a, &m));
            let v = mixture_lower_prevision(&a, &m, &f, 3).unwrap();
            prop_assert!(v.trace.windows(2).all(|w| w[0] <= w[1]));
            if let Ok(e) = StronglyInvariantNatex::new(&a, &m) {
                prop_assert!(v.value <= e.lower(&f).unwrap());
            }
        }

        #[test]
        fn dominance_preserves_strong_invariance(a in assessment3(), extra in assessment3(), m in monoid3()) {
            prop_assume!(crate::lowprev::avoids_sure_loss(&a));
            prop_assume!(strongly_invariant(&a, &m).unwrap());
            let mut tighter = a.clone();
            for (f, b) in extra.items() {
                tighter.push(f.clone(), b.clone()).unwrap();
            }
            prop_assume!(crate::lowprev::avoids_sure_loss(&tighter));
            prop_assert!(strongly_invariant(&tighter, &m).unwrap());
        }

        #[test]
        fn vertices_suffice_for_linear_equalities(a in assessment3(), m in monoid3(), w in proptest::collection::vec(1i64..5, 8)) {
            prop_assume!(crate::lowprev::avoids_sure_loss(&a));
            let vertices = a.credal_set().vertices().unwrap();
            let strong = strongly_invariant(&a, &m).unwrap();
            let weights: Vec<Rational> = w.iter().take(vertices.len()).map(|&x| int(x)).collect();
            let total = weights.iter().fold(Rational::zero(), |acc, x| acc + x);
            let mut mix = vec![Rational::zero(); 3];
            for (v, wt) in vertices.iter().zip(&weights) {
                for (m_i, p) in mix.iter_mut().zip(v.mass()) {
                    *m_i += wt * p / &total;
                }
            }
            if strong && vertices.len() <= weights.len() {
                for t in m.generators() {
                    prop_assert_eq!(transforms::pushforward_mass(t, &mix), mix.clone());
                }
            }
        }

        #[test]
        fn symmetrize_is_idempotent(a in assessment3(), f in gamble3()) {
            prop_assume!(crate::lowprev::avoids_sure_loss(&a));
            let s = a.space().clone();
            let group = symmetric_group(&s);
            let e = NaturalExtension::new(&a).unwrap();
            let once = Symmetrized::new(&e, &group).unwrap();
            let twice = Symmetrized::new(&once, &group).unwrap();
            prop_assert_eq!(once.lower(&f).unwrap(), twice.lower(&f).unwrap());
            let closed = orbit_closed(&a, &group);
            prop_assume!(crate::lowprev::avoids_sure_loss(&closed));
            let weak = NaturalExtension::new(&closed).unwrap();
            prop_assert_eq!(symmetrize(&weak, &group, &f).unwrap(), weak.lower(&f).unwrap());
        }
    }
}
