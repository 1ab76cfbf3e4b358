//! Exchangeability: count vectors, urn previsions, the representation of
//! exchangeable lower previsions and predictive updating with the
//! Generalised Bayes Rule.
//!
//! Sequences in `{1..κ}^N` are listed lexicographically; count vectors in
//! `𝒩^N_κ` are listed in colexicographic order, e.g. `(2,0), (1,1), (0,2)`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::invariance::strongly_invariant;
use crate::lowprev::{natural_extension, Assessment};
use crate::rational::{int, Rational};
use crate::solver::{self, LpResult, SimplexLp};
use crate::space::{Event, Gamble, Space, Transformation};
use crate::transforms::TransformationMonoid;
use crate::Error;

/// Default cap on the number of sequences `κ^N`.
pub const SEQUENCE_CAP: usize = 4096;

/// Numbers of occurrences of each category in a sample.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CountVector(pub Vec<usize>);

impl CountVector {
    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn kappa(&self) -> usize {
        self.0.len()
    }

    /// Component-wise `self ≤ other`.
    pub fn is_le(&self, other: &CountVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other − self`, when `self ≤ other`.
    pub fn residual(&self, other: &CountVector) -> Option<CountVector> {
        self.is_le(other)
            .then(|| CountVector(other.0.iter().zip(&self.0).map(|(b, a)| b - a).collect()))
    }

    pub fn label(&self) -> String {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        format!("({})", parts.join(","))
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// Multinomial coefficient `ν(m) = N! / (m_1! ⋯ m_κ!)`: the number of
/// sequences with count vector `m`.
pub fn atom_size(m: &CountVector) -> BigInt {
    m.0.iter()
        .fold(factorial(m.total()), |acc, &k| acc / factorial(k))
}

/// The count vector of a sequence with entries in `1..=κ`.
pub fn counting_map(x: &[usize], kappa: usize) -> Result<CountVector, Error> {
    let mut m = vec![0; kappa];
    for &v in x {
        if v == 0 || v > kappa {
            return Err(Error::InvalidArgument(format!(
                "sequence entry {v} outside 1..={kappa}"
            )));
        }
        m[v - 1] += 1;
    }
    Ok(CountVector(m))
}

/// All count vectors with `κ` categories summing to `n`, in colex order.
pub fn count_vectors(kappa: usize, n: usize) -> Vec<CountVector> {
    fn rec(kappa: usize, left: usize, tail: &mut Vec<usize>, out: &mut Vec<CountVector>) {
        if kappa == 1 {
            let mut m = vec![left];
            m.extend(tail.iter().rev());
            out.push(CountVector(m));
            return;
        }
        for last in 0..=left {
            tail.push(last);
            rec(kappa - 1, left - last, tail, out);
            tail.pop();
        }
    }
    let mut out = Vec::new();
    rec(kappa, n, &mut Vec::new(), &mut out);
    out
}

/// The space `𝒩^n_κ` of count vectors.
#[derive(Clone, Debug)]
pub struct CountSpace {
    kappa: usize,
    n: usize,
    counts: Vec<CountVector>,
    space: Space,
}

impl CountSpace {
    pub fn new(kappa: usize, n: usize) -> Result<Self, Error> {
        if kappa < 2 {
            return Err(Error::InvalidArgument("κ must be at least 2".into()));
        }
        let counts = count_vectors(kappa, n);
        let space = Space::new(counts.iter().map(CountVector::label))?;
        Ok(CountSpace {
            kappa,
            n,
            counts,
            space,
        })
    }

    pub fn kappa(&self) -> usize {
        self.kappa
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn counts(&self) -> &[CountVector] {
        &self.counts
    }

    pub fn index_of(&self, m: &CountVector) -> Result<usize, Error> {
        self.counts
            .iter()
            .position(|c| c == m)
            .ok_or_else(|| Error::InvalidCountVector(m.label()))
    }
}

/// The sequence space `{1..κ}^N` together with its count space.
#[derive(Clone, Debug)]
pub struct CategorySpace {
    counts: CountSpace,
    sequences: Vec<Vec<usize>>,
    count_of: Vec<usize>,
    space: Space,
}

impl CategorySpace {
    pub fn new(kappa: usize, n: usize) -> Result<Self, Error> {
        CategorySpace::with_cap(kappa, n, SEQUENCE_CAP)
    }

    pub fn with_cap(kappa: usize, n: usize, cap: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be at least 1".into()));
        }
        let counts = CountSpace::new(kappa, n)?;
        let size = u32::try_from(n)
            .ok()
            .and_then(|e| kappa.checked_pow(e))
            .unwrap_or(usize::MAX);
        if size > cap {
            return Err(Error::CapExceeded { size, cap });
        }
        let sequences: Vec<Vec<usize>> = (0..size)
            .map(|mut i| {
                let mut x = vec![0; n];
                for slot in x.iter_mut().rev() {
                    *slot = i % kappa + 1;
                    i /= kappa;
                }
                x
            })
            .collect();
        let count_of = sequences
            .iter()
            .map(|x| counts.index_of(&counting_map(x, kappa).expect("entries in range")))
            .collect::<Result<Vec<_>, _>>()?;
        let labels = sequences.iter().map(|x| {
            let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
            parts.join(",")
        });
        let space = Space::new(labels.collect::<Vec<_>>())?;
        Ok(CategorySpace {
            counts,
            sequences,
            count_of,
            space,
        })
    }

    pub fn kappa(&self) -> usize {
        self.counts.kappa
    }

    pub fn n(&self) -> usize {
        self.counts.n
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn count_space(&self) -> &CountSpace {
        &self.counts
    }

    pub fn sequences(&self) -> &[Vec<usize>] {
        &self.sequences
    }

    pub fn sequence_index(&self, x: &[usize]) -> Result<usize, Error> {
        self.sequences
            .iter()
            .position(|s| s == x)
            .ok_or_else(|| Error::InvalidArgument(format!("{x:?} is not a sequence of this space")))
    }

    /// Index in the count space of the count vector of each sequence.
    pub fn count_index_of(&self, sequence: usize) -> usize {
        self.count_of[sequence]
    }

    /// The sequences with count vector `m`: the invariant atom `[m]`.
    pub fn atom(&self, m: &CountVector) -> Result<Vec<usize>, Error> {
        let k = self.counts.index_of(m)?;
        Ok((0..self.sequences.len()).filter(|&i| self.count_of[i] == k).collect())
    }

    /// The map on sequences permuting positions by `sigma` (position `i`
    /// of the image holds entry `sigma[i]` of the original).
    fn position_permutation(&self, sigma: &[usize]) -> Transformation {
        let image = self
            .sequences
            .iter()
            .map(|x| {
                let y: Vec<usize> = sigma.iter().map(|&j| x[j]).collect();
                self.sequence_index(&y).expect("permuted sequences stay in the space")
            })
            .collect();
        Transformation::new(&self.space, image).expect("valid image")
    }

    /// Adjacent transpositions of positions plus the `N`-cycle.
    pub fn permutation_generators(&self) -> Vec<Transformation> {
        let n = self.n();
        let mut generators: Vec<Transformation> = Vec::new();
        let mut push = |t: Transformation| {
            if !t.is_identity() && !generators.contains(&t) {
                generators.push(t);
            }
        };
        for i in 0..n.saturating_sub(1) {
            let mut sigma: Vec<usize> = (0..n).collect();
            sigma.swap(i, i + 1);
            push(self.position_permutation(&sigma));
        }
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        push(self.position_permutation(&cycle));
        generators
    }

    pub fn permutation_group(&self) -> TransformationMonoid {
        TransformationMonoid::new(&self.space, self.permutation_generators()).expect("same space")
    }

    /// `m ↦ Pᵘ(f | m)`, the uniform atom means of a gamble on sequences.
    pub fn count_gamble(&self, f: &Gamble) -> Result<Gamble, Error> {
        self.space.ensure_same(f.space())?;
        let k = self.counts.counts.len();
        let mut sums = vec![Rational::zero(); k];
        let mut sizes = vec![0i64; k];
        for (i, v) in f.values().iter().enumerate() {
            sums[self.count_of[i]] += v;
            sizes[self.count_of[i]] += 1;
        }
        let values = sums.into_iter().zip(sizes).map(|(s, n)| s / int(n)).collect();
        Gamble::new(self.counts.space(), values)
    }

    /// `x ↦ h(counting_map(x))` for a gamble on count vectors.
    pub fn lift_count_gamble(&self, h: &Gamble) -> Result<Gamble, Error> {
        self.counts.space().ensure_same(h.space())?;
        Ok(Gamble::from_fn(&self.space, |i| h.value(self.count_of[i]).clone()))
    }

    /// The exchangeable model of `l0` as an assessment on sequences: the
    /// lifted count assessments plus `I_x − I_{πx}` pinned to zero for every
    /// sequence `x` and generator `π`.
    pub fn exchangeable_assessment(&self, l0: &Assessment) -> Result<Assessment, Error> {
        self.counts.space().ensure_same(l0.space())?;
        let mut a = Assessment::vacuous(&self.space);
        for (h, b) in l0.items() {
            a.push(self.lift_count_gamble(h)?, b.clone())?;
        }
        for pi in self.permutation_generators() {
            for x in 0..self.sequences.len() {
                let y = pi.apply(x);
                if x < y {
                    let diff = &indicator(&self.space, x) - &indicator(&self.space, y);
                    a.push_precise(diff, Rational::zero())?;
                }
            }
        }
        Ok(a)
    }
}

fn indicator(space: &Space, x: usize) -> Gamble {
    Event::from_indices(space, [x]).expect("index in range").indicator()
}

/// `Pᵘ(f | m) = (1/ν(m)) Σ_{x ∈ [m]} f(x)`.
pub fn uniform_given_count(cs: &CategorySpace, f: &Gamble, m: &CountVector) -> Result<Rational, Error> {
    let k = cs.counts.index_of(m)?;
    Ok(cs.count_gamble(f)?.value(k).clone())
}

/// `P(f) = E_{L0}(Pᵘ(f | ·))`.
pub fn exchangeable_from_counts(cs: &CategorySpace, l0: &Assessment, f: &Gamble) -> Result<Rational, Error> {
    natural_extension(l0, &cs.count_gamble(f)?)
}

/// Strong invariance under all permutations of positions.
pub fn is_exchangeable(cs: &CategorySpace, a: &Assessment) -> Result<bool, Error> {
    strongly_invariant(a, &cs.permutation_group())
}

/// Probability `ν(m* − m) / ν(m*)` of observing a given sample with counts
/// `m` when drawing without replacement from an urn with composition `m*`.
pub fn likelihood(m: &CountVector, m_star: &CountVector) -> Rational {
    match m.residual(m_star) {
        Some(rest) => Rational::new(atom_size(&rest), atom_size(m_star)),
        None => Rational::zero(),
    }
}

/// Lower prevision of `h(m* − m)` after observing a sample with counts `m`,
/// by the Generalised Bayes Rule: the infimum over the credal set of `l0` of
/// `P(L_m h̃) / P(L_m)`. `l0` lives on the count space of the full urn and `h`
/// on the count space of the unobserved remainder.
pub fn update_counts(l0: &Assessment, kappa: usize, m: &CountVector, h: &Gamble) -> Result<Rational, Error> {
    let (value, _) = update_counts_with_witness(l0, kappa, m, h)?;
    Ok(value)
}

pub(crate) fn update_counts_with_witness(
    l0: &Assessment,
    kappa: usize,
    m: &CountVector,
    h: &Gamble,
) -> Result<(Rational, Vec<Rational>), Error> {
    let n_star = infer_total(l0.space(), kappa)?;
    let prior = CountSpace::new(kappa, n_star)?;
    prior.space().ensure_same(l0.space())?;
    if m.kappa() != kappa || m.total() > n_star {
        return Err(Error::InvalidCountVector(m.label()));
    }
    let rest = CountSpace::new(kappa, n_star - m.total())?;
    rest.space().ensure_same(h.space())?;

    let mut numerator = Vec::with_capacity(prior.counts.len());
    let mut denominator = Vec::with_capacity(prior.counts.len());
    for m_star in &prior.counts {
        let l = likelihood(m, m_star);
        let tail = match m.residual(m_star) {
            Some(r) => h.value(rest.index_of(&r)?).clone(),
            None => Rational::zero(),
        };
        numerator.push(&l * tail);
        denominator.push(l);
    }
    let credal = l0.credal_set();
    let lp = SimplexLp {
        n: prior.counts.len(),
        objective: vec![Rational::zero(); prior.counts.len()],
        constraints: credal.constraints().to_vec(),
    };
    match solver::solve_fractional_min(&numerator, &denominator, &lp)? {
        LpResult::Optimal { value, witness } => Ok((value, witness)),
        LpResult::Infeasible => Err(Error::SureLoss),
    }
}

/// The urn size `n` for which `𝒩^n_κ` has the labels of `space`.
fn infer_total(space: &Space, kappa: usize) -> Result<usize, Error> {
    let first = space.labels().first().ok_or(Error::EmptySpace)?;
    let inner = first.trim_start_matches('(').trim_end_matches(')');
    let total = inner
        .split(',')
        .map(|p| p.parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|_| Error::InvalidCountVector(first.clone()))?;
    if total.len() != kappa {
        return Err(Error::InvalidCountVector(first.clone()));
    }
    Ok(total.iter().sum())
}

/// Lower prevision of a gamble `g` on the next `n'` observations after
/// observing the sequence `x`, under the exchangeable model with count
/// prior `l0` on the full urn of size `n* = n + n'`.
pub fn predictive_update(l0: &Assessment, kappa: usize, x: &[usize], g: &Gamble) -> Result<Rational, Error> {
    let m = counting_map(x, kappa)?;
    let n_star = infer_total(l0.space(), kappa)?;
    if x.len() > n_star {
        return Err(Error::InvalidArgument("more observations than the urn holds".into()));
    }
    let future = CategorySpace::new(kappa, n_star - x.len())?;
    let h = future.count_gamble(g)?;
    update_counts(l0, kappa, &m, &h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lowprev::{credal_vertices, NaturalExtension};
    use crate::rational::ratio;
    use crate::space::{LowerPrevision, Prevision};

    fn cv(v: &[usize]) -> CountVector {
        CountVector(v.to_vec())
    }

    #[test]
    fn counting() {
        assert_eq!(counting_map(&[1, 2, 1], 2).unwrap(), cv(&[2, 1]));
        assert_eq!(counting_map(&[3, 3, 3, 3], 3).unwrap(), cv(&[0, 0, 4]));
        assert_eq!(counting_map(&[2, 1, 1], 2).unwrap(), counting_map(&[1, 1, 2], 2).unwrap());
        assert!(counting_map(&[0], 2).is_err());
    }

    #[test]
    fn atom_sizes() {
        assert_eq!(atom_size(&cv(&[2, 1])), BigInt::from(3));
        assert_eq!(atom_size(&cv(&[4, 0, 0])), BigInt::from(1));
        for (kappa, n) in [(2, 3), (3, 4), (4, 2)] {
            let total: BigInt = count_vectors(kappa, n).iter().map(atom_size).sum();
            assert_eq!(total, BigInt::from(kappa.pow(n as u32)));
        }
    }

    #[test]
    fn colex_order() {
        assert_eq!(count_vectors(2, 2), vec![cv(&[2, 0]), cv(&[1, 1]), cv(&[0, 2])]);
        assert_eq!(
            count_vectors(3, 1),
            vec![cv(&[1, 0, 0]), cv(&[0, 1, 0]), cv(&[0, 0, 1])]
        );
    }

    #[test]
    fn sequence_space_layout() {
        let cs = CategorySpace::new(2, 2).unwrap();
        assert_eq!(cs.space().labels(), &["1,1", "1,2", "2,1", "2,2"]);
        assert_eq!(cs.atom(&cv(&[1, 1])).unwrap(), vec![1, 2]);
        assert_eq!(
            CategorySpace::new(2, 13).unwrap_err(),
            Error::CapExceeded { size: 8192, cap: 4096 }
        );
    }

    #[test]
    fn uniform_given_count_cases() {
        let cs = CategorySpace::new(2, 2).unwrap();
        let mu = Gamble::constant(cs.space(), ratio(5, 2));
        assert_eq!(uniform_given_count(&cs, &mu, &cv(&[1, 1])).unwrap(), ratio(5, 2));
        let x12 = indicator(cs.space(), cs.sequence_index(&[1, 2]).unwrap());
        assert_eq!(uniform_given_count(&cs, &x12, &cv(&[1, 1])).unwrap(), ratio(1, 2));
    }

    #[test]
    fn urn_draws_without_replacement() {
        // Drawing all three balls from an urn with two of type 1 and one of
        // type 2: the first draw is type 1 with probability 2/3.
        let cs = CategorySpace::new(2, 3).unwrap();
        let first_is_one = Gamble::from_fn(cs.space(), |i| {
            if cs.sequences()[i][0] == 1 { int(1) } else { int(0) }
        });
        assert_eq!(uniform_given_count(&cs, &first_is_one, &cv(&[2, 1])).unwrap(), ratio(2, 3));
    }

    #[test]
    fn exchangeable_from_counts_cases() {
        let cs = CategorySpace::new(2, 2).unwrap();
        let counts = cs.count_space().space().clone();
        let uniform = Assessment::precise(&Prevision::uniform(&counts));
        let x = indicator(cs.space(), cs.sequence_index(&[2, 1]).unwrap());
        // (1/3)·(1/ν((1,1)))
        assert_eq!(exchangeable_from_counts(&cs, &uniform, &x).unwrap(), ratio(1, 6));
        let f = Gamble::from_ints(cs.space(), &[3, 1, 5, 0]).unwrap();
        assert_eq!(exchangeable_from_counts(&cs, &Assessment::vacuous(&counts), &f).unwrap(), int(0));
        let model = cs.exchangeable_assessment(&uniform).unwrap();
        assert!(is_exchangeable(&cs, &model).unwrap());
    }

    #[test]
    fn exchangeability_checks() {
        let cs = CategorySpace::new(2, 2).unwrap();
        assert!(!is_exchangeable(&cs, &Assessment::vacuous(cs.space())).unwrap());
        let one = CategorySpace::new(3, 1).unwrap();
        assert!(is_exchangeable(&one, &Assessment::vacuous(one.space())).unwrap());
    }

    #[test]
    fn likelihood_cases() {
        assert_eq!(likelihood(&cv(&[1, 0]), &cv(&[2, 1])), ratio(2, 3));
        assert_eq!(likelihood(&cv(&[2, 1]), &cv(&[2, 1])), ratio(1, 3));
        assert_eq!(likelihood(&cv(&[0, 2]), &cv(&[2, 1])), int(0));
    }

    #[test]
    fn likelihood_normalises_over_samples() {
        // Summing the probability of every ordered sample of size n gives 1.
        for m_star in count_vectors(3, 4) {
            for n in 0..=4 {
                let sample = CategorySpace::new(3, n.max(1)).unwrap();
                let total = if n == 0 {
                    int(1)
                } else {
                    sample.sequences().iter().fold(Rational::zero(), |acc, x| {
                        acc + likelihood(&counting_map(x, 3).unwrap(), &m_star)
                    })
                };
                assert_eq!(total, int(1));
            }
        }
    }

    fn uniform_prior(kappa: usize, n_star: usize) -> Assessment {
        Assessment::precise(&Prevision::uniform(CountSpace::new(kappa, n_star).unwrap().space()))
    }

    #[test]
    fn worked_urn_update() {
        let rest = CountSpace::new(2, 1).unwrap();
        let next_is_one = indicator(rest.space(), 0);
        assert_eq!(update_counts(&uniform_prior(2, 2), 2, &cv(&[1, 0]), &next_is_one).unwrap(), ratio(2, 3));

        let future = CategorySpace::new(2, 2).unwrap();
        let g = Gamble::from_fn(future.space(), |i| {
            if future.sequences()[i][0] == 1 { int(1) } else { int(0) }
        });
        assert_eq!(predictive_update(&uniform_prior(2, 3), 2, &[1], &g).unwrap(), ratio(2, 3));
    }

    #[test]
    fn constant_query_is_unchanged() {
        let rest = CountSpace::new(2, 1).unwrap();
        let mu = Gamble::constant(rest.space(), ratio(-7, 5));
        assert_eq!(update_counts(&uniform_prior(2, 3), 2, &cv(&[1, 1]), &mu).unwrap(), ratio(-7, 5));
    }

    #[test]
    fn positivity_is_enforced() {
        let counts = CountSpace::new(2, 2).unwrap();
        let rest = CountSpace::new(2, 1).unwrap();
        let h = indicator(rest.space(), 0);
        assert_eq!(
            update_counts(&Assessment::vacuous(counts.space()), 2, &cv(&[1, 0]), &h),
            Err(Error::PositivityViolated)
        );
    }

    #[test]
    fn imprecise_update_matches_vertex_bayes() {
        // Urns of size 3 with at least two type-1 balls, all three with
        // lower probability 1/4.
        let counts = CountSpace::new(2, 3).unwrap();
        let mut l0 = Assessment::vacuous(counts.space());
        let at_least_two = Gamble::from_ints(counts.space(), &[1, 1, 0, 0]).unwrap();
        l0.push(at_least_two, int(1)).unwrap();
        l0.push(Gamble::from_ints(counts.space(), &[1, 0, 0, 0]).unwrap(), ratio(1, 4)).unwrap();
        let future = CategorySpace::new(2, 1).unwrap();
        let g = indicator(future.space(), 0);
        let x = [1, 1];
        let value = predictive_update(&l0, 2, &x, &g).unwrap();
        let m = cv(&[2, 0]);
        let h = future.count_gamble(&g).unwrap();
        let oracle = credal_vertices(&l0)
            .unwrap()
            .iter()
            .map(|p| {
                let (mut num, mut den) = (Rational::zero(), Rational::zero());
                for (k, m_star) in counts.counts().iter().enumerate() {
                    let l = likelihood(&m, m_star);
                    if let Some(r) = m.residual(m_star) {
                        num += &p.mass()[k] * &l * h.value(future.count_space().index_of(&r).unwrap());
                    }
                    den += &p.mass()[k] * l;
                }
                num / den
            })
            .min()
            .unwrap();
        assert_eq!(value, oracle);
        assert_eq!(value, ratio(1, 2));
    }

    #[test]
    fn quotient_round_trip() {
        let cs = CategorySpace::new(2, 3).unwrap();
        let counts = cs.count_space().space().clone();
        let mut l0 = Assessment::vacuous(&counts);
        l0.push(Gamble::from_ints(&counts, &[1, 0, 0, 1]).unwrap(), ratio(1, 3)).unwrap();
        l0.push(Gamble::from_ints(&counts, &[0, 2, -1, 0]).unwrap(), int(0)).unwrap();
        let model = cs.exchangeable_assessment(&l0).unwrap();
        let group = cs.permutation_group();
        let extracted = crate::invariance::extract_atom_lowprev(&model, &group).unwrap();
        let e0 = NaturalExtension::new(&l0).unwrap();
        for v in [[1, 0, 0, 0], [0, 3, -1, 2], [-1, 1, -1, 1]] {
            let h = Gamble::from_ints(&counts, &v).unwrap();
            let lifted = cs.lift_count_gamble(&h).unwrap();
            assert_eq!(extracted.lower(&lifted).unwrap(), e0.lower(&h).unwrap());
        }
    }
}
