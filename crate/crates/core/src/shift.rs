//! Shift-invariant lower previsions on bounded sequences over ℕ.
//!
//! Sequences are finitely described by a [`NatGamble`]. On the structured
//! variants the functionals are evaluated exactly; on a [`NatGamble::Truncated`]
//! window they are replaced by finite-window estimates, which are always
//! flagged as inexact together with the window length and truncation used.
//!
//! The module also constructs the strongly `T`-invariant natural extension
//! on a finite space through Banach limits of the sequences `P(Tⁿ g)`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::invariance::{credal_weakly_invariant, StronglyInvariantNatex};
use crate::lowprev::Assessment;
use crate::rational::{int, mean, Rational};
use crate::space::{Gamble, Prevision, Transformation};
use crate::transforms::{pushforward_mass, TransformationMonoid};
use crate::Error;

/// A bounded sequence `f(0), f(1), ...` described by finitely many numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NatGamble {
    /// `values` followed by zeros.
    FinSupport(Vec<Rational>),
    /// `prefix` followed by an unspecified tail converging to `limit`.
    Convergent { prefix: Vec<Rational>, limit: Rational },
    /// `prefix` followed by `cycle` repeated forever.
    EventuallyPeriodic {
        prefix: Vec<Rational>,
        cycle: Vec<Rational>,
    },
    /// The first `window.len()` values of a sequence whose values all lie
    /// in `[lo, hi]`; nothing else is known.
    Truncated {
        window: Vec<Rational>,
        lo: Rational,
        hi: Rational,
    },
}

/// Result of a shift functional.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShiftValue {
    pub value: Rational,
    pub exact: bool,
    /// Window length (or residue modulus) attaining an inexact value.
    pub window_length: Option<usize>,
    /// Number of sequence entries an inexact value was computed from.
    pub truncation_used: Option<usize>,
}

impl ShiftValue {
    fn exact(value: Rational) -> Self {
        ShiftValue {
            value,
            exact: true,
            window_length: None,
            truncation_used: None,
        }
    }

    fn estimate(value: Rational, window_length: usize, truncation_used: usize) -> Self {
        ShiftValue {
            value,
            exact: false,
            window_length: Some(window_length),
            truncation_used: Some(truncation_used),
        }
    }
}

/// Evaluation parameters for truncated sequences.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ShiftParams {
    /// Largest window length for the moving-window functionals.
    pub n_max: usize,
    /// Use at most this many entries of a truncated window.
    pub truncation: Option<usize>,
    /// Largest residue modulus for the residue-set functional.
    pub m_max: usize,
}

impl Default for ShiftParams {
    fn default() -> Self {
        ShiftParams {
            n_max: 50,
            truncation: None,
            m_max: 100,
        }
    }
}

impl NatGamble {
    pub fn eventually_periodic(prefix: Vec<Rational>, cycle: Vec<Rational>) -> Result<Self, Error> {
        if cycle.is_empty() {
            return Err(Error::InvalidArgument("cycle must be nonempty".into()));
        }
        Ok(NatGamble::EventuallyPeriodic { prefix, cycle })
    }

    pub fn truncated(window: Vec<Rational>, lo: Rational, hi: Rational) -> Result<Self, Error> {
        if window.is_empty() {
            return Err(Error::InvalidArgument("window must be nonempty".into()));
        }
        if lo > hi || window.iter().any(|v| *v < lo || *v > hi) {
            return Err(Error::InvalidArgument("window values must lie within [lo, hi]".into()));
        }
        Ok(NatGamble::Truncated { window, lo, hi })
    }

    pub fn constant(value: Rational) -> Self {
        NatGamble::EventuallyPeriodic {
            prefix: Vec::new(),
            cycle: vec![value],
        }
    }

    /// Indicator of the residue set `{km + r : k ≥ 0}`.
    pub fn residue_indicator(m: usize, r: usize) -> Result<Self, Error> {
        if m == 0 || r >= m {
            return Err(Error::InvalidArgument("need 0 ≤ r < m".into()));
        }
        let mut cycle = vec![Rational::zero(); m];
        cycle[r] = Rational::one();
        NatGamble::eventually_periodic(Vec::new(), cycle)
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, NatGamble::Truncated { .. })
    }

    /// `f(n)` when it is determined by the description.
    pub fn value_at(&self, n: usize) -> Option<Rational> {
        match self {
            NatGamble::FinSupport(values) => Some(values.get(n).cloned().unwrap_or_else(Rational::zero)),
            NatGamble::Convergent { prefix, .. } => prefix.get(n).cloned(),
            NatGamble::EventuallyPeriodic { prefix, cycle } => Some(if n < prefix.len() {
                prefix[n].clone()
            } else {
                cycle[(n - prefix.len()) % cycle.len()].clone()
            }),
            NatGamble::Truncated { window, .. } => window.get(n).cloned(),
        }
    }

    /// Prefix and cycle of a finite-support or eventually periodic sequence.
    pub fn periodic_parts(&self) -> Option<(&[Rational], Vec<Rational>)> {
        match self {
            NatGamble::FinSupport(values) => Some((values, vec![Rational::zero()])),
            NatGamble::EventuallyPeriodic { prefix, cycle } => Some((prefix, cycle.clone())),
            _ => None,
        }
    }

    /// `liminf f(n)` for the exactly described variants.
    pub fn liminf(&self) -> Option<Rational> {
        match self {
            NatGamble::Convergent { limit, .. } => Some(limit.clone()),
            NatGamble::Truncated { .. } => None,
            _ => self.periodic_parts().and_then(|(_, c)| c.iter().min().cloned()),
        }
    }

    /// `limsup f(n)` for the exactly described variants.
    pub fn limsup(&self) -> Option<Rational> {
        match self {
            NatGamble::Convergent { limit, .. } => Some(limit.clone()),
            NatGamble::Truncated { .. } => None,
            _ => self.periodic_parts().and_then(|(_, c)| c.iter().max().cloned()),
        }
    }

    /// The limit of the sample means, which exists for every exact variant.
    fn exact_mean(&self) -> Option<Rational> {
        match self {
            NatGamble::FinSupport(_) => Some(Rational::zero()),
            NatGamble::Convergent { limit, .. } => Some(limit.clone()),
            NatGamble::EventuallyPeriodic { cycle, .. } => mean(cycle),
            NatGamble::Truncated { .. } => None,
        }
    }

    fn combine(&self, other: &NatGamble, op: impl Fn(&Rational, &Rational) -> Rational) -> Result<NatGamble, Error> {
        let ((pa, ca), (pb, cb)) = match (self.periodic_parts(), other.periodic_parts()) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                return Err(Error::InvalidArgument(
                    "arithmetic needs finite-support or eventually periodic sequences".into(),
                ))
            }
        };
        let prefix_len = pa.len().max(pb.len());
        let cycle_len = ca.len().lcm(&cb.len());
        let values: Vec<Rational> = (0..prefix_len + cycle_len)
            .map(|n| {
                let a = self.value_at(n).expect("periodic");
                let b = other.value_at(n).expect("periodic");
                op(&a, &b)
            })
            .collect();
        let (prefix, cycle) = values.split_at(prefix_len);
        NatGamble::eventually_periodic(prefix.to_vec(), cycle.to_vec())
    }

    pub fn add(&self, other: &NatGamble) -> Result<NatGamble, Error> {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &NatGamble) -> Result<NatGamble, Error> {
        self.combine(other, |a, b| a - b)
    }

    pub fn meet(&self, other: &NatGamble) -> Result<NatGamble, Error> {
        self.combine(other, |a, b| a.min(b).clone())
    }

    pub fn join(&self, other: &NatGamble) -> Result<NatGamble, Error> {
        self.combine(other, |a, b| a.max(b).clone())
    }

    pub fn neg(&self) -> NatGamble {
        let n = |v: &[Rational]| v.iter().map(|x| -x).collect::<Vec<_>>();
        match self {
            NatGamble::FinSupport(values) => NatGamble::FinSupport(n(values)),
            NatGamble::Convergent { prefix, limit } => NatGamble::Convergent {
                prefix: n(prefix),
                limit: -limit,
            },
            NatGamble::EventuallyPeriodic { prefix, cycle } => NatGamble::EventuallyPeriodic {
                prefix: n(prefix),
                cycle: n(cycle),
            },
            NatGamble::Truncated { window, lo, hi } => NatGamble::Truncated {
                window: n(window),
                lo: -hi,
                hi: -lo,
            },
        }
    }

    /// The shifted sequence `θᵗf = (f(1), f(2), ...)`.
    pub fn shift(&self) -> NatGamble {
        let tail = |v: &[Rational]| v.iter().skip(1).cloned().collect::<Vec<_>>();
        match self {
            NatGamble::FinSupport(values) => NatGamble::FinSupport(tail(values)),
            NatGamble::Convergent { prefix, limit } => NatGamble::Convergent {
                prefix: tail(prefix),
                limit: limit.clone(),
            },
            NatGamble::EventuallyPeriodic { prefix, cycle } if prefix.is_empty() => {
                let mut rotated = cycle.clone();
                rotated.rotate_left(1);
                NatGamble::EventuallyPeriodic {
                    prefix: Vec::new(),
                    cycle: rotated,
                }
            }
            NatGamble::EventuallyPeriodic { prefix, cycle } => NatGamble::EventuallyPeriodic {
                prefix: tail(prefix),
                cycle: cycle.clone(),
            },
            NatGamble::Truncated { window, lo, hi } => NatGamble::Truncated {
                window: tail(window),
                lo: lo.clone(),
                hi: hi.clone(),
            },
        }
    }
}

/// Indicator of `A = {n² + k : n ≥ 1, 0 ≤ k < n}` on `[0, truncation)`.
pub fn quadratic_event(truncation: usize) -> Result<NatGamble, Error> {
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let mut window = vec![Rational::zero(); truncation];
    let mut n = 1usize;
    while n * n < truncation {
        for x in n * n..(n * n + n).min(truncation) {
            window[x] = Rational::one();
        }
        n += 1;
    }
    NatGamble::truncated(window, Rational::zero(), Rational::one())
}

/// `κ(m, r) = N·m·φ(m, r) + r` with `φ(m, r) = m(m−1)/2 + r + 1`, for `0 ≤ r < m`.
pub fn kappa(big_n: u64, m: u64, r: u64) -> u64 {
    let phi = m * (m - 1) / 2 + r + 1;
    big_n * m * phi + r
}

/// Indicator of the complement of the `κ`-image on `[0, truncation)`.
pub fn residue_counterexample_event(big_n: u64, truncation: usize) -> Result<NatGamble, Error> {
    if big_n < 2 {
        return Err(Error::InvalidArgument("N must be at least 2".into()));
    }
    if truncation == 0 {
        return Err(Error::InvalidArgument("truncation must be at least 1".into()));
    }
    let mut window = vec![Rational::one(); truncation];
    let limit = truncation as u64;
    let mut m = 1u64;
    while kappa(big_n, m, 0) < limit {
        for r in 0..m {
            let k = kappa(big_n, m, r);
            if k >= limit {
                break;
            }
            window[k as usize] = Rational::zero();
        }
        m += 1;
    }
    NatGamble::truncated(window, Rational::zero(), Rational::one())
}

/// Truncated window as integers over a common denominator, when that fits.
struct ScaledWindow {
    values: Vec<i128>,
    denom: BigInt,
}

fn truncated_window<'a>(f: &'a NatGamble, params: &ShiftParams) -> Option<&'a [Rational]> {
    match f {
        NatGamble::Truncated { window, .. } => {
            let len = params.truncation.map_or(window.len(), |t| t.min(window.len()));
            Some(&window[..len])
        }
        _ => None,
    }
}

fn scale(window: &[Rational]) -> Option<ScaledWindow> {
    let denom = crate::rational::common_denominator(window);
    let bound = i128::MAX / (window.len() as i128 + 1);
    let values = window
        .iter()
        .map(|v| {
            let x = (v.numer() * (&denom / v.denom())).to_i128()?;
            (x.abs() <= bound).then_some(x)
        })
        .collect::<Option<Vec<_>>>()?;
    Some(ScaledWindow { values, denom })
}

fn prefix_sums(window: &[Rational]) -> Vec<Rational> {
    let mut sums = Vec::with_capacity(window.len() + 1);
    sums.push(Rational::zero());
    for v in window {
        let next = sums.last().expect("nonempty") + v;
        sums.push(next);
    }
    sums
}

/// `inf_k (1/n) Σ_{l<n} f(k+l)` over windows inside the truncation, for
/// `n = 1..=min(n_max, len)`. `None` for exactly described sequences.
pub fn window_infima(f: &NatGamble, params: &ShiftParams) -> Option<Vec<Rational>> {
    let window = truncated_window(f, params)?;
    let n_max = params.n_max.min(window.len());
    Some(match scale(window) {
        Some(scaled) => {
            let mut sums = vec![0i128; window.len() + 1];
            for (i, v) in scaled.values.iter().enumerate() {
                sums[i + 1] = sums[i] + v;
            }
            (1..=n_max)
                .map(|n| {
                    let best = (0..=window.len() - n)
                        .map(|k| sums[k + n] - sums[k])
                        .min()
                        .expect("n ≤ len");
                    Rational::new(BigInt::from(best), &scaled.denom * BigInt::from(n))
                })
                .collect()
        }
        None => {
            let sums = prefix_sums(window);
            (1..=n_max)
                .map(|n| {
                    let best = (0..=window.len() - n)
                        .map(|k| &sums[k + n] - &sums[k])
                        .min()
                        .expect("n ≤ len");
                    best / int(n as i64)
                })
                .collect()
        }
    })
}

fn sup_with_argmax(values: &[Rational]) -> (Rational, usize) {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    (values[best].clone(), best + 1)
}

/// The smallest strongly shift-invariant coherent lower prevision,
/// `lim_n inf_k (1/n) Σ_{l<n} f(k+l)`.
pub fn lnex_theta(f: &NatGamble, params: &ShiftParams) -> ShiftValue {
    if let Some(v) = f.exact_mean() {
        return ShiftValue::exact(v);
    }
    let infima = window_infima(f, params).expect("truncated");
    let used = truncated_window(f, params).expect("truncated").len();
    let (value, n) = sup_with_argmax(&infima);
    ShiftValue::estimate(value, n, used)
}

/// Conjugate upper prevision `−lnex_theta(−f)`.
pub fn unex_theta(f: &NatGamble, params: &ShiftParams) -> ShiftValue {
    let mut v = lnex_theta(&f.neg(), params);
    v.value = -v.value;
    v
}

/// Sample mean `S_n(f) = (1/n) Σ_{l<n} f(l)` when determined.
pub fn cesaro_mean(f: &NatGamble, n: usize) -> Option<Rational> {
    if n == 0 {
        return None;
    }
    let mut sum = Rational::zero();
    for l in 0..n {
        sum += f.value_at(l)?;
    }
    Some(sum / int(n as i64))
}

/// All sample means `S_1, ..., S_len` of a truncated window.
pub fn cesaro_means(f: &NatGamble, params: &ShiftParams) -> Option<Vec<Rational>> {
    let window = truncated_window(f, params)?;
    let sums = prefix_sums(window);
    Some(
        sums.iter()
            .enumerate()
            .skip(1)
            .map(|(n, s)| s / int(n as i64))
            .collect(),
    )
}

/// `liminf S_n(f)`. On a truncation of length `len` this is estimated by the
/// smallest `S_n` with `len/2 ≤ n ≤ len`.
pub fn lsamp_theta(f: &NatGamble, params: &ShiftParams) -> ShiftValue {
    sample_extreme(f, params, false)
}

/// `limsup S_n(f)`, estimated like [`lsamp_theta`] on a truncation.
pub fn usamp_theta(f: &NatGamble, params: &ShiftParams) -> ShiftValue {
    sample_extreme(f, params, true)
}

fn sample_extreme(f: &NatGamble, params: &ShiftParams, upper: bool) -> ShiftValue {
    if let Some(v) = f.exact_mean() {
        return ShiftValue::exact(v);
    }
    let means = cesaro_means(f, params).expect("truncated");
    let len = means.len();
    let start = (len / 2).max(1);
    let mut best = start;
    for n in start..=len {
        let better = if upper {
            means[n - 1] > means[best - 1]
        } else {
            means[n - 1] < means[best - 1]
        };
        if better {
            best = n;
        }
    }
    ShiftValue::estimate(means[best - 1].clone(), best, len)
}

/// `(1/m) Σ_{r<m} inf_k f(km + r)` for `m = 1..=m_max`; on a truncation the
/// infimum runs over the available `k`.
pub fn lnex_res_series(f: &NatGamble, params: &ShiftParams) -> Vec<Rational> {
    match f {
        NatGamble::Truncated { .. } => {
            let window = truncated_window(f, params).expect("truncated");
            let m_max = params.m_max.min(window.len());
            let scaled = scale(window);
            (1..=m_max)
                .map(|m| match &scaled {
                    Some(s) => {
                        let total: i128 = (0..m)
                            .map(|r| s.values[r..].iter().step_by(m).min().copied().expect("r < len"))
                            .sum();
                        Rational::new(BigInt::from(total), &s.denom * BigInt::from(m))
                    }
                    None => {
                        let total = (0..m).fold(Rational::zero(), |acc, r| {
                            acc + window[r..].iter().step_by(m).min().expect("r < len")
                        });
                        total / int(m as i64)
                    }
                })
                .collect()
        }
        NatGamble::Convergent { limit, .. } => vec![limit.clone(); params.m_max],
        _ => {
            let (prefix, cycle) = f.periodic_parts().expect("exact periodic");
            (1..=params.m_max)
                .map(|m| {
                    // Past the prefix, k ↦ f(km + r) has period dividing the cycle length.
                    let k_max = prefix.len() / m + cycle.len() + 1;
                    let total = (0..m).fold(Rational::zero(), |acc, r| {
                        let inf = (0..k_max)
                            .map(|k| f.value_at(k * m + r).expect("periodic"))
                            .min()
                            .expect("k_max ≥ 1");
                        acc + inf
                    });
                    total / int(m as i64)
                })
                .collect()
        }
    }
}

/// Natural extension of the residue-set assessments `P(R_m^r) = 1/m`.
/// Exact variants take the limit along multiples of the cycle length; a
/// truncation reports the value at the largest modulus evaluated.
pub fn lnex_res(f: &NatGamble, params: &ShiftParams) -> ShiftValue {
    if let Some(v) = f.exact_mean() {
        return ShiftValue::exact(v);
    }
    let series = lnex_res_series(f, params);
    let used = truncated_window(f, params).expect("truncated").len();
    let m = series.len();
    ShiftValue::estimate(series[m - 1].clone(), m, used)
}

/// The sequence `n ↦ P(lift(Tⁿ, g))`, eventually periodic because the
/// powers of a map on a finite space enter a cycle.
pub fn banach_sequence(p: &Prevision, t: &Transformation, g: &Gamble) -> Result<NatGamble, Error> {
    t.space().ensure_same(p.space())?;
    t.space().ensure_same(g.space())?;
    let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    let mut values = Vec::new();
    let mut power = Transformation::identity(t.space());
    let mut mass = p.mass().to_vec();
    loop {
        if let Some(&start) = seen.get(power.image()) {
            let cycle = values.split_off(start);
            return NatGamble::eventually_periodic(values, cycle);
        }
        seen.insert(power.image().to_vec(), values.len());
        values.push(g.dot(&mass));
        mass = pushforward_mass(t, &mass);
        power = t.compose(&power);
    }
}

/// `min_P lnex_theta(n ↦ P(lift(Tⁿ, g)))` over the credal vertices of a
/// credal-weakly `T`-invariant assessment, which equals its strongly
/// `T`-invariant natural extension at `g`.
pub fn banach_crosscheck(a: &Assessment, t: &Transformation, g: &Gamble) -> Result<Rational, Error> {
    let monoid = TransformationMonoid::generated_by(t);
    StronglyInvariantNatex::new(a, &monoid)?;
    if !credal_weakly_invariant(a, &monoid)? {
        return Err(Error::NotWeaklyInvariant);
    }
    let params = ShiftParams::default();
    let mut best: Option<Rational> = None;
    for p in a.credal_set().vertices()? {
        let v = lnex_theta(&banach_sequence(&p, t, g)?, &params).value;
        if best.as_ref().map_or(true, |b| v < *b) {
            best = Some(v);
        }
    }
    best.ok_or(Error::SureLoss)
}
