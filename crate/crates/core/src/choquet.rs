//! Set functions on lattices of events: n-monotonicity, inner extension,
//! Choquet integration, possibility measures and the event-level test for
//! strong invariance.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use itertools::Itertools;
use num_traits::{One, Zero};

use crate::lowprev::{credal_vertices, Assessment};
use crate::rational::Rational;
use crate::space::{Event, Gamble, LowerPrevision, Prevision, Space, Transformation};
use crate::transforms::TransformationMonoid;
use crate::Error;

/// Largest space on which set functions over all events are built.
pub const ALL_EVENTS_CAP: usize = 12;

/// Largest space accepted by [`strong_invariance_on_events`].
pub const EVENT_INVARIANCE_CAP: usize = 8;

fn check_all_events(space: &Space, cap: usize) -> Result<(), Error> {
    if space.size() > cap {
        return Err(Error::CapExceeded {
            size: space.size(),
            cap,
        });
    }
    Ok(())
}

fn all_bits(space: &Space) -> u64 {
    (1u64 << space.size()) - 1
}

/// Real-valued function on a finite lattice of events containing `∅` and `𝒳`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunction {
    space: Space,
    values: BTreeMap<u64, Rational>,
}

impl SetFunction {
    /// Fails with [`Error::NotALattice`] unless the events contain `∅` and
    /// `𝒳` and are closed under union and intersection.
    pub fn new(space: &Space, entries: Vec<(Event, Rational)>) -> Result<Self, Error> {
        if space.size() > 63 {
            return Err(Error::CapExceeded {
                size: space.size(),
                cap: 63,
            });
        }
        let mut values = BTreeMap::new();
        for (event, value) in entries {
            space.ensure_same(event.space())?;
            if values.insert(event.bits(), value).is_some() {
                return Err(Error::InvalidArgument(alloc::format!("event {event:?} listed twice")));
            }
        }
        let s = SetFunction {
            space: space.clone(),
            values,
        };
        if !s.is_lattice() {
            return Err(Error::NotALattice);
        }
        Ok(s)
    }

    /// Set function on all events of a space of at most [`ALL_EVENTS_CAP`]
    /// outcomes.
    pub fn from_fn(space: &Space, mut f: impl FnMut(&Event) -> Rational) -> Result<Self, Error> {
        check_all_events(space, ALL_EVENTS_CAP)?;
        let values = (0..=all_bits(space))
            .map(|b| (b, f(&Event::from_bits(space, b))))
            .collect();
        Ok(SetFunction {
            space: space.clone(),
            values,
        })
    }

    pub fn probability(p: &Prevision) -> Result<Self, Error> {
        SetFunction::from_fn(p.space(), |a| p.probability(a))
    }

    pub fn vacuous(space: &Space) -> Self {
        let entries = [
            (0, Rational::zero()),
            (all_bits(space), Rational::one()),
        ];
        SetFunction {
            space: space.clone(),
            values: entries.into_iter().collect(),
        }
    }

    /// Belief function `A ↦ Σ_{B ⊆ A} m(B)` of a basic probability assignment.
    pub fn from_mobius(space: &Space, masses: &[(Event, Rational)]) -> Result<Self, Error> {
        for (b, _) in masses {
            space.ensure_same(b.space())?;
        }
        SetFunction::from_fn(space, |a| {
            masses
                .iter()
                .filter(|(b, _)| b.is_subset(a))
                .fold(Rational::zero(), |acc, (_, m)| acc + m)
        })
    }

    /// Lower probability `A ↦ E(I_A)` of a lower prevision on all events.
    pub fn restrict<L: LowerPrevision>(l: &L) -> Result<Self, Error> {
        let space = l.space().clone();
        check_all_events(&space, ALL_EVENTS_CAP)?;
        let values = (0..=all_bits(&space))
            .map(|b| Ok((b, l.lower(&Event::from_bits(&space, b).indicator())?)))
            .collect::<Result<_, Error>>()?;
        Ok(SetFunction { space, values })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn domain(&self) -> Vec<Event> {
        self.values.keys().map(|&b| Event::from_bits(&self.space, b)).collect()
    }

    pub fn entries(&self) -> Vec<(Event, Rational)> {
        self.values
            .iter()
            .map(|(&b, v)| (Event::from_bits(&self.space, b), v.clone()))
            .collect()
    }

    pub fn value(&self, a: &Event) -> Option<&Rational> {
        self.values.get(&a.bits())
    }

    /// Whether every event of the space is in the domain.
    pub fn is_total(&self) -> bool {
        self.space.size() < 64 && self.values.len() as u64 == all_bits(&self.space) + 1
    }

    fn is_lattice(&self) -> bool {
        let full = all_bits(&self.space);
        self.values.contains_key(&0)
            && self.values.contains_key(&full)
            && self.values.keys().tuple_combinations().all(|(a, b)| {
                self.values.contains_key(&(a | b)) && self.values.contains_key(&(a & b))
            })
    }

    /// `s(∅) = 0` and `s(𝒳) = 1`.
    pub fn is_normalized(&self) -> bool {
        self.values[&0].is_zero() && self.values[&all_bits(&self.space)].is_one()
    }

    pub fn is_monotone(&self) -> bool {
        self.values
            .iter()
            .tuple_combinations()
            .all(|((&a, va), (&b, vb))| {
                (a & !b != 0 || va <= vb) && (b & !a != 0 || vb <= va)
            })
    }

    /// Exhaustive check of `Σ_{I ⊆ {1..p}} (−1)^{|I|} s(A ∩ ⋂_{i∈I} A_i) ≥ 0`
    /// for all `p ≤ n` and all `A, A_1, …, A_p` in the domain.
    pub fn is_n_monotone(&self, n: usize) -> bool {
        self.n_monotonicity_violation(n).is_none()
    }

    /// The first `(A, [A_1, …, A_p])` violating n-monotonicity.
    pub fn n_monotonicity_violation(&self, n: usize) -> Option<(Event, Vec<Event>)> {
        for &a in self.values.keys() {
            // Intersecting with A keeps each A_i in the lattice, so it is
            // enough to range over the domain events below A.
            let below: Vec<u64> = self.values.keys().copied().filter(|&b| b & !a == 0).collect();
            for p in 1..=n {
                for tuple in below.iter().copied().combinations_with_replacement(p) {
                    let mut sum = Rational::zero();
                    for subset in 0u32..1 << p {
                        let meet = (0..p)
                            .filter(|i| subset >> i & 1 == 1)
                            .fold(a, |acc, i| acc & tuple[i]);
                        if subset.count_ones() % 2 == 0 {
                            sum += &self.values[&meet];
                        } else {
                            sum -= &self.values[&meet];
                        }
                    }
                    if sum < Rational::zero() {
                        let events = tuple.iter().map(|&b| Event::from_bits(&self.space, b)).collect();
                        return Some((Event::from_bits(&self.space, a), events));
                    }
                }
            }
        }
        None
    }

    /// `s_*(A) = max { s(B) : B in the domain, B ⊆ A }`.
    pub fn inner(&self, a: &Event) -> Rational {
        let a = a.bits();
        self.values
            .iter()
            .filter(|(&b, _)| b & !a == 0)
            .map(|(_, v)| v)
            .max()
            .cloned()
            .expect("the empty set is in the domain")
    }

    /// The inner set function on all events.
    pub fn inner_extension(&self) -> Result<SetFunction, Error> {
        SetFunction::from_fn(&self.space, |a| self.inner(a))
    }

    /// `inf f + ∫ s_*({f ≥ α}) dα`, as a telescoping sum over the distinct
    /// values of `f` in decreasing order.
    pub fn choquet_integral(&self, f: &Gamble) -> Result<Rational, Error> {
        self.space.ensure_same(f.space())?;
        let levels: Vec<&Rational> = f.values().iter().sorted_by(|a, b| b.cmp(a)).dedup().collect();
        let mut total = levels.last().map(|v| (*v).clone()).expect("spaces are nonempty");
        for pair in levels.windows(2) {
            let (hi, lo) = (pair[0], pair[1]);
            total += (hi - lo) * self.inner(&Event::level_set(f, hi));
        }
        Ok(total)
    }

    /// The event assessment `{(I_A, s(A))}` over the domain.
    pub fn to_assessment(&self) -> Assessment {
        let mut a = Assessment::vacuous(&self.space);
        for (event, value) in self.entries() {
            a.push_event(&event, value).expect("same space");
        }
        a
    }

    /// `s(A) ≤ s(T⁻¹(A))` for every domain event `A` whose preimage is also
    /// in the domain.
    pub fn is_weakly_invariant(&self, t: &Transformation) -> Result<bool, Error> {
        self.space.ensure_same(t.space())?;
        for (&a, va) in &self.values {
            let pre = t.preimage(&Event::from_bits(&self.space, a))?.bits();
            if let Some(vp) = self.values.get(&pre) {
                if va > vp {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Choquet functional of a set function; a coherent lower prevision when the
/// set function is a normalised 2-monotone lower probability.
impl LowerPrevision for SetFunction {
    fn space(&self) -> &Space {
        &self.space
    }

    fn lower(&self, f: &Gamble) -> Result<Rational, Error> {
        self.choquet_integral(f)
    }
}

/// `(E(f ∧ g) + E(f ∨ g), E(f) + E(g))`; 2-monotonicity of `E` on gambles
/// requires the first to be at least the second.
pub fn two_monotone_sums<L: LowerPrevision>(l: &L, f: &Gamble, g: &Gamble) -> Result<(Rational, Rational), Error> {
    let lattice = l.lower(&f.meet(g))? + l.lower(&f.join(g))?;
    let sum = l.lower(f)? + l.lower(g)?;
    Ok((lattice, sum))
}

/// Upper probability `Π(A) = max_{x ∈ A} λ(x)` of a possibility distribution.
pub fn possibility_upper(lambda: &Gamble, a: &Event) -> Result<Rational, Error> {
    lambda.space().ensure_same(a.space())?;
    Ok(a.members().map(|x| lambda.value(x)).max().cloned().unwrap_or_else(Rational::zero))
}

/// The conjugate lower probability `A ↦ 1 − Π(Aᶜ)` on all events.
pub fn necessity(lambda: &Gamble) -> Result<SetFunction, Error> {
    let mut err = None;
    let s = SetFunction::from_fn(lambda.space(), |a| {
        match possibility_upper(lambda, &a.complement()) {
            Ok(v) => Rational::one() - v,
            Err(e) => {
                err = Some(e);
                Rational::zero()
            }
        }
    })?;
    err.map_or(Ok(s), Err)
}

/// Whether every credal vertex gives each event the same probability as its
/// preimage under every generator.
pub fn strong_invariance_on_events(a: &Assessment, m: &TransformationMonoid) -> Result<bool, Error> {
    let space = a.space();
    space.ensure_same(m.space())?;
    check_all_events(space, EVENT_INVARIANCE_CAP)?;
    let vertices = credal_vertices(a)?;
    for b in 0..=all_bits(space) {
        let event = Event::from_bits(space, b);
        for t in m.generators() {
            let pre = t.preimage(&event)?;
            if vertices.iter().any(|p| p.probability(&event) != p.probability(&pre)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
