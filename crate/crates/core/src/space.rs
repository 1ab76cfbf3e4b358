//! Possibility spaces, gambles, events and transformations.
//!
//! A [`Space`] is an ordered list of distinct outcome labels. Gambles,
//! events, transformations and previsions all carry the space they live on
//! and store their data as arrays in the space's canonical order.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{int, Rational};
use crate::Error;

/// Finite possibility space with a stable outcome order.
#[derive(Clone)]
pub struct Space {
    labels: Arc<[String]>,
}

impl Space {
    pub fn new<I, S>(labels: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Space {
            labels: labels.into(),
        })
    }

    /// The space `{1, ..., n}` with decimal labels.
    pub fn range(n: usize) -> Result<Self, Error> {
        Space::new((1..=n).map(|i| i.to_string()))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<usize, Error> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub(crate) fn ensure_same(&self, other: &Space) -> Result<(), Error> {
        if self == other {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for Space {}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// Bounded real-valued function on a finite space, one value per outcome.
#[derive(Clone, PartialEq, Eq)]
pub struct Gamble {
    space: Space,
    values: Vec<Rational>,
}

impl Gamble {
    pub fn new(space: &Space, values: Vec<Rational>) -> Result<Self, Error> {
        if values.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                found: values.len(),
            });
        }
        Ok(Gamble {
            space: space.clone(),
            values,
        })
    }

    pub fn from_ints(space: &Space, values: &[i64]) -> Result<Self, Error> {
        Gamble::new(space, values.iter().map(|&v| int(v)).collect())
    }

    pub fn constant(space: &Space, value: Rational) -> Self {
        Gamble {
            space: space.clone(),
            values: alloc::vec![value; space.size()],
        }
    }

    pub fn zero(space: &Space) -> Self {
        Gamble::constant(space, Rational::zero())
    }

    pub fn from_fn(space: &Space, f: impl FnMut(usize) -> Rational) -> Self {
        Gamble {
            space: space.clone(),
            values: (0..space.size()).map(f).collect(),
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Rational> {
        self.values
    }

    pub fn value(&self, outcome: usize) -> &Rational {
        &self.values[outcome]
    }

    pub fn sup(&self) -> Rational {
        self.values.iter().max().cloned().expect("spaces are nonempty")
    }

    pub fn inf(&self) -> Rational {
        self.values.iter().min().cloned().expect("spaces are nonempty")
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `Σ_x p(x) f(x)` for a mass vector in canonical order.
    pub fn dot(&self, mass: &[Rational]) -> Rational {
        debug_assert_eq!(mass.len(), self.values.len());
        self.values
            .iter()
            .zip(mass)
            .fold(Rational::zero(), |acc, (f, p)| acc + f * p)
    }

    fn zip_with(&self, other: &Gamble, op: impl Fn(&Rational, &Rational) -> Rational) -> Gamble {
        assert!(
            self.space == other.space,
            "gamble operands live on different spaces"
        );
        Gamble {
            space: self.space.clone(),
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| op(a, b))
                .collect(),
        }
    }

    /// Point-wise minimum `f ∧ g`.
    pub fn meet(&self, other: &Gamble) -> Gamble {
        self.zip_with(other, |a, b| a.min(b).clone())
    }

    /// Point-wise maximum `f ∨ g`.
    pub fn join(&self, other: &Gamble) -> Gamble {
        self.zip_with(other, |a, b| a.max(b).clone())
    }

    pub fn scale(&self, factor: &Rational) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v * factor).collect(),
        }
    }

    /// `f ≥ 0` point-wise.
    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }
}

impl fmt::Debug for Gamble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::rational::fmt_list(&self.values))
    }
}

impl Add for &Gamble {
    type Output = Gamble;
    fn add(self, rhs: &Gamble) -> Gamble {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Gamble {
    type Output = Gamble;
    fn sub(self, rhs: &Gamble) -> Gamble {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Neg for &Gamble {
    type Output = Gamble;
    fn neg(self) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self.values.iter().map(|v| -v).collect(),
        }
    }
}

impl Mul<&Rational> for &Gamble {
    type Output = Gamble;
    fn mul(self, rhs: &Rational) -> Gamble {
        self.scale(rhs)
    }
}

/// Subset of a possibility space.
#[derive(Clone, PartialEq, Eq)]
pub struct Event {
    space: Space,
    mask: Vec<bool>,
}

impl Event {
    pub fn from_indices(space: &Space, members: impl IntoIterator<Item = usize>) -> Result<Self, Error> {
        let mut mask = alloc::vec![false; space.size()];
        for i in members {
            if i >= mask.len() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    len: mask.len(),
                });
            }
            mask[i] = true;
        }
        Ok(Event {
            space: space.clone(),
            mask,
        })
    }

    pub fn from_labels<S: AsRef<str>>(space: &Space, labels: &[S]) -> Result<Self, Error> {
        let indices = labels
            .iter()
            .map(|l| space.index_of(l.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Event::from_indices(space, indices)
    }

    pub fn from_mask(space: &Space, mask: Vec<bool>) -> Result<Self, Error> {
        if mask.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                found: mask.len(),
            });
        }
        Ok(Event {
            space: space.clone(),
            mask,
        })
    }

    /// Event whose members are the set bits of `bits`.
    pub(crate) fn from_bits(space: &Space, bits: u64) -> Event {
        Event {
            space: space.clone(),
            mask: (0..space.size()).map(|i| bits >> i & 1 == 1).collect(),
        }
    }

    pub(crate) fn bits(&self) -> u64 {
        self.mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    pub fn empty(space: &Space) -> Self {
        Event {
            space: space.clone(),
            mask: alloc::vec![false; space.size()],
        }
    }

    pub fn full(space: &Space) -> Self {
        Event {
            space: space.clone(),
            mask: alloc::vec![true; space.size()],
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn contains(&self, outcome: usize) -> bool {
        self.mask[outcome]
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.mask
            .iter()
            .enumerate()
            .filter_map(|(i, &m)| m.then_some(i))
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.mask.iter().any(|&m| m)
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn indicator(&self) -> Gamble {
        Gamble {
            space: self.space.clone(),
            values: self
                .mask
                .iter()
                .map(|&m| if m { Rational::one() } else { Rational::zero() })
                .collect(),
        }
    }

    pub fn complement(&self) -> Event {
        Event {
            space: self.space.clone(),
            mask: self.mask.iter().map(|m| !m).collect(),
        }
    }

    fn zip_with(&self, other: &Event, op: impl Fn(bool, bool) -> bool) -> Event {
        assert!(self.space == other.space, "events live on different spaces");
        Event {
            space: self.space.clone(),
            mask: self
                .mask
                .iter()
                .zip(&other.mask)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    pub fn union(&self, other: &Event) -> Event {
        self.zip_with(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Event) -> Event {
        self.zip_with(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Event) -> Event {
        self.zip_with(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.mask.iter().zip(&other.mask).all(|(&a, &b)| !a || b)
    }

    /// Level set `{x : f(x) ≥ level}`.
    pub fn level_set(f: &Gamble, level: &Rational) -> Event {
        Event {
            space: f.space.clone(),
            mask: f.values.iter().map(|v| v >= level).collect(),
        }
    }
}

impl fmt::Debug for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(self.members().map(|i| &self.space.labels[i]))
            .finish()
    }
}

/// Total map of a finite space into itself, stored as an index array.
#[derive(Clone, PartialEq, Eq)]
pub struct Transformation {
    space: Space,
    image: Vec<usize>,
}

impl Transformation {
    pub fn new(space: &Space, image: Vec<usize>) -> Result<Self, Error> {
        if image.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                found: image.len(),
            });
        }
        if let Some(&bad) = image.iter().find(|&&y| y >= space.size()) {
            return Err(Error::IndexOutOfRange {
                index: bad,
                len: space.size(),
            });
        }
        Ok(Transformation {
            space: space.clone(),
            image,
        })
    }

    pub fn identity(space: &Space) -> Self {
        Transformation {
            space: space.clone(),
            image: (0..space.size()).collect(),
        }
    }

    /// The constant map sending every outcome to `target`.
    pub fn constant(space: &Space, target: usize) -> Result<Self, Error> {
        Transformation::new(space, alloc::vec![target; space.size()])
    }

    /// Transposition of two outcomes.
    pub fn swap(space: &Space, a: usize, b: usize) -> Result<Self, Error> {
        let mut image: Vec<usize> = (0..space.size()).collect();
        if a >= image.len() || b >= image.len() {
            return Err(Error::IndexOutOfRange {
                index: a.max(b),
                len: image.len(),
            });
        }
        image.swap(a, b);
        Ok(Transformation {
            space: space.clone(),
            image,
        })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn apply(&self, outcome: usize) -> usize {
        self.image[outcome]
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &y)| i == y)
    }

    pub fn is_permutation(&self) -> bool {
        let mut seen = alloc::vec![false; self.image.len()];
        for &y in &self.image {
            if core::mem::replace(&mut seen[y], true) {
                return false;
            }
        }
        true
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Transformation) -> Transformation {
        assert!(self.space == other.space, "transformations live on different spaces");
        Transformation {
            space: self.space.clone(),
            image: other.image.iter().map(|&y| self.image[y]).collect(),
        }
    }

    pub fn power(&self, exponent: usize) -> Transformation {
        (0..exponent).fold(Transformation::identity(&self.space), |acc, _| self.compose(&acc))
    }

    /// Lifting `Tᵗf = f ∘ T`.
    pub fn lift(&self, f: &Gamble) -> Result<Gamble, Error> {
        self.space.ensure_same(&f.space)?;
        Ok(Gamble {
            space: self.space.clone(),
            values: self.image.iter().map(|&y| f.values[y].clone()).collect(),
        })
    }

    /// Inverse image `T⁻¹(A) = {x : Tx ∈ A}`.
    pub fn preimage(&self, event: &Event) -> Result<Event, Error> {
        self.space.ensure_same(&event.space)?;
        Ok(Event {
            space: self.space.clone(),
            mask: self.image.iter().map(|&y| event.mask[y]).collect(),
        })
    }
}

impl fmt::Debug for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{:?}", self.image)
    }
}

/// Probability mass function on a finite space (a coherent prevision).
#[derive(Clone, PartialEq, Eq)]
pub struct Prevision {
    space: Space,
    mass: Vec<Rational>,
}

impl Prevision {
    pub fn new(space: &Space, mass: Vec<Rational>) -> Result<Self, Error> {
        if mass.len() != space.size() {
            return Err(Error::LengthMismatch {
                expected: space.size(),
                found: mass.len(),
            });
        }
        if mass.iter().any(|p| p.is_negative()) {
            return Err(Error::InvalidArgument("negative probability mass".into()));
        }
        let total = mass.iter().fold(Rational::zero(), |acc, p| acc + p);
        if !total.is_one() {
            return Err(Error::InvalidArgument("probability masses must sum to one".into()));
        }
        Ok(Prevision {
            space: space.clone(),
            mass,
        })
    }

    pub(crate) fn from_raw(space: &Space, mass: Vec<Rational>) -> Self {
        Prevision {
            space: space.clone(),
            mass,
        }
    }

    pub fn uniform(space: &Space) -> Self {
        let p = Rational::one() / int(space.size() as i64);
        Prevision::from_raw(space, alloc::vec![p; space.size()])
    }

    pub fn point_mass(space: &Space, outcome: usize) -> Result<Self, Error> {
        if outcome >= space.size() {
            return Err(Error::IndexOutOfRange {
                index: outcome,
                len: space.size(),
            });
        }
        let mut mass = alloc::vec![Rational::zero(); space.size()];
        mass[outcome] = Rational::one();
        Ok(Prevision::from_raw(space, mass))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn mass(&self) -> &[Rational] {
        &self.mass
    }

    pub fn expectation(&self, f: &Gamble) -> Result<Rational, Error> {
        self.space.ensure_same(&f.space)?;
        Ok(f.dot(&self.mass))
    }

    pub fn probability(&self, event: &Event) -> Rational {
        event
            .members()
            .fold(Rational::zero(), |acc, i| acc + &self.mass[i])
    }
}

impl fmt::Debug for Prevision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P{}", crate::rational::fmt_list(&self.mass))
    }
}

/// A lower prevision defined on all gambles of a finite space.
pub trait LowerPrevision {
    fn space(&self) -> &Space;

    fn lower(&self, f: &Gamble) -> Result<Rational, Error>;

    /// Conjugate upper prevision `−L(−f)`.
    fn upper(&self, f: &Gamble) -> Result<Rational, Error> {
        Ok(-self.lower(&-f)?)
    }
}

impl<L: LowerPrevision + ?Sized> LowerPrevision for &L {
    fn space(&self) -> &Space {
        (**self).space()
    }
    fn lower(&self, f: &Gamble) -> Result<Rational, Error> {
        (**self).lower(f)
    }
}

pub fn conjugate_upper<L: LowerPrevision + ?Sized>(lower: &L, f: &Gamble) -> Result<Rational, Error> {
    lower.upper(f)
}

impl LowerPrevision for Prevision {
    fn space(&self) -> &Space {
        &self.space
    }
    fn lower(&self, f: &Gamble) -> Result<Rational, Error> {
        self.expectation(f)
    }
}

/// The vacuous lower prevision `inf f`, the model of complete ignorance.
#[derive(Clone, Debug)]
pub struct Vacuous(pub Space);

impl LowerPrevision for Vacuous {
    fn space(&self) -> &Space {
        &self.0
    }
    fn lower(&self, f: &Gamble) -> Result<Rational, Error> {
        self.0.ensure_same(f.space())?;
        Ok(f.inf())
    }
}

/// The conjugate functional `f ↦ −L(−f)` viewed as a functional in its own
/// right. Applying it twice gives back `L`.
#[derive(Clone, Debug)]
pub struct Conjugate<L>(pub L);

impl<L: LowerPrevision> LowerPrevision for Conjugate<L> {
    fn space(&self) -> &Space {
        self.0.space()
    }
    fn lower(&self, f: &Gamble) -> Result<Rational, Error> {
        self.0.upper(f)
    }
}
