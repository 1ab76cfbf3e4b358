//! Transformation monoids on finite spaces: closure, structural flags,
//! invariant atoms and pushforwards of mass functions.

use alloc::collections::{BTreeSet, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::rational::Rational;
use crate::space::{Event, Gamble, Prevision, Space, Transformation};
use crate::Error;

/// Default cap on the number of closure elements.
pub const CLOSURE_CAP: usize = 10_000;

/// The monoid generated by a set of transformations.
#[derive(Clone, Debug)]
pub struct TransformationMonoid {
    space: Space,
    generators: Vec<Transformation>,
    elements: Vec<Transformation>,
    truncated: bool,
}

/// Breadth-first closure of `generators` under composition, identity first.
/// Stops with `truncated` set once more than `cap` elements would be needed.
pub fn closure(
    space: &Space,
    generators: Vec<Transformation>,
    cap: usize,
) -> Result<TransformationMonoid, Error> {
    for g in &generators {
        space.ensure_same(g.space())?;
    }
    let identity = Transformation::identity(space);
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    seen.insert(identity.image().to_vec());
    let mut elements = vec![identity];
    let mut queue = VecDeque::from([0usize]);
    let mut truncated = false;
    'bfs: while let Some(i) = queue.pop_front() {
        for g in &generators {
            let next = g.compose(&elements[i]);
            if seen.contains(next.image()) {
                continue;
            }
            if elements.len() >= cap {
                truncated = true;
                break 'bfs;
            }
            seen.insert(next.image().to_vec());
            queue.push_back(elements.len());
            elements.push(next);
        }
    }
    Ok(TransformationMonoid {
        space: space.clone(),
        generators,
        elements,
        truncated,
    })
}

impl TransformationMonoid {
    pub fn new(space: &Space, generators: Vec<Transformation>) -> Result<Self, Error> {
        closure(space, generators, CLOSURE_CAP)
    }

    /// The monoid `{Tⁿ : n ≥ 0}`.
    pub fn generated_by(t: &Transformation) -> Self {
        closure(t.space(), vec![t.clone()], CLOSURE_CAP).expect("single generator on its own space")
    }

    pub fn trivial(space: &Space) -> Self {
        closure(space, Vec::new(), CLOSURE_CAP).expect("no generators")
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn generators(&self) -> &[Transformation] {
        &self.generators
    }

    /// All distinct elements found, the identity first.
    pub fn elements(&self) -> &[Transformation] {
        &self.elements
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, t: &Transformation) -> bool {
        self.elements.iter().any(|e| e == t)
    }

    /// Elements as a complete closure, or an error if truncated.
    pub fn complete_elements(&self) -> Result<&[Transformation], Error> {
        if self.truncated {
            Err(Error::TruncatedClosure(self.elements.len()))
        } else {
            Ok(&self.elements)
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MonoidFlags {
    pub abelian: bool,
    pub group: bool,
    pub left_cancellable: bool,
    pub right_cancellable: bool,
}

/// Exhaustive structural classification of a complete closure.
pub fn classify(m: &TransformationMonoid) -> Result<MonoidFlags, Error> {
    let elements = m.complete_elements()?;
    let abelian = elements
        .iter()
        .enumerate()
        .all(|(i, s)| elements[i + 1..].iter().all(|t| s.compose(t) == t.compose(s)));
    let left_cancellable = elements
        .iter()
        .all(|t| elements.iter().any(|s| s.compose(t).is_identity()));
    let right_cancellable = elements
        .iter()
        .all(|t| elements.iter().any(|s| t.compose(s).is_identity()));
    Ok(MonoidFlags {
        abelian,
        group: left_cancellable && right_cancellable,
        left_cancellable,
        right_cancellable,
    })
}

/// Partition of a space into minimal invariant events.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantAtoms {
    space: Space,
    atoms: Vec<Vec<usize>>,
    atom_of: Vec<usize>,
}

impl InvariantAtoms {
    /// Connected components of the graph with edges `x — Tx` over the
    /// generators; atoms are ordered by their smallest member.
    pub fn from_generators(space: &Space, generators: &[Transformation]) -> Self {
        let n = space.size();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for t in generators {
            for x in 0..n {
                let (a, b) = (find(&mut parent, x), find(&mut parent, t.apply(x)));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut atoms: Vec<Vec<usize>> = Vec::new();
        let mut atom_of = vec![usize::MAX; n];
        let mut root_atom = vec![usize::MAX; n];
        for x in 0..n {
            let r = find(&mut parent, x);
            if root_atom[r] == usize::MAX {
                root_atom[r] = atoms.len();
                atoms.push(Vec::new());
            }
            atoms[root_atom[r]].push(x);
            atom_of[x] = root_atom[r];
        }
        InvariantAtoms {
            space: space.clone(),
            atoms,
            atom_of,
        }
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn atoms(&self) -> &[Vec<usize>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom_of(&self, outcome: usize) -> usize {
        self.atom_of[outcome]
    }

    pub fn events(&self) -> Vec<Event> {
        self.atoms
            .iter()
            .map(|a| Event::from_indices(&self.space, a.iter().copied()).expect("valid indices"))
            .collect()
    }

    /// True iff `f` is constant on every atom.
    pub fn is_constant_on_atoms(&self, f: &Gamble) -> bool {
        self.atoms
            .iter()
            .all(|a| a.iter().all(|&x| f.value(x) == f.value(a[0])))
    }

    /// The uniform mean of `f` over each atom.
    pub fn atom_means(&self, f: &Gamble) -> Vec<Rational> {
        self.atoms
            .iter()
            .map(|a| crate::rational::mean(a.iter().map(|&x| f.value(x))).expect("atoms are nonempty"))
            .collect()
    }
}

pub fn invariant_atoms(m: &TransformationMonoid) -> InvariantAtoms {
    InvariantAtoms::from_generators(&m.space, &m.generators)
}

/// `{Tx : T ∈ 𝒯}` over the computed closure.
pub fn orbit(m: &TransformationMonoid, x: usize) -> Vec<usize> {
    let set: BTreeSet<usize> = m.elements.iter().map(|t| t.apply(x)).collect();
    set.into_iter().collect()
}

/// True iff `f ∘ T = f` for every generator.
pub fn is_invariant_gamble(m: &TransformationMonoid, f: &Gamble) -> Result<bool, Error> {
    for t in &m.generators {
        if t.lift(f)? != *f {
            return Ok(false);
        }
    }
    Ok(true)
}

pub(crate) fn pushforward_mass(t: &Transformation, mass: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); mass.len()];
    for (x, p) in mass.iter().enumerate() {
        out[t.apply(x)] += p;
    }
    out
}

/// Image distribution `(Tp)(y) = Σ_{x : Tx = y} p(x)`.
pub fn pushforward(t: &Transformation, p: &Prevision) -> Result<Prevision, Error> {
    t.space().ensure_same(p.space())?;
    Ok(Prevision::from_raw(p.space(), pushforward_mass(t, p.mass())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use proptest::prelude::*;

    fn map(s: &Space, image: &[usize]) -> Transformation {
        Transformation::new(s, image.to_vec()).unwrap()
    }

    /// T₁ = (1,2,2), T₂ = (1,3,3) on {1,2,3}: the non-directed example.
    fn non_directed() -> TransformationMonoid {
        let s = Space::range(3).unwrap();
        TransformationMonoid::new(&s, vec![map(&s, &[0, 1, 1]), map(&s, &[0, 2, 2])]).unwrap()
    }

    #[test]
    fn closure_cases() {
        let s = Space::range(3).unwrap();
        let id = TransformationMonoid::new(&s, vec![Transformation::identity(&s)]).unwrap();
        assert_eq!(id.len(), 1);
        let rot = TransformationMonoid::new(&s, vec![map(&s, &[1, 2, 0])]).unwrap();
        assert_eq!(rot.len(), 3);
        let m = non_directed();
        assert_eq!(m.len(), 3);
        assert!(!m.is_truncated());
    }

    #[test]
    fn closure_truncates() {
        let s = Space::range(5).unwrap();
        let m = closure(&s, vec![map(&s, &[1, 2, 3, 4, 0]), map(&s, &[1, 0, 2, 3, 4])], 10).unwrap();
        assert!(m.is_truncated());
        assert_eq!(m.len(), 10);
        assert_eq!(classify(&m), Err(Error::TruncatedClosure(10)));
        let full = TransformationMonoid::new(&s, m.generators().to_vec()).unwrap();
        assert_eq!(full.len(), 120);
    }

    #[test]
    fn classify_cases() {
        let s = Space::range(3).unwrap();
        let s3 = TransformationMonoid::new(&s, vec![map(&s, &[1, 0, 2]), map(&s, &[1, 2, 0])]).unwrap();
        let flags = classify(&s3).unwrap();
        assert!(flags.group && !flags.abelian);
        let flags = classify(&non_directed()).unwrap();
        assert!(!flags.group && !flags.abelian);
        let m = non_directed();
        let (t1, t2) = (&m.generators()[0], &m.generators()[1]);
        assert_eq!(t1.compose(t2), *t1);
        assert_eq!(t2.compose(t1), *t2);
        let idem = TransformationMonoid::generated_by(&map(&s, &[0, 0, 2]));
        let flags = classify(&idem).unwrap();
        assert!(flags.abelian && !flags.left_cancellable && !flags.right_cancellable);
    }

    #[test]
    fn atoms_cases() {
        let s = Space::range(3).unwrap();
        let mut all: Vec<Transformation> = (0..3).map(|x| Transformation::constant(&s, x).unwrap()).collect();
        all.push(map(&s, &[1, 0, 2]));
        let m = TransformationMonoid::new(&s, all).unwrap();
        assert_eq!(invariant_atoms(&m).atoms(), &[vec![0, 1, 2]]);

        let six = Space::range(6).unwrap();
        let parity = TransformationMonoid::new(
            &six,
            vec![map(&six, &[2, 1, 4, 3, 0, 5]), map(&six, &[0, 3, 2, 5, 4, 1])],
        )
        .unwrap();
        assert_eq!(invariant_atoms(&parity).atoms(), &[vec![0, 2, 4], vec![1, 3, 5]]);

        let trivial = TransformationMonoid::trivial(&s);
        assert_eq!(invariant_atoms(&trivial).len(), 3);
    }

    #[test]
    fn group_atoms_are_orbits() {
        let s = Space::range(5).unwrap();
        let m = TransformationMonoid::new(&s, vec![map(&s, &[1, 0, 3, 4, 2])]).unwrap();
        let atoms = invariant_atoms(&m);
        for x in 0..5 {
            assert_eq!(orbit(&m, x), atoms.atoms()[atoms.atom_of(x)]);
        }
    }

    #[test]
    fn pushforward_cases() {
        let s = Space::range(3).unwrap();
        let p = Prevision::new(&s, vec![ratio(1, 2), ratio(1, 3), ratio(1, 6)]).unwrap();
        assert_eq!(pushforward(&Transformation::identity(&s), &p).unwrap(), p);
        let c = Transformation::constant(&s, 1).unwrap();
        assert_eq!(pushforward(&c, &p).unwrap().mass(), &[int(0), int(1), int(0)]);
    }

    fn mass3() -> impl Strategy<Value = Vec<Rational>> {
        proptest::collection::vec(0i64..6, 3).prop_map(|w| {
            let total: i64 = w.iter().sum::<i64>() + 3;
            w.iter().map(|&x| ratio(x + 1, total)).collect()
        })
    }

    fn map3() -> impl Strategy<Value = Transformation> {
        proptest::collection::vec(0usize..3, 3).prop_map(|v| map(&Space::range(3).unwrap(), &v))
    }

    fn gamble3() -> impl Strategy<Value = Gamble> {
        proptest::collection::vec(-5i64..=5, 3).prop_map(|v| Gamble::from_ints(&Space::range(3).unwrap(), &v).unwrap())
    }

    fn gens4() -> impl Strategy<Value = Vec<Transformation>> {
        proptest::collection::vec(proptest::collection::vec(0usize..4, 4), 0..3)
            .prop_map(|gs| gs.iter().map(|v| map(&Space::range(4).unwrap(), v)).collect())
    }

    proptest! {
        #[test]
        fn pushforward_duality(p in mass3(), t in map3(), f in gamble3()) {
            let s = f.space().clone();
            let p = Prevision::new(&s, p).unwrap();
            let lhs = pushforward(&t, &p).unwrap().expectation(&f).unwrap();
            prop_assert_eq!(lhs, p.expectation(&t.lift(&f).unwrap()).unwrap());
        }

        #[test]
        fn pushforward_composes(p in mass3(), s in map3(), t in map3()) {
            let p = Prevision::new(s.space(), p).unwrap();
            let lhs = pushforward(&s.compose(&t), &p).unwrap();
            let rhs = pushforward(&s, &pushforward(&t, &p).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn atoms_are_invariant_and_refine(gens in gens4(), extra in proptest::collection::vec(0usize..4, 4)) {
            let s = Space::range(4).unwrap();
            let m = TransformationMonoid::new(&s, gens.clone()).unwrap();
            let atoms = invariant_atoms(&m);
            for t in m.generators() {
                for a in atoms.events() {
                    prop_assert_eq!(t.preimage(&a).unwrap(), a);
                }
            }
            let mut more = gens;
            more.push(map(&s, &extra));
            let bigger = invariant_atoms(&TransformationMonoid::new(&s, more).unwrap());
            for a in atoms.atoms() {
                prop_assert!(a.iter().all(|&x| bigger.atom_of(x) == bigger.atom_of(a[0])));
            }
        }

        #[test]
        fn invariant_gambles_are_constant_on_atoms(gens in gens4(), v in proptest::collection::vec(0i64..2, 4)) {
            let s = Space::range(4).unwrap();
            let m = TransformationMonoid::new(&s, gens).unwrap();
            let f = Gamble::from_ints(&s, &v).unwrap();
            let atoms = invariant_atoms(&m);
            prop_assert_eq!(is_invariant_gamble(&m, &f).unwrap(), atoms.is_constant_on_atoms(&f));
        }
    }
}
