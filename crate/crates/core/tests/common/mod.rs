#![allow(dead_code)]

use imprecise_core::lowprev::{avoids_sure_loss, natural_extension, Assessment};
use imprecise_core::rational::{int, ratio};
use imprecise_core::transforms::TransformationMonoid;
use imprecise_core::{Gamble, Prevision, Rational, Space, Transformation};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rational(rng: &mut ChaCha8Rng, lo: i64, hi: i64, den: i64) -> Rational {
    ratio(rng.gen_range(lo * den..=hi * den), den)
}

pub fn gamble(rng: &mut ChaCha8Rng, space: &Space) -> Gamble {
    Gamble::from_fn(space, |_| rational(rng, -5, 5, 2))
}

pub fn prevision(rng: &mut ChaCha8Rng, space: &Space) -> Prevision {
    let weights: Vec<i64> = (0..space.size()).map(|_| rng.gen_range(0..6)).collect();
    let total: i64 = weights.iter().sum();
    if total == 0 {
        return Prevision::uniform(space);
    }
    Prevision::new(space, weights.iter().map(|&w| ratio(w, total)).collect()).unwrap()
}

/// An assessment that avoids sure loss: each bound sits at or below the
/// expectation under one of a few random previsions.
pub fn assessment(rng: &mut ChaCha8Rng, space: &Space, max_items: usize) -> Assessment {
    let anchors: Vec<Prevision> = (0..rng.gen_range(1..=3)).map(|_| prevision(rng, space)).collect();
    let mut a = Assessment::vacuous(space);
    for _ in 0..rng.gen_range(0..=max_items) {
        let g = gamble(rng, space);
        let best = anchors.iter().map(|p| p.expectation(&g).unwrap()).min().unwrap();
        let slack = ratio(rng.gen_range(0..3), 4);
        a.push(g, best - slack).unwrap();
    }
    debug_assert!(avoids_sure_loss(&a));
    a
}

/// Replaces every bound by its natural extension, which makes the
/// assessment coherent.
pub fn coherent(a: &Assessment) -> Assessment {
    let items = a
        .items()
        .iter()
        .map(|(g, _)| (g.clone(), natural_extension(a, g).unwrap()))
        .collect();
    Assessment::new(a.space(), items).unwrap()
}

pub fn transformation(rng: &mut ChaCha8Rng, space: &Space) -> Transformation {
    let n = space.size();
    Transformation::new(space, (0..n).map(|_| rng.gen_range(0..n)).collect()).unwrap()
}

pub fn permutation(rng: &mut ChaCha8Rng, space: &Space) -> Transformation {
    let mut image: Vec<usize> = (0..space.size()).collect();
    image.shuffle(rng);
    Transformation::new(space, image).unwrap()
}

pub fn monoid(rng: &mut ChaCha8Rng, space: &Space, generators: usize) -> TransformationMonoid {
    let gens = (0..generators)
        .map(|_| {
            if rng.gen_bool(0.5) {
                permutation(rng, space)
            } else {
                transformation(rng, space)
            }
        })
        .collect();
    TransformationMonoid::new(space, gens).unwrap()
}

/// Adds `Tᵗ g` with the bound of `g` for every item and closure element, so
/// that the assessment is weakly invariant.
pub fn orbit_closed(a: &Assessment, m: &TransformationMonoid) -> Assessment {
    let mut closed = Assessment::vacuous(a.space());
    for (g, b) in a.items() {
        for t in m.elements() {
            closed.push(t.lift(g).unwrap(), b.clone()).unwrap();
        }
    }
    closed
}

pub fn ints(space: &Space, values: &[i64]) -> Gamble {
    Gamble::new(space, values.iter().map(|&v| int(v)).collect()).unwrap()
}
