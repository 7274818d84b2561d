//! Shared helpers for integration tests: bitmask oracles that do not go
//! through the library's event algebra.
#![allow(dead_code)]

use num_traits::Zero;
use pmp_core::action::{Action, Perm};
use pmp_core::gen;
use pmp_core::measure::{AtomSpace, Event};
use pmp_core::Q;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    gen::rng(seed)
}

pub fn mask_measure(w: &[Q], mask: u64) -> Q {
    (0..w.len()).filter(|i| mask >> i & 1 == 1).map(|i| &w[i]).sum()
}

pub fn mask_image(images: &[usize], mask: u64) -> u64 {
    (0..images.len()).filter(|i| mask >> i & 1 == 1).fold(0, |m, i| m | 1 << images[i])
}

pub fn mask_preimage(images: &[usize], mask: u64) -> u64 {
    (0..images.len()).filter(|&i| mask >> images[i] & 1 == 1).fold(0, |m, i| m | 1 << i)
}

pub fn to_mask(e: &Event) -> u64 {
    e.atoms().fold(0, |m, i| m | 1 << i)
}

pub fn from_mask(n: usize, mask: u64) -> Event {
    Event::from_atoms(n, (0..n).filter(|i| mask >> i & 1 == 1)).unwrap()
}

/// Random weighted action: a union of transitive pieces with random masses.
pub fn random_action(r: &mut ChaCha8Rng, max_atoms: usize, k: usize) -> Action {
    gen::equal_irs_pair(r, max_atoms, k).unwrap().0
}

/// Random space with a few weight classes and `k` permutations preserving them.
pub fn random_weighted_action(r: &mut ChaCha8Rng, n: usize, k: usize) -> Action {
    let (space, first) = gen::random_weighted_perm(r, n);
    let mut gens = vec![first];
    while gens.len() < k {
        // shuffle within the same weight classes
        let mut images: Vec<usize> = (0..n).collect();
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for x in 0..n {
            match classes.iter_mut().find(|c| space.weight(c[0]) == space.weight(x)) {
                Some(c) => c.push(x),
                None => classes.push(vec![x]),
            }
        }
        for c in &classes {
            let mut s = c.clone();
            for i in (1..s.len()).rev() {
                s.swap(i, r.gen_range(0..=i));
            }
            for (x, y) in c.iter().zip(s) {
                images[*x] = y;
            }
        }
        gens.push(Perm::from_images(images).unwrap());
    }
    gens.truncate(k);
    Action::with_default_names(space, gens).unwrap()
}

pub fn weights(space: &AtomSpace) -> Vec<Q> {
    space.weights().to_vec()
}

pub fn is_zero(x: &Q) -> bool {
    x.is_zero()
}
