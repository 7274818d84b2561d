//! Instance generators. Everything random is driven by a seeded ChaCha8 stream.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::action::{default_names, Action, Perm};
use crate::error::{Error, Result};
use crate::measure::AtomSpace;
use crate::rational::Q;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The rotation `x ↦ x + 1 mod n` on `n` uniform atoms.
pub fn cyclic(n: usize) -> Result<Action> {
    if n == 0 {
        return Err(Error::InvalidSpace("n must be at least 1".into()));
    }
    let p = Perm::from_images((0..n).map(|x| (x + 1) % n).collect())?;
    Action::with_default_names(AtomSpace::uniform(n), vec![p])
}

/// One generator whose cycles have the listed lengths, e.g. `"4,2,2"`, on
/// uniform atoms.
pub fn orbits(spec: &str) -> Result<Action> {
    let lens = spec
        .split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&l| l > 0))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::parse(1, format!("orbit spec `{spec}`: expected positive lengths like 4,2,2")))?;
    let n: usize = lens.iter().sum();
    let mut cycles = Vec::new();
    let mut start = 0;
    for l in lens {
        cycles.push((start..start + l).collect());
        start += l;
    }
    let p = Perm::from_cycles(n, &cycles)?;
    Action::with_default_names(AtomSpace::uniform(n), vec![p])
}

/// `k` independent uniform permutations of `n` uniform atoms.
pub fn random(n: usize, k: usize, seed: u64) -> Result<Action> {
    if n == 0 {
        return Err(Error::InvalidSpace("n must be at least 1".into()));
    }
    let mut r = rng(seed);
    let gens = (0..k).map(|_| random_perm(&mut r, n)).collect();
    Action::with_default_names(AtomSpace::uniform(n), gens)
}

/// Generators in cycle notation: `"a=(0 1 2);b=(0 1)(2 3)"`, optionally
/// with a leading `n=5;` to fix the number of atoms (otherwise the largest
/// id plus one). Atoms are uniform.
pub fn coset_action(spec: &str) -> Result<Action> {
    let bad = |m: String| Error::parse(1, format!("coset spec: {m}"));
    let mut n: Option<usize> = None;
    let mut named: Vec<(String, Vec<Vec<usize>>)> = Vec::new();
    for part in spec.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (name, body) = part.split_once('=').ok_or_else(|| bad(format!("`{part}` lacks `=`")))?;
        let (name, body) = (name.trim(), body.trim());
        if name == "n" {
            n = Some(body.parse().map_err(|_| bad(format!("`{body}` is not an atom count")))?);
            continue;
        }
        let mut cycles = Vec::new();
        let mut rest = body;
        while let Some(open) = rest.find('(') {
            if !rest[..open].trim().is_empty() {
                return Err(bad(format!("unexpected `{}` in generator {name}", rest[..open].trim())));
            }
            let close = rest[open..].find(')').ok_or_else(|| bad(format!("unclosed cycle in generator {name}")))? + open;
            let cycle = rest[open + 1..close]
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<usize>().map_err(|_| bad(format!("`{t}` is not an atom id"))))
                .collect::<Result<Vec<_>>>()?;
            cycles.push(cycle);
            rest = &rest[close + 1..];
        }
        if !rest.trim().is_empty() {
            return Err(bad(format!("unexpected `{}` in generator {name}", rest.trim())));
        }
        named.push((name.to_string(), cycles));
    }
    let max = named.iter().flat_map(|(_, cs)| cs.iter().flatten()).max().map_or(0, |&m| m + 1);
    let n = n.unwrap_or(max.max(1));
    if n == 0 || max > n {
        return Err(bad(format!("atom ids need n ≥ {max}")));
    }
    let gens = named
        .iter()
        .map(|(_, cs)| Perm::from_cycles(n, cs))
        .collect::<Result<Vec<_>>>()?;
    let names = named.into_iter().map(|(name, _)| name).collect();
    Action::new(AtomSpace::uniform(n), names, gens)
}

pub fn random_perm<R: Rng>(r: &mut R, n: usize) -> Perm {
    let mut images: Vec<usize> = (0..n).collect();
    images.shuffle(r);
    Perm::from_images(images).unwrap()
}

/// A random space with a few distinct weights and a permutation preserving
/// them: atoms are split into weight classes and shuffled within each.
pub fn random_weighted_perm<R: Rng>(r: &mut R, n: usize) -> (AtomSpace, Perm) {
    let classes = r.gen_range(1..=n.clamp(1, 4));
    let class_of: Vec<usize> = (0..n).map(|x| if x < classes { x } else { r.gen_range(0..classes) }).collect();
    let raw: Vec<i64> = (0..classes).map(|_| r.gen_range(1..=5)).collect();
    let total: i64 = class_of.iter().map(|&c| raw[c]).sum();
    let weights = class_of.iter().map(|&c| Q::new(raw[c].into(), total.into())).collect();
    let mut images: Vec<usize> = (0..n).collect();
    for c in 0..classes {
        let members: Vec<usize> = (0..n).filter(|&x| class_of[x] == c).collect();
        let mut shuffled = members.clone();
        shuffled.shuffle(r);
        for (x, y) in members.into_iter().zip(shuffled) {
            images[x] = y;
        }
    }
    (AtomSpace::new(weights).unwrap(), Perm::from_images(images).unwrap())
}

/// A random transitive action of `k` generators on `m` atoms.
fn random_transitive<R: Rng>(r: &mut R, m: usize, k: usize) -> Vec<Perm> {
    loop {
        let gens: Vec<Perm> = (0..k).map(|_| random_perm(r, m)).collect();
        if k == 0 {
            return gens;
        }
        let mut seen = vec![false; m];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for g in &gens {
                let y = g.apply(x);
                if !std::mem::replace(&mut seen[y], true) {
                    stack.push(y);
                }
            }
        }
        if seen.iter().all(|&s| s) || m == 1 {
            return gens;
        }
    }
}

/// Disjoint union of transitive pieces with masses, atoms shuffled.
fn assemble<R: Rng>(r: &mut R, pieces: &[(Vec<Perm>, Q)], k: usize) -> Result<Action> {
    let n: usize = pieces.iter().map(|(g, _)| g.first().map_or(1, Perm::len)).sum();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    let mut weights = vec![Q::from_integer(0.into()); n];
    let mut images = vec![vec![0; n]; k];
    let mut off = 0;
    for (gens, mass) in pieces {
        let m = gens.first().map_or(1, Perm::len);
        for x in 0..m {
            weights[order[off + x]] = mass / Q::from_integer((m as i64).into());
            for (g, p) in gens.iter().enumerate() {
                images[g][order[off + x]] = order[off + p.apply(x)];
            }
        }
        off += m;
    }
    let gens = images.into_iter().map(Perm::from_images).collect::<Result<Vec<_>>>()?;
    Action::new(AtomSpace::new(weights)?, default_names(k), gens)
}

/// Two actions with the same empirical IRS and at most `max_atoms` atoms
/// each. The first is a union of random transitive pieces; the second
/// repeats each piece with its mass split among one to three copies, some
/// of them with relabeled atoms.
pub fn equal_irs_pair<R: Rng>(r: &mut R, max_atoms: usize, k: usize) -> Result<(Action, Action)> {
    let max_atoms = max_atoms.max(1);
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut used = (0, 0);
    let families = r.gen_range(1..=4);
    let mut masses: Vec<i64> = (0..families).map(|_| r.gen_range(1..=6)).collect();
    let mut total: i64 = masses.iter().sum();
    for _ in 0..families {
        let room = max_atoms.saturating_sub(used.0.max(used.1));
        if room == 0 {
            break;
        }
        let m = r.gen_range(1..=room.min(8));
        let copies = r.gen_range(1..=3).min(room / m).max(1);
        let gens = random_transitive(r, m, k);
        let mass_units = masses.remove(0);
        left.push((gens.clone(), mass_units));
        let splits: Vec<i64> = (0..copies).map(|_| r.gen_range(1..=4)).collect();
        for s in splits.iter() {
            let relabel = random_perm(r, m);
            let inv = relabel.inverse();
            let conj: Vec<Perm> = gens
                .iter()
                .map(|p| Perm::from_images((0..m).map(|y| relabel.apply(p.apply(inv.apply(y)))).collect()).unwrap())
                .collect();
            right.push((conj, mass_units, *s, splits.iter().sum::<i64>()));
        }
        used = (used.0 + m, used.1 + m * copies);
    }
    total -= masses.iter().sum::<i64>();
    let q = |a: i64, b: i64| Q::new(a.into(), b.into());
    let left: Vec<(Vec<Perm>, Q)> = left.into_iter().map(|(g, u)| (g, q(u, total))).collect();
    let right: Vec<(Vec<Perm>, Q)> = right
        .into_iter()
        .map(|(g, u, s, of)| (g, q(u, total) * q(s, of)))
        .collect();
    Ok((assemble(r, &left, k)?, assemble(r, &right, k)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irs::{empirical_irs, irs_equal};

    #[test]
    fn kinds() {
        assert_eq!(cyclic(4).unwrap().generators()[0].images(), &[1, 2, 3, 0]);
        assert_eq!(orbits("4,2,2").unwrap().orbits().len(), 3);
        assert_eq!(random(6, 2, 7).unwrap(), random(6, 2, 7).unwrap());
        assert_eq!(random(5, 0, 1).unwrap().generator_count(), 0);
        let c = coset_action("a=(0 1 2);b=(0 1)").unwrap();
        assert_eq!(c.names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(c.generators()[1].images(), &[1, 0, 2]);
        assert_eq!(coset_action("n=5;a=(0 1)").unwrap().len(), 5);
        assert!(coset_action("a=(0 1").is_err());
        assert!(orbits("4,,2").is_err());
    }

    #[test]
    fn equal_irs_pairs() {
        let mut r = rng(3);
        for _ in 0..50 {
            let (a, b) = equal_irs_pair(&mut r, 60, 2).unwrap();
            assert!(a.len() <= 60 && b.len() <= 60);
            assert!(irs_equal(&empirical_irs(&a), &empirical_irs(&b)));
        }
    }
}
