//! Brute-force oracles shared by the integration tests. Nothing here uses
//! element tables, lattices or stabilizer chains from the library; groups are
//! plain sets of image vectors.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use dessins_core::zoo::GroupDescriptor;

pub type Img = Vec<u32>;
type Move = fn(&Img, &Img) -> (Img, Img);

pub fn mul(a: &Img, b: &Img) -> Img {
    // Left-to-right product: apply `a`, then `b`.
    a.iter().map(|&i| b[i as usize]).collect()
}

pub fn inv(a: &Img) -> Img {
    let mut out = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        out[j as usize] = i as u32;
    }
    out
}

pub fn identity(n: usize) -> Img {
    (0..n as u32).collect()
}

pub fn order(a: &Img) -> u64 {
    let id = identity(a.len());
    let mut p = a.clone();
    let mut k = 1;
    while p != id {
        p = mul(&p, a);
        k += 1;
    }
    k
}

pub fn commutator(x: &Img, y: &Img) -> Img {
    mul(&mul(&mul(&inv(x), &inv(y)), x), y)
}

/// Every element of the group generated by `gens`, by breadth-first search.
pub fn closure(degree: usize, gens: &[Img]) -> BTreeSet<Img> {
    let mut seen = BTreeSet::new();
    let start = identity(degree);
    seen.insert(start.clone());
    let mut queue = VecDeque::from([start]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = mul(&p, g);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen
}

/// All subgroups, as a fixpoint of `H ↦ ⟨H, g⟩` starting from the trivial group.
pub fn all_subgroups(elements: &BTreeSet<Img>) -> BTreeSet<BTreeSet<Img>> {
    let degree = elements.iter().next().unwrap().len();
    let trivial: BTreeSet<Img> = [identity(degree)].into();
    let mut found: BTreeSet<BTreeSet<Img>> = [trivial.clone()].into();
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for g in elements {
            if h.contains(g) {
                continue;
            }
            let mut gens: Vec<Img> = h.iter().cloned().collect();
            gens.push(g.clone());
            let k = closure(degree, &gens);
            if found.insert(k.clone()) {
                frontier.push(k);
            }
        }
    }
    found
}

/// Indices of the maximal proper subgroups.
pub fn maximal_indices(elements: &BTreeSet<Img>) -> BTreeSet<usize> {
    let subs = all_subgroups(elements);
    let proper: Vec<&BTreeSet<Img>> = subs.iter().filter(|h| h.len() < elements.len()).collect();
    proper
        .iter()
        .filter(|h| !proper.iter().any(|k| k.len() > h.len() && h.is_subset(k)))
        .map(|h| elements.len() / h.len())
        .collect()
}

/// Ordered pairs generating the whole group, counted by closure.
pub fn generating_pairs(elements: &BTreeSet<Img>) -> Vec<(Img, Img)> {
    let degree = elements.iter().next().unwrap().len();
    let mut out = Vec::new();
    for x in elements {
        for y in elements {
            if closure(degree, &[x.clone(), y.clone()]).len() == elements.len() {
                out.push((x.clone(), y.clone()));
            }
        }
    }
    out
}

/// Canonical labelling of the Cayley graph of `G` with respect to `(x, y)`:
/// elements are numbered in breadth-first order from the identity, and the
/// key lists the numbers of `g·x` and `g·y` in that order. Two generating
/// pairs have the same key exactly when an automorphism maps one to the other.
pub fn cayley_key(x: &Img, y: &Img) -> Vec<u32> {
    let degree = x.len();
    let mut index: HashMap<Img, u32> = HashMap::new();
    let mut order = vec![identity(degree)];
    index.insert(order[0].clone(), 0);
    let mut key = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let g = order[i].clone();
        for s in [x, y] {
            let h = mul(&g, s);
            let next = order.len() as u32;
            let id = *index.entry(h.clone()).or_insert_with(|| {
                order.push(h);
                next
            });
            key.push(id);
        }
        i += 1;
    }
    key
}

/// Number of regular dessins with the given group: distinct Cayley keys over
/// generating pairs.
pub fn dessin_count(elements: &BTreeSet<Img>) -> usize {
    generating_pairs(elements)
        .iter()
        .map(|(x, y)| cayley_key(x, y))
        .collect::<BTreeSet<_>>()
        .len()
}

/// Type histogram `(sorted type, genus) -> count` from class representatives.
pub fn type_genus_histogram(elements: &BTreeSet<Img>) -> BTreeSet<([u64; 3], u64, usize)> {
    let mut reps: HashMap<Vec<u32>, (Img, Img)> = HashMap::new();
    for (x, y) in generating_pairs(elements) {
        reps.entry(cayley_key(&x, &y)).or_insert((x, y));
    }
    let n = elements.len() as u64;
    let mut counts: HashMap<([u64; 3], u64), usize> = HashMap::new();
    for (x, y) in reps.values() {
        let z = inv(&mul(x, y));
        let mut t = [order(x), order(y), order(&z)];
        t.sort();
        let [l, m, k] = t.map(|v| v as i64);
        let num = (l * m * k - m * k - l * k - l * m) * n as i64;
        assert_eq!(num % (2 * l * m * k), 0);
        let genus = 1 + num / (2 * l * m * k);
        assert!(genus >= 0);
        *counts.entry((t, genus as u64)).or_default() += 1;
    }
    counts.into_iter().map(|((t, g), c)| (t, g, c)).collect()
}

/// Orbits of the Nielsen moves on Aut-classes of generating pairs, returned
/// as sorted class sizes together with the commutator orders seen in each.
pub fn nielsen_orbits(elements: &BTreeSet<Img>) -> Vec<(usize, BTreeSet<u64>)> {
    let pairs = generating_pairs(elements);
    let mut class_of: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut reps = Vec::new();
    for (x, y) in &pairs {
        let key = cayley_key(x, y);
        if let std::collections::hash_map::Entry::Vacant(e) = class_of.entry(key) {
            e.insert(reps.len());
            reps.push((x.clone(), y.clone()));
        }
    }
    let moves: [Move; 3] = [
        |x, y| (y.clone(), x.clone()),
        |x, y| (inv(x), y.clone()),
        |x, y| (mul(x, y), y.clone()),
    ];
    let mut seen = vec![false; reps.len()];
    let mut out = Vec::new();
    for start in 0..reps.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut size = 0;
        let mut comm = BTreeSet::new();
        while let Some(c) = queue.pop_front() {
            size += 1;
            let (x, y) = &reps[c];
            comm.insert(order(&commutator(x, y)));
            for mv in &moves {
                let (a, b) = mv(x, y);
                let d = class_of[&cayley_key(&a, &b)];
                if !seen[d] {
                    seen[d] = true;
                    queue.push_back(d);
                }
            }
        }
        out.push((size, comm));
    }
    out.sort();
    out
}

/// `μ(n)` by trial division.
pub fn mobius(mut n: u64) -> i64 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Zoo groups of order at most `max_order` used by the exhaustive cross-checks.
pub fn zoo_up_to(max_order: u64) -> Vec<GroupDescriptor> {
    use GroupDescriptor::*;
    let mut all = vec![Klein4];
    all.extend((1..=30).map(Cyclic));
    all.extend((3..=30).map(Dihedral));
    all.extend((3..=6).map(Symmetric));
    all.extend((4..=7).map(Alternating));
    all.extend([2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19].map(Psl2));
    all.extend([3, 4, 5, 7, 9, 11, 13].map(Pgl2));
    all.extend([3, 5, 7, 9, 11, 13].map(Sl2));
    all.extend(
        [
            (3, 2),
            (5, 2),
            (7, 2),
            (7, 3),
            (11, 5),
            (13, 3),
            (13, 2),
            (19, 3),
            (31, 5),
            (29, 7),
            (41, 5),
        ]
        .map(|(p, q)| FrobeniusPQ { p, q }),
    );
    all.retain(|d| d.expected_order() <= max_order.into());
    all
}
