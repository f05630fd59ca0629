//! The complete subgroup lattice of a small group and its Möbius function.
//!
//! Subgroups are found by cyclic extension: starting from the trivial group,
//! each conjugacy-class representative `H` is extended by every cyclic
//! subgroup of prime-power order not already in `H`, and every new subgroup
//! is added together with its whole conjugacy class. Every subgroup is
//! generated by its prime-power cyclic subgroups, so this reaches them all.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DessinError, Result};
use crate::group::{ElemId, ElementTable, GroupHandle, IDENTITY};

/// Enumeration aborts past this many subgroups.
pub const MAX_SUBGROUPS: usize = 250_000;

/// Subgroups up to this order are checked for closure exhaustively.
const FULL_CLOSURE_CHECK: usize = 200;

/// Fixed-size set of element ids.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Bitset {
    words: Vec<u64>,
    len: usize,
}

impl Bitset {
    pub fn new(len: usize) -> Self {
        Bitset {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn from_ids(len: usize, ids: impl IntoIterator<Item = ElemId>) -> Self {
        let mut b = Bitset::new(len);
        for i in ids {
            b.insert(i);
        }
        b
    }

    #[inline]
    pub fn insert(&mut self, i: ElemId) {
        self.words[i as usize / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn contains(&self, i: ElemId) -> bool {
        self.words[i as usize / 64] >> (i % 64) & 1 == 1
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn universe(&self) -> usize {
        self.len
    }

    pub fn is_subset(&self, other: &Bitset) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &Bitset) -> Bitset {
        Bitset {
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
            len: self.len,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = ElemId> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros();
                w &= w - 1;
                Some(wi as u32 * 64 + t)
            })
        })
    }

    /// Lexicographic order of the sorted member lists.
    pub fn cmp_members(&self, other: &Bitset) -> Ordering {
        self.iter().cmp(other.iter())
    }

    /// Little-endian hex of the 64-bit words.
    pub fn to_hex(&self) -> String {
        let bytes: Vec<u8> = self.words.iter().flat_map(|w| w.to_le_bytes()).collect();
        hex::encode(bytes)
    }

    pub fn from_hex(text: &str, len: usize) -> Result<Self> {
        let bytes = hex::decode(text).map_err(|e| DessinError::Corrupt(e.to_string()))?;
        let words_len = len.div_ceil(64);
        if bytes.len() != words_len * 8 {
            return Err(DessinError::Corrupt(format!(
                "bitset has {} bytes, expected {}",
                bytes.len(),
                words_len * 8
            )));
        }
        let words: Vec<u64> = bytes
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let b = Bitset { words, len };
        if b.iter().any(|i| i as usize >= len) {
            return Err(DessinError::Corrupt(
                "bitset has bits past its length".into(),
            ));
        }
        Ok(b)
    }
}

#[derive(Clone, Debug)]
pub struct SubgroupNode {
    pub members: Bitset,
    pub order: usize,
    /// Element ids generating the subgroup.
    pub generator_witness: Vec<ElemId>,
    pub is_maximal: bool,
    /// Index of the conjugacy class of subgroups, numbered by first node.
    pub class_id: usize,
}

/// All subgroups of a group, sorted by order and then by member list. The
/// trivial subgroup is first and the whole group last.
#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    group_order: usize,
    nodes: Vec<SubgroupNode>,
    class_count: usize,
}

/// Conjugation maps `e ↦ s⁻¹ e s` for every generator `s`.
fn conjugation_maps(table: &ElementTable) -> Vec<Vec<ElemId>> {
    table
        .generator_ids()
        .iter()
        .map(|&s| {
            let si = table.inv(s);
            (0..table.len() as ElemId)
                .map(|e| table.mul(table.mul(si, e), s))
                .collect()
        })
        .collect()
}

/// `⟨H, g⟩` by Dimino's coset method. `h_elems` must list a subgroup and
/// `gens` must generate it together with `g`.
fn extend_subgroup(
    table: &ElementTable,
    h_elems: &[ElemId],
    h_set: &Bitset,
    gens: &[ElemId],
) -> (Vec<ElemId>, Bitset) {
    let mut elems = h_elems.to_vec();
    let mut set = h_set.clone();
    let mut reps = vec![IDENTITY];
    let mut i = 0;
    while i < reps.len() {
        let r = reps[i];
        i += 1;
        for &s in gens {
            let e = table.mul(r, s);
            if !set.contains(e) {
                for &h in h_elems {
                    let x = table.mul(h, e);
                    set.insert(x);
                    elems.push(x);
                }
                reps.push(e);
            }
        }
    }
    (elems, set)
}

fn check_closed(table: &ElementTable, elems: &[ElemId], set: &Bitset, rng: &mut ChaCha8Rng) {
    if elems.len() <= FULL_CLOSURE_CHECK {
        for &a in elems {
            assert!(
                set.contains(table.inv(a)),
                "subgroup not closed under inverse"
            );
            for &b in elems {
                assert!(
                    set.contains(table.mul(a, b)),
                    "subgroup not closed under product"
                );
            }
        }
    } else {
        for _ in 0..1000 {
            let a = elems[rng.gen_range(0..elems.len())];
            let b = elems[rng.gen_range(0..elems.len())];
            assert!(
                set.contains(table.mul(a, b)),
                "subgroup not closed under product"
            );
            assert!(
                set.contains(table.inv(a)),
                "subgroup not closed under inverse"
            );
        }
    }
}

/// Enumerates every subgroup of `group`.
pub fn enumerate_subgroups(group: &GroupHandle) -> Result<SubgroupLattice> {
    let table = group.cayley_table()?;
    let table = table.as_ref();
    let n = table.len();

    // Cyclic subgroups of prime-power order, each with its least generator.
    let mut cyclic: Vec<(ElemId, Bitset)> = Vec::new();
    let mut cyclic_seen: HashMap<Bitset, ()> = HashMap::new();
    for g in 1..n as ElemId {
        if !is_prime_power(table.order_of(g) as u64) {
            continue;
        }
        let mut set = Bitset::new(n);
        let mut x = IDENTITY;
        loop {
            set.insert(x);
            x = table.mul(x, g);
            if x == IDENTITY {
                break;
            }
        }
        if cyclic_seen.insert(set.clone(), ()).is_none() {
            cyclic.push((g, set));
        }
    }

    let conj = conjugation_maps(table);
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut found: HashMap<Bitset, usize> = HashMap::new();
    let mut raw: Vec<SubgroupNode> = Vec::new();
    let mut reps: Vec<(usize, Vec<ElemId>)> = Vec::new();
    let mut class_count = 0usize;

    let mut add_class = |members: Bitset,
                         elems: Vec<ElemId>,
                         witness: Vec<ElemId>,
                         found: &mut HashMap<Bitset, usize>,
                         raw: &mut Vec<SubgroupNode>,
                         reps: &mut Vec<(usize, Vec<ElemId>)>|
     -> Result<()> {
        let order = elems.len();
        assert_eq!(n % order, 0, "subgroup order must divide the group order");
        check_closed(table, &elems, &members, &mut rng);
        let class_id = class_count;
        class_count += 1;
        let rep_index = raw.len();
        found.insert(members.clone(), rep_index);
        raw.push(SubgroupNode {
            members,
            order,
            generator_witness: witness,
            is_maximal: false,
            class_id,
        });
        reps.push((rep_index, elems));
        let mut i = rep_index;
        while i < raw.len() {
            for map in &conj {
                let image = Bitset::from_ids(n, raw[i].members.iter().map(|e| map[e as usize]));
                if !found.contains_key(&image) {
                    let witness = raw[i]
                        .generator_witness
                        .iter()
                        .map(|&e| map[e as usize])
                        .collect();
                    found.insert(image.clone(), raw.len());
                    raw.push(SubgroupNode {
                        members: image,
                        order,
                        generator_witness: witness,
                        is_maximal: false,
                        class_id,
                    });
                    if raw.len() > MAX_SUBGROUPS {
                        return Err(DessinError::CapExceeded {
                            what: "subgroup count",
                            limit: MAX_SUBGROUPS as u64,
                            actual: raw.len().to_string(),
                        });
                    }
                }
            }
            i += 1;
        }
        Ok(())
    };

    add_class(
        Bitset::from_ids(n, [IDENTITY]),
        vec![IDENTITY],
        Vec::new(),
        &mut found,
        &mut raw,
        &mut reps,
    )?;
    let mut next = 0;
    while next < reps.len() {
        let (h_index, h_elems) = reps[next].clone();
        next += 1;
        let h_set = raw[h_index].members.clone();
        let h_witness = raw[h_index].generator_witness.clone();
        for (g, _) in &cyclic {
            if h_set.contains(*g) {
                continue;
            }
            let mut gens = h_witness.clone();
            gens.push(*g);
            let (elems, set) = extend_subgroup(table, &h_elems, &h_set, &gens);
            if !found.contains_key(&set) {
                add_class(set, elems, gens, &mut found, &mut raw, &mut reps)?;
            }
        }
    }

    Ok(SubgroupLattice::from_nodes(n, raw))
}

fn is_prime_power(k: u64) -> bool {
    crate::field::prime_power(k).is_some()
}

impl SubgroupLattice {
    /// Sorts nodes canonically, renumbers classes and sets maximality flags.
    fn from_nodes(group_order: usize, mut nodes: Vec<SubgroupNode>) -> Self {
        nodes.sort_by(|a, b| {
            a.order
                .cmp(&b.order)
                .then_with(|| a.members.cmp_members(&b.members))
        });
        let mut renumber: HashMap<usize, usize> = HashMap::new();
        for node in nodes.iter_mut() {
            let next = renumber.len();
            node.class_id = *renumber.entry(node.class_id).or_insert(next);
        }
        let class_count = renumber.len();
        let mut lattice = SubgroupLattice {
            group_order,
            nodes,
            class_count,
        };
        lattice.mark_maximal();
        lattice
    }

    fn mark_maximal(&mut self) {
        let top = self.nodes.len() - 1;
        let flags: Vec<bool> = (0..self.nodes.len())
            .map(|i| {
                if i == top {
                    return false;
                }
                let h = &self.nodes[i];
                !self.nodes[..top].iter().any(|k| {
                    k.order > h.order && k.order % h.order == 0 && h.members.is_subset(&k.members)
                })
            })
            .collect();
        for (node, flag) in self.nodes.iter_mut().zip(flags) {
            node.is_maximal = flag;
        }
    }

    pub fn group_order(&self) -> usize {
        self.group_order
    }

    pub fn nodes(&self) -> &[SubgroupNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_count
    }

    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Index of the subgroup with exactly these members.
    pub fn find(&self, members: &Bitset) -> Option<usize> {
        let order = members.count();
        let start = self.nodes.partition_point(|n| n.order < order);
        self.nodes[start..]
            .iter()
            .take_while(|n| n.order == order)
            .position(|n| &n.members == members)
            .map(|p| p + start)
    }

    /// `nodes[i] ≤ nodes[j]`.
    pub fn is_contained(&self, i: usize, j: usize) -> bool {
        let (h, k) = (&self.nodes[i], &self.nodes[j]);
        k.order % h.order == 0 && h.members.is_subset(&k.members)
    }

    pub fn maximal_indices(&self) -> Vec<usize> {
        (0..self.nodes.len())
            .filter(|&i| self.nodes[i].is_maximal)
            .collect()
    }

    /// Nodes contained in `nodes[h]`, in lattice order.
    pub fn below(&self, h: usize) -> Vec<usize> {
        (0..=h).filter(|&k| self.is_contained(k, h)).collect()
    }
}

/// `μ_G(H)` for every node, indexed like the lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoebiusTable {
    pub values: Vec<i64>,
}

impl MoebiusTable {
    pub fn get(&self, i: usize) -> i64 {
        self.values[i]
    }
}

/// Möbius function of the interval below `top`, over the nodes `within`
/// (which must be sorted in lattice order and end with `top`).
fn interval_moebius(lattice: &SubgroupLattice, within: &[usize]) -> Vec<i64> {
    let mut values = vec![0i64; within.len()];
    let last = within.len() - 1;
    values[last] = 1;
    let mut nonzero = vec![last];
    for i in (0..last).rev() {
        let h = within[i];
        let s: i64 = nonzero
            .iter()
            .filter(|&&k| {
                let node = &lattice.nodes[within[k]];
                node.order > lattice.nodes[h].order && lattice.is_contained(h, within[k])
            })
            .map(|&k| values[k])
            .sum();
        values[i] = -s;
        if s != 0 {
            nonzero.push(i);
        }
    }
    values
}

/// Computes `μ_G` top-down from `μ_G(G) = 1`.
pub fn moebius_table(lattice: &SubgroupLattice) -> MoebiusTable {
    let all: Vec<usize> = (0..lattice.len()).collect();
    MoebiusTable {
        values: interval_moebius(lattice, &all),
    }
}

/// Checks `Σ_{K ≥ H} μ(K) = [H = G]` for every node, summing over all
/// supergroups independently of the recursion that produced the table.
pub fn check_delta_identity(lattice: &SubgroupLattice, table: &MoebiusTable) -> bool {
    let top = lattice.top();
    (0..lattice.len()).all(|h| {
        let s: i64 = (h..lattice.len())
            .filter(|&k| lattice.is_contained(h, k))
            .map(|k| table.values[k])
            .sum();
        s == i64::from(h == top)
    })
}

fn weighted_square_sum(lattice: &SubgroupLattice, nodes: &[usize], mu: &[i64]) -> Result<BigUint> {
    let sum: BigInt = nodes
        .iter()
        .zip(mu)
        .filter(|(_, &m)| m != 0)
        .map(|(&k, &m)| {
            let order = BigInt::from(lattice.nodes[k].order);
            BigInt::from(m) * &order * &order
        })
        .sum();
    if sum.is_negative() {
        return Err(DessinError::NegativeResult);
    }
    Ok(sum.to_biguint().unwrap_or_else(BigUint::zero))
}

/// `φ₂(G) = Σ_H μ_G(H) |H|²`.
pub fn phi2_via_moebius(lattice: &SubgroupLattice, table: &MoebiusTable) -> Result<BigUint> {
    let all: Vec<usize> = (0..lattice.len()).collect();
    weighted_square_sum(lattice, &all, &table.values)
}

/// `φ₂(H)` for the subgroup `nodes[h]`, using the Möbius function of the
/// interval below it.
pub fn phi2_of_subgroup(lattice: &SubgroupLattice, h: usize) -> Result<BigUint> {
    let below = lattice.below(h);
    let mu = interval_moebius(lattice, &below);
    weighted_square_sum(lattice, &below, &mu)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalClass {
    /// Node index of the least subgroup in the class.
    pub representative: usize,
    pub index: u64,
    pub class_size: usize,
}

/// Conjugacy classes of maximal subgroups, ordered by representative.
pub fn maximal_classes(lattice: &SubgroupLattice) -> Vec<MaximalClass> {
    let mut classes: Vec<MaximalClass> = Vec::new();
    let mut by_class: HashMap<usize, usize> = HashMap::new();
    for i in lattice.maximal_indices() {
        let node = &lattice.nodes[i];
        match by_class.get(&node.class_id) {
            Some(&c) => classes[c].class_size += 1,
            None => {
                by_class.insert(node.class_id, classes.len());
                classes.push(MaximalClass {
                    representative: i,
                    index: (lattice.group_order / node.order) as u64,
                    class_size: 1,
                });
            }
        }
    }
    classes
}

/// Cache form of a lattice: members as hex bitsets plus Möbius values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeRecord {
    pub group_order: usize,
    pub subgroups: Vec<SubgroupRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupRecord {
    pub members: String,
    pub order: usize,
    pub witness: Vec<ElemId>,
    pub class_id: usize,
    pub is_maximal: bool,
    pub mu: i64,
}

impl LatticeRecord {
    pub fn new(lattice: &SubgroupLattice, table: &MoebiusTable) -> Self {
        LatticeRecord {
            group_order: lattice.group_order,
            subgroups: lattice
                .nodes
                .iter()
                .zip(&table.values)
                .map(|(n, &mu)| SubgroupRecord {
                    members: n.members.to_hex(),
                    order: n.order,
                    witness: n.generator_witness.clone(),
                    class_id: n.class_id,
                    is_maximal: n.is_maximal,
                    mu,
                })
                .collect(),
        }
    }

    /// Rebuilds the lattice, rejecting anything structurally inconsistent.
    /// Maximality and Möbius values are recomputed and must match the record.
    pub fn restore(&self, group: &GroupHandle) -> Result<(SubgroupLattice, MoebiusTable)> {
        let n = group
            .order_u64()
            .and_then(|o| o.to_usize())
            .unwrap_or(usize::MAX);
        if n != self.group_order {
            return Err(DessinError::Corrupt(format!(
                "record is for order {}, group has order {}",
                self.group_order,
                group.order()
            )));
        }
        let mut nodes = Vec::with_capacity(self.subgroups.len());
        for s in &self.subgroups {
            let members = Bitset::from_hex(&s.members, n)?;
            if members.count() != s.order || s.order == 0 || !n.is_multiple_of(s.order) {
                return Err(DessinError::Corrupt("subgroup order mismatch".into()));
            }
            if s.witness
                .iter()
                .any(|&w| w as usize >= n || !members.contains(w))
            {
                return Err(DessinError::Corrupt("witness outside subgroup".into()));
            }
            nodes.push(SubgroupNode {
                members,
                order: s.order,
                generator_witness: s.witness.clone(),
                is_maximal: s.is_maximal,
                class_id: s.class_id,
            });
        }
        if nodes.is_empty() || nodes.last().unwrap().order != n || nodes[0].order != 1 {
            return Err(DessinError::Corrupt(
                "lattice must start trivial and end with G".into(),
            ));
        }
        let table = group.cayley_table()?;
        let trivial = Bitset::from_ids(n, [IDENTITY]);
        for node in &nodes {
            let (_, set) = extend_subgroup(&table, &[IDENTITY], &trivial, &node.generator_witness);
            if set != node.members {
                return Err(DessinError::Corrupt(
                    "witness does not generate its subgroup".into(),
                ));
            }
        }
        let lattice = SubgroupLattice::from_nodes(n, nodes);
        // Every cyclic subgroup and every conjugate of a listed subgroup must be listed.
        for g in 0..n as ElemId {
            let (_, set) = extend_subgroup(&table, &[IDENTITY], &trivial, &[g]);
            if lattice.find(&set).is_none() {
                return Err(DessinError::Corrupt("missing cyclic subgroup".into()));
            }
        }
        for map in conjugation_maps(&table) {
            for node in lattice.nodes() {
                let image = Bitset::from_ids(n, node.members.iter().map(|e| map[e as usize]));
                if lattice.find(&image).is_none() {
                    return Err(DessinError::Corrupt("conjugacy class incomplete".into()));
                }
            }
        }
        let restored = LatticeRecord::new(&lattice, &moebius_table(&lattice));
        if &restored != self {
            return Err(DessinError::Corrupt(
                "record is not in canonical form".into(),
            ));
        }
        let mu = moebius_table(&lattice);
        Ok((lattice, mu))
    }
}
