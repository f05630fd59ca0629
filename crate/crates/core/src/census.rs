//! Regular dessins with a given automorphism group `G`, one per
//! `Aut(G)`-orbit on generating pairs.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{DessinError, Result};
use crate::group::{ElemId, ElementTable, GroupHandle, IDENTITY};
use crate::lattice::{
    enumerate_subgroups, moebius_table, phi2_via_moebius, MoebiusTable, SubgroupLattice,
};

/// Automorphisms are checked on every product up to this group order and on
/// random triples above it.
const FULL_HOMOMORPHISM_CHECK: usize = 200;
const SAMPLED_TRIPLES: usize = 10_000;

const NO_CLASS: u32 = u32::MAX;

/// For each element, the set of maximal subgroups containing it. A pair
/// generates `G` iff the two sets are disjoint.
pub struct MaximalMasks {
    words: usize,
    masks: Vec<u64>,
}

impl MaximalMasks {
    pub fn new(lattice: &SubgroupLattice) -> Self {
        let maximal = lattice.maximal_indices();
        let n = lattice.group_order();
        let words = maximal.len().div_ceil(64).max(1);
        let mut masks = vec![0u64; n * words];
        for (bit, &m) in maximal.iter().enumerate() {
            for e in lattice.nodes()[m].members.iter() {
                masks[e as usize * words + bit / 64] |= 1 << (bit % 64);
            }
        }
        MaximalMasks { words, masks }
    }

    #[inline]
    pub fn generates(&self, x: ElemId, y: ElemId) -> bool {
        let a = &self.masks[x as usize * self.words..(x as usize + 1) * self.words];
        let b = &self.masks[y as usize * self.words..(y as usize + 1) * self.words];
        a.iter().zip(b).all(|(p, q)| p & q == 0)
    }
}

/// Number of ordered generating pairs, counted directly.
pub fn generating_pairs_count(lattice: &SubgroupLattice) -> BigUint {
    let masks = MaximalMasks::new(lattice);
    let n = lattice.group_order() as ElemId;
    let total: u64 = (0..n)
        .into_par_iter()
        .map(|x| (0..n).filter(|&y| masks.generates(x, y)).count() as u64)
        .sum();
    BigUint::from(total)
}

/// `Aut(G)` as bijections of element ids.
#[derive(Clone, Debug)]
pub struct AutGroup {
    maps: Vec<Vec<ElemId>>,
    generators: Vec<usize>,
    base_pair: (ElemId, ElemId),
    order: u64,
    inn_order: u64,
    out_order: u64,
}

impl AutGroup {
    pub fn maps(&self) -> &[Vec<ElemId>] {
        &self.maps
    }

    /// Indices into [`AutGroup::maps`] of a small generating set.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_maps(&self) -> impl Iterator<Item = &[ElemId]> + '_ {
        self.generators.iter().map(|&i| self.maps[i].as_slice())
    }

    /// The generating pair whose images determine each automorphism.
    pub fn base_pair(&self) -> (ElemId, ElemId) {
        self.base_pair
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn inn_order(&self) -> u64 {
        self.inn_order
    }

    pub fn out_order(&self) -> u64 {
        self.out_order
    }
}

/// Breadth-first spanning tree of the Cayley graph for right multiplication
/// by `gens`: `(bfs order, parent, generator index)`.
fn spanning_tree(table: &ElementTable, gens: &[ElemId]) -> (Vec<ElemId>, Vec<(ElemId, usize)>) {
    let n = table.len();
    let mut parent = vec![(u32::MAX, usize::MAX); n];
    let mut seen = vec![false; n];
    let mut order = vec![IDENTITY];
    seen[IDENTITY as usize] = true;
    let mut head = 0;
    while head < order.len() {
        let e = order[head];
        head += 1;
        for (k, &s) in gens.iter().enumerate() {
            let f = table.mul(e, s);
            if !seen[f as usize] {
                seen[f as usize] = true;
                parent[f as usize] = (e, k);
                order.push(f);
            }
        }
    }
    (order, parent)
}

/// Extends `gens[k] ↦ images[k]` along the spanning tree and keeps it only if
/// every Cayley edge is respected and the map is a bijection.
fn extend_to_automorphism(
    table: &ElementTable,
    tree: &(Vec<ElemId>, Vec<(ElemId, usize)>),
    gens: &[ElemId],
    images: &[ElemId],
) -> Option<Vec<ElemId>> {
    let n = table.len();
    let (order, parent) = tree;
    let mut f = vec![0 as ElemId; n];
    for &e in &order[1..] {
        let (p, k) = parent[e as usize];
        f[e as usize] = table.mul(f[p as usize], images[k]);
    }
    for e in 0..n as ElemId {
        for (k, &s) in gens.iter().enumerate() {
            if f[table.mul(e, s) as usize] != table.mul(f[e as usize], images[k]) {
                return None;
            }
        }
    }
    let mut hit = vec![false; n];
    for &v in &f {
        if std::mem::replace(&mut hit[v as usize], true) {
            return None;
        }
    }
    Some(f)
}

fn check_automorphisms(table: &ElementTable, maps: &[Vec<ElemId>]) {
    let n = table.len();
    if n <= FULL_HOMOMORPHISM_CHECK {
        for f in maps {
            for a in 0..n {
                for b in 0..n {
                    let ab = table.mul(a as ElemId, b as ElemId);
                    assert_eq!(
                        f[ab as usize],
                        table.mul(f[a], f[b]),
                        "map is not a homomorphism"
                    );
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0xa07);
        for _ in 0..SAMPLED_TRIPLES {
            let f = &maps[rng.gen_range(0..maps.len())];
            let a = rng.gen_range(0..n as ElemId);
            let b = rng.gen_range(0..n as ElemId);
            let ab = table.mul(a, b);
            assert_eq!(
                f[ab as usize],
                table.mul(f[a as usize], f[b as usize]),
                "map is not a homomorphism"
            );
        }
    }
}

/// All automorphisms of `G`.
///
/// Fixes a generating pair `(a, b)` whose order profile admits the fewest
/// candidate images, then tries every generating pair `(a', b')` with the
/// same orders of `a`, `b` and `ab`, keeping those that extend consistently
/// along the Cayley graph.
pub fn automorphism_group(group: &GroupHandle, lattice: &SubgroupLattice) -> Result<AutGroup> {
    let table = group.cayley_table()?;
    let table = table.as_ref();
    let n = table.len();
    let masks = MaximalMasks::new(lattice);

    let mut by_order: HashMap<u32, u64> = HashMap::new();
    for e in 0..n as ElemId {
        *by_order.entry(table.order_of(e)).or_default() += 1;
    }
    let base_pair = (0..n as ElemId)
        .flat_map(|x| (0..n as ElemId).map(move |y| (x, y)))
        .filter(|&(x, y)| masks.generates(x, y))
        .min_by_key(|&(x, y)| {
            (
                by_order[&table.order_of(x)] * by_order[&table.order_of(y)],
                x,
                y,
            )
        })
        .expect("every group in scope is 2-generated");
    let (a, b) = base_pair;
    let gens = [a, b];
    let tree = spanning_tree(table, &gens);
    let (oa, ob, oab) = (
        table.order_of(a),
        table.order_of(b),
        table.order_of(table.mul(a, b)),
    );

    let maps: Vec<Vec<ElemId>> = (0..n as ElemId)
        .into_par_iter()
        .filter(|&x| table.order_of(x) == oa)
        .flat_map_iter(|x| {
            let tree = &tree;
            let masks = &masks;
            (0..n as ElemId).filter_map(move |y| {
                if table.order_of(y) != ob
                    || table.order_of(table.mul(x, y)) != oab
                    || !masks.generates(x, y)
                {
                    return None;
                }
                extend_to_automorphism(table, tree, &gens, &[x, y])
            })
        })
        .collect();
    check_automorphisms(table, &maps);

    let order = maps.len() as u64;
    let center = table.center().len() as u64;
    let inn_order = n as u64 / center;
    assert_eq!(order % inn_order, 0, "|Inn G| must divide |Aut G|");

    // Greedy generating set: add any automorphism not yet reached.
    let index: HashMap<(ElemId, ElemId), usize> = maps
        .iter()
        .enumerate()
        .map(|(i, f)| ((f[a as usize], f[b as usize]), i))
        .collect();
    let identity = index[&(a, b)];
    let mut generators = Vec::new();
    let mut reached = vec![false; maps.len()];
    reached[identity] = true;
    let mut reached_count = 1;
    for i in 0..maps.len() {
        if reached[i] {
            continue;
        }
        generators.push(i);
        let mut stack: Vec<usize> = (0..maps.len()).filter(|&j| reached[j]).collect();
        while let Some(j) = stack.pop() {
            for &g in &generators {
                let f = &maps[j];
                let h = &maps[g];
                let key = (h[f[a as usize] as usize], h[f[b as usize] as usize]);
                let k = index[&key];
                if !reached[k] {
                    reached[k] = true;
                    reached_count += 1;
                    stack.push(k);
                }
            }
        }
        if reached_count == maps.len() {
            break;
        }
    }

    Ok(AutGroup {
        maps,
        generators,
        base_pair,
        order,
        inn_order,
        out_order: order / inn_order,
    })
}

/// Genus from the Riemann–Hurwitz formula,
/// `g = 1 + (lmn − mn − ln − lm)·|G| / (2lmn)`, in exact integers.
///
/// Panics if the result is not a non-negative integer: the type and order
/// of a genuine dessin always give one.
pub fn riemann_hurwitz_genus(dessin_type: [u64; 3], order: &BigUint) -> BigUint {
    let [l, m, n] = dessin_type.map(BigInt::from);
    let numerator = (&l * &m * &n - &m * &n - &l * &n - &l * &m) * BigInt::from(order.clone());
    let denominator = BigInt::from(2) * &l * &m * &n;
    let (q, r) = numerator.div_rem(&denominator);
    assert!(r.is_zero(), "Riemann–Hurwitz quotient is not an integer");
    let g: BigInt = q + 1;
    assert!(!g.is_negative(), "negative genus");
    g.to_biguint().unwrap()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DessinClass {
    pub class_id: usize,
    /// Lexicographically least generating pair `(x, y)` of element ids.
    pub rep: (ElemId, ElemId),
    pub x: String,
    pub y: String,
    /// Orders of `x`, `y` and `z = (xy)⁻¹`.
    #[serde(rename = "type")]
    pub dessin_type: [u64; 3],
    #[serde(with = "crate::report::decimal")]
    pub genus: BigUint,
    pub commutator_order: u64,
    /// Sorted `Aut(G)`-orbit ids of `[x, y]` and its inverse.
    pub higman_label: (ElemId, ElemId),
    /// Whether `(x⁻¹, y⁻¹)` lies in the same class.
    pub reflexible: bool,
    /// `Aut(G)`-orbit ids of `x`, `y`, `z`.
    pub aut_signature: [ElemId; 3],
    /// `G`-conjugacy class ids of `x`, `y`, `z`.
    pub conjugacy_signature: [ElemId; 3],
}

impl DessinClass {
    /// Whether two of `x, y, z` lie in the same conjugacy class of `G`.
    /// Indices are `0 = x`, `1 = y`, `2 = z`.
    pub fn generators_conjugate(&self, i: usize, j: usize) -> bool {
        self.conjugacy_signature[i] == self.conjugacy_signature[j]
    }

    pub fn sorted_type(&self) -> [u64; 3] {
        let mut t = self.dessin_type;
        t.sort_unstable();
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TypeGenusCount {
    /// Type with entries sorted ascending; the bucket covers all its permutations.
    pub sorted_type: [u64; 3],
    #[serde(with = "crate::report::decimal")]
    pub genus: BigUint,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusReport {
    pub group: String,
    pub order: u64,
    pub aut_order: u64,
    pub inn_order: u64,
    pub out_order: u64,
    pub r: usize,
    #[serde(with = "crate::report::decimal")]
    pub phi2: BigUint,
    #[serde(with = "crate::report::decimal")]
    pub phi2_moebius: BigUint,
    pub moebius_r: usize,
    pub subgroup_count: usize,
    pub classes: Vec<DessinClass>,
    pub by_type_genus: Vec<TypeGenusCount>,
}

impl CensusReport {
    /// `{(sorted type, genus) ↦ count}` for quick comparisons.
    pub fn histogram(&self) -> BTreeMap<([u64; 3], u64), usize> {
        self.by_type_genus
            .iter()
            .map(|b| {
                (
                    (b.sorted_type, b.genus.to_u64().unwrap_or(u64::MAX)),
                    b.count,
                )
            })
            .collect()
    }
}

/// Everything computed for one group: the report plus the tables needed by
/// the T-system and universal-cover computations.
pub struct Census {
    group: Arc<GroupHandle>,
    table: Arc<ElementTable>,
    lattice: SubgroupLattice,
    moebius: MoebiusTable,
    aut: AutGroup,
    class_of_pair: Vec<u32>,
    aut_orbit: Vec<ElemId>,
    report: CensusReport,
}

impl std::fmt::Debug for Census {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Census")
            .field("group", &self.group.label())
            .field("r", &self.report.r)
            .finish()
    }
}

impl Census {
    pub fn group(&self) -> &GroupHandle {
        &self.group
    }

    pub fn table(&self) -> &ElementTable {
        &self.table
    }

    pub fn lattice(&self) -> &SubgroupLattice {
        &self.lattice
    }

    pub fn moebius(&self) -> &MoebiusTable {
        &self.moebius
    }

    pub fn aut(&self) -> &AutGroup {
        &self.aut
    }

    pub fn report(&self) -> &CensusReport {
        &self.report
    }

    pub fn classes(&self) -> &[DessinClass] {
        &self.report.classes
    }

    pub fn r(&self) -> usize {
        self.report.r
    }

    /// Class of a generating pair; `None` if the pair does not generate `G`.
    pub fn class_of(&self, x: ElemId, y: ElemId) -> Option<usize> {
        let n = self.table.len();
        match self.class_of_pair[x as usize * n + y as usize] {
            NO_CLASS => None,
            c => Some(c as usize),
        }
    }

    /// `Aut(G)`-orbit id (least member) of an element.
    pub fn aut_orbit_of(&self, e: ElemId) -> ElemId {
        self.aut_orbit[e as usize]
    }
}

/// Full census of `G`, enumerating its subgroup lattice first.
pub fn dessin_census(group: Arc<GroupHandle>) -> Result<Census> {
    let lattice = enumerate_subgroups(&group)?;
    let moebius = moebius_table(&lattice);
    census_with_lattice(group, lattice, moebius)
}

/// Full census of `G` from an already computed lattice.
pub fn census_with_lattice(
    group: Arc<GroupHandle>,
    lattice: SubgroupLattice,
    moebius: MoebiusTable,
) -> Result<Census> {
    let table = group.cayley_table()?;
    let n = table.len();
    let aut = automorphism_group(&group, &lattice)?;
    let masks = MaximalMasks::new(&lattice);
    let gen_maps: Vec<&[ElemId]> = aut.generator_maps().collect();

    let mut class_of_pair = vec![NO_CLASS; n * n];
    let mut reps: Vec<(ElemId, ElemId)> = Vec::new();
    let mut pair_count = 0u64;
    for x in 0..n as ElemId {
        for y in 0..n as ElemId {
            if class_of_pair[x as usize * n + y as usize] != NO_CLASS || !masks.generates(x, y) {
                continue;
            }
            let c = reps.len() as u32;
            reps.push((x, y));
            class_of_pair[x as usize * n + y as usize] = c;
            let mut stack = vec![(x, y)];
            let mut size = 1u64;
            while let Some((u, v)) = stack.pop() {
                for f in &gen_maps {
                    let (fu, fv) = (f[u as usize], f[v as usize]);
                    let slot = &mut class_of_pair[fu as usize * n + fv as usize];
                    if *slot == NO_CLASS {
                        *slot = c;
                        size += 1;
                        stack.push((fu, fv));
                    }
                }
            }
            assert_eq!(
                size,
                aut.order(),
                "Aut(G) must act semiregularly on generating pairs"
            );
            pair_count += size;
        }
    }

    let phi2 = generating_pairs_count(&lattice);
    assert_eq!(
        phi2,
        BigUint::from(pair_count),
        "orbit sizes must add up to φ₂(G)"
    );
    let phi2_moebius = phi2_via_moebius(&lattice, &moebius)?;
    let (moebius_r, rem) = phi2_moebius.div_rem(&BigUint::from(aut.order()));
    if !rem.is_zero() {
        return Err(DessinError::Corrupt(format!(
            "Möbius count {phi2_moebius} is not divisible by |Aut G| = {}",
            aut.order()
        )));
    }

    let aut_orbit = table.orbit_labels(|e, k| gen_maps[k][e as usize], gen_maps.len());
    let order = BigUint::from(n);
    let classes: Vec<DessinClass> = reps
        .iter()
        .enumerate()
        .map(|(c, &(x, y))| {
            let z = table.inv(table.mul(x, y));
            let dessin_type = [x, y, z].map(|e| table.order_of(e) as u64);
            let comm = table.commutator(x, y);
            let (h1, h2) = (
                aut_orbit[comm as usize],
                aut_orbit[table.inv(comm) as usize],
            );
            let mirror = class_of_pair[table.inv(x) as usize * n + table.inv(y) as usize];
            DessinClass {
                class_id: c,
                rep: (x, y),
                x: table.element(x).to_string(),
                y: table.element(y).to_string(),
                dessin_type,
                genus: riemann_hurwitz_genus(dessin_type, &order),
                commutator_order: table.order_of(comm) as u64,
                higman_label: (h1.min(h2), h1.max(h2)),
                reflexible: mirror == c as u32,
                aut_signature: [x, y, z].map(|e| aut_orbit[e as usize]),
                conjugacy_signature: [x, y, z].map(|e| table.conjugacy_class_of(e)),
            }
        })
        .collect();

    let mut buckets: BTreeMap<([u64; 3], BigUint), usize> = BTreeMap::new();
    for c in &classes {
        *buckets
            .entry((c.sorted_type(), c.genus.clone()))
            .or_default() += 1;
    }
    let by_type_genus = buckets
        .into_iter()
        .map(|((sorted_type, genus), count)| TypeGenusCount {
            sorted_type,
            genus,
            count,
        })
        .collect();

    let report = CensusReport {
        group: group.label().to_string(),
        order: n as u64,
        aut_order: aut.order(),
        inn_order: aut.inn_order(),
        out_order: aut.out_order(),
        r: classes.len(),
        phi2,
        phi2_moebius,
        moebius_r: moebius_r.to_usize().unwrap_or(usize::MAX),
        subgroup_count: lattice.len(),
        classes,
        by_type_genus,
    };
    Ok(Census {
        group,
        table,
        lattice,
        moebius,
        aut,
        class_of_pair,
        aut_orbit,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo::{construct_group, parse_descriptor};

    fn census(text: &str) -> Census {
        let g = construct_group(&parse_descriptor(text).unwrap()).unwrap();
        dessin_census(Arc::new(g)).unwrap()
    }

    #[test]
    fn genus_formula() {
        let sixty = BigUint::from(60u32);
        assert_eq!(riemann_hurwitz_genus([2, 3, 5], &sixty), BigUint::zero());
        assert_eq!(
            riemann_hurwitz_genus([5, 5, 5], &sixty),
            BigUint::from(13u32)
        );
        assert_eq!(
            riemann_hurwitz_genus([6, 1, 6], &BigUint::from(6u32)),
            BigUint::zero()
        );
    }

    #[test]
    #[should_panic(expected = "not an integer")]
    fn genus_formula_rejects_impossible_types() {
        riemann_hurwitz_genus([7, 7, 7], &BigUint::from(10u32));
    }

    #[test]
    fn cyclic_automorphisms() {
        let c = census("C6");
        assert_eq!(c.aut().order(), 2);
        assert_eq!(c.aut().out_order(), 2);
        let c = census("C1");
        assert_eq!(c.r(), 1);
        assert_eq!(c.classes()[0].dessin_type, [1, 1, 1]);
    }

    #[test]
    fn a5_automorphisms() {
        let c = census("A5");
        assert_eq!(c.aut().order(), 120);
        assert_eq!(c.aut().out_order(), 2);
        assert_eq!(c.r(), 19);
        assert_eq!(c.report().phi2, BigUint::from(2280u32));
    }

    #[test]
    fn frobenius_automorphisms() {
        let c = census("F_7_3");
        assert_eq!(c.aut().order(), 42);
        assert_eq!(c.aut().out_order(), 2);
    }

    #[test]
    fn cyclic_census_has_three_planar_classes() {
        for n in [2u32, 5, 6, 12] {
            let c = census(&format!("C{n}"));
            let planar: Vec<[u64; 3]> = c
                .classes()
                .iter()
                .filter(|d| d.dessin_type.contains(&1))
                .map(|d| d.dessin_type)
                .collect();
            let n = n as u64;
            assert_eq!(planar.len(), 3);
            for t in [[n, 1, n], [n, n, 1], [1, n, n]] {
                assert!(planar.contains(&t));
            }
            assert!(c
                .classes()
                .iter()
                .filter(|d| d.dessin_type.contains(&1))
                .all(|d| d.genus.is_zero()));
        }
    }

    #[test]
    fn class_lookup_is_total_on_generating_pairs() {
        let c = census("S4");
        let n = c.table().len() as ElemId;
        let mut per_class = vec![0u64; c.r()];
        for x in 0..n {
            for y in 0..n {
                if let Some(k) = c.class_of(x, y) {
                    per_class[k] += 1;
                }
            }
        }
        assert!(per_class.iter().all(|&k| k == c.aut().order()));
    }
}
