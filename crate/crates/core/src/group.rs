//! Finite permutation groups with a lazily built element table.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::bsgs::StabChain;
use crate::error::{DessinError, Result};
use crate::perm::{enumerate_elements, Permutation};

/// Groups up to this order get an element table.
pub const DEFAULT_ENUMERATION_CAP: usize = 20_000;

/// Groups up to this order get a full multiplication table. Everything that
/// walks the subgroup lattice or the set of pairs needs it.
pub const MULTIPLICATION_TABLE_CAP: usize = 4096;

/// Element id. Ids are ranks in the sorted one-line notation, so the identity
/// is always 0.
pub type ElemId = u32;

pub const IDENTITY: ElemId = 0;

/// All elements of a small group with their arithmetic precomputed.
#[derive(Debug)]
pub struct ElementTable {
    elements: Vec<Permutation>,
    index: HashMap<Permutation, ElemId>,
    /// Row-major `n × n` product table, present when `n ≤ MULTIPLICATION_TABLE_CAP`.
    products: Option<Vec<ElemId>>,
    inverses: Vec<ElemId>,
    orders: Vec<u32>,
    generator_ids: Vec<ElemId>,
    conjugacy_class: Vec<ElemId>,
}

impl ElementTable {
    fn build(generators: &[Permutation], cap: usize) -> Result<Self> {
        let elements = enumerate_elements(generators, cap)?;
        let n = elements.len();
        let index: HashMap<Permutation, ElemId> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as ElemId))
            .collect();
        let lookup = |p: &Permutation| index[p];
        let inverses: Vec<ElemId> = elements.iter().map(|p| lookup(&p.inverse())).collect();
        let orders: Vec<u32> = elements
            .iter()
            .map(|p| p.checked_order().expect("element order of a small group") as u32)
            .collect();
        let generator_ids: Vec<ElemId> = generators.iter().map(lookup).collect();

        // Right multiplication by generators, then the full table along a BFS tree.
        let right: Vec<Vec<ElemId>> = generators
            .iter()
            .map(|g| elements.iter().map(|p| lookup(&p.compose(g))).collect())
            .collect();
        let products = (n <= MULTIPLICATION_TABLE_CAP).then(|| {
            let mut parent = vec![(u32::MAX, usize::MAX); n];
            let mut bfs = Vec::with_capacity(n);
            let mut seen = vec![false; n];
            seen[IDENTITY as usize] = true;
            bfs.push(IDENTITY);
            let mut head = 0;
            while head < bfs.len() {
                let e = bfs[head];
                head += 1;
                for (k, r) in right.iter().enumerate() {
                    let f = r[e as usize];
                    if !seen[f as usize] {
                        seen[f as usize] = true;
                        parent[f as usize] = (e, k);
                        bfs.push(f);
                    }
                }
            }
            let mut table = vec![0 as ElemId; n * n];
            for a in 0..n {
                let row = &mut table[a * n..(a + 1) * n];
                row[IDENTITY as usize] = a as ElemId;
                for &b in &bfs[1..] {
                    let (p, k) = parent[b as usize];
                    row[b as usize] = right[k][row[p as usize] as usize];
                }
            }
            table
        });

        let mut table = ElementTable {
            elements,
            index,
            products,
            inverses,
            orders,
            generator_ids,
            conjugacy_class: Vec::new(),
        };
        table.conjugacy_class = table.orbit_labels(
            |e, k| {
                let g = table.generator_ids[k];
                table.mul(table.mul(table.inverses[g as usize], e), g)
            },
            table.generator_ids.len(),
        );
        Ok(table)
    }

    /// Labels each element by the least element of its orbit under the maps
    /// `act(e, k)` for `k in 0..count`.
    pub(crate) fn orbit_labels(
        &self,
        act: impl Fn(ElemId, usize) -> ElemId,
        count: usize,
    ) -> Vec<ElemId> {
        let n = self.len();
        let mut label = vec![u32::MAX; n];
        for start in 0..n as ElemId {
            if label[start as usize] != u32::MAX {
                continue;
            }
            label[start as usize] = start;
            let mut stack = vec![start];
            while let Some(e) = stack.pop() {
                for k in 0..count {
                    let f = act(e, k);
                    if label[f as usize] == u32::MAX {
                        label[f as usize] = start;
                        stack.push(f);
                    }
                }
            }
        }
        label
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn element(&self, id: ElemId) -> &Permutation {
        &self.elements[id as usize]
    }

    pub fn id_of(&self, p: &Permutation) -> Option<ElemId> {
        self.index.get(p).copied()
    }

    pub fn has_products(&self) -> bool {
        self.products.is_some()
    }

    /// `a` then `b`.
    #[inline]
    pub fn mul(&self, a: ElemId, b: ElemId) -> ElemId {
        match &self.products {
            Some(t) => t[a as usize * self.elements.len() + b as usize],
            None => self.index[&self.elements[a as usize].compose(&self.elements[b as usize])],
        }
    }

    #[inline]
    pub fn inv(&self, a: ElemId) -> ElemId {
        self.inverses[a as usize]
    }

    #[inline]
    pub fn order_of(&self, a: ElemId) -> u32 {
        self.orders[a as usize]
    }

    pub fn generator_ids(&self) -> &[ElemId] {
        &self.generator_ids
    }

    /// `x⁻¹ y⁻¹ x y`.
    pub fn commutator(&self, x: ElemId, y: ElemId) -> ElemId {
        let a = self.mul(self.inv(x), self.inv(y));
        self.mul(self.mul(a, x), y)
    }

    /// Least element of the `G`-conjugacy class of `a`.
    pub fn conjugacy_class_of(&self, a: ElemId) -> ElemId {
        self.conjugacy_class[a as usize]
    }

    pub fn conjugacy_class_count(&self) -> usize {
        self.conjugacy_class
            .iter()
            .enumerate()
            .filter(|(i, &c)| *i as u32 == c)
            .count()
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<ElemId> {
        (0..self.len() as ElemId)
            .filter(|&z| {
                self.generator_ids
                    .iter()
                    .all(|&g| self.mul(z, g) == self.mul(g, z))
            })
            .collect()
    }

    /// Least common multiple of all element orders.
    pub fn exponent(&self) -> u64 {
        use num_integer::Integer;
        self.orders
            .iter()
            .fold(1u64, |acc, &o| acc.lcm(&(o as u64)))
    }
}

/// A finite permutation group: generators, exact order and cached tables.
#[derive(Debug)]
pub struct GroupHandle {
    label: String,
    degree: usize,
    generators: Vec<Permutation>,
    order: BigUint,
    chain: StabChain,
    cap: usize,
    table: OnceLock<std::result::Result<Arc<ElementTable>, DessinError>>,
}

impl GroupHandle {
    pub fn new(label: impl Into<String>, generators: Vec<Permutation>) -> Result<Self> {
        Self::with_cap(label, generators, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_cap(
        label: impl Into<String>,
        generators: Vec<Permutation>,
        cap: usize,
    ) -> Result<Self> {
        let chain = StabChain::new(&generators)?;
        Ok(GroupHandle {
            label: label.into(),
            degree: generators[0].degree(),
            order: chain.order(),
            generators,
            chain,
            cap,
            table: OnceLock::new(),
        })
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn order_u64(&self) -> Option<u64> {
        self.order.to_u64()
    }

    pub fn chain(&self) -> &StabChain {
        &self.chain
    }

    pub fn contains(&self, p: &Permutation) -> bool {
        self.chain.contains(p)
    }

    /// The element table, built on first use.
    pub fn table(&self) -> Result<Arc<ElementTable>> {
        self.table
            .get_or_init(|| {
                let order = self.order_u64().unwrap_or(u64::MAX);
                if order > self.cap as u64 {
                    return Err(DessinError::CapExceeded {
                        what: "element table",
                        limit: self.cap as u64,
                        actual: self.order.to_string(),
                    });
                }
                ElementTable::build(&self.generators, self.cap).map(Arc::new)
            })
            .clone()
    }

    /// Element table with a full multiplication table.
    pub fn cayley_table(&self) -> Result<Arc<ElementTable>> {
        let table = self.table()?;
        if !table.has_products() {
            return Err(DessinError::CapExceeded {
                what: "multiplication table",
                limit: MULTIPLICATION_TABLE_CAP as u64,
                actual: table.len().to_string(),
            });
        }
        Ok(table)
    }
}
