//! Permutations of `{0..d-1}` in one-line notation.
//!
//! Products are read left to right: `p * q` applies `p` first, then `q`, so
//! `(p * q).apply(i) == q.apply(p.apply(i))`.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;

use num_bigint::BigUint;
use num_integer::Integer;

use crate::error::{DessinError, Result};

/// A bijection of `{0..degree-1}`. The derived ordering is the lexicographic
/// order of the one-line notation, which fixes element ids everywhere.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u32>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u32).collect(),
        }
    }

    /// Builds a permutation from one-line notation, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let d = images.len();
        let mut seen = vec![false; d];
        for &i in &images {
            let i = i as usize;
            if i >= d || seen[i] {
                return Err(DessinError::InvalidPermutation(format!(
                    "{images:?} is not a bijection of 0..{d}"
                )));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub(crate) fn from_images_unchecked(images: Vec<u32>) -> Self {
        debug_assert!(Self::from_images(images.clone()).is_ok());
        Permutation { images }
    }

    /// Builds a permutation from disjoint cycles, e.g. `&[&[0, 1, 2]]`.
    pub fn from_cycles(degree: usize, cycles: &[&[u32]]) -> Result<Self> {
        let mut images: Vec<u32> = (0..degree as u32).collect();
        let mut touched = vec![false; degree];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                let b = cycle[(k + 1) % cycle.len()];
                if a as usize >= degree || b as usize >= degree || touched[a as usize] {
                    return Err(DessinError::InvalidPermutation(format!(
                        "cycles {cycles:?} are not disjoint cycles on {degree} points"
                    )));
                }
                touched[a as usize] = true;
                images[a as usize] = b;
            }
        }
        Ok(Permutation { images })
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.images.len()
    }

    #[inline]
    pub fn apply(&self, point: u32) -> u32 {
        self.images[point as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i as u32 == j)
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.degree(), other.degree(), "degree mismatch");
        Permutation {
            images: self
                .images
                .iter()
                .map(|&i| other.images[i as usize])
                .collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u32; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j as usize] = i as u32;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut e: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn first_moved_point(&self) -> Option<u32> {
        self.images
            .iter()
            .enumerate()
            .find(|(i, &j)| *i as u32 != j)
            .map(|(i, _)| i as u32)
    }

    /// Lengths of all cycles, fixed points included.
    pub fn cycle_lengths(&self) -> Vec<u64> {
        let mut seen = vec![false; self.degree()];
        let mut lens = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut len = 0u64;
            let mut i = start;
            while !seen[i] {
                seen[i] = true;
                i = self.images[i] as usize;
                len += 1;
            }
            lens.push(len);
        }
        lens
    }

    /// Exact order: the lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        let mut lens = self.cycle_lengths();
        lens.sort_unstable();
        lens.dedup();
        lens.into_iter()
            .fold(BigUint::from(1u32), |acc, l| acc.lcm(&BigUint::from(l)))
    }

    /// The order when it fits in a `u64`.
    pub fn checked_order(&self) -> Option<u64> {
        let mut lens = self.cycle_lengths();
        lens.sort_unstable();
        lens.dedup();
        lens.into_iter().try_fold(1u64, |acc, l| {
            let g = acc.gcd(&l);
            (acc / g).checked_mul(l)
        })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation({:?})", self.images)
    }
}

/// Cycle notation, with `()` for the identity.
impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut seen = vec![false; self.degree()];
        let mut any = false;
        for start in 0..self.degree() {
            if seen[start] || self.images[start] as usize == start {
                continue;
            }
            any = true;
            write!(f, "(")?;
            let mut i = start;
            let mut first = true;
            while !seen[i] {
                seen[i] = true;
                if !first {
                    write!(f, " ")?;
                }
                write!(f, "{i}")?;
                first = false;
                i = self.images[i] as usize;
            }
            write!(f, ")")?;
        }
        if !any {
            write!(f, "()")?;
        }
        Ok(())
    }
}

impl Mul for &Permutation {
    type Output = Permutation;
    fn mul(self, rhs: &Permutation) -> Permutation {
        self.compose(rhs)
    }
}

/// Order of a permutation as a plain count.
///
/// Panics if the order does not fit in a `u64`; use [`Permutation::order`]
/// for arbitrary degrees.
pub fn element_order(p: &Permutation) -> u64 {
    p.checked_order()
        .expect("element order exceeds u64; use Permutation::order")
}

/// `[x, y] = x⁻¹ y⁻¹ x y`.
pub fn commutator(x: &Permutation, y: &Permutation) -> Permutation {
    x.inverse().compose(&y.inverse()).compose(x).compose(y)
}

pub(crate) fn check_generators(gens: &[Permutation]) -> Result<usize> {
    let first = gens
        .first()
        .ok_or_else(|| DessinError::InvalidPermutation("empty generating set".into()))?;
    let d = first.degree();
    if gens.iter().any(|g| g.degree() != d) {
        return Err(DessinError::InvalidPermutation(
            "generators have different degrees".into(),
        ));
    }
    Ok(d)
}

/// All elements of `⟨gens⟩`, sorted by one-line notation.
///
/// Fails with `CapExceeded` as soon as the closure grows past `cap`.
pub fn enumerate_elements(gens: &[Permutation], cap: usize) -> Result<Vec<Permutation>> {
    let d = check_generators(gens)?;
    assert!(cap >= 1, "cap must be positive");
    let id = Permutation::identity(d);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(id.clone());
    queue.push_back(id);
    while let Some(e) = queue.pop_front() {
        for g in gens {
            let next = e.compose(g);
            if !seen.contains(&next) {
                if seen.len() >= cap {
                    return Err(DessinError::CapExceeded {
                        what: "element enumeration",
                        limit: cap as u64,
                        actual: format!("> {cap}"),
                    });
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyc(d: usize, cycles: &[&[u32]]) -> Permutation {
        Permutation::from_cycles(d, cycles).unwrap()
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::from_images(vec![0, 0, 1]).is_err());
        assert!(Permutation::from_images(vec![0, 3, 1]).is_err());
        assert!(Permutation::from_cycles(4, &[&[0, 1], &[1, 2]]).is_err());
    }

    #[test]
    fn composition_is_left_to_right() {
        let p = cyc(3, &[&[0, 1]]);
        let q = cyc(3, &[&[1, 2]]);
        // 0 -p-> 1 -q-> 2
        assert_eq!((&p * &q).apply(0), 2);
        assert_eq!((&q * &p).apply(0), 1);
    }

    #[test]
    fn orders() {
        assert_eq!(element_order(&Permutation::identity(4)), 1);
        assert_eq!(element_order(&cyc(5, &[&[0, 1], &[2, 3, 4]])), 6);
        assert_eq!(element_order(&cyc(5, &[&[0, 1, 2, 3, 4]])), 5);
        assert_eq!(cyc(5, &[&[0, 1], &[2, 3, 4]]).order(), BigUint::from(6u32));
    }

    #[test]
    fn commutator_edge_cases() {
        let x = cyc(5, &[&[0, 1, 2, 3, 4]]);
        assert!(commutator(&x, &x).is_identity());
        let a = cyc(4, &[&[0, 1]]);
        let b = cyc(4, &[&[2, 3]]);
        assert!(commutator(&a, &b).is_identity());
    }

    #[test]
    fn small_closures() {
        assert_eq!(
            enumerate_elements(&[Permutation::identity(3)], 10)
                .unwrap()
                .len(),
            1
        );
        assert_eq!(
            enumerate_elements(&[cyc(3, &[&[0, 1, 2]])], 10)
                .unwrap()
                .len(),
            3
        );
        let err = enumerate_elements(&[cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1]])], 50);
        assert!(matches!(err, Err(DessinError::CapExceeded { .. })));
    }

    #[test]
    fn display_cycles() {
        assert_eq!(cyc(5, &[&[0, 1], &[2, 3, 4]]).to_string(), "(0 1)(2 3 4)");
        assert_eq!(Permutation::identity(2).to_string(), "()");
    }

    fn arb_perm(max_degree: usize) -> impl Strategy<Value = Permutation> {
        (1..=max_degree)
            .prop_flat_map(|d| Just((0..d as u32).collect::<Vec<_>>()).prop_shuffle())
            .prop_map(|v| Permutation::from_images(v).unwrap())
    }

    fn arb_pair(max_degree: usize) -> impl Strategy<Value = (Permutation, Permutation)> {
        (1..=max_degree).prop_flat_map(|d| {
            let v: Vec<u32> = (0..d as u32).collect();
            (Just(v.clone()).prop_shuffle(), Just(v).prop_shuffle()).prop_map(|(a, b)| {
                (
                    Permutation::from_images(a).unwrap(),
                    Permutation::from_images(b).unwrap(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn inverse_cancels(p in arb_perm(12)) {
            prop_assert!(p.compose(&p.inverse()).is_identity());
            prop_assert!(p.inverse().compose(&p).is_identity());
        }

        #[test]
        fn commutator_order_is_symmetric((x, y) in arb_pair(10)) {
            prop_assert_eq!(commutator(&x, &y).order(), commutator(&y, &x).order());
            prop_assert_eq!(commutator(&x, &y).inverse(), commutator(&y, &x));
        }

        #[test]
        fn power_by_order_is_identity(p in arb_perm(12)) {
            prop_assert!(p.pow(element_order(&p)).is_identity());
        }

        #[test]
        fn closure_ignores_generator_order((x, y) in arb_pair(6)) {
            let a = enumerate_elements(&[x.clone(), y.clone()], 1000).unwrap();
            let b = enumerate_elements(&[y, x], 1000).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
