//! Closed forms for `r(G)` and the counting window for simple groups.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::census::Census;
use crate::error::{DessinError, Result};
use crate::field::{is_prime, prime_power};
use crate::group::{ElemId, IDENTITY};
use crate::lattice::maximal_classes;
use crate::zoo::{classical_moebius, GroupDescriptor};

/// What a closed form can be asked about: a constructible group, or a
/// Suzuki group `Sz(2^e)` given by its exponent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedFormTarget {
    Group(GroupDescriptor),
    Suzuki(u32),
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `r(C_n) = n Π_{p | n} (1 + 1/p)`.
pub fn r_cyclic(n: u64) -> BigUint {
    factorize(n)
        .into_iter()
        .fold(BigUint::one(), |acc, (p, k)| {
            acc * BigUint::from(p).pow(k - 1) * (p + 1)
        })
}

/// `r(L2(p)) = (p + 1)(p² − 2p − 1)/4 − ε` for primes `p ≥ 5`, with `ε`
/// chosen by `p` mod 5 and mod 8. `p = 5` falls in the `±2 mod 5` case.
pub fn r_l2_prime(p: u64) -> Result<BigUint> {
    if p < 5 || !is_prime(p) {
        return Err(DessinError::Validation(format!(
            "L2(p) formula needs a prime p ≥ 5, got {p}"
        )));
    }
    let near_one_mod5 = matches!(p % 5, 1 | 4);
    let near_one_mod8 = matches!(p % 8, 1 | 7);
    let eps: u64 = match (near_one_mod5, near_one_mod8) {
        (true, true) => 49,
        (true, false) => 40,
        (false, true) => 11,
        (false, false) => 2,
    };
    let p = BigUint::from(p);
    let main = (&p + 1u32) * (&p * &p - 2u32 * &p - 1u32);
    let (q, rem) = main.div_rem(&BigUint::from(4u32));
    assert!(rem.is_zero());
    Ok(q - eps)
}

/// `(1/e) Σ_{f | e} μ(e/f) · term(f)`, with the divisor sum evaluated once
/// per divisor.
fn moebius_sum(e: u32, term: impl Fn(u32) -> BigInt) -> BigUint {
    let divisors: Vec<u32> = (1..=e).filter(|f| e.is_multiple_of(*f)).collect();
    let total: BigInt = divisors
        .iter()
        .map(|&f| BigInt::from(classical_moebius((e / f) as u64)) * term(f))
        .sum();
    let (q, rem) = total.div_rem(&BigInt::from(e));
    assert!(
        rem.is_zero() && !q.is_negative(),
        "divisor sum is not a count"
    );
    q.to_biguint().unwrap()
}

fn pow2(k: u32) -> BigInt {
    BigInt::one() << k as usize
}

/// `r(L2(2^e))` for `e > 1`.
pub fn r_l2_even(e: u32) -> Result<BigUint> {
    if e < 2 {
        return Err(DessinError::Validation(format!(
            "L2(2^e) formula needs e > 1, got {e}"
        )));
    }
    Ok(moebius_sum(e, |f| pow2(f) * (pow2(2 * f) - pow2(f) - 3)))
}

/// `r(Sz(2^e))` for odd `e > 1`.
pub fn r_suzuki(e: u32) -> Result<BigUint> {
    if e < 3 || e.is_multiple_of(2) {
        return Err(DessinError::Validation(format!(
            "Sz(2^e) formula needs odd e > 1, got {e}"
        )));
    }
    Ok(moebius_sum(e, |f| {
        pow2(f) * (pow2(4 * f) - pow2(3 * f) - 9)
    }))
}

/// Values of `r(G)` that were computed once and published without a formula.
pub fn published_r(desc: &GroupDescriptor) -> Option<u64> {
    match *desc {
        GroupDescriptor::Alternating(4) => Some(4),
        GroupDescriptor::Symmetric(4) => Some(9),
        GroupDescriptor::Alternating(5) => Some(19),
        GroupDescriptor::Alternating(6) | GroupDescriptor::Psl2(9) => Some(53),
        GroupDescriptor::Sl2(5) => Some(76),
        _ => None,
    }
}

pub fn closed_form_r(target: ClosedFormTarget) -> Result<BigUint> {
    let desc = match target {
        ClosedFormTarget::Suzuki(e) => return r_suzuki(e),
        ClosedFormTarget::Group(d) => d,
    };
    if let Some(v) = published_r(&desc) {
        return Ok(BigUint::from(v));
    }
    match desc {
        GroupDescriptor::Cyclic(n) => Ok(r_cyclic(n as u64)),
        GroupDescriptor::Dihedral(n) if n >= 3 => Ok(BigUint::from(3u32)),
        GroupDescriptor::Symmetric(3) => Ok(BigUint::from(3u32)),
        GroupDescriptor::Klein4 => Ok(BigUint::one()),
        GroupDescriptor::FrobeniusPQ { q, .. } => Ok(BigUint::from(q as u64 * q as u64 - 1)),
        GroupDescriptor::Psl2(q) => match prime_power(q as u64) {
            Some((p, 1)) if p >= 5 => r_l2_prime(p),
            Some((2, e)) if e > 1 => r_l2_even(e),
            _ => Err(DessinError::UnsupportedFamily(format!(
                "no closed form for {desc}"
            ))),
        },
        _ => Err(DessinError::UnsupportedFamily(format!(
            "no closed form for {desc}"
        ))),
    }
}

/// Whether the group generated by all commutators is the whole group.
pub fn is_perfect(census: &Census) -> bool {
    let t = census.table();
    let n = t.len();
    let mut seen = vec![false; n];
    let mut gens: Vec<ElemId> = Vec::new();
    for x in 0..n as ElemId {
        for &g in t.generator_ids() {
            let c = t.commutator(x, g);
            if !seen[c as usize] {
                seen[c as usize] = true;
                gens.push(c);
            }
        }
    }
    // The normal closure of [G, gens(G)] is G'; close under products and conjugation.
    let mut members = vec![false; n];
    members[IDENTITY as usize] = true;
    let mut list = vec![IDENTITY];
    let mut head = 0;
    while head < list.len() {
        let e = list[head];
        head += 1;
        let nexts = gens.iter().map(|&c| t.mul(e, c)).chain(
            t.generator_ids()
                .iter()
                .map(|&g| t.mul(t.mul(t.inv(g), e), g)),
        );
        for f in nexts.collect::<Vec<_>>() {
            if !members[f as usize] {
                members[f as usize] = true;
                list.push(f);
            }
        }
    }
    list.len() == n
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundWindow {
    /// `(1 − Σ 1/|G:M_i|) · |G|/|Out G|`.
    #[serde(serialize_with = "crate::report::rational")]
    pub lower: BigRational,
    /// `|G|/|Out G|`.
    #[serde(serialize_with = "crate::report::rational")]
    pub upper: BigRational,
    pub maximal_indices: Vec<usize>,
}

impl BoundWindow {
    pub fn contains(&self, r: &BigUint) -> bool {
        let r = BigRational::from_integer(BigInt::from(r.clone()));
        self.lower <= r && r <= self.upper
    }
}

/// The window `[ (1 − Σ 1/|G:M_i|)|G|/|Out G|, |G|/|Out G| ]` containing
/// `r(G)` for a perfect group with trivial center.
pub fn simple_bound_window(census: &Census) -> Result<BoundWindow> {
    let t = census.table();
    if t.center().len() != 1 {
        return Err(DessinError::NotApplicable(format!(
            "{} has a nontrivial center",
            census.group().label()
        )));
    }
    if !is_perfect(census) {
        return Err(DessinError::NotApplicable(format!(
            "{} is not perfect",
            census.group().label()
        )));
    }
    let indices: Vec<usize> = maximal_classes(census.lattice())
        .iter()
        .map(|c| c.index as usize)
        .collect();
    let upper = BigRational::new(
        BigInt::from(t.len()),
        BigInt::from(census.aut().out_order()),
    );
    let deficit: BigRational = indices
        .iter()
        .map(|&i| BigRational::new(BigInt::one(), BigInt::from(i)))
        .sum();
    let lower = (BigRational::one() - deficit) * &upper;
    Ok(BoundWindow {
        lower,
        upper,
        maximal_indices: indices,
    })
}

/// Every non-identity element lies in some generating pair.
pub fn generating_pair_coverage(census: &Census) -> bool {
    let n = census.table().len() as ElemId;
    (1..n).all(|x| (0..n).any(|y| census.class_of(x, y).is_some()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclic_values() {
        assert_eq!(r_cyclic(1), BigUint::one());
        assert_eq!(r_cyclic(2), BigUint::from(3u32));
        assert_eq!(r_cyclic(12), BigUint::from(24u32));
    }

    #[test]
    fn l2_prime_values() {
        for (p, r) in [(5u64, 19u32), (7, 57), (11, 254), (13, 495)] {
            assert_eq!(r_l2_prime(p).unwrap(), BigUint::from(r));
        }
        assert!(r_l2_prime(9).is_err());
    }

    #[test]
    fn l2_even_values() {
        assert_eq!(r_l2_even(2).unwrap(), BigUint::from(19u32));
        assert_eq!(r_l2_even(3).unwrap(), BigUint::from(142u32));
        assert!(r_l2_even(1).is_err());
    }

    #[test]
    fn suzuki_domain() {
        assert!(r_suzuki(2).is_err());
        assert!(r_suzuki(1).is_err());
        assert!(r_suzuki(5).is_ok());
    }

    #[test]
    fn unsupported_families() {
        assert!(matches!(
            closed_form_r(ClosedFormTarget::Group(GroupDescriptor::Symmetric(5))),
            Err(DessinError::UnsupportedFamily(_))
        ));
        assert_eq!(
            closed_form_r(ClosedFormTarget::Group(GroupDescriptor::Psl2(8))).unwrap(),
            BigUint::from(142u32)
        );
    }
}
