//! Small finite fields `GF(p^e)` with full addition and multiplication tables.
//!
//! Elements are integers `0..q`, read as base-`p` digit vectors of
//! polynomials modulo a fixed irreducible polynomial. The modulus is the
//! monic irreducible of degree `e` whose coefficient vector
//! `(c_0, .., c_{e-1})` has the least value of `Σ c_i p^i`.

use crate::error::{DessinError, Result};

/// Largest field order we build tables for.
pub const FIELD_CAP: u64 = 1 << 12;

#[derive(Clone, Debug)]
pub struct FiniteField {
    p: u32,
    e: u32,
    q: u32,
    /// Coefficients `c_0..c_{e-1}` of the monic modulus (leading 1 implied).
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    primitive: u32,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `Some((p, e))` when `q = p^e` with `p` prime and `e ≥ 1`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut r = q;
    let mut e = 0;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn digits(mut x: u32, p: u32, e: u32) -> Vec<u32> {
    (0..e)
        .map(|_| {
            let d = x % p;
            x /= p;
            d
        })
        .collect()
}

fn from_digits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplies two digit vectors modulo the monic `modulus`.
fn poly_mul_mod(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let e = modulus.len();
    let mut prod = vec![0u32; 2 * e];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for k in (e..2 * e).rev() {
        let c = prod[k];
        if c != 0 {
            prod[k] = 0;
            // x^e = -(c_0 + .. + c_{e-1} x^{e-1})
            for (i, &m) in modulus.iter().enumerate() {
                prod[k - e + i] = (prod[k - e + i] + (p - m) % p * c) % p;
            }
        }
    }
    prod.truncate(e);
    prod
}

/// A monic polynomial of degree `e ≥ 2` is irreducible over `F_p` iff it has
/// no monic factor of degree `1..=e/2`. Trial division by all of them.
fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let e = modulus.len();
    let mut full: Vec<u32> = modulus.to_vec();
    full.push(1);
    for d in 1..=e / 2 {
        let count = (p as u64).pow(d as u32);
        for code in 0..count {
            let mut divisor = digits(code as u32, p, d as u32);
            divisor.push(1);
            if poly_rem(&full, &divisor, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

fn poly_rem(num: &[u32], den: &[u32], p: u32) -> Vec<u32> {
    // den is monic.
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    while r.len() > dd {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - dd;
        if lead != 0 {
            for (i, &c) in den.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - (lead * c) % p) % p;
            }
        }
        r.pop();
    }
    r
}

impl FiniteField {
    pub fn new(q: u64) -> Result<Self> {
        let (p, e) = prime_power(q)
            .ok_or_else(|| DessinError::Validation(format!("{q} is not a prime power")))?;
        if q > FIELD_CAP {
            return Err(DessinError::CapExceeded {
                what: "field order",
                limit: FIELD_CAP,
                actual: q.to_string(),
            });
        }
        let (p, q) = (p as u32, q as u32);
        let modulus = if e == 1 {
            vec![0]
        } else {
            (0..q)
                .map(|code| digits(code, p, e))
                .find(|m| is_irreducible(m, p))
                .expect("an irreducible polynomial exists in every degree")
        };
        let n = q as usize;
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for a in 0..q {
            let da = digits(a, p, e);
            for b in 0..q {
                let db = digits(b, p, e);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a as usize * n + b as usize] = from_digits(&s, p);
                let m = if e == 1 {
                    vec![(a * b) % p]
                } else {
                    poly_mul_mod(&da, &db, &modulus, p)
                };
                mul[a as usize * n + b as usize] = from_digits(&m, p);
            }
        }
        let neg = (0..q)
            .map(|a| {
                (0..q)
                    .find(|&b| add[a as usize * n + b as usize] == 0)
                    .unwrap()
            })
            .collect();
        let mut inv = vec![0; n];
        for a in 1..q {
            inv[a as usize] = (1..q)
                .find(|&b| mul[a as usize * n + b as usize] == 1)
                .unwrap();
        }
        let mut field = FiniteField {
            p,
            e,
            q,
            modulus,
            add,
            mul,
            neg,
            inv,
            primitive: 0,
        };
        field.primitive = (1..q)
            .find(|&a| field.multiplicative_order(a) == q - 1)
            .expect("the multiplicative group of a finite field is cyclic");
        Ok(field)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    /// Multiplicative inverse; `a` must be non-zero.
    pub fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "zero has no inverse");
        self.inv[a as usize]
    }

    /// Least generator of the multiplicative group.
    pub fn primitive_element(&self) -> u32 {
        self.primitive
    }

    pub fn multiplicative_order(&self, a: u32) -> u32 {
        assert!(a != 0);
        let mut x = a;
        let mut k = 1;
        while x != 1 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_powers() {
        assert_eq!(prime_power(8), Some((2, 3)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(13), Some((13, 1)));
        assert_eq!(prime_power(6), None);
        assert_eq!(prime_power(1), None);
    }

    #[test]
    fn prime_fields_match_modular_arithmetic() {
        for q in [2u32, 3, 5, 7, 11, 13] {
            let f = FiniteField::new(q as u64).unwrap();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.add(a, b), (a + b) % q);
                    assert_eq!(f.mul(a, b), (a * b) % q);
                }
            }
        }
    }

    #[test]
    fn field_axioms_for_extension_fields() {
        for q in [4u32, 8, 9, 16, 25, 27] {
            let f = FiniteField::new(q as u64).unwrap();
            for a in 0..q {
                for b in 0..q {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                        assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
                    }
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
            }
            assert_eq!(f.multiplicative_order(f.primitive_element()), q - 1);
        }
    }

    #[test]
    fn least_moduli() {
        // x^2 + x + 1 over F_2, x^3 + x + 1 over F_2, x^2 + 1 over F_3
        assert_eq!(FiniteField::new(4).unwrap().modulus(), &[1, 1]);
        assert_eq!(FiniteField::new(8).unwrap().modulus(), &[1, 1, 0]);
        assert_eq!(FiniteField::new(9).unwrap().modulus(), &[1, 0]);
    }
}
