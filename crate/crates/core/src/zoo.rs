//! The group families used throughout, their permutation representations and
//! the descriptor grammar that names them on the command line:
//!
//! ```text
//! C<n> | D<n> | V4 | S<n> | A<n> | PSL2_<q> | PGL2_<q> | SL2_<q> | F_<p>_<q>
//! ```
//!
//! Parsing is case-insensitive and rejects whitespace.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;

use crate::error::{DessinError, Result};
use crate::field::{is_prime, prime_power, FiniteField, FIELD_CAP};
use crate::group::GroupHandle;
use crate::perm::Permutation;

/// Largest natural degree accepted for `S_n`, `A_n`, `C_n` and `D_n`.
pub const MAX_NATURAL_DEGREE: u32 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Cyclic,
    Dihedral,
    Klein4,
    Symmetric,
    Alternating,
    Psl2,
    Pgl2,
    Sl2,
    FrobeniusPQ,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupDescriptor {
    Cyclic(u32),
    /// Dihedral group of order `2n`, `n ≥ 3`. `D2` parses to [`GroupDescriptor::Klein4`].
    Dihedral(u32),
    Klein4,
    Symmetric(u32),
    Alternating(u32),
    Psl2(u32),
    Pgl2(u32),
    Sl2(u32),
    /// Non-abelian group of order `pq` with `q | p - 1`.
    FrobeniusPQ {
        p: u32,
        q: u32,
    },
}

impl GroupDescriptor {
    pub fn family(&self) -> Family {
        match self {
            GroupDescriptor::Cyclic(_) => Family::Cyclic,
            GroupDescriptor::Dihedral(_) => Family::Dihedral,
            GroupDescriptor::Klein4 => Family::Klein4,
            GroupDescriptor::Symmetric(_) => Family::Symmetric,
            GroupDescriptor::Alternating(_) => Family::Alternating,
            GroupDescriptor::Psl2(_) => Family::Psl2,
            GroupDescriptor::Pgl2(_) => Family::Pgl2,
            GroupDescriptor::Sl2(_) => Family::Sl2,
            GroupDescriptor::FrobeniusPQ { .. } => Family::FrobeniusPQ,
        }
    }

    pub fn params(&self) -> Vec<u32> {
        match *self {
            GroupDescriptor::Cyclic(n)
            | GroupDescriptor::Dihedral(n)
            | GroupDescriptor::Symmetric(n)
            | GroupDescriptor::Alternating(n)
            | GroupDescriptor::Psl2(n)
            | GroupDescriptor::Pgl2(n)
            | GroupDescriptor::Sl2(n) => vec![n],
            GroupDescriptor::Klein4 => vec![],
            GroupDescriptor::FrobeniusPQ { p, q } => vec![p, q],
        }
    }

    /// Checks the family's parameter constraints, normalizing `D2` to `V4`.
    pub fn validate(self) -> Result<Self> {
        let bad = |msg: String| Err(DessinError::Validation(msg));
        match self {
            GroupDescriptor::Cyclic(n)
            | GroupDescriptor::Symmetric(n)
            | GroupDescriptor::Alternating(n) => {
                if n < 1 {
                    return bad(format!("{self}: n must be at least 1"));
                }
                if n > MAX_NATURAL_DEGREE {
                    return bad(format!("{self}: degree above {MAX_NATURAL_DEGREE}"));
                }
                Ok(self)
            }
            GroupDescriptor::Dihedral(n) => match n {
                0 | 1 => bad(format!("D{n}: dihedral groups need n ≥ 2")),
                2 => Ok(GroupDescriptor::Klein4),
                n if n > MAX_NATURAL_DEGREE => {
                    bad(format!("D{n}: degree above {MAX_NATURAL_DEGREE}"))
                }
                _ => Ok(self),
            },
            GroupDescriptor::Klein4 => Ok(self),
            GroupDescriptor::Psl2(q) | GroupDescriptor::Pgl2(q) | GroupDescriptor::Sl2(q) => {
                if prime_power(q as u64).is_none() {
                    return bad(format!("{self}: {q} is not a prime power"));
                }
                if q as u64 > FIELD_CAP {
                    return bad(format!("{self}: field order above {FIELD_CAP}"));
                }
                Ok(self)
            }
            GroupDescriptor::FrobeniusPQ { p, q } => {
                if !is_prime(p as u64) || !is_prime(q as u64) {
                    return bad(format!("{self}: p and q must be prime"));
                }
                if (p - 1) % q != 0 {
                    return bad(format!("{self}: q must divide p - 1"));
                }
                Ok(self)
            }
        }
    }

    /// Order given by the family's closed formula.
    pub fn expected_order(&self) -> BigUint {
        let big = |x: u64| BigUint::from(x);
        match *self {
            GroupDescriptor::Cyclic(n) => big(n as u64),
            GroupDescriptor::Dihedral(n) => big(2 * n as u64),
            GroupDescriptor::Klein4 => big(4),
            GroupDescriptor::Symmetric(n) => (1..=n as u64).fold(big(1), |a, k| a * k),
            GroupDescriptor::Alternating(n) => {
                let f = (1..=n as u64).fold(big(1), |a, k| a * k);
                if n >= 2 {
                    f / 2u32
                } else {
                    f
                }
            }
            GroupDescriptor::Psl2(q) => {
                let q = q as u64;
                big(q * (q * q - 1) / if q % 2 == 1 { 2 } else { 1 })
            }
            GroupDescriptor::Pgl2(q) | GroupDescriptor::Sl2(q) => {
                let q = q as u64;
                big(q * (q * q - 1))
            }
            GroupDescriptor::FrobeniusPQ { p, q } => big(p as u64 * q as u64),
        }
    }

    /// True for families whose members are non-abelian simple.
    pub fn is_simple_family_member(&self) -> bool {
        match *self {
            GroupDescriptor::Alternating(n) => n >= 5,
            GroupDescriptor::Psl2(q) => q >= 4,
            _ => false,
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupDescriptor::Cyclic(n) => write!(f, "C{n}"),
            GroupDescriptor::Dihedral(n) => write!(f, "D{n}"),
            GroupDescriptor::Klein4 => write!(f, "V4"),
            GroupDescriptor::Symmetric(n) => write!(f, "S{n}"),
            GroupDescriptor::Alternating(n) => write!(f, "A{n}"),
            GroupDescriptor::Psl2(q) => write!(f, "PSL2_{q}"),
            GroupDescriptor::Pgl2(q) => write!(f, "PGL2_{q}"),
            GroupDescriptor::Sl2(q) => write!(f, "SL2_{q}"),
            GroupDescriptor::FrobeniusPQ { p, q } => write!(f, "F_{p}_{q}"),
        }
    }
}

fn parse_number(text: &str, whole: &str) -> Result<u32> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(DessinError::Parse(format!(
            "malformed group descriptor {whole:?}"
        )));
    }
    text.parse::<u32>()
        .map_err(|_| DessinError::Parse(format!("number out of range in {whole:?}")))
}

/// Parses and validates a descriptor such as `A5`, `PSL2_7` or `F_7_3`.
pub fn parse_descriptor(text: &str) -> Result<GroupDescriptor> {
    let upper = text.to_ascii_uppercase();
    let num = |s: &str| parse_number(s, text);
    let desc = if let Some(rest) = upper.strip_prefix("PSL2_") {
        GroupDescriptor::Psl2(num(rest)?)
    } else if let Some(rest) = upper.strip_prefix("PGL2_") {
        GroupDescriptor::Pgl2(num(rest)?)
    } else if let Some(rest) = upper.strip_prefix("SL2_") {
        GroupDescriptor::Sl2(num(rest)?)
    } else if let Some(rest) = upper.strip_prefix("F_") {
        let (p, q) = rest
            .split_once('_')
            .ok_or_else(|| DessinError::Parse(format!("expected F_<p>_<q>, got {text:?}")))?;
        GroupDescriptor::FrobeniusPQ {
            p: num(p)?,
            q: num(q)?,
        }
    } else if upper == "V4" {
        GroupDescriptor::Klein4
    } else if let Some(rest) = upper.strip_prefix('C') {
        GroupDescriptor::Cyclic(num(rest)?)
    } else if let Some(rest) = upper.strip_prefix('D') {
        GroupDescriptor::Dihedral(num(rest)?)
    } else if let Some(rest) = upper.strip_prefix('S') {
        GroupDescriptor::Symmetric(num(rest)?)
    } else if let Some(rest) = upper.strip_prefix('A') {
        GroupDescriptor::Alternating(num(rest)?)
    } else {
        return Err(DessinError::Parse(format!(
            "unknown group descriptor {text:?}"
        )));
    };
    desc.validate()
}

impl FromStr for GroupDescriptor {
    type Err = DessinError;
    fn from_str(s: &str) -> Result<Self> {
        parse_descriptor(s)
    }
}

fn perm(images: Vec<u32>) -> Permutation {
    Permutation::from_images(images).expect("constructor produced a bijection")
}

fn cycle_on(degree: usize, points: impl Iterator<Item = u32>) -> Permutation {
    let pts: Vec<u32> = points.collect();
    Permutation::from_cycles(degree, &[&pts]).expect("constructor produced a cycle")
}

type Matrix = [u32; 4];

/// `[[a, b], [c, d]]` acting on the column vector `(x, y)`.
fn mat_apply(f: &FiniteField, m: &Matrix, x: u32, y: u32) -> (u32, u32) {
    let [a, b, c, d] = *m;
    (
        f.add(f.mul(a, x), f.mul(b, y)),
        f.add(f.mul(c, x), f.mul(d, y)),
    )
}

/// Points of the projective line: `x ↦ (x : 1)` for `x < q`, `q ↦ (1 : 0)`.
fn projective_action(f: &FiniteField, m: &Matrix) -> Permutation {
    let q = f.order();
    let images = (0..=q)
        .map(|pt| {
            let (x, y) = if pt == q { (1, 0) } else { (pt, 1) };
            let (u, v) = mat_apply(f, m, x, y);
            if v == 0 {
                q
            } else {
                f.mul(u, f.inv(v))
            }
        })
        .collect();
    perm(images)
}

/// Non-zero column vectors `(x, y)` indexed by `x + q y - 1`.
fn linear_action(f: &FiniteField, m: &Matrix) -> Permutation {
    let q = f.order();
    let images = (1..q * q)
        .map(|code| {
            let (u, v) = mat_apply(f, m, code % q, code / q);
            u + q * v - 1
        })
        .collect();
    perm(images)
}

/// Generators of `SL2(q)`: the unipotent, the Weyl element and a diagonal torus element.
fn sl2_generators(f: &FiniteField) -> Vec<Matrix> {
    let w = f.primitive_element();
    let minus_one = f.neg(1);
    vec![[1, 1, 0, 1], [0, minus_one, 1, 0], [w, 0, 0, f.inv(w)]]
}

/// Smallest `h` with multiplicative order exactly `q` modulo `p`.
pub fn frobenius_multiplier(p: u32, q: u32) -> u32 {
    (2..p)
        .find(|&h| {
            let mut x = h as u64;
            let mut k = 1;
            while x != 1 {
                x = x * h as u64 % p as u64;
                k += 1;
            }
            k == q
        })
        .expect("q | p - 1 guarantees an element of order q")
}

/// `C_p ⋊ C_q` on `p` points, generated by `x ↦ x + 1` and `x ↦ h x`.
pub fn frobenius_group(p: u32, q: u32, h: u32) -> Result<GroupHandle> {
    let translate = cycle_on(p as usize, 0..p);
    let scale = perm(
        (0..p)
            .map(|x| ((x as u64 * h as u64) % p as u64) as u32)
            .collect(),
    );
    GroupHandle::new(format!("F_{p}_{q}"), vec![translate, scale])
}

/// Faithful permutation representation of a validated descriptor.
pub fn construct_group(desc: &GroupDescriptor) -> Result<GroupHandle> {
    let desc = desc.validate()?;
    let label = desc.to_string();
    let gens = match desc {
        GroupDescriptor::Cyclic(n) => vec![cycle_on(n as usize, 0..n)],
        GroupDescriptor::Dihedral(n) => vec![
            cycle_on(n as usize, 0..n),
            perm((0..n).map(|i| (n - i) % n).collect()),
        ],
        GroupDescriptor::Klein4 => vec![perm(vec![1, 0, 3, 2]), perm(vec![2, 3, 0, 1])],
        GroupDescriptor::Symmetric(n) => {
            if n == 1 {
                vec![Permutation::identity(1)]
            } else {
                vec![cycle_on(n as usize, 0..n), cycle_on(n as usize, 0..2)]
            }
        }
        GroupDescriptor::Alternating(n) => {
            if n < 3 {
                vec![Permutation::identity(n as usize)]
            } else {
                let long = if n % 2 == 1 {
                    cycle_on(n as usize, 0..n)
                } else {
                    cycle_on(n as usize, 1..n)
                };
                vec![long, cycle_on(n as usize, 0..3)]
            }
        }
        GroupDescriptor::Psl2(q) => {
            let f = FiniteField::new(q as u64)?;
            sl2_generators(&f)
                .iter()
                .map(|m| projective_action(&f, m))
                .collect()
        }
        GroupDescriptor::Pgl2(q) => {
            let f = FiniteField::new(q as u64)?;
            let mut mats = sl2_generators(&f);
            mats.push([f.primitive_element(), 0, 0, 1]);
            mats.iter().map(|m| projective_action(&f, m)).collect()
        }
        GroupDescriptor::Sl2(q) => {
            let f = FiniteField::new(q as u64)?;
            sl2_generators(&f)
                .iter()
                .map(|m| linear_action(&f, m))
                .collect()
        }
        GroupDescriptor::FrobeniusPQ { p, q } => {
            return frobenius_group(p, q, frobenius_multiplier(p, q));
        }
    };
    GroupHandle::new(label, gens)
}

/// Number-theoretic Möbius function.
pub fn classical_moebius(n: u64) -> i64 {
    assert!(n >= 1, "Möbius function is defined on positive integers");
    let mut n = n;
    let mut sign = 1;
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            sign = -sign;
        }
        d += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_examples() {
        assert_eq!(
            parse_descriptor("A5").unwrap(),
            GroupDescriptor::Alternating(5)
        );
        assert_eq!(
            parse_descriptor("a5").unwrap(),
            GroupDescriptor::Alternating(5)
        );
        assert_eq!(
            parse_descriptor("F_7_3").unwrap(),
            GroupDescriptor::FrobeniusPQ { p: 7, q: 3 }
        );
        assert_eq!(
            parse_descriptor("psl2_8").unwrap(),
            GroupDescriptor::Psl2(8)
        );
        assert_eq!(parse_descriptor("D2").unwrap(), GroupDescriptor::Klein4);
        assert_eq!(parse_descriptor("SL2_5").unwrap(), GroupDescriptor::Sl2(5));
    }

    #[test]
    fn rejects_bad_descriptors() {
        assert!(matches!(
            parse_descriptor("PSL2_6"),
            Err(DessinError::Validation(_))
        ));
        assert!(matches!(
            parse_descriptor("F_7_5"),
            Err(DessinError::Validation(_))
        ));
        assert!(matches!(
            parse_descriptor("F_8_7"),
            Err(DessinError::Validation(_))
        ));
        assert!(matches!(
            parse_descriptor("C0"),
            Err(DessinError::Validation(_))
        ));
        assert!(matches!(
            parse_descriptor("D1"),
            Err(DessinError::Validation(_))
        ));
        for bad in [
            "", "A 5", " A5", "A5 ", "X5", "C", "C-3", "C+3", "F_7", "PSL2-7", "V5",
        ] {
            assert!(
                matches!(parse_descriptor(bad), Err(DessinError::Parse(_))),
                "{bad:?} should be a parse error"
            );
        }
    }

    #[test]
    fn orders_match_closed_forms() {
        for text in [
            "C1", "C6", "D3", "D10", "V4", "S1", "S4", "A1", "A3", "A4", "A5", "A6", "PSL2_2",
            "PSL2_3", "PSL2_4", "PSL2_5", "PSL2_7", "PSL2_8", "PSL2_9", "PSL2_11", "PSL2_13",
            "PGL2_5", "PGL2_4", "PGL2_9", "SL2_3", "SL2_5", "SL2_4", "F_7_3", "F_13_3", "F_11_5",
        ] {
            let d = parse_descriptor(text).unwrap();
            let g = construct_group(&d).unwrap();
            assert_eq!(g.order(), &d.expected_order(), "{text}");
        }
    }

    #[test]
    fn examples() {
        let c6 = construct_group(&parse_descriptor("C6").unwrap()).unwrap();
        assert_eq!((c6.degree(), c6.order_u64()), (6, Some(6)));
        let l27 = construct_group(&parse_descriptor("PSL2_7").unwrap()).unwrap();
        assert_eq!((l27.degree(), l27.order_u64()), (8, Some(168)));
        let f73 = construct_group(&parse_descriptor("F_7_3").unwrap()).unwrap();
        assert_eq!(f73.degree(), 7);
        assert_eq!(f73.table().unwrap().len(), 21);
    }

    fn is_transitive(g: &GroupHandle) -> bool {
        let d = g.degree();
        let mut seen = vec![false; d];
        let mut stack = vec![0u32];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for s in g.generators() {
                let q = s.apply(p);
                if !seen[q as usize] {
                    seen[q as usize] = true;
                    stack.push(q);
                }
            }
        }
        seen.into_iter().all(|b| b)
    }

    #[test]
    fn linear_groups_are_transitive() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let psl = construct_group(&GroupDescriptor::Psl2(q)).unwrap();
            assert_eq!(psl.degree(), q as usize + 1);
            assert!(is_transitive(&psl));
            assert!(is_transitive(
                &construct_group(&GroupDescriptor::Pgl2(q)).unwrap()
            ));
            let sl = construct_group(&GroupDescriptor::Sl2(q)).unwrap();
            assert_eq!(sl.degree(), (q * q - 1) as usize);
            assert!(is_transitive(&sl));
        }
    }

    #[test]
    fn frobenius_multiplier_is_minimal() {
        assert_eq!(frobenius_multiplier(7, 3), 2);
        assert_eq!(frobenius_multiplier(13, 3), 3);
        assert_eq!(frobenius_multiplier(11, 5), 3);
    }

    #[test]
    fn moebius_values() {
        assert_eq!(classical_moebius(1), 1);
        assert_eq!(classical_moebius(6), 1);
        assert_eq!(classical_moebius(4), 0);
        assert_eq!(classical_moebius(30), -1);
        assert_eq!(classical_moebius(7), -1);
    }

    fn arb_descriptor() -> impl Strategy<Value = GroupDescriptor> {
        prop_oneof![
            (1u32..500).prop_map(GroupDescriptor::Cyclic),
            (3u32..500).prop_map(GroupDescriptor::Dihedral),
            Just(GroupDescriptor::Klein4),
            (1u32..50).prop_map(GroupDescriptor::Symmetric),
            (1u32..50).prop_map(GroupDescriptor::Alternating),
            prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32])
                .prop_flat_map(|q| prop_oneof![
                    Just(GroupDescriptor::Psl2(q)),
                    Just(GroupDescriptor::Pgl2(q)),
                    Just(GroupDescriptor::Sl2(q)),
                ]),
            prop::sample::select(vec![
                (7u32, 3u32),
                (13, 3),
                (11, 5),
                (31, 5),
                (5, 2),
                (29, 7)
            ])
            .prop_map(|(p, q)| GroupDescriptor::FrobeniusPQ { p, q }),
        ]
    }

    proptest! {
        #[test]
        fn render_then_parse_is_identity(d in arb_descriptor()) {
            prop_assert_eq!(parse_descriptor(&d.to_string()).unwrap(), d);
            prop_assert_eq!(parse_descriptor(&d.to_string().to_lowercase()).unwrap(), d);
        }
    }
}
