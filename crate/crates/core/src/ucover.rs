//! The universal cover: the subgroup of `G^r` generated by the
//! representative pairs of all (or some) classes, one block per class.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::bsgs::bsgs_order;
use crate::census::{riemann_hurwitz_genus, Census};
use crate::error::{DessinError, Result};
use crate::field::{is_prime, prime_power};
use crate::formulas::{closed_form_r, ClosedFormTarget};
use crate::perm::Permutation;
use crate::tsystems::TSystemReport;
use crate::zoo::GroupDescriptor;

pub const MAX_COVER_DEGREE: u64 = 1_000_000;

/// How each block represents `G`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockLayout {
    /// The constructed permutation representation of `G`.
    #[default]
    Natural,
    /// `G` acting on itself by right multiplication.
    Regular,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoverScope {
    WholeCensus,
    Orbit(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UCoverRecord {
    pub group: String,
    /// Number of blocks.
    pub r: usize,
    pub degree: u64,
    #[serde(with = "crate::report::decimal")]
    pub order: BigUint,
    #[serde(rename = "type")]
    pub cover_type: [u64; 3],
    #[serde(with = "crate::report::decimal")]
    pub genus: BigUint,
    pub scope: CoverScope,
}

fn block_degree(census: &Census, layout: BlockLayout) -> usize {
    match layout {
        BlockLayout::Natural => census.group().degree(),
        BlockLayout::Regular => census.table().len(),
    }
}

/// Block-diagonal generators, block `i` carrying the representative of `classes[i]`.
pub fn ucover_generators(
    census: &Census,
    classes: &[usize],
    layout: BlockLayout,
) -> Result<(Permutation, Permutation)> {
    let d = block_degree(census, layout);
    let degree = classes.len() as u64 * d as u64;
    if degree > MAX_COVER_DEGREE {
        return Err(DessinError::DegreeCapExceeded {
            degree,
            cap: MAX_COVER_DEGREE,
        });
    }
    let t = census.table();
    let mut xs = Vec::with_capacity(degree as usize);
    let mut ys = Vec::with_capacity(degree as usize);
    for (i, &c) in classes.iter().enumerate() {
        let (x, y) = census.classes()[c].rep;
        let offset = (i * d) as u32;
        match layout {
            BlockLayout::Natural => {
                xs.extend(t.element(x).images().iter().map(|&p| p + offset));
                ys.extend(t.element(y).images().iter().map(|&p| p + offset));
            }
            BlockLayout::Regular => {
                xs.extend((0..d as u32).map(|g| t.mul(g, x) + offset));
                ys.extend((0..d as u32).map(|g| t.mul(g, y) + offset));
            }
        }
    }
    Ok((
        Permutation::from_images_unchecked(xs),
        Permutation::from_images_unchecked(ys),
    ))
}

/// Cover for all classes, or for one orbit of the Nielsen action.
pub fn ucover_record(
    census: &Census,
    orbit: Option<(&TSystemReport, usize)>,
    layout: BlockLayout,
) -> Result<UCoverRecord> {
    let (classes, scope) = match orbit {
        None => ((0..census.r()).collect::<Vec<_>>(), CoverScope::WholeCensus),
        Some((report, id)) => {
            let o = report.orbits.get(id).ok_or_else(|| {
                DessinError::Validation(format!("orbit {id} out of range (ν = {})", report.nu))
            })?;
            (o.classes.clone(), CoverScope::Orbit(id))
        }
    };
    let (x, y) = ucover_generators(census, &classes, layout)?;
    let order = bsgs_order(&[x.clone(), y])?;

    let g = BigUint::from(census.table().len());
    let full = g.pow(classes.len() as u32);
    assert!(full.is_multiple_of(&order), "cover order must divide |G|^r");
    assert!(
        order.is_multiple_of(&g),
        "cover order must be a multiple of |G|"
    );

    let mut cover_type = [1u64; 3];
    for &c in &classes {
        let t = census.classes()[c].dessin_type;
        for k in 0..3 {
            cover_type[k] = cover_type[k].lcm(&t[k]);
        }
    }
    Ok(UCoverRecord {
        group: census.group().label().to_string(),
        r: classes.len(),
        degree: x.degree() as u64,
        genus: riemann_hurwitz_genus(cover_type, &order),
        order,
        cover_type,
        scope,
    })
}

/// Exponent of `A_n`: odd prime powers up to `n`, powers of 2 up to `n − 2`.
fn alternating_exponent(n: u64) -> u64 {
    (2..=n)
        .filter(|&p| is_prime(p))
        .map(|p| {
            let limit = if p == 2 { n.saturating_sub(2) } else { n };
            let mut q = 1;
            while q * p <= limit {
                q *= p;
            }
            q
        })
        .product()
}

/// Exponent of `L2(q)`.
fn psl2_exponent(q: u64) -> u64 {
    let (p, _) = prime_power(q).expect("prime power");
    if p == 2 {
        2u64.lcm(&(q - 1)).lcm(&(q + 1))
    } else {
        p.lcm(&((q - 1) / 2)).lcm(&q.div_ceil(2))
    }
}

/// The cover predicted by closed forms alone.
///
/// The dihedral entry is the published `4n³`. For even `n` the block
/// construction gives `n³/2` instead, so the two routes only agree for odd `n`.
pub fn closed_form_ucover(desc: &GroupDescriptor) -> Result<UCoverRecord> {
    let r_of = |d: &GroupDescriptor| -> Result<usize> {
        let r = closed_form_r(ClosedFormTarget::Group(*d))?;
        Ok(r.try_into().expect("class count fits in usize"))
    };
    let (r, degree, order, e): (usize, u64, BigUint, u64) = match *desc {
        GroupDescriptor::Cyclic(n) => {
            let n = n as u64;
            (r_of(desc)?, n, BigUint::from(n * n), n)
        }
        GroupDescriptor::Klein4 => (1, 4, BigUint::from(4u32), 2),
        GroupDescriptor::Dihedral(n) => {
            let n = n as u64;
            (3, n, BigUint::from(4 * n * n * n), n.lcm(&2))
        }
        GroupDescriptor::FrobeniusPQ { p, q } => {
            let (p, q) = (p as u64, q as u64);
            let order = BigUint::from(p).pow((q * q - 1) as u32) * BigUint::from(q * q);
            ((q * q - 1) as usize, p, order, p * q)
        }
        GroupDescriptor::Alternating(n) if n >= 5 => {
            let r = r_of(desc)?;
            let g = desc.expected_order();
            (r, n as u64, g.pow(r as u32), alternating_exponent(n as u64))
        }
        GroupDescriptor::Psl2(q) if desc.is_simple_family_member() => {
            let r = r_of(desc)?;
            let g = desc.expected_order();
            (r, q as u64 + 1, g.pow(r as u32), psl2_exponent(q as u64))
        }
        _ => {
            return Err(DessinError::UnsupportedFamily(format!(
                "no closed-form cover for {desc}"
            )))
        }
    };
    let cover_type = [e; 3];
    Ok(UCoverRecord {
        group: desc.to_string(),
        r,
        degree: r as u64 * degree,
        genus: riemann_hurwitz_genus(cover_type, &order),
        order,
        cover_type,
        scope: CoverScope::WholeCensus,
    })
}

/// Genus of a cover of type `(e, e, e)` and order `|G|^r`:
/// `1 + (e − 3)/(2e) · |G|^r`.
pub fn simple_cover_genus(group_order: u64, r: u32, e: u64) -> BigUint {
    let order = BigUint::from(group_order).pow(r);
    let num = &order * (e - 3);
    let (q, rem) = num.div_rem(&BigUint::from(2 * e));
    assert!(rem.is_zero());
    q + BigUint::one()
}

/// `X̄ Ȳ = Ȳ X̄`: the cover of an abelian group is abelian.
pub fn generators_commute(x: &Permutation, y: &Permutation) -> bool {
    x.compose(y) == y.compose(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::dessin_census;
    use crate::zoo::{construct_group, parse_descriptor};
    use std::sync::Arc;

    fn census(text: &str) -> Census {
        let g = construct_group(&parse_descriptor(text).unwrap()).unwrap();
        dessin_census(Arc::new(g)).unwrap()
    }

    #[test]
    fn exponents() {
        assert_eq!(alternating_exponent(5), 30);
        assert_eq!(alternating_exponent(6), 60);
        assert_eq!(psl2_exponent(5), 30);
        assert_eq!(psl2_exponent(7), 84);
        assert_eq!(psl2_exponent(8), 126);
    }

    #[test]
    fn cyclic_covers() {
        for n in [2u32, 3, 4, 6] {
            let c = census(&format!("C{n}"));
            let rec = ucover_record(&c, None, BlockLayout::Natural).unwrap();
            let n = n as u64;
            assert_eq!(rec.order, BigUint::from(n * n));
            assert_eq!(rec.cover_type, [n; 3]);
            assert_eq!(rec.genus, BigUint::from((n - 1) * (n - 2) / 2));
            let (x, y) =
                ucover_generators(&c, &(0..c.r()).collect::<Vec<_>>(), BlockLayout::Natural)
                    .unwrap();
            assert!(generators_commute(&x, &y));
        }
    }

    #[test]
    fn regular_blocks_give_the_same_order() {
        let c = census("D3");
        let a = ucover_record(&c, None, BlockLayout::Natural).unwrap();
        let b = ucover_record(&c, None, BlockLayout::Regular).unwrap();
        assert_eq!(a.order, b.order);
        assert_eq!(b.degree, 18);
    }

    #[test]
    fn closed_form_matches_small_covers() {
        for g in ["C5", "D3", "D5", "V4"] {
            let desc = parse_descriptor(g).unwrap();
            let c = census(g);
            let a = ucover_record(&c, None, BlockLayout::Natural).unwrap();
            let b = closed_form_ucover(&desc).unwrap();
            assert_eq!(
                (a.order, a.cover_type, a.genus),
                (b.order, b.cover_type, b.genus)
            );
        }
    }

    #[test]
    fn even_dihedral_covers_are_smaller_than_published() {
        for n in [4u64, 6] {
            let c = census(&format!("D{n}"));
            let rec = ucover_record(&c, None, BlockLayout::Natural).unwrap();
            assert_eq!(rec.order, BigUint::from(n * n * n / 2));
            let published = closed_form_ucover(&GroupDescriptor::Dihedral(n as u32)).unwrap();
            assert_eq!(published.order, BigUint::from(4 * n * n * n));
        }
    }

    #[test]
    fn degree_cap() {
        let c = census("C6");
        let many: Vec<usize> = (0..c.r()).cycle().take(200_000).collect();
        assert!(matches!(
            ucover_generators(&c, &many, BlockLayout::Natural),
            Err(DessinError::DegreeCapExceeded { .. })
        ));
    }
}
