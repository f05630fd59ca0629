//! Nielsen moves on classes of generating pairs and their orbits.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::bsgs::bsgs_order;
use crate::census::Census;
use crate::error::{DessinError, Result};
use crate::group::{ElemId, ElementTable};
use crate::perm::Permutation;
use crate::zoo::GroupDescriptor;

/// Largest class count for which the induced permutation group is built.
pub const OMEGA_ACTION_CAP: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum NielsenMove {
    E1,
    E2,
    E3,
    E4,
    E5,
    E4inv,
    E5inv,
}

impl NielsenMove {
    pub const ALL: [NielsenMove; 7] = [
        NielsenMove::E1,
        NielsenMove::E2,
        NielsenMove::E3,
        NielsenMove::E4,
        NielsenMove::E5,
        NielsenMove::E4inv,
        NielsenMove::E5inv,
    ];

    /// A generating set of the same group of outer actions.
    pub const SMALL: [NielsenMove; 3] = [NielsenMove::E1, NielsenMove::E4, NielsenMove::E4inv];

    pub fn apply(self, table: &ElementTable, (x, y): (ElemId, ElemId)) -> (ElemId, ElemId) {
        match self {
            NielsenMove::E1 => (y, x),
            NielsenMove::E2 => (table.inv(x), y),
            NielsenMove::E3 => (x, table.inv(y)),
            NielsenMove::E4 => (table.mul(x, y), y),
            NielsenMove::E5 => (x, table.mul(y, x)),
            NielsenMove::E4inv => (table.mul(x, table.inv(y)), y),
            NielsenMove::E5inv => (x, table.mul(y, table.inv(x))),
        }
    }
}

/// Moves applied left to right.
pub fn apply_word(
    table: &ElementTable,
    word: &[NielsenMove],
    pair: (ElemId, ElemId),
) -> (ElemId, ElemId) {
    word.iter().fold(pair, |p, m| m.apply(table, p))
}

/// Sends `(x, y)` to a conjugate of `(z, x)`, rotating the type `(l, m, n)` to `(n, l, m)`.
pub const ROTATION: [NielsenMove; 4] = [
    NielsenMove::E5,
    NielsenMove::E4inv,
    NielsenMove::E5,
    NielsenMove::E4inv,
];

/// `(x, y) ↦ (x⁻¹, y⁻¹)`.
pub const INVERT_BOTH: [NielsenMove; 2] = [NielsenMove::E2, NielsenMove::E3];

/// Class reached from `class_id` by one move.
pub fn apply_nielsen(census: &Census, mv: NielsenMove, class_id: usize) -> usize {
    apply_word_to_class(census, &[mv], class_id)
}

pub fn apply_word_to_class(census: &Census, word: &[NielsenMove], class_id: usize) -> usize {
    let rep = census.classes()[class_id].rep;
    let (x, y) = apply_word(census.table(), word, rep);
    census
        .class_of(x, y)
        .expect("Nielsen moves preserve generating pairs")
}

/// The permutation of class ids induced by a move; panics if it is not a bijection.
pub fn induced_permutation(census: &Census, word: &[NielsenMove]) -> Vec<usize> {
    let r = census.r();
    let images: Vec<usize> = (0..r)
        .map(|c| apply_word_to_class(census, word, c))
        .collect();
    let mut hit = vec![false; r];
    for &i in &images {
        assert!(
            !std::mem::replace(&mut hit[i], true),
            "move does not permute classes"
        );
    }
    images
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaOrbit {
    pub orbit_id: usize,
    pub length: usize,
    pub classes: Vec<usize>,
    pub commutator_order: u64,
    pub higman_label: (ElemId, ElemId),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TSystemReport {
    pub nu: usize,
    pub orbits: Vec<OmegaOrbit>,
    #[serde(with = "crate::report::decimal_opt", default)]
    pub omega_action_order: Option<BigUint>,
}

impl TSystemReport {
    /// Orbit id of every class.
    pub fn orbit_of_class(&self) -> Vec<usize> {
        let r: usize = self.orbits.iter().map(|o| o.length).sum();
        let mut out = vec![0; r];
        for o in &self.orbits {
            for &c in &o.classes {
                out[c] = o.orbit_id;
            }
        }
        out
    }

    /// The orbits as sets of class ids.
    pub fn partition(&self) -> Vec<Vec<usize>> {
        self.orbits.iter().map(|o| o.classes.clone()).collect()
    }
}

/// Orbits under all seven moves.
pub fn omega_orbits(census: &Census) -> TSystemReport {
    omega_orbits_with(census, &NielsenMove::ALL)
}

/// Orbits under the group generated by `moves`. Orbits are numbered by their
/// least class id; commutator order and Higman label must be constant on each.
pub fn omega_orbits_with(census: &Census, moves: &[NielsenMove]) -> TSystemReport {
    let r = census.r();
    let perms: Vec<Vec<usize>> = moves
        .iter()
        .map(|&m| induced_permutation(census, &[m]))
        .collect();
    let mut orbit = vec![usize::MAX; r];
    let mut orbits = Vec::new();
    for start in 0..r {
        if orbit[start] != usize::MAX {
            continue;
        }
        let id = orbits.len();
        orbit[start] = id;
        let mut members = vec![start];
        let mut head = 0;
        while head < members.len() {
            let c = members[head];
            head += 1;
            for p in &perms {
                let d = p[c];
                if orbit[d] == usize::MAX {
                    orbit[d] = id;
                    members.push(d);
                }
            }
        }
        members.sort_unstable();
        let classes = census.classes();
        let first = &classes[start];
        for &c in &members {
            assert_eq!(
                classes[c].commutator_order, first.commutator_order,
                "commutator order varies within an orbit"
            );
            assert_eq!(
                classes[c].higman_label, first.higman_label,
                "Higman label varies within an orbit"
            );
        }
        orbits.push(OmegaOrbit {
            orbit_id: id,
            length: members.len(),
            classes: members,
            commutator_order: first.commutator_order,
            higman_label: first.higman_label,
        });
    }
    assert_eq!(orbits.iter().map(|o| o.length).sum::<usize>(), r);
    TSystemReport {
        nu: orbits.len(),
        orbits,
        omega_action_order: None,
    }
}

/// Order of the permutation group induced on class ids by the seven moves.
pub fn omega_action_order(census: &Census) -> Result<BigUint> {
    let r = census.r();
    if r > OMEGA_ACTION_CAP {
        return Err(DessinError::CapExceeded {
            what: "class count for the induced action",
            limit: OMEGA_ACTION_CAP as u64,
            actual: r.to_string(),
        });
    }
    let gens: Vec<Permutation> = NielsenMove::ALL
        .iter()
        .map(|&m| {
            let images = induced_permutation(census, &[m]);
            Permutation::from_images(images.into_iter().map(|i| i as u32).collect())
        })
        .collect::<Result<_>>()?;
    bsgs_order(&gens)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HigmanBound {
    /// `⌈(p − 1)/4⌉`.
    pub bound: usize,
    /// Distinct Higman labels in the census.
    pub distinct_labels: usize,
    pub nu: usize,
}

/// For `PSL2(p)`: distinct commutator labels bound the number of orbits
/// from below, and there are at least `(p − 1)/4` of them.
pub fn higman_lower_bound_check(
    desc: &GroupDescriptor,
    census: &Census,
    report: &TSystemReport,
) -> Result<HigmanBound> {
    let p = match *desc {
        GroupDescriptor::Psl2(q) if q >= 5 && crate::field::is_prime(q as u64) => q as usize,
        _ => {
            return Err(DessinError::NotApplicable(format!(
                "the commutator bound needs PSL2 of a prime p ≥ 5, got {desc}"
            )))
        }
    };
    let labels: BTreeSet<(ElemId, ElemId)> =
        census.classes().iter().map(|c| c.higman_label).collect();
    let out = HigmanBound {
        bound: (p - 1).div_ceil(4),
        distinct_labels: labels.len(),
        nu: report.nu,
    };
    if out.nu < out.distinct_labels || out.distinct_labels < out.bound {
        return Err(DessinError::Validation(format!(
            "commutator bound violated: nu={}, labels={}, bound={}",
            out.nu, out.distinct_labels, out.bound
        )));
    }
    Ok(out)
}
