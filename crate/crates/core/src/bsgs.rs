//! Deterministic Schreier–Sims: a base and strong generating set giving the
//! exact order of a permutation group as the product of its basic orbit
//! lengths.

use num_bigint::BigUint;

use crate::error::Result;
use crate::perm::Permutation;

/// One level of the stabilizer chain.
#[derive(Clone, Debug)]
struct Level {
    base_point: u32,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    /// Points of the basic orbit, in discovery order.
    orbit: Vec<u32>,
    /// `transversal[p]` maps `base_point` to `p`; indexed by point.
    transversal: Vec<Option<Permutation>>,
    inverse_transversal: Vec<Option<Permutation>>,
}

impl Level {
    fn new(base_point: u32, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let mut inverse_transversal = vec![None; degree];
        transversal[base_point as usize] = Some(Permutation::identity(degree));
        inverse_transversal[base_point as usize] = Some(Permutation::identity(degree));
        Level {
            base_point,
            gens: Vec::new(),
            orbit: vec![base_point],
            transversal,
            inverse_transversal,
        }
    }

    fn add_generator(&mut self, g: Permutation) {
        self.gens.push(g);
        let new = self.gens.len() - 1;
        // Old orbit points only need the new generator; new points need all.
        let old_len = self.orbit.len();
        let mut idx = 0;
        while idx < self.orbit.len() {
            let p = self.orbit[idx];
            let range = if idx < old_len {
                new..new + 1
            } else {
                0..self.gens.len()
            };
            for k in range {
                let q = self.gens[k].apply(p);
                if self.transversal[q as usize].is_none() {
                    let u = self.transversal[p as usize]
                        .as_ref()
                        .unwrap()
                        .compose(&self.gens[k]);
                    self.inverse_transversal[q as usize] = Some(u.inverse());
                    self.transversal[q as usize] = Some(u);
                    self.orbit.push(q);
                }
            }
            idx += 1;
        }
    }
}

/// Stabilizer chain of a permutation group.
#[derive(Clone, Debug)]
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    /// Runs Schreier–Sims on `gens`. Base points are chosen as the first point
    /// moved by the generator that forces a new level.
    pub fn new(gens: &[Permutation]) -> Result<Self> {
        let degree = crate::perm::check_generators(gens)?;
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut chain = StabChain {
            degree,
            levels: Vec::new(),
        };
        for g in &gens {
            if chain
                .levels
                .iter()
                .all(|l| g.apply(l.base_point) == l.base_point)
            {
                let b = g.first_moved_point().unwrap();
                chain.levels.push(Level::new(b, degree));
            }
        }
        for g in &gens {
            // Every generator fixes the base points before the first one it moves.
            for level in chain.levels.iter_mut() {
                level.add_generator(g.clone());
                if g.apply(level.base_point) != level.base_point {
                    break;
                }
            }
        }
        chain.complete();
        Ok(chain)
    }

    fn complete(&mut self) {
        if self.levels.is_empty() {
            return;
        }
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let iu = i as usize;
            let orbit_len = self.levels[iu].orbit.len();
            for oi in 0..orbit_len {
                let beta = self.levels[iu].orbit[oi];
                let gen_count = self.levels[iu].gens.len();
                for k in 0..gen_count {
                    let level = &self.levels[iu];
                    let s = &level.gens[k];
                    let u_beta = level.transversal[beta as usize].as_ref().unwrap();
                    let image = s.apply(beta);
                    let candidate = u_beta.compose(s);
                    if Some(&candidate) == level.transversal[image as usize].as_ref() {
                        continue;
                    }
                    let schreier = candidate
                        .compose(level.inverse_transversal[image as usize].as_ref().unwrap());
                    let (residue, stop) = self.sift(schreier, iu + 1);
                    if stop == self.levels.len() && residue.is_identity() {
                        continue;
                    }
                    if stop == self.levels.len() {
                        let b = residue.first_moved_point().unwrap();
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for l in iu + 1..=stop {
                        self.levels[l].add_generator(residue.clone());
                    }
                    i = stop as isize;
                    continue 'outer;
                }
            }
            i -= 1;
        }
    }

    /// Strips `g` through levels `from..`, returning the residue and the
    /// level where stripping stopped (`levels.len()` when it went through).
    fn sift(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let image = g.apply(level.base_point);
            match &level.inverse_transversal[image as usize] {
                Some(inv) => g = g.compose(inv),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        if g.degree() != self.degree {
            return false;
        }
        let (residue, stop) = self.sift(g.clone(), 0);
        stop == self.levels.len() && residue.is_identity()
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::from(1u32), |acc, l| {
            acc * BigUint::from(l.orbit.len())
        })
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base_point).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// Exact order of `⟨gens⟩`.
pub fn bsgs_order(gens: &[Permutation]) -> Result<BigUint> {
    Ok(StabChain::new(gens)?.order())
}
