//! Degree-truncated irreducible highest weight modules for the rank-one
//! quantum affine algebra, with Chevalley action, Drinfeld mode operators,
//! the finite dimensional evaluation module, reflection operators, the
//! diagram flip, and the shift operator built from them.
//!
//! A module is stored as one basis per root-coordinate weight space
//! `(x, y)` (the weight is `lambda - x a0 - y a1`) for all `x + y <= height`,
//! together with the matrices of `e_i` and `f_i` between adjacent spaces.
//! Each basis state carries the lowering word that defines it.
//!
//! Construction goes layer by layer: the candidates `f_i u` over the
//! previous layer's basis span the next layer, and a candidate combination
//! vanishes in the irreducible module exactly when both raising operators
//! kill it. Killing those kernels layer by layer quotients away the maximal
//! proper submodule, so no contravariant form elimination is needed; the
//! form stays available separately as a cross-check oracle.

mod build;
mod eval;
mod ops;

pub use build::shapovalov_pairing;
pub use eval::{EvalGen, EvalVector, EvaluationModule};
pub use ops::{Block, DrinfeldModesA1, ModOp, SlCtx};

use crate::qfield::{qint, Scalar};
use crate::{QaError, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Dominant integral weight `m0 L0 + m1 L1` of the rank-one affine type.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub struct WeightA1 {
    pub m0: i32,
    pub m1: i32,
}

impl WeightA1 {
    pub const fn new(m0: i32, m1: i32) -> Self {
        WeightA1 { m0, m1 }
    }

    pub fn level(&self) -> i32 {
        self.m0 + self.m1
    }

    /// Image under the diagram flip exchanging the two fundamental weights.
    pub fn flip(&self) -> Self {
        WeightA1 { m0: self.m1, m1: self.m0 }
    }

    /// `h_0` pairing of the weight at root coordinates `(x, y)`.
    pub fn h0(&self, x: i64, y: i64) -> i64 {
        self.m0 as i64 - 2 * x + 2 * y
    }

    /// `h_1` pairing of the weight at root coordinates `(x, y)`.
    pub fn h1(&self, x: i64, y: i64) -> i64 {
        self.m1 as i64 + 2 * x - 2 * y
    }

    /// Necessary norm condition for `lambda - x a0 - y a1` to be a weight.
    pub fn possible_weight(&self, x: i64, y: i64) -> bool {
        if x < 0 || y < 0 {
            return false;
        }
        let d = x - y;
        d * d <= (self.m0 as i64 + 1) * x + (self.m1 as i64 + 1) * y
    }
}

pub type Coord = (u32, u32);

/// One weight space of the truncated module.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightSpace {
    /// Defining lowering word per basis state; the leftmost letter is the
    /// last operator applied.
    pub words: Vec<Vec<u8>>,
}

impl WeightSpace {
    pub fn dim(&self) -> usize {
        self.words.len()
    }
}

/// Columns of an operator block, one sparse column per source basis state.
pub type BlockCols = Vec<crate::linalg::SparseVector>;

/// Truncated irreducible highest weight module.
#[derive(Clone, Serialize, Deserialize)]
pub struct IrredModuleA1 {
    pub lambda: WeightA1,
    pub height: u32,
    /// Weight spaces of nonzero dimension, keyed by root coordinates.
    pub spaces: BTreeMap<Coord, WeightSpace>,
    /// `f_i` matrices keyed by source coordinates (source height < height).
    pub f_mat: [BTreeMap<Coord, BlockCols>; 2],
    /// `e_i` matrices keyed by source coordinates.
    pub e_mat: [BTreeMap<Coord, BlockCols>; 2],
}

/// Finite linear combination of basis states of one module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleVector {
    pub lambda: WeightA1,
    pub terms: BTreeMap<(Coord, usize), Scalar>,
}

impl ModuleVector {
    pub fn zero(lambda: WeightA1) -> Self {
        ModuleVector { lambda, terms: BTreeMap::new() }
    }

    pub fn unit(lambda: WeightA1, coord: Coord, idx: usize) -> Self {
        let mut v = Self::zero(lambda);
        v.terms.insert((coord, idx), Scalar::one());
        v
    }

    pub fn highest(lambda: WeightA1) -> Self {
        Self::unit(lambda, (0, 0), 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (Coord, usize), c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&key);
        let next = match cur {
            Some(x) => &x + c,
            None => c.clone(),
        };
        if !next.is_zero() {
            self.terms.insert(key, next);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.lambda, other.lambda);
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-&Scalar::one()))
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.lambda);
        }
        ModuleVector {
            lambda: self.lambda,
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }
}

/// Chevalley-type generator label.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChevGen {
    E(u8),
    F(u8),
    /// `t_i^{pow}`.
    T(u8, i32),
    /// `q^{pow * d}`.
    Qd(i32),
}

impl IrredModuleA1 {
    pub fn dim_at(&self, coord: Coord) -> usize {
        self.spaces.get(&coord).map_or(0, |s| s.dim())
    }

    pub fn basis_states(&self) -> impl Iterator<Item = (Coord, usize)> + '_ {
        self.spaces.iter().flat_map(|(&c, s)| (0..s.dim()).map(move |i| (c, i)))
    }

    pub fn total_dim(&self) -> usize {
        self.spaces.values().map(|s| s.dim()).sum()
    }

    fn gen_target(&self, gen: ChevGen, coord: Coord) -> Option<(i64, i64)> {
        let (x, y) = (coord.0 as i64, coord.1 as i64);
        match gen {
            ChevGen::E(0) => Some((x - 1, y)),
            ChevGen::E(1) => Some((x, y - 1)),
            ChevGen::F(0) => Some((x + 1, y)),
            ChevGen::F(1) => Some((x, y + 1)),
            ChevGen::T(..) | ChevGen::Qd(_) => None,
            _ => panic!("generator index out of range"),
        }
    }

    /// Apply a Chevalley generator; truncation overflow is signaled apart
    /// from domain errors, and targets that violate the weight norm bound
    /// are exactly zero rather than overflow.
    pub fn act_chevalley(&self, gen: ChevGen, v: &ModuleVector) -> Result<ModuleVector> {
        assert_eq!(v.lambda, self.lambda);
        let mut out = ModuleVector::zero(self.lambda);
        for (&(coord, idx), c) in &v.terms {
            match gen {
                ChevGen::T(i, pow) => {
                    let m = match i {
                        0 => self.lambda.h0(coord.0 as i64, coord.1 as i64),
                        1 => self.lambda.h1(coord.0 as i64, coord.1 as i64),
                        _ => return Err(QaError::Domain("t index out of range".into())),
                    };
                    let eig = Scalar::q_pow(m * pow as i64);
                    out.add_term((coord, idx), &(c * &eig));
                }
                ChevGen::Qd(pow) => {
                    let eig = Scalar::q_pow(-(coord.0 as i64) * pow as i64);
                    out.add_term((coord, idx), &(c * &eig));
                }
                ChevGen::E(i) => {
                    let (tx, ty) = self.gen_target(gen, coord).unwrap();
                    if tx < 0 || ty < 0 {
                        continue;
                    }
                    if let Some(cols) = self.e_mat[i as usize].get(&coord) {
                        let col = &cols[idx];
                        for (j, w) in col.iter() {
                            out.add_term(((tx as u32, ty as u32), j), &(w * c));
                        }
                    }
                }
                ChevGen::F(i) => {
                    let (tx, ty) = self.gen_target(gen, coord).unwrap();
                    if !self.lambda.possible_weight(tx, ty) {
                        continue;
                    }
                    if (tx + ty) as u32 > self.height {
                        return Err(QaError::TruncationOverflow(format!(
                            "f_{} from ({},{}) leaves the stored window",
                            i, coord.0, coord.1
                        )));
                    }
                    if let Some(cols) = self.f_mat[i as usize].get(&coord) {
                        let col = &cols[idx];
                        for (j, w) in col.iter() {
                            out.add_term(((tx as u32, ty as u32), j), &(w * c));
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Apply a word of generators, rightmost first.
    pub fn act_word(&self, word: &[ChevGen], v: &ModuleVector) -> Result<ModuleVector> {
        let mut cur = v.clone();
        for g in word.iter().rev() {
            cur = self.act_chevalley(*g, &cur)?;
        }
        Ok(cur)
    }
}

/// Truncated irreducible module of the given dominant weight.
///
/// Weight space dimensions agree with the Freudenthal oracle; the basis
/// and matrices are deterministic (length-lexicographic candidate order
/// with lowest-index pivoting).
pub fn build_module(lambda: WeightA1, height: u32) -> IrredModuleA1 {
    build::build(lambda, height)
}

/// `[m]` at the `h_i` pairing of the weight, used in commutators.
pub(crate) fn qint_at(lambda: WeightA1, coord: Coord, i: u8) -> Scalar {
    let (x, y) = (coord.0 as i64, coord.1 as i64);
    let m = match i {
        0 => lambda.h0(x, y),
        _ => lambda.h1(x, y),
    };
    qint(m, 1)
}

#[cfg(test)]
mod tests;
