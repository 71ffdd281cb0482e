//! The `(l+1)`-dimensional evaluation module with a symbolic spectral
//! parameter. Coefficients are Laurent polynomials in `z` over [`Scalar`],
//! so every action equation can be checked exactly in `z`.

use crate::qfield::{qint, Scalar};
use std::collections::BTreeMap;

/// Laurent polynomial in the spectral parameter with scalar coefficients.
pub type ZLaurent = BTreeMap<i64, Scalar>;

/// Vector in the evaluation module: one `z`-Laurent coefficient per basis
/// vector `v_j`, `j = 0..=l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalVector {
    pub ell: u32,
    pub coords: Vec<ZLaurent>,
}

impl EvalVector {
    pub fn zero(ell: u32) -> Self {
        EvalVector { ell, coords: vec![BTreeMap::new(); ell as usize + 1] }
    }

    pub fn basis(ell: u32, j: u32) -> Self {
        let mut v = Self::zero(ell);
        v.coords[j as usize].insert(0, Scalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.values().all(|x| x.is_zero()))
    }

    fn normalized(mut self) -> Self {
        for c in &mut self.coords {
            c.retain(|_, v| !v.is_zero());
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.ell, other.ell);
        let mut out = self.clone();
        for (c, oc) in out.coords.iter_mut().zip(&other.coords) {
            for (&e, v) in oc {
                let cur = c.remove(&e).unwrap_or_else(Scalar::zero);
                let next = &cur + v;
                if !next.is_zero() {
                    c.insert(e, next);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-&Scalar::one(), 0))
    }

    /// Multiply by `c * z^zshift`.
    pub fn scaled(&self, c: &Scalar, zshift: i64) -> Self {
        if c.is_zero() {
            return Self::zero(self.ell);
        }
        EvalVector {
            ell: self.ell,
            coords: self
                .coords
                .iter()
                .map(|m| m.iter().map(|(&e, v)| (e + zshift, v * c)).collect())
                .collect(),
        }
        .normalized()
    }
}

/// Generator label for the evaluation action.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalGen {
    E(u8),
    F(u8),
    T(u8, i32),
}

/// The evaluation module of the given dimension label.
#[derive(Clone, Copy, Debug)]
pub struct EvaluationModule {
    pub ell: u32,
}

impl EvaluationModule {
    pub fn new(ell: u32) -> Self {
        assert!(ell >= 1);
        EvaluationModule { ell }
    }

    pub fn act(&self, gen: EvalGen, v: &EvalVector) -> EvalVector {
        assert_eq!(v.ell, self.ell);
        let l = self.ell as i64;
        let mut out = EvalVector::zero(self.ell);
        for (j, comp) in v.coords.iter().enumerate() {
            if comp.is_empty() {
                continue;
            }
            let j64 = j as i64;
            // (target_j, coefficient, z-shift); None target drops the term.
            let (tj, coeff, zshift): (i64, Scalar, i64) = match gen {
                EvalGen::F(1) => (j64 + 1, qint(j64 + 1, 1), 0),
                EvalGen::E(1) => (j64 - 1, qint(l - j64 + 1, 1), 0),
                EvalGen::T(1, p) => (j64, Scalar::q_pow((l - 2 * j64) * p as i64), 0),
                EvalGen::F(0) => (j64 - 1, qint(l - j64 + 1, 1), -1),
                EvalGen::E(0) => (j64 + 1, qint(j64 + 1, 1), 1),
                EvalGen::T(0, p) => (j64, Scalar::q_pow((2 * j64 - l) * p as i64), 0),
                _ => panic!("generator index out of range"),
            };
            if tj < 0 || tj > l || coeff.is_zero() {
                continue;
            }
            for (&e, c) in comp {
                let add = &coeff * c;
                let slot = &mut out.coords[tj as usize];
                let cur = slot.remove(&(e + zshift)).unwrap_or_else(Scalar::zero);
                let next = &cur + &add;
                if !next.is_zero() {
                    slot.insert(e + zshift, next);
                }
            }
        }
        out
    }

    pub fn act_word(&self, word: &[EvalGen], v: &EvalVector) -> EvalVector {
        let mut cur = v.clone();
        for g in word.iter().rev() {
            cur = self.act(g.clone(), &cur);
        }
        cur
    }
}
