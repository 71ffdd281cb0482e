//! Deformed Heisenberg Fock spaces: oscillator algebras given by their
//! bracket kernel, and exact vectors over (partition, charge) states.

use crate::qfield::{qint, Scalar};
use std::collections::BTreeMap;
use std::sync::Arc;

/// One-parameter Heisenberg algebra `[b(k), b(-k)] = kappa(k)`, with an
/// optional commuting zero mode and charge shift.
#[derive(Clone)]
pub struct OscillatorAlgebra {
    pub id: String,
    pub has_zero_mode: bool,
    kernel: Arc<dyn Fn(u32) -> Scalar + Send + Sync>,
}

impl OscillatorAlgebra {
    /// The loop-algebra oscillators on a level-`ell` module:
    /// `kappa(k) = [2k][ell k] / k`.
    pub fn level_modes(ell: u32) -> Self {
        OscillatorAlgebra {
            id: format!("a{ell}"),
            has_zero_mode: false,
            kernel: Arc::new(move |k| {
                let k = k as i64;
                &(&qint(2 * k, 1) * &qint(ell as i64 * k, 1))
                    / &Scalar::from_int(k)
            }),
        }
    }

    /// The auxiliary oscillators with `kappa(k) = (q^{2k} - 1 + q^{-2k})/k`.
    pub fn auxiliary() -> Self {
        OscillatorAlgebra {
            id: "b".into(),
            has_zero_mode: true,
            kernel: Arc::new(|k| {
                let k = k as i64;
                let num = &(&Scalar::q_pow(2 * k) - &Scalar::one()) + &Scalar::q_pow(-2 * k);
                &num / &Scalar::from_int(k)
            }),
        }
    }

    /// Arbitrary kernel, for engine-level tests.
    pub fn custom(id: &str, kernel: Arc<dyn Fn(u32) -> Scalar + Send + Sync>) -> Self {
        OscillatorAlgebra { id: id.into(), has_zero_mode: true, kernel }
    }

    pub fn kappa(&self, k: u32) -> Scalar {
        assert!(k >= 1);
        (self.kernel)(k)
    }
}

/// Basis state: oscillator content as a descending partition plus a charge
/// in half-units. Ordered by degree, then parts, then charge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FockState {
    pub parts: Vec<u32>,
    pub charge2: i64,
}

impl FockState {
    pub fn vacuum(charge2: i64) -> Self {
        FockState { parts: Vec::new(), charge2 }
    }

    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Charge as an exact scalar (may be half-integral).
    pub fn charge_scalar(&self) -> Scalar {
        &Scalar::from_int(self.charge2) / &Scalar::from_int(2)
    }
}

impl Ord for FockState {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.parts.cmp(&other.parts))
            .then_with(|| self.charge2.cmp(&other.charge2))
    }
}

impl PartialOrd for FockState {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Finite linear combination of Fock states.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FockVector {
    pub terms: BTreeMap<FockState, Scalar>,
}

impl FockVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum(charge2: i64) -> Self {
        Self::unit(FockState::vacuum(charge2))
    }

    pub fn unit(s: FockState) -> Self {
        let mut v = Self::zero();
        v.terms.insert(s, Scalar::one());
        v
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, s: FockState, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&s);
        let next = match cur {
            Some(x) => &x + c,
            None => c.clone(),
        };
        if !next.is_zero() {
            self.terms.insert(s, next);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.terms {
            out.add_term(s.clone(), c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled(&-&Scalar::one()))
    }

    pub fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        FockVector { terms: self.terms.iter().map(|(s, x)| (s.clone(), x * c)).collect() }
    }

    /// Apply `beta(k)` for `k != 0` or the zero mode for `k == 0`.
    pub fn apply_mode_op(&self, alg: &OscillatorAlgebra, k: i64) -> Self {
        let mut out = Self::zero();
        for (s, c) in &self.terms {
            if k == 0 {
                out.add_term(s.clone(), &(c * &s.charge_scalar()));
            } else if k < 0 {
                let mut parts = s.parts.clone();
                parts.push((-k) as u32);
                parts.sort_unstable_by(|a, b| b.cmp(a));
                out.add_term(FockState { parts, charge2: s.charge2 }, c);
            } else {
                let kk = k as u32;
                let count = s.parts.iter().filter(|&&p| p == kk).count();
                if count > 0 {
                    let mut parts = s.parts.clone();
                    let pos = parts.iter().position(|&p| p == kk).unwrap();
                    parts.remove(pos);
                    let coeff = &(c * &alg.kappa(kk)) * &Scalar::from_int(count as i64);
                    out.add_term(FockState { parts, charge2: s.charge2 }, &coeff);
                }
            }
        }
        out
    }

    /// Apply the charge shift `T^r`.
    pub fn shift(&self, r: i64) -> Self {
        FockVector {
            terms: self
                .terms
                .iter()
                .map(|(s, c)| {
                    (FockState { parts: s.parts.clone(), charge2: s.charge2 + 2 * r }, c.clone())
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_examples() {
        let b = OscillatorAlgebra::auxiliary();
        // b(1) b(-1) v(p) = kappa(1) v(p).
        let v = FockVector::vacuum(3); // charge 3/2
        let w = v.apply_mode_op(&b, -1).apply_mode_op(&b, 1);
        let expect = &(&Scalar::q_pow(2) - &Scalar::one()) + &Scalar::q_pow(-2);
        assert_eq!(w, v.scaled(&expect));

        let a2 = OscillatorAlgebra::level_modes(2);
        let k2 = a2.kappa(2);
        let expect = &(&crate::qfield::qint(4, 1) * &crate::qfield::qint(4, 1))
            / &Scalar::from_int(2);
        assert_eq!(k2, expect);
    }

    #[test]
    fn zero_mode_and_shift() {
        let b = OscillatorAlgebra::auxiliary();
        let v = FockVector::vacuum(-2); // charge -1
        let bv = v.apply_mode_op(&b, 0);
        assert_eq!(bv, v.scaled(&Scalar::from_int(-1)));
        let sv = v.shift(1);
        assert_eq!(sv, FockVector::vacuum(0));
        // [b(0), T] = T on states.
        let lhs = v.shift(1).apply_mode_op(&b, 0);
        let rhs = v.apply_mode_op(&b, 0).shift(1).add(&v.shift(1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn annihilation_counts_multiplicity() {
        let b = OscillatorAlgebra::auxiliary();
        let v = FockVector::vacuum(0)
            .apply_mode_op(&b, -2)
            .apply_mode_op(&b, -2);
        let w = v.apply_mode_op(&b, 2);
        // two parts of size two: coefficient 2 kappa(2).
        let expect = &Scalar::from_int(2) * &b.kappa(2);
        let single = FockVector::vacuum(0).apply_mode_op(&b, -2);
        assert_eq!(w, single.scaled(&expect));
    }
}
