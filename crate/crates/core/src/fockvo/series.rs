//! Truncated formal series: univariate power series over [`Scalar`] and
//! multivariate series in an ordered tuple of variables, expanded in the
//! region where each later variable is small against all earlier ones.

use crate::qfield::Scalar;
use std::collections::BTreeMap;

/// Power series truncated at a fixed order (inclusive).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSeries {
    pub coeffs: Vec<Scalar>,
}

impl PowerSeries {
    pub fn zero(order: usize) -> Self {
        PowerSeries { coeffs: vec![Scalar::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = Scalar::one();
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &Scalar {
        &self.coeffs[k]
    }

    pub fn set(&mut self, k: usize, c: Scalar) {
        self.coeffs[k] = c;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        PowerSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        PowerSeries {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PowerSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        let n = self.order();
        let mut out = Self::zero(n);
        for i in 0..=n {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=(n - i) {
                if !other.coeffs[j].is_zero() {
                    let t = &self.coeffs[i] * &other.coeffs[j];
                    out.coeffs[i + j] = &out.coeffs[i + j] + &t;
                }
            }
        }
        out
    }

    /// `exp` of a series with zero constant term.
    pub fn exp(&self) -> Self {
        assert!(self.coeffs[0].is_zero(), "exp needs zero constant term");
        let n = self.order();
        let mut out = Self::one(n);
        // out' = self' * out, solved order by order:
        // (k+1) out[k+1] = sum_{j} (j+1) self[j+1] * out[k-j].
        for k in 0..n {
            let mut acc = Scalar::zero();
            for j in 0..=k {
                if !self.coeffs[j + 1].is_zero() {
                    let t = &(&self.coeffs[j + 1] * &Scalar::from_int(j as i64 + 1))
                        * &out.coeffs[k - j];
                    acc += &t;
                }
            }
            out.coeffs[k + 1] = &acc / &Scalar::from_int(k as i64 + 1);
        }
        out
    }

    /// `log` of a series with constant term one.
    pub fn log(&self) -> Self {
        assert!(self.coeffs[0].is_one(), "log needs constant term one");
        let n = self.order();
        let mut out = Self::zero(n);
        // out' = self' / self, i.e. self * out' = self'.
        for k in 0..n {
            let mut acc = &self.coeffs[k + 1] * &Scalar::from_int(k as i64 + 1);
            for j in 0..k {
                if !self.coeffs[k - j].is_zero() {
                    let t = &(&out.coeffs[j + 1] * &Scalar::from_int(j as i64 + 1))
                        * &self.coeffs[k - j];
                    acc -= &t;
                }
            }
            out.coeffs[k + 1] = &acc / &Scalar::from_int(k as i64 + 1);
        }
        out
    }

    /// `1 / (1 - c x)`.
    pub fn geometric(c: &Scalar, order: usize) -> Self {
        let mut s = Self::zero(order);
        let mut acc = Scalar::one();
        for k in 0..=order {
            s.coeffs[k] = acc.clone();
            if k < order {
                acc = &acc * c;
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

/// Multivariate truncated series in ordered variables `u_0, ..., u_{r-1}`
/// expanded in the chain ratios `x_i = u_{i+1} / u_i`, together with one
/// overall monomial in the `u`'s with half-integer exponents.
///
/// Truncation is by total chain degree. Only products and comparisons are
/// needed: a prefactor identity is a product of elementary factors on both
/// sides.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioSeries {
    pub nvars: usize,
    pub order: u32,
    /// Exponent of the overall monomial per variable, in half-units.
    pub mono: Vec<i64>,
    /// Chain-ratio exponent vectors (length `nvars - 1`) to scalars.
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

impl RatioSeries {
    pub fn scalar(nvars: usize, order: u32, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u32; nvars.saturating_sub(1)], c);
        }
        RatioSeries { nvars, order, mono: vec![0; nvars], terms }
    }

    pub fn one(nvars: usize, order: u32) -> Self {
        Self::scalar(nvars, order, Scalar::one())
    }

    /// Multiply by the monomial `u_i^(e/2)`.
    pub fn mul_monomial(&mut self, i: usize, half_units: i64) {
        self.mono[i] += half_units;
    }

    fn chain_exp(nvars: usize, i: usize, j: usize, k: u32) -> Vec<u32> {
        assert!(i < j && j < nvars);
        let mut v = vec![0u32; nvars - 1];
        for e in v.iter_mut().take(j).skip(i) {
            *e = k;
        }
        v
    }

    /// Embed a univariate series in `u_j / u_i` (`i < j`).
    pub fn from_univariate(nvars: usize, order: u32, i: usize, j: usize, s: &PowerSeries) -> Self {
        let mut terms = BTreeMap::new();
        let span = (j - i) as u32;
        for (k, c) in s.coeffs.iter().enumerate() {
            let k = k as u32;
            if c.is_zero() || k * span > order {
                continue;
            }
            terms.insert(Self::chain_exp(nvars, i, j, k), c.clone());
        }
        RatioSeries { nvars, order, mono: vec![0; nvars], terms }
    }

    /// `u_i - c u_j` as `u_i (1 - c u_j/u_i)`.
    pub fn linear_factor(nvars: usize, order: u32, i: usize, j: usize, c: &Scalar) -> Self {
        let mut out = Self::one(nvars, order);
        out.mono[i] = 2;
        if !c.is_zero() && (j - i) as u32 <= order {
            out.terms.insert(Self::chain_exp(nvars, i, j, 1), -c);
        }
        out
    }

    /// `1 / (1 - c u_j/u_i)`.
    pub fn geometric_factor(nvars: usize, order: u32, i: usize, j: usize, c: &Scalar) -> Self {
        let span = (j - i) as u32;
        let top = if span == 0 { 0 } else { order / span };
        let g = PowerSeries::geometric(c, top as usize);
        Self::from_univariate(nvars, order, i, j, &g)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        assert_eq!(self.order, other.order);
        let mono = self.mono.iter().zip(&other.mono).map(|(a, b)| a + b).collect();
        let mut terms: BTreeMap<Vec<u32>, Scalar> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            let da: u32 = ea.iter().sum();
            for (eb, cb) in &other.terms {
                let db: u32 = eb.iter().sum();
                if da + db > self.order {
                    continue;
                }
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let c = ca * cb;
                let cur = terms.remove(&e).unwrap_or_else(Scalar::zero);
                let next = &cur + &c;
                if !next.is_zero() {
                    terms.insert(e, next);
                }
            }
        }
        RatioSeries { nvars: self.nvars, order: self.order, mono, terms }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = self.clone();
        if c.is_zero() {
            out.terms.clear();
            return out;
        }
        out.terms = out.terms.into_iter().map(|(e, x)| (e, &x * c)).collect();
        out
    }

    /// Coefficient of a given chain-exponent vector.
    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qfield::qint;

    #[test]
    fn exp_log_round_trip() {
        let n = 10;
        let mut s = PowerSeries::zero(n);
        s.set(1, qint(2, 1));
        s.set(3, -&Scalar::q_pow(-2));
        let e = s.exp();
        assert_eq!(e.log(), s);
    }

    #[test]
    fn geometric_matches_exp_of_log() {
        let n = 8;
        let c = Scalar::q_pow(2);
        let g = PowerSeries::geometric(&c, n);
        // -log(1 - c x) = sum c^k x^k / k
        let mut l = PowerSeries::zero(n);
        for k in 1..=n {
            l.set(k, &c.pow(k as i64) / &Scalar::from_int(k as i64));
        }
        assert_eq!(l.exp(), g);
    }

    #[test]
    fn ratio_series_products() {
        // (z - q^4 w)(z - w) in two variables.
        let n = 6;
        let a = RatioSeries::linear_factor(2, n, 0, 1, &Scalar::q_pow(4));
        let b = RatioSeries::linear_factor(2, n, 0, 1, &Scalar::one());
        let p = a.mul(&b);
        assert_eq!(p.mono, vec![4, 0]);
        assert_eq!(p.coeff(&[0]), Scalar::one());
        assert_eq!(p.coeff(&[1]), -&(&Scalar::q_pow(4) + &Scalar::one()));
        assert_eq!(p.coeff(&[2]), Scalar::q_pow(4));
    }
}
