//! Exact arithmetic in the field Q(q^(1/2)).
//!
//! Everything downstream (module matrices, vertex operator coefficients,
//! relation checking) runs over this field, so elements are kept in a
//! canonical reduced form at all times and equality is structural.
//!
//! The base variable is `s = q^(1/2)`: the grading formulas and the charge
//! lattices need half-integer powers of `q`, and one uniform ring avoids a
//! case split. A [`Scalar`] is a reduced fraction of integer-coefficient
//! Laurent polynomials in `s`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Integer-coefficient Laurent polynomial in `s = q^(1/2)`.
///
/// Invariant: `coeffs` is empty exactly when the polynomial is zero;
/// otherwise the first and last entries are nonzero and the polynomial is
/// `sum_i coeffs[i] * s^(low + i)`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct LaurentPoly {
    low: i64,
    coeffs: Vec<BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { low: 0, coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        LaurentPoly { low: 0, coeffs: vec![BigInt::one()] }
    }

    pub fn monomial(c: BigInt, exp: i64) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { low: exp, coeffs: vec![c] }
        }
    }

    pub fn from_int(c: BigInt) -> Self {
        Self::monomial(c, 0)
    }

    /// Build from an explicit list of `(exponent, coefficient)` pairs.
    pub fn from_terms(terms: &[(i64, i64)]) -> Self {
        let mut p = Self::zero();
        for &(e, c) in terms {
            p = &p + &Self::monomial(BigInt::from(c), e);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent; meaningless for zero.
    pub fn low(&self) -> i64 {
        self.low
    }

    /// Highest exponent; meaningless for zero.
    pub fn high(&self) -> i64 {
        self.low + self.coeffs.len() as i64 - 1
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        if self.is_zero() || exp < self.low || exp > self.high() {
            BigInt::zero()
        } else {
            self.coeffs[(exp - self.low) as usize].clone()
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        let low = self.low;
        self.coeffs.iter().enumerate().map(move |(i, c)| (low + i as i64, c))
    }

    fn trim(low: i64, mut coeffs: Vec<BigInt>) -> Self {
        let mut start = 0;
        while start < coeffs.len() && coeffs[start].is_zero() {
            start += 1;
        }
        if start == coeffs.len() {
            return Self::zero();
        }
        let mut end = coeffs.len();
        while coeffs[end - 1].is_zero() {
            end -= 1;
        }
        coeffs.truncate(end);
        coeffs.drain(..start);
        LaurentPoly { low: low + start as i64, coeffs }
    }

    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            Self::zero()
        } else {
            LaurentPoly { low: self.low + k, coeffs: self.coeffs.clone() }
        }
    }

    /// Substitute `s -> s^(-1)`.
    pub fn subst_inverse(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs: Vec<BigInt> = self.coeffs.iter().rev().cloned().collect();
        let high = self.high();
        Self::trim(-high, std::mem::take(&mut coeffs))
    }

    pub fn neg_ref(&self) -> Self {
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    /// Integer content (gcd of coefficients), nonnegative. Zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn divide_content(&self, g: &BigInt) -> Self {
        if g.is_one() {
            return self.clone();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|c| c / g).collect() }
    }

    /// Exact division; panics if the division is not exact.
    pub fn exact_div(&self, d: &LaurentPoly) -> Self {
        assert!(!d.is_zero(), "exact_div by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        // Ordinary polynomial long division on the coefficient vectors.
        let mut rem = self.coeffs.clone();
        let dv = &d.coeffs;
        let n = rem.len();
        let m = dv.len();
        assert!(n >= m, "exact_div: degree too small");
        let qlen = n - m + 1;
        let mut q = vec![BigInt::zero(); qlen];
        // Divide from the top.
        for i in (0..qlen).rev() {
            let top = rem[i + m - 1].clone();
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(&dv[m - 1]);
            assert!(r.is_zero(), "exact_div: leading coefficient not divisible");
            for j in 0..m {
                let t = &qc * &dv[j];
                rem[i + j] -= t;
            }
            q[i] = qc;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "exact_div: nonzero remainder");
        Self::trim(self.low - d.low, q)
    }

    /// Primitive part with positive lowest coefficient.
    fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut g = self.content();
        if self.coeffs[0].is_negative() {
            g = -g;
        }
        self.divide_content(&g)
    }

    /// GCD including integer content, normalized with positive lowest
    /// coefficient and lowest exponent zero.
    pub fn gcd(&self, other: &LaurentPoly) -> Self {
        if self.is_zero() {
            let mut g = other.clone();
            g.low = 0;
            return g.primitive().mul_int(&other.content());
        }
        if other.is_zero() {
            let mut g = self.clone();
            g.low = 0;
            return g.primitive().mul_int(&self.content());
        }
        let cg = self.content().gcd(&other.content());
        let mut a = self.primitive();
        let mut b = other.primitive();
        a.low = 0;
        b.low = 0;
        // Primitive polynomial remainder sequence.
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
            b.low = 0;
        }
        a.primitive().mul_int(&cg)
    }

    fn mul_int(&self, c: &BigInt) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        if c.is_one() {
            return self.clone();
        }
        LaurentPoly { low: self.low, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Pseudo-remainder of ordinary polynomials (low exponents ignored).
    fn pseudo_rem(&self, d: &LaurentPoly) -> Self {
        let n = self.coeffs.len() as i64 - 1;
        let m = d.coeffs.len() as i64 - 1;
        if n < m {
            let mut r = self.clone();
            r.low = 0;
            return r;
        }
        let lc = d.coeffs.last().unwrap().clone();
        let mut rem = self.coeffs.clone();
        for i in (m..=n).rev() {
            let i = i as usize;
            let top = rem[i].clone();
            for c in rem.iter_mut().take(i + 1) {
                *c = &*c * &lc;
            }
            if !top.is_zero() {
                for j in 0..(m as usize + 1) {
                    let t = &top * &d.coeffs[j];
                    rem[i - m as usize + j] -= t;
                }
            }
            debug_assert!(rem[i].is_zero());
        }
        rem.truncate(m as usize);
        Self::trim(0, rem)
    }

    pub fn eval_i64_pair(&self) -> Option<(i64, i64)> {
        // Used only by display helpers; not for arithmetic.
        None
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let low = self.low.min(rhs.low);
        let high = self.high().max(rhs.high());
        let mut coeffs = vec![BigInt::zero(); (high - low + 1) as usize];
        for (e, c) in self.terms() {
            coeffs[(e - low) as usize] += c;
        }
        for (e, c) in rhs.terms() {
            coeffs[(e - low) as usize] += c;
        }
        LaurentPoly::trim(low, coeffs)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self + &rhs.neg_ref()
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        LaurentPoly::trim(self.low + rhs.low, coeffs)
    }
}

/// Element of Q(q^(1/2)) as a reduced fraction of Laurent polynomials in
/// `s = q^(1/2)`.
///
/// Canonical form: the numerator and denominator have no common factor
/// (including integer content), the denominator's lowest exponent is zero,
/// and its lowest coefficient is positive. Zero is `0/1`. Equality of
/// canonical forms is structural and is what every verification suite uses.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Scalar {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { num: LaurentPoly::zero(), den: LaurentPoly::one() }
    }

    pub fn one() -> Self {
        Scalar { num: LaurentPoly::one(), den: LaurentPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { num: LaurentPoly::from_int(BigInt::from(n)), den: LaurentPoly::one() }
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        assert!(d != 0);
        Self::new(
            LaurentPoly::from_int(BigInt::from(n)),
            LaurentPoly::from_int(BigInt::from(d)),
        )
    }

    /// `s^k`, i.e. `q^(k/2)`.
    pub fn s_pow(k: i64) -> Self {
        Scalar { num: LaurentPoly::monomial(BigInt::one(), k), den: LaurentPoly::one() }
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::s_pow(2 * k)
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Scalar { num: p, den: LaurentPoly::one() }
    }

    /// Construct and canonicalize `n / d`.
    pub fn new(n: LaurentPoly, d: LaurentPoly) -> Self {
        assert!(!d.is_zero(), "Scalar with zero denominator");
        if n.is_zero() {
            return Self::zero();
        }
        let g = n.gcd(&d);
        let (mut n, mut d) = if g.is_one() { (n, d) } else { (n.exact_div(&g), d.exact_div(&g)) };
        // Move the denominator's monomial unit into the numerator.
        let k = d.low;
        if k != 0 {
            d = d.shift(-k);
            n = n.shift(-k);
        }
        if d.coeffs[0].is_negative() {
            n = n.neg_ref();
            d = d.neg_ref();
        }
        Scalar { num: n, den: d }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let mut n = self.den.clone();
        let mut d = self.num.clone();
        let k = d.low;
        if k != 0 {
            d = d.shift(-k);
            n = n.shift(-k);
        }
        if d.coeffs[0].is_negative() {
            n = n.neg_ref();
            d = d.neg_ref();
        }
        Scalar { num: n, den: d }
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut e = k.unsigned_abs();
        let mut acc = Self::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    /// Substitute `q -> q^(-1)` (that is, `s -> s^(-1)`).
    pub fn subst_q_inverse(&self) -> Self {
        Self::new(self.num.subst_inverse(), self.den.subst_inverse())
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            let n = &self.num + &rhs.num;
            if n.is_zero() {
                return Scalar::zero();
            }
            return Scalar::new(n, self.den.clone());
        }
        let g = self.den.gcd(&rhs.den);
        if g.is_one() {
            let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
            let d = &self.den * &rhs.den;
            // Denominators are coprime, so only unit normalization would be
            // needed, but the numerator sum may share content with d.
            Scalar::new(n, d)
        } else {
            let db = self.den.exact_div(&g);
            let dd = rhs.den.exact_div(&g);
            let n = &(&self.num * &dd) + &(&rhs.num * &db);
            let d = &self.den * &dd;
            Scalar::new(n, d)
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.is_zero() || rhs.is_zero() {
            return Scalar::zero();
        }
        if self.is_one() {
            return rhs.clone();
        }
        if rhs.is_one() {
            return self.clone();
        }
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = if g1.is_one() { self.num.clone() } else { self.num.exact_div(&g1) };
        let d2 = if g1.is_one() { rhs.den.clone() } else { rhs.den.exact_div(&g1) };
        let n2 = if g2.is_one() { rhs.num.clone() } else { rhs.num.exact_div(&g2) };
        let d1 = if g2.is_one() { self.den.clone() } else { self.den.exact_div(&g2) };
        let mut n = &n1 * &n2;
        let mut d = &d1 * &d2;
        let k = d.low;
        if k != 0 {
            d = d.shift(-k);
            n = n.shift(-k);
        }
        if d.coeffs[0].is_negative() {
            n = n.neg_ref();
            d = d.neg_ref();
        }
        Scalar { num: n, den: d }
    }
}

impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv()
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { num: self.num.neg_ref(), den: self.den.clone() }
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_poly(p: &LaurentPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    let mut first = true;
    // Highest power first.
    for (e, c) in p.terms().collect::<Vec<_>>().into_iter().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if first {
            if c.is_negative() {
                write!(f, "-")?;
            }
            first = false;
        } else if c.is_negative() {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let show_coeff = !mag.is_one() || e == 0;
        if show_coeff {
            write!(f, "{}", mag)?;
        }
        if e != 0 {
            if show_coeff {
                write!(f, "*")?;
            }
            if e == 2 {
                write!(f, "q")?;
            } else if e % 2 == 0 {
                write!(f, "q^{}", e / 2)?;
            } else {
                write!(f, "q^({}/2)", e)?;
            }
        }
    }
    Ok(())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            fmt_poly(&self.num, f)
        } else {
            write!(f, "(")?;
            fmt_poly(&self.num, f)?;
            write!(f, ")/(")?;
            fmt_poly(&self.den, f)?;
            write!(f, ")")
        }
    }
}

#[derive(Serialize, Deserialize)]
struct PolyRepr {
    low: i64,
    coeffs: Vec<String>,
}

impl From<&LaurentPoly> for PolyRepr {
    fn from(p: &LaurentPoly) -> Self {
        PolyRepr { low: p.low, coeffs: p.coeffs.iter().map(|c| c.to_string()).collect() }
    }
}

impl TryFrom<PolyRepr> for LaurentPoly {
    type Error = String;
    fn try_from(r: PolyRepr) -> Result<Self, String> {
        let mut coeffs = Vec::with_capacity(r.coeffs.len());
        for c in r.coeffs {
            coeffs.push(c.parse::<BigInt>().map_err(|e| e.to_string())?);
        }
        Ok(LaurentPoly::trim(r.low, coeffs))
    }
}

impl Serialize for Scalar {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let repr = (PolyRepr::from(&self.num), PolyRepr::from(&self.den));
        repr.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let (n, d) = <(PolyRepr, PolyRepr)>::deserialize(de)?;
        let n = LaurentPoly::try_from(n).map_err(serde::de::Error::custom)?;
        let d = LaurentPoly::try_from(d).map_err(serde::de::Error::custom)?;
        if d.is_zero() {
            return Err(serde::de::Error::custom("zero denominator"));
        }
        Ok(Scalar::new(n, d))
    }
}

/// The q-integer `[n]_i = (q_i^n - q_i^(-n)) / (q_i - q_i^(-1))` with
/// `q_1 = q` and `q_2 = q^2`.
pub fn qint(n: i64, base: u8) -> Scalar {
    assert!(base == 1 || base == 2, "q-integer base index must be 1 or 2");
    let step = 2 * base as i64; // exponent of s per unit of q_i
    if n == 0 {
        return Scalar::zero();
    }
    let (sign, n) = if n < 0 { (true, -n) } else { (false, n) };
    // [n] = q^(n-1) + q^(n-3) + ... + q^(1-n), all in q_i units.
    let mut p = LaurentPoly::zero();
    for j in 0..n {
        p = &p + &LaurentPoly::monomial(BigInt::one(), step * (n - 1 - 2 * j));
    }
    let s = Scalar::from_poly(p);
    if sign {
        -&s
    } else {
        s
    }
}

/// `[n]_q` in the base deformation parameter.
pub fn qnum(n: i64) -> Scalar {
    qint(n, 1)
}

/// q-factorial `[n]! = [1][2]...[n]` (base q).
pub fn qfactorial(n: u32) -> Scalar {
    let mut acc = Scalar::one();
    for m in 1..=n as i64 {
        acc = &acc * &qint(m, 1);
    }
    acc
}

/// Coefficient of `x^n` in `exp_q(x) = sum_n q^(n(n-1)/2) / [n]! * x^n`,
/// with `sign = -1` replacing `q` by `q^(-1)`.
pub fn qexp_coeff(n: u32, sign: i8) -> Scalar {
    assert!(sign == 1 || sign == -1);
    let n64 = n as i64;
    let e = n64 * (n64 - 1); // s-exponent of q^(n(n-1)/2)
    let top = Scalar::s_pow(if sign == 1 { e } else { -e });
    &top / &qfactorial(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q() -> Scalar {
        Scalar::q_pow(1)
    }

    #[test]
    fn qint_basics() {
        // [2]_1 = q + q^-1
        let expect = &q() + &Scalar::q_pow(-1);
        assert_eq!(qint(2, 1), expect);
        // [2]_2 = q^2 + q^-2
        let expect2 = &Scalar::q_pow(2) + &Scalar::q_pow(-2);
        assert_eq!(qint(2, 2), expect2);
        assert!(qint(0, 1).is_zero());
        assert_eq!(qint(-3, 1), -&qint(3, 1));
        assert_eq!(qint(1, 2), Scalar::one());
    }

    #[test]
    fn qint_symmetric_under_q_inverse() {
        for n in -6..=6 {
            for base in [1u8, 2u8] {
                let a = qint(n, base);
                assert_eq!(a.subst_q_inverse(), a, "[{}]_{}", n, base);
            }
        }
    }

    #[test]
    fn qfactorial_basics() {
        assert!(qfactorial(0).is_one());
        assert_eq!(qfactorial(2), qint(2, 1));
        // [3]! = (q + q^-1)(q^2 + 1 + q^-2)
        let f1 = &q() + &Scalar::q_pow(-1);
        let f2 = &(&Scalar::q_pow(2) + &Scalar::one()) + &Scalar::q_pow(-2);
        assert_eq!(qfactorial(3), &f1 * &f2);
    }

    #[test]
    fn qexp_coeff_basics() {
        assert!(qexp_coeff(0, 1).is_one());
        assert!(qexp_coeff(1, -1).is_one());
        // n = 2, +1: q / [2]!
        assert_eq!(qexp_coeff(2, 1), &q() / &qint(2, 1));
    }

    #[test]
    fn qexp_inverse_identity_order_12() {
        // exp_q(x) exp_{q^-1}(-x) = 1, coefficientwise to order 12.
        for n in 0..=12u32 {
            let mut acc = Scalar::zero();
            for a in 0..=n {
                let b = n - a;
                let sign = if b % 2 == 0 { Scalar::one() } else { -&Scalar::one() };
                let term = &(&qexp_coeff(a, 1) * &sign) * &qexp_coeff(b, -1);
                acc += &term;
            }
            if n == 0 {
                assert!(acc.is_one());
            } else {
                assert!(acc.is_zero(), "order {} residual {}", n, acc);
            }
        }
    }

    #[test]
    fn display_reads_in_q() {
        assert_eq!(qint(2, 1).to_string(), "q + q^-1");
        assert_eq!(Scalar::s_pow(3).to_string(), "q^(3/2)");
        let r = &Scalar::one() / &qint(2, 1);
        assert_eq!(r.to_string(), "(q)/(q^2 + 1)");
    }

    #[test]
    fn serde_round_trip() {
        let a = &qexp_coeff(3, -1) + &Scalar::s_pow(-5);
        let s = serde_json::to_string(&a).unwrap();
        let b: Scalar = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
    }

    fn arb_scalar() -> impl Strategy<Value = Scalar> {
        // Small random Laurent fractions.
        let term = (-4i64..5, -9i64..10);
        let poly = prop::collection::vec(term, 1..4)
            .prop_map(|ts| ts.into_iter().fold(LaurentPoly::zero(), |p, (e, c)| {
                &p + &LaurentPoly::monomial(BigInt::from(c), e)
            }));
        (poly.clone(), poly)
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| Scalar::new(n, d))
    }

    proptest! {
        #[test]
        fn field_distributivity(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            let lhs = &(&a + &b) * &c;
            let rhs = &(&a * &c) + &(&b * &c);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn field_inverse(a in arb_scalar()) {
            if !a.is_zero() {
                prop_assert!((&a * &a.inv()).is_one());
            }
        }

        #[test]
        fn add_mul_commute(a in arb_scalar(), b in arb_scalar()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
        }
    }
}
