//! Truncated Laurent series in `t`.
//!
//! A [`LaurentSeries`] stores the coefficients of `t^kmin, …, t^trunc`; the
//! value is known modulo `t^(trunc+1)`. Every arithmetic operation returns
//! the largest truncation order that is still exact.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct LaurentSeries {
    kmin: i64,
    trunc: i64,
    coeffs: Vec<Scalar>,
}

impl LaurentSeries {
    /// Builds a series from coefficients of `t^kmin, t^(kmin+1), …`, padded
    /// or cut to end at `t^trunc`, then canonicalised.
    pub fn new(kmin: i64, trunc: i64, mut coeffs: Vec<Scalar>) -> Self {
        let len = (trunc - kmin + 1).max(0) as usize;
        coeffs.resize(len, Scalar::zero());
        let lead = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == coeffs.len() {
            return LaurentSeries::zero(trunc);
        }
        coeffs.drain(..lead);
        LaurentSeries { kmin: kmin + lead as i64, trunc, coeffs }
    }

    /// Zero known modulo `t^(trunc+1)`.
    pub fn zero(trunc: i64) -> Self {
        LaurentSeries { kmin: trunc + 1, trunc, coeffs: Vec::new() }
    }

    pub fn one(trunc: i64) -> Self {
        LaurentSeries::monomial(Scalar::one(), 0, trunc)
    }

    pub fn constant(c: Scalar, trunc: i64) -> Self {
        LaurentSeries::monomial(c, 0, trunc)
    }

    pub fn monomial(c: Scalar, k: i64, trunc: i64) -> Self {
        LaurentSeries::new(k, trunc, vec![c])
    }

    /// Series from `(power, coefficient)` pairs; powers above `trunc` are dropped.
    pub fn from_terms(trunc: i64, terms: impl IntoIterator<Item = (i64, Scalar)>) -> Self {
        let terms: Vec<(i64, Scalar)> = terms.into_iter().filter(|(k, _)| *k <= trunc).collect();
        let Some(kmin) = terms.iter().map(|(k, _)| *k).min() else {
            return LaurentSeries::zero(trunc);
        };
        let mut coeffs = vec![Scalar::zero(); (trunc - kmin + 1) as usize];
        for (k, c) in terms {
            coeffs[(k - kmin) as usize] += &c;
        }
        LaurentSeries::new(kmin, trunc, coeffs)
    }

    pub fn kmin(&self) -> i64 {
        self.kmin
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    /// Lowest power with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        (!self.is_zero()).then_some(self.kmin)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `t^k`; zero outside the tracked window.
    pub fn coeff(&self, k: i64) -> Scalar {
        if k < self.kmin || k > self.trunc {
            return Scalar::zero();
        }
        self.coeffs[(k - self.kmin) as usize].clone()
    }

    fn coeff_ref(&self, k: i64) -> Option<&Scalar> {
        if k < self.kmin || k > self.trunc {
            None
        } else {
            self.coeffs.get((k - self.kmin) as usize)
        }
    }

    /// `(power, coefficient)` for every nonzero tracked coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.kmin + i as i64, c))
    }

    /// Forgets coefficients above `t^trunc` (never raises the truncation).
    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        LaurentSeries::new(self.kmin, trunc, self.coeffs.clone())
    }

    /// Reinterprets the series as exact up to `t^trunc`, padding with zeros.
    pub fn extend_exact(&self, trunc: i64) -> Self {
        if self.is_zero() {
            return LaurentSeries::zero(trunc);
        }
        LaurentSeries::new(self.kmin, trunc, self.coeffs.clone())
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries { kmin: self.kmin + k, trunc: self.trunc + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        LaurentSeries::new(self.kmin, self.trunc, self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Product computed only through `t^limit` (or the natural truncation, if lower).
    pub fn mul_to(&self, rhs: &LaurentSeries, limit: i64) -> LaurentSeries {
        let trunc = (self.trunc + rhs.kmin).min(rhs.trunc + self.kmin).min(limit);
        if self.is_zero() || rhs.is_zero() {
            return LaurentSeries::zero(trunc);
        }
        let kmin = self.kmin + rhs.kmin;
        if trunc < kmin {
            return LaurentSeries::zero(trunc);
        }
        let mut out = vec![Scalar::zero(); (trunc - kmin + 1) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let idx = i + j;
                if idx >= out.len() {
                    break;
                }
                out[idx] += &(a * b);
            }
        }
        LaurentSeries::new(kmin, trunc, out)
    }

    /// Multiplicative inverse; the relative precision `trunc − kmin` is kept.
    pub fn inv(&self) -> Option<LaurentSeries> {
        let a0_inv = self.coeffs.first()?.inv()?;
        let rel = self.trunc - self.kmin;
        let n = rel as usize + 1;
        let mut b: Vec<Scalar> = Vec::with_capacity(n);
        b.push(a0_inv.clone());
        for m in 1..n {
            let mut s = Scalar::zero();
            for k in 1..=m.min(self.coeffs.len() - 1) {
                s += &(&self.coeffs[k] * &b[m - k]);
            }
            b.push(-&(&s * &a0_inv));
        }
        Some(LaurentSeries::new(-self.kmin, -self.kmin + rel, b))
    }

    pub fn div(&self, rhs: &LaurentSeries) -> Option<LaurentSeries> {
        Some(self * &rhs.inv()?)
    }

    /// `ε = t·d/dt` applied termwise: `c_k ↦ k·c_k`.
    pub fn eps(&self) -> LaurentSeries {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c * &Scalar::from_int(self.kmin + i as i64))
            .collect();
        LaurentSeries::new(self.kmin, self.trunc, coeffs)
    }

    /// Inverse of [`eps`](Self::eps) on series without a `t^0` term:
    /// `c_k ↦ c_k / k`. Returns `None` when the constant term is nonzero.
    pub fn eps_inverse(&self) -> Option<LaurentSeries> {
        if !self.coeff(0).is_zero() {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let k = self.kmin + i as i64;
                if k == 0 {
                    Scalar::zero()
                } else {
                    c / &Scalar::from_int(k)
                }
            })
            .collect();
        Some(LaurentSeries::new(self.kmin, self.trunc, coeffs))
    }

    /// `d/dt`.
    pub fn derivative(&self) -> LaurentSeries {
        self.eps().shift(-1)
    }

    /// Termwise primitive in `dt`; `None` if a `t⁻¹` term is present.
    pub fn integrate(&self) -> Option<LaurentSeries> {
        self.shift(1).eps_inverse()
    }

    /// `exp(f)` for `f` with no terms of nonpositive degree.
    pub fn exp(&self) -> Option<LaurentSeries> {
        if self.is_zero() {
            return Some(LaurentSeries::one(self.trunc));
        }
        if self.kmin < 1 {
            return None;
        }
        // ε(e^f) = (εf)·e^f, solved order by order.
        let ef = self.eps();
        let n = self.trunc.max(0) as usize + 1;
        let mut e: Vec<Scalar> = Vec::with_capacity(n);
        e.push(Scalar::one());
        for m in 1..n {
            let mut s = Scalar::zero();
            for k in 1..=m {
                if let Some(c) = ef.coeff_ref(k as i64) {
                    s += &(c * &e[m - k]);
                }
            }
            e.push(&s / &Scalar::from_int(m as i64));
        }
        Some(LaurentSeries::new(0, self.trunc, e))
    }

    /// Lowest power at which two series differ within their common precision.
    pub fn first_difference(&self, other: &LaurentSeries) -> Option<i64> {
        let d = self - other;
        d.valuation()
    }
}

impl Add<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        combine(self, rhs, false)
    }
}

impl Sub<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        combine(self, rhs, true)
    }
}

fn combine(a: &LaurentSeries, b: &LaurentSeries, negate: bool) -> LaurentSeries {
    let trunc = a.trunc.min(b.trunc);
    let kmin = a.kmin.min(b.kmin);
    if kmin > trunc {
        return LaurentSeries::zero(trunc);
    }
    let coeffs = (kmin..=trunc)
        .map(|k| match (a.coeff_ref(k), b.coeff_ref(k)) {
            (Some(x), Some(y)) if negate => x - y,
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) if negate => -y,
            (None, Some(y)) => y.clone(),
            (None, None) => Scalar::zero(),
        })
        .collect();
    LaurentSeries::new(kmin, trunc, coeffs)
}

impl Mul<&LaurentSeries> for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        self.mul_to(rhs, i64::MAX)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries { kmin: self.kmin, trunc: self.trunc, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.terms() {
            crate::operator::write_monomial(f, c, k, 0, first)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.trunc + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn s(kmin: i64, trunc: i64, c: &[i64]) -> LaurentSeries {
        LaurentSeries::new(kmin, trunc, c.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    #[test]
    fn canonical_zero_and_shift() {
        let z = s(0, 5, &[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.kmin(), 6);
        let a = s(0, 4, &[0, 2, 1]);
        assert_eq!(a.kmin(), 1);
        assert_eq!(a.shift(-3).kmin(), -2);
    }

    #[test]
    fn inverse_of_one_minus_t() {
        let a = s(0, 6, &[1, -1]);
        let b = a.inv().unwrap();
        assert_eq!(b, s(0, 6, &[1, 1, 1, 1, 1, 1, 1]));
        assert_eq!(&a * &b, LaurentSeries::one(6));
        let c = s(2, 6, &[3, 1]);
        let ci = c.inv().unwrap();
        assert_eq!(ci.kmin(), -2);
        assert_eq!(ci.trunc(), 2);
        assert_eq!(&c * &ci, LaurentSeries::one(4));
    }

    #[test]
    fn exp_and_log_identities() {
        let t = s(1, 8, &[1]);
        let e = t.exp().unwrap();
        for k in 0..=8 {
            let mut f = Scalar::one();
            for i in 1..=k {
                f = &f * &Scalar::from_int(i);
            }
            assert_eq!(e.coeff(k), f.inv().unwrap());
        }
        let en = (-&t).exp().unwrap();
        assert_eq!(&e * &en, LaurentSeries::one(8));
        let p = s(0, 8, &[1, 2, 3, 4]);
        assert_eq!(p.integrate().unwrap().derivative(), p.truncate(8));
        assert!(s(-1, 8, &[1]).integrate().is_none());
    }

    #[test]
    fn display() {
        assert_eq!(s(0, 3, &[1, -1]).to_string(), "1 - t + O(t^4)");
        assert_eq!(LaurentSeries::zero(2).to_string(), "0 + O(t^3)");
    }
}
