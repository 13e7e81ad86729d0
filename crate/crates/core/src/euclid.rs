//! Right division, extended Euclid, lcm and Weyl conjugation.
//!
//! Everything here works in the column form `Σ rᵢ(t) εⁱ`: the leading
//! coefficient series is inverted as a Laurent series, so divisors whose
//! leading coefficient vanishes at `t = 0` are allowed at the cost of
//! precision, which shows up as a lower `trunc` on the results.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::OperatorSeries;
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::LaurentSeries;

/// `L = Q·M + R` with `order(R) < order(M)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionResult {
    pub quotient: OperatorSeries,
    pub remainder: OperatorSeries,
}

impl DivisionResult {
    pub fn divides(&self) -> bool {
        self.remainder.is_zero()
    }
}

/// `U·L + V·M = gcd`, with the gcd's leading coefficient series equal to 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BezoutCertificate {
    pub gcd: OperatorSeries,
    pub u: OperatorSeries,
    pub v: OperatorSeries,
}

/// `target·H = K·source`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyPair {
    pub h: OperatorSeries,
    pub k: OperatorSeries,
    pub target: OperatorSeries,
}

/// Result of [`invert_conjugacy`]: `L·V = W·M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InverseConjugacy {
    pub u: OperatorSeries,
    pub v: OperatorSeries,
    pub w: OperatorSeries,
    /// Whether `gcd(V, M) = 1` was confirmed by Euclid.
    pub coprime: bool,
}

/// `c(t)·εᵈ`.
fn column_monomial(c: &LaurentSeries, d: usize) -> OperatorSeries {
    OperatorSeries::from_terms(c.trunc(), c.terms().map(|(k, a)| (k, Poly::monomial(a.clone(), d))))
}

fn left_scale(s: &LaurentSeries, op: &OperatorSeries) -> OperatorSeries {
    &OperatorSeries::from_series(s) * op
}

/// Left-multiplies by the inverse of the leading coefficient series.
pub fn make_monic(op: &OperatorSeries) -> Result<(OperatorSeries, LaurentSeries)> {
    let lead = op.leading_series().ok_or(Error::DivisionByZero)?;
    let inv = lead.inv().ok_or(Error::ZeroLeadingCoefficient)?;
    Ok((left_scale(&inv, op), inv))
}

pub fn div_rem(l: &OperatorSeries, m: &OperatorSeries) -> Result<DivisionResult> {
    let order_m = m.order().ok_or(Error::DivisionByZero)?;
    let lead = m.leading_series().ok_or(Error::DivisionByZero)?;
    let lead_inv = lead.inv().ok_or(Error::ZeroLeadingCoefficient)?;
    let mut r = l.clone();
    let mut q = OperatorSeries::zero(l.trunc() - m.kmin());
    while let Some(n) = r.order() {
        if n < order_m {
            break;
        }
        let c = &r.column(n) * &lead_inv;
        if c.is_zero() {
            return Err(Error::PrecisionExhausted("leading column vanished during division"));
        }
        let term = column_monomial(&c, n - order_m);
        let next = &r - &(&term * m);
        if next.order().is_some_and(|k| k >= n) {
            return Err(Error::PrecisionExhausted("division step did not lower the order"));
        }
        r = next;
        q = &q + &term;
    }
    Ok(DivisionResult { quotient: q, remainder: r })
}

pub fn gcd_bezout(l: &OperatorSeries, m: &OperatorSeries) -> Result<BezoutCertificate> {
    if l.is_zero() || m.is_zero() {
        return Err(Error::Precondition("gcd of a zero operator"));
    }
    let trunc = l.trunc().min(m.trunc());
    let (mut r0, mut r1) = (l.clone(), m.clone());
    let (mut u0, mut u1) = (OperatorSeries::one(trunc), OperatorSeries::zero(trunc));
    let (mut v0, mut v1) = (OperatorSeries::zero(trunc), OperatorSeries::one(trunc));
    while !r1.is_zero() {
        let DivisionResult { quotient, remainder } = div_rem(&r0, &r1)?;
        let u2 = &u0 - &(&quotient * &u1);
        let v2 = &v0 - &(&quotient * &v1);
        r0 = core::mem::replace(&mut r1, remainder);
        u0 = core::mem::replace(&mut u1, u2);
        v0 = core::mem::replace(&mut v1, v2);
    }
    let (gcd, inv) = make_monic(&r0)?;
    Ok(BezoutCertificate { gcd, u: left_scale(&inv, &u0), v: left_scale(&inv, &v0) })
}

/// Least common left multiple, normalised to leading coefficient 1.
///
/// The remainders `ρₖ = εᵏM mod L` live in a space of dimension `order(L)`
/// over the series field; the first linear dependence `Σ cᵢρᵢ = 0` with
/// `c_k = 1` gives `P = Σ cᵢεⁱ` and `lcm = P·M`.
pub fn lcm(l: &OperatorSeries, m: &OperatorSeries) -> Result<OperatorSeries> {
    if l.is_zero() || m.is_zero() {
        return Err(Error::Precondition("lcm of a zero operator"));
    }
    let n = l.order().unwrap_or(0);
    let eps = OperatorSeries::euler(Poly::epsilon(), l.trunc().max(m.trunc()));
    let mut rhos: Vec<Vec<LaurentSeries>> = Vec::new();
    let mut rho = div_rem(m, l)?.remainder;
    for k in 0..=n {
        let cols: Vec<LaurentSeries> = (0..n).map(|i| rho.column(i)).collect();
        let coeffs = if rho.is_zero() {
            Some(vec![LaurentSeries::zero(rho.trunc()); k])
        } else if k == 0 {
            None
        } else {
            let a: Vec<Vec<LaurentSeries>> = (0..n).map(|row| rhos.iter().map(|v| v[row].clone()).collect()).collect();
            let b: Vec<LaurentSeries> = cols.iter().map(|c| -c).collect();
            linalg::solve(&a, &b)
        };
        if let Some(c) = coeffs {
            let trunc = c.iter().map(LaurentSeries::trunc).chain([rho.trunc()]).min().unwrap_or(rho.trunc());
            let mut p_cols = c;
            p_cols.push(LaurentSeries::one(trunc));
            let p = OperatorSeries::from_columns(&p_cols);
            let (out, _) = make_monic(&(&p * m))?;
            return Ok(out);
        }
        rhos.push(cols);
        rho = div_rem(&(&eps * &rho), l)?.remainder;
    }
    Err(Error::PrecisionExhausted("no linear dependence among remainders"))
}

/// `(M, K)` with `M·H = K·L`, `order(M) = order(L)` and `M` sharing the
/// leading coefficient series of `L`.
pub fn conjugate_by(l: &OperatorSeries, h: &OperatorSeries) -> Result<ConjugacyPair> {
    let g = gcd_bezout(l, h)?;
    if g.gcd.order() != Some(0) {
        return Err(Error::NotCoprime);
    }
    let p = lcm(l, h)?;
    let scale = &l.leading_series().unwrap() * &h.leading_series().unwrap();
    let p = left_scale(&scale, &p);
    let dm = div_rem(&p, h)?;
    let dk = div_rem(&p, l)?;
    if !dm.divides() || !dk.divides() {
        return Err(Error::Internal("lcm is not divisible by its arguments"));
    }
    Ok(ConjugacyPair { h: h.clone(), k: dk.quotient, target: dm.quotient })
}

/// Given `M·H = K·L` with `gcd(L, H) = 1`, finds `V, W` with `L·V = W·M`.
pub fn invert_conjugacy(l: &OperatorSeries, m: &OperatorSeries, h: &OperatorSeries) -> Result<InverseConjugacy> {
    let g = gcd_bezout(l, h)?;
    if g.gcd.order() != Some(0) {
        return Err(Error::NotCoprime);
    }
    let lv = l * &g.v;
    let d = div_rem(&lv, m)?;
    if !d.divides() {
        return Err(Error::Precondition("M·H is not a left multiple of L"));
    }
    let coprime = gcd_bezout(&g.v, m).map(|c| c.gcd.order() == Some(0)).unwrap_or(false);
    Ok(InverseConjugacy { u: g.u, v: g.v, w: d.quotient, coprime })
}

/// `L = Q'·M + R'` with `Q' = Q − 1`, `R' = M + R`, both Fuchsian.
pub fn relaxed_fuchsian_div(l: &OperatorSeries, m: &OperatorSeries) -> Result<DivisionResult> {
    if !l.is_fuchsian() || !m.is_fuchsian() {
        return Err(Error::NotFuchsian);
    }
    if l.order() <= m.order() {
        return Err(Error::Precondition("order(L) must exceed order(M)"));
    }
    let d = div_rem(l, m)?;
    let one = OperatorSeries::constant(Scalar::one(), d.quotient.trunc());
    let quotient = &d.quotient - &one;
    let remainder = m + &d.remainder;
    if !quotient.is_fuchsian() || !remainder.is_fuchsian() {
        return Err(Error::Internal("relaxed division produced a non-Fuchsian operator"));
    }
    Ok(DivisionResult { quotient, remainder })
}

#[cfg(test)]
mod tests {
    use super::*;

    const T: i64 = 8;

    fn e(c: &[i64]) -> OperatorSeries {
        OperatorSeries::euler(Poly::from_ints(c), T)
    }

    fn example() -> OperatorSeries {
        OperatorSeries::from_terms(T, [(0, Poly::from_ints(&[0, -1, 1])), (1, Poly::from_ints(&[-1, 1]))])
    }

    fn eps_plus_t() -> OperatorSeries {
        OperatorSeries::from_terms(T, [(0, Poly::from_ints(&[0, 1])), (1, Poly::one())])
    }

    #[test]
    fn division_examples() {
        let d = div_rem(&example(), &e(&[-1, 1])).unwrap();
        assert_eq!(d.quotient, eps_plus_t());
        assert!(d.remainder.is_zero());
        let d = div_rem(&example(), &example()).unwrap();
        assert_eq!(d.quotient, OperatorSeries::one(T));
        let d = div_rem(&e(&[0, 1]), &e(&[-1, 1])).unwrap();
        assert_eq!(d.quotient, e(&[1]));
        assert_eq!(d.remainder, e(&[1]));
        assert_eq!(div_rem(&e(&[1]), &OperatorSeries::zero(T)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_examples() {
        let g = gcd_bezout(&e(&[0, -1, 1]), &e(&[0, 1])).unwrap();
        assert_eq!(g.gcd, e(&[0, 1]));
        assert!(g.u.is_zero());
        assert_eq!(g.v, e(&[1]));
        let g = gcd_bezout(&e(&[0, 1]), &e(&[-1, 1])).unwrap();
        assert_eq!(g.gcd, e(&[1]));
        assert_eq!(g.u, e(&[1]));
        assert_eq!(g.v, e(&[-1]));
        let (l, m) = (e(&[-1, 1]), eps_plus_t());
        let g = gcd_bezout(&l, &m).unwrap();
        assert_eq!(g.gcd.order(), Some(0));
        let lhs = &(&g.u * &l) + &(&g.v * &m);
        assert_eq!(lhs, OperatorSeries::one(lhs.trunc()));
    }

    #[test]
    fn lcm_examples() {
        assert_eq!(lcm(&e(&[0, 1]), &e(&[-1, 1])).unwrap(), e(&[0, -1, 1]));
        assert_eq!(lcm(&example(), &e(&[1])).unwrap(), example());
        let (l, m) = (e(&[-1, 1]), eps_plus_t());
        let p = lcm(&l, &m).unwrap();
        assert_eq!(p.order(), Some(2));
        assert!(div_rem(&p, &l).unwrap().divides());
        assert!(div_rem(&p, &m).unwrap().divides());
    }

    #[test]
    fn conjugation_examples() {
        let c = conjugate_by(&example(), &e(&[1])).unwrap();
        assert_eq!(c.target, example());
        assert_eq!(c.k, e(&[1]));
        let c = conjugate_by(&e(&[-1, 1]), &e(&[0, 1])).unwrap();
        assert_eq!(c.target, e(&[-1, 1]));
        assert_eq!(c.k, e(&[0, 1]));
        let c = conjugate_by(&e(&[0, -1, 1]), &e(&[-2, 1])).unwrap();
        assert_eq!(c.target, e(&[0, -1, 1]));
        assert_eq!(conjugate_by(&e(&[0, -1, 1]), &e(&[0, 1])), Err(Error::NotCoprime));
    }

    #[test]
    fn inversion_examples() {
        let l = example();
        let inv = invert_conjugacy(&l, &l, &e(&[1])).unwrap();
        assert_eq!(inv.v, e(&[1]));
        assert_eq!(inv.w, e(&[1]));
        let (l, h) = (e(&[-1, 1]), e(&[0, 1]));
        let c = conjugate_by(&l, &h).unwrap();
        let inv = invert_conjugacy(&l, &c.target, &h).unwrap();
        assert_eq!(&l * &inv.v, &inv.w * &c.target);
        assert!(inv.coprime);
    }

    #[test]
    fn relaxed_division_examples() {
        let d = relaxed_fuchsian_div(&e(&[0, 0, 1]), &e(&[0, 1])).unwrap();
        assert_eq!(d.quotient, e(&[-1, 1]));
        assert_eq!(d.remainder, e(&[0, 1]));
        let d = relaxed_fuchsian_div(&example(), &e(&[-1, 1])).unwrap();
        assert_eq!(d.quotient, &eps_plus_t() - &e(&[1]));
        assert_eq!(d.remainder, e(&[-1, 1]));
    }
}
