//! Truncated operators `Σ_{k=kmin..T} tᵏ pₖ(ε)`, powers of `t` on the left.
//!
//! Multiplication uses `w(ε)·tʲ = tʲ·w(ε + j)`, so
//! `(tᵃp)(tᵇq) = tᵃ⁺ᵇ p(ε + b) q(ε)`. The same grid read column-wise gives
//! the form `Σ rᵢ(t) εⁱ` used by division and companion matrices.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::series::LaurentSeries;

/// A truncated operator. `trunc` is the last `t`-power known exactly.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct OperatorSeries {
    kmin: i64,
    trunc: i64,
    terms: Vec<Poly>,
}

impl OperatorSeries {
    /// Builds an operator from the polynomials of `t^kmin, t^(kmin+1), …`,
    /// padded or cut at `trunc`, with leading zero terms stripped.
    pub fn new(kmin: i64, trunc: i64, mut terms: Vec<Poly>) -> Self {
        let len = (trunc - kmin + 1).max(0) as usize;
        terms.resize(len, Poly::zero());
        let lead = terms.iter().take_while(|p| p.is_zero()).count();
        if lead == terms.len() {
            return OperatorSeries::zero(trunc);
        }
        terms.drain(..lead);
        OperatorSeries { kmin: kmin + lead as i64, trunc, terms }
    }

    pub fn zero(trunc: i64) -> Self {
        OperatorSeries { kmin: trunc + 1, trunc, terms: Vec::new() }
    }

    pub fn one(trunc: i64) -> Self {
        OperatorSeries::euler(Poly::one(), trunc)
    }

    pub fn constant(c: Scalar, trunc: i64) -> Self {
        OperatorSeries::euler(Poly::constant(c), trunc)
    }

    /// The Euler operator `p(ε)`.
    pub fn euler(p: Poly, trunc: i64) -> Self {
        OperatorSeries::new(0, trunc, vec![p])
    }

    /// `tᵏ·p(ε)`.
    pub fn monomial(k: i64, p: Poly, trunc: i64) -> Self {
        OperatorSeries::new(k, trunc, vec![p])
    }

    /// Operator from sparse `(k, pₖ)` pairs; repeated powers are summed.
    pub fn from_terms(trunc: i64, terms: impl IntoIterator<Item = (i64, Poly)>) -> Self {
        let terms: Vec<(i64, Poly)> = terms.into_iter().filter(|(k, _)| *k <= trunc).collect();
        let Some(kmin) = terms.iter().map(|(k, _)| *k).min() else {
            return OperatorSeries::zero(trunc);
        };
        let mut dense = vec![Poly::zero(); (trunc - kmin + 1) as usize];
        for (k, p) in terms {
            let slot = &mut dense[(k - kmin) as usize];
            *slot = &*slot + &p;
        }
        OperatorSeries::new(kmin, trunc, dense)
    }

    /// The order-zero operator of multiplication by `a(t)`.
    pub fn from_series(a: &LaurentSeries) -> Self {
        OperatorSeries::from_terms(a.trunc(), a.terms().map(|(k, c)| (k, Poly::constant(c.clone()))))
    }

    /// `Σ cols[i](t)·εⁱ`.
    pub fn from_columns(cols: &[LaurentSeries]) -> Self {
        let trunc = cols.iter().map(LaurentSeries::trunc).min().unwrap_or(0);
        let mut map: Vec<(i64, Vec<Scalar>)> = Vec::new();
        let kmin = cols.iter().filter_map(LaurentSeries::valuation).min();
        let Some(kmin) = kmin else {
            return OperatorSeries::zero(trunc);
        };
        for k in kmin..=trunc {
            map.push((k, vec![Scalar::zero(); cols.len()]));
        }
        for (i, col) in cols.iter().enumerate() {
            for (k, c) in col.terms() {
                if k <= trunc {
                    map[(k - kmin) as usize].1[i] = c.clone();
                }
            }
        }
        OperatorSeries::new(kmin, trunc, map.into_iter().map(|(_, c)| Poly::new(c)).collect())
    }

    pub fn kmin(&self) -> i64 {
        self.kmin
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_ref(&self, k: i64) -> Option<&Poly> {
        if k < self.kmin || k > self.trunc {
            None
        } else {
            self.terms.get((k - self.kmin) as usize)
        }
    }

    /// `pₖ`, zero outside the tracked window.
    pub fn term(&self, k: i64) -> Poly {
        self.term_ref(k).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing `t`-power.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Poly)> + '_ {
        self.terms
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(move |(i, p)| (self.kmin + i as i64, p))
    }

    /// Highest power of `t` with a nonzero term.
    pub fn max_power(&self) -> Option<i64> {
        self.terms().map(|(k, _)| k).last()
    }

    /// `max deg pₖ`, or `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.terms().filter_map(|(_, p)| p.degree()).max()
    }

    /// The Euler part `p₀`; requires no negative powers of `t`.
    pub fn eulerization(&self) -> Result<Poly> {
        if self.kmin < 0 {
            return Err(Error::NegativeValuation(self.kmin));
        }
        Ok(self.term(0))
    }

    /// `kmin ≥ 0` and `deg p₀ = order`.
    pub fn is_fuchsian(&self) -> bool {
        match self.order() {
            None => false,
            Some(n) => self.kmin >= 0 && self.term(0).degree() == Some(n),
        }
    }

    /// Coefficient of `εⁱ` in the column form `Σ rᵢ(t) εⁱ`.
    pub fn column(&self, i: usize) -> LaurentSeries {
        LaurentSeries::from_terms(self.trunc, self.terms().map(|(k, p)| (k, p.coeff(i))))
    }

    /// All columns `r₀, …, r_order`.
    pub fn columns(&self) -> Vec<LaurentSeries> {
        match self.order() {
            None => Vec::new(),
            Some(n) => (0..=n).map(|i| self.column(i)).collect(),
        }
    }

    /// The coefficient series of the highest power of `ε`.
    pub fn leading_series(&self) -> Option<LaurentSeries> {
        self.order().map(|n| self.column(n))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        OperatorSeries::new(self.kmin, self.trunc, self.terms.iter().map(|p| p.scale(c)).collect())
    }

    /// Left multiplication by `tᵏ`.
    pub fn shift_t(&self, k: i64) -> Self {
        OperatorSeries { kmin: self.kmin + k, trunc: self.trunc + k, terms: self.terms.clone() }
    }

    /// Forgets terms above `t^trunc` (never raises the truncation).
    pub fn truncate(&self, trunc: i64) -> Self {
        if trunc >= self.trunc {
            return self.clone();
        }
        OperatorSeries::new(self.kmin, trunc, self.terms.clone())
    }

    /// Declares the operator exact up to `t^trunc`, padding with zero terms.
    pub fn extend_exact(&self, trunc: i64) -> Self {
        if self.is_zero() {
            return OperatorSeries::zero(trunc);
        }
        OperatorSeries::new(self.kmin, trunc, self.terms.clone())
    }

    /// Product computed through `t^limit` at most.
    pub fn mul_to(&self, rhs: &OperatorSeries, limit: i64) -> OperatorSeries {
        let trunc = (self.trunc + rhs.kmin).min(rhs.trunc + self.kmin).min(limit);
        if self.is_zero() || rhs.is_zero() {
            return OperatorSeries::zero(trunc);
        }
        let kmin = self.kmin + rhs.kmin;
        if trunc < kmin {
            return OperatorSeries::zero(trunc);
        }
        let mut out = vec![Poly::zero(); (trunc - kmin + 1) as usize];
        for (j, q) in rhs.terms.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let b = rhs.kmin + j as i64;
            for (i, p) in self.terms.iter().enumerate() {
                let a = self.kmin + i as i64;
                if a + b > trunc {
                    break;
                }
                if p.is_zero() {
                    continue;
                }
                let slot = &mut out[(a + b - kmin) as usize];
                *slot = &*slot + &(&p.shift(b) * q);
            }
        }
        OperatorSeries::new(kmin, trunc, out)
    }

    /// Lowest `t`-power at which `self` and `other` differ within their
    /// common truncation.
    pub fn first_difference(&self, other: &OperatorSeries) -> Option<i64> {
        (self - other).terms().map(|(k, _)| k).next()
    }

    /// Rewrites `Σ aᵢ(t)·∂^(n−i)` (leading coefficient first) in Euler form
    /// using `tʲ∂ʲ = ε(ε−1)⋯(ε−j+1)`.
    pub fn from_d_form(coeffs: &[LaurentSeries]) -> Result<Self> {
        let Some(lead) = coeffs.first() else {
            return Err(Error::ZeroLeadingCoefficient);
        };
        if lead.is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        let n = coeffs.len() - 1;
        let trunc = coeffs.iter().enumerate().map(|(i, a)| a.trunc() - (n - i) as i64).min().unwrap();
        let mut acc = Vec::new();
        for (i, a) in coeffs.iter().enumerate() {
            let j = n - i;
            let ff = Poly::falling_factorial(j);
            for (k, c) in a.terms() {
                acc.push((k - j as i64, ff.scale(c)));
            }
        }
        Ok(OperatorSeries::from_terms(trunc, acc))
    }

    /// Coefficients `aᵢ(t)` with `Σ aᵢ ∂^(n−i) = self`, leading first.
    /// The coefficient of `∂ʲ` is exact through `t^(trunc+j)`.
    pub fn to_d_form(&self) -> Vec<LaurentSeries> {
        let Some(n) = self.order() else {
            return vec![LaurentSeries::zero(self.trunc)];
        };
        let mut cols: Vec<Vec<(i64, Scalar)>> = vec![Vec::new(); n + 1];
        for (k, p) in self.terms() {
            for (j, b) in p.falling_coordinates().into_iter().enumerate() {
                if !b.is_zero() {
                    cols[j].push((k + j as i64, b));
                }
            }
        }
        (0..=n)
            .rev()
            .map(|j| LaurentSeries::from_terms(self.trunc + j as i64, core::mem::take(&mut cols[j])))
            .collect()
    }

    /// `L(t^λ·f)` divided by `t^λ`.
    pub fn apply(&self, exponent: &Scalar, f: &LaurentSeries) -> LaurentSeries {
        let trunc = (self.trunc + f.kmin()).min(f.trunc() + self.kmin);
        let mut acc: Vec<(i64, Scalar)> = Vec::new();
        for (m, c) in f.terms() {
            let at = exponent + &Scalar::from_int(m);
            for (k, p) in self.terms() {
                if k + m > trunc {
                    break;
                }
                let v = p.eval(&at);
                if !v.is_zero() {
                    acc.push((k + m, &v * c));
                }
            }
        }
        LaurentSeries::from_terms(trunc, acc)
    }
}

impl Add<&OperatorSeries> for &OperatorSeries {
    type Output = OperatorSeries;
    fn add(self, rhs: &OperatorSeries) -> OperatorSeries {
        combine(self, rhs, false)
    }
}

impl Sub<&OperatorSeries> for &OperatorSeries {
    type Output = OperatorSeries;
    fn sub(self, rhs: &OperatorSeries) -> OperatorSeries {
        combine(self, rhs, true)
    }
}

fn combine(a: &OperatorSeries, b: &OperatorSeries, negate: bool) -> OperatorSeries {
    let trunc = a.trunc.min(b.trunc);
    let kmin = a.kmin.min(b.kmin);
    if kmin > trunc {
        return OperatorSeries::zero(trunc);
    }
    let terms = (kmin..=trunc)
        .map(|k| match (a.term_ref(k), b.term_ref(k)) {
            (Some(x), Some(y)) if negate => x - y,
            (Some(x), Some(y)) => x + y,
            (Some(x), None) => x.clone(),
            (None, Some(y)) if negate => -y,
            (None, Some(y)) => y.clone(),
            (None, None) => Poly::zero(),
        })
        .collect();
    OperatorSeries::new(kmin, trunc, terms)
}

impl Mul<&OperatorSeries> for &OperatorSeries {
    type Output = OperatorSeries;
    fn mul(self, rhs: &OperatorSeries) -> OperatorSeries {
        self.mul_to(rhs, i64::MAX)
    }
}

impl Neg for &OperatorSeries {
    type Output = OperatorSeries;
    fn neg(self) -> OperatorSeries {
        OperatorSeries { kmin: self.kmin, trunc: self.trunc, terms: self.terms.iter().map(|p| -p).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<OperatorSeries> for OperatorSeries {
            type Output = OperatorSeries;
            fn $m(self, rhs: OperatorSeries) -> OperatorSeries { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a OperatorSeries> for OperatorSeries {
            type Output = OperatorSeries;
            fn $m(self, rhs: &'a OperatorSeries) -> OperatorSeries { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

fn write_rational(f: &mut fmt::Formatter<'_>, q: &num_rational::BigRational) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// One signed monomial `c·tᵏ·εᵈ` in DSL syntax.
pub(crate) fn write_monomial(f: &mut fmt::Formatter<'_>, c: &Scalar, k: i64, d: usize, first: bool) -> fmt::Result {
    use num_traits::{One, Signed, Zero};
    let real = c.is_real();
    let negative = real && c.re().is_negative();
    match (first, negative) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    let bare = k == 0 && d == 0;
    let mut wrote = false;
    if real {
        let mag = c.re().abs();
        if !mag.is_one() || bare {
            write_rational(f, &mag)?;
            wrote = true;
        }
    } else {
        f.write_str("(")?;
        let (re, im) = (c.re(), c.im());
        if !re.is_zero() {
            write_rational(f, re)?;
            f.write_str(if im.is_negative() { " - " } else { " + " })?;
        } else if im.is_negative() {
            f.write_str("-")?;
        }
        let a = im.abs();
        if !a.is_one() {
            write_rational(f, &a)?;
            f.write_str("*")?;
        }
        f.write_str("i)")?;
        wrote = true;
    }
    if k != 0 {
        if wrote {
            f.write_str("*")?;
        }
        if k == 1 {
            f.write_str("t")?;
        } else {
            write!(f, "t^{k}")?;
        }
        wrote = true;
    }
    if d != 0 {
        if wrote {
            f.write_str("*")?;
        }
        if d == 1 {
            f.write_str("E")?;
        } else {
            write!(f, "E^{d}")?;
        }
    }
    Ok(())
}

pub(crate) fn write_terms<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a Poly)>,
) -> fmt::Result {
    let mut first = true;
    for (k, p) in terms {
        for (d, c) in p.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_monomial(f, c, k, d, first)?;
            first = false;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// DSL text such as `E^2 - E + t*E - t`; truncation is not printed.
impl fmt::Display for OperatorSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms())
    }
}
