//! Dense univariate polynomials in the Euler symbol `ε`.
//!
//! These are the commutative coefficients `pₖ(ε)` of the graded operator
//! expansion. Besides the ring operations the module carries the shift
//! `w(ε) ↦ w(ε + j)`, Euclidean division and gcd, and a few root finders
//! that stay inside ℚ or ℚ(i).

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::scalar::{Field, Scalar};

/// Polynomial with ascending coefficients; trailing zeros are always stripped,
/// so the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Convenience constructor from integer coefficients (ascending).
    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Scalar::from_int(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        Poly::new(vec![c])
    }

    /// The Euler symbol `ε` itself.
    pub fn epsilon() -> Self {
        Poly::monomial(Scalar::one(), 1)
    }

    pub fn monomial(c: Scalar, degree: usize) -> Self {
        let mut coeffs = vec![Scalar::zero(); degree + 1];
        coeffs[degree] = c;
        Poly::new(coeffs)
    }

    /// `ε − λ`.
    pub fn linear(root: &Scalar) -> Self {
        Poly::new(vec![-root, Scalar::one()])
    }

    /// Monic polynomial `Π (ε − λᵢ)`.
    pub fn from_roots(roots: &[Scalar]) -> Self {
        roots.iter().fold(Poly::one(), |acc, r| &acc * &Poly::linear(r))
    }

    /// `ε(ε − 1)⋯(ε − k + 1)`, i.e. `tᵏ∂ᵏ` in Euler form.
    pub fn falling_factorial(k: usize) -> Self {
        (0..k as i64).fold(Poly::one(), |acc, i| &acc * &Poly::linear(&Scalar::from_int(i)))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Scalar> {
        self.coeffs
    }

    pub fn coeff(&self, d: usize) -> Scalar {
        self.coeffs.get(d).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_real(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_real)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| &(&acc * x) + c)
    }

    /// `w(ε + j)`.
    pub fn shift(&self, j: i64) -> Self {
        if j == 0 {
            return self.clone();
        }
        self.shift_by(&Scalar::from_int(j))
    }

    /// `w(ε + a)` for an arbitrary scalar `a` (Horner in the shifted variable).
    pub fn shift_by(&self, a: &Scalar) -> Self {
        if a.is_zero() || self.is_constant() {
            return self.clone();
        }
        let mut out: Vec<Scalar> = Vec::with_capacity(self.coeffs.len());
        for c in self.coeffs.iter().rev() {
            // out ← out·(ε + a) + c
            let mut next = vec![Scalar::zero(); out.len() + 1];
            for (d, o) in out.iter().enumerate() {
                next[d + 1] += o;
                next[d] += &(o * a);
            }
            next[0] += c;
            out = next;
        }
        Poly::new(out)
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Poly::zero(),
            Some(lc) => self.scale(&lc.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Poly) -> Option<(Poly, Poly)> {
        let dd = divisor.degree()?;
        let lc_inv = divisor.leading()?.inv()?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (k, dc) in divisor.coeffs.iter().enumerate() {
                let sub = &c * dc;
                rem[i + k] -= &sub;
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        Some((Poly::new(quot), Poly::new(rem)))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn div_exact(&self, divisor: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    pub fn rem(&self, divisor: &Poly) -> Option<Poly> {
        self.div_rem(divisor).map(|(_, r)| r)
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Extended gcd: returns `(g, s, t)` with `s·a + t·b = g`, `g` monic.
    pub fn ext_gcd(a: &Poly, b: &Poly) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1).expect("nonzero divisor");
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            t0 = t1;
            t1 = t2;
        }
        match r0.leading().cloned() {
            None => (Poly::zero(), s0, t0),
            Some(lc) => {
                let inv = lc.inv().expect("nonzero");
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
        }
    }

    /// Inverse of `self` modulo `m`, reduced below `deg m`.
    pub fn inv_mod(&self, m: &Poly) -> Option<Poly> {
        let (g, s, _) = Poly::ext_gcd(self, m);
        if !g.is_one() {
            return None;
        }
        s.rem(m)
    }

    /// Coordinates in the falling-factorial basis `ε(ε−1)⋯(ε−k+1)`,
    /// obtained from forward differences at `0, 1, …, deg`.
    pub fn falling_coordinates(&self) -> Vec<Scalar> {
        let Some(d) = self.degree() else {
            return Vec::new();
        };
        let mut diffs: Vec<Scalar> = (0..=d as i64).map(|x| self.eval(&Scalar::from_int(x))).collect();
        let mut out = Vec::with_capacity(d + 1);
        let mut fact = Scalar::one();
        for k in 0..=d {
            if k > 0 {
                fact = &fact * &Scalar::from_int(k as i64);
            }
            out.push(&diffs[0] / &fact);
            for i in 0..diffs.len() - 1 {
                diffs[i] = &diffs[i + 1] - &diffs[i];
            }
            diffs.pop();
        }
        out
    }

    /// Integer coefficients proportional to a polynomial with rational
    /// coefficients (imaginary parts ignored).
    fn real_integer_coeffs(coeffs: impl Iterator<Item = BigRational>) -> Vec<BigInt> {
        let coeffs: Vec<BigRational> = coeffs.collect();
        let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        coeffs.iter().map(|c| (c * BigRational::from_integer(l.clone())).to_integer()).collect()
    }

    /// Positive integer roots, ascending and without repetition.
    pub fn positive_integer_roots(&self) -> Vec<i64> {
        if self.is_constant() {
            return Vec::new();
        }
        let re: Vec<BigRational> = self.coeffs.iter().map(|c| c.re().clone()).collect();
        let use_re = re.iter().any(|c| !c.is_zero());
        let part: Vec<BigRational> = if use_re {
            re
        } else {
            self.coeffs.iter().map(|c| c.im().clone()).collect()
        };
        let mut ints = Poly::real_integer_coeffs(part.into_iter());
        while ints.last().is_some_and(Zero::is_zero) {
            ints.pop();
        }
        let lead_zero = ints.iter().take_while(|c| c.is_zero()).count();
        ints.drain(..lead_zero);
        if ints.len() <= 1 {
            return Vec::new();
        }
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        // Cauchy bound on the modulus of the roots.
        let max_ratio = ints[..ints.len() - 1]
            .iter()
            .map(|c| BigRational::new(c.abs(), an.clone()))
            .max()
            .unwrap_or_else(BigRational::zero);
        let bound = (max_ratio.ceil().to_integer() + BigInt::one()).min(a0.clone());
        let bound = bound.to_i64().unwrap_or(i64::MAX);
        let mut roots = Vec::new();
        let mut j: i64 = 1;
        while j <= bound {
            let jb = BigInt::from(j);
            if (&a0 % &jb).is_zero() && self.eval(&Scalar::from_int(j)).is_zero() {
                roots.push(j);
            }
            j += 1;
        }
        roots
    }

    /// Roots inside `field`, with multiplicity, if the polynomial splits there.
    ///
    /// Rational roots are found by the rational-root test; a leftover factor
    /// of degree at most two is solved by the quadratic formula. Anything else
    /// is reported as not split (the caller may supply roots explicitly).
    pub fn roots_in(&self, field: Field) -> Option<Vec<Scalar>> {
        let mut q = self.clone();
        q.degree()?;
        let mut roots = Vec::new();
        while q.degree()? > 0 && q.coeffs[0].is_zero() {
            roots.push(Scalar::zero());
            q = Poly::new(q.coeffs[1..].to_vec());
        }
        let candidates = q.rational_root_candidates();
        for c in candidates {
            while q.degree()? > 0 && q.eval(&c).is_zero() {
                q = q.div_exact(&Poly::linear(&c))?;
                roots.push(c.clone());
            }
        }
        match q.degree()? {
            0 => {}
            1 => roots.push(-(&q.coeffs[0] / &q.coeffs[1])),
            2 => {
                let (c, b, a) = (&q.coeffs[0], &q.coeffs[1], &q.coeffs[2]);
                let disc = &(b * b) - &(&Scalar::from_int(4) * &(a * c));
                let s = disc.sqrt()?;
                let two_a = &Scalar::from_int(2) * a;
                roots.push(&(&(-b) - &s) / &two_a);
                roots.push(&(&(-b) + &s) / &two_a);
            }
            _ => return None,
        }
        if roots.iter().all(|r| field.contains(r)) {
            Some(roots)
        } else {
            None
        }
    }

    /// Candidate rational roots `±a/b` with `a | a₀`, `b | aₙ`, where the
    /// integer polynomial is taken from the real part (or the gcd of real and
    /// imaginary parts). Gives up on coefficients too large to factor by trial
    /// division.
    fn rational_root_candidates(&self) -> Vec<Scalar> {
        let base = if self.is_real() {
            self.clone()
        } else {
            let re = Poly::new(self.coeffs.iter().map(|c| Scalar::from_rational(c.re().clone())).collect());
            let im = Poly::new(self.coeffs.iter().map(|c| Scalar::from_rational(c.im().clone())).collect());
            re.gcd(&im)
        };
        if base.is_constant() {
            return Vec::new();
        }
        let ints = Poly::real_integer_coeffs(base.coeffs.iter().map(|c| c.re().clone()));
        let (Some(a0), Some(an)) = (ints.first(), ints.last()) else {
            return Vec::new();
        };
        if a0.is_zero() {
            return Vec::new();
        }
        let (Some(num), Some(den)) = (divisors(a0), divisors(an)) else {
            return Vec::new();
        };
        let mut out: Vec<Scalar> = Vec::new();
        for p in &num {
            for q in &den {
                for sign in [1i64, -1] {
                    let c = Scalar::from_rational(BigRational::new(p * BigInt::from(sign), q.clone()));
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
        }
        out.sort_by(Scalar::lex_cmp);
        out
    }
}

const TRIAL_DIVISION_LIMIT: i64 = 100_000_000;

/// Positive divisors of `n ≠ 0`, when `|n|` is small enough to factor.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    let n = n.abs().to_i128()?;
    if n == 0 || n > (TRIAL_DIVISION_LIMIT as i128) * (TRIAL_DIVISION_LIMIT as i128) {
        return None;
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d: i128 = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(BigInt::from(d));
            if d * d != n {
                large.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Some(small)
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => out.push(a + b),
                (Some(a), None) => out.push(a.clone()),
                (None, Some(b)) => out.push(b.clone()),
                (None, None) => unreachable!(),
            }
        }
        Poly::new(out)
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => out.push(a - b),
                (Some(a), None) => out.push(a.clone()),
                (None, Some(b)) => out.push(-b),
                (None, None) => unreachable!(),
            }
        }
        Poly::new(out)
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Poly> for Poly {
            type Output = Poly;
            fn $m(self, rhs: &'a Poly) -> Poly { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

/// Operator-DSL text, e.g. `E^2 - 3/2*E + 1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::operator::write_terms(f, core::iter::once((0i64, self)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    #[test]
    fn shift_examples() {
        // (ε − 1, 2) → ε + 1
        assert_eq!(p(&[-1, 1]).shift(2), p(&[1, 1]));
        // (ε², 1) → ε² + 2ε + 1
        assert_eq!(p(&[0, 0, 1]).shift(1), p(&[1, 2, 1]));
        assert_eq!(p(&[3]).shift(5), p(&[3]));
        assert_eq!(p(&[0, 0, 1]).shift(1).shift(-1), p(&[0, 0, 1]));
    }

    #[test]
    fn division_and_gcd() {
        let a = p(&[0, -1, 1]); // ε² − ε
        let b = p(&[0, 1, 1]); // ε² + ε
        assert_eq!(a.gcd(&b), p(&[0, 1]));
        let (q, r) = a.div_rem(&p(&[-1, 1])).unwrap();
        assert_eq!(q, p(&[0, 1]));
        assert!(r.is_zero());
        assert!(a.div_rem(&Poly::zero()).is_none());
        let (g, s, t) = Poly::ext_gcd(&p(&[0, 1]), &p(&[-1, 1]));
        assert!(g.is_one());
        assert_eq!(&(&s * &p(&[0, 1])) + &(&t * &p(&[-1, 1])), Poly::one());
    }

    #[test]
    fn falling_factorial_coordinates() {
        // ε² = ε(ε − 1) + ε
        let c = p(&[0, 0, 1]).falling_coordinates();
        assert_eq!(c, alloc::vec![Scalar::zero(), Scalar::one(), Scalar::one()]);
        assert_eq!(Poly::falling_factorial(2), p(&[0, -1, 1]));
    }

    #[test]
    fn integer_roots() {
        // j(j − 2)(j + 3)(j − 5)
        let f = &(&p(&[0, 1]) * &p(&[-2, 1])) * &(&p(&[3, 1]) * &p(&[-5, 1]));
        assert_eq!(f.positive_integer_roots(), alloc::vec![2, 5]);
        assert!(p(&[1, 0, 1]).positive_integer_roots().is_empty());
    }

    #[test]
    fn split_over_fields() {
        let f = Poly::from_roots(&[Scalar::ratio(1, 2), Scalar::from_int(3), Scalar::from_int(3)]);
        let mut r = f.roots_in(Field::Q).unwrap();
        r.sort_by(Scalar::lex_cmp);
        assert_eq!(r, alloc::vec![Scalar::ratio(1, 2), Scalar::from_int(3), Scalar::from_int(3)]);
        let g = p(&[1, 0, 1]);
        assert!(g.roots_in(Field::Q).is_none());
        let r = g.roots_in(Field::Qi).unwrap();
        assert_eq!(Poly::from_roots(&r), g);
        assert!(p(&[-2, 0, 1]).roots_in(Field::Qi).is_none());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[0, -1, 1]).to_string(), "E^2 - E");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(Poly::new(alloc::vec![Scalar::ratio(-3, 2)]).to_string(), "-3/2");
    }
}
