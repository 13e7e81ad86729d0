//! Exact scalars from ℚ or ℚ(i).
//!
//! A [`Scalar`] always carries a real and an imaginary rational part; the
//! active [`Field`] decides which values are admissible at the boundary
//! (parsers, root lists). ℚ is closed under every operation in this crate,
//! so computations that start in ℚ never leave it.

use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use core::str::FromStr;

use alloc::string::String;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficient field of a computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    /// The rationals.
    Q,
    /// The Gaussian rationals ℚ(i).
    Qi,
}

impl Field {
    pub fn contains(self, s: &Scalar) -> bool {
        match self {
            Field::Q => s.is_real(),
            Field::Qi => true,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Field::Q => "Q",
            Field::Qi => "Qi",
        }
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Q" | "q" => Ok(Field::Q),
            "Qi" | "qi" | "QI" => Ok(Field::Qi),
            other => Err(alloc::format!("unknown field `{other}` (expected Q or Qi)")),
        }
    }
}

/// An exact element of ℚ(i), stored as `re + im·i` in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::zero() }
    }

    pub fn one() -> Self {
        Scalar::from_int(1)
    }

    pub fn i() -> Self {
        Scalar { re: BigRational::zero(), im: BigRational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar { re: BigRational::from_integer(BigInt::from(n)), im: BigRational::zero() }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar { re: BigRational::from_integer(n), im: BigRational::zero() }
    }

    /// `num/den`; panics on a zero denominator.
    pub fn ratio(num: i64, den: i64) -> Self {
        Scalar {
            re: BigRational::new(BigInt::from(num), BigInt::from(den)),
            im: BigRational::zero(),
        }
    }

    pub fn from_rational(re: BigRational) -> Self {
        Scalar { re, im: BigRational::zero() }
    }

    pub fn complex(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        if self.im.is_zero() && self.re.is_integer() {
            Some(self.re.to_integer())
        } else {
            None
        }
    }

    /// The value as a machine integer, if it is one and fits.
    pub fn to_i64(&self) -> Option<i64> {
        use num_traits::ToPrimitive;
        self.to_integer().and_then(|n| n.to_i64())
    }

    pub fn conj(&self) -> Self {
        Scalar { re: self.re.clone(), im: -self.im.clone() }
    }

    /// `re² + im²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Scalar { re: self.re.recip(), im: BigRational::zero() });
        }
        let n = self.norm_sqr();
        Some(Scalar { re: &self.re / &n, im: -(&self.im / &n) })
    }

    /// Lexicographic order on (real part, imaginary part). Not a field order;
    /// used only for deterministic presentation.
    pub fn lex_cmp(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Square root inside ℚ(i), when it exists.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.im.is_zero() {
            if !self.re.is_negative() {
                return rational_sqrt(&self.re).map(Scalar::from_rational);
            }
            return rational_sqrt(&-self.re.clone()).map(|r| Scalar::complex(BigRational::zero(), r));
        }
        // (x + iy)² = a + ib with x² = (a + |z|)/2, y² = (|z| − a)/2.
        let modulus = rational_sqrt(&self.norm_sqr())?;
        let two = BigRational::from_integer(BigInt::from(2));
        let x = rational_sqrt(&((&self.re + &modulus) / &two))?;
        let mut y = rational_sqrt(&((&modulus - &self.re) / &two))?;
        if self.im.is_negative() {
            y = -y;
        }
        Some(Scalar::complex(x, y))
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let n = int_sqrt(q.numer())?;
    let d = int_sqrt(q.denom())?;
    Some(BigRational::new(n, d))
}

fn int_sqrt(n: &BigInt) -> Option<BigInt> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::from_rational(r)
    }
}

impl<'a> Add<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &'a Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar { re: &self.re + &rhs.re, im: BigRational::zero() };
        }
        Scalar { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a> Sub<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &'a Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar { re: &self.re - &rhs.re, im: BigRational::zero() };
        }
        Scalar { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a> Mul<&'a Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &'a Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            if self.re.is_zero() || rhs.re.is_zero() {
                return Scalar::zero();
            }
            return Scalar { re: &self.re * &rhs.re, im: BigRational::zero() };
        }
        Scalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Div<&'a Scalar> for &Scalar {
    type Output = Scalar;
    /// Panics on division by zero, like the rational types underneath.
    fn div(self, rhs: &'a Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar { (&self).$m(rhs) }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { self.$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        if !rhs.im.is_zero() {
            self.im += &rhs.im;
        }
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        if !rhs.im.is_zero() {
            self.im -= &rhs.im;
        }
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.is_integer() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Plain form: `a/b`, or `a/b+c/d i` when the imaginary part is nonzero.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rational(&self.re, f)?;
        if !self.im.is_zero() {
            if self.im.is_negative() {
                f.write_str("-")?;
            } else {
                f.write_str("+")?;
            }
            fmt_rational(&self.im.abs(), f)?;
            f.write_str(" i")?;
        }
        Ok(())
    }
}

/// Error from parsing the plain scalar form.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("malformed scalar `{0}`")]
pub struct ParseScalarError(pub String);

fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Inverse of the `Display` form: accepts `a`, `a/b`, `a/b+c/d i`, `a/b-c/d i`.
impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(String::from(s));
        let t = s.trim();
        if let Some(body) = t.strip_suffix('i') {
            let body = body.trim_end();
            // The separator is the last sign that is not at position 0.
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(_, c)| c == '+' || c == '-')
                .map(|(idx, _)| idx)
                .last()
                .ok_or_else(err)?;
            let re = parse_rational(&body[..split]).ok_or_else(err)?;
            let mut im = parse_rational(&body[split + 1..]).ok_or_else(err)?;
            if body.as_bytes()[split] == b'-' {
                im = -im;
            }
            return Ok(Scalar::complex(re, im));
        }
        parse_rational(t).map(Scalar::from_rational).ok_or_else(err)
    }
}
