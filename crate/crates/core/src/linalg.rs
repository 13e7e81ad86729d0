//! Dense Gaussian elimination over exact fields.
//!
//! Works for [`Scalar`] and for truncated [`LaurentSeries`]; for the latter
//! the pivot with the smallest valuation is chosen to limit precision loss.

use alloc::vec::Vec;

use crate::scalar::Scalar;
use crate::series::LaurentSeries;

pub trait FieldElem: Clone {
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn neg(&self) -> Self;
    /// A zero of the same "shape" (precision) as `self`.
    fn zero_like(&self) -> Self;
    /// Lower is a better pivot.
    fn pivot_score(&self) -> i64;
}

impl FieldElem for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Option<Self> {
        Scalar::inv(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        Scalar::zero()
    }
    fn pivot_score(&self) -> i64 {
        0
    }
}

impl FieldElem for LaurentSeries {
    fn is_zero(&self) -> bool {
        LaurentSeries::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Option<Self> {
        LaurentSeries::inv(self)
    }
    fn neg(&self) -> Self {
        -self
    }
    fn zero_like(&self) -> Self {
        LaurentSeries::zero(self.trunc())
    }
    fn pivot_score(&self) -> i64 {
        self.valuation().unwrap_or(i64::MAX)
    }
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn row_reduce<F: FieldElem>(m: &mut [Vec<F>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let best = (r..rows)
            .filter(|&i| !m[i][c].is_zero())
            .min_by_key(|&i| m[i][c].pivot_score());
        let Some(p) = best else { continue };
        m.swap(r, p);
        let inv = m[r][c].inv().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x = x.mul(&inv);
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = m[i][c].clone();
            for k in 0..cols {
                let sub = f.mul(&m[r][k]);
                m[i][k] = m[i][k].sub(&sub);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: FieldElem>(m: &[Vec<F>]) -> usize {
    let mut m = m.to_vec();
    row_reduce(&mut m).len()
}

/// A solution of `A·x = b` (free variables set to zero), or `None` if the
/// system is inconsistent. `a` is given row by row.
pub fn solve<F: FieldElem>(a: &[Vec<F>], b: &[F]) -> Option<Vec<F>> {
    let n = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<F>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut row = row.clone();
            row.push(rhs.clone());
            row
        })
        .collect();
    let pivots = row_reduce(&mut m);
    if pivots.last() == Some(&n) {
        return None;
    }
    let zero = b.first().map(F::zero_like)?;
    let mut x = alloc::vec![zero; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = m[r][n].clone();
    }
    Some(x)
}
