//! Seeded generators and a dense exact solver shared by the integration tests.
#![allow(dead_code)]

use fuchsforge_core::fuchs::resonance_orders;
use fuchsforge_core::{OperatorSeries, Poly, Scalar};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::ratio(rng.gen_range(-5..=5), rng.gen_range(1..=3))
}

pub fn nonzero_rational(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = small_rational(rng);
        if !s.is_zero() {
            return s;
        }
    }
}

/// Degree ≤ `max_deg`, possibly zero.
pub fn poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
    let len = rng.gen_range(0..=max_deg + 1);
    Poly::new((0..len).map(|_| small_rational(rng)).collect())
}

pub fn poly_of_degree(rng: &mut ChaCha8Rng, deg: usize) -> Poly {
    let mut c: Vec<Scalar> = (0..deg).map(|_| small_rational(rng)).collect();
    c.push(nonzero_rational(rng));
    Poly::new(c)
}

/// Sparse operator with a nonzero term of order `order` at `kmin`.
pub fn operator(rng: &mut ChaCha8Rng, kmin: i64, trunc: i64, order: usize) -> OperatorSeries {
    let mut terms = vec![(kmin, poly_of_degree(rng, order))];
    for k in kmin + 1..=trunc {
        if rng.gen_bool(0.5) {
            terms.push((k, poly(rng, order)));
        }
    }
    OperatorSeries::from_terms(trunc, terms)
}

pub fn any_operator(rng: &mut ChaCha8Rng, trunc: i64) -> OperatorSeries {
    let kmin = rng.gen_range(-1..=1);
    let order = rng.gen_range(0..=3);
    operator(rng, kmin, trunc, order)
}

/// `p₀ + Σ_{k=1..tail} t^k p_k` with `deg p_k ≤ deg p₀`.
pub fn fuchsian_with(rng: &mut ChaCha8Rng, p0: Poly, trunc: i64, tail: usize) -> OperatorSeries {
    let n = p0.degree().unwrap();
    let mut terms = vec![(0, p0)];
    for k in 1..=tail as i64 {
        terms.push((k, poly(rng, n)));
    }
    OperatorSeries::from_terms(trunc, terms)
}

pub fn fuchsian(rng: &mut ChaCha8Rng, n: usize, trunc: i64) -> OperatorSeries {
    let p0 = poly_of_degree(rng, n);
    let tail = rng.gen_range(0..=3);
    fuchsian_with(rng, p0, trunc, tail)
}

pub fn split_fuchsian(rng: &mut ChaCha8Rng, roots: &[Scalar], trunc: i64) -> OperatorSeries {
    let lc = nonzero_rational(rng);
    let p0 = Poly::from_roots(roots).scale(&lc);
    let tail = rng.gen_range(1..=3);
    fuchsian_with(rng, p0, trunc, tail)
}

pub fn integer_roots(rng: &mut ChaCha8Rng, n: usize, hi: i64) -> Vec<Scalar> {
    (0..n).map(|_| Scalar::from_int(rng.gen_range(0..=hi))).collect()
}

pub fn has_integer_gap(roots: &[Scalar]) -> bool {
    roots.iter().any(|a| roots.iter().any(|b| (a - b).to_i64().is_some_and(|d| d > 0)))
}

/// Nonresonant Fuchsian operator; every other one has a split Euler part.
pub fn nonresonant_fuchsian(rng: &mut ChaCha8Rng, i: usize, trunc: i64) -> (OperatorSeries, Option<Vec<Scalar>>) {
    let n = rng.gen_range(1..=3);
    loop {
        if i % 2 == 0 {
            let roots: Vec<Scalar> =
                (0..n).map(|_| Scalar::ratio(rng.gen_range(-4..=4), [2, 3, 5][rng.gen_range(0..3)])).collect();
            if has_integer_gap(&roots) {
                continue;
            }
            return (split_fuchsian(rng, &roots, trunc), Some(roots));
        }
        let l = fuchsian(rng, n, trunc);
        if resonance_orders(&l.eulerization().unwrap()).unwrap().orders.is_empty() {
            return (l, None);
        }
    }
}

/// Resonant Fuchsian operator with integer roots in `[0, 4]`.
pub fn resonant_split_fuchsian(rng: &mut ChaCha8Rng, trunc: i64) -> (OperatorSeries, Vec<Scalar>) {
    loop {
        let n = rng.gen_range(2..=3);
        let roots = integer_roots(rng, n, 4);
        if has_integer_gap(&roots) {
            return (split_fuchsian(rng, &roots, trunc), roots);
        }
    }
}

/// Reduced row echelon form of `[A | b]`; returns the unique solution, or
/// `None` if the system is inconsistent or underdetermined.
pub fn dense_unique_solve(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<Scalar>> = a.iter().zip(b).map(|(row, x)| row.iter().cloned().chain([x.clone()]).collect()).collect();
    let mut row = 0;
    for col in 0..cols {
        let Some(piv) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            return None;
        };
        m.swap(row, piv);
        let inv = m[row][col].inv().unwrap();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[row].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot_row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
        row += 1;
    }
    if m[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    Some(m[..cols].iter().map(|r| r[cols].clone()).collect())
}

/// Columns given as polynomials; rows are coefficients of `ε^0, ε^1, …`.
pub fn solve_poly_columns(cols: &[Poly], rhs: &Poly) -> Option<Vec<Scalar>> {
    let rows = cols.iter().chain([rhs]).filter_map(Poly::degree).max().map_or(1, |d| d + 1);
    let a: Vec<Vec<Scalar>> = (0..rows).map(|d| cols.iter().map(|c| c.coeff(d)).collect()).collect();
    let b: Vec<Scalar> = (0..rows).map(|d| rhs.coeff(d)).collect();
    dense_unique_solve(&a, &b)
}
