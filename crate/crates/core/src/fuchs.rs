//! Fuchsianity, resonances and the combinatorics of the root list.
//!
//! Resonance orders are found without roots: the positive integer roots of
//! `D(j) = Π_{a,b} (j − (λₐ − λ_b))` are the candidates, and for each of them
//! `w_j = gcd(p₀, p₀(ε + j))` is computed exactly. `D` is obtained from power
//! sums of `p₀` through Newton's identities, so it is the resultant
//! `Res_ε(p₀(ε), p₀(ε + j))` up to a constant factor.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::operator::OperatorSeries;
use crate::poly::Poly;
use crate::scalar::Scalar;

pub fn is_fuchsian(l: &OperatorSeries) -> bool {
    l.is_fuchsian()
}

/// `Some(k)` when `tᵏ·L` is Fuchsian.
pub fn pre_fuchsian_shift(l: &OperatorSeries) -> Option<i64> {
    let n = l.order()?;
    (l.term(l.kmin()).degree() == Some(n)).then(|| -l.kmin())
}

/// `gcd(𝓔(L), 𝓔(H))`, monic.
pub fn gcd0(l: &OperatorSeries, h: &OperatorSeries) -> Result<Poly> {
    if !l.is_fuchsian() || !h.is_fuchsian() {
        return Err(Error::NotFuchsian);
    }
    Ok(l.eulerization()?.gcd(&h.eulerization()?))
}

/// Resonance data of an Euler part, optionally refined by a root list.
///
/// Root indices (in [`index_sets`](Self::index_sets) and
/// [`jumps`](Self::jumps)) are 0-based positions in [`roots`](Self::roots).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResonanceStructure {
    pub p0: Poly,
    /// Resonance orders in increasing order.
    pub orders: Vec<i64>,
    pub w: BTreeMap<i64, Poly>,
    pub nu: BTreeMap<i64, usize>,
    /// Largest resonance order, 0 when nonresonant.
    pub bound: i64,
    pub roots: Option<Vec<Scalar>>,
    /// `Λ_j` as a list with multiplicities.
    pub lambda: BTreeMap<i64, Vec<Scalar>>,
    pub index_sets: BTreeMap<i64, Vec<usize>>,
    /// `J(λᵢ)` for each root position.
    pub jumps: Vec<Vec<i64>>,
}

impl ResonanceStructure {
    /// `w_j`, which is 1 off the resonance orders.
    pub fn w(&self, j: i64) -> Poly {
        self.w.get(&j).cloned().unwrap_or_else(Poly::one)
    }

    pub fn nu(&self, j: i64) -> usize {
        self.nu.get(&j).copied().unwrap_or(0)
    }

    pub fn is_resonant(&self) -> bool {
        !self.orders.is_empty()
    }
}

/// Power sums `Σ λᵃ` for `a = 0..=count` of the roots of `p` (Newton).
fn power_sums(p: &Poly, count: usize) -> Vec<Scalar> {
    let p = p.monic();
    let n = p.degree().unwrap_or(0);
    // e_k with p = Σ (−1)^k e_k ε^(n−k)
    let e: Vec<Scalar> = (0..=n)
        .map(|k| {
            let c = p.coeff(n - k);
            if k % 2 == 0 {
                c
            } else {
                -&c
            }
        })
        .collect();
    let mut s = vec![Scalar::from_int(n as i64)];
    for m in 1..=count {
        let mut acc = Scalar::zero();
        for i in 1..m.min(n + 1) {
            let term = &e[i] * &s[m - i];
            if i % 2 == 1 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        if m <= n {
            let term = &Scalar::from_int(m as i64) * &e[m];
            if m % 2 == 1 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        s.push(acc);
    }
    s
}

/// Monic polynomial in `j` whose roots are all differences `λₐ − λ_b`.
pub fn difference_polynomial(p0: &Poly) -> Poly {
    let n = p0.degree().unwrap_or(0);
    let big = n * n;
    let ps = power_sums(p0, big);
    // power sums of the differences: Σ_{a,b}(λa − λb)^k = Σ_i C(k,i)(−1)^(k−i) P_i P_(k−i)
    let mut diff = Vec::with_capacity(big + 1);
    for k in 0..=big {
        let mut acc = Scalar::zero();
        let mut binom = Scalar::one();
        for i in 0..=k {
            if i > 0 {
                binom = &(&binom * &Scalar::from_int((k - i + 1) as i64)) / &Scalar::from_int(i as i64);
            }
            let term = &(&binom * &ps[i]) * &ps[k - i];
            if (k - i) % 2 == 0 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        diff.push(acc);
    }
    // Newton back to elementary symmetric functions.
    let mut e = vec![Scalar::one()];
    for m in 1..=big {
        let mut acc = Scalar::zero();
        for i in 1..=m {
            let term = &e[m - i] * &diff[i];
            if i % 2 == 1 {
                acc += &term;
            } else {
                acc -= &term;
            }
        }
        e.push(&acc / &Scalar::from_int(m as i64));
    }
    let coeffs = (0..=big)
        .map(|d| {
            let k = big - d;
            if k % 2 == 0 {
                e[k].clone()
            } else {
                -&e[k]
            }
        })
        .collect();
    Poly::new(coeffs)
}

/// Root-free part of the resonance analysis.
pub fn resonance_orders(p0: &Poly) -> Result<ResonanceStructure> {
    if p0.degree().unwrap_or(0) < 1 {
        return Err(Error::Precondition("Euler part must have degree at least 1"));
    }
    let d = difference_polynomial(p0);
    let mut orders = Vec::new();
    let mut w = BTreeMap::new();
    let mut nu = BTreeMap::new();
    for j in d.positive_integer_roots() {
        let g = p0.gcd(&p0.shift(j));
        if let Some(deg) = g.degree().filter(|&k| k >= 1) {
            orders.push(j);
            nu.insert(j, deg);
            w.insert(j, g);
        }
    }
    let bound = orders.last().copied().unwrap_or(0);
    Ok(ResonanceStructure {
        p0: p0.clone(),
        orders,
        w,
        nu,
        bound,
        roots: None,
        lambda: BTreeMap::new(),
        index_sets: BTreeMap::new(),
        jumps: Vec::new(),
    })
}

fn integer_difference(a: &Scalar, b: &Scalar) -> Option<i64> {
    (a - b).to_i64()
}

/// Groups roots into classes with integer differences, sorts each class
/// ascending and orders the classes by their least element, compared by
/// real part and then imaginary part.
pub fn natural_order(roots: &[Scalar]) -> Vec<Scalar> {
    let mut classes: Vec<Vec<Scalar>> = Vec::new();
    for r in roots {
        match classes.iter_mut().find(|c| integer_difference(r, &c[0]).is_some()) {
            Some(c) => c.push(r.clone()),
            None => classes.push(vec![r.clone()]),
        }
    }
    for c in classes.iter_mut() {
        c.sort_by(|a, b| {
            let d = integer_difference(a, b).unwrap();
            d.cmp(&0)
        });
    }
    classes.sort_by(|a, b| a[0].lex_cmp(&b[0]));
    classes.into_iter().flatten().collect()
}

fn multiplicity(roots: &[Scalar], x: &Scalar) -> usize {
    roots.iter().filter(|r| *r == x).count()
}

/// Adds `Λ_j`, `I_j` and `J(λᵢ)` to the root-free analysis, for roots in the
/// given order.
pub fn resonance_structure(p0: &Poly, roots: &[Scalar]) -> Result<ResonanceStructure> {
    let lc = p0.leading().ok_or(Error::RootsMismatch)?;
    if Poly::from_roots(roots).scale(lc) != *p0 {
        return Err(Error::RootsMismatch);
    }
    let mut rs = resonance_orders(p0)?;
    for &j in &rs.orders {
        let shift = Scalar::from_int(j);
        let mut lambda = Vec::new();
        let mut idx = Vec::new();
        let mut seen: Vec<&Scalar> = Vec::new();
        for mu in roots {
            if seen.contains(&mu) {
                continue;
            }
            seen.push(mu);
            let k = multiplicity(roots, mu).min(multiplicity(roots, &(mu + &shift)));
            if k == 0 {
                continue;
            }
            lambda.extend(core::iter::repeat(mu.clone()).take(k));
            let positions: Vec<usize> = (0..roots.len()).filter(|&i| roots[i] == *mu).collect();
            idx.extend_from_slice(&positions[positions.len() - k..]);
        }
        idx.sort_unstable();
        rs.lambda.insert(j, lambda);
        rs.index_sets.insert(j, idx);
    }
    rs.jumps = roots
        .iter()
        .map(|l| {
            rs.orders
                .iter()
                .copied()
                .filter(|&j| roots.contains(&(l + &Scalar::from_int(j))))
                .collect()
        })
        .collect();
    rs.roots = Some(roots.to_vec());
    Ok(rs)
}

/// Orders two roots for display: by real part, then imaginary part.
pub fn root_cmp(a: &Scalar, b: &Scalar) -> Ordering {
    a.lex_cmp(b)
}
