//! Homological equations and Fuchsian normal forms.
//!
//! Every procedure looks for `M = Σ tʲ mⱼ(ε)` together with `H = Σ tʲ hⱼ`,
//! `K = Σ tʲ kⱼ` satisfying `M·H = K·L`. With `h₀ = k₀ = 1` the `tʲ`
//! coefficient of that identity reads
//!
//! ```text
//! p₀(ε + j)·hⱼ − p₀·kⱼ + mⱼ = vⱼ,
//! vⱼ = Σ_{a<j} kₐ(ε + j − a)·p_{j−a} − Σ_{0<a<j} mₐ(ε + j − a)·h_{j−a},
//! ```
//!
//! which is solvable exactly when `wⱼ = gcd(p₀, p₀(ε + j))` divides
//! `vⱼ − mⱼ`. The procedures differ only in how `mⱼ` is chosen. The solution
//! with `deg hⱼ < n − νⱼ` is taken at every order.
//!
//! When `h₀ = 1` leaves `H` or `K` non-Fuchsian, the pair is replaced by
//! `(H + L, K + M)`, which satisfies the same identity and has Euler part
//! `1 + p₀`, coprime to `p₀`.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::euclid::{div_rem, gcd_bezout, ConjugacyPair};
use crate::fuchs::{natural_order, resonance_orders, resonance_structure, ResonanceStructure};
use crate::linalg;
use crate::operator::OperatorSeries;
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};
use crate::series::LaurentSeries;

/// Solves `p·u + q·v = r` with `deg u < deg q`, `deg v < deg p`.
pub fn sylvester_solve(p: &Poly, q: &Poly, r: &Poly) -> Result<(Poly, Poly)> {
    let (dp, dq) = match (p.degree(), q.degree()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NotCoprime),
    };
    if r.degree().is_some_and(|d| d + 1 > dp + dq) {
        return Err(Error::DegreeBound("deg r must not exceed deg p + deg q - 1"));
    }
    sylvester_solve_unbounded(p, q, r)
}

/// [`sylvester_solve`] without the bound on `deg r`; `u` is still reduced
/// modulo `q`, so `v` absorbs any excess degree.
pub fn sylvester_solve_unbounded(p: &Poly, q: &Poly, r: &Poly) -> Result<(Poly, Poly)> {
    let inv = p.inv_mod(q).ok_or(Error::NotCoprime)?;
    let u = (r * &inv).rem(q).ok_or(Error::NotCoprime)?;
    let v = (r - &(p * &u)).div_exact(q).ok_or(Error::Internal("Sylvester remainder"))?;
    Ok((u, v))
}

fn check_fuchsian(l: &OperatorSeries) -> Result<Poly> {
    if !l.is_fuchsian() {
        return Err(Error::NotFuchsian);
    }
    l.eulerization()
}

/// `U·L + V·M = R` with `order U < order M`, `order V < order L`, solved
/// one power of `t` at a time.
pub fn solve_ulvm(l: &OperatorSeries, m: &OperatorSeries, r: &OperatorSeries) -> Result<(OperatorSeries, OperatorSeries)> {
    let p0 = check_fuchsian(l)?;
    let q0 = check_fuchsian(m)?;
    if !p0.gcd(&q0).is_one() {
        return Err(Error::NotCoprime);
    }
    if r.kmin() < 0 && !r.is_zero() {
        return Err(Error::NegativeValuation(r.kmin()));
    }
    let (n, k) = (l.order().unwrap(), m.order().unwrap());
    if r.order().is_some_and(|d| d + 1 > n + k) {
        return Err(Error::DegreeBound("order(R) must not exceed order(L) + order(M) - 1"));
    }
    let trunc = l.trunc().min(m.trunc()).min(r.trunc());
    let mut us: Vec<Poly> = Vec::new();
    let mut vs: Vec<Poly> = Vec::new();
    for j in 0..=trunc {
        let mut rhs = r.term(j);
        for a in 0..j as usize {
            let s = j - a as i64;
            rhs = &rhs - &(&us[a].shift(s) * &l.term(s));
            rhs = &rhs - &(&vs[a].shift(s) * &m.term(s));
        }
        let (u, v) = sylvester_solve(&p0, &q0, &rhs)?;
        us.push(u);
        vs.push(v);
    }
    let mk = |c: Vec<Poly>| OperatorSeries::new(0, trunc, c);
    Ok((mk(us), mk(vs)))
}

/// `U·L + V·H = 1` with `U = H + U'`, `V = −L + V'` where
/// `U'·L + V'·H = 1 − [H, L]`.
pub fn fuchsian_bezout(l: &OperatorSeries, h: &OperatorSeries) -> Result<(OperatorSeries, OperatorSeries)> {
    let trunc = l.trunc().min(h.trunc());
    let comm = &(h * l) - &(l * h);
    let rhs = &OperatorSeries::one(trunc) - &comm;
    let (u1, v1) = solve_ulvm(l, h, &rhs)?;
    Ok((h + &u1, &v1 - l))
}

/// Which normal form a [`NormalFormResult`] holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormalFormKind {
    Euler,
    PolyTruncation,
    MinimalAffine,
    MinimalReducible,
}

impl NormalFormKind {
    pub fn name(self) -> &'static str {
        match self {
            NormalFormKind::Euler => "euler",
            NormalFormKind::PolyTruncation => "poly_truncation",
            NormalFormKind::MinimalAffine => "minimal_affine",
            NormalFormKind::MinimalReducible => "minimal_reducible",
        }
    }
}

/// One solved order of the homological equation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologicalStep {
    pub j: i64,
    pub v: Poly,
    /// The normal-form coefficient `mⱼ`.
    pub q: Poly,
    pub h: Poly,
    pub k: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalFormResult {
    pub kind: NormalFormKind,
    pub normal_form: OperatorSeries,
    /// `(λᵢ, rᵢ)` for the factors `ε − λᵢ + rᵢ(t)` of the reducible form.
    pub factors: Option<Vec<(Scalar, LaurentSeries)>>,
    pub conj: ConjugacyPair,
    pub achieved_trunc: i64,
    /// Homological steps `j = 1..=achieved_trunc` (for the source scaled to
    /// a monic Euler part in the reducible case).
    pub steps: Vec<HomologicalStep>,
    pub resonances: ResonanceStructure,
    /// Whether `(H, K)` was replaced by `(H + L, K + M)`.
    pub repaired: bool,
}

impl NormalFormResult {
    pub fn verify(&self, source: &OperatorSeries) -> ConjugacyReport {
        verify_conjugacy(source, &self.normal_form, &self.conj.h, &self.conj.k, Flavor::Fuchsian)
    }
}

/// Runs the homological recursion for `j = 1..=trunc` with `mⱼ` supplied by
/// `rule(j, vⱼ)`.
fn homological<R>(l: &OperatorSeries, res: &ResonanceStructure, mut rule: R) -> Result<(Vec<HomologicalStep>, Vec<Poly>)>
where
    R: FnMut(i64, &Poly, &Poly) -> Result<Poly>,
{
    let p0 = &res.p0;
    let trunc = l.trunc();
    let mut h: Vec<Poly> = vec![Poly::one()];
    let mut k: Vec<Poly> = vec![Poly::one()];
    let mut m: Vec<Poly> = vec![p0.clone()];
    let mut steps = Vec::new();
    for j in 1..=trunc {
        let ju = j as usize;
        let mut v = Poly::zero();
        for a in 0..ju {
            let s = j - a as i64;
            let pj = l.term(s);
            if !pj.is_zero() && !k[a].is_zero() {
                v = &v + &(&k[a].shift(s) * &pj);
            }
        }
        for a in 1..ju {
            let s = (j - a as i64) as usize;
            if !m[a].is_zero() && !h[s].is_zero() {
                v = &v - &(&m[a].shift(s as i64) * &h[s]);
            }
        }
        let w = res.w(j);
        let mj = rule(j, &v, &w)?;
        let d = &v - &mj;
        let s = d.div_exact(&w).ok_or(Error::Internal("defect not divisible by w_j"))?;
        let a = p0.shift(j).div_exact(&w).ok_or(Error::Internal("w_j does not divide p0(e+j)"))?;
        let b = p0.div_exact(&w).ok_or(Error::Internal("w_j does not divide p0"))?;
        let hj = if b.is_constant() {
            Poly::zero()
        } else {
            let inv = a.inv_mod(&b).ok_or(Error::Internal("shifted cofactor not invertible"))?;
            (&s * &inv).rem(&b).unwrap()
        };
        let kj = (&(&a * &hj) - &s).div_exact(&b).ok_or(Error::Internal("k_j division"))?;
        steps.push(HomologicalStep { j, v, q: mj.clone(), h: hj.clone(), k: kj.clone() });
        h.push(hj);
        k.push(kj);
        m.push(mj);
    }
    let _ = k;
    Ok((steps, m))
}

fn series_op(c: impl Iterator<Item = Poly>, trunc: i64) -> OperatorSeries {
    OperatorSeries::new(0, trunc, c.collect())
}

/// Assembles `(H, K)` from the steps, applying the Fuchsian repair if needed.
/// `k_scale` multiplies `K₀` (used when the recursion ran on a rescaled source).
fn assemble(
    source: &OperatorSeries,
    normal_form: &OperatorSeries,
    steps: &[HomologicalStep],
    k_scale: &Scalar,
    force_repair: bool,
) -> (ConjugacyPair, bool) {
    let trunc = source.trunc();
    let h0 = series_op(core::iter::once(Poly::one()).chain(steps.iter().map(|s| s.h.clone())), trunc);
    let k0 = series_op(core::iter::once(Poly::one()).chain(steps.iter().map(|s| s.k.clone())), trunc).scale(k_scale);
    let repair = force_repair || !h0.is_fuchsian() || !k0.is_fuchsian();
    let (h, k) = if repair { (&h0 + source, &k0 + normal_form) } else { (h0, k0) };
    (ConjugacyPair { h, k, target: normal_form.clone() }, repair)
}

fn require_precision(l: &OperatorSeries, res: &ResonanceStructure) -> Result<()> {
    if l.trunc() < res.bound {
        return Err(Error::InsufficientPrecision { needed: res.bound, available: l.trunc() });
    }
    Ok(())
}

/// Conjugates a nonresonant Fuchsian operator to its Euler part.
pub fn eulerize_nonresonant(l: &OperatorSeries) -> Result<NormalFormResult> {
    let p0 = check_fuchsian(l)?;
    let res = resonance_orders(&p0)?;
    if let Some(&j) = res.orders.first() {
        return Err(Error::Resonant(j));
    }
    let (steps, _) = homological(l, &res, |_, _, _| Ok(Poly::zero()))?;
    let nf = OperatorSeries::euler(p0, l.trunc());
    let (conj, repaired) = assemble(l, &nf, &steps, &Scalar::one(), false);
    Ok(NormalFormResult {
        kind: NormalFormKind::Euler,
        normal_form: nf,
        factors: None,
        conj,
        achieved_trunc: l.trunc(),
        steps,
        resonances: res,
        repaired,
    })
}

/// Keeps the Taylor terms of order `≤ N` and conjugates the tail away.
pub fn truncate_equiv(l: &OperatorSeries) -> Result<NormalFormResult> {
    let p0 = check_fuchsian(l)?;
    let res = resonance_orders(&p0)?;
    require_precision(l, &res)?;
    let n = res.bound;
    let (steps, m) = homological(l, &res, |j, _, _| Ok(if j <= n { l.term(j) } else { Poly::zero() }))?;
    let nf = series_op(m.into_iter(), l.trunc());
    let (conj, repaired) = assemble(l, &nf, &steps, &Scalar::one(), true);
    Ok(NormalFormResult {
        kind: NormalFormKind::PolyTruncation,
        normal_form: nf,
        factors: None,
        conj,
        achieved_trunc: l.trunc(),
        steps,
        resonances: res,
        repaired,
    })
}

/// `p₀ + Σ tʲ qⱼ` with `qⱼ = vⱼ mod wⱼ`, so `deg qⱼ < νⱼ`.
pub fn minimal_affine_nf(l: &OperatorSeries) -> Result<NormalFormResult> {
    let p0 = check_fuchsian(l)?;
    let res = resonance_orders(&p0)?;
    require_precision(l, &res)?;
    let (steps, m) = homological(l, &res, |_, v, w| v.rem(w).ok_or(Error::Internal("w_j is zero")))?;
    let nf = series_op(m.into_iter(), l.trunc());
    let (conj, repaired) = assemble(l, &nf, &steps, &Scalar::one(), false);
    Ok(NormalFormResult {
        kind: NormalFormKind::MinimalAffine,
        normal_form: nf,
        factors: None,
        conj,
        achieved_trunc: l.trunc(),
        steps,
        resonances: res,
        repaired,
    })
}

/// `p_{ij} = Π_{a<i}(ε − λₐ + j) · Π_{a>i}(ε − λₐ)` for a 0-based index `i`.
pub fn build_pij(roots: &[Scalar], i: usize, j: i64) -> Result<Poly> {
    if i >= roots.len() {
        return Err(Error::IndexOutOfRange { index: i, len: roots.len() });
    }
    let shift = Scalar::from_int(j);
    let mut out = Poly::one();
    for (a, r) in roots.iter().enumerate() {
        if a < i {
            out = &out * &Poly::linear(&(r - &shift));
        } else if a > i {
            out = &out * &Poly::linear(r);
        }
    }
    Ok(out)
}

fn split_roots(p0: &Poly, roots: Option<&[Scalar]>, field: Field) -> Result<Vec<Scalar>> {
    let roots = match roots {
        Some(r) => {
            if !r.iter().all(|x| field.contains(x)) {
                return Err(Error::NotSplit);
            }
            r.to_vec()
        }
        None => p0.roots_in(field).ok_or(Error::NotSplit)?,
    };
    Ok(natural_order(&roots))
}

fn factor_product(roots: &[Scalar], r: &[Vec<Scalar>], trunc: i64) -> OperatorSeries {
    let mut acc = OperatorSeries::one(trunc);
    for (lam, ri) in roots.iter().zip(r) {
        let mut terms = vec![(0, Poly::linear(lam))];
        for (j, c) in ri.iter().enumerate() {
            if !c.is_zero() {
                terms.push((j as i64, Poly::constant(c.clone())));
            }
        }
        acc = acc.mul_to(&OperatorSeries::from_terms(trunc, terms), trunc);
    }
    acc
}

fn factor_list(roots: &[Scalar], r: &[Vec<Scalar>], trunc: i64) -> Vec<(Scalar, LaurentSeries)> {
    roots
        .iter()
        .zip(r)
        .map(|(lam, ri)| (lam.clone(), LaurentSeries::from_terms(trunc, ri.iter().cloned().enumerate().map(|(j, c)| (j as i64, c)))))
        .collect()
}

/// Product `Π(ε − λᵢ + rᵢ(t))` with `supp rᵢ ⊆ J(λᵢ)`.
///
/// Roots may be supplied (in any order); otherwise they are computed in
/// `field`. They are arranged in the natural order before use.
pub fn minimal_reducible_nf(l: &OperatorSeries, roots: Option<&[Scalar]>, field: Field) -> Result<NormalFormResult> {
    let p0 = check_fuchsian(l)?;
    let roots = split_roots(&p0, roots, field)?;
    let lc = p0.leading().unwrap().clone();
    let lc_inv = lc.inv().unwrap();
    let scaled = l.scale(&lc_inv);
    let res = resonance_structure(&scaled.eulerization()?, &roots)?;
    require_precision(l, &res)?;
    let trunc = l.trunc();
    let n = roots.len();
    let bound = res.bound;
    let mut r: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); (bound + 1) as usize]; n];
    let mut product = factor_product(&roots, &r, trunc);
    let rule = |j: i64, v: &Poly, w: &Poly| -> Result<Poly> {
        if j > bound {
            return Ok(product.term(j));
        }
        let m_old = factor_product(&roots, &r, trunc).term(j);
        let idx = res.index_sets.get(&j).cloned().unwrap_or_default();
        if idx.is_empty() {
            return Ok(m_old);
        }
        let nu = w.degree().unwrap_or(0);
        let target = (v - &m_old).rem(w).unwrap();
        let pij: Vec<Poly> = idx.iter().map(|&i| build_pij(&roots, i, j)).collect::<Result<_>>()?;
        let reduced: Vec<Poly> = pij.iter().map(|p| p.rem(w).unwrap()).collect();
        let a: Vec<Vec<Scalar>> = (0..nu).map(|d| reduced.iter().map(|p| p.coeff(d)).collect()).collect();
        let b: Vec<Scalar> = (0..nu).map(|d| target.coeff(d)).collect();
        let c = linalg::solve(&a, &b).ok_or(Error::Internal("p_ij family not transversal"))?;
        let mut mj = m_old;
        for ((&i, ci), p) in idx.iter().zip(&c).zip(&pij) {
            r[i][j as usize] = ci.clone();
            mj = &mj + &p.scale(ci);
        }
        if j == bound {
            product = factor_product(&roots, &r, trunc);
        }
        Ok(mj)
    };
    let (steps, _) = homological(&scaled, &res, rule)?;
    let nf = factor_product(&roots, &r, trunc);
    let (conj, repaired) = assemble(l, &nf, &steps, &lc_inv, false);
    Ok(NormalFormResult {
        kind: NormalFormKind::MinimalReducible,
        normal_form: nf,
        factors: Some(factor_list(&roots, &r, trunc)),
        conj,
        achieved_trunc: trunc,
        steps,
        resonances: res,
        repaired,
    })
}

/// `L = unit(t) · Π(ε − λᵢ + r̂ᵢ(t))` with `r̂ᵢ(0) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: LaurentSeries,
    pub factors: Vec<(Scalar, LaurentSeries)>,
    pub trunc: i64,
}

impl Factorization {
    /// `unit · Π factors`, to the factorisation's truncation.
    pub fn product(&self) -> OperatorSeries {
        let roots: Vec<Scalar> = self.factors.iter().map(|(l, _)| l.clone()).collect();
        let r: Vec<Vec<Scalar>> =
            self.factors.iter().map(|(_, s)| (0..=self.trunc).map(|k| s.coeff(k)).collect()).collect();
        let p = factor_product(&roots, &r, self.trunc);
        OperatorSeries::from_series(&self.unit).mul_to(&p, self.trunc)
    }
}

/// Order-by-order factorisation into first-order factors.
pub fn formal_factorize(l: &OperatorSeries, roots: Option<&[Scalar]>, field: Field) -> Result<Factorization> {
    let p0 = check_fuchsian(l)?;
    let roots = split_roots(&p0, roots, field)?;
    let lc = p0.leading().unwrap();
    if Poly::from_roots(&roots).scale(lc) != p0 {
        return Err(Error::RootsMismatch);
    }
    let unit = l.leading_series().unwrap();
    let unit_inv = unit.inv().ok_or(Error::ZeroLeadingCoefficient)?;
    let monic = OperatorSeries::from_series(&unit_inv).mul_to(l, l.trunc());
    let trunc = monic.trunc();
    let n = roots.len();
    let mut r: Vec<Vec<Scalar>> = vec![vec![Scalar::zero(); (trunc.max(0) + 1) as usize]; n];
    for j in 1..=trunc {
        let m_old = factor_product(&roots, &r, j).term(j);
        let target = &monic.term(j) - &m_old;
        if target.is_zero() {
            continue;
        }
        let pij: Vec<Poly> = (0..n).map(|i| build_pij(&roots, i, j)).collect::<Result<_>>()?;
        let a: Vec<Vec<Scalar>> = (0..n).map(|d| pij.iter().map(|p| p.coeff(d)).collect()).collect();
        let b: Vec<Scalar> = (0..n).map(|d| target.coeff(d)).collect();
        if target.degree().is_some_and(|d| d >= n) {
            return Err(Error::Internal("defect exceeds the span of p_ij"));
        }
        let c = linalg::solve(&a, &b).ok_or(Error::Internal("p_ij family is dependent"))?;
        for (i, ci) in c.into_iter().enumerate() {
            r[i][j as usize] = ci;
        }
    }
    Ok(Factorization { unit: unit.truncate(trunc), factors: factor_list(&roots, &r, trunc), trunc })
}

/// Which equivalence [`verify_conjugacy`] checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Weyl,
    Fuchsian,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub flavor: Flavor,
    pub checked_trunc: i64,
    pub identity_holds: bool,
    /// Lowest `t`-power where `M·H − K·L` is nonzero.
    pub first_failure: Option<i64>,
    pub gcd_ok: bool,
    /// `H` and `K` Fuchsian (always true for the Weyl flavor).
    pub fuchsian_ok: bool,
}

impl ConjugacyReport {
    pub fn passed(&self) -> bool {
        self.identity_holds && self.gcd_ok && self.fuchsian_ok
    }
}

/// Checks `M·H = K·L` and the gcd condition of the chosen flavor.
pub fn verify_conjugacy(
    l: &OperatorSeries,
    m: &OperatorSeries,
    h: &OperatorSeries,
    k: &OperatorSeries,
    flavor: Flavor,
) -> ConjugacyReport {
    let lhs = m * h;
    let rhs = k * l;
    let checked_trunc = lhs.trunc().min(rhs.trunc());
    let first_failure = lhs.first_difference(&rhs);
    let (gcd_ok, fuchsian_ok) = match flavor {
        Flavor::Weyl => {
            let ok = gcd_bezout(l, h).map(|g| g.gcd.order() == Some(0)).unwrap_or(false);
            (ok, true)
        }
        Flavor::Fuchsian => {
            let fu = h.is_fuchsian() && k.is_fuchsian();
            let ok = match (h.eulerization(), l.eulerization()) {
                (Ok(a), Ok(b)) if fu && l.is_fuchsian() => a.gcd(&b).is_one(),
                _ => false,
            };
            (ok, fu)
        }
    };
    ConjugacyReport {
        flavor,
        checked_trunc,
        identity_holds: first_failure.is_none(),
        first_failure,
        gcd_ok,
        fuchsian_ok,
    }
}

/// Roots `λ` of `p₀` outside every resonance for which `M` is right-divisible
/// by `ε − λ`. Meaningful for normal forms of operators with simple roots.
pub fn separated_factors(m: &OperatorSeries, roots: &[Scalar]) -> Vec<Scalar> {
    let Ok(p0) = m.eulerization() else {
        return Vec::new();
    };
    let Ok(res) = resonance_orders(&p0) else {
        return Vec::new();
    };
    roots
        .iter()
        .filter(|lam| {
            let resonant = res.orders.iter().any(|&j| {
                let s = Scalar::from_int(j);
                roots.contains(&(*lam + &s)) || roots.contains(&(*lam - &s))
            });
            !resonant
                && div_rem(m, &OperatorSeries::euler(Poly::linear(lam), m.trunc()))
                    .map(|d| d.divides())
                    .unwrap_or(false)
        })
        .cloned()
        .collect()
}
