//! Series solutions: Frobenius recursion, first-order chains, companion
//! matrices and the apparent-singularity test.
//!
//! A solution is stored as `t^λ · f(t)` ([`SeriesSolution`]). Logarithmic
//! solutions are never constructed; their necessity is reported as
//! [`Error::LogObstruction`].

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operator::OperatorSeries;
use crate::poly::Poly;
use crate::scalar::{Field, Scalar};
use crate::series::LaurentSeries;

/// `t^exponent · series`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesSolution {
    pub exponent: Scalar,
    pub series: LaurentSeries,
}

impl SeriesSolution {
    pub fn trunc(&self) -> i64 {
        self.series.trunc()
    }

    /// `L` applied to the solution, as another `t^λ·(…)`.
    pub fn apply(&self, op: &OperatorSeries) -> SeriesSolution {
        SeriesSolution { exponent: self.exponent.clone(), series: op.apply(&self.exponent, &self.series) }
    }
}

/// Frobenius series at a root `λ` of `p₀`, with `c₀ = 1`, through `t^trunc`.
///
/// When `p₀(λ + m) = 0` and the right-hand side vanishes, `c_m` is set to 0.
pub fn frobenius_solution(l: &OperatorSeries, lambda: &Scalar, trunc: i64) -> Result<SeriesSolution> {
    if !l.is_fuchsian() {
        return Err(Error::NotFuchsian);
    }
    let p0 = l.term(0);
    if !p0.eval(lambda).is_zero() {
        return Err(Error::Precondition("exponent is not a root of the Euler part"));
    }
    let trunc = trunc.min(l.trunc());
    let mut c: Vec<Scalar> = vec![Scalar::one()];
    for m in 1..=trunc {
        let mut rhs = Scalar::zero();
        for k in 1..=m {
            let pk = match l.term_ref(k) {
                Some(p) if !p.is_zero() => p,
                _ => continue,
            };
            let prev = &c[(m - k) as usize];
            if prev.is_zero() {
                continue;
            }
            rhs -= &(&pk.eval(&(lambda + &Scalar::from_int(m - k))) * prev);
        }
        let d = p0.eval(&(lambda + &Scalar::from_int(m)));
        if !d.is_zero() {
            c.push(&rhs / &d);
        } else if rhs.is_zero() {
            c.push(Scalar::zero());
        } else {
            return Err(Error::LogObstruction { exponent: lambda.clone(), order: m });
        }
    }
    Ok(SeriesSolution { exponent: lambda.clone(), series: LaurentSeries::new(0, trunc, c) })
}

/// Solves `(ε − λ + r(t))·u = rhs` (or `= 0` when `rhs` is `None`) through
/// `t^trunc` relative to the solution's exponent.
///
/// The homogeneous solution is `t^λ·exp(ρ)` with `ρ = −ε⁻¹r`. A particular
/// solution is found by variation of constants: with `u = t^λ e^ρ y` the
/// equation becomes `ε y = t^(−λ) e^(−ρ) rhs`.
pub fn first_order_solve(
    lambda: &Scalar,
    r: &LaurentSeries,
    rhs: Option<&SeriesSolution>,
    trunc: i64,
) -> Result<SeriesSolution> {
    if r.valuation().is_some_and(|v| v < 1) {
        return Err(Error::Precondition("r must vanish at t = 0"));
    }
    let r = r.truncate(trunc);
    let rho = -&r.eps_inverse().expect("no constant term");
    let e_rho = rho.exp().expect("rho has positive valuation");
    let Some(g) = rhs else {
        return Ok(SeriesSolution { exponent: lambda.clone(), series: e_rho.truncate(trunc) });
    };
    let delta = (&g.exponent - lambda).to_i64();
    let e_neg = (-&rho).exp().expect("rho has positive valuation");
    let f = &e_neg * &g.series.truncate(trunc);
    let mut y = Vec::new();
    let base = f.kmin().min(0);
    for k in base..=f.trunc() {
        let c = f.coeff(k);
        let denom = Scalar::from_int(k) + &(&g.exponent - lambda);
        if denom.is_zero() {
            if !c.is_zero() {
                return Err(Error::LogObstruction { exponent: lambda.clone(), order: delta.map_or(k, |d| k + d) });
            }
            y.push(Scalar::zero());
        } else {
            y.push(&c / &denom);
        }
    }
    let y = LaurentSeries::new(base, f.trunc(), y);
    Ok(SeriesSolution { exponent: g.exponent.clone(), series: (&e_rho * &y).truncate(trunc) })
}

/// Solution basis of `L₁⋯Lₙ` with `Lᵢ = ε − λᵢ + rᵢ(t)`. Element `k` starts
/// from the kernel of `L_k` and is lifted through `L_{k+1}, …, Lₙ`; each entry
/// is either a solution or the obstruction met on the way.
pub fn chain_solve(factors: &[(Scalar, LaurentSeries)], trunc: i64) -> Vec<Result<SeriesSolution>> {
    (0..factors.len())
        .map(|k| {
            let (lam, r) = &factors[k];
            let mut u = first_order_solve(lam, r, None, trunc)?;
            for (lam, r) in &factors[k + 1..] {
                u = first_order_solve(lam, r, Some(&u), trunc)?;
            }
            Ok(u)
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApparentClass {
    Holomorphic,
    Meromorphic,
    RamifiedOrLog,
}

impl ApparentClass {
    pub fn name(self) -> &'static str {
        match self {
            ApparentClass::Holomorphic => "holomorphic",
            ApparentClass::Meromorphic => "meromorphic",
            ApparentClass::RamifiedOrLog => "ramified_or_log",
        }
    }
}

/// Distinct integer exponents with no log obstruction through `t^trunc`.
pub fn classify_apparent(l: &OperatorSeries, trunc: i64) -> Result<ApparentClass> {
    let p0 = l.eulerization()?;
    if !l.is_fuchsian() {
        return Err(Error::NotFuchsian);
    }
    let Some(roots) = p0.roots_in(Field::Qi) else {
        return Ok(ApparentClass::RamifiedOrLog);
    };
    let mut ints = Vec::with_capacity(roots.len());
    for r in &roots {
        match r.to_i64() {
            Some(k) => ints.push(k),
            None => return Ok(ApparentClass::RamifiedOrLog),
        }
    }
    let mut sorted = ints.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != ints.len() {
        return Ok(ApparentClass::RamifiedOrLog);
    }
    for r in &roots {
        match frobenius_solution(l, r, trunc) {
            Ok(_) => {}
            Err(Error::LogObstruction { .. }) => return Ok(ApparentClass::RamifiedOrLog),
            Err(e) => return Err(e),
        }
    }
    Ok(if sorted[0] >= 0 { ApparentClass::Holomorphic } else { ApparentClass::Meromorphic })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CompanionKind {
    /// State `(u, ∂u, …, ∂ⁿ⁻¹u)`.
    DForm,
    /// State `(u, εu, …, εⁿ⁻¹u)`.
    EulerForm,
}

/// `X' = A·X` (or `εX = A·X`) for the chosen state vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompanionSystem {
    pub kind: CompanionKind,
    pub matrix: Vec<Vec<LaurentSeries>>,
}

pub fn companion(l: &OperatorSeries, kind: CompanionKind) -> Result<CompanionSystem> {
    let n = l.order().ok_or(Error::ZeroLeadingCoefficient)?;
    let coeffs: Vec<LaurentSeries> = match kind {
        CompanionKind::EulerForm => {
            if !l.is_fuchsian() {
                return Err(Error::NotFuchsian);
            }
            l.columns()
        }
        CompanionKind::DForm => {
            let mut d = l.to_d_form();
            d.reverse();
            d
        }
    };
    let lead_inv = coeffs[n].inv().ok_or(Error::ZeroLeadingCoefficient)?;
    let trunc = coeffs.iter().map(LaurentSeries::trunc).min().unwrap_or(l.trunc());
    let mut matrix = vec![vec![LaurentSeries::zero(trunc); n]; n];
    for (i, row) in matrix.iter_mut().enumerate().take(n.saturating_sub(1)) {
        row[i + 1] = LaurentSeries::one(trunc);
    }
    if n > 0 {
        for (i, c) in coeffs.iter().take(n).enumerate() {
            matrix[n - 1][i] = -&(c * &lead_inv);
        }
    }
    Ok(CompanionSystem { kind, matrix })
}

/// Operator `ε − λ + r(t)`.
pub fn first_order_operator(lambda: &Scalar, r: &LaurentSeries) -> OperatorSeries {
    let base = OperatorSeries::euler(Poly::linear(lambda), r.trunc());
    &base + &OperatorSeries::from_series(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Poly {
        Poly::from_ints(c)
    }

    fn example(trunc: i64) -> OperatorSeries {
        OperatorSeries::from_terms(trunc, [(0, p(&[0, -1, 1])), (1, p(&[-1, 1]))])
    }

    #[test]
    fn frobenius_examples() {
        let l = example(8);
        let u = frobenius_solution(&l, &Scalar::one(), 8).unwrap();
        assert_eq!(u.series, LaurentSeries::one(8));
        assert_eq!(
            frobenius_solution(&l, &Scalar::zero(), 8),
            Err(Error::LogObstruction { exponent: Scalar::zero(), order: 1 })
        );
        let e = OperatorSeries::from_terms(8, [(0, p(&[0, 1])), (1, Poly::one())]);
        let u = frobenius_solution(&e, &Scalar::zero(), 8).unwrap();
        let minus_t = LaurentSeries::monomial(Scalar::from_int(-1), 1, 8);
        assert_eq!(u.series, minus_t.exp().unwrap());
        assert!(u.apply(&e).series.is_zero());
    }

    #[test]
    fn first_order_examples() {
        let t = LaurentSeries::monomial(Scalar::one(), 1, 8);
        let u = first_order_solve(&Scalar::zero(), &t, None, 8).unwrap();
        assert_eq!(u.series, (-&t).exp().unwrap());
        let u = first_order_solve(&Scalar::one(), &LaurentSeries::zero(8), None, 8).unwrap();
        assert_eq!(u.exponent, Scalar::one());
        assert_eq!(u.series, LaurentSeries::one(8));
        let g = SeriesSolution { exponent: Scalar::zero(), series: (-&t).exp().unwrap() };
        assert!(matches!(
            first_order_solve(&Scalar::one(), &LaurentSeries::zero(8), Some(&g), 8),
            Err(Error::LogObstruction { .. })
        ));
    }

    #[test]
    fn chain_examples() {
        let t = LaurentSeries::monomial(Scalar::one(), 1, 8);
        let basis = chain_solve(&[(Scalar::zero(), t), (Scalar::one(), LaurentSeries::zero(8))], 8);
        assert!(basis[0].is_err());
        let u = basis[1].as_ref().unwrap();
        assert_eq!((u.exponent.clone(), u.series.clone()), (Scalar::one(), LaurentSeries::one(8)));
        let euler = chain_solve(&[(Scalar::zero(), LaurentSeries::zero(8)), (Scalar::one(), LaurentSeries::zero(8))], 8);
        let l = OperatorSeries::euler(p(&[0, -1, 1]), 8);
        for u in euler {
            let u = u.unwrap();
            assert!(u.apply(&l).series.is_zero());
        }
    }

    #[test]
    fn classification_examples() {
        for n in 1..=4 {
            let l = OperatorSeries::euler(Poly::falling_factorial(n), 8);
            assert_eq!(classify_apparent(&l, 8).unwrap(), ApparentClass::Holomorphic);
        }
        let m = OperatorSeries::euler(p(&[0, 1, 1]), 8);
        assert_eq!(classify_apparent(&m, 8).unwrap(), ApparentClass::Meromorphic);
        assert_eq!(classify_apparent(&example(8), 8).unwrap(), ApparentClass::RamifiedOrLog);
    }

    #[test]
    fn companion_examples() {
        let c = companion(&OperatorSeries::euler(p(&[-3, 1]), 4), CompanionKind::EulerForm).unwrap();
        assert_eq!(c.matrix, vec![vec![LaurentSeries::constant(Scalar::from_int(3), 4)]]);
        let c = companion(&example(4), CompanionKind::EulerForm).unwrap();
        assert_eq!(c.matrix[0][1], LaurentSeries::one(4));
        assert_eq!(c.matrix[1][0], LaurentSeries::monomial(Scalar::one(), 1, 4));
        assert_eq!(c.matrix[1][1], LaurentSeries::new(0, 4, vec![Scalar::one(), Scalar::from_int(-1)]));
    }
}
