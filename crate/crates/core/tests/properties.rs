use fuchsforge_core::euclid::{conjugate_by, div_rem, gcd_bezout, invert_conjugacy, lcm, relaxed_fuchsian_div};
use fuchsforge_core::fuchs::{natural_order, resonance_orders, resonance_structure};
use fuchsforge_core::linalg;
use fuchsforge_core::normal_form::{
    build_pij, eulerize_nonresonant, formal_factorize, minimal_affine_nf, minimal_reducible_nf, solve_ulvm,
    sylvester_solve, truncate_equiv, verify_conjugacy, Flavor,
};
use fuchsforge_core::solutions::{chain_solve, frobenius_solution};
use fuchsforge_core::{Field, LaurentSeries, OperatorSeries, Poly, Scalar};
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-5i64..=5, 1i64..=3).prop_map(|(n, d)| Scalar::ratio(n, d))
}

fn nonzero_scalar() -> impl Strategy<Value = Scalar> {
    scalar().prop_filter("nonzero", |s| !s.is_zero())
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> {
    prop::collection::vec(scalar(), 0..=max_deg + 1).prop_map(Poly::new)
}

fn poly_of_degree(deg: usize) -> impl Strategy<Value = Poly> {
    (prop::collection::vec(scalar(), deg), nonzero_scalar()).prop_map(|(mut c, lead)| {
        c.push(lead);
        Poly::new(c)
    })
}

/// `Σ_{k=kmin..trunc} t^k p_k` with sparse random terms of degree ≤ `order`.
fn operator(kmin: i64, trunc: i64, order: usize) -> impl Strategy<Value = OperatorSeries> {
    let len = (trunc - kmin + 1) as usize;
    (poly_of_degree(order), prop::collection::vec((any::<bool>(), poly(order)), len - 1)).prop_map(move |(lead, rest)| {
        let terms = std::iter::once((kmin, lead))
            .chain(rest.into_iter().enumerate().filter(|(_, (keep, _))| *keep).map(|(i, (_, p))| (kmin + 1 + i as i64, p)));
        OperatorSeries::from_terms(trunc, terms)
    })
}

fn any_operator(trunc: i64) -> impl Strategy<Value = OperatorSeries> {
    (-1i64..=1, 0usize..=3).prop_flat_map(move |(kmin, order)| operator(kmin, trunc, order))
}

/// Fuchsian operator of order `n` whose tail is a polynomial in `t` of degree ≤ `tail`.
fn fuchsian(n: usize, trunc: i64, tail: usize) -> impl Strategy<Value = OperatorSeries> {
    (poly_of_degree(n), prop::collection::vec(poly(n), tail)).prop_map(move |(p0, rest)| {
        OperatorSeries::from_terms(trunc, std::iter::once((0, p0)).chain(rest.into_iter().enumerate().map(|(i, p)| (i as i64 + 1, p))))
    })
}

fn fuchsian_any(trunc: i64) -> impl Strategy<Value = OperatorSeries> {
    (1usize..=3, 0usize..=3).prop_flat_map(move |(n, tail)| fuchsian(n, trunc, tail))
}

/// Fuchsian operator with `p₀ = lc·Π(ε − λᵢ)`.
fn split_fuchsian(roots: Vec<Scalar>, trunc: i64, tail: usize) -> impl Strategy<Value = (OperatorSeries, Vec<Scalar>)> {
    let n = roots.len();
    (nonzero_scalar(), prop::collection::vec(poly(n), tail)).prop_map(move |(lc, rest)| {
        let p0 = Poly::from_roots(&roots).scale(&lc);
        let l = OperatorSeries::from_terms(
            trunc,
            std::iter::once((0, p0)).chain(rest.into_iter().enumerate().map(|(i, p)| (i as i64 + 1, p))),
        );
        (l, roots.clone())
    })
}

fn integer_roots(max_n: usize, hi: i64) -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec(0..=hi, 1..=max_n).prop_map(|v| v.into_iter().map(Scalar::from_int).collect())
}

fn same(a: &OperatorSeries, b: &OperatorSeries) -> bool {
    a.first_difference(b).is_none()
}

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig { cases, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn ring_axioms(a in any_operator(10), b in any_operator(10), c in any_operator(10)) {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        if !a.is_zero() && !b.is_zero() {
            prop_assert_eq!((&a * &b).order(), Some(a.order().unwrap() + b.order().unwrap()));
        }
    }

    #[test]
    fn commutation_rule(w in poly(3), j in -3i64..=3) {
        let tj = OperatorSeries::monomial(j, Poly::one(), 8);
        let lhs = &OperatorSeries::euler(w.clone(), 8) * &tj;
        let rhs = &tj * &OperatorSeries::euler(w.shift(j), 8);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_form_round_trip(l in any_operator(8)) {
        let d = l.to_d_form();
        let back = OperatorSeries::from_d_form(&d);
        if l.is_zero() {
            return Ok(());
        }
        let back = back.unwrap();
        prop_assert!(same(&back, &l));
        prop_assert!(back.trunc() >= l.trunc());
    }

    /// Both representations act identically on `t^m`.
    #[test]
    fn d_form_acts_like_euler_form(l in any_operator(6)) {
        prop_assume!(!l.is_zero());
        let d = l.to_d_form();
        let n = d.len() - 1;
        for m in 0..=4i64 {
            let one = LaurentSeries::one(12);
            let via_euler = l.apply(&Scalar::from_int(m), &one).shift(m);
            let mut via_d = LaurentSeries::zero(via_euler.trunc());
            for (i, a) in d.iter().enumerate() {
                let order = (n - i) as i64;
                let mut ff = 1i64;
                for r in 0..order {
                    ff *= m - r;
                }
                via_d = &via_d + &a.shift(m - order).scale(&Scalar::from_int(ff));
            }
            prop_assert!(via_euler.first_difference(&via_d).is_none(), "m = {}", m);
        }
    }
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn division_invariant(l in fuchsian_any(10), m in fuchsian_any(10)) {
        let d = div_rem(&l, &m).unwrap();
        prop_assert!(same(&(&(&d.quotient * &m) + &d.remainder), &l));
        prop_assert!(d.remainder.is_zero() || d.remainder.order() < m.order());
        if l.order() >= m.order() {
            prop_assert_eq!(d.quotient.order().unwrap(), l.order().unwrap() - m.order().unwrap());
        }
    }

    #[test]
    fn bezout_and_lcm(l in fuchsian_any(10), m in fuchsian_any(10)) {
        let g = gcd_bezout(&l, &m).unwrap();
        prop_assert!(same(&(&(&g.u * &l) + &(&g.v * &m)), &g.gcd));
        prop_assert!(div_rem(&l, &g.gcd).unwrap().divides());
        prop_assert!(div_rem(&m, &g.gcd).unwrap().divides());
        let c = lcm(&l, &m).unwrap();
        prop_assert!(div_rem(&c, &l).unwrap().divides());
        prop_assert!(div_rem(&c, &m).unwrap().divides());
        prop_assert_eq!(c.order().unwrap() + g.gcd.order().unwrap(), l.order().unwrap() + m.order().unwrap());
    }

    #[test]
    fn relaxed_division_is_fuchsian(l in fuchsian(3, 10, 2), m in fuchsian(1, 10, 2)) {
        let d = relaxed_fuchsian_div(&l, &m).unwrap();
        prop_assert!(d.quotient.is_fuchsian() && d.remainder.is_fuchsian());
        prop_assert_eq!(d.remainder.order(), m.order());
        prop_assert!(same(&(&(&d.quotient * &m) + &d.remainder), &l));
    }

    #[test]
    fn conjugation_round_trip(l in fuchsian(2, 10, 2), h in fuchsian(1, 10, 1)) {
        let Ok(c) = conjugate_by(&l, &h) else {
            // Not coprime: Euclid finds a nontrivial common right factor.
            prop_assert!(gcd_bezout(&l, &h).unwrap().gcd.order() != Some(0));
            return Ok(());
        };
        prop_assert!(same(&(&c.target * &c.h), &(&c.k * &l)));
        prop_assert_eq!(c.target.order(), l.order());
        let inv = invert_conjugacy(&l, &c.target, &c.h).unwrap();
        prop_assert!(same(&(&l * &inv.v), &(&inv.w * &c.target)));
    }

    #[test]
    fn ulvm_identity(l in fuchsian(2, 8, 2), m in fuchsian(1, 8, 2), r in operator(0, 8, 2)) {
        prop_assume!(l.eulerization().unwrap().gcd(&m.eulerization().unwrap()).is_one());
        let (u, v) = solve_ulvm(&l, &m, &r).unwrap();
        prop_assert!(same(&(&(&u * &l) + &(&v * &m)), &r));
        prop_assert!(u.order().is_none_or(|d| d < 1));
        prop_assert!(v.order().is_none_or(|d| d < 2));
    }

    #[test]
    fn sylvester_bijective(p in poly_of_degree(2), q in poly_of_degree(2), r in poly(3)) {
        prop_assume!(p.gcd(&q).is_one());
        let (u, v) = sylvester_solve(&p, &q, &r).unwrap();
        prop_assert_eq!(&(&p * &u) + &(&q * &v), r);
        prop_assert!(u.degree().is_none_or(|d| d < 2) && v.degree().is_none_or(|d| d < 2));
        let (u0, v0) = sylvester_solve(&p, &q, &Poly::zero()).unwrap();
        prop_assert!(u0.is_zero() && v0.is_zero());
    }
}

/// Roots of `p₀` against its resultant-based resonance data.
fn pairwise_orders(roots: &[Scalar]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for a in roots {
        for b in roots {
            if let Some(j) = (a - b).to_i64() {
                if j > 0 && !out.contains(&j) {
                    out.push(j);
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn mixed_roots() -> impl Strategy<Value = Vec<Scalar>> {
    prop::collection::vec((0i64..=4, prop::sample::select(vec![1i64, 1, 2, 3])), 1..=4)
        .prop_map(|v| v.into_iter().map(|(n, d)| Scalar::ratio(n, d)).collect())
}

proptest! {
    #![proptest_config(config(96))]

    #[test]
    fn root_free_matches_root_full(roots in mixed_roots(), lc in nonzero_scalar()) {
        let p0 = Poly::from_roots(&roots).scale(&lc);
        let free = resonance_orders(&p0).unwrap();
        prop_assert_eq!(&free.orders, &pairwise_orders(&roots));
        prop_assert_eq!(free.bound, free.orders.last().copied().unwrap_or(0));
        let full = resonance_structure(&p0, &natural_order(&roots)).unwrap();
        for &j in &free.orders {
            let lam = full.lambda.get(&j).map_or(0, Vec::len);
            prop_assert_eq!(free.nu(j), lam);
            prop_assert_eq!(full.index_sets.get(&j).map_or(0, Vec::len), lam);
            prop_assert_eq!(free.w(j), p0.gcd(&p0.shift(j)));
        }
        for j in free.bound + 1..=free.bound + 4 {
            prop_assert!(p0.gcd(&p0.shift(j)).is_constant());
        }
        for (i, jumps) in full.jumps.iter().enumerate() {
            let lam = &full.roots.as_ref().unwrap()[i];
            for j in 1..=5 {
                let hit = roots.iter().any(|r| *r == lam + &Scalar::from_int(j));
                prop_assert_eq!(jumps.contains(&j), hit);
            }
        }
    }

    /// The `p_ij` are independent, and those with `i ∈ I_j` stay independent modulo `w_j`.
    #[test]
    fn pij_independence(roots in integer_roots(4, 5)) {
        let ordered = natural_order(&roots);
        let p0 = Poly::from_roots(&ordered);
        let res = resonance_structure(&p0, &ordered).unwrap();
        let n = ordered.len();
        for j in 1..=6 {
            let pij: Vec<Poly> = (0..n).map(|i| build_pij(&ordered, i, j).unwrap()).collect();
            let full: Vec<Vec<Scalar>> = (0..n).map(|d| pij.iter().map(|p| p.coeff(d)).collect()).collect();
            prop_assert_eq!(linalg::rank(&full), n);
            let w = res.w(j);
            let idx = res.index_sets.get(&j).cloned().unwrap_or_default();
            let nu = res.nu(j);
            prop_assert_eq!(idx.len(), nu);
            let reduced: Vec<Vec<Scalar>> =
                (0..nu).map(|d| idx.iter().map(|&i| pij[i].rem(&w).unwrap().coeff(d)).collect()).collect();
            prop_assert_eq!(linalg::rank(&reduced), nu);
        }
    }

    #[test]
    fn series_calculus(c in prop::collection::vec(scalar(), 1..8)) {
        let rho = LaurentSeries::from_terms(8, c.iter().cloned().enumerate().map(|(i, s)| (i as i64 + 1, s)));
        let e = rho.exp().unwrap();
        let e_neg = (-&rho).exp().unwrap();
        prop_assert!((&e * &e_neg).first_difference(&LaurentSeries::one(8)).is_none());
        let f = LaurentSeries::from_terms(8, c.iter().cloned().enumerate().map(|(i, s)| (i as i64, s)));
        let back = f.integrate().unwrap().derivative();
        prop_assert!(back.first_difference(&f).is_none());
        prop_assert!(back.trunc() >= f.trunc());
        prop_assert!(e.eps().first_difference(&(&rho.eps() * &e)).is_none());
    }
}

fn resonant_case() -> impl Strategy<Value = (OperatorSeries, Vec<Scalar>)> {
    integer_roots(3, 4)
        .prop_filter("resonant", |r| !pairwise_orders(r).is_empty())
        .prop_flat_map(|roots| split_fuchsian(roots, 8, 3))
}

fn nonresonant_case() -> impl Strategy<Value = (OperatorSeries, Vec<Scalar>)> {
    prop::collection::vec((-3i64..=3, prop::sample::select(vec![2i64, 3, 5])), 1..=3)
        .prop_map(|v| v.into_iter().map(|(n, d)| Scalar::ratio(n, d)).collect::<Vec<_>>())
        .prop_filter("nonresonant", |r| pairwise_orders(r).is_empty())
        .prop_flat_map(|roots| split_fuchsian(roots, 8, 3))
}

/// `M` annihilates `H·u` for each log-free solution `u` of `L`.
fn transports(l: &OperatorSeries, m: &OperatorSeries, h: &OperatorSeries, roots: &[Scalar]) -> Result<(), TestCaseError> {
    for lam in roots {
        let Ok(u) = frobenius_solution(l, lam, l.trunc()) else { continue };
        prop_assert!(u.apply(l).series.is_zero());
        let hu = u.apply(h);
        let out = hu.apply(m);
        prop_assert!(out.series.is_zero(), "lambda = {}: {}", lam, out.series);
        prop_assert!(out.trunc() >= 0);
    }
    Ok(())
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn eulerization_verifies((l, roots) in nonresonant_case()) {
        let nf = eulerize_nonresonant(&l).unwrap();
        prop_assert!(nf.verify(&l).passed());
        prop_assert_eq!(&nf.normal_form, &OperatorSeries::euler(l.eulerization().unwrap(), l.trunc()));
        transports(&l, &nf.normal_form, &nf.conj.h, &roots)?;
    }

    #[test]
    fn minimal_affine_shape((l, roots) in resonant_case()) {
        let nf = minimal_affine_nf(&l).unwrap();
        prop_assert!(nf.verify(&l).passed());
        let res = &nf.resonances;
        for j in 1..=l.trunc() {
            let q = nf.normal_form.term(j);
            if res.orders.contains(&j) {
                prop_assert!(q.degree().is_none_or(|d| d < res.nu(j)));
            } else {
                prop_assert!(q.is_zero(), "q_{} = {}", j, q);
            }
        }
        let again = minimal_affine_nf(&nf.normal_form).unwrap();
        prop_assert_eq!(&again.normal_form, &nf.normal_form);
        transports(&l, &nf.normal_form, &nf.conj.h, &roots)?;
    }

    #[test]
    fn truncation_shape((l, _roots) in resonant_case()) {
        let nf = truncate_equiv(&l).unwrap();
        prop_assert!(nf.verify(&l).passed());
        let n = nf.resonances.bound;
        for j in 0..=l.trunc() {
            let want = if j <= n { l.term(j) } else { Poly::zero() };
            prop_assert_eq!(nf.normal_form.term(j), want);
        }
    }

    #[test]
    fn minimal_reducible_shape((l, roots) in resonant_case()) {
        let nf = minimal_reducible_nf(&l, Some(&roots), Field::Q).unwrap();
        prop_assert!(nf.verify(&l).passed());
        let res = &nf.resonances;
        for (i, (_, r)) in nf.factors.as_ref().unwrap().iter().enumerate() {
            for (j, c) in r.terms() {
                prop_assert!(c.is_zero() || (res.jumps[i].contains(&j) && j <= res.bound), "r_{} has t^{}", i, j);
            }
        }
        transports(&l, &nf.normal_form, &nf.conj.h, &roots)?;
    }

    #[test]
    fn factorization_remultiplies((l, roots) in integer_roots(3, 4).prop_flat_map(|r| split_fuchsian(r, 8, 3))) {
        let f = formal_factorize(&l, Some(&roots), Field::Q).unwrap();
        prop_assert_eq!(f.product(), l.truncate(f.trunc));
        for (_, r) in &f.factors {
            prop_assert!(r.coeff(0).is_zero());
        }
    }

    #[test]
    fn chain_solutions_satisfy_product((l, roots) in nonresonant_case()) {
        let nf = minimal_reducible_nf(&l, Some(&roots), Field::Q).unwrap();
        let distinct = roots.iter().enumerate().all(|(i, a)| roots[..i].iter().all(|b| a != b));
        for u in chain_solve(nf.factors.as_ref().unwrap(), 8) {
            match u {
                Ok(u) => prop_assert!(u.apply(&nf.normal_form).series.is_zero()),
                // A repeated exponent forces a logarithm.
                Err(e) => prop_assert!(!distinct, "{:?}", e),
            }
        }
    }
}

#[test]
fn sylvester_matches_dense_oracle() {
    // ε²·u + (ε−1)²·v = 1 with u = u0 + u1 ε, v = v0 + v1 ε.
    let p = Poly::from_ints(&[0, 0, 1]);
    let q = Poly::from_ints(&[1, -2, 1]);
    let cols = [
        Poly::from_ints(&[0, 0, 1]),
        Poly::from_ints(&[0, 0, 0, 1]),
        Poly::from_ints(&[1, -2, 1]),
        Poly::from_ints(&[0, 1, -2, 1]),
    ];
    let mut m: Vec<Vec<Scalar>> =
        (0..4).map(|d| cols.iter().map(|c| c.coeff(d)).chain([Scalar::from_int((d == 0) as i64)]).collect()).collect();
    for col in 0..4 {
        let piv = (col..4).find(|&r| !m[r][col].is_zero()).unwrap();
        m.swap(col, piv);
        let inv = m[col][col].inv().unwrap();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..4 {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let row = m[col].clone();
                for (x, y) in m[r].iter_mut().zip(&row) {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    let x: Vec<Scalar> = m.iter().map(|row| row[4].clone()).collect();
    let (u, v) = sylvester_solve(&p, &q, &Poly::one()).unwrap();
    assert_eq!(u, Poly::new(vec![x[0].clone(), x[1].clone()]));
    assert_eq!(v, Poly::new(vec![x[2].clone(), x[3].clone()]));
    assert_eq!(u, Poly::from_ints(&[3, -2]));
    assert_eq!(v, Poly::from_ints(&[1, 2]));
}

#[test]
fn conjugation_transports_solutions() {
    // ε(ε−1) has solutions 1 and t; H = ε − 2 maps them to −2 and −t.
    let l = OperatorSeries::euler(Poly::from_ints(&[0, -1, 1]), 12);
    let h = OperatorSeries::euler(Poly::from_ints(&[-2, 1]), 12);
    let c = conjugate_by(&l, &h).unwrap();
    assert_eq!(c.target, l);
    transports(&l, &c.target, &c.h, &[Scalar::zero(), Scalar::one()]).unwrap();
}

#[test]
fn nonresonant_half_integer_example() {
    let l = OperatorSeries::from_terms(12, [(0, Poly::new(vec![Scalar::zero(), Scalar::ratio(-1, 2), Scalar::one()])), (1, Poly::one())]);
    let nf = eulerize_nonresonant(&l).unwrap();
    let r = verify_conjugacy(&l, &nf.normal_form, &nf.conj.h, &nf.conj.k, Flavor::Fuchsian);
    assert!(r.passed());
    assert_eq!(r.checked_trunc, 12);
}
