use nalgebra::DMatrix;
use proptest::prelude::*;
use qem_core::exact::{int, rat};
use qem_core::solver::{
    interval_r1, lorentz_branches_r1, r2_discriminant, roots_r2, solve_r1, solve_r2_su,
    system_residuals,
};
use qem_core::verifier::certify;
use qem_core::{
    build_metric, dualize, list_cases, parse_rational, realize, CaseParams, EmbeddingCase, Family,
    ReductiveDecomposition, Surd,
};

fn one_ideal_cases() -> Vec<EmbeddingCase> {
    list_cases(8)
        .into_iter()
        .filter(|c| c.r == 1 && c.isotropy_irreducible())
        .collect()
}

fn small_rational() -> impl Strategy<Value = (i64, i64)> {
    (-60i64..=60, 1i64..=12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn r1_solutions_satisfy_system((num, den) in small_rational(), idx in 0usize..16) {
        let cases = one_ideal_cases();
        let case = &cases[idx % cases.len()];
        let a1 = rat(num, den);
        if let Ok(params) = solve_r1(case, &a1) {
            for r in system_residuals(case, &params).unwrap() {
                prop_assert!(r.is_zero(), "{}: residual {}", case.id, r);
            }
            prop_assert_eq!(&params.a_k[1], &Surd::from_rational(a1));
        }
    }

    #[test]
    fn r2_discriminant_closed_form(l1 in 2i64..9, l2 in 2i64..9) {
        let expected = int(4 * l1 * l2 * (l1 * l1 - 1) * (l2 * l2 - 1));
        prop_assert_eq!(r2_discriminant(l1, l2), expected);
        let (x1, x2) = roots_r2(l1, l2).unwrap();
        prop_assert!(x1 < x2);
    }

    #[test]
    fn r2_solutions_have_positive_ideal_scalars((num, den) in (1i64..40, 1i64..40)) {
        let a2 = rat(num, den);
        let (x1, x2) = roots_r2(2, 2).unwrap();
        let s = Surd::from_rational(a2.clone());
        if let Ok(params) = solve_r2_su(2, 2, &a2) {
            let inside = x1 < s && s < x2;
            let riemannian = params.a_k.iter().all(Surd::is_positive) && params.p < Surd::one();
            if inside {
                prop_assert!(riemannian, "a2 = {}", s);
            }
        }
    }

    #[test]
    fn decimals_parse_exactly(whole in 0u32..1000, frac in 0u32..1000) {
        let text = format!("{whole}.{frac:03}");
        let q = parse_rational(&text).unwrap();
        prop_assert_eq!(q, rat(whole as i64 * 1000 + frac as i64, 1000));
        let neg = parse_rational(&format!("-{text}")).unwrap();
        prop_assert_eq!(neg, rat(-(whole as i64 * 1000 + frac as i64), 1000));
    }

    #[test]
    fn surd_field_identities(a in -20i64..20, b in -20i64..20, c in 1i64..20, d in -20i64..20) {
        let r5 = num_bigint::BigInt::from(5);
        let x = Surd::new(rat(a, 3), rat(b, 7), r5.clone());
        let y = Surd::new(rat(d, c), rat(1, c), r5);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        let prod = &x * &y;
        prop_assert_eq!(&prod / &y, x.clone());
        prop_assert!(((prod.to_f64()) - x.to_f64() * y.to_f64()).abs() < 1e-9 * (1.0 + prod.to_f64().abs()));
    }

    #[test]
    fn lambda_fit_is_basis_independent(seed in 0u64..1000, a1_idx in 0usize..4) {
        let case = EmbeddingCase::new(Family::SPK_UK, CaseParams::k(2)).unwrap();
        let r = realize(&case).unwrap();
        let a_k = [[2.0, 0.5], [11.0, -1.0], [-2.5, 2.0], [1.0, 1.0]][a1_idx];
        let metric = build_metric(&r.alg, &r.dec, 1.0, &a_k).unwrap();
        let n = r.alg.dim();
        let mut x = vec![0.0; n];
        x[r.dec.k0()[0]] = 0.37;
        let base = certify(&r.alg, &r.dec, &metric.gram, &x, 2.0, 1e-9).unwrap();

        let mut perm: Vec<usize> = (0..n).collect();
        let mut state = seed;
        for i in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (state >> 33) as usize % (i + 1));
        }
        let mut inv = vec![0; n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let map = |blocks: &[Vec<usize>]| blocks.iter().map(|b| b.iter().map(|&i| inv[i]).collect()).collect();
        let dec = ReductiveDecomposition::new(map(&r.dec.k), map(&r.dec.p), n).unwrap();
        let alg = r.alg.permuted(&perm).unwrap();
        let gram = metric.gram.permuted(&perm).unwrap();
        let xp: Vec<f64> = perm.iter().map(|&old| x[old]).collect();
        let moved = certify(&alg, &dec, &gram, &xp, 2.0, 1e-9).unwrap();
        prop_assert!((base.lambda_fit - moved.lambda_fit).abs() < 1e-12);
        prop_assert!((base.residual - moved.residual).abs() < 1e-12);
    }

    #[test]
    fn dualize_is_an_involution(a0 in 0.2f64..5.0, a1 in 0.2f64..5.0, a in 0.2f64..5.0) {
        let case = EmbeddingCase::new(Family::SPK_UK, CaseParams::k(2)).unwrap();
        let r = realize(&case).unwrap();
        let metric = build_metric(&r.alg, &r.dec, a, &[a0, a1]).unwrap();
        let (d1, g1) = dualize(&r.alg, &r.dec, &metric.gram).unwrap();
        let (d2, g2) = dualize(&d1, &r.dec, &g1).unwrap();
        prop_assert_eq!(d2.structure(), r.alg.structure());
        prop_assert_eq!(g2.matrix(), metric.gram.matrix());
    }
}

#[test]
fn one_ideal_root_ordering() {
    for case in one_ideal_cases() {
        let b = lorentz_branches_r1(&case).unwrap();
        assert!(b.x1 < b.x2, "{}", case.id);
        assert!(b.x2 > Surd::one(), "{}", case.id);
        if let Some((lo, hi)) = interval_r1(&case).unwrap() {
            assert_eq!(hi, int(1));
            assert!(b.x1 < Surd::from_rational(lo.clone()), "{}", case.id);
            assert!(b.ordering_holds, "{}", case.id);
        }
    }
}

#[test]
fn dual_killing_sign_pattern() {
    for case in list_cases(3).into_iter().filter(|c| c.realizable) {
        let r = realize(&case).unwrap();
        let n = r.alg.dim();
        let (dual, _) = dualize(&r.alg, &r.dec, &qem_core::Gram::identity(n)).unwrap();
        let b = r.alg.killing_form();
        let bd = dual.killing_form();
        let in_p = r.dec.is_p_mask();
        let expected = DMatrix::from_fn(n, n, |i, j| match (in_p[i], in_p[j]) {
            (true, true) => -b[(i, j)],
            (false, false) => b[(i, j)],
            _ => 0.0,
        });
        assert!((bd - expected).amax() < 1e-10, "{}", case.id);
        assert!(
            dual.jacobi_residual() <= 10.0 * r.alg.jacobi_residual() + 1e-14,
            "{}",
            case.id
        );
    }
}

#[test]
fn killing_form_is_ad_invariant_on_realizations() {
    for case in list_cases(4).into_iter().filter(|c| c.realizable) {
        let r = realize(&case).unwrap();
        let b = r.alg.killing_form();
        for i in 0..r.alg.dim() {
            let ad = r.alg.ad_basis(i);
            let t = ad.transpose() * &b + &b * &ad;
            assert!(t.amax() < 1e-10, "{} e{i}", case.id);
        }
    }
}

#[test]
fn su4_dual_signature() {
    let case = EmbeddingCase::new(Family::SU_L1L2, CaseParams::l(2, 2)).unwrap();
    let cert = qem_core::certify_dual(&case, &int(-1), 2.0, qem_core::verifier::DUAL_TOL).unwrap();
    assert!(cert.pass, "residual {:e}", cert.residual);
    assert_eq!((cert.signature.positive, cert.signature.negative), (1, 14));
}
