use pbwlab_core::group::{FiniteGroup, Representation};
use pbwlab_core::linear::{FieldSpec, Scalar, Subspace};
use pbwlab_core::oracle::{element_from, pbw_oracle_verdict, OracleVerdict};
use pbwlab_core::pbw::*;
use pbwlab_core::skew::{SkewAlgebra, SkewElement};
use pbwlab_core::Error;
use proptest::prelude::*;

fn q() -> FieldSpec {
    FieldSpec::Rationals
}

fn trivial_rep(f: FieldSpec, n: usize) -> Representation {
    Representation::trivial(FiniteGroup::trivial(), f, n)
}

fn vec_of(f: FieldSpec, xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| f.from_i64(x)).collect()
}

fn unit(f: FieldSpec, n: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![f.zero(); n];
    v[i] = f.one();
    v
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[test]
fn koszul_components_of_polynomial_rings() {
    for n in [2, 3] {
        let hom = HomQuadraticPresentation::new(trivial_rep(q(), n), symmetric_relations(q(), n)).unwrap();
        for k in 0..=4 {
            assert_eq!(koszul_component(&hom, k).dim(), binomial(n, k), "dim V = {n}, K^{k}");
        }
    }
}

#[test]
fn top_koszul_component_is_the_alternating_tensor() {
    let hom = HomQuadraticPresentation::new(trivial_rep(q(), 3), symmetric_relations(q(), 3)).unwrap();
    let k3 = koszul_component(&hom, 3);
    // Σ_σ sgn(σ) v_σ(0) v_σ(1) v_σ(2), written out by hand.
    let mut alt = vec![q().zero(); 27];
    for (p, s) in [([0, 1, 2], 1), ([1, 2, 0], 1), ([2, 0, 1], 1), ([0, 2, 1], -1), ([2, 1, 0], -1), ([1, 0, 2], -1)] {
        alt[p[0] * 9 + p[1] * 3 + p[2]] = q().from_i64(s);
    }
    assert_eq!(k3, Subspace::span(q(), 27, vec![alt]).unwrap());
}

#[test]
fn koszul_components_nest() {
    for rprime in [symmetric_relations(q(), 2), Subspace::full(q(), 4), Subspace::span(q(), 4, vec![vec_of(q(), &[0, 1, 0, 0])]).unwrap()] {
        let hom = HomQuadraticPresentation::new(trivial_rep(q(), 2), rprime).unwrap();
        let k2 = koszul_component(&hom, 2);
        let k3 = koszul_component(&hom, 3);
        // (K²⊗V) ∩ (V⊗K²) = K³
        let left = Subspace::span(q(), 8, tensor_right(&k2)).unwrap();
        let right = Subspace::span(q(), 8, tensor_left(&k2)).unwrap();
        assert_eq!(left.intersect(&right).unwrap(), k3);
        let k4 = koszul_component(&hom, 4);
        let k3v = Subspace::span(q(), 16, tensor_right_n(&k3, 2)).unwrap();
        assert!(k3v.contains_subspace(&k4));
    }
}

fn tensor_right(k: &Subspace) -> Vec<Vec<Scalar>> {
    tensor_right_n(k, 2)
}

fn tensor_right_n(k: &Subspace, n: usize) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for y in k.basis_vectors() {
        for c in 0..n {
            let mut v = vec![q().zero(); y.len() * n];
            for (i, x) in y.iter().enumerate() {
                v[i * n + c] = x.clone();
            }
            out.push(v);
        }
    }
    out
}

fn tensor_left(k: &Subspace) -> Vec<Vec<Scalar>> {
    let mut out = Vec::new();
    for y in k.basis_vectors() {
        for a in 0..2 {
            let mut v = vec![q().zero(); y.len() * 2];
            for (i, x) in y.iter().enumerate() {
                v[a * y.len() + i] = x.clone();
            }
            out.push(v);
        }
    }
    out
}

#[test]
fn full_relations_give_full_components() {
    let hom = HomQuadraticPresentation::new(trivial_rep(q(), 2), Subspace::full(q(), 4)).unwrap();
    for n in 0..=4 {
        assert_eq!(koszul_component(&hom, n).dim(), 1 << n);
    }
}

#[test]
fn koszul_checks() {
    for rprime in [
        symmetric_relations(q(), 2),
        symmetric_relations(q(), 3),
        Subspace::full(q(), 4),
        Subspace::span(q(), 4, vec![vec_of(q(), &[0, 1, 0, 0])]).unwrap(),
    ] {
        let n = (rprime.ambient_dim() as f64).sqrt() as usize;
        let hom = HomQuadraticPresentation::new(trivial_rep(q(), n), rprime).unwrap();
        let report = koszul_check(&hom, 4, 6);
        assert!(report.exact, "{report:?}");
    }
}

#[test]
fn polynomial_ring_modulo_a_square_is_koszul() {
    // k[x,y]/(x²)
    let f = q();
    let rprime = Subspace::span(f, 4, vec![vec_of(f, &[0, 1, -1, 0]), vec_of(f, &[1, 0, 0, 0])]).unwrap();
    let hom = HomQuadraticPresentation::new(trivial_rep(f, 2), rprime).unwrap();
    assert!(koszul_check(&hom, 4, 6).exact);
}

/// x = 0, y = 1, G trivial.
fn idempotent_relations_raw(f: FieldSpec, with_squares: bool) -> (Representation, Subspace) {
    let rep = trivial_rep(f, 2);
    let alg = SkewAlgebra::new(rep.clone());
    let mut p = vec![
        element_from(&alg, &[(&[0, 1], 0, 1), (&[0], 0, -1)]),
        element_from(&alg, &[(&[1, 0], 0, 1), (&[1], 0, -1)]),
    ];
    if with_squares {
        p.push(element_from(&alg, &[(&[0, 0], 0, 1), (&[0], 0, -1)]));
        p.push(element_from(&alg, &[(&[1, 1], 0, 1), (&[1], 0, -1)]));
    }
    let piece = alg.piece(2);
    let vecs = p.iter().map(|x| piece.to_dense(f, x)).collect();
    (rep, Subspace::span(f, piece.dim(), vecs).unwrap())
}

#[test]
fn normalizing_the_four_relations() {
    let (rep, raw) = idempotent_relations_raw(q(), true);
    let pres = normalize_relations(&rep, &raw, KoszulStatus::Asserted).unwrap();
    assert_eq!(pres.hom.rprime, Subspace::full(q(), 4));
    // α(xy) = x, α(yx) = y, α(x²) = x, α(y²) = y; β = 0.
    let x = unit(q(), 2, 0);
    let y = unit(q(), 2, 1);
    assert_eq!(pres.alpha(&unit(q(), 4, 1)).unwrap(), x);
    assert_eq!(pres.alpha(&unit(q(), 4, 2)).unwrap(), y);
    assert_eq!(pres.alpha(&unit(q(), 4, 0)).unwrap(), x);
    assert_eq!(pres.alpha(&unit(q(), 4, 3)).unwrap(), y);
    for i in 0..4 {
        assert_eq!(pres.beta(&unit(q(), 4, i)).unwrap(), vec![q().zero()]);
    }
    assert_eq!(pres.relation_space(), raw);
}

#[test]
fn homogeneous_relations_normalize_to_zero_maps() {
    let f = q();
    let rep = trivial_rep(f, 2);
    let raw = Subspace::span(f, 7, vec![vec_of(f, &[0, 0, 0, 0, 1, -1, 0])]).unwrap();
    let pres = normalize_relations(&rep, &raw, KoszulStatus::Asserted).unwrap();
    assert!(pres.alpha_images().iter().flatten().all(Scalar::is_zero));
    assert!(pres.beta_images().iter().flatten().all(Scalar::is_zero));
}

#[test]
fn degree_one_relation_violates_condition_capital_i() {
    let f = q();
    let rep = trivial_rep(f, 2);
    // x − y
    let raw = Subspace::span(f, 7, vec![vec_of(f, &[0, 1, -1, 0, 0, 0, 0])]).unwrap();
    let err = normalize_relations(&rep, &raw, KoszulStatus::Asserted).unwrap_err();
    assert!(matches!(err, Error::ConditionIFails { .. }));
}

#[test]
fn overlap_spaces() {
    let f = q();
    let cases = [
        (symmetric_relations(f, 2), 0),
        (Subspace::full(f, 4), 8),
        (Subspace::zero(f, 4), 0),
        (symmetric_relations(f, 3), 1),
    ];
    for (rprime, expected) in cases {
        let n = (rprime.ambient_dim() as f64).sqrt() as usize;
        let hom = HomQuadraticPresentation::new(trivial_rep(f, n), rprime.clone()).unwrap();
        let pres = FilteredQuadraticPresentation::homogeneous(hom, KoszulStatus::Asserted).unwrap();
        let w = overlap_space(&pres);
        // Independent computation: intersect R'⊗V and V⊗R' directly.
        let n3 = n * n * n;
        let mut left = Vec::new();
        let mut right = Vec::new();
        for r in rprime.basis_vectors() {
            for c in 0..n {
                let mut v = vec![f.zero(); n3];
                let mut u = vec![f.zero(); n3];
                for (i, x) in r.iter().enumerate() {
                    v[i * n + c] = x.clone();
                    u[c * n * n + i] = x.clone();
                }
                left.push(v);
                right.push(u);
            }
        }
        let direct = Subspace::span(f, n3, left)
            .unwrap()
            .intersect(&Subspace::span(f, n3, right).unwrap())
            .unwrap();
        assert_eq!(w, direct);
        assert_eq!(w.dim(), expected);
    }
}

#[test]
fn four_relations_are_pbw_two_are_not() {
    let (rep, raw) = idempotent_relations_raw(q(), true);
    let pres = normalize_relations(&rep, &raw, KoszulStatus::Asserted).unwrap();
    assert_eq!(check_conditions(&pres).unwrap(), ConditionVerdict::Pbw);
    assert!(condition_j_holds(&pres, 4).unwrap());

    let (rep, raw) = idempotent_relations_raw(q(), false);
    let pres = normalize_relations(&rep, &raw, KoszulStatus::Asserted).unwrap();
    match check_conditions(&pres).unwrap() {
        // On xyx: α(xy)x − xα(yx) = x² − xy, and x² ∉ R'.
        ConditionVerdict::Fails { condition, .. } => assert_eq!(condition, Condition::Image),
        ConditionVerdict::Pbw => panic!("the two-relation presentation is not PBW"),
    }
    assert!(!condition_j_holds(&pres, 3).unwrap());
}

#[test]
fn koszulity_must_be_known() {
    let hom = HomQuadraticPresentation::new(trivial_rep(q(), 2), symmetric_relations(q(), 2)).unwrap();
    let pres = FilteredQuadraticPresentation::homogeneous(hom, KoszulStatus::Unknown).unwrap();
    assert_eq!(check_conditions(&pres), Err(Error::NotKoszulCertified));
    let (pres, report) = certify_koszul(pres, 3, 5);
    assert!(report.exact);
    assert_eq!(check_conditions(&pres).unwrap(), ConditionVerdict::Pbw);
}

/// G trivial, V = span{x, y, z}, R' = commutators, α from the bracket
/// [x,y] = x, [y,z] = y, [z,x] = z.
fn non_jacobi() -> FilteredQuadraticPresentation {
    let f = q();
    let hom = HomQuadraticPresentation::new(trivial_rep(f, 3), symmetric_relations(f, 3)).unwrap();
    let comm = |i: usize, j: usize| {
        let mut v = vec![f.zero(); 9];
        v[i * 3 + j] = f.one();
        v[j * 3 + i] = f.from_i64(-1);
        v
    };
    let basis = vec![comm(0, 1), comm(1, 2), comm(2, 0)];
    let alpha = vec![unit(f, 3, 0), unit(f, 3, 1), unit(f, 3, 2)];
    let beta = vec![vec![f.zero()]; 3];
    FilteredQuadraticPresentation::new(hom, basis, alpha, beta, KoszulStatus::Asserted).unwrap()
}

#[test]
fn jacobiator_by_hand() {
    // Brute force: [[x,y],z] + [[y,z],x] + [[z,x],y] with the bracket table.
    let br = |a: usize, b: usize| -> [i64; 3] {
        let mut out = [0; 3];
        match (a, b) {
            (0, 1) => out[0] = 1,
            (1, 0) => out[0] = -1,
            (1, 2) => out[1] = 1,
            (2, 1) => out[1] = -1,
            (2, 0) => out[2] = 1,
            (0, 2) => out[2] = -1,
            _ => {}
        }
        out
    };
    let bracket_vec = |u: [i64; 3], c: usize| -> [i64; 3] {
        let mut out = [0; 3];
        for (i, &ui) in u.iter().enumerate() {
            let b = br(i, c);
            for k in 0..3 {
                out[k] += ui * b[k];
            }
        }
        out
    };
    let mut jac = [0; 3];
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        let t = bracket_vec(br(a, b), c);
        for k in 0..3 {
            jac[k] += t[k];
        }
    }
    assert_eq!(jac, [-1, -1, -1]);
}

#[test]
fn non_jacobi_bracket_fails_condition_ii() {
    match check_conditions(&non_jacobi()).unwrap() {
        ConditionVerdict::Fails { condition, witness } => {
            assert_eq!(condition, Condition::Alpha);
            assert_eq!(witness.len(), 27);
        }
        ConditionVerdict::Pbw => panic!("bracket violates Jacobi"),
    }
}

/// M₂(ℚ) generated by E12, E21, H = E11 − E22 with R' = V⊗V and α, β read off the
/// matrix products. With `beta_sign = -1` the constant part is negated.
fn matrix_algebra(beta_sign: i64) -> FilteredQuadraticPresentation {
    let f = q();
    let hom = HomQuadraticPresentation::new(trivial_rep(f, 3), Subspace::full(f, 9)).unwrap();
    let half = f.parse_scalar("1/2").unwrap();
    let (e12, e21, h) = (0, 1, 2);
    let mut alpha = vec![vec![f.zero(); 3]; 9];
    let mut beta = vec![vec![f.zero()]; 9];
    let b = |x: Scalar| vec![&x * &f.from_i64(beta_sign)];
    // E12·E21 = E11 = (1 + H)/2, E21·E12 = E22 = (1 − H)/2
    alpha[e12 * 3 + e21][h] = half.clone();
    beta[e12 * 3 + e21] = b(half.clone());
    alpha[e21 * 3 + e12][h] = -&half;
    beta[e21 * 3 + e12] = b(half.clone());
    // E12·H = −E12, H·E12 = E12, E21·H = E21, H·E21 = −E21, H² = 1
    alpha[e12 * 3 + h][e12] = f.from_i64(-1);
    alpha[h * 3 + e12][e12] = f.one();
    alpha[e21 * 3 + h][e21] = f.one();
    alpha[h * 3 + e21][e21] = f.from_i64(-1);
    beta[h * 3 + h] = b(f.one());
    let basis = (0..9).map(|i| unit(f, 9, i)).collect();
    FilteredQuadraticPresentation::new(hom, basis, alpha, beta, KoszulStatus::Asserted).unwrap()
}

#[test]
fn matrix_algebra_is_pbw_and_its_sign_mutant_is_not() {
    assert_eq!(check_conditions(&matrix_algebra(1)).unwrap(), ConditionVerdict::Pbw);
    match check_conditions(&matrix_algebra(-1)).unwrap() {
        ConditionVerdict::Fails { condition, .. } => assert_eq!(condition, Condition::Alpha),
        ConditionVerdict::Pbw => panic!("sign-flipped β must fail"),
    }
    // The oracle agrees: M₂(ℚ) has filtered dims 1, 4, 4, …
    let pres = matrix_algebra(1);
    let report = pbw_oracle_verdict(&pres.skew_algebra(), &pres.relations(), 3, 5).unwrap();
    assert_eq!(report.verdict, OracleVerdict::PbwUpTo { max_degree: 3 });
    assert_eq!(report.filtered, vec![1, 4, 4, 4]);
    let mutant = matrix_algebra(-1);
    let report = pbw_oracle_verdict(&mutant.skew_algebra(), &mutant.relations(), 3, 5).unwrap();
    assert!(matches!(report.verdict, OracleVerdict::NotPbw(_)));
}

#[test]
fn non_equivariant_alpha_is_rejected() {
    let f = q();
    let rep = Representation::sign(f, 2);
    let hom = HomQuadraticPresentation::new(rep.clone(), symmetric_relations(f, 2)).unwrap();
    let basis = hom.rprime.basis_vectors();
    // α(v₁v₂ − v₂v₁) = v₁ ⊗ e, but g = −id forces α = 0.
    let alpha = vec![vec_of(f, &[1, 0, 0, 0])];
    let beta = vec![vec_of(f, &[0, 0])];
    let err = FilteredQuadraticPresentation::new(hom, basis.clone(), alpha, beta, KoszulStatus::Asserted).unwrap_err();
    assert!(matches!(err, Error::NotEquivariant(_)));

    // The raw relation space {x − α(x)} over R'⊗kG is not a bimodule.
    let alg = SkewAlgebra::new(rep.clone());
    let piece = alg.piece(2);
    let r = piece.from_coords(
        basis[0]
            .iter()
            .enumerate()
            .map(|(i, c)| (piece.index(&pbwlab_core::skew::SkewMonomial::new(vec![i / 2, i % 2], 0)), c)),
    );
    let rel = r.sub(&element_from(&alg, &[(&[0], 0, 1)]));
    let vecs = (0..2)
        .map(|h| piece.to_dense(f, &alg.multiply(&rel, &alg.group_element(h))))
        .collect();
    let raw = Subspace::span(f, piece.dim(), vecs).unwrap();
    let err = normalize_relations(&rep, &raw, KoszulStatus::Asserted).unwrap_err();
    assert!(matches!(err, Error::NotBimodule(_)));
}

#[test]
fn uniqueness_of_presentations() {
    let (rep, raw) = idempotent_relations_raw(q(), true);
    let pres = normalize_relations(&rep, &raw, KoszulStatus::Asserted).unwrap();
    let alg = pres.skew_algebra();
    let p = pres.relations();
    assert!(uniqueness_check(&alg, &p, &p).unwrap());
    let scaled: Vec<SkewElement> = p.iter().map(|x| x.scaled(&q().from_i64(-3))).collect();
    assert!(uniqueness_check(&alg, &p, &scaled).unwrap());

    // Weyl algebra over Z/2 acting by −id: xy − yx − 1 versus 2(yx − xy) + 2.
    let weyl = SkewAlgebra::new(Representation::sign(q(), 2));
    let p1 = vec![element_from(&weyl, &[(&[0, 1], 0, 1), (&[1, 0], 0, -1), (&[], 0, -1)])];
    let p2 = vec![element_from(&weyl, &[(&[1, 0], 0, 2), (&[0, 1], 0, -2), (&[], 0, 2)])];
    assert!(uniqueness_check(&weyl, &p1, &p2).unwrap());
    let p3 = vec![element_from(&weyl, &[(&[0, 1], 0, 1), (&[1, 0], 0, -1), (&[], 0, -2)])];
    assert!(!uniqueness_check(&weyl, &p1, &p3).unwrap());
}

fn random_full_presentation(f: FieldSpec, a: &[i64], b: &[i64]) -> FilteredQuadraticPresentation {
    let hom = HomQuadraticPresentation::new(trivial_rep(f, 2), Subspace::full(f, 4)).unwrap();
    let basis = (0..4).map(|i| unit(f, 4, i)).collect();
    let alpha = a.chunks(2).map(|c| vec_of(f, c)).collect();
    let beta = b.iter().map(|&x| vec_of(f, &[x])).collect();
    FilteredQuadraticPresentation::new(hom, basis, alpha, beta, KoszulStatus::Asserted).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    /// Checker and oracle never give definitive opposite answers.
    #[test]
    fn checker_and_oracle_agree(
        a in proptest::collection::vec(-1i64..2, 8),
        b in proptest::collection::vec(-1i64..2, 4),
    ) {
        let f = FieldSpec::Prime(3);
        let pres = random_full_presentation(f, &a, &b);
        let verdict = check_conditions(&pres).unwrap();
        let report = pbw_oracle_verdict(&pres.skew_algebra(), &pres.relations(), 3, 6).unwrap();
        match verdict {
            ConditionVerdict::Pbw => prop_assert!(!matches!(report.verdict, OracleVerdict::NotPbw(_))),
            ConditionVerdict::Fails { .. } => {
                let certified = matches!(report.verdict, OracleVerdict::PbwUpTo { .. });
                prop_assert!(!certified);
            }
        }
    }

    #[test]
    fn normalize_inverts_relation_space(
        a in proptest::collection::vec(-1i64..2, 8),
        b in proptest::collection::vec(-1i64..2, 4),
    ) {
        let f = FieldSpec::Prime(5);
        let pres = random_full_presentation(f, &a, &b);
        let again = normalize_relations(pres.rep(), &pres.relation_space(), KoszulStatus::Asserted).unwrap();
        for i in 0..4 {
            let e = unit(f, 4, i);
            prop_assert_eq!(pres.alpha(&e), again.alpha(&e));
            prop_assert_eq!(pres.beta(&e), again.beta(&e));
        }
    }
}
