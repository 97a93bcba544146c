use pbwlab_core::drinfeld::*;
use pbwlab_core::group::{FiniteGroup, Representation};
use pbwlab_core::linear::{FieldSpec, Matrix, Scalar};
use pbwlab_core::oracle::{oracle_dims, pbw_oracle_verdict, OracleVerdict};
use pbwlab_core::pbw::{check_conditions, Condition, ConditionVerdict};
use pbwlab_core::skew::SkewAlgebra;
use pbwlab_core::Error;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const Q: FieldSpec = FieldSpec::Rationals;

fn diag_z2(f: FieldSpec, signs: &[i64]) -> Representation {
    let n = signs.len();
    let mut m = Matrix::identity(f, n);
    for (i, &s) in signs.iter().enumerate() {
        m.set(i, i, f.from_i64(s));
    }
    Representation::new(FiniteGroup::cyclic(2), vec![Matrix::identity(f, n), m]).unwrap()
}

/// κ^C supported at one group element, given by its entries above the diagonal.
fn constant_at(rep: &Representation, g: usize, upper: &[((usize, usize), i64)]) -> KappaParam {
    let f = rep.field();
    let n = rep.dim();
    let mut kc = vec![vec![vec![f.zero(); n]; n]; rep.group().order()];
    for &((i, j), c) in upper {
        kc[g][i][j] = f.from_i64(c);
        kc[g][j][i] = f.from_i64(-c);
    }
    KappaParam::constant(rep.clone(), kc).unwrap()
}

/// κ^L at the identity of the trivial group from a bracket on basis pairs `i < j`.
fn lie(f: FieldSpec, n: usize, bracket: &[((usize, usize), &[i64])]) -> KappaParam {
    let rep = Representation::trivial(FiniteGroup::trivial(), f, n);
    let mut kl = vec![vec![vec![vec![f.zero(); n]; n]; n]; 1];
    for &((i, j), v) in bracket {
        kl[0][i][j] = v.iter().map(|&x| f.from_i64(x)).collect();
        kl[0][j][i] = v.iter().map(|&x| f.from_i64(-x)).collect();
    }
    KappaParam::new(rep, vec![vec![vec![f.zero(); n]; n]], kl).unwrap()
}

fn corpus() -> Vec<Representation> {
    vec![
        Representation::trivial(FiniteGroup::trivial(), Q, 2),
        Representation::trivial(FiniteGroup::cyclic(3), FieldSpec::Prime(5), 3),
        Representation::sign(Q, 2),
        Representation::sign(FieldSpec::Prime(3), 3),
        Representation::cyclic_jordan(FieldSpec::Prime(3), 3).unwrap(),
        Representation::cyclic_jordan(FieldSpec::Prime(5), 5).unwrap(),
        Representation::permutation3(Q),
        Representation::permutation3(FieldSpec::Prime(3)),
    ]
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn oracle(kappa: &KappaParam, max_degree: usize, gen_cap: usize) -> OracleVerdict {
    let alg = SkewAlgebra::new(kappa.rep().clone());
    pbw_oracle_verdict(&alg, &kappa_relations(kappa), max_degree, gen_cap).unwrap().verdict
}

fn expected_condition(bullet: u8) -> Condition {
    match bullet {
        2 => Condition::Image,
        3 => Condition::Alpha,
        4 => Condition::Beta,
        b => panic!("bullet {b} has no counterpart"),
    }
}

/// Verdicts of the four explicit conditions and of the general checker must match,
/// with the identities 2, 3, 4 corresponding to (i), (ii), (iii).
fn assert_specialization(kappa: &KappaParam) {
    let verdict = kappa_verdict(kappa).unwrap();
    match (&verdict, to_presentation(kappa)) {
        (KappaVerdict::Fails { bullet: 1, .. }, Err(e)) => {
            assert!(matches!(e, Error::NotEquivariant(_)), "{e:?}")
        }
        (_, Ok(pres)) => {
            let general = check_conditions(&pres).unwrap();
            match (&verdict, &general) {
                (KappaVerdict::Pbw, ConditionVerdict::Pbw) => {}
                (KappaVerdict::Fails { bullet, .. }, ConditionVerdict::Fails { condition, .. }) => {
                    assert_eq!(*condition, expected_condition(*bullet))
                }
                other => panic!("verdicts differ: {other:?}"),
            }
        }
        other => panic!("unexpected pair {other:?}"),
    }
}

#[test]
fn zero_kappa_gives_skew_group_algebra_of_polynomials() {
    for rep in corpus() {
        let kappa = KappaParam::zero(rep.clone()).unwrap();
        assert_eq!(kappa_verdict(&kappa).unwrap(), KappaVerdict::Pbw);
        let pres = to_presentation(&kappa).unwrap();
        assert!(pres.alpha_images().iter().flatten().all(Scalar::is_zero));
        assert!(pres.beta_images().iter().flatten().all(Scalar::is_zero));
        assert_eq!(check_conditions(&pres).unwrap(), ConditionVerdict::Pbw);
        let (n, order) = (rep.dim(), rep.group().order());
        let expected: Vec<usize> = (0..=3)
            .map(|m| order * (0..=m).map(|d| binomial(n + d - 1, d)).sum::<usize>())
            .collect();
        let alg = SkewAlgebra::new(rep);
        let dims = oracle_dims(&alg, &kappa_relations(&kappa), 3, 5).unwrap();
        assert_eq!(dims.filtered, expected);
    }
}

#[test]
fn symplectic_reflection_instance() {
    for f in [Q, FieldSpec::Prime(3), FieldSpec::Prime(5)] {
        let kappa = constant_at(&Representation::sign(f, 2), 1, &[((0, 1), 1)]);
        assert_eq!(check_invariance(&kappa), None);
        assert_eq!(check_condition2(&kappa), None);
        assert_eq!(check_condition3(&kappa), None);
        assert_eq!(check_condition4(&kappa), None);
        assert_eq!(kappa_verdict(&kappa).unwrap(), KappaVerdict::Pbw);
        assert_eq!(corollary_verdict(&kappa).unwrap(), KappaVerdict::Pbw);
        let pres = to_presentation(&kappa).unwrap();
        assert_eq!(pres.beta_images(), &[vec![f.zero(), f.one()]]);
        assert_eq!(check_conditions(&pres).unwrap(), ConditionVerdict::Pbw);
    }
    let kappa = constant_at(&Representation::sign(Q, 2), 1, &[((0, 1), 1)]);
    assert_eq!(oracle(&kappa, 4, 7), OracleVerdict::PbwUpTo { max_degree: 4 });
}

#[test]
fn non_invariant_form_fails_first_condition() {
    // g = diag(1,-1): κ_g(^g v1, ^g v2) = -κ_g(v1, v2)
    let kappa = constant_at(&diag_z2(Q, &[1, -1]), 1, &[((0, 1), 1)]);
    let w = check_invariance(&kappa).expect("not invariant");
    assert_eq!(w.h, Some(1));
    assert_eq!(kappa_verdict(&kappa).unwrap().bullet(), Some(1));
    assert_eq!(corollary_verdict(&kappa).unwrap().bullet(), Some(1));
    assert!(matches!(to_presentation(&kappa), Err(Error::NotEquivariant(_))));
    assert!(matches!(oracle(&kappa, 3, 6), OracleVerdict::NotPbw(_)));
}

#[test]
fn reflection_with_form_on_fixed_plane_fails() {
    // g = diag(-1,1,1) is a reflection; κ_g(v2, v3) = 1 gives κ_g(v2,v3)(^g v1 - v1) = -2 v1.
    let kappa = constant_at(&diag_z2(Q, &[-1, 1, 1]), 1, &[((1, 2), 1)]);
    assert_eq!(check_invariance(&kappa), None);
    let verdict = corollary_verdict(&kappa).unwrap();
    assert_eq!(verdict, kappa_verdict(&kappa).unwrap());
    assert_eq!(
        verdict,
        KappaVerdict::Fails {
            bullet: 3,
            witness: KappaWitness { g: 1, h: None, basis: vec![0, 1, 2] }
        }
    );
    assert_specialization(&kappa);
    match oracle(&kappa, 3, 6) {
        OracleVerdict::NotPbw(w) => assert_eq!(w.source_degree, 3),
        other => panic!("{other:?}"),
    }
    // the form on the (-1)-eigenplane is fine
    let kappa = constant_at(&diag_z2(Q, &[-1, -1, 1]), 1, &[((0, 1), 1)]);
    assert_eq!(kappa_verdict(&kappa).unwrap(), KappaVerdict::Pbw);
    assert_specialization(&kappa);
}

#[test]
fn lie_brackets() {
    // [x,y] = x
    let kappa = lie(Q, 2, &[((0, 1), &[1, 0])]);
    assert_eq!(kappa_verdict(&kappa).unwrap(), KappaVerdict::Pbw);
    assert_specialization(&kappa);
    // so(3): [x,y]=z, [y,z]=x, [z,x]=y
    let kappa = lie(Q, 3, &[((0, 1), &[0, 0, 1]), ((1, 2), &[1, 0, 0]), ((0, 2), &[0, -1, 0])]);
    assert_eq!(kappa_verdict(&kappa).unwrap(), KappaVerdict::Pbw);
    assert_specialization(&kappa);
    let pres = to_presentation(&kappa).unwrap();
    assert!(pres.beta_images().iter().flatten().all(Scalar::is_zero));
    assert_eq!(oracle(&kappa, 3, 6), OracleVerdict::PbwUpTo { max_degree: 3 });
}

/// `[x,y]=x, [y,z]=y, [z,x]=z` as a table on basis indices.
fn bad_bracket(a: usize, b: usize) -> [i64; 3] {
    let mut v = [0; 3];
    match (a, b) {
        (0, 1) => v[0] = 1,
        (1, 0) => v[0] = -1,
        (1, 2) => v[1] = 1,
        (2, 1) => v[1] = -1,
        (2, 0) => v[2] = 1,
        (0, 2) => v[2] = -1,
        _ => {}
    }
    v
}

fn bracket_vec(u: [i64; 3], b: usize) -> [i64; 3] {
    let mut out = [0; 3];
    for (a, &c) in u.iter().enumerate() {
        for (k, x) in bad_bracket(a, b).iter().enumerate() {
            out[k] += c * x;
        }
    }
    out
}

#[test]
fn non_jacobi_bracket_fails_third_condition() {
    // Jacobiator [[x,y],z] + [[y,z],x] + [[z,x],y], by table lookup
    let mut jac = [0i64; 3];
    for (a, b, c) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
        for (j, x) in jac.iter_mut().zip(bracket_vec(bad_bracket(a, b), c)) {
            *j += x;
        }
    }
    assert_eq!(jac, [-1, -1, -1]);

    let kappa = lie(Q, 3, &[((0, 1), &[1, 0, 0]), ((1, 2), &[0, 1, 0]), ((0, 2), &[0, 0, -1])]);
    let e = |i: usize| (0..3).map(|k| Q.from_i64(i64::from(k == i))).collect::<Vec<_>>();
    let (x, y, z) = (e(0), e(1), e(2));
    // with trivial G the left side is 2 Σ [v_σ1, [v_σ2, v_σ3]] = -2 · Jacobiator
    let expected: Vec<Scalar> = jac.iter().map(|&j| Q.from_i64(-2 * j)).collect();
    assert_eq!(condition3_value(&kappa, 0, [&x, &y, &z]), expected);
    assert_eq!(check_condition2(&kappa), None);
    assert_eq!(kappa_verdict(&kappa).unwrap().bullet(), Some(3));
    assert_specialization(&kappa);
    match oracle(&kappa, 3, 6) {
        OracleVerdict::NotPbw(w) => assert_eq!(w.source_degree, 3),
        other => panic!("{other:?}"),
    }
}

#[test]
fn corollary_rejects_linear_part() {
    let kappa = lie(Q, 2, &[((0, 1), &[1, 0])]);
    assert_eq!(corollary_verdict(&kappa).unwrap_err(), Error::NotConstantKappa);
}

#[test]
fn modular_jordan_block_constant_kappa() {
    for p in [3u32, 5] {
        let f = FieldSpec::Prime(p);
        let rep = Representation::cyclic_jordan(f, p as usize).unwrap();
        let upper: Vec<_> = (1..p as usize).map(|g| (g, ((0, 1), g as i64))).collect();
        let mut kappa = KappaParam::zero(rep.clone()).unwrap();
        for (g, pair) in upper {
            let mut kc: Vec<Vec<Vec<Scalar>>> = (0..p as usize).map(|h| kappa.kc(h).to_vec()).collect();
            kc[g] = constant_at(&rep, g, &[pair]).kc(g).to_vec();
            kappa = KappaParam::constant(rep.clone(), kc).unwrap();
        }
        assert_eq!(corollary_verdict(&kappa).unwrap(), KappaVerdict::Pbw);
        assert_eq!(kappa_verdict(&kappa).unwrap(), KappaVerdict::Pbw);
        assert_specialization(&kappa);
        assert_eq!(oracle(&kappa, 3, 6), OracleVerdict::PbwUpTo { max_degree: 3 });
    }
}

fn random_vec(f: FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> Vec<Scalar> {
    (0..n).map(|_| f.random(rng)).collect()
}

fn field_of(i: u8) -> FieldSpec {
    [Q, FieldSpec::Prime(3), FieldSpec::Prime(5), FieldSpec::Prime(7)][i as usize % 4]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn kappa_is_alternating(seed in any::<u64>(), fi in 0u8..4) {
        let f = field_of(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kappa = KappaParam::random(Representation::permutation3(f), &mut rng, true).unwrap();
        let (u, w) = (random_vec(f, 3, &mut rng), random_vec(f, 3, &mut rng));
        for g in 0..6 {
            prop_assert_eq!(kappa.eval_c(g, &u, &w), -kappa.eval_c(g, &w, &u));
            let neg: Vec<Scalar> = kappa.eval_l(g, &w, &u).iter().map(|x| -x).collect();
            prop_assert_eq!(kappa.eval_l(g, &u, &w), neg);
            prop_assert!(kappa.eval_c(g, &u, &u).is_zero());
        }
    }

    #[test]
    fn conditions_are_multilinear(seed in any::<u64>(), fi in 0u8..4, slot in 0usize..3) {
        let f = field_of(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = Representation::permutation3(f);
        let kappa = KappaParam::random(rep, &mut rng, true).unwrap();
        let v: Vec<Vec<Scalar>> = (0..3).map(|_| random_vec(f, 3, &mut rng)).collect();
        let extra = random_vec(f, 3, &mut rng);
        let c = f.random(&mut rng);
        let mut combined = v.clone();
        combined[slot] = v[slot].iter().zip(&extra).map(|(a, b)| &(&c * a) + b).collect();
        let mut other = v.clone();
        other[slot] = extra;
        let args = |x: &Vec<Vec<Scalar>>| -> [Vec<Scalar>; 3] { [x[0].clone(), x[1].clone(), x[2].clone()] };
        let [a0, a1, a2] = args(&v);
        let [b0, b1, b2] = args(&other);
        let [c0, c1, c2] = args(&combined);
        let lin = |x: Vec<Scalar>, y: Vec<Scalar>| -> Vec<Scalar> {
            x.iter().zip(&y).map(|(p, q)| &(&c * p) + q).collect()
        };
        for g in 0..6 {
            prop_assert_eq!(
                condition2_value(&kappa, g, [&c0, &c1, &c2]),
                lin(condition2_value(&kappa, g, [&a0, &a1, &a2]), condition2_value(&kappa, g, [&b0, &b1, &b2]))
            );
            prop_assert_eq!(
                condition3_value(&kappa, g, [&c0, &c1, &c2]),
                lin(condition3_value(&kappa, g, [&a0, &a1, &a2]), condition3_value(&kappa, g, [&b0, &b1, &b2]))
            );
            prop_assert_eq!(
                condition4_value(&kappa, g, [&c0, &c1, &c2]),
                &(&c * &condition4_value(&kappa, g, [&a0, &a1, &a2])) + &condition4_value(&kappa, g, [&b0, &b1, &b2])
            );
        }
    }

    #[test]
    fn proposition_specializes_general_conditions(seed in any::<u64>(), fi in 0u8..4, n in 2usize..4) {
        let f = field_of(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // invariant by construction: trivial action, or -id with κ^L = 0
        let lie_kappa = KappaParam::random(Representation::trivial(FiniteGroup::trivial(), f, n), &mut rng, true).unwrap();
        let sign_kappa = KappaParam::random(Representation::sign(f, n), &mut rng, false).unwrap();
        for kappa in [lie_kappa, sign_kappa] {
            assert_specialization(&kappa);
        }
    }

    #[test]
    fn reweighting_preserves_verdict(seed in any::<u64>(), fi in 0u8..4, c in 1i64..6) {
        let f = field_of(fi);
        let c = f.from_i64(c);
        prop_assume!(!c.is_zero());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for rep in [Representation::trivial(FiniteGroup::cyclic(2), f, 3), Representation::sign(f, 3)] {
            let kappa = KappaParam::random(rep, &mut rng, true).unwrap();
            let scaled = kappa.reweighted(&c, &(&c * &c));
            let (a, b) = (kappa_verdict(&kappa).unwrap(), kappa_verdict(&scaled).unwrap());
            prop_assert_eq!(a.bullet(), b.bullet());
        }
    }

    #[test]
    fn corollary_agrees_with_proposition(seed in any::<u64>(), fi in 0u8..4, which in 0usize..4) {
        let f = field_of(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rep = match which {
            0 => Representation::sign(f, 3),
            1 => diag_z2(f, &[-1, 1, 1]),
            2 => Representation::permutation3(f),
            _ => Representation::trivial(FiniteGroup::cyclic(3), f, 3),
        };
        let kappa = KappaParam::random(rep, &mut rng, false).unwrap();
        prop_assert_eq!(corollary_verdict(&kappa).unwrap().bullet(), kappa_verdict(&kappa).unwrap().bullet());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn verdict_is_consistent_with_oracle(seed in any::<u64>(), fi in 1u8..4) {
        let f = field_of(fi);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let kappa = KappaParam::random(Representation::trivial(FiniteGroup::trivial(), f, 3), &mut rng, true).unwrap();
        let verdict = kappa_verdict(&kappa).unwrap();
        match oracle(&kappa, 3, 6) {
            OracleVerdict::NotPbw(w) => {
                prop_assert!(!verdict.is_pbw());
                prop_assert_eq!(w.source_degree, 3);
            }
            OracleVerdict::PbwUpTo { .. } => prop_assert!(verdict.is_pbw()),
            OracleVerdict::Inconclusive => prop_assert!(verdict.is_pbw()),
        }
    }
}
