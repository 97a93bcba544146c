//! Drinfeld orbifold parameters `κ: V⊗V → kG ⊕ V⊗kG` and the explicit PBW
//! conditions for `H_κ = T(V)#G / ⟨v⊗w − w⊗v − κ(v,w)⟩`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::Representation;
use crate::linear::{FieldSpec, Scalar};
use crate::par::Exec;
use crate::pbw::{symmetric_relations, FilteredQuadraticPresentation, HomQuadraticPresentation, KoszulStatus};
use crate::skew::{SkewElement, SkewMonomial};

/// `κ(v_i, v_j) = Σ_g (κ^C_g(v_i,v_j) + κ^L_g(v_i,v_j)) ⊗ g`.
///
/// `kc[g][i][j]` is a scalar, `kl[g][i][j]` a vector of length `dim V`.
#[derive(Clone, Debug)]
pub struct KappaParam {
    rep: Representation,
    kc: Vec<Vec<Vec<Scalar>>>,
    kl: Vec<Vec<Vec<Vec<Scalar>>>>,
}

impl KappaParam {
    pub fn new(rep: Representation, kc: Vec<Vec<Vec<Scalar>>>, kl: Vec<Vec<Vec<Vec<Scalar>>>>) -> Result<Self> {
        let field = rep.field();
        if field.characteristic() == 2 {
            return Err(Error::CharTwo);
        }
        let n = rep.dim();
        let order = rep.group().order();
        let shape_ok = kc.len() == order
            && kl.len() == order
            && kc.iter().all(|m| m.len() == n && m.iter().all(|r| r.len() == n))
            && kl
                .iter()
                .all(|m| m.len() == n && m.iter().all(|r| r.len() == n && r.iter().all(|v| v.len() == n)));
        if !shape_ok {
            return Err(Error::DimensionMismatch(format!(
                "kappa needs {order} forms of size {n}x{n} (and {n}-vectors for kL)"
            )));
        }
        for g in 0..order {
            for i in 0..n {
                for j in i..n {
                    if !(&kc[g][i][j] + &kc[g][j][i]).is_zero() || (i == j && !kc[g][i][i].is_zero()) {
                        return Err(Error::NotAlternating(format!("kC at g={g}, ({i},{j})")));
                    }
                    let bad = kl[g][i][j]
                        .iter()
                        .zip(&kl[g][j][i])
                        .any(|(a, b)| !(a + b).is_zero() || (i == j && !a.is_zero()));
                    if bad {
                        return Err(Error::NotAlternating(format!("kL at g={g}, ({i},{j})")));
                    }
                }
            }
        }
        Ok(KappaParam { rep, kc, kl })
    }

    pub fn zero(rep: Representation) -> Result<Self> {
        let (n, order, z) = (rep.dim(), rep.group().order(), rep.field().zero());
        let kc = vec![vec![vec![z.clone(); n]; n]; order];
        let kl = vec![vec![vec![vec![z; n]; n]; n]; order];
        Self::new(rep, kc, kl)
    }

    /// `κ` with `κ^L ≡ 0`.
    pub fn constant(rep: Representation, kc: Vec<Vec<Vec<Scalar>>>) -> Result<Self> {
        let (n, order, z) = (rep.dim(), rep.group().order(), rep.field().zero());
        Self::new(rep, kc, vec![vec![vec![vec![z; n]; n]; n]; order])
    }

    /// Entries above the diagonal drawn uniformly from the field; `κ^L` only if `linear`.
    pub fn random<R: Rng + ?Sized>(rep: Representation, rng: &mut R, linear: bool) -> Result<Self> {
        let field = rep.field();
        let (n, order) = (rep.dim(), rep.group().order());
        let mut kc = vec![vec![vec![field.zero(); n]; n]; order];
        let mut kl = vec![vec![vec![vec![field.zero(); n]; n]; n]; order];
        for g in 0..order {
            for i in 0..n {
                for j in i + 1..n {
                    let c = field.random(rng);
                    kc[g][j][i] = -&c;
                    kc[g][i][j] = c;
                    if linear {
                        for k in 0..n {
                            let c = field.random(rng);
                            kl[g][j][i][k] = -&c;
                            kl[g][i][j][k] = c;
                        }
                    }
                }
            }
        }
        Self::new(rep, kc, kl)
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn field(&self) -> FieldSpec {
        self.rep.field()
    }

    pub fn dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn kc(&self, g: usize) -> &[Vec<Scalar>] {
        &self.kc[g]
    }

    pub fn kl(&self, g: usize) -> &[Vec<Vec<Scalar>>] {
        &self.kl[g]
    }

    pub fn is_constant(&self) -> bool {
        self.kl.iter().flatten().flatten().flatten().all(Scalar::is_zero)
    }

    /// `(κ^L, κ^C) ↦ (a κ^L, b κ^C)`.
    pub fn reweighted(&self, a: &Scalar, b: &Scalar) -> Self {
        let kc = self
            .kc
            .iter()
            .map(|m| m.iter().map(|r| r.iter().map(|x| x * b).collect()).collect())
            .collect();
        let kl = self
            .kl
            .iter()
            .map(|m| {
                m.iter()
                    .map(|r| r.iter().map(|v| v.iter().map(|x| x * a).collect()).collect())
                    .collect()
            })
            .collect();
        KappaParam {
            rep: self.rep.clone(),
            kc,
            kl,
        }
    }

    /// `κ^C_g(u, w)` for arbitrary vectors.
    pub fn eval_c(&self, g: usize, u: &[Scalar], w: &[Scalar]) -> Scalar {
        let mut out = self.field().zero();
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in w.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                out += &(&(a * b) * &self.kc[g][i][j]);
            }
        }
        out
    }

    /// `κ^L_g(u, w)` for arbitrary vectors.
    pub fn eval_l(&self, g: usize, u: &[Scalar], w: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field().zero(); self.dim()];
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in w.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                let ab = a * b;
                for (o, x) in out.iter_mut().zip(&self.kl[g][i][j]) {
                    *o += &(&ab * x);
                }
            }
        }
        out
    }

    fn basis_vec(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![self.field().zero(); self.dim()];
        v[i] = self.field().one();
        v
    }

    fn act(&self, g: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.rep.matrix(g).apply(v)
    }
}

/// Where a condition fails: group element `g` (and `h` for invariance) and basis indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KappaWitness {
    pub g: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub h: Option<usize>,
    pub basis: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum KappaVerdict {
    Pbw,
    /// `bullet` numbers the conditions 1–4: invariance, then the three identities.
    Fails { bullet: u8, witness: KappaWitness },
}

impl KappaVerdict {
    pub fn is_pbw(&self) -> bool {
        matches!(self, KappaVerdict::Pbw)
    }

    pub fn bullet(&self) -> Option<u8> {
        match self {
            KappaVerdict::Pbw => None,
            KappaVerdict::Fails { bullet, .. } => Some(*bullet),
        }
    }
}

fn first_failure<F>(items: Vec<KappaWitness>, exec: Exec, holds: F) -> Option<KappaWitness>
where
    F: Fn(&KappaWitness) -> bool + Sync + Send,
{
    let ok = exec.map(items.iter().collect(), holds);
    items.into_iter().zip(ok).find(|(_, ok)| !ok).map(|(w, _)| w)
}

/// `(g, (a,b,c))` for all g and all basis triples, lexicographically.
fn triples(kappa: &KappaParam) -> Vec<KappaWitness> {
    let n = kappa.dim();
    let mut out = Vec::new();
    for g in kappa.rep.group().elements() {
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    out.push(KappaWitness {
                        g,
                        h: None,
                        basis: vec![a, b, c],
                    });
                }
            }
        }
    }
    out
}

/// The cyclic permutations of a triple: `(v_σ(1), v_σ(2), v_σ(3))` for σ ∈ Alt₃.
fn alt3<T: Copy>(t: [T; 3]) -> [(T, T, T); 3] {
    [(t[0], t[1], t[2]), (t[1], t[2], t[0]), (t[2], t[0], t[1])]
}

fn basis_triple(kappa: &KappaParam, t: &[usize]) -> [Vec<Scalar>; 3] {
    [kappa.basis_vec(t[0]), kappa.basis_vec(t[1]), kappa.basis_vec(t[2])]
}

fn is_zero(v: &[Scalar]) -> bool {
    v.iter().all(Scalar::is_zero)
}

fn invariance_at(kappa: &KappaParam, w: &KappaWitness) -> bool {
    let group = kappa.rep.group();
    let (h, g) = (w.h.expect("invariance witness carries h"), w.g);
    let (vi, vj) = (kappa.basis_vec(w.basis[0]), kappa.basis_vec(w.basis[1]));
    let (hvi, hvj) = (kappa.act(h, &vi), kappa.act(h, &vj));
    let hgh = group.conj(h, g);
    kappa.eval_c(hgh, &hvi, &hvj) == kappa.eval_c(g, &vi, &vj)
        && kappa.act(h, &kappa.eval_l(g, &vi, &vj)) == kappa.eval_l(hgh, &hvi, &hvj)
}

/// `κ^C_{hgh⁻¹}(^h v, ^h w) = κ^C_g(v,w)` and `^h κ^L_g(v,w) = κ^L_{hgh⁻¹}(^h v, ^h w)`.
pub fn check_invariance(kappa: &KappaParam) -> Option<KappaWitness> {
    check_invariance_with(kappa, Exec::default())
}

pub fn check_invariance_with(kappa: &KappaParam, exec: Exec) -> Option<KappaWitness> {
    let n = kappa.dim();
    let mut items = Vec::new();
    for h in kappa.rep.group().elements() {
        for g in kappa.rep.group().elements() {
            for i in 0..n {
                for j in 0..n {
                    items.push(KappaWitness {
                        g,
                        h: Some(h),
                        basis: vec![i, j],
                    });
                }
            }
        }
    }
    first_failure(items, exec, |w| invariance_at(kappa, w))
}

/// `Σ_σ κ^L_g(v_σ2, v_σ3)(v_σ1 − ^g v_σ1)` in `S²(V)`, with coefficients on sorted pairs.
pub fn condition2_value(kappa: &KappaParam, g: usize, v: [&[Scalar]; 3]) -> Vec<Scalar> {
    let n = kappa.dim();
    let mut m = vec![kappa.field().zero(); n * n];
    for (va, vb, vc) in alt3(v) {
        let left = kappa.eval_l(g, vb, vc);
        let right: Vec<Scalar> = va.iter().zip(kappa.act(g, va)).map(|(x, y)| x - &y).collect();
        for (p, x) in left.iter().enumerate().filter(|(_, x)| !x.is_zero()) {
            for (q, y) in right.iter().enumerate().filter(|(_, y)| !y.is_zero()) {
                let (lo, hi) = (p.min(q), p.max(q));
                m[lo * n + hi] += &(x * y);
            }
        }
    }
    m
}

pub fn check_condition2(kappa: &KappaParam) -> Option<KappaWitness> {
    check_condition2_with(kappa, Exec::default())
}

pub fn check_condition2_with(kappa: &KappaParam, exec: Exec) -> Option<KappaWitness> {
    first_failure(triples(kappa), exec, |w| {
        let [a, b, c] = basis_triple(kappa, &w.basis);
        is_zero(&condition2_value(kappa, w.g, [&a, &b, &c]))
    })
}

/// Left minus right side of the third condition, an element of V.
pub fn condition3_value(kappa: &KappaParam, g: usize, v: [&[Scalar]; 3]) -> Vec<Scalar> {
    let group = kappa.rep.group();
    let field = kappa.field();
    let two = field.from_i64(2);
    let mut out = vec![field.zero(); kappa.dim()];
    for (va, vb, vc) in alt3(v) {
        for h in group.elements() {
            let inner = kappa.eval_l(h, vb, vc);
            if is_zero(&inner) {
                continue;
            }
            let u: Vec<Scalar> = va.iter().zip(kappa.act(h, va)).map(|(x, y)| x + &y).collect();
            let gh = group.mul(g, group.inv(h));
            for (o, x) in out.iter_mut().zip(kappa.eval_l(gh, &u, &inner)) {
                *o += &x;
            }
        }
        let coeff = &two * &kappa.eval_c(g, vb, vc);
        if !coeff.is_zero() {
            for (o, (x, y)) in out.iter_mut().zip(va.iter().zip(kappa.act(g, va))) {
                *o -= &(&coeff * &(x - &y));
            }
        }
    }
    out
}

pub fn check_condition3(kappa: &KappaParam) -> Option<KappaWitness> {
    check_condition3_with(kappa, Exec::default())
}

pub fn check_condition3_with(kappa: &KappaParam, exec: Exec) -> Option<KappaWitness> {
    first_failure(triples(kappa), exec, |w| {
        let [a, b, c] = basis_triple(kappa, &w.basis);
        is_zero(&condition3_value(kappa, w.g, [&a, &b, &c]))
    })
}

pub fn condition4_value(kappa: &KappaParam, g: usize, v: [&[Scalar]; 3]) -> Scalar {
    let group = kappa.rep.group();
    let mut out = kappa.field().zero();
    for (va, vb, vc) in alt3(v) {
        for h in group.elements() {
            let inner = kappa.eval_l(h, vb, vc);
            if is_zero(&inner) {
                continue;
            }
            let u: Vec<Scalar> = va.iter().zip(kappa.act(h, va)).map(|(x, y)| x + &y).collect();
            out += &kappa.eval_c(group.mul(g, group.inv(h)), &u, &inner);
        }
    }
    out
}

pub fn check_condition4(kappa: &KappaParam) -> Option<KappaWitness> {
    check_condition4_with(kappa, Exec::default())
}

pub fn check_condition4_with(kappa: &KappaParam, exec: Exec) -> Option<KappaWitness> {
    first_failure(triples(kappa), exec, |w| {
        let [a, b, c] = basis_triple(kappa, &w.basis);
        condition4_value(kappa, w.g, [&a, &b, &c]).is_zero()
    })
}

/// The four conditions in order; the first failure is reported.
pub fn kappa_verdict(kappa: &KappaParam) -> Result<KappaVerdict> {
    kappa_verdict_with(kappa, Exec::default())
}

pub fn kappa_verdict_with(kappa: &KappaParam, exec: Exec) -> Result<KappaVerdict> {
    if kappa.field().characteristic() == 2 {
        return Err(Error::CharTwo);
    }
    let checks: [fn(&KappaParam, Exec) -> Option<KappaWitness>; 4] = [
        check_invariance_with,
        check_condition2_with,
        check_condition3_with,
        check_condition4_with,
    ];
    for (i, check) in checks.iter().enumerate() {
        if let Some(witness) = check(kappa, exec) {
            return Ok(KappaVerdict::Fails {
                bullet: i as u8 + 1,
                witness,
            });
        }
    }
    Ok(KappaVerdict::Pbw)
}

/// The `κ^L ≡ 0` case: invariance and `Σ_σ κ_g(v_σ2, v_σ3)(^g v_σ1 − v_σ1) = 0`.
///
/// Failures are numbered as in [`kappa_verdict`] (1 or 3).
pub fn corollary_verdict(kappa: &KappaParam) -> Result<KappaVerdict> {
    corollary_verdict_with(kappa, Exec::default())
}

pub fn corollary_verdict_with(kappa: &KappaParam, exec: Exec) -> Result<KappaVerdict> {
    if !kappa.is_constant() {
        return Err(Error::NotConstantKappa);
    }
    if kappa.field().characteristic() == 2 {
        return Err(Error::CharTwo);
    }
    if let Some(witness) = check_invariance_with(kappa, exec) {
        return Ok(KappaVerdict::Fails { bullet: 1, witness });
    }
    let holds = |w: &KappaWitness| {
        let mut sum = vec![kappa.field().zero(); kappa.dim()];
        for (a, b, c) in alt3([w.basis[0], w.basis[1], w.basis[2]]) {
            let k = kappa.kc[w.g][b][c].clone();
            if k.is_zero() {
                continue;
            }
            let va = kappa.basis_vec(a);
            for (s, (x, y)) in sum.iter_mut().zip(kappa.act(w.g, &va).iter().zip(&va)) {
                *s += &(&k * &(x - y));
            }
        }
        is_zero(&sum)
    };
    Ok(match first_failure(triples(kappa), exec, holds) {
        Some(witness) => KappaVerdict::Fails { bullet: 3, witness },
        None => KappaVerdict::Pbw,
    })
}

/// `v_i⊗v_j − v_j⊗v_i − κ(v_i,v_j)` for `i < j`, as elements of `T(V)#G`.
pub fn kappa_relations(kappa: &KappaParam) -> Vec<SkewElement> {
    let n = kappa.dim();
    let group = kappa.rep.group();
    let e = group.identity();
    let one = kappa.field().one();
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut x = SkewElement::zero();
            x.add_term(SkewMonomial::new(vec![i, j], e), &one);
            x.add_term(SkewMonomial::new(vec![j, i], e), &-&one);
            for g in group.elements() {
                x.add_term(SkewMonomial::new(vec![], g), &-&kappa.kc[g][i][j]);
                for (k, c) in kappa.kl[g][i][j].iter().enumerate() {
                    x.add_term(SkewMonomial::new(vec![k], g), &-c);
                }
            }
            out.push(x);
        }
    }
    out
}

/// `R' = span{v_i⊗v_j − v_j⊗v_i}`, `α(v_i∧v_j) = Σ_g κ^L_g(v_i,v_j)⊗g`, `β(v_i∧v_j) = Σ_g κ^C_g(v_i,v_j) g`.
///
/// `S(V)` is Koszul, so the presentation is marked as such.
pub fn to_presentation(kappa: &KappaParam) -> Result<FilteredQuadraticPresentation> {
    let field = kappa.field();
    let n = kappa.dim();
    let order = kappa.rep.group().order();
    let hom = HomQuadraticPresentation::new(kappa.rep.clone(), symmetric_relations(field, n))?;
    let (mut basis, mut alpha, mut beta) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..n {
        for j in i + 1..n {
            let mut r = vec![field.zero(); n * n];
            r[i * n + j] = field.one();
            r[j * n + i] = field.from_i64(-1);
            basis.push(r);
            let mut a = vec![field.zero(); n * order];
            for g in 0..order {
                for (k, c) in kappa.kl[g][i][j].iter().enumerate() {
                    a[k * order + g] = c.clone();
                }
            }
            alpha.push(a);
            beta.push((0..order).map(|g| kappa.kc[g][i][j].clone()).collect());
        }
    }
    FilteredQuadraticPresentation::new(hom, basis, alpha, beta, KoszulStatus::Asserted)
}
