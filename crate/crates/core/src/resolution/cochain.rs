//! Hochschild cochains on the bar resolution, evaluated on monomial bases, and
//! the multiplication maps of a graded deformation.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use super::algebra::{Basis, GradedSkewAlgebra};
use crate::drinfeld::KappaParam;
use crate::error::{Error, Result};
use crate::group::index_word;
use crate::linear::sparse::Accumulator;
use crate::linear::{Scalar, SparseVec};
use crate::pbw::{symmetric_relations, HomQuadraticPresentation};

/// A 2-cochain `μ: A ⊗ A → A`, homogeneous of degree `shift`, tabulated on basis
/// pairs of total degree `≤ cap`.
#[derive(Clone)]
pub struct Cochain2 {
    ring: Arc<GradedSkewAlgebra>,
    shift: i32,
    cap: usize,
    table: HashMap<(Basis, Basis), SparseVec>,
}

/// A 3-cochain, stored by its nonzero values on basis triples.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Cochain3 {
    pub values: BTreeMap<(Basis, Basis, Basis), (usize, SparseVec)>,
}

impl Cochain3 {
    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn first_nonzero(&self) -> Option<(Basis, Basis, Basis)> {
        self.values.keys().next().copied()
    }
}

fn basis_up_to(ring: &GradedSkewAlgebra, cap: usize) -> Vec<Basis> {
    (0..=cap.min(ring.max_degree()))
        .flat_map(|d| (0..ring.dim(d)).map(move |i| (d, i)))
        .collect()
}

fn target_degree(d: usize, shift: i32) -> Option<usize> {
    usize::try_from(d as i64 + shift as i64).ok()
}

impl Cochain2 {
    /// Tabulates `f` on pairs of total degree `≤ cap`; `f(x, y)` must lie in
    /// degree `deg x + deg y + shift` (it is not called when that is negative).
    pub fn from_fn(
        ring: Arc<GradedSkewAlgebra>,
        shift: i32,
        cap: usize,
        f: impl Fn(Basis, Basis) -> SparseVec,
    ) -> Self {
        let cap = cap.min(ring.max_degree());
        let basis = basis_up_to(&ring, cap);
        let mut table = HashMap::new();
        for &x in &basis {
            for &y in basis.iter().filter(|y| x.0 + y.0 <= cap) {
                if target_degree(x.0 + y.0, shift).is_some() {
                    let v = f(x, y);
                    if !v.is_empty() {
                        table.insert((x, y), v);
                    }
                }
            }
        }
        Cochain2 { ring, shift, cap, table }
    }

    pub fn zero(ring: Arc<GradedSkewAlgebra>, shift: i32, cap: usize) -> Self {
        Self::from_fn(ring, shift, cap, |_, _| Vec::new())
    }

    /// `(δh)(a ⊗ b) = a h(b) − h(ab) + h(a) b` for a 1-cochain `h` of degree `shift`.
    pub fn coboundary(
        ring: Arc<GradedSkewAlgebra>,
        shift: i32,
        cap: usize,
        h: impl Fn(Basis) -> SparseVec,
    ) -> Self {
        let r = ring.clone();
        let one = r.field().one();
        let minus = r.field().from_i64(-1);
        Self::from_fn(ring, shift, cap, move |a, b| {
            let mut acc = Accumulator::new();
            if let Some(db) = target_degree(b.0, shift) {
                acc.add_scaled(&r.multiply(a.0, &[(a.1, one.clone())], db, &h(b)), &one);
            }
            if let Some(da) = target_degree(a.0, shift) {
                acc.add_scaled(&r.multiply(da, &h(a), b.0, &[(b.1, one.clone())]), &one);
            }
            let d = a.0 + b.0;
            for (k, c) in r.multiply_basis(a, b) {
                acc.add_scaled(&h((d, k)), &(&c * &minus));
            }
            acc.finish()
        })
    }

    pub fn ring(&self) -> &Arc<GradedSkewAlgebra> {
        &self.ring
    }

    pub fn shift(&self) -> i32 {
        self.shift
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    /// `μ(x ⊗ y)`, in degree `deg x + deg y + shift`.
    pub fn eval(&self, x: Basis, y: Basis) -> &[(usize, Scalar)] {
        assert!(x.0 + y.0 <= self.cap, "pair beyond the tabulated window");
        self.table.get(&(x, y)).map_or(&[], Vec::as_slice)
    }

    /// Bilinear extension to homogeneous elements of degrees `dx`, `dy`.
    pub fn eval_elements(&self, dx: usize, x: &[(usize, Scalar)], dy: usize, y: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (i, a) in x {
            for (j, b) in y {
                acc.add_scaled(self.eval((dx, *i), (dy, *j)), &(a * b));
            }
        }
        acc.finish()
    }

    fn out_degree(&self, d: usize) -> Option<usize> {
        target_degree(d, self.shift)
    }
}

fn triples(ring: &GradedSkewAlgebra, cap: usize) -> Vec<(Basis, Basis, Basis)> {
    let basis = basis_up_to(ring, cap);
    let mut out = Vec::new();
    for &a in &basis {
        for &b in basis.iter().filter(|b| a.0 + b.0 <= cap) {
            for &c in basis.iter().filter(|c| a.0 + b.0 + c.0 <= cap) {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// `δ_3^*(μ)(a ⊗ b ⊗ c) = a μ(b⊗c) − μ(ab⊗c) + μ(a⊗bc) − μ(a⊗b) c` on triples
/// of total degree `≤ cap`.
pub fn coboundary3(mu: &Cochain2, cap: usize) -> Cochain3 {
    let ring = mu.ring();
    let cap = cap.min(mu.cap());
    let one = ring.field().one();
    let minus = ring.field().from_i64(-1);
    let mut values = BTreeMap::new();
    for (a, b, c) in triples(ring, cap) {
        let total = a.0 + b.0 + c.0;
        let Some(out) = mu.out_degree(total) else { continue };
        let mut acc = Accumulator::new();
        if let Some(d) = mu.out_degree(b.0 + c.0) {
            acc.add_scaled(&ring.multiply(a.0, &[(a.1, one.clone())], d, mu.eval(b, c)), &one);
        }
        if let Some(d) = mu.out_degree(a.0 + b.0) {
            acc.add_scaled(&ring.multiply(d, mu.eval(a, b), c.0, &[(c.1, one.clone())]), &minus);
        }
        let ab = ring.multiply_basis(a, b);
        acc.add_scaled(&mu.eval_elements(a.0 + b.0, &ab, c.0, &[(c.1, one.clone())]), &minus);
        let bc = ring.multiply_basis(b, c);
        acc.add_scaled(&mu.eval_elements(a.0, &[(a.1, one.clone())], b.0 + c.0, &bc), &one);
        let v = acc.finish();
        if !v.is_empty() {
            values.insert((a, b, c), (out, v));
        }
    }
    Cochain3 { values }
}

/// Whether `μ` satisfies the 2-cocycle identity
/// `a μ(b⊗c) + μ(a⊗bc) = μ(ab⊗c) + μ(a⊗b) c` on all triples within `cap`.
pub fn cocycle_check(mu: &Cochain2, cap: usize) -> bool {
    coboundary3(mu, cap).is_zero()
}

/// The `(i−1)`-th obstruction `Σ_{j=1}^{i−1} μ_j(μ_{i−j}(a⊗b)⊗c) − μ_j(a⊗μ_{i−j}(b⊗c))`,
/// where `mus[j-1] = μ_j`.
pub fn obstruction_eval(mus: &[Cochain2], i: usize, cap: usize) -> Cochain3 {
    assert!(i >= 2 && mus.len() >= i - 1, "need μ_1 … μ_(i−1)");
    let ring = mus[0].ring();
    let cap = mus[..i - 1].iter().fold(cap, |c, m| c.min(m.cap()));
    let one = ring.field().one();
    let minus = ring.field().from_i64(-1);
    let mut values = BTreeMap::new();
    for (a, b, c) in triples(ring, cap) {
        let mut acc = Accumulator::new();
        let mut out = None;
        for j in 1..i {
            let (outer, inner) = (&mus[j - 1], &mus[i - j - 1]);
            if let Some(d) = inner.out_degree(a.0 + b.0) {
                let v = outer.eval_elements(d, inner.eval(a, b), c.0, &[(c.1, one.clone())]);
                acc.add_scaled(&v, &one);
            }
            if let Some(d) = inner.out_degree(b.0 + c.0) {
                let v = outer.eval_elements(a.0, &[(a.1, one.clone())], d, inner.eval(b, c));
                acc.add_scaled(&v, &minus);
            }
            out = out.or_else(|| inner.out_degree(a.0 + b.0 + c.0).and_then(|d| outer.out_degree(d)));
        }
        let v = acc.finish();
        if !v.is_empty() {
            values.insert((a, b, c), (out.expect("nonzero value has a degree"), v));
        }
    }
    Cochain3 { values }
}

/// Multiplication maps `μ_1, …, μ_count` of the graded deformation of `S(V)#G`
/// given by `κ`, with `deg t = 1`: relations `vw − wv = κ^L(v,w) t + κ^C(v,w) t²`.
///
/// Products of normal forms are rewritten in `H_κ` by sorting letters; the
/// part of degree `deg x + deg y − j` of `x * y` is `μ_j(x ⊗ y)`. When `H_κ`
/// is not PBW the maps still exist but need not satisfy the deformation identities.
pub fn deformation_maps(kappa: &KappaParam, cap: usize, count: usize) -> Result<(Arc<GradedSkewAlgebra>, Vec<Cochain2>)> {
    if count == 0 {
        return Err(Error::HypothesisViolation("at least one multiplication map".into()));
    }
    let field = kappa.field();
    let n = kappa.dim();
    let hom = HomQuadraticPresentation::new(kappa.rep().clone(), symmetric_relations(field, n))?;
    let ring = Arc::new(GradedSkewAlgebra::skew(&hom, cap));
    let group = ring.group().clone();
    let rep = kappa.rep();

    // (letters, group element) ↦ coefficient
    type Expr = HashMap<(Vec<usize>, usize), Scalar>;
    let add = |e: &mut Expr, k: (Vec<usize>, usize), c: Scalar| {
        if c.is_zero() {
            return;
        }
        let entry = e.entry(k).or_insert_with(|| field.zero());
        *entry = &*entry + &c;
    };
    // w · g · tail  ↦  w · ^g(tail) · g
    let push_through = |out: &mut Expr, head: &[usize], g: usize, tail: &[usize], h: usize, c: &Scalar| {
        for (idx, a) in rep.act_word(g, tail) {
            let mut w = head.to_vec();
            w.extend(index_word(idx, tail.len(), n));
            add(out, (w, group.mul(g, h)), c * &a);
        }
    };

    let normal_form = |word: Vec<usize>, g: usize| -> Expr {
        let mut done: Expr = HashMap::new();
        let mut todo: Expr = HashMap::new();
        add(&mut todo, (word, g), field.one());
        while let Some(key) = todo.keys().next().cloned() {
            let c = todo.remove(&key).expect("present");
            if c.is_zero() {
                continue;
            }
            let (w, h) = key;
            match w.windows(2).position(|p| p[0] > p[1]) {
                None => add(&mut done, (w, h), c),
                Some(p) => {
                    let (b, a) = (w[p], w[p + 1]);
                    let mut swapped = w.clone();
                    swapped.swap(p, p + 1);
                    add(&mut todo, (swapped, h), c.clone());
                    // v_b v_a − v_a v_b = Σ_g (κ^L_g(v_b,v_a) + κ^C_g(v_b,v_a)) g
                    let (head, tail) = (&w[..p], &w[p + 2..]);
                    for g in group.elements() {
                        let cc = &kappa.kc(g)[b][a];
                        if !cc.is_zero() {
                            push_through(&mut todo, head, g, tail, h, &(&c * cc));
                        }
                        for (k, cl) in kappa.kl(g)[b][a].iter().enumerate() {
                            if !cl.is_zero() {
                                let mut hk = head.to_vec();
                                hk.push(k);
                                push_through(&mut todo, &hk, g, tail, h, &(&c * cl));
                            }
                        }
                    }
                }
            }
        }
        done
    };

    let products: HashMap<(Basis, Basis), Expr> = {
        let basis = basis_up_to(&ring, cap);
        let mut out = HashMap::new();
        for &x in &basis {
            for &y in basis.iter().filter(|y| x.0 + y.0 <= cap) {
                let (sx, gx) = (ring.s_word(x.0, ring.s_part(x.1)).to_vec(), ring.grade(x.1));
                let (sy, gy) = (ring.s_word(y.0, ring.s_part(y.1)).to_vec(), ring.grade(y.1));
                let mut start: Expr = HashMap::new();
                push_through(&mut start, &sx, gx, &sy, gy, &field.one());
                let mut total: Expr = HashMap::new();
                for ((w, g), c) in start {
                    for (k, c2) in normal_form(w, g) {
                        add(&mut total, k, &c * &c2);
                    }
                }
                out.insert((x, y), total);
            }
        }
        out
    };

    let mus = (1..=count)
        .map(|j| {
            let products = &products;
            let r = ring.clone();
            Cochain2::from_fn(ring.clone(), -(j as i32), cap, move |x, y| {
                let d = x.0 + y.0 - j;
                let mut acc = Accumulator::new();
                for ((w, g), c) in &products[&(x, y)] {
                    if w.len() == d {
                        let s = r.s_index_of_word(w).expect("sorted words are normal in S(V)");
                        acc.add(r.index(s, *g), c);
                    }
                }
                acc.finish()
            })
        })
        .collect();
    Ok((ring, mus))
}

/// `∂/∂v_a` on `S(V)_d ⊗ g`, for `S = S(V)` with sorted normal words.
pub fn partial_derivative(ring: &GradedSkewAlgebra, a: usize, (d, idx): Basis) -> SparseVec {
    if d == 0 {
        return Vec::new();
    }
    let word = ring.s_word(d, ring.s_part(idx));
    let count = word.iter().filter(|&&l| l == a).count();
    let Some(pos) = word.iter().position(|&l| l == a) else {
        return Vec::new();
    };
    let mut rest = word.to_vec();
    rest.remove(pos);
    let s = ring.s_index_of_word(&rest).expect("sub-multiset of a sorted word is sorted");
    let c = ring.field().from_i64(count as i64);
    if c.is_zero() {
        return Vec::new();
    }
    vec![(ring.index(s, ring.grade(idx)), c)]
}
