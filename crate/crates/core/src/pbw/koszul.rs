use serde::Serialize;

use super::presentation::HomQuadraticPresentation;
use super::quadratic::QuadraticAlgebra;
use crate::linear::sparse::Accumulator;
use crate::linear::{FieldSpec, SparseMap, Subspace};
use crate::par::Exec;

/// `V^{⊗j} ⊗ R' ⊗ V^{⊗(n-2-j)}` inside `V^{⊗n}`.
fn embedded_relations(rprime: &Subspace, dim_v: usize, n: usize, j: usize) -> Subspace {
    let field = rprime.field();
    let left = dim_v.pow(j as u32);
    let right = dim_v.pow((n - 2 - j) as u32);
    let total = dim_v.pow(n as u32);
    let mut vecs = Vec::with_capacity(left * right * rprime.dim());
    for a in 0..left {
        for r in rprime.basis_vectors() {
            for b in 0..right {
                let mut v = vec![field.zero(); total];
                for (i, c) in r.iter().enumerate() {
                    if !c.is_zero() {
                        v[(a * dim_v * dim_v + i) * right + b] = c.clone();
                    }
                }
                vecs.push(v);
            }
        }
    }
    Subspace::span(field, total, vecs).expect("embedded relation vectors")
}

/// `K^n(S) = ∩_j V^{⊗j} ⊗ R' ⊗ V^{⊗(n-2-j)}`; `K⁰ = k`, `K¹ = V`.
pub fn koszul_component_of(rprime: &Subspace, dim_v: usize, n: usize) -> Subspace {
    let field = rprime.field();
    if n < 2 {
        return Subspace::full(field, dim_v.pow(n as u32));
    }
    let mut k = embedded_relations(rprime, dim_v, n, 0);
    for j in 1..=n - 2 {
        if k.dim() == 0 {
            break;
        }
        k = k
            .intersect(&embedded_relations(rprime, dim_v, n, j))
            .expect("same ambient");
    }
    k
}

pub fn koszul_component(hom: &HomQuadraticPresentation, n: usize) -> Subspace {
    koszul_component_of(&hom.rprime, hom.dim_v(), n)
}

/// Result of a bounded exactness check of `S ⊗ K^•(S) → k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KoszulReport {
    pub exact: bool,
    pub homological_cap: usize,
    pub polydeg_cap: usize,
    /// `(n, d, dim H)` for every position with unexpected homology.
    pub failures: Vec<(usize, usize, usize)>,
    /// `dim K^n` for `n = 0..=homological_cap`.
    pub component_dims: Vec<usize>,
}

/// The differential `S_{d-n} ⊗ K^n → S_{d-n+1} ⊗ K^{n-1}`, `s ⊗ v_a y ↦ s v_a ⊗ y`,
/// in the bases (normal words of S) × (rref basis of K).
fn koszul_differential(s: &QuadraticAlgebra, k: &[Subspace], n: usize, d: usize) -> SparseMap {
    let dim_v = s.dim_v();
    let field = s.field();
    let sdeg = d - n;
    let src_k = &k[n];
    let tgt_k = &k[n - 1];
    let tail = dim_v.pow((n - 1) as u32);
    let tgt_dim = s.dim(sdeg + 1) * tgt_k.dim();
    let mut columns = Vec::new();
    for si in 0..s.dim(sdeg) {
        for y in src_k.basis_vectors() {
            // y = Σ_a v_a ⊗ y_a with y_a ∈ K^{n-1}
            let mut acc = Accumulator::new();
            for a in 0..dim_v {
                let ya: Vec<_> = y[a * tail..(a + 1) * tail].to_vec();
                if ya.iter().all(|c| c.is_zero()) {
                    continue;
                }
                let coords = tgt_k.coordinates(&ya).expect("K^n ⊆ V ⊗ K^{n-1}");
                let sv = s.multiply(sdeg, &[(si, field.one())], 1, &[(a, field.one())]);
                for (t, c) in &sv {
                    for (yi, yc) in coords.iter().enumerate() {
                        if !yc.is_zero() {
                            acc.add(t * tgt_k.dim() + yi, &(c * yc));
                        }
                    }
                }
            }
            columns.push(acc.finish());
        }
    }
    SparseMap::new(field, tgt_dim, columns)
}

/// Checks exactness of the Koszul complex in homological degrees `0..=homological_cap`
/// and internal degrees `0..=polydeg_cap`.
pub fn koszul_check(hom: &HomQuadraticPresentation, homological_cap: usize, polydeg_cap: usize) -> KoszulReport {
    koszul_check_with(hom, homological_cap, polydeg_cap, Exec::default())
}

pub fn koszul_check_with(
    hom: &HomQuadraticPresentation,
    homological_cap: usize,
    polydeg_cap: usize,
    exec: Exec,
) -> KoszulReport {
    let dim_v = hom.dim_v();
    let s = QuadraticAlgebra::new(dim_v, &hom.rprime, polydeg_cap);
    let k: Vec<Subspace> = (0..=homological_cap + 1)
        .map(|n| koszul_component(hom, n))
        .collect();
    let positions: Vec<(usize, usize)> = (0..=homological_cap)
        .flat_map(|n| (n..=polydeg_cap).map(move |d| (n, d)))
        .collect();
    let rank = |n: usize, d: usize| -> usize {
        if n == 0 || n > d {
            0
        } else {
            koszul_differential(&s, &k, n, d).rank()
        }
    };
    let failures: Vec<Option<(usize, usize, usize)>> = exec.map(positions, |(n, d)| {
        let dim = s.dim(d - n) * k[n].dim();
        let h = dim - rank(n, d) - rank(n + 1, d);
        let expected = usize::from(n == 0 && d == 0);
        (h != expected).then_some((n, d, h))
    });
    let failures: Vec<_> = failures.into_iter().flatten().collect();
    KoszulReport {
        exact: failures.is_empty(),
        homological_cap,
        polydeg_cap,
        failures,
        component_dims: k[..=homological_cap].iter().map(Subspace::dim).collect(),
    }
}

/// Helper: the commutator space `span{v_i⊗v_j − v_j⊗v_i}`.
pub fn symmetric_relations(field: FieldSpec, dim_v: usize) -> Subspace {
    let mut vecs = Vec::new();
    for i in 0..dim_v {
        for j in i + 1..dim_v {
            let mut v = vec![field.zero(); dim_v * dim_v];
            v[i * dim_v + j] = field.one();
            v[j * dim_v + i] = field.from_i64(-1);
            vecs.push(v);
        }
    }
    Subspace::span(field, dim_v * dim_v, vecs).expect("commutator vectors")
}
