//! Free graded `A^e`-modules `A ⊗ E ⊗ A`, maps between them given on generators,
//! and complexes of such modules.

use std::sync::Arc;

use serde::Serialize;

use super::algebra::{Basis, GradedSkewAlgebra};
use crate::linear::sparse::Accumulator;
use crate::linear::{Scalar, SparseMap, SparseVec};
use crate::par::Exec;

/// A free generator `1 ⊗ e ⊗ 1`: polynomial degree and group component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Generator {
    pub degree: usize,
    pub grade: usize,
}

#[derive(Clone, Copy, Debug)]
struct Block {
    gen: usize,
    left_deg: usize,
    right_deg: usize,
    start: usize,
    right_dim: usize,
}

#[derive(Debug)]
struct Layout {
    blocks: Vec<Block>,
    /// Index into `blocks` of the first block of each generator (`None` if its degree is too high).
    first: Vec<Option<usize>>,
    dim: usize,
}

/// A basis element `a ⊗ e ⊗ b` of a free bimodule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub left: Basis,
    pub gen: usize,
    pub right: Basis,
}

/// `A ⊗ E ⊗ A` with `E` spanned by graded generators; degree-`d` pieces are
/// `⊕_e ⊕_{a+b = d - deg e} A_a ⊗ e ⊗ A_b`.
pub struct GradedFreeBimodule {
    ring: Arc<GradedSkewAlgebra>,
    gens: Vec<Generator>,
    layouts: Vec<Layout>,
}

impl std::fmt::Debug for GradedFreeBimodule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("GradedFreeBimodule").field("gens", &self.gens).finish()
    }
}

impl GradedFreeBimodule {
    pub fn new(ring: Arc<GradedSkewAlgebra>, gens: Vec<Generator>) -> Self {
        let layouts = (0..=ring.max_degree())
            .map(|d| {
                let mut blocks = Vec::new();
                let mut first = Vec::with_capacity(gens.len());
                let mut start = 0;
                for (gi, g) in gens.iter().enumerate() {
                    if g.degree > d {
                        first.push(None);
                        continue;
                    }
                    first.push(Some(blocks.len()));
                    for a in 0..=d - g.degree {
                        let b = d - g.degree - a;
                        let (ld, rd) = (ring.dim(a), ring.dim(b));
                        blocks.push(Block {
                            gen: gi,
                            left_deg: a,
                            right_deg: b,
                            start,
                            right_dim: rd,
                        });
                        start += ld * rd;
                    }
                }
                Layout { blocks, first, dim: start }
            })
            .collect();
        GradedFreeBimodule { ring, gens, layouts }
    }

    pub fn ring(&self) -> &Arc<GradedSkewAlgebra> {
        &self.ring
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn rank(&self) -> usize {
        self.gens.len()
    }

    /// Dimension of the degree-`d` piece (zero above the ring's cap).
    pub fn dim(&self, d: usize) -> usize {
        self.layouts.get(d).map_or(0, |l| l.dim)
    }

    pub fn index(&self, t: Term) -> usize {
        let d = t.left.0 + self.gens[t.gen].degree + t.right.0;
        let layout = &self.layouts[d];
        let b = &layout.blocks[layout.first[t.gen].expect("generator fits the degree") + t.left.0];
        debug_assert_eq!((b.gen, b.left_deg), (t.gen, t.left.0));
        b.start + t.left.1 * b.right_dim + t.right.1
    }

    pub fn term(&self, d: usize, idx: usize) -> Term {
        let layout = &self.layouts[d];
        let pos = layout.blocks.partition_point(|b| b.start <= idx) - 1;
        let b = &layout.blocks[pos];
        let off = idx - b.start;
        Term {
            left: (b.left_deg, off / b.right_dim),
            gen: b.gen,
            right: (b.right_deg, off % b.right_dim),
        }
    }

    /// `1 ⊗ e ⊗ 1` in its own degree.
    pub fn generator_element(&self, gen: usize) -> SparseVec {
        let one = self.ring.group_element(self.ring.group().identity());
        vec![(self.index(Term { left: one, gen, right: one }), self.ring.field().one())]
    }

    /// Group component of every basis vector of the degree-`d` piece.
    pub fn grades(&self, d: usize) -> Vec<usize> {
        let group = self.ring.group();
        (0..self.dim(d))
            .map(|i| {
                let t = self.term(d, i);
                let lg = self.ring.grade(t.left.1);
                let rg = self.ring.grade(t.right.1);
                group.mul(group.mul(lg, self.gens[t.gen].grade), rg)
            })
            .collect()
    }

    /// `x · m · y` for `m` in degree `d` and homogeneous `x`, `y`.
    pub fn act(&self, x: Basis, d: usize, m: &[(usize, Scalar)], y: Basis) -> SparseVec {
        let mut acc = Accumulator::new();
        for (idx, c) in m {
            let t = self.term(d, *idx);
            let left = self.ring.multiply_basis(x, t.left);
            if left.is_empty() {
                continue;
            }
            let right = self.ring.multiply_basis(t.right, y);
            let (ld, rd) = (x.0 + t.left.0, t.right.0 + y.0);
            for (l, a) in &left {
                for (r, b) in &right {
                    let i = self.index(Term { left: (ld, *l), gen: t.gen, right: (rd, *r) });
                    acc.add(i, &(&(c * a) * b));
                }
            }
        }
        acc.finish()
    }
}

/// An `A^e`-linear, degree-preserving map between free bimodules, given by the
/// images of the source generators.
#[derive(Clone, Debug)]
pub struct BimoduleMap {
    source: Arc<GradedFreeBimodule>,
    target: Arc<GradedFreeBimodule>,
    images: Vec<SparseVec>,
    decoded: Vec<Vec<(Term, Scalar)>>,
}

impl BimoduleMap {
    /// `images[e]` lies in the target piece of degree `deg e`.
    pub fn new(source: Arc<GradedFreeBimodule>, target: Arc<GradedFreeBimodule>, images: Vec<SparseVec>) -> Self {
        assert_eq!(images.len(), source.rank(), "one image per generator");
        let decoded = images
            .iter()
            .zip(source.generators())
            .map(|(img, g)| img.iter().map(|(i, c)| (target.term(g.degree, *i), c.clone())).collect())
            .collect();
        BimoduleMap {
            source,
            target,
            images,
            decoded,
        }
    }

    pub fn zero(source: Arc<GradedFreeBimodule>, target: Arc<GradedFreeBimodule>) -> Self {
        let n = source.rank();
        Self::new(source, target, vec![Vec::new(); n])
    }

    pub fn source(&self) -> &Arc<GradedFreeBimodule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<GradedFreeBimodule> {
        &self.target
    }

    pub fn image(&self, gen: usize) -> &SparseVec {
        &self.images[gen]
    }

    pub fn images(&self) -> &[SparseVec] {
        &self.images
    }

    /// Applies the map to an element of the degree-`d` piece of the source.
    pub fn apply(&self, d: usize, x: &[(usize, Scalar)]) -> SparseVec {
        let ring = self.source.ring();
        let mut acc = Accumulator::new();
        for (idx, c) in x {
            let t = self.source.term(d, *idx);
            for (u, c2) in &self.decoded[t.gen] {
                let left = ring.multiply_basis(t.left, u.left);
                if left.is_empty() {
                    continue;
                }
                let right = ring.multiply_basis(u.right, t.right);
                let (ld, rd) = (t.left.0 + u.left.0, u.right.0 + t.right.0);
                let cc = c * c2;
                for (l, a) in &left {
                    let ca = &cc * a;
                    for (r, b) in &right {
                        let i = self.target.index(Term { left: (ld, *l), gen: u.gen, right: (rd, *r) });
                        acc.add(i, &(&ca * b));
                    }
                }
            }
        }
        acc.finish()
    }

    /// Matrix of the degree-`d` piece.
    pub fn matrix(&self, d: usize) -> SparseMap {
        let one = self.source.ring().field().one();
        let columns = (0..self.source.dim(d))
            .map(|j| self.apply(d, &[(j, one.clone())]))
            .collect();
        SparseMap::new(self.source.ring().field(), self.target.dim(d), columns)
    }

    /// `self ∘ before`, computed on generators.
    pub fn compose(&self, before: &BimoduleMap) -> BimoduleMap {
        assert!(Arc::ptr_eq(before.target(), &self.source), "composable maps");
        let images = before
            .images
            .iter()
            .zip(before.source.generators())
            .map(|(img, g)| self.apply(g.degree, img))
            .collect();
        BimoduleMap::new(before.source.clone(), self.target.clone(), images)
    }

    pub fn add(&self, other: &BimoduleMap) -> BimoduleMap {
        let one = self.source.ring().field().one();
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| {
                let mut acc = Accumulator::new();
                acc.add_scaled(a, &one);
                acc.add_scaled(b, &one);
                acc.finish()
            })
            .collect();
        BimoduleMap::new(self.source.clone(), self.target.clone(), images)
    }

    pub fn scale(&self, f: &Scalar) -> BimoduleMap {
        let images = self
            .images
            .iter()
            .map(|img| img.iter().map(|(i, c)| (*i, c * f)).filter(|(_, c)| !c.is_zero()).collect())
            .collect();
        BimoduleMap::new(self.source.clone(), self.target.clone(), images)
    }

    /// Zero on generators, hence zero in every degree.
    pub fn is_zero(&self) -> bool {
        self.images.iter().all(Vec::is_empty)
    }

    /// Whether each generator image lies in the generator's group component.
    pub fn preserves_grading(&self) -> bool {
        self.images.iter().zip(self.source.generators()).all(|(img, g)| {
            let grades = self.target.grades(g.degree);
            img.iter().all(|(i, _)| grades[*i] == g.grade)
        })
    }
}

/// A complex `M_len → … → M_1 → M_0` of free bimodules; `diffs[k]: M_{k+1} → M_k`.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    modules: Vec<Arc<GradedFreeBimodule>>,
    diffs: Vec<BimoduleMap>,
}

impl TruncatedComplex {
    pub fn new(modules: Vec<Arc<GradedFreeBimodule>>, diffs: Vec<BimoduleMap>) -> Self {
        assert_eq!(modules.len(), diffs.len() + 1);
        for (k, d) in diffs.iter().enumerate() {
            assert!(Arc::ptr_eq(d.source(), &modules[k + 1]) && Arc::ptr_eq(d.target(), &modules[k]));
        }
        TruncatedComplex { modules, diffs }
    }

    pub fn len(&self) -> usize {
        self.diffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diffs.is_empty()
    }

    pub fn ring(&self) -> &Arc<GradedSkewAlgebra> {
        self.modules[0].ring()
    }

    pub fn module(&self, n: usize) -> &Arc<GradedFreeBimodule> {
        &self.modules[n]
    }

    pub fn modules(&self) -> &[Arc<GradedFreeBimodule>] {
        &self.modules
    }

    /// `d_n: M_n → M_{n-1}` for `1 ≤ n ≤ len`.
    pub fn differential(&self, n: usize) -> &BimoduleMap {
        &self.diffs[n - 1]
    }

    /// First `n` with `d_{n-1} d_n ≠ 0`, checked on generators.
    pub fn d_squared_failure(&self) -> Option<usize> {
        (2..=self.len()).find(|&n| !self.differential(n - 1).compose(self.differential(n)).is_zero())
    }

    /// `d_{n-1} d_n = 0` as matrices on every piece of degree `≤ polydeg_cap`.
    pub fn d_squared_on_pieces(&self, polydeg_cap: usize, exec: Exec) -> bool {
        let jobs: Vec<(usize, usize)> = (2..=self.len())
            .flat_map(|n| (0..=polydeg_cap).map(move |d| (n, d)))
            .collect();
        exec.map(jobs, |(n, d)| {
            let m = self.differential(n - 1).matrix(d).compose(&self.differential(n).matrix(d));
            m.is_zero()
        })
        .into_iter()
        .all(|ok| ok)
    }

    /// First `n` whose differential leaves a generator's group component.
    pub fn grading_failure(&self) -> Option<usize> {
        (1..=self.len()).find(|&n| !self.differential(n).preserves_grading())
    }
}
