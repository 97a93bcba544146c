use crate::error::{Error, Result};
use crate::group::Representation;
use crate::linear::{FieldSpec, LinearSolver, Matrix, Scalar, Subspace};
use crate::skew::{SkewAlgebra, SkewElement, SkewMonomial};

/// `S = T(V)/⟨R'⟩` together with the group acting on V.
#[derive(Clone, Debug)]
pub struct HomQuadraticPresentation {
    pub rep: Representation,
    pub rprime: Subspace,
}

impl HomQuadraticPresentation {
    /// Requires `R'` to be stable under the diagonal action, so that `R'⊗kG` is a bimodule.
    pub fn new(rep: Representation, rprime: Subspace) -> Result<Self> {
        let n = rep.dim();
        if rprime.ambient_dim() != n * n {
            return Err(Error::AmbientMismatch {
                left: n * n,
                right: rprime.ambient_dim(),
            });
        }
        for g in rep.group().elements() {
            let image = rprime.apply_map(&rep.tensor_power_matrix(g, 2))?;
            if !rprime.contains_subspace(&image) {
                return Err(Error::NotBimodule(format!("R' is not stable under element {g}")));
            }
        }
        Ok(HomQuadraticPresentation { rep, rprime })
    }

    pub fn field(&self) -> FieldSpec {
        self.rep.field()
    }

    pub fn dim_v(&self) -> usize {
        self.rep.dim()
    }
}

/// How Koszulity of `S` is known.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KoszulStatus {
    Unknown,
    Asserted,
    /// Koszul complex found exact in the stated window.
    Certified { homological: usize, polydeg: usize },
}

/// `P = {x − α(x) − β(x) : x ∈ R'⊗kG}` given through `α: R' → V⊗kG` and `β: R' → kG`.
///
/// `α(r)` is a vector of length `n·|G|` with `v_i⊗g` at `i·|G| + g`; `β(r)` has length `|G|`.
#[derive(Clone, Debug)]
pub struct FilteredQuadraticPresentation {
    pub hom: HomQuadraticPresentation,
    basis: Vec<Vec<Scalar>>,
    alpha: Vec<Vec<Scalar>>,
    beta: Vec<Vec<Scalar>>,
    solver: LinearSolver,
    pub koszul: KoszulStatus,
}

impl FilteredQuadraticPresentation {
    /// `basis` must be a basis of `hom.rprime`; `alpha[i]`, `beta[i]` are the images of `basis[i]`.
    pub fn new(
        hom: HomQuadraticPresentation,
        basis: Vec<Vec<Scalar>>,
        alpha: Vec<Vec<Scalar>>,
        beta: Vec<Vec<Scalar>>,
        koszul: KoszulStatus,
    ) -> Result<Self> {
        let field = hom.field();
        let n = hom.dim_v();
        let order = hom.rep.group().order();
        if alpha.len() != basis.len() || beta.len() != basis.len() {
            return Err(Error::DimensionMismatch(
                "alpha and beta need one image per basis vector of R'".into(),
            ));
        }
        if alpha.iter().any(|a| a.len() != n * order) {
            return Err(Error::DimensionMismatch(format!("alpha images must have length {}", n * order)));
        }
        if beta.iter().any(|b| b.len() != order) {
            return Err(Error::DimensionMismatch(format!("beta images must have length {order}")));
        }
        let span = Subspace::span(field, n * n, basis.clone())?;
        if span.dim() != basis.len() || span != hom.rprime {
            return Err(Error::DimensionMismatch(
                "R' vectors must be linearly independent and span R'".into(),
            ));
        }
        // Columns are the basis vectors, so solving gives coordinates.
        let m = Matrix::from_rows(field, n * n, basis.clone())?.transpose();
        let pres = FilteredQuadraticPresentation {
            hom,
            basis,
            alpha,
            beta,
            solver: LinearSolver::new(&m),
            koszul,
        };
        pres.check_equivariance()?;
        Ok(pres)
    }

    /// The homogeneous presentation `α = β = 0` with a canonical basis of `R'`.
    pub fn homogeneous(hom: HomQuadraticPresentation, koszul: KoszulStatus) -> Result<Self> {
        let field = hom.field();
        let order = hom.rep.group().order();
        let n = hom.dim_v();
        let basis = hom.rprime.basis_vectors();
        let alpha = vec![vec![field.zero(); n * order]; basis.len()];
        let beta = vec![vec![field.zero(); order]; basis.len()];
        Self::new(hom, basis, alpha, beta, koszul)
    }

    pub fn field(&self) -> FieldSpec {
        self.hom.field()
    }

    pub fn rep(&self) -> &Representation {
        &self.hom.rep
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn alpha_images(&self) -> &[Vec<Scalar>] {
        &self.alpha
    }

    pub fn beta_images(&self) -> &[Vec<Scalar>] {
        &self.beta
    }

    pub fn with_koszul(mut self, status: KoszulStatus) -> Self {
        self.koszul = status;
        self
    }

    fn coords(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        self.solver.solve(x).ok()
    }

    fn combine(&self, coords: &[Scalar], images: &[Vec<Scalar>], len: usize) -> Vec<Scalar> {
        let mut out = vec![self.field().zero(); len];
        for (c, img) in coords.iter().zip(images) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(img) {
                *o += &(c * x);
            }
        }
        out
    }

    /// `α(x)` for `x ∈ R'`; `None` if `x ∉ R'`.
    pub fn alpha(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let len = self.hom.dim_v() * self.rep().group().order();
        self.coords(x).map(|c| self.combine(&c, &self.alpha, len))
    }

    pub fn beta(&self, x: &[Scalar]) -> Option<Vec<Scalar>> {
        let len = self.rep().group().order();
        self.coords(x).map(|c| self.combine(&c, &self.beta, len))
    }

    /// Checks `α(^g r) = g α(r) g⁻¹` and `β(^g r) = g β(r) g⁻¹` on the basis.
    fn check_equivariance(&self) -> Result<()> {
        let group = self.rep().group();
        let order = group.order();
        let n = self.hom.dim_v();
        let field = self.field();
        for g in group.elements() {
            let act2 = self.rep().tensor_power_matrix(g, 2);
            let act1 = self.rep().matrix(g);
            for (i, r) in self.basis.iter().enumerate() {
                let gr = act2.apply(r);
                let lhs_a = self.alpha(&gr).ok_or_else(|| {
                    Error::NotBimodule(format!("R' is not stable under element {g}"))
                })?;
                let lhs_b = self.beta(&gr).expect("same coordinates");
                let mut rhs_a = vec![field.zero(); n * order];
                for j in 0..n {
                    for h in 0..order {
                        let c = &self.alpha[i][j * order + h];
                        if c.is_zero() {
                            continue;
                        }
                        let ghg = group.conj(g, h);
                        for k in 0..n {
                            rhs_a[k * order + ghg] += &(c * act1.get(k, j));
                        }
                    }
                }
                let mut rhs_b = vec![field.zero(); order];
                for h in 0..order {
                    rhs_b[group.conj(g, h)] += &self.beta[i][h];
                }
                if lhs_a != rhs_a {
                    return Err(Error::NotEquivariant(format!(
                        "alpha fails on R' basis vector {i} under element {g}"
                    )));
                }
                if lhs_b != rhs_b {
                    return Err(Error::NotEquivariant(format!(
                        "beta fails on R' basis vector {i} under element {g}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn skew_algebra(&self) -> SkewAlgebra {
        SkewAlgebra::new(self.hom.rep.clone())
    }

    /// `r⊗e − α(r) − β(r)` for each basis vector `r` of `R'`.
    pub fn relations(&self) -> Vec<SkewElement> {
        let n = self.hom.dim_v();
        let order = self.rep().group().order();
        let e = self.rep().group().identity();
        self.basis
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut x = SkewElement::zero();
                for (idx, c) in r.iter().enumerate() {
                    x.add_term(SkewMonomial::new(vec![idx / n, idx % n], e), c);
                }
                for (idx, c) in self.alpha[i].iter().enumerate() {
                    x.add_term(SkewMonomial::new(vec![idx / order], idx % order), &-c);
                }
                for (g, c) in self.beta[i].iter().enumerate() {
                    x.add_term(SkewMonomial::new(vec![], g), &-c);
                }
                x
            })
            .collect()
    }

    /// The relation space `P ⊂ F²(T)`: right translates of [`Self::relations`].
    pub fn relation_space(&self) -> Subspace {
        let alg = self.skew_algebra();
        let piece = alg.piece(2);
        let mut vecs = Vec::new();
        for x in self.relations() {
            for h in self.rep().group().elements() {
                let xh = alg.multiply(&x, &alg.group_element(h));
                vecs.push(piece.to_dense(self.field(), &xh));
            }
        }
        Subspace::span(self.field(), piece.dim(), vecs).expect("relation coordinates")
    }
}

/// Recovers `(R', α, β)` from a relation space `P ⊂ F²(T)`.
///
/// Fails with `NotBimodule` if `P` is not a kG-subbimodule and with
/// `ConditionIFails` if `P ∩ F¹(T) ≠ 0`.
pub fn normalize_relations(
    rep: &Representation,
    raw: &Subspace,
    koszul: KoszulStatus,
) -> Result<FilteredQuadraticPresentation> {
    let alg = SkewAlgebra::new(rep.clone());
    let piece = alg.piece(2);
    let field = rep.field();
    let group = rep.group();
    let n = rep.dim();
    let order = group.order();
    if raw.ambient_dim() != piece.dim() {
        return Err(Error::AmbientMismatch {
            left: piece.dim(),
            right: raw.ambient_dim(),
        });
    }
    let elements: Vec<SkewElement> = raw
        .basis_vectors()
        .iter()
        .map(|v| piece.from_coords(v.iter().enumerate()))
        .collect();
    for (i, x) in elements.iter().enumerate() {
        for g in group.elements() {
            let left = alg.multiply(&alg.group_element(g), x);
            let right = alg.multiply(x, &alg.group_element(g));
            if !raw.contains(&piece.to_dense(field, &left)) || !raw.contains(&piece.to_dense(field, &right)) {
                return Err(Error::NotBimodule(format!(
                    "basis vector {i} of P leaves P under multiplication by element {g}"
                )));
            }
        }
    }
    let low = piece.dim_at(1);
    let f1 = Subspace::coordinate(field, piece.dim(), &(0..low).collect::<Vec<_>>());
    let meet = raw.intersect(&f1)?;
    if meet.dim() > 0 {
        return Err(Error::ConditionIFails {
            witness: meet.basis_vectors()[0].iter().map(|c| c.to_string()).collect(),
        });
    }
    // π restricted to P is injective; read R' off the identity component.
    let top = piece.dim() - low;
    let e = group.identity();
    let projected: Vec<Vec<Scalar>> = raw.basis_vectors().iter().map(|v| v[low..].to_vec()).collect();
    let pi_p = Subspace::span(field, top, projected.clone())?;
    let e_coords: Vec<usize> = (0..n * n).map(|w| w * order + e).collect();
    let e_part = pi_p.intersect(&Subspace::coordinate(field, top, &e_coords))?;
    let rprime_vecs: Vec<Vec<Scalar>> = e_part
        .basis_vectors()
        .iter()
        .map(|v| e_coords.iter().map(|&c| v[c].clone()).collect())
        .collect();
    if rprime_vecs.len() * order != pi_p.dim() {
        return Err(Error::NotBimodule("the degree-2 part of P is not of the form R'⊗kG".into()));
    }
    let rprime = Subspace::span(field, n * n, rprime_vecs.clone())?;
    let hom = HomQuadraticPresentation::new(rep.clone(), rprime)?;
    // Solve Σ c_i π(p_i) = r⊗e and read off −α(r), −β(r) from Σ c_i p_i.
    let cols = Matrix::from_rows(field, top, projected)?.transpose();
    let solver = LinearSolver::new(&cols);
    let basis_vecs = raw.basis_vectors();
    let mut alpha = Vec::new();
    let mut beta = Vec::new();
    for r in &rprime_vecs {
        let mut target = vec![field.zero(); top];
        for (w, c) in r.iter().enumerate() {
            target[w * order + e] = c.clone();
        }
        let c = solver.solve(&target)?;
        let mut p = vec![field.zero(); piece.dim()];
        for (ci, b) in c.iter().zip(&basis_vecs) {
            for (x, y) in p.iter_mut().zip(b) {
                *x += &(ci * y);
            }
        }
        beta.push(p[..order].iter().map(|x| -x).collect());
        alpha.push(p[order..low].iter().map(|x| -x).collect::<Vec<_>>());
    }
    debug_assert!(alpha.iter().all(|a: &Vec<Scalar>| a.len() == n * order));
    FilteredQuadraticPresentation::new(hom, rprime_vecs, alpha, beta, koszul)
}
