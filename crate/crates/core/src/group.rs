//! Finite groups by multiplication table, their linear representations, the
//! group algebra, and Yetter–Drinfeld gradings.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::linear::sparse::Accumulator;
use crate::linear::{FieldSpec, Matrix, Scalar, SparseVec, Subspace};

/// A finite group given by its (validated) multiplication table.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    mult: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

/// Checks the group axioms exhaustively and returns `(identity, inverse table)`.
pub fn validate_group(mult: &[Vec<usize>]) -> Result<(usize, Vec<usize>)> {
    let n = mult.len();
    if n == 0 {
        return Err(Error::InvalidGroup("empty table".into()));
    }
    for (a, row) in mult.iter().enumerate() {
        if row.len() != n {
            return Err(Error::InvalidGroup(format!("row {a} has length {}", row.len())));
        }
        if let Some(&x) = row.iter().find(|&&x| x >= n) {
            return Err(Error::InvalidGroup(format!("entry {x} in row {a} out of range")));
        }
    }
    let identity = (0..n)
        .find(|&e| (0..n).all(|a| mult[e][a] == a && mult[a][e] == a))
        .ok_or_else(|| Error::InvalidGroup("no two-sided identity".into()))?;
    let mut inverse = vec![0; n];
    for a in 0..n {
        inverse[a] = (0..n)
            .find(|&b| mult[a][b] == identity && mult[b][a] == identity)
            .ok_or_else(|| Error::InvalidGroup(format!("element {a} has no inverse")))?;
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                    return Err(Error::InvalidGroup(format!(
                        "associativity fails at ({a}, {b}, {c})"
                    )));
                }
            }
        }
    }
    Ok((identity, inverse))
}

impl FiniteGroup {
    pub fn from_table(mult: Vec<Vec<usize>>) -> Result<Self> {
        let (identity, inverse) = validate_group(&mult)?;
        Ok(FiniteGroup {
            mult,
            identity,
            inverse,
        })
    }

    pub fn trivial() -> Self {
        Self::cyclic(1)
    }

    /// Z/n with element i standing for g^i.
    pub fn cyclic(n: usize) -> Self {
        let mult = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_table(mult).expect("cyclic table is a group")
    }

    /// S_3 acting on {0,1,2}; elements are permutations listed lexicographically.
    pub fn symmetric3() -> Self {
        let perms = permutations3();
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        let mult = perms
            .iter()
            .map(|a| {
                perms
                    .iter()
                    .map(|b| idx([a[b[0]], a[b[1]], a[b[2]]]))
                    .collect()
            })
            .collect();
        Self::from_table(mult).expect("S3 table is a group")
    }

    pub fn order(&self) -> usize {
        self.mult.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mult[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    /// `h g h^{-1}`
    pub fn conj(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    pub fn pow(&self, g: usize, k: usize) -> usize {
        (0..k).fold(self.identity, |acc, _| self.mul(acc, g))
    }

    pub fn element_order(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mult
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }
}

pub(crate) fn permutations3() -> Vec<[usize; 3]> {
    vec![
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ]
}

/// A linear action of a finite group on `V = k^dim`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    field: FieldSpec,
    dim: usize,
    matrices: Vec<Matrix>,
}

/// Checks that `matrices` define a homomorphism into invertible matrices.
pub fn validate_representation(group: &FiniteGroup, matrices: &[Matrix]) -> Result<()> {
    let bad = |s: String| Err(Error::InvalidRepresentation(s));
    if matrices.len() != group.order() {
        return bad(format!(
            "{} matrices for a group of order {}",
            matrices.len(),
            group.order()
        ));
    }
    let dim = matrices[0].rows();
    let field = matrices[0].field();
    for (g, m) in matrices.iter().enumerate() {
        if m.rows() != dim || m.cols() != dim || m.field() != field {
            return bad(format!("matrix for element {g} has the wrong shape or field"));
        }
    }
    if matrices[group.identity()] != Matrix::identity(field, dim) {
        return bad("identity element does not act as the identity".into());
    }
    for g in group.elements() {
        if Subspace::row_space(&matrices[g]).dim() != dim {
            return bad(format!("matrix for element {g} is singular"));
        }
        for h in group.elements() {
            let prod = matrices[g].mul(&matrices[h])?;
            if prod != matrices[group.mul(g, h)] {
                return bad(format!("rho({g}) rho({h}) != rho({g}*{h})"));
            }
        }
    }
    Ok(())
}

impl Representation {
    pub fn new(group: FiniteGroup, matrices: Vec<Matrix>) -> Result<Self> {
        validate_representation(&group, &matrices)?;
        Ok(Representation {
            field: matrices[0].field(),
            dim: matrices[0].rows(),
            group: Arc::new(group),
            matrices,
        })
    }

    /// Every element acts as the identity on `k^dim`.
    pub fn trivial(group: FiniteGroup, field: FieldSpec, dim: usize) -> Self {
        let matrices = vec![Matrix::identity(field, dim); group.order()];
        Self::new(group, matrices).expect("trivial action")
    }

    /// Z/n acting on k^2 through powers of the Jordan block `[[1,1],[0,1]]`.
    pub fn cyclic_jordan(field: FieldSpec, n: usize) -> Result<Self> {
        let group = FiniteGroup::cyclic(n);
        let matrices = (0..n)
            .map(|i| Matrix::from_i64(field, &[&[1, i as i64], &[0, 1]]))
            .collect();
        Self::new(group, matrices)
    }

    /// Z/2 acting on k^dim by `-id`.
    pub fn sign(field: FieldSpec, dim: usize) -> Self {
        let minus = {
            let mut m = Matrix::zeros(field, dim, dim);
            for i in 0..dim {
                m.set(i, i, field.from_i64(-1));
            }
            m
        };
        Self::new(FiniteGroup::cyclic(2), vec![Matrix::identity(field, dim), minus])
            .expect("sign representation")
    }

    /// S_3 permuting the coordinates of k^3.
    pub fn permutation3(field: FieldSpec) -> Self {
        let matrices = permutations3()
            .iter()
            .map(|p| {
                let mut m = Matrix::zeros(field, 3, 3);
                for (i, &pi) in p.iter().enumerate() {
                    m.set(pi, i, field.one());
                }
                m
            })
            .collect();
        Self::new(FiniteGroup::symmetric3(), matrices).expect("permutation representation")
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.matrices
    }

    /// `^g v_i` as a sparse vector over the basis of V.
    pub fn act_basis(&self, g: usize, i: usize) -> SparseVec {
        let m = &self.matrices[g];
        (0..self.dim)
            .filter(|&r| !m.get(r, i).is_zero())
            .map(|r| (r, m.get(r, i).clone()))
            .collect()
    }

    /// Acts letterwise on a word of basis indices; output is indexed by
    /// [`word_index`] in `V^{⊗len}`.
    pub fn act_word(&self, g: usize, word: &[usize]) -> SparseVec {
        let mut acc: Vec<(usize, Scalar)> = vec![(0, self.field.one())];
        for &letter in word {
            let col = self.act_basis(g, letter);
            let mut next = Vec::with_capacity(acc.len() * col.len());
            for (idx, c) in &acc {
                for (r, x) in &col {
                    next.push((idx * self.dim + r, c * x));
                }
            }
            acc = next;
        }
        let mut a = Accumulator::new();
        for (i, c) in acc {
            a.add(i, &c);
        }
        a.finish()
    }

    /// Diagonal action on `V^{⊗degree}` applied to a sparse vector.
    pub fn act_tensor(&self, g: usize, degree: usize, v: &[(usize, Scalar)]) -> SparseVec {
        let mut acc = Accumulator::new();
        for (idx, c) in v {
            let word = index_word(*idx, degree, self.dim);
            acc.add_scaled(&self.act_word(g, &word), c);
        }
        acc.finish()
    }

    /// Dense matrix of the diagonal action on `V^{⊗degree}`.
    pub fn tensor_power_matrix(&self, g: usize, degree: usize) -> Matrix {
        let mut m = Matrix::identity(self.field, 1);
        for _ in 0..degree {
            m = m.kron(&self.matrices[g]);
        }
        m
    }
}

/// Index of a word in `V^{⊗len}`: base-`dim` digits, first letter most significant.
pub fn word_index(word: &[usize], dim: usize) -> usize {
    word.iter().fold(0, |acc, &l| acc * dim + l)
}

pub fn index_word(mut idx: usize, len: usize, dim: usize) -> Vec<usize> {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = idx % dim;
        idx /= dim;
    }
    w
}

/// An element of the group algebra kG.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupAlgebraElement {
    pub coeffs: Vec<Scalar>,
}

impl GroupAlgebraElement {
    pub fn zero(field: FieldSpec, group: &FiniteGroup) -> Self {
        GroupAlgebraElement {
            coeffs: vec![field.zero(); group.order()],
        }
    }

    pub fn basis(field: FieldSpec, group: &FiniteGroup, g: usize) -> Self {
        let mut e = Self::zero(field, group);
        e.coeffs[g] = field.one();
        e
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
}

pub fn ga_multiply(
    group: &FiniteGroup,
    a: &GroupAlgebraElement,
    b: &GroupAlgebraElement,
) -> GroupAlgebraElement {
    assert_eq!(a.coeffs.len(), group.order());
    assert_eq!(b.coeffs.len(), group.order());
    let field = a.coeffs[0].field();
    let mut out = GroupAlgebraElement::zero(field, group);
    for (g, x) in a.coeffs.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (h, y) in b.coeffs.iter().enumerate() {
            if !y.is_zero() {
                let gh = group.mul(g, h);
                out.coeffs[gh] += &(x * y);
            }
        }
    }
    out
}

/// Two-sided inverse in kG, if `a` is a unit.
pub fn ga_inverse(group: &FiniteGroup, a: &GroupAlgebraElement) -> Option<GroupAlgebraElement> {
    let n = group.order();
    let field = a.coeffs[0].field();
    // Column h of the matrix is a * h.
    let mut m = Matrix::zeros(field, n, n);
    for h in 0..n {
        let prod = ga_multiply(group, a, &GroupAlgebraElement::basis(field, group, h));
        for (g, c) in prod.coeffs.into_iter().enumerate() {
            m.set(g, h, c);
        }
    }
    let target = GroupAlgebraElement::basis(field, group, group.identity()).coeffs;
    let x = crate::linear::solve_linear(&m, &target).ok()?;
    let inv = GroupAlgebraElement { coeffs: x };
    // In a finite-dimensional algebra a right inverse is two-sided.
    Some(inv)
}

/// A G-graded kG-module: a component per basis vector plus the action matrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct YDGrading {
    pub space_dim: usize,
    pub component: Vec<usize>,
    pub action: Vec<Matrix>,
}

impl YDGrading {
    /// Tensor product grading `(V⊗W)_g = ⊕_{xy=g} V_x ⊗ W_y` with diagonal action.
    pub fn tensor(&self, other: &YDGrading, group: &FiniteGroup) -> YDGrading {
        let mut component = Vec::with_capacity(self.space_dim * other.space_dim);
        for &x in &self.component {
            for &y in &other.component {
                component.push(group.mul(x, y));
            }
        }
        let action = self
            .action
            .iter()
            .zip(&other.action)
            .map(|(a, b)| a.kron(b))
            .collect();
        YDGrading {
            space_dim: self.space_dim * other.space_dim,
            component,
            action,
        }
    }

    /// A kG-module placed entirely in the identity component.
    pub fn trivial_grading(rep: &Representation) -> YDGrading {
        YDGrading {
            space_dim: rep.dim(),
            component: vec![rep.group().identity(); rep.dim()],
            action: rep.matrices().to_vec(),
        }
    }

    /// kG with `g`-component spanned by `g` and the conjugation action.
    pub fn group_algebra(group: &FiniteGroup, field: FieldSpec) -> YDGrading {
        let n = group.order();
        let action = group
            .elements()
            .map(|h| {
                let mut m = Matrix::zeros(field, n, n);
                for g in group.elements() {
                    m.set(group.conj(h, g), g, field.one());
                }
                m
            })
            .collect();
        YDGrading {
            space_dim: n,
            component: group.elements().collect(),
            action,
        }
    }
}

/// Checks `h(V_g) ⊆ V_{hgh^{-1}}` for every basis vector and group element.
pub fn check_yd(group: &FiniteGroup, grading: &YDGrading) -> Result<()> {
    if grading.component.len() != grading.space_dim || grading.action.len() != group.order() {
        return Err(Error::DimensionMismatch("YD grading shape".into()));
    }
    for h in group.elements() {
        let m = &grading.action[h];
        for b in 0..grading.space_dim {
            let target = group.conj(h, grading.component[b]);
            for r in 0..grading.space_dim {
                if !m.get(r, b).is_zero() && grading.component[r] != target {
                    return Err(Error::HypothesisViolation(format!(
                        "element {h} sends basis vector {b} outside component {target}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// `f ∘ action_x(g) = action_y(g) ∘ f` for every `g`.
pub fn is_equivariant(f: &Matrix, action_x: &[Matrix], action_y: &[Matrix]) -> bool {
    action_x.iter().zip(action_y).all(|(ax, ay)| {
        let left = f.mul(ax).expect("shapes");
        let right = ay.mul(f).expect("shapes");
        left == right
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn group_validation() {
        assert!(validate_group(FiniteGroup::cyclic(3).table()).is_ok());
        assert!(validate_group(FiniteGroup::cyclic(5).table()).is_ok());
        let mut bad = FiniteGroup::cyclic(3).table().to_vec();
        bad[1][0] = 2;
        assert!(validate_group(&bad).is_err());
        let s3 = FiniteGroup::symmetric3();
        assert_eq!(s3.order(), 6);
        assert_ne!(s3.mul(1, 2), s3.mul(2, 1));
    }

    #[test]
    fn representation_validation() {
        for p in [2u32, 3, 5] {
            let f = FieldSpec::Prime(p);
            assert!(Representation::cyclic_jordan(f, p as usize).is_ok());
        }
        assert_eq!(Representation::sign(FieldSpec::Rationals, 2).dim(), 2);
        let q = FieldSpec::Rationals;
        let g = Matrix::from_i64(q, &[&[1, 1], &[0, 1]]);
        let g2 = g.mul(&g).unwrap();
        let res = Representation::new(FiniteGroup::cyclic(3), vec![Matrix::identity(q, 2), g, g2]);
        assert!(matches!(res, Err(Error::InvalidRepresentation(_))));
    }

    #[test]
    fn group_algebra_products() {
        let f = FieldSpec::Rationals;
        let g = FiniteGroup::cyclic(2);
        let e = GroupAlgebraElement::basis(f, &g, 0);
        let x = GroupAlgebraElement {
            coeffs: vec![f.from_i64(2), f.from_i64(-3)],
        };
        assert_eq!(ga_multiply(&g, &e, &x), x);
        let gen = GroupAlgebraElement::basis(f, &g, 1);
        let ginv = GroupAlgebraElement::basis(f, &g, g.inv(1));
        assert_eq!(ga_multiply(&g, &gen, &ginv), e);
        for field in [FieldSpec::Rationals, FieldSpec::Prime(2), FieldSpec::Prime(3)] {
            let a = GroupAlgebraElement {
                coeffs: vec![field.one(), field.one()],
            };
            let b = GroupAlgebraElement {
                coeffs: vec![field.one(), field.from_i64(-1)],
            };
            assert!(ga_multiply(&g, &a, &b).is_zero());
        }
    }

    #[test]
    fn units_of_group_algebra() {
        let f = FieldSpec::Prime(3);
        let g = FiniteGroup::cyclic(3);
        // 1 - g is nilpotent in char 3, hence not a unit.
        let a = GroupAlgebraElement {
            coeffs: vec![f.one(), f.from_i64(-1), f.zero()],
        };
        assert!(ga_inverse(&g, &a).is_none());
        let b = GroupAlgebraElement {
            coeffs: vec![f.one(), f.one(), f.zero()],
        };
        let inv = ga_inverse(&g, &b).unwrap();
        assert_eq!(ga_multiply(&g, &b, &inv), GroupAlgebraElement::basis(f, &g, 0));
        assert_eq!(ga_multiply(&g, &inv, &b), GroupAlgebraElement::basis(f, &g, 0));
    }

    #[test]
    fn yd_examples() {
        let rep = Representation::cyclic_jordan(FieldSpec::Prime(3), 3).unwrap();
        check_yd(rep.group(), &YDGrading::trivial_grading(&rep)).unwrap();
        let s3 = FiniteGroup::symmetric3();
        check_yd(&s3, &YDGrading::group_algebra(&s3, FieldSpec::Rationals)).unwrap();
        // Putting a vector into a non-central component breaks compatibility.
        let perm = Representation::permutation3(FieldSpec::Rationals);
        let mut bad = YDGrading::trivial_grading(&perm);
        bad.component[0] = 1;
        assert!(check_yd(&s3, &bad).is_err());
    }

    #[test]
    fn equivariance_examples() {
        let q = FieldSpec::Rationals;
        let rep = Representation::sign(q, 2);
        let id = Matrix::identity(q, 2);
        assert!(is_equivariant(&id, rep.matrices(), rep.matrices()));
        assert!(is_equivariant(&Matrix::zeros(q, 2, 4), &tensor_sq(&rep), rep.matrices()));
        // x ⊗ y ↦ x is not equivariant when g = -id.
        let mut proj = Matrix::zeros(q, 2, 4);
        for a in 0..2 {
            for b in 0..2 {
                proj.set(a, a * 2 + b, q.one());
            }
        }
        assert!(!is_equivariant(&proj, &tensor_sq(&rep), rep.matrices()));
    }

    fn tensor_sq(rep: &Representation) -> Vec<Matrix> {
        rep.group()
            .elements()
            .map(|g| rep.tensor_power_matrix(g, 2))
            .collect()
    }

    #[test]
    fn act_word_matches_kronecker() {
        let rep = Representation::cyclic_jordan(FieldSpec::Prime(5), 5).unwrap();
        let m = rep.tensor_power_matrix(2, 3);
        for idx in 0..8 {
            let w = index_word(idx, 3, 2);
            let col: SparseVec = crate::linear::sparse::from_dense(&m.column(idx));
            assert_eq!(rep.act_word(2, &w), col);
        }
    }

    proptest! {
        #[test]
        fn tensor_of_yd_gradings_is_yd(k in 0usize..6, l in 0usize..6) {
            let s3 = FiniteGroup::symmetric3();
            let f = FieldSpec::Prime(5);
            let kg = YDGrading::group_algebra(&s3, f);
            let perm = YDGrading::trivial_grading(&Representation::permutation3(f));
            let pieces = [kg.clone(), perm.clone()];
            let a = &pieces[k % 2];
            let b = &pieces[l % 2];
            let t = a.tensor(b, &s3);
            prop_assert!(check_yd(&s3, &t).is_ok());
        }
    }
}
