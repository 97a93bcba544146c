//! Normal-form arithmetic in the skew group algebra `T_k(V)#G`.
//!
//! Every element is written as a combination of monomials `w ⊗ g` with `w` a
//! word in a basis of V and `g ∈ G`, i.e. group elements are moved to the far
//! right. Products follow `(r⊗g)(s⊗h) = r(^g s) ⊗ gh`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use crate::group::{index_word, word_index, Representation};
use crate::linear::{FieldSpec, Scalar, SparseVec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewMonomial {
    pub word: Vec<usize>,
    pub g: usize,
}

impl SkewMonomial {
    pub fn new(word: Vec<usize>, g: usize) -> Self {
        SkewMonomial { word, g }
    }

    pub fn degree(&self) -> usize {
        self.word.len()
    }
}

/// Degree first, then the word lexicographically, then the group index.
impl Ord for SkewMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.word
            .len()
            .cmp(&other.word.len())
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.g.cmp(&other.g))
    }
}

impl PartialOrd for SkewMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite combination of normal-form monomials; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SkewElement {
    terms: BTreeMap<SkewMonomial, Scalar>,
}

impl SkewElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn monomial(word: Vec<usize>, g: usize, c: Scalar) -> Self {
        let mut e = Self::zero();
        e.add_term(SkewMonomial::new(word, g), &c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (SkewMonomial, Scalar)>) -> Self {
        let mut e = Self::zero();
        for (m, c) in terms {
            e.add_term(m, &c);
        }
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&SkewMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &SkewMonomial) -> Option<&Scalar> {
        self.terms.get(m)
    }

    pub fn add_term(&mut self, m: SkewMonomial, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn add_scaled(&mut self, other: &SkewElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, x) in &other.terms {
            self.add_term(m.clone(), &(x * c));
        }
    }

    pub fn scaled(&self, c: &Scalar) -> SkewElement {
        let mut out = SkewElement::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn sub(&self, other: &SkewElement) -> SkewElement {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), &-x);
        }
        out
    }

    pub fn add(&self, other: &SkewElement) -> SkewElement {
        let mut out = self.clone();
        for (m, x) in &other.terms {
            out.add_term(m.clone(), x);
        }
        out
    }

    /// Filtered degree (top word length); `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().next_back().map(SkewMonomial::degree)
    }

    /// The largest monomial and its coefficient.
    pub fn leading_term(&self) -> Option<(&SkewMonomial, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn homogeneous_part(&self, degree: usize) -> SkewElement {
        SkewElement {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

/// Projection onto the degree-2 homogeneous component.
pub fn pi(x: &SkewElement) -> SkewElement {
    x.homogeneous_part(2)
}

/// Top-degree homogeneous part; zero for zero.
pub fn leading_homogeneous(x: &SkewElement) -> SkewElement {
    match x.degree() {
        Some(d) => x.homogeneous_part(d),
        None => SkewElement::zero(),
    }
}

/// Coordinates on `F^m(T)` ordered compatibly with the monomial order.
///
/// The monomial `w⊗g` of degree `d` sits at `|G|·Σ_{j<d} n^j + index(w)·|G| + g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredPiece {
    pub max_degree: usize,
    pub dim_v: usize,
    pub group_order: usize,
    offsets: Vec<usize>,
}

impl FilteredPiece {
    pub fn new(dim_v: usize, group_order: usize, max_degree: usize) -> Self {
        let mut offsets = Vec::with_capacity(max_degree + 2);
        let mut acc = 0;
        let mut pow = 1;
        for _ in 0..=max_degree + 1 {
            offsets.push(acc);
            acc += pow * group_order;
            pow *= dim_v;
        }
        FilteredPiece {
            max_degree,
            dim_v,
            group_order,
            offsets,
        }
    }

    pub fn dim(&self) -> usize {
        self.offsets[self.max_degree + 1]
    }

    /// Dimension of `F^d(T)` for `d ≤ max_degree`.
    pub fn dim_at(&self, d: usize) -> usize {
        self.offsets[d + 1]
    }

    pub fn offset(&self, d: usize) -> usize {
        self.offsets[d]
    }

    pub fn index(&self, m: &SkewMonomial) -> usize {
        assert!(m.degree() <= self.max_degree, "monomial above the filtered piece");
        self.offsets[m.degree()] + word_index(&m.word, self.dim_v) * self.group_order + m.g
    }

    pub fn monomial(&self, idx: usize) -> SkewMonomial {
        let d = (0..=self.max_degree)
            .find(|&d| idx < self.offsets[d + 1])
            .expect("index inside the filtered piece");
        let rel = idx - self.offsets[d];
        SkewMonomial::new(
            index_word(rel / self.group_order, d, self.dim_v),
            rel % self.group_order,
        )
    }

    pub fn degree_of(&self, idx: usize) -> usize {
        (0..=self.max_degree)
            .find(|&d| idx < self.offsets[d + 1])
            .expect("index inside the filtered piece")
    }

    pub fn to_sparse(&self, x: &SkewElement) -> SparseVec {
        // Monomial order and coordinate order agree, so the result is already sorted.
        x.terms().map(|(m, c)| (self.index(m), c.clone())).collect()
    }

    pub fn to_dense(&self, field: FieldSpec, x: &SkewElement) -> Vec<Scalar> {
        let mut v = vec![field.zero(); self.dim()];
        for (m, c) in x.terms() {
            v[self.index(m)] = c.clone();
        }
        v
    }

    pub fn from_coords<'a>(&self, coords: impl IntoIterator<Item = (usize, &'a Scalar)>) -> SkewElement {
        SkewElement::from_terms(
            coords
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (self.monomial(i), c.clone())),
        )
    }
}

/// The ambient algebra `T_k(V)#G` for a fixed representation.
#[derive(Clone, Debug)]
pub struct SkewAlgebra {
    rep: Arc<Representation>,
}

impl SkewAlgebra {
    pub fn new(rep: Representation) -> Self {
        SkewAlgebra { rep: Arc::new(rep) }
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn field(&self) -> FieldSpec {
        self.rep.field()
    }

    pub fn dim_v(&self) -> usize {
        self.rep.dim()
    }

    pub fn group_order(&self) -> usize {
        self.rep.group().order()
    }

    pub fn piece(&self, max_degree: usize) -> FilteredPiece {
        FilteredPiece::new(self.dim_v(), self.group_order(), max_degree)
    }

    pub fn one(&self) -> SkewElement {
        self.group_element(self.rep.group().identity())
    }

    pub fn group_element(&self, g: usize) -> SkewElement {
        SkewElement::monomial(Vec::new(), g, self.field().one())
    }

    /// `w ⊗ e`
    pub fn word(&self, w: &[usize]) -> SkewElement {
        SkewElement::monomial(w.to_vec(), self.rep.group().identity(), self.field().one())
    }

    /// `(r⊗g)(s⊗h) = r(^g s)⊗gh`
    pub fn multiply_monomials(&self, a: &SkewMonomial, b: &SkewMonomial, c: &Scalar, out: &mut SkewElement) {
        let gh = self.rep.group().mul(a.g, b.g);
        if b.word.is_empty() {
            out.add_term(SkewMonomial::new(a.word.clone(), gh), c);
            return;
        }
        for (idx, x) in self.rep.act_word(a.g, &b.word) {
            let mut w = Vec::with_capacity(a.word.len() + b.word.len());
            w.extend_from_slice(&a.word);
            w.extend(index_word(idx, b.word.len(), self.dim_v()));
            out.add_term(SkewMonomial::new(w, gh), &(&x * c));
        }
    }

    pub fn multiply(&self, a: &SkewElement, b: &SkewElement) -> SkewElement {
        let mut out = SkewElement::zero();
        for (ma, ca) in a.terms() {
            for (mb, cb) in b.terms() {
                self.multiply_monomials(ma, mb, &(ca * cb), &mut out);
            }
        }
        out
    }

    /// `g x g⁻¹`
    pub fn conjugate(&self, g: usize, x: &SkewElement) -> SkewElement {
        let ginv = self.rep.group().inv(g);
        self.multiply(
            &self.multiply(&self.group_element(g), x),
            &self.group_element(ginv),
        )
    }

    /// `w1 · x · (w2 ⊗ g)`
    pub fn sandwich(&self, w1: &[usize], x: &SkewElement, w2: &[usize], g: usize) -> SkewElement {
        let right = SkewElement::monomial(w2.to_vec(), g, self.field().one());
        let mut out = SkewElement::zero();
        for (m, c) in x.terms() {
            let mut prefixed = w1.to_vec();
            prefixed.extend_from_slice(&m.word);
            let left = SkewMonomial::new(prefixed, m.g);
            for (mr, cr) in right.terms() {
                self.multiply_monomials(&left, mr, &(c * cr), &mut out);
            }
        }
        out
    }
}

/// All words of length `len` over `n` letters, in lexicographic order.
pub fn words(n: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let count = n.checked_pow(len as u32).expect("word count overflow");
    (0..count).map(move |i| index_word(i, len, n))
}
