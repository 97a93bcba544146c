use std::fmt;

use serde::Serialize;

use super::koszul::{koszul_check, koszul_component, KoszulReport};
use super::presentation::{FilteredQuadraticPresentation, KoszulStatus};
use crate::error::{Error, Result};
use crate::linear::{Scalar, Subspace};
use crate::oracle::{bimodule_closure, ideal_filtered_span};
use crate::par::Exec;
use crate::skew::{SkewAlgebra, SkewElement, SkewMonomial};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Condition {
    /// `Im(α⊗id − id⊗α) ⊆ R`
    #[serde(rename = "i")]
    Image,
    /// `α∘(α⊗id − id⊗α) = −(β⊗id − id⊗β)`
    #[serde(rename = "ii")]
    Alpha,
    /// `β∘(α⊗id − id⊗α) = 0`
    #[serde(rename = "iii")]
    Beta,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::Image => "(i)",
            Condition::Alpha => "(ii)",
            Condition::Beta => "(iii)",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConditionVerdict {
    Pbw,
    /// `witness` is the basis vector of the overlap space W ⊂ V^{⊗3} where the condition fails.
    Fails { condition: Condition, witness: Vec<Scalar> },
}

impl ConditionVerdict {
    pub fn is_pbw(&self) -> bool {
        matches!(self, ConditionVerdict::Pbw)
    }
}

/// `W = (R'⊗V) ∩ (V⊗R')`, the identity-component part of `(R⊗_B U) ∩ (U⊗_B R)`.
pub fn overlap_space(pres: &FilteredQuadraticPresentation) -> Subspace {
    koszul_component(&pres.hom, 3)
}

/// Runs the bounded Koszul check and records the certified window on success.
pub fn certify_koszul(
    pres: FilteredQuadraticPresentation,
    homological_cap: usize,
    polydeg_cap: usize,
) -> (FilteredQuadraticPresentation, KoszulReport) {
    let report = koszul_check(&pres.hom, homological_cap, polydeg_cap);
    let pres = if report.exact && pres.koszul != KoszulStatus::Asserted {
        pres.with_koszul(KoszulStatus::Certified {
            homological: homological_cap,
            polydeg: polydeg_cap,
        })
    } else {
        pres
    };
    (pres, report)
}

struct Evaluator<'a> {
    pres: &'a FilteredQuadraticPresentation,
    alg: SkewAlgebra,
    n: usize,
}

impl<'a> Evaluator<'a> {
    fn field(&self) -> crate::linear::FieldSpec {
        self.pres.field()
    }

    fn letter(&self, a: usize) -> SkewElement {
        self.alg.word(&[a])
    }

    /// `α(r)` as an element of `V⊗kG` inside `T_k(V)#G`.
    fn alpha_of(&self, r: &[Scalar]) -> Option<SkewElement> {
        let order = self.pres.rep().group().order();
        let img = self.pres.alpha(r)?;
        Some(SkewElement::from_terms(
            img.into_iter()
                .enumerate()
                .map(|(i, c)| (SkewMonomial::new(vec![i / order], i % order), c)),
        ))
    }

    fn beta_of(&self, r: &[Scalar]) -> Option<SkewElement> {
        let img = self.pres.beta(r)?;
        Some(SkewElement::from_terms(
            img.into_iter()
                .enumerate()
                .map(|(g, c)| (SkewMonomial::new(vec![], g), c)),
        ))
    }

    /// Splits a degree-2 element `Σ_h x_h ⊗ h` into its components `x_h ∈ V⊗V`.
    fn components(&self, x: &SkewElement) -> Vec<Vec<Scalar>> {
        let order = self.pres.rep().group().order();
        let mut out = vec![vec![self.field().zero(); self.n * self.n]; order];
        for (m, c) in x.terms() {
            assert_eq!(m.degree(), 2, "expected a degree-2 element");
            out[m.g][m.word[0] * self.n + m.word[1]] = c.clone();
        }
        out
    }

    /// Extends `f: R' → T` right-kG-linearly to `R'⊗kG`.
    fn extend(
        &self,
        x: &SkewElement,
        f: impl Fn(&[Scalar]) -> Option<SkewElement>,
    ) -> SkewElement {
        let mut out = SkewElement::zero();
        for (h, xh) in self.components(x).into_iter().enumerate() {
            if xh.iter().all(Scalar::is_zero) {
                continue;
            }
            let fx = f(&xh).expect("component lies in R'");
            let one = self.field().one();
            out.add_scaled(&self.alg.multiply(&fx, &self.alg.group_element(h)), &one);
        }
        out
    }

    /// `r_c` with `w = Σ_c r_c ⊗ v_c`, and `r'_a` with `w = Σ_a v_a ⊗ r'_a`.
    fn slices(&self, w: &[Scalar]) -> (Vec<Vec<Scalar>>, Vec<Vec<Scalar>>) {
        let n = self.n;
        let right = (0..n)
            .map(|c| (0..n * n).map(|ab| w[ab * n + c].clone()).collect())
            .collect();
        let left = (0..n).map(|a| w[a * n * n..(a + 1) * n * n].to_vec()).collect();
        (right, left)
    }

    fn check(&self, w: &[Scalar]) -> Option<Condition> {
        let (rc, ra) = self.slices(w);
        let one = self.field().one();
        let mut d = SkewElement::zero();
        let mut b = SkewElement::zero();
        for (c, r) in rc.iter().enumerate() {
            let a = self.alpha_of(r).expect("w ∈ R'⊗V");
            d.add_scaled(&self.alg.multiply(&a, &self.letter(c)), &one);
            let be = self.beta_of(r).expect("w ∈ R'⊗V");
            b.add_scaled(&self.alg.multiply(&be, &self.letter(c)), &one);
        }
        for (a, r) in ra.iter().enumerate() {
            let al = self.alpha_of(r).expect("w ∈ V⊗R'");
            d.add_scaled(&self.alg.multiply(&self.letter(a), &al), &-&one);
            let be = self.beta_of(r).expect("w ∈ V⊗R'");
            b.add_scaled(&self.alg.multiply(&self.letter(a), &be), &-&one);
        }
        let rprime = &self.pres.hom.rprime;
        if self
            .components(&d)
            .iter()
            .any(|dh| !rprime.contains(dh))
        {
            return Some(Condition::Image);
        }
        let alpha_d = self.extend(&d, |r| self.alpha_of(r));
        if !alpha_d.add(&b).is_zero() {
            return Some(Condition::Alpha);
        }
        if !self.extend(&d, |r| self.beta_of(r)).is_zero() {
            return Some(Condition::Beta);
        }
        None
    }
}

/// Evaluates conditions (i)–(iii) on a basis of W.
///
/// Requires Koszulity of S to be asserted or certified.
pub fn check_conditions(pres: &FilteredQuadraticPresentation) -> Result<ConditionVerdict> {
    check_conditions_with(pres, Exec::default())
}

pub fn check_conditions_with(pres: &FilteredQuadraticPresentation, exec: Exec) -> Result<ConditionVerdict> {
    if pres.koszul == KoszulStatus::Unknown {
        return Err(Error::NotKoszulCertified);
    }
    Ok(evaluate_conditions(pres, exec))
}

/// The condition evaluation without the Koszul precondition.
pub fn evaluate_conditions(pres: &FilteredQuadraticPresentation, exec: Exec) -> ConditionVerdict {
    let ev = Evaluator {
        pres,
        alg: pres.skew_algebra(),
        n: pres.hom.dim_v(),
    };
    let basis = overlap_space(pres).basis_vectors();
    let results = exec.map(basis.clone(), |w| ev.check(&w));
    for (w, r) in basis.into_iter().zip(results) {
        if let Some(condition) = r {
            return ConditionVerdict::Fails { condition, witness: w };
        }
    }
    ConditionVerdict::Pbw
}

/// `(F¹ P F¹) ∩ F² = P`, tested through the degree-capped ideal span.
pub fn condition_j_holds(pres: &FilteredQuadraticPresentation, gen_cap: usize) -> Result<bool> {
    let alg = pres.skew_algebra();
    let span = ideal_filtered_span(&alg, &pres.relations(), 2, gen_cap)?;
    Ok(span.subspace == pres.relation_space())
}

/// Whether two relation sets generate the same kG-bimodule inside `F²(T)`.
pub fn uniqueness_check(alg: &SkewAlgebra, p1: &[SkewElement], p2: &[SkewElement]) -> Result<bool> {
    let piece = alg.piece(2);
    let span = |p: &[SkewElement]| -> Result<Subspace> {
        let vecs = bimodule_closure(alg, p)?
            .iter()
            .map(|x| piece.to_dense(alg.field(), x))
            .collect();
        Subspace::span(alg.field(), piece.dim(), vecs)
    };
    Ok(span(p1)? == span(p2)?)
}
