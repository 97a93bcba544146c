//! Degree-truncated ideal spans and rewriting: an independent semi-decision of
//! the PBW property that does not use the cohomological conditions.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::group::{ga_inverse, GroupAlgebraElement};
use crate::linear::{Echelon, Subspace};
use crate::par::Exec;
use crate::skew::{pi, words, SkewAlgebra, SkewElement, SkewMonomial};

/// Basis of the kG-bimodule generated by `p` (every element of degree ≤ 2).
pub fn bimodule_closure(alg: &SkewAlgebra, p: &[SkewElement]) -> Result<Vec<SkewElement>> {
    if let Some(bad) = p.iter().find(|x| x.degree().unwrap_or(0) > 2) {
        return Err(Error::DimensionMismatch(format!(
            "relation of degree {} exceeds 2",
            bad.degree().unwrap_or(0)
        )));
    }
    let piece = alg.piece(2);
    let mut ech = Echelon::new(alg.field());
    let group = alg.rep().group();
    for x in p {
        for g in group.elements() {
            let gx = alg.multiply(&alg.group_element(g), x);
            for h in group.elements() {
                let gxh = alg.multiply(&gx, &alg.group_element(h));
                ech.insert(piece.to_sparse(&gxh));
            }
        }
    }
    Ok(ech
        .rows()
        .iter()
        .map(|r| piece.from_coords(r.iter().map(|(i, c)| (*i, c))))
        .collect())
}

/// Incrementally built span of `{w₁·q·w₂}` graded by generation degree `|w₁| + 2 + |w₂|`.
struct IdealBuilder<'a> {
    alg: &'a SkewAlgebra,
    q: Vec<SkewElement>,
    echelon: Echelon,
    piece_cap: usize,
    generated_to: usize,
    exec: Exec,
}

impl<'a> IdealBuilder<'a> {
    fn new(alg: &'a SkewAlgebra, q: Vec<SkewElement>, piece_cap: usize, exec: Exec) -> Self {
        IdealBuilder {
            alg,
            q,
            echelon: Echelon::new(alg.field()),
            piece_cap,
            generated_to: 1,
            exec,
        }
    }

    /// Adds all rows of generation degree `k`.
    fn add_batch(&mut self, k: usize) {
        assert!(k <= self.piece_cap);
        let n = self.alg.dim_v();
        let e = self.alg.rep().group().identity();
        let piece = self.alg.piece(self.piece_cap);
        let mut jobs = Vec::new();
        if k >= 2 {
            for a in 0..=k - 2 {
                for w1 in words(n, a) {
                    for w2 in words(n, k - 2 - a) {
                        for qi in 0..self.q.len() {
                            jobs.push((w1.clone(), w2.clone(), qi));
                        }
                    }
                }
            }
        }
        let alg = self.alg;
        let q = &self.q;
        let rows = self.exec.map(jobs, |(w1, w2, qi)| {
            piece.to_sparse(&alg.sandwich(&w1, &q[qi], &w2, e))
        });
        for r in rows {
            self.echelon.insert(r);
        }
        self.generated_to = k;
    }

    fn extend_to(&mut self, k: usize) {
        while self.generated_to < k {
            let next = self.generated_to + 1;
            self.add_batch(next);
        }
    }

    /// `dim` of the current span intersected with `F^m(T)`.
    fn filtered_rank(&self, m: usize) -> usize {
        let bound = self.alg.piece(m).dim();
        self.echelon.pivots().iter().take_while(|&&p| p < bound).count()
    }

    fn filtered_subspace(&self, m: usize) -> Subspace {
        let piece = self.alg.piece(m);
        let bound = piece.dim();
        let field = self.alg.field();
        let vecs = self
            .echelon
            .rows()
            .into_iter()
            .filter(|r| r.last().is_some_and(|(i, _)| *i < bound))
            .map(|r| crate::linear::sparse::to_dense(field, bound, &r))
            .collect();
        Subspace::span(field, bound, vecs).expect("rows lie in the filtered piece")
    }
}

/// Dimensions of the degree-`d` components of the ideal generated by `π(q)`, `d ≤ max_degree`.
pub fn homogeneous_ideal_dims(alg: &SkewAlgebra, q: &[SkewElement], max_degree: usize, exec: Exec) -> Vec<usize> {
    let hom: Vec<SkewElement> = q.iter().map(pi).filter(|x| !x.is_zero()).collect();
    let n = alg.dim_v();
    let e = alg.rep().group().identity();
    let piece = alg.piece(max_degree);
    (0..=max_degree)
        .map(|d| {
            if d < 2 || hom.is_empty() {
                return 0;
            }
            let mut jobs = Vec::new();
            for a in 0..=d - 2 {
                for w1 in words(n, a) {
                    for w2 in words(n, d - 2 - a) {
                        for qi in 0..hom.len() {
                            jobs.push((w1.clone(), w2.clone(), qi));
                        }
                    }
                }
            }
            let rows = exec.map(jobs, |(w1, w2, qi)| piece.to_sparse(&alg.sandwich(&w1, &hom[qi], &w2, e)));
            let mut ech = Echelon::new(alg.field());
            for r in rows {
                ech.insert(r);
            }
            ech.rank()
        })
        .collect()
}

/// A lower approximation of `⟨P⟩ ∩ F^m(T)`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdealSpan {
    pub subspace: Subspace,
    /// The spans for caps `D` and `D + 1` agree.
    pub stabilized: bool,
}

pub fn ideal_filtered_span(alg: &SkewAlgebra, p: &[SkewElement], m: usize, gen_cap: usize) -> Result<IdealSpan> {
    if gen_cap < m {
        return Err(Error::CapTooSmall { gen_cap, degree: m });
    }
    let q = bimodule_closure(alg, p)?;
    let mut b = IdealBuilder::new(alg, q, gen_cap + 1, Exec::default());
    b.extend_to(gen_cap);
    let subspace = b.filtered_subspace(m);
    let before = b.filtered_rank(m);
    b.extend_to(gen_cap + 1);
    Ok(IdealSpan {
        subspace,
        stabilized: b.filtered_rank(m) == before,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleDims {
    /// Upper bounds for `dim F^m(T/⟨P⟩)`, `m = 0..=M`.
    pub filtered: Vec<usize>,
    /// Successive differences of `filtered`.
    pub graded: Vec<usize>,
    /// Whether raising the generation cap by one leaves `filtered[m]` unchanged.
    pub stabilized: Vec<bool>,
    /// Exact `dim (T/⟨π(P)⟩)_d`, `d = 0..=M`.
    pub homogeneous: Vec<usize>,
}

fn differences(v: &[usize]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .map(|(i, &x)| if i == 0 { x } else { x - v[i - 1] })
        .collect()
}

fn cumulative(v: &[usize]) -> Vec<usize> {
    v.iter()
        .scan(0, |acc, &x| {
            *acc += x;
            Some(*acc)
        })
        .collect()
}

pub fn oracle_dims(alg: &SkewAlgebra, p: &[SkewElement], max_degree: usize, gen_cap: usize) -> Result<OracleDims> {
    oracle_dims_with(alg, p, max_degree, gen_cap, Exec::default())
}

pub fn oracle_dims_with(
    alg: &SkewAlgebra,
    p: &[SkewElement],
    max_degree: usize,
    gen_cap: usize,
    exec: Exec,
) -> Result<OracleDims> {
    if gen_cap < max_degree {
        return Err(Error::CapTooSmall {
            gen_cap,
            degree: max_degree,
        });
    }
    let q = bimodule_closure(alg, p)?;
    let free_dims = free_graded_dims(alg, max_degree);
    let hom_ideal = homogeneous_ideal_dims(alg, &q, max_degree, exec);
    let mut b = IdealBuilder::new(alg, q, gen_cap + 1, exec);
    b.extend_to(gen_cap);
    let piece = alg.piece(max_degree);
    let at_cap: Vec<usize> = (0..=max_degree).map(|m| b.filtered_rank(m)).collect();
    b.extend_to(gen_cap + 1);
    let stabilized = (0..=max_degree).map(|m| b.filtered_rank(m) == at_cap[m]).collect();
    let filtered: Vec<usize> = (0..=max_degree).map(|m| piece.dim_at(m) - at_cap[m]).collect();
    Ok(OracleDims {
        graded: differences(&filtered),
        filtered,
        stabilized,
        homogeneous: free_dims.iter().zip(&hom_ideal).map(|(f, h)| f - h).collect(),
    })
}

/// `|G|·n^d` for `d = 0..=max_degree`.
pub fn free_graded_dims(alg: &SkewAlgebra, max_degree: usize) -> Vec<usize> {
    (0..=max_degree)
        .map(|d| alg.group_order() * alg.dim_v().pow(d as u32))
        .collect()
}

/// A rewriting rule `lead ⊗ e → tail`, with every term of `tail` below the lead.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    pub lead: SkewMonomial,
    pub tail: SkewElement,
}

impl Rule {
    /// `lead − tail`, an element of the ideal.
    pub fn element(&self, alg: &SkewAlgebra) -> SkewElement {
        SkewElement::monomial(self.lead.word.clone(), self.lead.g, alg.field().one()).sub(&self.tail)
    }
}

/// Result of a degree-truncated completion.
#[derive(Clone, Debug)]
pub struct RewriteSystem {
    pub rules: Vec<Rule>,
    pub truncation: usize,
    /// No unresolved ambiguity of degree ≤ `truncation` remains and no element was discarded.
    pub complete: bool,
    index: HashMap<Vec<usize>, usize>,
}

impl RewriteSystem {
    fn find_reducer(&self, word: &[usize]) -> Option<(usize, usize)> {
        for i in 0..=word.len() {
            for j in i..=word.len() {
                if let Some(&r) = self.index.get(&word[i..j]) {
                    return Some((r, i));
                }
            }
        }
        None
    }

    pub fn is_normal_word(&self, word: &[usize]) -> bool {
        self.find_reducer(word).is_none()
    }

    /// Fully reduces `x`; the result has only normal monomials.
    pub fn normal_form(&self, alg: &SkewAlgebra, x: &SkewElement) -> SkewElement {
        let mut x = x.clone();
        let elements: Vec<SkewElement> = self.rules.iter().map(|r| r.element(alg)).collect();
        loop {
            let hit = x.terms().rev().find_map(|(m, c)| {
                self.find_reducer(&m.word).map(|(r, pos)| (m.clone(), c.clone(), r, pos))
            });
            let Some((m, c, r, pos)) = hit else {
                return x;
            };
            let len = self.rules[r].lead.word.len();
            let reducer = alg.sandwich(&m.word[..pos], &elements[r], &m.word[pos + len..], m.g);
            x.add_scaled(&reducer, &-c);
        }
    }

    /// Number of normal words of each length `0..=max_degree`.
    pub fn normal_word_counts(&self, dim_v: usize, max_degree: usize) -> Vec<usize> {
        (0..=max_degree)
            .map(|d| words(dim_v, d).filter(|w| self.is_normal_word(w)).count())
            .collect()
    }

    /// `dim F^m` of the quotient predicted by the normal words.
    pub fn filtered_dims(&self, alg: &SkewAlgebra, max_degree: usize) -> Vec<usize> {
        cumulative(
            &self
                .normal_word_counts(alg.dim_v(), max_degree)
                .iter()
                .map(|c| c * alg.group_order())
                .collect::<Vec<_>>(),
        )
    }
}

struct Completion<'a> {
    alg: &'a SkewAlgebra,
    cap: usize,
    system: RewriteSystem,
    slots: Vec<Option<Rule>>,
    queue: BinaryHeap<Reverse<(usize, u64)>>,
    pending: BTreeMap<u64, SkewElement>,
    seq: u64,
}

impl<'a> Completion<'a> {
    fn push(&mut self, x: SkewElement) {
        let Some(d) = x.degree() else { return };
        if d > self.cap {
            return;
        }
        self.queue.push(Reverse((d, self.seq)));
        self.pending.insert(self.seq, x);
        self.seq += 1;
    }

    fn rebuild_system(&mut self) {
        self.system.rules = self.slots.iter().flatten().cloned().collect();
        self.system.index = self
            .system
            .rules
            .iter()
            .enumerate()
            .map(|(i, r)| (r.lead.word.clone(), i))
            .collect();
    }

    fn step(&mut self, x: SkewElement) {
        let y = self.system.normal_form(self.alg, &x);
        let Some((lead, _)) = y.leading_term() else { return };
        let u = lead.word.clone();
        let group = self.alg.rep().group();
        let field = self.alg.field();
        let mut c = GroupAlgebraElement::zero(field, group);
        for g in group.elements() {
            if let Some(x) = y.coefficient(&SkewMonomial::new(u.clone(), g)) {
                c.coeffs[g] = x.clone();
            }
        }
        let Some(cinv) = ga_inverse(group, &c) else {
            self.system.complete = false;
            return;
        };
        let cinv_elem = SkewElement::from_terms(
            cinv.coeffs
                .iter()
                .enumerate()
                .map(|(g, s)| (SkewMonomial::new(Vec::new(), g), s.clone())),
        );
        let y = self.alg.multiply(&y, &cinv_elem);
        let lead = SkewMonomial::new(u.clone(), group.identity());
        let tail = SkewElement::monomial(u.clone(), group.identity(), field.one()).sub(&y);
        let rule = Rule { lead, tail };

        // Rules whose lead contains the new lead are superseded.
        let mut requeue = Vec::new();
        for slot in self.slots.iter_mut() {
            if let Some(old) = slot {
                if contains_subword(&old.lead.word, &u) {
                    requeue.push(old.element(self.alg));
                    *slot = None;
                }
            }
        }
        let new_elem = rule.element(self.alg);
        let existing: Vec<Rule> = self.slots.iter().flatten().cloned().collect();
        self.slots.push(Some(rule.clone()));
        self.rebuild_system();
        for x in requeue {
            self.push(x);
        }
        for g in group.elements() {
            if g != group.identity() {
                let conj = self.alg.conjugate(g, &new_elem);
                self.push(conj);
            }
        }
        self.push_overlaps(&rule, &rule);
        for old in &existing {
            self.push_overlaps(&rule, old);
            self.push_overlaps(old, &rule);
        }
    }

    /// Ambiguities `u₁ = a b`, `u₂ = b c` with `b` a proper nonempty overlap.
    fn push_overlaps(&mut self, r1: &Rule, r2: &Rule) {
        let (u1, u2) = (&r1.lead.word, &r2.lead.word);
        let e1 = r1.element(self.alg);
        let e2 = r2.element(self.alg);
        let e = self.alg.rep().group().identity();
        for k in 1..u1.len().min(u2.len()) {
            if u1[u1.len() - k..] != u2[..k] {
                continue;
            }
            if u1.len() + u2.len() - k > self.cap {
                continue;
            }
            let left = self.alg.sandwich(&[], &e1, &u2[k..], e);
            let right = self.alg.sandwich(&u1[..u1.len() - k], &e2, &[], e);
            self.push(left.sub(&right));
        }
    }
}

fn contains_subword(word: &[usize], sub: &[usize]) -> bool {
    sub.is_empty() || word.windows(sub.len()).any(|w| w == sub)
}

/// Completes the bimodule generated by `p` to a rewriting system, resolving
/// ambiguities of degree ≤ `cap` in increasing degree (FIFO within a degree).
pub fn truncated_completion(alg: &SkewAlgebra, p: &[SkewElement], cap: usize) -> Result<RewriteSystem> {
    let q = bimodule_closure(alg, p)?;
    let mut c = Completion {
        alg,
        cap,
        system: RewriteSystem {
            rules: Vec::new(),
            truncation: cap,
            complete: true,
            index: HashMap::new(),
        },
        slots: Vec::new(),
        queue: BinaryHeap::new(),
        pending: BTreeMap::new(),
        seq: 0,
    };
    for x in q {
        c.push(x);
    }
    while let Some(Reverse((_, s))) = c.queue.pop() {
        let x = c.pending.remove(&s).expect("queued element");
        c.step(x);
    }
    Ok(c.system)
}

/// Where the oracle first saw the ideal exceed its homogeneous prediction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NotPbwWitness {
    /// Smallest `m` with `dim(⟨P⟩ ∩ F^m) > Σ_{d≤m} dim ⟨π(P)⟩_d`.
    pub drop_degree: usize,
    /// Generation degree of the products that first exhibit the excess.
    pub source_degree: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum OracleVerdict {
    NotPbw(NotPbwWitness),
    PbwUpTo { max_degree: usize },
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleReport {
    pub verdict: OracleVerdict,
    pub gen_cap: usize,
    /// Upper bounds for `dim F^m(T/⟨P⟩)` at the cap where the run stopped.
    pub filtered: Vec<usize>,
    /// Cumulative dims of `T/⟨π(P)⟩`.
    pub homogeneous_filtered: Vec<usize>,
    pub completion_complete: Option<bool>,
    pub completion_filtered: Option<Vec<usize>>,
}

pub fn pbw_oracle_verdict(alg: &SkewAlgebra, p: &[SkewElement], max_degree: usize, gen_cap: usize) -> Result<OracleReport> {
    pbw_oracle_verdict_with(alg, p, max_degree, gen_cap, Exec::default())
}

pub fn pbw_oracle_verdict_with(
    alg: &SkewAlgebra,
    p: &[SkewElement],
    max_degree: usize,
    gen_cap: usize,
    exec: Exec,
) -> Result<OracleReport> {
    if gen_cap < max_degree {
        return Err(Error::CapTooSmall {
            gen_cap,
            degree: max_degree,
        });
    }
    let q = bimodule_closure(alg, p)?;
    let piece = alg.piece(gen_cap);
    let free = free_graded_dims(alg, gen_cap);
    let hom_ideal = homogeneous_ideal_dims(alg, &q, gen_cap, exec);
    let hom_quot: Vec<usize> = free.iter().zip(&hom_ideal).map(|(f, h)| f - h).collect();
    let hom_cum = cumulative(&hom_quot);
    let hom_ideal_cum = cumulative(&hom_ideal);

    let mut b = IdealBuilder::new(alg, q.clone(), gen_cap, exec);
    for k in 2..=gen_cap {
        b.extend_to(k);
        if let Some(m) = (0..=gen_cap).find(|&m| b.filtered_rank(m) > hom_ideal_cum[m]) {
            let filtered = (0..=max_degree).map(|m| piece.dim_at(m) - b.filtered_rank(m)).collect();
            return Ok(OracleReport {
                verdict: OracleVerdict::NotPbw(NotPbwWitness {
                    drop_degree: m,
                    source_degree: k,
                }),
                gen_cap: k,
                filtered,
                homogeneous_filtered: hom_cum[..=max_degree].to_vec(),
                completion_complete: None,
                completion_filtered: None,
            });
        }
    }
    let filtered: Vec<usize> = (0..=max_degree).map(|m| piece.dim_at(m) - b.filtered_rank(m)).collect();
    let rs = truncated_completion(alg, p, gen_cap)?;
    let completion_filtered = rs.filtered_dims(alg, max_degree);
    let agree = filtered[..] == hom_cum[..=max_degree] && completion_filtered[..] == hom_cum[..=max_degree];
    let verdict = if agree && rs.complete {
        OracleVerdict::PbwUpTo { max_degree }
    } else {
        OracleVerdict::Inconclusive
    };
    Ok(OracleReport {
        verdict,
        gen_cap,
        filtered,
        homogeneous_filtered: hom_cum[..=max_degree].to_vec(),
        completion_complete: Some(rs.complete),
        completion_filtered: Some(completion_filtered),
    })
}

/// Helper for building relations from integer coefficients on monomials.
pub fn element_from(alg: &SkewAlgebra, terms: &[(&[usize], usize, i64)]) -> SkewElement {
    let f = alg.field();
    SkewElement::from_terms(
        terms
            .iter()
            .map(|(w, g, c)| (SkewMonomial::new(w.to_vec(), *g), f.from_i64(*c))),
    )
}
