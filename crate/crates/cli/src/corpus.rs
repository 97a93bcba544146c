//! Seeded κ corpora run through both the checker and the rewriting oracle.

use pbwlab_core::drinfeld::{corollary_verdict, kappa_relations, kappa_verdict, KappaParam, KappaVerdict};
use pbwlab_core::group::Representation;
use pbwlab_core::oracle::{pbw_oracle_verdict_with, OracleVerdict};
use pbwlab_core::par::Exec;
use pbwlab_core::skew::SkewAlgebra;
use pbwlab_core::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::run::{kappa_label, Caps};
use crate::schema::Family;

/// A replacement for the checker, e.g. a deliberately broken one.
pub type Checker = dyn Fn(&KappaParam) -> Result<KappaVerdict> + Sync;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleOutcome {
    pub index: usize,
    pub checker: String,
    pub oracle: OracleVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub index: usize,
    pub checker: String,
    pub oracle: OracleVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorpusReport {
    pub seed: u64,
    pub count: usize,
    pub family: &'static str,
    pub max_degree: usize,
    pub gen_cap: usize,
    pub samples: Vec<SampleOutcome>,
    pub disagreements: Vec<Disagreement>,
}

/// Definitive conflicts only: PBW against NotPBW, or Fails against a bounded PBW certificate.
fn conflicts(checker: &KappaVerdict, oracle: &OracleVerdict) -> bool {
    matches!(
        (checker, oracle),
        (KappaVerdict::Pbw, OracleVerdict::NotPbw(_)) | (KappaVerdict::Fails { .. }, OracleVerdict::PbwUpTo { .. })
    )
}

/// Draws `count` parameters from a ChaCha8 stream seeded with `seed` and
/// compares verdicts sample by sample. `checker` defaults to the corollary
/// (constant family) or the four conditions.
pub fn cross_validate(
    rep: &Representation,
    family: Family,
    count: usize,
    seed: u64,
    caps: Caps,
    checker: Option<&Checker>,
) -> Result<CorpusReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let linear = family == Family::Kappa;
    let samples = (0..count)
        .map(|_| KappaParam::random(rep.clone(), &mut rng, linear))
        .collect::<Result<Vec<_>>>()?;
    let default_checker = |k: &KappaParam| match family {
        Family::KappaConstant => corollary_verdict(k),
        Family::Kappa => kappa_verdict(k),
    };
    let alg = SkewAlgebra::new(rep.clone());
    // Samples run concurrently; each oracle call stays sequential inside.
    let results = Exec::default().map(samples, |k| -> Result<(KappaVerdict, OracleVerdict)> {
        let v = match checker {
            Some(c) => c(&k)?,
            None => default_checker(&k)?,
        };
        let o = pbw_oracle_verdict_seq(&alg, &k, caps)?;
        Ok((v, o))
    });
    let mut report = CorpusReport {
        seed,
        count,
        family: match family {
            Family::KappaConstant => "kappa_constant",
            Family::Kappa => "kappa",
        },
        max_degree: caps.max_degree,
        gen_cap: caps.gen_cap,
        samples: Vec::with_capacity(count),
        disagreements: Vec::new(),
    };
    for (index, r) in results.into_iter().enumerate() {
        let (v, o) = r?;
        if conflicts(&v, &o) {
            report.disagreements.push(Disagreement {
                index,
                checker: kappa_label(&v),
                oracle: o.clone(),
            });
        }
        report.samples.push(SampleOutcome {
            index,
            checker: kappa_label(&v),
            oracle: o,
        });
    }
    Ok(report)
}

fn pbw_oracle_verdict_seq(alg: &SkewAlgebra, k: &KappaParam, caps: Caps) -> Result<OracleVerdict> {
    let p = kappa_relations(k);
    let r = pbw_oracle_verdict_with(alg, &p, caps.max_degree, caps.gen_cap, Exec::Sequential)?;
    Ok(r.verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use pbwlab_core::linear::FieldSpec;

    #[test]
    fn empty_corpus_has_no_disagreements() {
        let rep = Representation::cyclic_jordan(FieldSpec::Prime(3), 3).unwrap();
        let r = cross_validate(&rep, Family::KappaConstant, 0, 42, Caps::default(), None).unwrap();
        assert!(r.samples.is_empty() && r.disagreements.is_empty());
    }

    #[test]
    fn reports_are_reproducible() {
        let rep = Representation::cyclic_jordan(FieldSpec::Prime(3), 3).unwrap();
        let caps = Caps {
            max_degree: 3,
            gen_cap: 4,
            ..Caps::default()
        };
        let a = cross_validate(&rep, Family::KappaConstant, 4, 7, caps, None).unwrap();
        let b = cross_validate(&rep, Family::KappaConstant, 4, 7, caps, None).unwrap();
        assert_eq!(a, b);
    }
}
