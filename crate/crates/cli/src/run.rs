use std::fs;
use std::path::PathBuf;

use pbwlab_core::drinfeld::{kappa_relations, kappa_verdict, KappaVerdict};
use pbwlab_core::group::FiniteGroup;
use pbwlab_core::linear::Scalar;
use pbwlab_core::oracle::{pbw_oracle_verdict, OracleReport, OracleVerdict};
use pbwlab_core::par::Exec;
use pbwlab_core::pbw::{certify_koszul, check_conditions, koszul_check, Condition, ConditionVerdict, KoszulReport, KoszulStatus};
use pbwlab_core::resolution::{
    bar_resolution_kg, build_x, homology_dims, koszul_resolution, periodic_resolution_cyclic, HomologyReport,
};
use pbwlab_core::skew::{SkewAlgebra, SkewElement};
use pbwlab_core::Error;
use serde::Serialize;
use serde_json::{json, Value};

use crate::corpus::cross_validate;
use crate::schema::{parse, InputError, InputFile};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    CheckPbw,
    CheckKappa,
    Oracle,
    CrossValidate,
    Resolution(Example),
    KoszulCheck,
}

/// Which resolution of `kG` feeds the twisted product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Example {
    /// The 2-periodic resolution of `Z/p`.
    CyclicP,
    /// The bar resolution of the group in the input file.
    Custom,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub max_degree: usize,
    pub gen_cap: usize,
    pub homological_cap: usize,
    pub polydeg_cap: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_degree: 4,
            gen_cap: 7,
            homological_cap: 4,
            polydeg_cap: 6,
        }
    }
}

#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: Command,
    pub input: PathBuf,
    pub caps: Caps,
    /// Present exactly for cross-validation.
    pub seed: Option<u64>,
    pub count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Fails = 1,
    Inconclusive = 2,
    InputError = 3,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub exit: Exit,
}

impl Outcome {
    fn new(report: impl Serialize, exit: Exit) -> Self {
        Outcome {
            report: serde_json::to_value(report).expect("reports serialize"),
            exit,
        }
    }

    fn input_error(e: InputError) -> Self {
        Outcome {
            report: json!({"verdict": "input_error", "path": e.path, "message": e.message}),
            exit: Exit::InputError,
        }
    }
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(ToString::to_string).collect()
}

fn usage(message: impl ToString) -> InputError {
    InputError {
        path: ".".into(),
        message: message.to_string(),
    }
}

/// Runs one job. Never panics on bad input: those become exit code 3.
pub fn run(job: &JobSpec) -> Outcome {
    match try_run(job) {
        Ok(o) => o,
        Err(e) => Outcome::input_error(e),
    }
}

fn try_run(job: &JobSpec) -> Result<Outcome, InputError> {
    validate(job)?;
    let text = fs::read_to_string(&job.input).map_err(|e| usage(format!("{}: {e}", job.input.display())))?;
    let input = parse(&text)?;
    match job.command {
        Command::CheckPbw => check_pbw(&input, job.caps),
        Command::CheckKappa => check_kappa(&input),
        Command::Oracle => oracle(&input, job.caps),
        Command::CrossValidate => {
            let rep = input.representation()?;
            let seed = job.seed.expect("validated");
            let report = cross_validate(&rep, input.family, job.count, seed, job.caps, None).map_err(usage)?;
            let exit = if report.disagreements.is_empty() { Exit::Success } else { Exit::Fails };
            Ok(Outcome::new(report, exit))
        }
        Command::Resolution(example) => resolution(&input, example, job.caps),
        Command::KoszulCheck => {
            let hom = input.hom_presentation()?;
            let report = koszul_check(&hom, job.caps.homological_cap, job.caps.polydeg_cap);
            let exit = if report.exact { Exit::Success } else { Exit::Fails };
            Ok(Outcome::new(report, exit))
        }
    }
}

fn validate(job: &JobSpec) -> Result<(), InputError> {
    let c = job.caps;
    if [c.max_degree, c.gen_cap, c.homological_cap, c.polydeg_cap].contains(&0) {
        return Err(usage("caps must be positive"));
    }
    if job.seed.is_some() != (job.command == Command::CrossValidate) {
        return Err(usage("a seed is required for cross-validate and only there"));
    }
    if job.command == Command::Oracle && c.gen_cap < c.max_degree {
        return Err(usage(Error::CapTooSmall {
            gen_cap: c.gen_cap,
            degree: c.max_degree,
        }));
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum KoszulWindow {
    Asserted,
    Certified { homological: usize, polydeg: usize },
}

#[derive(Serialize)]
struct PbwReport {
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    koszul: Option<KoszulWindow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    koszul_check: Option<KoszulReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<ConditionWitness>,
}

#[derive(Serialize)]
struct ConditionWitness {
    condition: Condition,
    /// Filtered degree of the component where the identity breaks:
    /// (i) lands outside `R` in degree 2, (ii) in `V⊗kG`, (iii) in `kG`.
    degree: usize,
    /// Basis vector of the overlap space in `V^{⊗3}`.
    overlap: Vec<String>,
}

fn check_pbw(input: &InputFile, caps: Caps) -> Result<Outcome, InputError> {
    let mut pres = input.presentation()?;
    let mut koszul_report = None;
    if pres.koszul == KoszulStatus::Unknown {
        let (p, report) = certify_koszul(pres, caps.homological_cap, caps.polydeg_cap);
        pres = p;
        let exact = report.exact;
        koszul_report = Some(report);
        if !exact {
            let r = PbwReport {
                verdict: "inconclusive",
                koszul: None,
                koszul_check: koszul_report,
                witness: None,
            };
            return Ok(Outcome::new(r, Exit::Inconclusive));
        }
    }
    let window = match pres.koszul {
        KoszulStatus::Certified { homological, polydeg } => KoszulWindow::Certified { homological, polydeg },
        _ => KoszulWindow::Asserted,
    };
    let verdict = check_conditions(&pres).map_err(usage)?;
    let (verdict, witness, exit) = match verdict {
        ConditionVerdict::Pbw => ("pbw", None, Exit::Success),
        ConditionVerdict::Fails { condition, witness } => {
            let degree = match condition {
                Condition::Image => 2,
                Condition::Alpha => 1,
                Condition::Beta => 0,
            };
            let w = ConditionWitness {
                condition,
                degree,
                overlap: strings(&witness),
            };
            ("fails", Some(w), Exit::Fails)
        }
    };
    let r = PbwReport {
        verdict,
        koszul: Some(window),
        koszul_check: koszul_report,
        witness,
    };
    Ok(Outcome::new(r, exit))
}

fn check_kappa(input: &InputFile) -> Result<Outcome, InputError> {
    let kappa = input.kappa()?;
    let verdict = kappa_verdict(&kappa).map_err(usage)?;
    let exit = if verdict.is_pbw() { Exit::Success } else { Exit::Fails };
    // S(V) is Koszul in every characteristic.
    let report = json!({
        "verdict": verdict,
        "koszul": KoszulWindow::Asserted,
        "constant": kappa.is_constant(),
    });
    Ok(Outcome::new(report, exit))
}

/// Relations for the oracle: the presentation if `Rprime` is given, else κ.
fn relations(input: &InputFile) -> Result<(SkewAlgebra, Vec<SkewElement>), InputError> {
    if input.rprime.is_some() {
        let pres = input.presentation()?;
        Ok((pres.skew_algebra(), pres.relations()))
    } else {
        let kappa = input.kappa()?;
        Ok((SkewAlgebra::new(kappa.rep().clone()), kappa_relations(&kappa)))
    }
}

#[derive(Serialize)]
struct OracleOutput {
    #[serde(flatten)]
    report: OracleReport,
    max_degree: usize,
    /// `dim F^m/F^{m−1}` of the quotient, from `filtered`.
    graded: Vec<usize>,
}

pub(crate) fn exit_for(verdict: &OracleVerdict) -> Exit {
    match verdict {
        OracleVerdict::NotPbw(_) => Exit::Fails,
        OracleVerdict::PbwUpTo { .. } => Exit::Success,
        OracleVerdict::Inconclusive => Exit::Inconclusive,
    }
}

fn oracle(input: &InputFile, caps: Caps) -> Result<Outcome, InputError> {
    let (alg, p) = relations(input)?;
    let report = pbw_oracle_verdict(&alg, &p, caps.max_degree, caps.gen_cap).map_err(usage)?;
    let graded = report
        .filtered
        .iter()
        .enumerate()
        .map(|(i, &x)| if i == 0 { x } else { x - report.filtered[i - 1] })
        .collect();
    let exit = exit_for(&report.verdict);
    let out = OracleOutput {
        report,
        max_degree: caps.max_degree,
        graded,
    };
    Ok(Outcome::new(out, exit))
}

#[derive(Serialize)]
struct ResolutionReport {
    example: &'static str,
    /// All three bicomplex identities hold on generators.
    identities: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    rejected: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    homology: Option<HomologyReport>,
}

fn resolution(input: &InputFile, example: Example, caps: Caps) -> Result<Outcome, InputError> {
    let hom = input.hom_presentation()?;
    let field = hom.field();
    let group = hom.rep.group().clone();
    let (n, cap) = (caps.homological_cap, caps.polydeg_cap);
    let len = n + 1;
    let (name, c) = match example {
        Example::CyclicP => {
            let p = group.order();
            if group.table() != FiniteGroup::cyclic(p).table() {
                return Err(InputError {
                    path: "group.mult".into(),
                    message: "cyclic-p needs the table of Z/p with element k = g^k".into(),
                });
            }
            ("cyclic-p", periodic_resolution_cyclic(p, field, len))
        }
        Example::Custom => ("custom", bar_resolution_kg(&group, field, len, false)),
    };
    let d = match koszul_resolution(&hom, len, cap) {
        Ok(d) => d,
        Err(Error::NotKoszulCertified) => {
            let r = json!({"example": name, "verdict": "inconclusive", "reason": Error::NotKoszulCertified.to_string()});
            return Ok(Outcome::new(r, Exit::Inconclusive));
        }
        Err(e) => return Err(usage(e)),
    };
    let report = match build_x(&c, &d, len) {
        Ok(x) => {
            let h = homology_dims(x.total(), n, cap, Exec::default());
            ResolutionReport {
                example: name,
                identities: true,
                rejected: None,
                homology: Some(h),
            }
        }
        Err(e) => ResolutionReport {
            example: name,
            identities: false,
            rejected: Some(e.to_string()),
            homology: None,
        },
    };
    let exact = report.homology.as_ref().is_some_and(|h| h.exact);
    Ok(Outcome::new(report, if exact { Exit::Success } else { Exit::Fails }))
}

/// Used by the corpus to label checker verdicts.
pub(crate) fn kappa_label(v: &KappaVerdict) -> String {
    match v {
        KappaVerdict::Pbw => "pbw".into(),
        KappaVerdict::Fails { bullet, .. } => format!("fails({bullet})"),
    }
}
