use std::path::{Path, PathBuf};
use std::process::Command as Process;

use pbwlab_cli::schema::Family;
use pbwlab_cli::{cross_validate, Caps};
use pbwlab_core::drinfeld::{KappaParam, KappaVerdict, KappaWitness};
use pbwlab_core::linear::{FieldSpec, Scalar};
use pbwlab_core::group::Representation;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

/// Runs the binary; returns (exit code, stdout as JSON, raw stdout).
fn pbwlab(args: &[&str], env: &[(&str, &str)]) -> (i32, Value, String) {
    let mut cmd = Process::new(env!("CARGO_BIN_EXE_pbwlab"));
    cmd.args(args);
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, stdout)
}

fn usizes(v: &Value) -> Vec<usize> {
    v.as_array().unwrap().iter().map(|x| x.as_u64().unwrap() as usize).collect()
}

#[test]
fn zero_kappa_is_pbw() {
    let (code, r, _) = pbwlab(&["check-kappa", fixture("kappa_zero.json").to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"]["verdict"], "pbw");
    assert_eq!(r["koszul"]["kind"], "asserted");
}

#[test]
fn two_relation_example_fails_in_degree_two() {
    let (code, r, _) = pbwlab(&["check-pbw", fixture("example_p.json").to_str().unwrap()], &[]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"], "fails");
    assert_eq!(r["witness"]["condition"], "i");
    assert_eq!(r["witness"]["degree"], 2);
    // Koszulity of k<x,y>/(xy, yx) was certified, and the window is reported.
    assert_eq!(r["koszul"]["kind"], "certified");

    let (code, r, _) = pbwlab(&["oracle", fixture("example_p.json").to_str().unwrap()], &[]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"]["drop_degree"], 2);
    assert_eq!(usizes(&r["graded"])[2], 0);
    let hom = usizes(&r["homogeneous_filtered"]);
    assert_eq!(hom[2] - hom[1], 2);
}

#[test]
fn four_relation_example_is_pbw() {
    let (code, r, _) = pbwlab(&["check-pbw", fixture("example_p_prime.json").to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"], "pbw");
    let (code, r, _) = pbwlab(
        &["oracle", fixture("example_p_prime.json").to_str().unwrap(), "--gen-cap", "8"],
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!(usizes(&r["graded"]), vec![1, 2, 0, 0, 0]);
    assert_eq!(r["completion_complete"], true);
    assert_eq!(r["verdict"]["verdict"], "pbw_up_to");
}

#[test]
fn non_koszul_input_is_inconclusive_without_an_assertion() {
    let (code, r, _) = pbwlab(&["check-pbw", fixture("non_koszul.json").to_str().unwrap()], &[]);
    assert_eq!(code, 2);
    assert_eq!(r["verdict"], "inconclusive");
    assert_eq!(r["koszul_check"]["exact"], false);
    let (code, _, _) = pbwlab(&["koszul-check", fixture("non_koszul.json").to_str().unwrap(), "--caps", "4,6"], &[]);
    assert_eq!(code, 1);
}

#[test]
fn non_jacobi_bracket_fails() {
    let f = fixture("non_jacobi.json");
    let (code, r, _) = pbwlab(&["check-kappa", f.to_str().unwrap()], &[]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"]["bullet"], 3);
    let (code, r, _) = pbwlab(&["oracle", f.to_str().unwrap()], &[]);
    assert_eq!(code, 1);
    assert_eq!(r["verdict"]["source_degree"], 3);
}

#[test]
fn symplectic_kappa_is_pbw_both_ways() {
    let f = fixture("symplectic.json");
    assert_eq!(pbwlab(&["check-kappa", f.to_str().unwrap()], &[]).0, 0);
    let (code, r, _) = pbwlab(&["oracle", f.to_str().unwrap()], &[]);
    assert_eq!(code, 0);
    assert_eq!(r["verdict"]["max_degree"], 4);
}

#[test]
fn koszul_check_of_a_polynomial_ring() {
    let (code, r, _) = pbwlab(&["koszul-check", fixture("polynomial_3.json").to_str().unwrap(), "--caps", "4,6"], &[]);
    assert_eq!(code, 0);
    assert_eq!(usizes(&r["component_dims"]), vec![1, 3, 3, 1, 0]);
}

#[test]
fn modular_resolution_is_exact() {
    let (code, r, _) = pbwlab(
        &["resolution", fixture("jordan_gf3.json").to_str().unwrap(), "--example", "cyclic-p"],
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!(r["identities"], true);
    assert_eq!(r["homology"]["exact"], true);
    assert_eq!(r["homology"]["table"]["0,4"]["homology"], 15);
    assert_eq!(r["homology"]["table"]["3,5"]["homology"], 0);
    let (code, r, _) = pbwlab(
        &[
            "resolution",
            fixture("jordan_gf2.json").to_str().unwrap(),
            "--example",
            "custom",
            "--polydeg-cap",
            "3",
            "--homological-cap",
            "2",
        ],
        &[],
    );
    assert_eq!(code, 0);
    assert_eq!(r["example"], "custom");
}

#[test]
fn cyclic_example_needs_a_cyclic_table() {
    let dir = tempfile::tempdir().unwrap();
    let klein = dir.path().join("klein.json");
    let doc = serde_json::json!({
        "field": {"kind": "gf", "p": 3},
        "group": {"order": 4, "mult": [[0,1,2,3],[1,0,3,2],[2,3,0,1],[3,2,1,0]]},
        "rep": {"dim": 1, "matrices": [[["1"]], [["1"]], [["1"]], [["1"]]]}
    });
    std::fs::write(&klein, doc.to_string()).unwrap();
    let (code, r, _) = pbwlab(&["resolution", klein.to_str().unwrap(), "--example", "cyclic-p"], &[]);
    assert_eq!(code, 3);
    assert_eq!(r["path"], "group.mult");
    let (code, _, _) = pbwlab(
        &["resolution", fixture("symplectic.json").to_str().unwrap(), "--example", "cyclic-p", "--polydeg-cap", "3"],
        &[],
    );
    assert_eq!(code, 0);
}

#[test]
fn corpus_over_gf3_has_no_disagreements() {
    let f = fixture("jordan_gf3.json");
    let args = ["cross-validate", f.to_str().unwrap(), "--count", "100", "--seed", "42"];
    let (code, r, raw) = pbwlab(&args, &[]);
    assert_eq!(code, 0);
    assert_eq!(r["seed"], 42);
    assert_eq!(r["samples"].as_array().unwrap().len(), 100);
    assert!(r["disagreements"].as_array().unwrap().is_empty());
    let (_, _, again) = pbwlab(&args, &[("PBWLAB_THREADS", "1")]);
    assert_eq!(raw, again, "reports must be byte-identical");
}

#[test]
fn empty_corpus() {
    let f = fixture("jordan_gf3.json");
    let (code, r, _) = pbwlab(&["cross-validate", f.to_str().unwrap(), "--count", "0", "--seed", "1"], &[]);
    assert_eq!(code, 0);
    assert!(r["disagreements"].as_array().unwrap().is_empty());
}

/// Invariance with the sign flipped: `κ_{hgh⁻¹}(hv, hw) = −κ_g(v, w)`.
fn sign_mutant(k: &KappaParam) -> pbwlab_core::Result<KappaVerdict> {
    let rep = k.rep();
    let group = rep.group();
    let n = k.dim();
    let f = k.field();
    let dense = |h: usize, i: usize| {
        let mut v = vec![f.zero(); n];
        for (j, c) in rep.act_basis(h, i) {
            v[j] = c;
        }
        v
    };
    let unit = |i: usize| {
        let mut v = vec![f.zero(); n];
        v[i] = f.one();
        v
    };
    for g in group.elements() {
        for h in group.elements() {
            for i in 0..n {
                for j in 0..n {
                    let lhs = k.eval_c(group.conj(h, g), &dense(h, i), &dense(h, j));
                    let rhs: Scalar = -&k.eval_c(g, &unit(i), &unit(j));
                    if lhs != rhs {
                        return Ok(KappaVerdict::Fails {
                            bullet: 1,
                            witness: KappaWitness {
                                g,
                                h: Some(h),
                                basis: vec![i, j],
                            },
                        });
                    }
                }
            }
        }
    }
    Ok(KappaVerdict::Pbw)
}

#[test]
fn harness_detects_a_sign_mutant_checker() {
    let rep = Representation::cyclic_jordan(FieldSpec::Prime(3), 3).unwrap();
    let caps = Caps {
        max_degree: 3,
        gen_cap: 4,
        ..Caps::default()
    };
    let honest = cross_validate(&rep, Family::KappaConstant, 20, 5, caps, None).unwrap();
    assert!(honest.disagreements.is_empty());
    let mutant = cross_validate(&rep, Family::KappaConstant, 20, 5, caps, Some(&sign_mutant)).unwrap();
    assert!(!mutant.disagreements.is_empty());
}

#[test]
fn input_errors_exit_with_three_and_a_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture("jordan_gf3.json")).unwrap().replacen("\"1\"", "\"one\"", 1);
    std::fs::write(&bad, text).unwrap();
    let (code, r, _) = pbwlab(&["check-kappa", bad.to_str().unwrap()], &[]);
    assert_eq!(code, 3);
    assert_eq!(r["verdict"], "input_error");
    assert_eq!(r["path"], "rep.matrices[0][0][0]");

    let (code, r, _) = pbwlab(&["check-kappa", dir.path().join("missing.json").to_str().unwrap()], &[]);
    assert_eq!(code, 3);
    assert_eq!(r["verdict"], "input_error");

    // Characteristic 2 is outside the κ conditions.
    let (code, _, _) = pbwlab(&["check-kappa", fixture("jordan_gf2.json").to_str().unwrap()], &[]);
    assert_eq!(code, 3);

    let f = fixture("jordan_gf3.json");
    assert_eq!(pbwlab(&["oracle", f.to_str().unwrap(), "--max-degree", "0"], &[]).0, 3);
    assert_eq!(pbwlab(&["oracle", f.to_str().unwrap(), "--gen-cap", "3"], &[]).0, 3);
    assert_eq!(pbwlab(&["cross-validate", f.to_str().unwrap()], &[]).0, 3);
    let (code, r, _) = pbwlab(&["check-pbw", f.to_str().unwrap()], &[]);
    assert_eq!(code, 3);
    assert_eq!(r["path"], "Rprime");
}
