//! JSON input files. One document type covers every command; each command
//! picks the parts it needs and reports missing or malformed ones by path.

use std::collections::BTreeMap;
use std::fmt;

use pbwlab_core::drinfeld::KappaParam;
use pbwlab_core::group::{FiniteGroup, Representation};
use pbwlab_core::linear::{FieldSpec, Matrix, Scalar, Subspace};
use pbwlab_core::pbw::{symmetric_relations, FilteredQuadraticPresentation, HomQuadraticPresentation, KoszulStatus};
use serde::Deserialize;

/// A schema violation, located by a JSON path such as `rep.matrices[1][0][1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for InputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

impl std::error::Error for InputError {}

fn err<T>(path: impl Into<String>, message: impl fmt::Display) -> Result<T, InputError> {
    Err(InputError {
        path: path.into(),
        message: message.to_string(),
    })
}

/// `{"kind": "gf", "p": 3}` or `{"kind": "q"}`.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldJson {
    pub kind: FieldKind,
    pub p: Option<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Gf,
    Q,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupJson {
    pub order: usize,
    pub mult: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepJson {
    pub dim: usize,
    pub matrices: Vec<Vec<Vec<String>>>,
}

/// Which random κ family `cross-validate` samples.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    /// `κ^L ≡ 0`, judged by the corollary.
    #[default]
    KappaConstant,
    /// Both parts random, judged by the four conditions.
    Kappa,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub field: FieldJson,
    pub group: GroupJson,
    pub rep: RepJson,
    #[serde(rename = "Rprime")]
    pub rprime: Option<Vec<Vec<String>>>,
    pub alpha: Option<Vec<Vec<String>>>,
    pub beta: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub assert_koszul: bool,
    #[serde(rename = "kC")]
    pub kc: Option<BTreeMap<String, Vec<Vec<String>>>>,
    #[serde(rename = "kL")]
    pub kl: Option<BTreeMap<String, Vec<Vec<Vec<String>>>>>,
    #[serde(default)]
    pub family: Family,
}

/// Parses JSON text, reporting structural errors with their path.
pub fn parse(text: &str) -> Result<InputFile, InputError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        InputError {
            path: if path.is_empty() { ".".into() } else { path },
            message: e.into_inner().to_string(),
        }
    })
}

fn scalar(field: FieldSpec, text: &str, path: &str) -> Result<Scalar, InputError> {
    field.parse_scalar(text).or_else(|e| err(path, e))
}

fn vector(field: FieldSpec, row: &[String], len: usize, path: &str) -> Result<Vec<Scalar>, InputError> {
    if row.len() != len {
        return err(path, format!("expected {len} entries, found {}", row.len()));
    }
    row.iter()
        .enumerate()
        .map(|(i, t)| scalar(field, t, &format!("{path}[{i}]")))
        .collect()
}

fn vectors(field: FieldSpec, rows: &[Vec<String>], len: usize, path: &str) -> Result<Vec<Vec<Scalar>>, InputError> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| vector(field, r, len, &format!("{path}[{i}]")))
        .collect()
}

impl InputFile {
    pub fn field_spec(&self) -> Result<FieldSpec, InputError> {
        match (self.field.kind, self.field.p) {
            (FieldKind::Q, None) => Ok(FieldSpec::Rationals),
            (FieldKind::Q, Some(_)) => err("field.p", "the rationals take no `p`"),
            (FieldKind::Gf, Some(p)) => FieldSpec::prime(p).or_else(|e| err("field.p", e)),
            (FieldKind::Gf, None) => err("field.p", "missing field `p`"),
        }
    }

    pub fn representation(&self) -> Result<Representation, InputError> {
        let field = self.field_spec()?;
        let order = self.group.order;
        if self.group.mult.len() != order {
            return err("group.mult", format!("expected {order} rows, found {}", self.group.mult.len()));
        }
        for (i, row) in self.group.mult.iter().enumerate() {
            if row.len() != order {
                return err(format!("group.mult[{i}]"), format!("expected {order} entries, found {}", row.len()));
            }
        }
        let group = FiniteGroup::from_table(self.group.mult.clone()).or_else(|e| err("group.mult", e))?;
        let n = self.rep.dim;
        if self.rep.matrices.len() != order {
            return err("rep.matrices", format!("expected {order} matrices, found {}", self.rep.matrices.len()));
        }
        let mut matrices = Vec::with_capacity(order);
        for (g, m) in self.rep.matrices.iter().enumerate() {
            let path = format!("rep.matrices[{g}]");
            if m.len() != n {
                return err(path, format!("expected {n} rows, found {}", m.len()));
            }
            let rows = vectors(field, m, n, &path)?;
            matrices.push(Matrix::from_rows(field, n, rows).or_else(|e| err(path, e))?);
        }
        Representation::new(group, matrices).or_else(|e| err("rep.matrices", e))
    }

    /// `R'` as given, or the commutators `v_i v_j − v_j v_i` when absent.
    pub fn hom_presentation(&self) -> Result<HomQuadraticPresentation, InputError> {
        let rep = self.representation()?;
        let field = rep.field();
        let n = rep.dim();
        let rprime = match &self.rprime {
            Some(rows) => {
                let vecs = vectors(field, rows, n * n, "Rprime")?;
                Subspace::span(field, n * n, vecs).or_else(|e| err("Rprime", e))?
            }
            None => symmetric_relations(field, n),
        };
        HomQuadraticPresentation::new(rep, rprime).or_else(|e| err("Rprime", e))
    }

    /// The filtered presentation; `alpha`/`beta` rows pair with `Rprime` rows, absent maps are zero.
    pub fn presentation(&self) -> Result<FilteredQuadraticPresentation, InputError> {
        let Some(rows) = &self.rprime else {
            return err("Rprime", "missing field `Rprime`");
        };
        let hom = self.hom_presentation()?;
        let field = hom.field();
        let n = hom.dim_v();
        let order = hom.rep.group().order();
        let basis = vectors(field, rows, n * n, "Rprime")?;
        let images = |given: &Option<Vec<Vec<String>>>, name: &str, len: usize| match given {
            Some(r) if r.len() != basis.len() => {
                err(name, format!("expected {} rows (one per Rprime row), found {}", basis.len(), r.len()))
            }
            Some(r) => vectors(field, r, len, name),
            None => Ok(vec![vec![field.zero(); len]; basis.len()]),
        };
        let alpha = images(&self.alpha, "alpha", n * order)?;
        let beta = images(&self.beta, "beta", order)?;
        let koszul = if self.assert_koszul {
            KoszulStatus::Asserted
        } else {
            KoszulStatus::Unknown
        };
        FilteredQuadraticPresentation::new(hom, basis, alpha, beta, koszul).or_else(|e| err(".", e))
    }

    pub fn kappa(&self) -> Result<KappaParam, InputError> {
        let rep = self.representation()?;
        let field = rep.field();
        let (n, order) = (rep.dim(), rep.group().order());
        let mut kc = vec![vec![vec![field.zero(); n]; n]; order];
        let mut kl = vec![vec![vec![vec![field.zero(); n]; n]; n]; order];
        let index = |key: &str, path: &str| -> Result<usize, InputError> {
            match key.parse::<usize>() {
                Ok(g) if g < order => Ok(g),
                _ => err(path, format!("group element index must be in 0..{order}")),
            }
        };
        for (key, form) in self.kc.iter().flatten() {
            let path = format!("kC.{key}");
            let g = index(key, &path)?;
            if form.len() != n {
                return err(path, format!("expected {n} rows, found {}", form.len()));
            }
            kc[g] = vectors(field, form, n, &path)?;
        }
        for (key, form) in self.kl.iter().flatten() {
            let path = format!("kL.{key}");
            let g = index(key, &path)?;
            if form.len() != n {
                return err(path, format!("expected {n} rows, found {}", form.len()));
            }
            for (i, row) in form.iter().enumerate() {
                let path = format!("{path}[{i}]");
                if row.len() != n {
                    return err(path, format!("expected {n} entries, found {}", row.len()));
                }
                for (j, v) in row.iter().enumerate() {
                    kl[g][i][j] = vector(field, v, n, &format!("{path}[{j}]"))?;
                }
            }
        }
        let at = if self.kl.is_some() { "kL" } else { "kC" };
        KappaParam::new(rep, kc, kl).or_else(|e| err(at, e))
    }
}
