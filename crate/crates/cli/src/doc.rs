//! The on-disk document format: a single JSON object describing one
//! function in either parameterization.
//!
//! ```json
//! {"form": "general", "c": [0, 0], "d": 0,
//!  "A": [[1, 0], [-1, 1], [0, 2]], "b": [1, 1, -1]}
//! ```
//!
//! ```json
//! {"form": "canonical", "c": [0.7, 0.7], "d": 0, "delta": 1,
//!  "M": [[2, -1], [-1, 5]], "x_star": [0, 0]}
//! ```
//!
//! Exactly the fields of the declared form may be present; `label` is
//! optional on both.

use serde::{Deserialize, Serialize};

use socf::{CanonicalForm, GeneralForm, Matrix, TolerancePolicy, Vector};

use crate::Failure;

/// Every syntactically acceptable field; the split by `form` is validated
/// by hand so diagnostics can name the offending field.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    form: String,
    label: Option<String>,
    c: Option<Vec<f64>>,
    d: Option<f64>,
    #[serde(rename = "A")]
    a: Option<Vec<Vec<f64>>>,
    b: Option<Vec<f64>>,
    delta: Option<f64>,
    #[serde(rename = "M")]
    m: Option<Vec<Vec<f64>>>,
    x_star: Option<Vec<f64>>,
}

#[derive(Debug, Serialize)]
struct GeneralDoc<'a> {
    form: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    c: Vec<f64>,
    d: f64,
    #[serde(rename = "A")]
    a: Vec<Vec<f64>>,
    b: Vec<f64>,
}

#[derive(Debug, Serialize)]
struct CanonicalDoc<'a> {
    form: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<&'a str>,
    c: Vec<f64>,
    d: f64,
    delta: f64,
    #[serde(rename = "M")]
    m: Vec<Vec<f64>>,
    x_star: Vec<f64>,
}

/// A parsed, validated document.
#[derive(Debug, Clone)]
pub enum SocfDocument {
    General {
        label: Option<String>,
        form: GeneralForm,
    },
    Canonical {
        label: Option<String>,
        form: CanonicalForm,
    },
}

fn require<T>(field: Option<T>, form: &str, name: &str) -> Result<T, Failure> {
    field.ok_or_else(|| Failure::Validation(format!("{form} form requires field `{name}`")))
}

fn forbid<T>(field: &Option<T>, form: &str, name: &str) -> Result<(), Failure> {
    if field.is_some() {
        return Err(Failure::Validation(format!(
            "field `{name}` does not belong to a {form}-form document"
        )));
    }
    Ok(())
}

impl SocfDocument {
    pub fn parse(text: &str, tol: &TolerancePolicy) -> Result<SocfDocument, Failure> {
        let raw: RawDocument = serde_json::from_str(text)
            .map_err(|e| Failure::Validation(format!("cannot parse document: {e}")))?;
        match raw.form.as_str() {
            "general" => {
                forbid(&raw.delta, "general", "delta")?;
                forbid(&raw.m, "general", "M")?;
                forbid(&raw.x_star, "general", "x_star")?;
                let c = require(raw.c, "general", "c")?;
                let d = require(raw.d, "general", "d")?;
                let a = require(raw.a, "general", "A")?;
                let b = require(raw.b, "general", "b")?;
                let form = GeneralForm::new(
                    Vector::new(c).map_err(Failure::from)?,
                    d,
                    Matrix::from_nested(&a).map_err(Failure::from)?,
                    Vector::new(b).map_err(Failure::from)?,
                )
                .map_err(Failure::from)?;
                Ok(SocfDocument::General {
                    label: raw.label,
                    form,
                })
            }
            "canonical" => {
                forbid(&raw.a, "canonical", "A")?;
                forbid(&raw.b, "canonical", "b")?;
                let c = require(raw.c, "canonical", "c")?;
                let d = require(raw.d, "canonical", "d")?;
                let delta = require(raw.delta, "canonical", "delta")?;
                let m = require(raw.m, "canonical", "M")?;
                let x_star = require(raw.x_star, "canonical", "x_star")?;
                let form = CanonicalForm::new(
                    Vector::new(c).map_err(Failure::from)?,
                    d,
                    delta,
                    Matrix::from_nested(&m).map_err(Failure::from)?,
                    Vector::new(x_star).map_err(Failure::from)?,
                    tol,
                )
                .map_err(Failure::from)?;
                Ok(SocfDocument::Canonical {
                    label: raw.label,
                    form,
                })
            }
            other => Err(Failure::Validation(format!(
                "field `form` must be \"general\" or \"canonical\", got \"{other}\""
            ))),
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            SocfDocument::General { label, .. } | SocfDocument::Canonical { label, .. } => {
                label.as_deref()
            }
        }
    }

    /// The canonical parameters, converting from the general form if needed.
    pub fn canonical(&self, tol: &TolerancePolicy) -> Result<CanonicalForm, Failure> {
        match self {
            SocfDocument::General { form, .. } => form.canonicalize(tol).map_err(Failure::from),
            SocfDocument::Canonical { form, .. } => Ok(form.clone()),
        }
    }

    /// The general parameters, reconstructing from the canonical form if
    /// needed.
    pub fn general(&self, tol: &TolerancePolicy) -> Result<GeneralForm, Failure> {
        match self {
            SocfDocument::General { form, .. } => Ok(form.clone()),
            SocfDocument::Canonical { form, .. } => form.reconstruct(tol).map_err(Failure::from),
        }
    }

    /// Evaluates with the evaluator matching the stored parameterization.
    pub fn eval(&self, x: &Vector) -> Result<f64, Failure> {
        match self {
            SocfDocument::General { form, .. } => form.eval(x).map_err(Failure::from),
            SocfDocument::Canonical { form, .. } => form.eval(x).map_err(Failure::from),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            SocfDocument::General { form, .. } => form.dim(),
            SocfDocument::Canonical { form, .. } => form.dim(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = match self {
            SocfDocument::General { label, form } => serde_json::to_string_pretty(&GeneralDoc {
                form: "general",
                label: label.as_deref(),
                c: form.c().to_vec(),
                d: form.d(),
                a: form.a().to_nested(),
                b: form.b().to_vec(),
            }),
            SocfDocument::Canonical { label, form } => {
                serde_json::to_string_pretty(&CanonicalDoc {
                    form: "canonical",
                    label: label.as_deref(),
                    c: form.c().to_vec(),
                    d: form.d(),
                    delta: form.delta(),
                    m: form.m().to_nested(),
                    x_star: form.x_star().to_vec(),
                })
            }
        }
        .expect("document serialization cannot fail");
        text.push('\n');
        text
    }
}
