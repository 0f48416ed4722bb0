//! The machine-readable classification report and its tabular rendering.

use serde::Serialize;

use socf::analysis::{
    boundedness_report, concavity_class, region_class, BoundednessReport, ConcavityReason,
    CriticalSet,
};
use socf::oracle::{boundedness_probe, concavity_probe, ProbeConfig};
use socf::{CanonicalForm, TolerancePolicy};

#[derive(Debug, Serialize)]
pub struct CanonicalParams {
    pub c: Vec<f64>,
    pub d: f64,
    pub delta: f64,
    #[serde(rename = "M")]
    pub m: Vec<Vec<f64>>,
    pub x_star: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct ConcavitySection {
    pub strictly_concave: bool,
    pub reasons: Vec<&'static str>,
}

#[derive(Debug, Serialize)]
pub struct CriticalSetDoc {
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub null_basis: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Serialize)]
pub struct BoundednessSection {
    pub case_tag: &'static str,
    pub bounded_above: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Absent exactly when the function is unbounded above.
    pub supremum: Option<f64>,
    pub attained: bool,
    pub critical_set: CriticalSetDoc,
    pub boundary_flag: bool,
}

#[derive(Debug, Serialize)]
pub struct ProbeSection {
    pub seed: u64,
    pub concavity_consistent: bool,
    pub worst_concavity_violation: f64,
    pub claims_bounded: bool,
    pub max_slope: f64,
    pub max_seen: f64,
    pub contradicts_report: bool,
}

#[derive(Debug, Serialize)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub canonical: CanonicalParams,
    pub concavity: ConcavitySection,
    pub boundedness: BoundednessSection,
    pub region: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub probe: Option<ProbeSection>,
}

fn critical_set_doc(set: &CriticalSet) -> CriticalSetDoc {
    let vecs = |vs: &[socf::Vector]| vs.iter().map(|v| v.to_vec()).collect();
    match set {
        CriticalSet::None => CriticalSetDoc {
            kind: "None",
            base: None,
            direction: None,
            null_basis: None,
        },
        CriticalSet::Point { base } => CriticalSetDoc {
            kind: "Point",
            base: Some(base.to_vec()),
            direction: None,
            null_basis: None,
        },
        CriticalSet::Ray { base, direction } => CriticalSetDoc {
            kind: "Ray",
            base: Some(base.to_vec()),
            direction: Some(direction.to_vec()),
            null_basis: None,
        },
        CriticalSet::PointPlusNull { base, null_basis } => CriticalSetDoc {
            kind: "PointPlusNull",
            base: Some(base.to_vec()),
            direction: None,
            null_basis: Some(vecs(null_basis)),
        },
        CriticalSet::RayPlusNull {
            base,
            direction,
            null_basis,
        } => CriticalSetDoc {
            kind: "RayPlusNull",
            base: Some(base.to_vec()),
            direction: Some(direction.to_vec()),
            null_basis: Some(vecs(null_basis)),
        },
    }
}

/// Runs every classifier (and optionally the probes) on one function.
pub fn build_report(
    label: Option<String>,
    g: &CanonicalForm,
    tol: &TolerancePolicy,
    probe_seed: Option<u64>,
) -> Report {
    let concavity = concavity_class(g, tol);
    let bounded: BoundednessReport = boundedness_report(g, tol);
    let region = region_class(g, tol);

    let probe = probe_seed.map(|seed| {
        let cfg = ProbeConfig::with_seed(seed);
        let chords = concavity_probe(g, &cfg);
        let rays = boundedness_probe(g, &cfg, tol);
        let contradicts = !chords.consistent
            || (!bounded.boundary_flag && rays.claims_bounded != bounded.bounded_above);
        ProbeSection {
            seed,
            concavity_consistent: chords.consistent,
            worst_concavity_violation: chords.worst_violation,
            claims_bounded: rays.claims_bounded,
            max_slope: rays.max_slope,
            max_seen: rays.max_seen,
            contradicts_report: contradicts,
        }
    });

    Report {
        label,
        canonical: CanonicalParams {
            c: g.c().to_vec(),
            d: g.d(),
            delta: g.delta(),
            m: g.m().to_nested(),
            x_star: g.x_star().to_vec(),
        },
        concavity: ConcavitySection {
            strictly_concave: concavity.strictly_concave,
            reasons: concavity
                .reasons
                .iter()
                .map(|r| match r {
                    ConcavityReason::RankDeficient => "RankDeficient",
                    ConcavityReason::DeltaZero => "DeltaZero",
                })
                .collect(),
        },
        boundedness: BoundednessSection {
            case_tag: bounded.case_tag.as_str(),
            bounded_above: bounded.bounded_above,
            q: bounded.q,
            supremum: bounded.supremum.is_finite().then_some(bounded.supremum),
            attained: bounded.attained,
            critical_set: critical_set_doc(&bounded.critical_set),
            boundary_flag: bounded.boundary_flag,
        },
        region: region.as_str(),
        probe,
    }
}

impl Report {
    pub fn contradiction(&self) -> bool {
        self.probe.as_ref().is_some_and(|p| p.contradicts_report)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }

    /// Fixed-width key/value rendering for people rather than machines.
    pub fn to_human(&self) -> String {
        let fmt_vec = |v: &[f64]| {
            let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
            format!("({})", parts.join(", "))
        };
        let mut lines = Vec::new();
        if let Some(label) = &self.label {
            lines.push(format!("{:<18}{label}", "label"));
        }
        lines.push(format!("{:<18}{}", "dimension", self.canonical.c.len()));
        lines.push(format!("{:<18}{}", "c", fmt_vec(&self.canonical.c)));
        lines.push(format!("{:<18}{:.6}", "d", self.canonical.d));
        lines.push(format!("{:<18}{:.6}", "delta", self.canonical.delta));
        for (i, row) in self.canonical.m.iter().enumerate() {
            let name = if i == 0 { "M" } else { "" };
            lines.push(format!("{name:<18}{}", fmt_vec(row)));
        }
        lines.push(format!(
            "{:<18}{}",
            "x_star",
            fmt_vec(&self.canonical.x_star)
        ));
        let concave = if self.concavity.strictly_concave {
            "strictly concave".to_string()
        } else {
            format!("not strict ({})", self.concavity.reasons.join(", "))
        };
        lines.push(format!("{:<18}{concave}", "concavity"));
        lines.push(format!("{:<18}{}", "case", self.boundedness.case_tag));
        if let Some(q) = self.boundedness.q {
            let flag = if self.boundedness.boundary_flag {
                "  [boundary]"
            } else {
                ""
            };
            lines.push(format!("{:<18}{q:.12}{flag}", "q"));
        }
        match self.boundedness.supremum {
            Some(s) => {
                let att = if self.boundedness.attained {
                    "attained"
                } else {
                    "not attained"
                };
                lines.push(format!("{:<18}{s:.12} ({att})", "supremum"));
            }
            None => lines.push(format!("{:<18}unbounded above", "supremum")),
        }
        let cs = &self.boundedness.critical_set;
        let mut cs_text = cs.kind.to_string();
        if let Some(base) = &cs.base {
            cs_text.push_str(&format!(" at {}", fmt_vec(base)));
        }
        if let Some(dir) = &cs.direction {
            cs_text.push_str(&format!(", direction {}", fmt_vec(dir)));
        }
        if let Some(null) = &cs.null_basis {
            cs_text.push_str(&format!(", + null space of dim {}", null.len()));
        }
        lines.push(format!("{:<18}{cs_text}", "critical set"));
        lines.push(format!("{:<18}{}", "region", self.region));
        if let Some(p) = &self.probe {
            let verdict = if p.contradicts_report {
                "CONTRADICTS the closed-form report"
            } else {
                "consistent with the closed-form report"
            };
            lines.push(format!(
                "{:<18}seed {}: {verdict} (worst chord violation {:.3e}, max slope {:.3e})",
                "probe", p.seed, p.worst_concavity_violation, p.max_slope
            ));
        }
        lines.join("\n") + "\n"
    }
}
