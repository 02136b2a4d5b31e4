//! Structured text formats for points, curves, quadric spaces, graph reports
//! and verdicts. Every output embeds the run manifest, and identical
//! manifests reproduce byte-identical files in exact mode.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dual_graph::{GraphStats, IdentityChecks};
use crate::error::{Error, Result};
use crate::projective::{PointConfig, ProjectivePoint};
use crate::quadrics::{Quadric, QuadricSpace};
use crate::scalar::Scalar;
use crate::structure::{DetectParams, StructureVerdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => write!(f, "exact"),
            Mode::Float => write!(f, "float"),
        }
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" | "rational" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(Error::Parse(format!("unknown mode {other:?}"))),
        }
    }
}

/// Provenance of a run, embedded in every output file; reruns with identical
/// manifests produce identical outputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    pub mode: Mode,
    pub tolerance: f64,
    pub version: String,
}

impl Manifest {
    pub fn new(command: impl Into<String>, inputs: Vec<String>, seed: u64, mode: Mode) -> Self {
        Manifest {
            command: command.into(),
            inputs,
            seed,
            mode,
            tolerance: crate::scalar::float_tolerance(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PointSetFile {
    pub manifest: Manifest,
    pub dim: usize,
    /// "rational" or "float"; matches the serialization of the coordinates.
    pub field: String,
    pub label: String,
    pub points: Vec<Vec<String>>,
}

pub fn point_set_file<S: Scalar>(config: &PointConfig<S>, manifest: Manifest) -> PointSetFile {
    PointSetFile {
        manifest,
        dim: config.dim(),
        field: if S::EXACT { "rational" } else { "float" }.into(),
        label: config.label.clone(),
        points: config
            .points
            .iter()
            .map(|p| p.coords().iter().map(|c| c.repr()).collect())
            .collect(),
    }
}

pub fn config_from_file<S: Scalar>(file: &PointSetFile) -> Result<PointConfig<S>> {
    let points: Vec<ProjectivePoint<S>> = file
        .points
        .iter()
        .map(|coords| {
            let v: Vec<S> = coords
                .iter()
                .map(|s| S::parse_repr(s))
                .collect::<Result<_>>()?;
            if v.len() != file.dim + 1 {
                return Err(Error::Format(format!(
                    "point has {} coordinates, dim is {}",
                    v.len(),
                    file.dim
                )));
            }
            ProjectivePoint::new(v)
        })
        .collect::<Result<_>>()?;
    PointConfig::new(points, file.label.clone())
}

/// Curve descriptor: short coefficients `a`, `b`, or long `a1..a6`; generator
/// coordinates; order; mode.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub long: Option<[String; 5]>,
    pub gx: String,
    pub gy: String,
    pub n: usize,
    pub mode: Mode,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct QuadricSpaceFile {
    pub dim: usize,
    pub monomial_order: String,
    pub basis: Vec<Vec<String>>,
}

pub fn quadric_space_file<S: Scalar>(space: &QuadricSpace<S>) -> QuadricSpaceFile {
    QuadricSpaceFile {
        dim: space.dim,
        monomial_order: "lex-upper".into(),
        basis: space
            .basis
            .iter()
            .map(|q| q.coeffs().iter().map(|c| c.repr()).collect())
            .collect(),
    }
}

pub fn quadric_space_from_file<S: Scalar>(file: &QuadricSpaceFile) -> Result<QuadricSpace<S>> {
    if file.monomial_order != "lex-upper" {
        return Err(Error::Format(format!(
            "unsupported monomial order {:?}",
            file.monomial_order
        )));
    }
    let basis: Vec<Quadric<S>> = file
        .basis
        .iter()
        .map(|coeffs| {
            let v: Vec<S> = coeffs
                .iter()
                .map(|s| S::parse_repr(s))
                .collect::<Result<_>>()?;
            Quadric::new(file.dim, v)
        })
        .collect::<Result<_>>()?;
    Ok(QuadricSpace {
        dim: file.dim,
        basis,
    })
}

/// Per-line segment summary in the graph report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LineSummary {
    pub triple: [usize; 3],
    pub edges: usize,
    /// Lengths of maximal rather-good runs.
    pub rather_good_runs: Vec<usize>,
    /// Lengths of maximal good runs.
    pub good_runs: Vec<usize>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GraphReportFile {
    pub manifest: Manifest,
    pub n: usize,
    pub v_histogram: std::collections::BTreeMap<usize, u64>,
    pub edge_count: u64,
    pub face_count: u64,
    pub f_histogram: std::collections::BTreeMap<usize, u64>,
    pub good_edges: u64,
    pub rather_good_edges: u64,
    pub bad_edges: u64,
    pub slightly_bad_edges: u64,
    pub k: f64,
    pub bad_edge_bound: u64,
    pub slightly_bad_edge_bound: u64,
    pub identity_checks: IdentityChecks,
    pub lines: Vec<LineSummary>,
}

pub fn graph_report_file(
    stats: &GraphStats,
    lines: Vec<LineSummary>,
    manifest: Manifest,
) -> GraphReportFile {
    GraphReportFile {
        manifest,
        n: stats.n,
        v_histogram: stats.v_histogram.clone(),
        edge_count: stats.edge_count,
        face_count: stats.face_count,
        f_histogram: stats.f_histogram.clone(),
        good_edges: stats.good_edges,
        rather_good_edges: stats.rather_good_edges,
        bad_edges: stats.bad_edges,
        slightly_bad_edges: stats.slightly_bad_edges,
        k: stats.k,
        bad_edge_bound: stats.bad_edge_bound,
        slightly_bad_edge_bound: stats.slightly_bad_edge_bound,
        identity_checks: stats.identity_checks.clone(),
        lines,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum CertificateFile {
    Hyperplane { coefficients: Vec<String> },
    QuadricSpace { space: QuadricSpaceFile },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerdictFile {
    pub manifest: Manifest,
    pub case: String,
    pub outlier_indices: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub k: f64,
    pub parameters: DetectParams,
}

pub fn verdict_file<S: Scalar>(
    verdict: &StructureVerdict<S>,
    k: f64,
    params: &DetectParams,
    manifest: Manifest,
) -> VerdictFile {
    let (case, outliers, certificate, reason) = match verdict {
        StructureVerdict::HyperplaneConcentrated {
            hyperplane,
            outliers,
        } => (
            "HyperplaneConcentrated".to_string(),
            outliers.clone(),
            Some(CertificateFile::Hyperplane {
                coefficients: hyperplane.coeffs().iter().map(|c| c.repr()).collect(),
            }),
            None,
        ),
        StructureVerdict::QuadricIntersection { space, outliers } => (
            "QuadricIntersection".to_string(),
            outliers.clone(),
            Some(CertificateFile::QuadricSpace {
                space: quadric_space_file(space),
            }),
            None,
        ),
        StructureVerdict::Inconclusive { reason } => (
            "Inconclusive".to_string(),
            Vec::new(),
            None,
            Some(reason.clone()),
        ),
    };
    VerdictFile {
        manifest,
        case,
        outlier_indices: outliers,
        certificate,
        reason,
        k,
        parameters: params.clone(),
    }
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Format(format!("serialize: {e}")))?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic::exact_cyclic_config;
    use crate::scalar::Rat;

    #[test]
    fn point_set_round_trip() {
        let cfg = exact_cyclic_config::<Rat>(7).unwrap();
        let manifest = Manifest::new("generate", vec![], 0, Mode::Exact);
        let file = point_set_file(&cfg.config, manifest);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: PointSetFile = serde_json::from_str(&text).unwrap();
        let back: PointConfig<Rat> = config_from_file(&parsed).unwrap();
        assert_eq!(back.points, cfg.config.points);
        assert_eq!(parsed.field, "rational");
    }

    #[test]
    fn float_point_set_round_trip() {
        let cfg = crate::elliptic::float_cyclic_config(13).unwrap();
        let manifest = Manifest::new("generate", vec![], 0, Mode::Float);
        let file = point_set_file(&cfg.config, manifest);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: PointSetFile = serde_json::from_str(&text).unwrap();
        let back: PointConfig<f64> = config_from_file(&parsed).unwrap();
        // shortest round-trip float serialization is lossless
        for (p, q) in back.points.iter().zip(&cfg.config.points) {
            assert_eq!(p.coords(), q.coords());
        }
    }

    #[test]
    fn quadric_space_round_trip() {
        let cfg = exact_cyclic_config::<Rat>(6).unwrap();
        let space = crate::quadrics::curve_quadrics(&cfg.curve).unwrap();
        let file = quadric_space_file(&space);
        let text = serde_json::to_string(&file).unwrap();
        let parsed: QuadricSpaceFile = serde_json::from_str(&text).unwrap();
        let back: QuadricSpace<Rat> = quadric_space_from_file(&parsed).unwrap();
        assert!(back.same_span(&space));
        assert_eq!(back.basis, space.basis);
    }
}
