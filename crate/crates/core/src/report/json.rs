//! Canonical JSON documents. Keys are emitted in sorted order and rationals
//! as `"a/b"` (integers bare), so emit, parse and re-emit is byte-identical.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geography::{Arm, Certificate, GeographyReport, LatticePoint, Obstruction, QueryBox};
use crate::invariants::InvariantBundle;
use crate::rational::{self, Rational};
use crate::ENGINE_VERSION;

use super::Classification;

/// A JSON number when the value is an integer that fits, a string otherwise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn rational(r: &Rational) -> Scalar {
        if rational::is_int(r) {
            Scalar::Int(*r.numer())
        } else {
            Scalar::Text(rational::to_text(r))
        }
    }

    pub fn big(n: &BigUint) -> Scalar {
        n.to_i64().map_or_else(|| Scalar::Text(n.to_string()), Scalar::Int)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coord {
    pub e: i64,
    pub h: i64,
}

impl From<LatticePoint> for Coord {
    fn from(p: LatticePoint) -> Self {
        Coord { e: p.e, h: p.h }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsDoc {
    pub sigma: i64,
    pub upsilon1: Scalar,
    pub arf: u8,
    pub det: Scalar,
    pub delta: Option<Scalar>,
    pub g4_upper: i64,
    pub gamma4_upper: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gamma4Doc {
    pub lower: i64,
    pub upper: i64,
    pub lower_certificate: String,
    pub upper_certificate: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxDoc {
    pub e_min: i64,
    pub e_max: i64,
    pub h_max: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointDoc {
    pub e: i64,
    pub h: i64,
    pub status: String,
    pub certificate: String,
    pub certificate_kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApexDoc {
    pub e: i64,
    pub h: i64,
    pub certificate: String,
    pub certificate_kind: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineDoc {
    pub arm: String,
    pub offset: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayDoc {
    pub start: Coord,
    pub direction: [i64; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionDoc {
    pub kind: String,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Coord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub h: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SummaryDoc {
    pub apexes: Vec<ApexDoc>,
    pub r1_center: Scalar,
    pub r2_center: Scalar,
    pub delta_line: Option<LineDoc>,
    pub obstructions: Vec<ObstructionDoc>,
    pub unknown_rays: Vec<RayDoc>,
    pub unknown_points: Vec<Coord>,
    pub unstructured: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetaDoc {
    pub engine_version: String,
    pub registry_hash: String,
    pub mirror_delta: bool,
    pub allow_extrapolated_upsilon: bool,
    pub upsilon_extrapolated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub knot: String,
    pub invariants: InvariantsDoc,
    pub gamma4: Gamma4Doc,
    #[serde(rename = "box")]
    pub qbox: BoxDoc,
    pub points: Vec<PointDoc>,
    /// Unknown points inside the box.
    pub unknown: Vec<Coord>,
    pub summary: SummaryDoc,
    pub meta: MetaDoc,
}

fn provenance(c: &Certificate) -> Option<String> {
    match c {
        Certificate::RegistryApex { provenance } | Certificate::RegistryForbidden { provenance } => {
            Some(provenance.clone())
        }
        Certificate::CrosscapSum { root, .. } | Certificate::DownwardPropagation { root, .. } => provenance(root),
        _ => None,
    }
}

fn obstruction_doc(o: &Obstruction) -> ObstructionDoc {
    match o {
        Obstruction::Line { line } => {
            ObstructionDoc { kind: "delta_line".into(), detail: line.to_string(), point: None, h: None }
        }
        Obstruction::Point { point, certificate } => ObstructionDoc {
            kind: certificate.kind().into(),
            detail: certificate.to_string(),
            point: Some((*point).into()),
            h: None,
        },
        Obstruction::Level { h, provenance } => {
            ObstructionDoc { kind: "registry_level".into(), detail: provenance.clone(), point: None, h: Some(*h) }
        }
    }
}

pub fn build_document(
    bundle: &InvariantBundle,
    report: &GeographyReport,
    qbox: &QueryBox,
    points: &Classification,
    registry_hash: &str,
) -> ReportDocument {
    let mut ordered: Vec<_> = points.iter().collect();
    ordered.sort_by_key(|(p, _)| (p.h, p.e));
    let point_docs = ordered
        .iter()
        .map(|(p, s)| PointDoc {
            e: p.e,
            h: p.h,
            status: s.as_str().into(),
            certificate: s.certificate().map_or_else(|| "none".into(), |c| c.to_string()),
            certificate_kind: s.certificate().map_or("none", |c| c.kind()).into(),
            provenance: s.certificate().and_then(provenance),
        })
        .collect();
    let unknown = ordered.iter().filter(|(_, s)| s.is_unknown()).map(|(p, _)| (**p).into()).collect();
    let summary = SummaryDoc {
        apexes: report
            .realizable_wedges
            .iter()
            .map(|a| ApexDoc {
                e: a.point.e,
                h: a.point.h,
                certificate: a.certificate.to_string(),
                certificate_kind: a.certificate.kind().into(),
            })
            .collect(),
        r1_center: Scalar::rational(&report.r1.center),
        r2_center: Scalar::rational(&report.r2.center),
        delta_line: report.delta_line().map(|l| LineDoc { arm: l.arm.as_str().into(), offset: l.offset }),
        obstructions: report.extra_obstructions.iter().map(obstruction_doc).collect(),
        unknown_rays: report
            .unknown
            .rays
            .iter()
            .map(|r| {
                let (de, dh) = r.direction();
                RayDoc { start: r.start.into(), direction: [de, dh] }
            })
            .collect(),
        unknown_points: report.unknown.points.iter().map(|p| (*p).into()).collect(),
        unstructured: report.unknown.unstructured,
    };
    ReportDocument {
        knot: bundle.knot.to_text(),
        invariants: InvariantsDoc {
            sigma: bundle.sigma,
            upsilon1: Scalar::rational(&bundle.upsilon1),
            arf: bundle.arf,
            det: Scalar::big(&bundle.det),
            delta: bundle.delta.as_ref().map(Scalar::rational),
            g4_upper: bundle.g4_upper,
            gamma4_upper: bundle.gamma4_upper,
        },
        gamma4: Gamma4Doc {
            lower: report.gamma4.lower,
            upper: report.gamma4.upper,
            lower_certificate: report.gamma4.lower_certificate.clone(),
            upper_certificate: report.gamma4.upper_certificate.clone(),
        },
        qbox: BoxDoc { e_min: qbox.e_min, e_max: qbox.e_max, h_max: qbox.h_max },
        points: point_docs,
        unknown,
        summary,
        meta: MetaDoc {
            engine_version: ENGINE_VERSION.into(),
            registry_hash: registry_hash.into(),
            mirror_delta: bundle.options.mirror_delta,
            allow_extrapolated_upsilon: bundle.options.allow_extrapolated_upsilon,
            upsilon_extrapolated: bundle.upsilon_extrapolated,
        },
    }
}

/// Pretty-printed JSON with sorted keys and a trailing newline.
pub fn emit_json(doc: &ReportDocument) -> String {
    let value = serde_json::to_value(doc).expect("documents serialize");
    let mut out = serde_json::to_string_pretty(&value).expect("values serialize");
    out.push('\n');
    out
}

pub fn parse_json(text: &str) -> Result<ReportDocument> {
    serde_json::from_str(text).map_err(|e| Error::Inconsistent(format!("malformed report document: {e}")))
}

impl LineDoc {
    pub fn arm(&self) -> Option<Arm> {
        match self.arm.as_str() {
            "right" => Some(Arm::Right),
            "left" => Some(Arm::Left),
            _ => None,
        }
    }
}
