//! JSON interchange formats.
//!
//! JSON is the sole machine-readable format; every number is a string in
//! the canonical rational grammar so that no precision is lost. A point-set
//! document is `{"dim": n, "points": [["3/2", "1/2"], ...]}`. The
//! rationalization input additionally accepts decimal literals and an
//! optional complete `"distances"` declaration; outputs carry a
//! `"provenance"` block describing the run.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{OddCertificate, Parity, ParityAudit, Point, PointSet};
use crate::rational::parse_rational;
use crate::rationalize::{DecimalPointSet, RationalizeReport};
use crate::search::{BoundReport, CliqueResult};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointSetDoc {
    dim: usize,
    points: Vec<Vec<String>>,
    /// Output documents carry provenance; readers accept and ignore it, so
    /// one verb's output feeds the next.
    #[serde(default, rename = "provenance", skip_serializing)]
    _provenance: Option<serde_json::Value>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct DecimalPointSetDoc {
    dim: usize,
    points: Vec<Vec<String>>,
    #[serde(default)]
    distances: Option<Vec<(usize, usize, u64)>>,
    #[serde(default, rename = "provenance")]
    _provenance: Option<serde_json::Value>,
}

/// Serializes a point set in stored order with canonical rational strings.
pub fn write_point_set(ps: &PointSet) -> serde_json::Value {
    let doc = PointSetDoc {
        dim: ps.dimension(),
        points: ps
            .iter()
            .map(|p| p.coords().iter().map(|c| c.to_string()).collect())
            .collect(),
        _provenance: None,
    };
    serde_json::to_value(doc).expect("point-set documents always serialize")
}

/// Parses a point-set document. Coordinates must use the strict rational
/// grammar; dimension mismatches and duplicate points are rejected.
pub fn read_point_set(text: &str) -> Result<PointSet> {
    let doc: PointSetDoc = serde_json::from_str(text)?;
    let points = doc
        .points
        .into_iter()
        .map(|cs| {
            let coords = cs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>>>()?;
            Point::new(coords)
        })
        .collect::<Result<Vec<_>>>()?;
    PointSet::new(doc.dim, points)
}

/// Parses the rationalization input: like a point-set document, but
/// coordinates may also be decimal literals, and a complete set of declared
/// pairwise distances may accompany the points.
pub fn read_decimal_point_set(text: &str) -> Result<DecimalPointSet> {
    let doc: DecimalPointSetDoc = serde_json::from_str(text)?;
    DecimalPointSet::new(doc.dim, doc.points, doc.distances)
}

#[derive(Serialize)]
struct PairResultDoc {
    i: usize,
    j: usize,
    distance: String,
    is_odd_integer: bool,
}

#[derive(Serialize)]
struct CertificateDoc {
    set_size: usize,
    verdict: bool,
    pair_results: Vec<PairResultDoc>,
}

pub fn write_certificate(cert: &OddCertificate) -> serde_json::Value {
    let doc = CertificateDoc {
        set_size: cert.set_size,
        verdict: cert.verdict,
        pair_results: cert
            .pair_results
            .iter()
            .map(|r| PairResultDoc {
                i: r.i,
                j: r.j,
                distance: r.distance.to_string(),
                is_odd_integer: r.is_odd_integer,
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("certificates always serialize")
}

#[derive(Serialize)]
struct FiberDoc {
    fingerprint: Vec<u8>,
    count: usize,
}

#[derive(Serialize)]
struct AuditDoc {
    fingerprints: Vec<Vec<u8>>,
    fiber_sizes: Vec<FiberDoc>,
    weight_parities: Vec<&'static str>,
    uniform_weight_parity: bool,
    fibers_within_two: bool,
}

fn bits(fingerprint: &[bool]) -> Vec<u8> {
    fingerprint.iter().map(|&b| b as u8).collect()
}

pub fn write_audit(audit: &ParityAudit) -> serde_json::Value {
    let doc = AuditDoc {
        fingerprints: audit.fingerprints.iter().map(|f| bits(f)).collect(),
        fiber_sizes: audit
            .fiber_sizes
            .iter()
            .map(|(fingerprint, &count)| FiberDoc {
                fingerprint: bits(fingerprint),
                count,
            })
            .collect(),
        weight_parities: audit
            .weight_parities
            .iter()
            .map(|p| match p {
                Parity::Even => "even",
                Parity::Odd => "odd",
            })
            .collect(),
        uniform_weight_parity: audit.uniform_weight_parity,
        fibers_within_two: audit.fibers_within_two,
    };
    serde_json::to_value(doc).expect("audits always serialize")
}

#[derive(Serialize)]
struct SearchDoc {
    dimension: usize,
    lattice: &'static str,
    max_size: usize,
    cap: u64,
    violation: bool,
    scope: &'static str,
    nodes_explored: u64,
    elapsed_ms: u64,
    witness: serde_json::Value,
}

pub fn write_search(result: &CliqueResult, report: &BoundReport) -> serde_json::Value {
    let doc = SearchDoc {
        dimension: report.dimension,
        lattice: report.lattice.name(),
        max_size: report.max_size,
        cap: report.cap,
        violation: report.violation,
        scope: report.scope,
        nodes_explored: result.nodes_explored,
        elapsed_ms: result.elapsed.as_millis().try_into().unwrap_or(u64::MAX),
        witness: write_point_set(&result.witness),
    };
    serde_json::to_value(doc).expect("search results always serialize")
}

#[derive(Serialize)]
struct ProvenanceDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    separation_applied: Option<Vec<bool>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    free_variables: Option<usize>,
    #[serde(rename = "C", skip_serializing_if = "Option::is_none")]
    c: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    scale: Option<serde_json::Value>,
}

#[derive(Serialize)]
struct OutputDoc {
    dim: usize,
    points: Vec<Vec<String>>,
    provenance: ProvenanceDoc,
}

fn output_doc(ps: &PointSet, provenance: ProvenanceDoc) -> serde_json::Value {
    let doc = OutputDoc {
        dim: ps.dimension(),
        points: ps
            .iter()
            .map(|p| p.coords().iter().map(|c| c.to_string()).collect())
            .collect(),
        provenance,
    };
    serde_json::to_value(doc).expect("output documents always serialize")
}

pub fn write_rationalized(ps: &PointSet, report: &RationalizeReport) -> serde_json::Value {
    output_doc(
        ps,
        ProvenanceDoc {
            separation_applied: Some(report.separation_applied.clone()),
            free_variables: Some(report.free_variables),
            c: Some(report.bound_c.to_string()),
            epsilon: Some(report.epsilon.to_string()),
            scale: None,
        },
    )
}

pub fn write_dyadic(ps: &PointSet, scale: &BigInt) -> serde_json::Value {
    // The scale is an integer in the document; values beyond u64 fall back
    // to the canonical string form.
    let scale_value = match scale.to_u64() {
        Some(small) => serde_json::Value::from(small),
        None => serde_json::Value::from(scale.to_string()),
    };
    output_doc(
        ps,
        ProvenanceDoc {
            separation_applied: None,
            free_variables: None,
            c: None,
            epsilon: None,
            scale: Some(scale_value),
        },
    )
}
