//! JSON views of certificates, classifications and face lattices.
//!
//! These are plain serde mirrors of the core types; the core crate stays
//! free of serialization concerns.

use hypercox_core::arith::Inertia;
use hypercox_core::diagram::classify::{component_names, diagram_signature};
use hypercox_core::diagram::{classify, gram_matrix, CoxeterDiagram, DiagramClass, GramMatrix};
use hypercox_core::gale::GaleDiagram;
use hypercox_core::search::Found;
use hypercox_core::verify::{Certificate, VertexKind};
use serde::{Deserialize, Serialize};

use crate::format::{parse_coxeter, write_coxeter, ParseError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GramJson {
    pub exact_terms: Vec<Vec<String>>,
    pub float64: Vec<Vec<f64>>,
}

impl GramJson {
    pub fn new(g: &GramMatrix) -> Self {
        let n = g.dim();
        GramJson {
            exact_terms: (0..n)
                .map(|i| (0..n).map(|j| g.entry(i, j).render()).collect())
                .collect(),
            float64: g.to_f64(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub facets: Vec<usize>,
    /// `finite`, `ideal`, or `neither` for a failed vertex.
    pub kind: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportJson {
    pub evaluated: usize,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateJson {
    pub dimension: usize,
    pub facets: usize,
    /// `[positive, negative, zero]`, absent when the signature was not computed.
    pub signature: Option<[usize; 3]>,
    pub vertices: Vec<VertexJson>,
    pub compact: bool,
    pub constraint_reports: ReportJson,
    /// `valid` or `invalid`.
    pub verdict: String,
    pub failures: Vec<String>,
    pub gram: GramJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pyramid_shape: Option<[usize; 3]>,
}

pub fn triple(s: Inertia) -> [usize; 3] {
    [s.positive, s.negative, s.zero]
}

fn kind_name(k: Option<VertexKind>) -> &'static str {
    match k {
        Some(VertexKind::Finite) => "finite",
        Some(VertexKind::Ideal) => "ideal",
        None => "neither",
    }
}

impl CertificateJson {
    pub fn new(c: &Certificate, d: &CoxeterDiagram) -> Self {
        CertificateJson {
            dimension: c.dimension,
            facets: c.facets,
            signature: c.signature.map(triple),
            vertices: c
                .vertices
                .iter()
                .map(|v| VertexJson {
                    facets: v.facets.clone(),
                    kind: kind_name(v.kind).into(),
                })
                .collect(),
            compact: c.compact,
            constraint_reports: ReportJson {
                evaluated: c.reports.evaluated,
                violations: c
                    .reports
                    .violations
                    .iter()
                    .map(|v| format!("{v:?}"))
                    .collect(),
            },
            verdict: if c.valid { "valid" } else { "invalid" }.into(),
            failures: c.failures.iter().map(ToString::to_string).collect(),
            gram: GramJson::new(&gram_matrix(d)),
            pyramid_shape: c.pyramid_shape,
        }
    }

    pub fn ideal_vertices(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind == "ideal").count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GaleJson {
    pub k: usize,
    pub labels: Vec<u32>,
    pub origin: u32,
}

impl From<&GaleDiagram> for GaleJson {
    fn from(g: &GaleDiagram) -> Self {
        GaleJson {
            k: g.k,
            labels: g.labels.clone(),
            origin: g.origin,
        }
    }
}

impl From<&GaleJson> for GaleDiagram {
    fn from(g: &GaleJson) -> Self {
        GaleDiagram::new(g.k, g.labels.clone(), g.origin)
    }
}

/// A certified polytope: its diagram in the text format, its Gale diagram
/// and the certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub diagram: String,
    pub gale: GaleJson,
    pub certificate: CertificateJson,
}

impl PolytopeJson {
    pub fn new(f: &Found) -> Self {
        PolytopeJson {
            diagram: write_coxeter(&f.diagram),
            gale: (&f.gale).into(),
            certificate: CertificateJson::new(&f.certificate, &f.diagram),
        }
    }

    pub fn parse_diagram(&self) -> Result<CoxeterDiagram, ParseError> {
        parse_coxeter(&self.diagram)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyJson {
    pub nodes: usize,
    /// `elliptic`, `parabolic`, `lanner`, `quasi-lanner` or `other`.
    pub class: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub connected: Option<bool>,
    /// Classical component names when every component is elliptic or affine.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub components: Option<Vec<String>>,
    pub signature: [usize; 3],
    pub gram: GramJson,
}

pub fn class_name(c: DiagramClass) -> &'static str {
    match c {
        DiagramClass::Elliptic => "elliptic",
        DiagramClass::Parabolic { .. } => "parabolic",
        DiagramClass::Lanner => "lanner",
        DiagramClass::QuasiLanner => "quasi-lanner",
        DiagramClass::Other => "other",
    }
}

impl ClassifyJson {
    pub fn new(d: &CoxeterDiagram) -> hypercox_core::Result<Self> {
        let class = classify(d)?;
        Ok(ClassifyJson {
            nodes: d.node_count(),
            class: class_name(class).into(),
            connected: match class {
                DiagramClass::Parabolic { connected } => Some(connected),
                _ => None,
            },
            components: component_names(d).map(|v| v.iter().map(ToString::to_string).collect()),
            signature: triple(diagram_signature(d)?),
            gram: GramJson::new(&gram_matrix(d)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacesJson {
    pub faces: Vec<Vec<usize>>,
    pub vertices: Vec<Vec<usize>>,
}
