//! Machine-readable report documents. Serialization is kept separate from
//! the library types so the wire format is explicit and stable; parsing an
//! emitted report and re-serializing it is byte-identical.

use serde::{Deserialize, Serialize};
use whix::realization::ValidationReport;
use whix::whindex::{Diagnostics, IndexReport, KernelGap};
use whix::Tolerances;

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct TolerancesDoc {
    pub rank_rel: f64,
    pub eig_one: f64,
    pub residual: f64,
}

impl From<&Tolerances> for TolerancesDoc {
    fn from(t: &Tolerances) -> Self {
        Self {
            rank_rel: t.rank_rel,
            eig_one: t.eig_one,
            residual: t.residual,
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ValidationDoc {
    pub unitarity_left: f64,
    pub unitarity_right: f64,
    pub spectral_radius: f64,
    pub pass: bool,
    pub margin_warning: bool,
}

impl From<&ValidationReport> for ValidationDoc {
    fn from(r: &ValidationReport) -> Self {
        Self {
            unitarity_left: r.unitarity_left,
            unitarity_right: r.unitarity_right,
            spectral_radius: r.spectral_radius,
            pass: r.pass,
            margin_warning: r.margin_warning,
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct GapDoc {
    pub k: usize,
    pub smallest_accepted: Option<f64>,
    pub largest_rejected: Option<f64>,
}

impl From<&KernelGap> for GapDoc {
    fn from(g: &KernelGap) -> Self {
        Self {
            k: g.k,
            smallest_accepted: g.gap.smallest_accepted,
            largest_rejected: g.gap.largest_rejected,
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct DiagnosticsDoc {
    pub omega_residual: f64,
    pub omega_star_vs_adjoint: f64,
    pub q_stein_residual: f64,
    pub q_hermiticity: f64,
    pub q_vs_defect_identity: f64,
    pub q_eig_min: f64,
    pub q_eig_max: f64,
    pub stein_conditioning: f64,
    pub kernel_gaps: Vec<GapDoc>,
    pub cokernel_gaps: Vec<GapDoc>,
}

impl From<&Diagnostics> for DiagnosticsDoc {
    fn from(d: &Diagnostics) -> Self {
        Self {
            omega_residual: d.omega_residual,
            omega_star_vs_adjoint: d.omega_star_vs_adjoint,
            q_stein_residual: d.q_stein_residual,
            q_hermiticity: d.q_hermiticity,
            q_vs_defect_identity: d.q_vs_defect_identity,
            q_eig_min: d.q_eig_min,
            q_eig_max: d.q_eig_max,
            stein_conditioning: d.stein_conditioning,
            kernel_gaps: d.kernel_gaps.iter().map(GapDoc::from).collect(),
            cokernel_gaps: d.cokernel_gaps.iter().map(GapDoc::from).collect(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct IndexReportDoc {
    pub negative_indices: Vec<i64>,
    pub zero_count: usize,
    pub positive_indices: Vec<i64>,
    pub all_indices: Vec<i64>,
    pub kernel_dims: Vec<usize>,
    pub cokernel_dims: Vec<usize>,
    pub mu: Vec<usize>,
    pub nu: Vec<usize>,
    pub n_tr: usize,
    pub d_tr: usize,
    pub fredholm_index: i64,
    pub index_sum: i64,
    pub diagnostics: DiagnosticsDoc,
}

impl From<&IndexReport> for IndexReportDoc {
    fn from(r: &IndexReport) -> Self {
        Self {
            negative_indices: r.negative_indices.clone(),
            zero_count: r.zero_count,
            positive_indices: r.positive_indices.clone(),
            all_indices: r.all_indices(),
            kernel_dims: r.kernel_dims.clone(),
            cokernel_dims: r.cokernel_dims.clone(),
            mu: r.mu.clone(),
            nu: r.nu.clone(),
            n_tr: r.n_tr,
            d_tr: r.d_tr,
            fredholm_index: r.fredholm_index,
            index_sum: r.index_sum(),
            diagnostics: DiagnosticsDoc::from(&r.diagnostics),
        }
    }
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct IndicesReportDoc {
    pub kind: String,
    pub tolerances: TolerancesDoc,
    pub validation_v: Option<ValidationDoc>,
    pub validation_w: Option<ValidationDoc>,
    pub report: IndexReportDoc,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct ScalarReportDoc {
    pub kind: String,
    pub phi_degree: usize,
    pub m_degree: usize,
    pub winding_number: i64,
    pub report: IndexReportDoc,
    pub cross_check: Option<IndexReportDoc>,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct CheckDoc {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Serialize, Deserialize, PartialEq)]
pub struct VerifyReportDoc {
    pub kind: String,
    pub tolerances: TolerancesDoc,
    pub checks: Vec<CheckDoc>,
    pub pass: bool,
}

/// Stable serialization used everywhere a report is written.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut out = serde_json::to_string_pretty(doc).expect("report serialization");
    out.push('\n');
    out
}
