//! Incidence graphs of points and bounded-degree polynomials over finite
//! fields: their counts, spectra and mixing behavior, exact entropy profiles,
//! and exhaustive audits of key agreement protocols run on random edges.

pub mod error;
pub mod field;
pub mod graph;
pub mod info;
pub mod lab;
pub mod mixing;
pub mod ska;
pub mod spectral;

pub use error::{Error, Result};
pub use field::{make_field, FieldElement, FieldSpec, PolyCoeffs};
pub use graph::{GraphSpec, PointVertex, PolyVertex};
pub use info::{edge_joint, edge_profile, EdgeProfile, ExactInt, InfoProfile, JointTable, Quantity};
pub use lab::{gap_explore, inequality_gap, muchnik_classify, muchnik_exhaustive_search, Encoder, MuchnikScenario};
pub use mixing::{exhaustive_biclique_search, mixing_check, mixing_fuzz, union_lower_bound, MixingReport, SubsetPair};
pub use ska::{audit, execute_all, run_audit, AuditParams, Protocol, ProtocolAudit, ProtocolDescription};
pub use spectral::{expander_check, spectrum, ExpanderCheck, SpectrumReport, SymMatrix};

/// Joint table with arbitrary-precision weights.
pub type BigTable = JointTable<num_bigint::BigInt>;
/// Joint table with 128-bit weights, enough for every table built here.
pub type Table = JointTable<i128>;
/// Double precision spectral results.
pub type Spectrum = SpectrumReport<f64>;
pub type Expander = ExpanderCheck<f64>;
/// Single precision spectral results.
pub type Spectrum32 = SpectrumReport<f32>;
