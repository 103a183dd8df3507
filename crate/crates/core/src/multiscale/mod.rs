//! Multiscale events and certificates.

pub mod certificate;
pub mod chain;
pub mod events;
pub mod recursion;

pub use certificate::{
    crosses_short_way, estimate_h_j, exact_j, ladder_strip, strip_sequence, summability_certificate,
    vacancy_certificate, CertificateVerdict, HJEntry, ScaleLadder, ScaleTerm, SummabilityReport,
    VacancyReport,
};
pub use chain::{bound_chain, bound_chain_with_tail, ChainReport};
pub use events::{
    estimate_f, estimate_g, exact_g, existence_probability, markov_bound_g, reach_intensity, C1, C2,
};
pub use recursion::{check_recursion, RecursionEntry};
