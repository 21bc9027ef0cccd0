//! Numerical ranges, sectors, Cheeger constants and the aggregated certificate.

pub mod certificate;
pub mod cheeger;
pub mod numrange;

pub use certificate::{cheeger_summary, maccretive_certificate, Certificate, CertificateOptions, CheegerSummary};
pub use cheeger::{cheeger_bound_check, cheeger_bruteforce, cheeger_nested, cheeger_quotient, CheegerResult};
pub use numrange::{check_sector, numrange_boundary, NumericalRangeSample, Sector, SectorCheck};
