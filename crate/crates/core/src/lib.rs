//! Stickelberger annihilators of prime cyclotomic fields, polynomial
//! factorization over `F_h`, and the scan that reads off the structure of the
//! relative class group from `gcd(P(X), X^{(p-1)/2} + 1) mod h`.

pub mod arith;
pub mod congruence;
pub mod error;
pub mod factor;
pub mod poly;
pub mod scan;
pub mod stickelberger;
pub mod suite;

pub use arith::CycloParams;
pub use congruence::{
    biquad_report, principality_test, psquare_report, quad_report, reduced_forms_count, BiquadReport, Check,
    CheckKind, PSquareReport, PrincipalityReport, QuadReport,
};
pub use error::{Error, Result};
pub use factor::{factor_mod, Factor, FactorList};
pub use poly::{IntPoly, ModPoly};
pub use scan::{
    relative_gcd, scan_prime, scan_range, verify_against_reference, Mismatch, ScanReport, StructureRecord,
};
pub use stickelberger::{build_pair, StickelbergerPair};
pub use suite::{run_suite, SuiteReport};
