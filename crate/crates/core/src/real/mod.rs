//! Certified real arithmetic and everything built directly on it:
//! evaluation of the target algebraic numbers, continued fraction
//! expansion, and analytic sanity checks.

mod alpha;
mod cache;
mod cf;
mod checks;
mod interval;

pub use alpha::{AlphaSpec, AlphaTarget};
pub use cache::{cache_path, cached_expand, read_cache, CacheFile};
pub use cf::{cf_expand, cf_expand_past_denominator, convergents_of, CFExpansion};
pub use checks::{
    sqrt_bounds_check, sqrt_lower_defect, sqrt_lower_poly, sqrt_upper_defect, sqrt_upper_poly,
    trig_identity_residuals,
};
pub use interval::{escalate, CertifiedReal, PREC_CAP};
