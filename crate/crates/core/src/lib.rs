//! Tight zCDP and Rényi-DP accounting for pure-DP mechanisms.
//!
//! * [`rdp`]: closed-form RDP curves `eps_hat(alpha)`, stable down to `alpha -> 1`.
//! * [`zcdp`]: the zCDP constant `rho = sup_alpha eps_hat(alpha) / alpha` per mechanism.
//! * [`oracle`]: brute-force divergences from explicit output distributions.
//! * [`verify`]: order search and certification reports.
//! * [`accountant`]: composition, tables and figure data.
//!
//! ```
//! use tight_zcdp::{zcdp_bound, Mechanism};
//!
//! let b = zcdp_bound(&Mechanism::laplace(1.0)?)?;
//! assert!((b.rho - (-1f64).exp()).abs() < 1e-15);
//! # Ok::<(), tight_zcdp::Error>(())
//! ```

pub mod accountant;
mod error;
pub mod mechanism;
pub mod oracle;
pub mod rdp;
pub mod special;
pub mod verify;
pub mod zcdp;

pub use error::{Error, Result};
pub use mechanism::{Mechanism, RenyiOrder};
pub use rdp::RdpCurve;
pub use verify::{certify_tightness, sup_rdp_over_alpha, SupSearchResult, VerificationReport};
pub use zcdp::{krr_threshold, zcdp_bound, ZcdpBound};
