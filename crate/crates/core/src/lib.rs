//! Continuous life-contingency values under Gompertz-Makeham mortality.
//!
//! Expected remaining lifetime, continuous life annuities and the commutation
//! functions `D`, `N`, `M` are evaluated in closed form through the gamma
//! function and the gamma distribution function, with no numerical
//! integration. The [`oracle`] module provides the quadrature and
//! Monte-Carlo references used to check them.
//!
//! ```
//! use gmlife_core::{annuity, Age, GmParams, Rate};
//!
//! let basis = GmParams::new(0.001, 0.000_012, 0.101_314).unwrap();
//! let a40 = annuity(&basis, Rate::new(0.026_559).unwrap(), Age::new(40.0).unwrap()).unwrap();
//! assert!((a40 - 24.815_040_221_325_92).abs() < 1e-10);
//! ```

pub mod error;
pub mod life_values;
pub mod mortality;
pub mod oracle;
pub mod special_fn;

pub use error::{Error, Result};
pub use life_values::{
    ageing_factor, annuity, commutation_d, commutation_m, commutation_n, commutation_row, e0,
    positive_shape_check, remaining_life, CommutationRow, Rate,
};
pub use mortality::{cdf, mortality_rate, survival, Age, GmParams};
pub use oracle::{McEstimate, QuadratureResult};
