//! SVD-based biplots for labeled multivariate tables.
//!
//! A biplot factors a (preprocessed) data matrix `X ≅ A·B'` so that rows
//! become points (markers `a_i`) and columns become vectors (`b_j`) whose
//! inner products approximate the entries `x_ij`. The split of singular
//! values between the two factors is controlled by `gamma`:
//!
//! * `gamma = 1` (JK, row metric preserving): `A = UΛ`, `B = V`
//! * `gamma = 0` (GH, column metric preserving): `A = U`, `B = VΛ`
//! * `gamma = 0.5` (SQRT, symmetric): `A = UΛ^½`, `B = VΛ^½`
//!
//! The crate also ships the three embedded indicator tables used as
//! worked cases ([`data::load_case`]), per-row/per-column quality of
//! representation ([`biplot::quality`]), PCA / classical MDS /
//! correspondence-analysis baselines ([`baselines`]), JSON reports
//! ([`report`]) and deterministic SVG rendering ([`svg`]).
//!
//! ```
//! use biplot::{data, biplot as bp};
//!
//! let table = data::load_case(1).unwrap();
//! let (x, record) = data::preprocess(&table, data::Scale::Zscore).unwrap();
//! let model = bp::jk(&x, 2, table.labels(), record).unwrap();
//! let q = bp::quality(&model, &x).unwrap();
//! assert!((q.qr_overall - 0.898).abs() < 0.01);
//! ```

pub mod baselines;
pub mod biplot;
pub mod cli;
pub mod data;
mod error;
mod fixtures;
pub mod linalg;
pub mod report;
pub mod svg;

pub use error::{Error, Result};
pub use linalg::{Matrix, SvdResult};
