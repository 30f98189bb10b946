//! Persistence norms of market return point clouds.
//!
//! The pipeline turns aligned daily index prices into calendar-month point
//! clouds of log returns, computes Vietoris–Rips persistence in dimensions 0
//! and 1, reduces each diagram to its L1/L2 persistence norms, and relates
//! the monthly norm series to volatility and external uncertainty indexes
//! with correlation tables and Newey–West regressions.
//!
//! Numeric code is generic over [`Scalar`] (`f32` or `f64`); the `*64`
//! aliases below name the `f64` instantiations used by the CLI.
//!
//! ```
//! use persnorm::{cloud, persistence, norms};
//!
//! let square = cloud::PointCloud::from_points(&[
//!     vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0],
//! ]);
//! let d = cloud::distance_matrix(&square);
//! let dgm = persistence::rips_persistence(&d, persistence::enclosing_radius(&d));
//! let l1 = norms::persistence_norm(&dgm, 1, norms::NormKind::L1);
//! assert!((l1 - (2f64.sqrt() - 1.0)).abs() < 1e-12);
//! ```

pub mod cloud;
pub mod econ;
pub mod format;
pub mod ingest;
pub mod month;
pub mod norms;
pub mod persistence;
mod scalar;

pub use month::Month;
pub use scalar::{cmp_scalar, Scalar};

pub type PriceSeries64 = ingest::PriceSeries<f64>;
pub type ReturnMatrix64 = ingest::ReturnMatrix<f64>;
pub type UncertaintySeries64 = ingest::UncertaintySeries<f64>;
pub type PointCloud64 = cloud::PointCloud<f64>;
pub type DistanceMatrix64 = cloud::DistanceMatrix<f64>;
pub type PersistenceDiagram64 = persistence::PersistenceDiagram<f64>;
pub type NormSeries64 = norms::NormSeries<f64>;
pub type RegressionResult64 = econ::RegressionResult<f64>;
pub type CorrelationMatrix64 = econ::CorrelationMatrix<f64>;

pub type PointCloud32 = cloud::PointCloud<f32>;
pub type DistanceMatrix32 = cloud::DistanceMatrix<f32>;
pub type PersistenceDiagram32 = persistence::PersistenceDiagram<f32>;
