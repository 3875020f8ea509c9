//! Binary logo retrieval built on rough-set isothetic covers.
//!
//! The pipeline overlays a square grid on a binary raster, takes the tight
//! upper cover of the object (every cell holding at least one black pixel),
//! traces the cover into isothetic polygons and reduces each polygon to a
//! small attribute tuple. Images are indexed by their (hole count, parent
//! count) point in a 2-D k-d tree and retrieved by polygon-level voting.
//!
//! ```no_run
//! use roughlogo::{extract_features, BinaryRaster, Grid};
//!
//! let raster = BinaryRaster::load("logo.pbm", 128).unwrap();
//! let feature = extract_features("logo", &raster, Grid::default()).unwrap();
//! println!("{} polygons, {} holes", feature.tp, feature.holes);
//! ```

pub mod cover;
pub mod error;
pub mod eval;
pub mod featuredb;
pub mod kdindex;
pub mod matcher;
pub mod par;
pub mod raster;
pub mod reduct;
pub mod report;
pub mod synth;

pub use cover::{CellOccupancy, CellSet, Containment, CoverPair, Grid, IsoPolygon, PolygonKind};
pub use error::{Error, Result};
pub use featuredb::FeatureTable;
pub use kdindex::{KdIndex, Point};
pub use matcher::{retrieve, vote_and_rank, MatchWeights, RankedResult};
pub use par::Exec;
pub use raster::{BinaryRaster, DegradeKind, DegradeSpec};
pub use reduct::{extract_features, BwBin, EdgeRatio, ImageFeature, PolygonAttributes};
