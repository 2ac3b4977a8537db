//! p-adic polylogarithms on the thrice-punctured line and the Chabauty–Kim
//! loci cut out by them.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: precision-tracked arithmetic in `Q_p`, Teichmüller lifts, the
//!   Iwasawa logarithm on units and rational reconstruction.
//! * [`series`]: truncated power series on residue disks, Frobenius pullback,
//!   logarithmic antiderivatives and Strassman/Newton root finding.
//! * [`polylog`] and [`coleman`]: the Coleman functions `log z`, `log(1-z)`,
//!   `Li_1 .. Li_kmax` on every residue disk of `X(Z_p)` and `p`-adic zeta values.
//! * [`motivic`]: exact shuffle/Hopf algebra calculus, Deligne's unipotent
//!   matrices and the coefficient synthesis of `F_2`, `F_4`.
//! * [`verify`]: end-to-end pipelines and machine-readable reports.

pub mod cache;
pub mod coleman;
pub mod motivic;
pub mod padic;
pub mod polylog;
pub mod series;
pub mod verify;

pub use coleman::{common_zeroes, ColemanFunction, CommonZero, CommonZeroes};
pub use padic::{PadicContext, PadicNumber, ReconstructedRational, ZeroTest};
pub use polylog::{PolylogConfig, PolylogFamily};
pub use series::{DiskSeries, RootRecord, RootSet, TailBound};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("working precision must be at least 1")]
    InvalidPrecision,
    #[error("p-adic context mismatch: (p={0}, N={1}) vs (p={2}, N={3})")]
    ContextMismatch(u64, u32, u64, u32),
    #[error("division by a value indistinguishable from zero")]
    DivisionByZero,
    #[error("logarithm is only defined on units here, got valuation {0}")]
    NotAUnit(i64),
    #[error("residue {0} has no Teichmüller lift")]
    InvalidResidue(u64),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("no rational reconstruction within the bound box")]
    NoReconstruction,
    #[error("series are centred at different points")]
    CenterMismatch,
    #[error("composition maps the disk outside the disk of the outer series")]
    ImageDiskMismatch,
    #[error("zero count inconclusive: {0}")]
    Inconclusive(String),
    #[error("point with residue {0} lies outside X(Z_p)")]
    OutsideDomain(u64),
    #[error("Coleman functions are defined on different residue sets")]
    DomainMismatch,
    #[error("construction check failed: {0}")]
    ConstructionCheck(String),
    #[error("zeta_p({0}) is undefined")]
    ZetaUndefined(u32),
    #[error("coefficient family is not grouplike: {0}")]
    NotGrouplike(String),
    #[error("matrix is not unitriangular")]
    NotUnitriangular,
    #[error("{0} vanishes to the working precision")]
    VanishingDenominator(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("I/O error at {path}: {message}")]
    Io { path: String, message: String },
    #[error("schema version mismatch: expected {expected}, found {found}")]
    SchemaVersion { expected: u32, found: u32 },
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
