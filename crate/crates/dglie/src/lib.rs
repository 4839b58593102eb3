//! Free differential graded Lie algebras over exact rationals, their
//! semiabelian and crossed-complex quotients, the nilpotent groups they
//! exponentiate to, and the path/surface/volume holonomy of the universal
//! translation-invariant connection on ℝⁿ.
//!
//! The crate is organized in layers:
//!
//! * [`tensor`] / [`word`] / [`scalar`] / [`linalg`] — exact arithmetic in the
//!   letter-truncated graded tensor algebra and the small-matrix exact linear
//!   algebra everything else reduces to.
//! * [`lie`] — generators `Z_I`, the differential, bigraded slices of the free
//!   dg-Lie algebra, cohomology ranks; [`connection`] — the universal graded
//!   connection and its curvature.
//! * [`forms`] — polynomial forms, currents at the origin, the pairing maps,
//!   and the Schur/closed-form dimension oracles.
//! * [`quotient`] — semiabelianization, abelianization, crossed-module
//!   quotient, lower central series, and structure-constant extraction.
//! * [`group`] — Malcev exponentiation: exact nilpotent groups with BCH
//!   multiplication, crossed-complex axioms, and the cell composition
//!   calculus.
//! * [`holonomy`] — Chen signatures of piecewise-linear paths, covariant
//!   transgression, 2-dimensional and p-dimensional holonomy on sampled
//!   branes, with thin-homotopy and functoriality checks.
//! * [`report`] — dimension report tables (CSV/JSON).
//! * [`verify`] — the seeded verification suites the CLI drives.
//!
//! Exact values never touch floating point; the holonomy quadratures convert
//! the algebraic tables to `f64` once and keep the numerics separate.

pub mod connection;
pub mod error;
pub mod forms;
pub mod group;
pub mod holonomy;
pub mod lie;
pub mod linalg;
pub mod quotient;
pub mod report;
pub mod scalar;
pub mod tensor;
pub mod verify;
pub mod word;

pub use connection::{universal_connection, ConstantForm};
pub use error::Error;
pub use group::{GroupComplex, GroupElement, GroupElementDto, PMorphism};
pub use holonomy::{
    BraneDto, HolonomyEngine, HolonomyResult, HolonomyResultDto, PLPath, PathDto, ResidualReport,
    SampledBrane, WordSeries,
};
pub use lie::LieExpr;
pub use quotient::{
    extract_structure_constants, ComplexBasis, CrossedComplexDto, NilpotentCrossedComplex,
    QuotientSlice,
};
pub use report::{dims_csv, dims_rows, DimsRow};
pub use scalar::Q;
pub use tensor::{Tensor, TensorDto, TensorTermDto};
pub use verify::{exact_suite, group_suite, numeric_suite, Check, CheckReport, NumericScale};
pub use word::{Letter, Multidegree, Word, MAX_LETTERS, MAX_N};

/// Shared run parameters with the resource guards every entry point applies.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Ambient dimension of V = ℝⁿ (1..=6).
    pub n: u8,
    /// Letter-count truncation L (1..=8).
    pub max_letters: u8,
    /// Nilpotency class / truncation degree d (1..=6).
    pub degree: u8,
    /// Tolerance for numeric (floating-point) residual checks.
    pub tol: f64,
    /// Seed for the randomized property suites.
    pub seed: u64,
}

impl RunConfig {
    /// Build a config, enforcing the resource guards.
    pub fn new(n: u8, max_letters: u8, degree: u8) -> Result<Self, Error> {
        if n == 0 || n > MAX_N {
            return Err(Error::ResourceGuard(format!("n={n} outside 1..={MAX_N}")));
        }
        if max_letters == 0 || max_letters as usize > MAX_LETTERS {
            return Err(Error::ResourceGuard(format!(
                "maxLetters={max_letters} outside 1..={MAX_LETTERS}"
            )));
        }
        if degree == 0 || degree > 6 {
            return Err(Error::ResourceGuard(format!("degree={degree} outside 1..=6")));
        }
        Ok(RunConfig { n, max_letters, degree, tol: 1e-5, seed: 0xd61e_5eed })
    }

    /// Override the numeric tolerance.
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    /// Override the property-suite seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}
