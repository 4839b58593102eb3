//! Path signatures and higher holonomy for the universal translation
//! invariant connection on `R^n`.
//!
//! A piecewise linear path has an exact signature in the tensor algebra;
//! its logarithm lands in the degree-0 group of a nilpotent crossed
//! complex. Sampled surfaces and higher branes get holonomy elements in
//! the deeper groups by quadrature: the level-1 value integrates the
//! transgressed 2-form along strips, levels below are abelian volume
//! integrals. Everything numeric runs in `f64` against structure tables
//! converted once from the exact ones.
//!
//! Three orientation choices are involved and are frozen here as named
//! constants; `surface::tests::bootstrap_ordering_rejects_the_mirrored_convention`
//! demonstrates that mirroring them breaks the boundary identity. At levels
//! two and deeper the boundary orientation inverts:
//! `boundary(M_p) = M_{p-1}(outer last)^{-1} * M_{p-1}(outer first)` is the
//! identity the determinant column order `(t, s_1, .., s_{p-1})` produces,
//! pinned by `surface::tests::the_brane_boundary_orientation_is_fixed_by_measurement`.

mod globes;
mod numeric;
mod signature;
mod surface;

pub use globes::{
    cube_sweep, cube_sweep_point, cube_weight, fold_map, quarter_circle, resample_surface,
    reverse_rows, sample_brane, sample_curve, sample_surface, smoothstep, square_sweep,
    square_sweep_band, square_sweep_point, stack_rows, whisker_after, whisker_before,
};
pub use numeric::WordSeries;
pub use signature::{signature_ode, signature_series, signature_tensor};

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::group::{GroupComplex, GroupElement};
use crate::quotient::{extract_structure_constants, ComplexBasis, NilpotentCrossedComplex};
use crate::scalar::q_to_f64;
use crate::word::{Letter, MAX_N};

use numeric::NumericComplex;

/// A later path segment multiplies the running signature on the left.
pub const NEW_SEGMENT_MULTIPLIES_LEFT: bool = true;

/// A later strip multiplies the accumulated surface holonomy on the right,
/// which makes the boundary identity telescope to
/// `boundary(M) = sig(first row)^{-1} * sig(last row)`.
pub const NEW_STRIP_MULTIPLIES_RIGHT: bool = true;

/// Largest allowed violation of the globe conditions in sampled input.
pub const GLOBE_TOLERANCE: f64 = 1e-8;

fn check_point(n: u8, pt: &[f64]) -> Result<(), Error> {
    if pt.len() != n as usize {
        return Err(Error::Dimension(format!("point has {} coordinates, expected {n}", pt.len())));
    }
    if pt.iter().any(|x| !x.is_finite()) {
        return Err(Error::Degenerate("non-finite coordinate".into()));
    }
    Ok(())
}

/// Piecewise linear path in `R^n`, given by its vertices. Consecutive
/// duplicate points are allowed and contribute nothing.
#[derive(Clone, Debug, PartialEq)]
pub struct PLPath {
    n: u8,
    points: Vec<Vec<f64>>,
}

/// Serialization form of [`PLPath`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PathDto {
    pub n: u8,
    pub points: Vec<Vec<f64>>,
}

impl PLPath {
    pub fn new(n: u8, points: Vec<Vec<f64>>) -> Result<Self, Error> {
        if n == 0 || n > MAX_N {
            return Err(Error::ResourceGuard(format!("n = {n} outside 1..={MAX_N}")));
        }
        if points.is_empty() {
            return Err(Error::Degenerate("path needs at least one point".into()));
        }
        for pt in &points {
            check_point(n, pt)?;
        }
        Ok(PLPath { n, points })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn start(&self) -> &[f64] {
        &self.points[0]
    }

    pub fn end(&self) -> &[f64] {
        self.points.last().unwrap()
    }

    /// The same trace run backwards.
    pub fn reversed(&self) -> PLPath {
        let mut points = self.points.clone();
        points.reverse();
        PLPath { n: self.n, points }
    }

    /// Concatenation: `self` runs first, `then` afterwards. The joint must
    /// match exactly.
    pub fn concat(&self, then: &PLPath) -> Result<PLPath, Error> {
        if self.n != then.n {
            return Err(Error::Dimension(format!("paths live in n = {} vs n = {}", self.n, then.n)));
        }
        if self.end() != then.start() {
            return Err(Error::Degenerate("paths do not share the joint point".into()));
        }
        let mut points = self.points.clone();
        points.extend_from_slice(&then.points[1..]);
        Ok(PLPath { n: self.n, points })
    }

    pub fn to_dto(&self) -> PathDto {
        PathDto { n: self.n, points: self.points.clone() }
    }

    pub fn from_dto(dto: &PathDto) -> Result<Self, Error> {
        PLPath::new(dto.n, dto.points.clone())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("path serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let dto: PathDto = serde_json::from_str(s)?;
        PLPath::from_dto(&dto)
    }
}

/// A sampled `p`-brane in `R^n`: a full grid of points over the unit cube
/// `[0,1]^p`, stored row major with axis order `(s_{p-1}, .., s_1, t)`,
/// the integration parameter `t` innermost.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledBrane {
    n: u8,
    shape: Vec<usize>,
    points: Vec<Vec<f64>>,
}

/// Serialization form of [`SampledBrane`]. Surfaces use the nested `grid`
/// field; higher branes use `shape` plus flat row-major `points`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BraneDto {
    pub n: u8,
    pub p: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shape: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<Vec<f64>>>,
}

impl SampledBrane {
    pub fn new(n: u8, shape: Vec<usize>, points: Vec<Vec<f64>>) -> Result<Self, Error> {
        if n == 0 || n > MAX_N {
            return Err(Error::ResourceGuard(format!("n = {n} outside 1..={MAX_N}")));
        }
        if shape.len() < 2 {
            return Err(Error::BadBrane("need at least two grid axes".into()));
        }
        if shape.iter().any(|&s| s == 0) {
            return Err(Error::BadBrane("zero-length grid axis".into()));
        }
        let total: usize = shape.iter().product();
        if points.len() != total {
            return Err(Error::Dimension(format!("shape wants {total} points, got {}", points.len())));
        }
        for pt in &points {
            check_point(n, pt)?;
        }
        Ok(SampledBrane { n, shape, points })
    }

    /// Surface constructor from nested rows, first index `s`, second `t`.
    pub fn from_grid(n: u8, grid: Vec<Vec<Vec<f64>>>) -> Result<Self, Error> {
        if grid.is_empty() {
            return Err(Error::BadBrane("empty grid".into()));
        }
        let cols = grid[0].len();
        if grid.iter().any(|row| row.len() != cols) {
            return Err(Error::BadBrane("ragged grid rows".into()));
        }
        let shape = vec![grid.len(), cols];
        SampledBrane::new(n, shape, grid.into_iter().flatten().collect())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn p(&self) -> usize {
        self.shape.len()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    fn flat(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        let mut out = 0usize;
        for (i, s) in idx.iter().zip(self.shape.iter()) {
            debug_assert!(i < s);
            out = out * s + i;
        }
        out
    }

    pub fn point(&self, idx: &[usize]) -> &[f64] {
        &self.points[self.flat(idx)]
    }

    /// Surface row `r` as a point list over `t` (surfaces only).
    pub fn row(&self, r: usize) -> &[Vec<f64>] {
        assert_eq!(self.p(), 2);
        let cols = self.shape[1];
        &self.points[r * cols..(r + 1) * cols]
    }

    /// The `(p-1)`-brane at position `k` of the outermost axis.
    pub fn outer_slice(&self, k: usize) -> SampledBrane {
        let inner: usize = self.shape[1..].iter().product();
        SampledBrane {
            n: self.n,
            shape: self.shape[1..].to_vec(),
            points: self.points[k * inner..(k + 1) * inner].to_vec(),
        }
    }

    /// Largest violation of the globe conditions: both `t` faces collapse to
    /// single points, and for each axis `a >= 1` before `t` the two faces
    /// are constant along all axes outer to `a`. The outermost axis is
    /// unconstrained.
    pub fn globe_residual(&self) -> f64 {
        let p = self.p();
        let mut worst = 0.0f64;
        let mut diff = |a: &[f64], b: &[f64]| {
            for (x, y) in a.iter().zip(b.iter()) {
                let d = (x - y).abs();
                if d > worst {
                    worst = d;
                }
            }
        };
        let mut idx = vec![0usize; p];
        let total: usize = self.shape.iter().product();
        for flat in 0..total {
            let mut rem = flat;
            for a in (0..p).rev() {
                idx[a] = rem % self.shape[a];
                rem /= self.shape[a];
            }
            // Both t faces are single points.
            if idx[p - 1] == 0 || idx[p - 1] == self.shape[p - 1] - 1 {
                let mut anchor = vec![0usize; p];
                anchor[p - 1] = idx[p - 1];
                diff(&self.points[flat], self.point(&anchor));
            }
            // Faces of inner s axes are constant along all outer axes.
            for a in 1..p - 1 {
                if idx[a] == 0 || idx[a] == self.shape[a] - 1 {
                    let mut anchor = idx.clone();
                    for outer in anchor.iter_mut().take(a) {
                        *outer = 0;
                    }
                    diff(&self.points[flat], self.point(&anchor));
                }
            }
        }
        worst
    }

    pub fn to_dto(&self) -> BraneDto {
        if self.p() == 2 {
            let grid = (0..self.shape[0]).map(|r| self.row(r).to_vec()).collect();
            BraneDto { n: self.n, p: 2, grid: Some(grid), shape: None, points: None }
        } else {
            BraneDto {
                n: self.n,
                p: self.p(),
                grid: None,
                shape: Some(self.shape.clone()),
                points: Some(self.points.clone()),
            }
        }
    }

    pub fn from_dto(dto: &BraneDto) -> Result<Self, Error> {
        let brane = match (&dto.grid, &dto.shape, &dto.points) {
            (Some(grid), None, None) => SampledBrane::from_grid(dto.n, grid.clone()),
            (None, Some(shape), Some(points)) => SampledBrane::new(dto.n, shape.clone(), points.clone()),
            _ => Err(Error::BadBrane("provide either grid or shape plus points".into())),
        }?;
        if brane.p() != dto.p {
            return Err(Error::BadBrane(format!("declared p = {} but grid has {} axes", dto.p, brane.p())));
        }
        Ok(brane)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_dto()).expect("brane serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        let dto: BraneDto = serde_json::from_str(s)?;
        SampledBrane::from_dto(&dto)
    }
}

/// Outcome of a holonomy quadrature: the group element in log coordinates
/// plus the boundary diagnostic computed alongside it.
#[derive(Clone, Debug)]
pub struct HolonomyResult {
    truncation: u8,
    shape: Vec<usize>,
    value: GroupElement,
    boundary_residual: f64,
}

/// Serialization form of [`HolonomyResult`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HolonomyResultDto {
    pub n: u8,
    pub p: usize,
    pub truncation: u8,
    pub degree: i32,
    pub coords: Vec<f64>,
    pub labels: Vec<String>,
    pub shape: Vec<usize>,
    #[serde(rename = "boundaryResidual")]
    pub boundary_residual: f64,
}

impl HolonomyResult {
    pub fn value(&self) -> &GroupElement {
        &self.value
    }

    pub fn value_f64(&self) -> Vec<f64> {
        self.value.coords().iter().map(q_to_f64).collect()
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn boundary_residual(&self) -> f64 {
        self.boundary_residual
    }

    pub fn to_dto(&self, engine: &HolonomyEngine) -> HolonomyResultDto {
        let level = (-self.value.degree()) as usize;
        HolonomyResultDto {
            n: engine.n(),
            p: self.shape.len(),
            truncation: self.truncation,
            degree: self.value.degree(),
            coords: self.value_f64(),
            labels: engine.complex().labels(level).to_vec(),
            shape: self.shape.clone(),
            boundary_residual: self.boundary_residual,
        }
    }

    pub fn to_json(&self, engine: &HolonomyEngine) -> String {
        serde_json::to_string_pretty(&self.to_dto(engine)).expect("result serialization cannot fail")
    }
}

/// Named residuals from a verification pass, for report rendering.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ResidualReport {
    pub entries: Vec<(String, f64)>,
}

impl ResidualReport {
    pub fn push(&mut self, name: impl Into<String>, value: f64) {
        self.entries.push((name.into(), value));
    }

    pub fn max(&self) -> f64 {
        self.entries.iter().map(|(_, v)| *v).fold(0.0, f64::max)
    }
}

/// Precomputed context for signature and holonomy quadratures at a fixed
/// `n` and truncation class: the exact group complex, its basis, the `f64`
/// tables, and the generator coordinate lookup per level.
pub struct HolonomyEngine {
    n: u8,
    truncation: u8,
    gc: GroupComplex,
    basis: ComplexBasis,
    num: NumericComplex,
    level_index: Vec<HashMap<u8, usize>>,
}

impl HolonomyEngine {
    pub fn new(n: u8, truncation: u8) -> Result<Self, Error> {
        let (cc, basis) = extract_structure_constants(n, truncation)?;
        let num = NumericComplex::new(&cc);
        let mut level_index = Vec::with_capacity(cc.depth());
        for level in 0..cc.depth() {
            let mut map = HashMap::new();
            for letter in Letter::all(n) {
                if letter.arity() as usize == level + 1 {
                    if let Some(k) = basis.generator_coordinate(level, letter.mask()) {
                        map.insert(letter.mask(), k);
                    }
                }
            }
            level_index.push(map);
        }
        Ok(HolonomyEngine { n, truncation, gc: GroupComplex::new(cc), basis, num, level_index })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn truncation(&self) -> u8 {
        self.truncation
    }

    pub fn group(&self) -> &GroupComplex {
        &self.gc
    }

    pub fn basis(&self) -> &ComplexBasis {
        &self.basis
    }

    pub fn complex(&self) -> &NilpotentCrossedComplex {
        self.gc.complex()
    }

    pub(crate) fn numeric(&self) -> &NumericComplex {
        &self.num
    }

    /// Coordinate of the generator `Z_I` inside the level `|I| - 1` basis.
    pub(crate) fn generator_slot(&self, level: usize, mask: u8) -> usize {
        self.level_index[level][&mask]
    }

    /// Log coordinates of `exp(sum delta_i Z_i)` in the degree-0 basis.
    pub(crate) fn lift(&self, delta: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.num.dim(0)];
        for (i, d) in delta.iter().enumerate() {
            out[self.generator_slot(0, 1 << i)] = *d;
        }
        out
    }

    fn check_n(&self, got: u8) -> Result<(), Error> {
        if got != self.n {
            return Err(Error::Dimension(format!("engine built for n = {}, input has n = {got}", self.n)));
        }
        Ok(())
    }

    pub(crate) fn check_path(&self, path: &PLPath) -> Result<(), Error> {
        self.check_n(path.n())
    }

    pub(crate) fn check_brane(&self, brane: &SampledBrane) -> Result<(), Error> {
        self.check_n(brane.n())?;
        let residual = brane.globe_residual();
        if residual > GLOBE_TOLERANCE {
            return Err(Error::BadBrane(format!("globe conditions violated by {residual:.3e}")));
        }
        let level = brane.p() - 1;
        if level >= self.gc.depth() {
            return Err(Error::ResourceGuard(format!(
                "p = {} needs complex depth {} but n = {} gives {}",
                brane.p(),
                level + 1,
                self.n,
                self.gc.depth()
            )));
        }
        if (self.truncation as usize) < brane.p() {
            return Err(Error::ResourceGuard(format!(
                "p = {} needs truncation class >= {}, engine has {}",
                brane.p(),
                brane.p(),
                self.truncation
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use std::sync::{Arc, Mutex, OnceLock};

    static ENGINES: OnceLock<Mutex<HashMap<(u8, u8), Arc<HolonomyEngine>>>> = OnceLock::new();

    pub fn engine(n: u8, truncation: u8) -> Arc<HolonomyEngine> {
        let map = ENGINES.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = map.lock().unwrap();
        guard
            .entry((n, truncation))
            .or_insert_with(|| Arc::new(HolonomyEngine::new(n, truncation).unwrap()))
            .clone()
    }
}
