//! Reference paths, surfaces, and branes used by tests, benchmarks, and the
//! command line demos, plus resampling helpers for thin homotopy checks.

use crate::error::Error;

use super::{PLPath, SampledBrane, GLOBE_TOLERANCE};

/// Cubic step `x^2 (3 - 2x)`: fixes 0 and 1 and has vanishing derivative at
/// both, so composing a parametrization with it preserves breakpoints.
pub fn smoothstep(x: f64) -> f64 {
    x * x * (3.0 - 2.0 * x)
}

/// Piecewise linear fold of the unit interval: out to one half, back to
/// zero, then across to one. A curve run through this map retraces its
/// first half and cancels it, so signatures and holonomies are unchanged.
/// Nodes `k / (2m)` map onto nodes `j / m`, so a fold-resampled grid with
/// `2m + 1` columns reuses exact grid points of an `m + 1` column grid.
pub fn fold_map(t: f64) -> f64 {
    if t <= 0.25 {
        2.0 * t
    } else if t <= 0.5 {
        1.0 - 2.0 * t
    } else {
        2.0 * t - 1.0
    }
}

/// Uniform samples of a parametrized curve on `[0, 1]`.
pub fn sample_curve(n: u8, samples: usize, f: impl Fn(f64) -> Vec<f64>) -> Result<PLPath, Error> {
    if samples < 2 {
        return Err(Error::Degenerate("need at least two samples".into()));
    }
    let last = (samples - 1) as f64;
    PLPath::new(n, (0..samples).map(|k| f(k as f64 / last)).collect())
}

/// Uniform samples of a parametrized surface on the unit square, first
/// parameter `s`, second `t`.
pub fn sample_surface(
    n: u8,
    rows: usize,
    cols: usize,
    f: impl Fn(f64, f64) -> Vec<f64>,
) -> Result<SampledBrane, Error> {
    if rows < 2 || cols < 2 {
        return Err(Error::Degenerate("need at least two samples per axis".into()));
    }
    let grid = (0..rows)
        .map(|r| {
            let s = r as f64 / (rows - 1) as f64;
            (0..cols).map(|c| f(s, c as f64 / (cols - 1) as f64)).collect()
        })
        .collect();
    SampledBrane::from_grid(n, grid)
}

/// Uniform samples of a parametrized `p`-brane over the unit cube. The
/// callback receives parameters in grid axis order `(s_{p-1}, .., s_1, t)`.
pub fn sample_brane(
    n: u8,
    shape: &[usize],
    f: impl Fn(&[f64]) -> Vec<f64>,
) -> Result<SampledBrane, Error> {
    if shape.iter().any(|&s| s < 2) {
        return Err(Error::Degenerate("need at least two samples per axis".into()));
    }
    let total: usize = shape.iter().product();
    let p = shape.len();
    let mut params = vec![0.0f64; p];
    let mut points = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        for a in (0..p).rev() {
            let idx = rem % shape[a];
            rem /= shape[a];
            params[a] = idx as f64 / (shape[a] - 1) as f64;
        }
        points.push(f(&params));
    }
    SampledBrane::new(n, shape.to_vec(), points)
}

/// Continuum square sweep in the plane of coordinates `i` and `j` (1-based):
/// row `s` is the two-segment path from the origin through
/// `(1-s) e_i + s e_j` to `e_i + e_j`. At `s = 0` and `s = 1` it follows the
/// two boundary corners of the unit square.
pub fn square_sweep_point(n: u8, i: u8, j: u8, s: f64, t: f64) -> Vec<f64> {
    let mut pt = vec![0.0; n as usize];
    let c = |pt: &mut Vec<f64>, w: f64| {
        pt[i as usize - 1] += (1.0 - s) * w;
        pt[j as usize - 1] += s * w;
    };
    if t <= 0.5 {
        c(&mut pt, 2.0 * t);
    } else {
        c(&mut pt, 1.0);
        pt[i as usize - 1] += (2.0 * t - 1.0) * s;
        pt[j as usize - 1] += (2.0 * t - 1.0) * (1.0 - s);
    }
    pt
}

/// Sampled square sweep; `cols` should be odd so a node lands on the corner
/// at `t = 1/2`.
pub fn square_sweep(n: u8, i: u8, j: u8, rows: usize, cols: usize) -> Result<SampledBrane, Error> {
    square_sweep_band(n, i, j, rows, cols, 0.0, 1.0)
}

/// Square sweep restricted to the `s` band `[s_lo, s_hi]`, for stacking
/// fixtures: two adjacent bands share their boundary row exactly.
pub fn square_sweep_band(
    n: u8,
    i: u8,
    j: u8,
    rows: usize,
    cols: usize,
    s_lo: f64,
    s_hi: f64,
) -> Result<SampledBrane, Error> {
    if i == 0 || j == 0 || i == j || i > n || j > n {
        return Err(Error::BadGenerator(format!("sweep axes ({i}, {j}) invalid for n = {n}")));
    }
    sample_surface(n, rows, cols, |s, t| {
        square_sweep_point(n, i, j, s_lo + (s_hi - s_lo) * s, t)
    })
}

/// Weight profile of the cube sweep: `30 s^2 (1-s)^2`, chosen so the total
/// weight is 1 and the derivative vanishes at both ends, which keeps the
/// trapezoid sum over `s_1` accurate to fourth order.
pub fn cube_weight(s: f64) -> f64 {
    30.0 * s * s * (1.0 - s) * (1.0 - s)
}

/// Continuum cube sweep in coordinates 1, 2, 3: each `(s_2, s_1)` pair gives
/// a path that first rises to height `s_2 w(s_1)` in the third coordinate,
/// runs the square sweep row `s_1` in the first two, then rises to 1. The
/// pattern closes the unit cube with total volume 1.
pub fn cube_sweep_point(n: u8, s2: f64, s1: f64, t: f64) -> Vec<f64> {
    let mut pt = vec![0.0; n as usize];
    let zmax = s2 * cube_weight(s1);
    let xy = |pt: &mut Vec<f64>, tau: f64| {
        let base = square_sweep_point(n, 1, 2, s1, tau);
        pt[0] = base[0];
        pt[1] = base[1];
    };
    // Scaled parameter with integer phase breakpoints, so grid values like
    // t = k/40 hit the corners exactly in floating point.
    let u = 10.0 * t;
    if u <= 1.0 {
        pt[2] = zmax * u;
    } else if u <= 9.0 {
        xy(&mut pt, (u - 1.0) / 8.0);
        pt[2] = zmax;
    } else {
        xy(&mut pt, 1.0);
        pt[2] = zmax + (1.0 - zmax) * (u - 9.0);
    }
    pt
}

/// Sampled cube sweep with the given grid shape `(s_2, s_1, t)`. The `t`
/// axis should have `20k + 1` nodes so the phase breakpoints at
/// `t = 0.1, 0.5, 0.9` land on grid nodes.
pub fn cube_sweep(n: u8, shape: &[usize; 3]) -> Result<SampledBrane, Error> {
    if n < 3 {
        return Err(Error::BadGenerator(format!("cube sweep needs n >= 3, got {n}")));
    }
    sample_brane(n, shape, |params| cube_sweep_point(n, params[0], params[1], params[2]))
}

/// The same surface with the `s` direction run backwards.
pub fn reverse_rows(brane: &SampledBrane) -> Result<SampledBrane, Error> {
    if brane.p() != 2 {
        return Err(Error::BadBrane("row reversal is defined for surfaces".into()));
    }
    let rows = brane.shape()[0];
    let grid = (0..rows).map(|r| brane.row(rows - 1 - r).to_vec()).collect();
    SampledBrane::from_grid(brane.n(), grid)
}

/// Stacks `second` on top of `first` in the `s` direction. The shared row
/// must match within the globe tolerance and is kept once.
pub fn stack_rows(first: &SampledBrane, second: &SampledBrane) -> Result<SampledBrane, Error> {
    if first.p() != 2 || second.p() != 2 {
        return Err(Error::BadBrane("stacking is defined for surfaces".into()));
    }
    if first.n() != second.n() || first.shape()[1] != second.shape()[1] {
        return Err(Error::Dimension("stacked surfaces must share n and column count".into()));
    }
    let top = first.row(first.shape()[0] - 1);
    let bottom = second.row(0);
    let gap = top
        .iter()
        .flatten()
        .zip(bottom.iter().flatten())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    if gap > GLOBE_TOLERANCE {
        return Err(Error::NotComposable(format!("boundary rows differ by {gap:.3e}")));
    }
    let mut grid: Vec<Vec<Vec<f64>>> = (0..first.shape()[0]).map(|r| first.row(r).to_vec()).collect();
    for r in 1..second.shape()[0] {
        grid.push(second.row(r).to_vec());
    }
    SampledBrane::from_grid(first.n(), grid)
}

/// Appends a path after every row of a surface. The path must start at the
/// common end point of the rows.
pub fn whisker_after(brane: &SampledBrane, path: &PLPath) -> Result<SampledBrane, Error> {
    if brane.p() != 2 {
        return Err(Error::BadBrane("whiskering is defined for surfaces".into()));
    }
    if brane.n() != path.n() {
        return Err(Error::Dimension("surface and path must share n".into()));
    }
    let rows = brane.shape()[0];
    let row_end = brane.row(0).last().unwrap();
    let gap = row_end.iter().zip(path.start()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > GLOBE_TOLERANCE {
        return Err(Error::NotComposable(format!("path starts {gap:.3e} away from the row ends")));
    }
    let grid = (0..rows)
        .map(|r| {
            let mut row = brane.row(r).to_vec();
            row.extend_from_slice(&path.points()[1..]);
            row
        })
        .collect();
    SampledBrane::from_grid(brane.n(), grid)
}

/// Prepends a path before every row of a surface. The path must end at the
/// common start point of the rows.
pub fn whisker_before(path: &PLPath, brane: &SampledBrane) -> Result<SampledBrane, Error> {
    if brane.p() != 2 {
        return Err(Error::BadBrane("whiskering is defined for surfaces".into()));
    }
    if brane.n() != path.n() {
        return Err(Error::Dimension("surface and path must share n".into()));
    }
    let rows = brane.shape()[0];
    let row_start = &brane.row(0)[0];
    let gap = row_start.iter().zip(path.end()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    if gap > GLOBE_TOLERANCE {
        return Err(Error::NotComposable(format!("path ends {gap:.3e} away from the row starts")));
    }
    let grid = (0..rows)
        .map(|r| {
            let mut row = path.points().to_vec();
            row.extend_from_slice(&brane.row(r)[1..]);
            row
        })
        .collect();
    SampledBrane::from_grid(brane.n(), grid)
}

/// Resamples a surface through warps of both parameters, interpolating the
/// stored grid bilinearly. With monotone warps this reparametrizes the
/// surface the grid represents; with the fold map it retraces rows.
pub fn resample_surface(
    brane: &SampledBrane,
    rows: usize,
    cols: usize,
    warp_s: impl Fn(f64) -> f64,
    warp_t: impl Fn(f64) -> f64,
) -> Result<SampledBrane, Error> {
    if brane.p() != 2 {
        return Err(Error::BadBrane("resampling is defined for surfaces".into()));
    }
    let (orig_rows, orig_cols) = (brane.shape()[0], brane.shape()[1]);
    if orig_rows < 2 || orig_cols < 2 || rows < 2 || cols < 2 {
        return Err(Error::Degenerate("need at least two samples per axis".into()));
    }
    let n = brane.n() as usize;
    let locate = |w: f64, count: usize| -> (usize, f64) {
        let u = w.clamp(0.0, 1.0) * (count - 1) as f64;
        let k = (u.floor() as usize).min(count - 2);
        (k, u - k as f64)
    };
    let grid = (0..rows)
        .map(|r| {
            let s = warp_s(r as f64 / (rows - 1) as f64);
            let (r0, a) = locate(s, orig_rows);
            (0..cols)
                .map(|c| {
                    let t = warp_t(c as f64 / (cols - 1) as f64);
                    let (c0, b) = locate(t, orig_cols);
                    (0..n)
                        .map(|x| {
                            let p00 = brane.point(&[r0, c0])[x];
                            let p10 = brane.point(&[r0 + 1, c0])[x];
                            let p01 = brane.point(&[r0, c0 + 1])[x];
                            let p11 = brane.point(&[r0 + 1, c0 + 1])[x];
                            (1.0 - a) * ((1.0 - b) * p00 + b * p01) + a * ((1.0 - b) * p10 + b * p11)
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    SampledBrane::from_grid(brane.n(), grid)
}

/// Quarter of the unit circle from `(1, 0)` to `(0, 1)` in the plane.
pub fn quarter_circle(samples: usize) -> PLPath {
    sample_curve(2, samples, |t| {
        let a = t * std::f64::consts::FRAC_PI_2;
        vec![a.cos(), a.sin()]
    })
    .expect("fixed arc is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_square_sweep_satisfies_the_globe_conditions() {
        let brane = square_sweep(2, 1, 2, 9, 9).unwrap();
        assert!(brane.globe_residual() < 1e-15);
        assert_eq!(brane.point(&[0, 0]), &[0.0, 0.0]);
        assert_eq!(brane.point(&[8, 8]), &[1.0, 1.0]);
        // Row 0 passes through e_1, the last row through e_2.
        assert_eq!(brane.point(&[0, 4]), &[1.0, 0.0]);
        assert_eq!(brane.point(&[8, 4]), &[0.0, 1.0]);
    }

    #[test]
    fn adjacent_bands_stack_back_into_the_full_sweep() {
        let full = square_sweep(2, 1, 2, 9, 9).unwrap();
        let bottom = square_sweep_band(2, 1, 2, 5, 9, 0.0, 0.5).unwrap();
        let top = square_sweep_band(2, 1, 2, 5, 9, 0.5, 1.0).unwrap();
        let stacked = stack_rows(&bottom, &top).unwrap();
        assert_eq!(stacked, full);
    }

    #[test]
    fn the_cube_sweep_satisfies_the_globe_conditions() {
        let brane = cube_sweep(3, &[5, 5, 21]).unwrap();
        assert!(brane.globe_residual() < 1e-15);
        assert_eq!(brane.point(&[0, 0, 0]), &[0.0, 0.0, 0.0]);
        assert_eq!(brane.point(&[4, 4, 20]), &[1.0, 1.0, 1.0]);
        // The weight vanishes on the s_1 faces, so they ignore s_2.
        assert_eq!(brane.point(&[0, 0, 10]), brane.point(&[4, 0, 10]));
        assert_eq!(brane.point(&[0, 4, 10]), brane.point(&[4, 4, 10]));
    }

    #[test]
    fn the_cube_weight_integrates_to_one() {
        // Exact antiderivative check at a few points.
        let anti = |x: f64| 30.0 * (x.powi(3) / 3.0 - x.powi(4) / 2.0 + x.powi(5) / 5.0);
        assert!((anti(1.0) - 1.0).abs() < 1e-15);
        assert!(cube_weight(0.0).abs() < 1e-15);
        assert!(cube_weight(1.0).abs() < 1e-15);
    }

    #[test]
    fn fold_map_nodes_land_on_the_coarse_grid() {
        assert_eq!(fold_map(0.0), 0.0);
        assert_eq!(fold_map(0.25), 0.5);
        assert_eq!(fold_map(0.5), 0.0);
        assert_eq!(fold_map(1.0), 1.0);
        let m = 8;
        for k in 0..=2 * m {
            let v = fold_map(k as f64 / (2 * m) as f64) * m as f64;
            assert!((v - v.round()).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_resampling_reproduces_the_grid() {
        let brane = square_sweep(2, 1, 2, 9, 9).unwrap();
        let same = resample_surface(&brane, 9, 9, |s| s, |t| t).unwrap();
        let diff = (0..9)
            .flat_map(|r| (0..9).map(move |c| (r, c)))
            .map(|(r, c)| {
                brane
                    .point(&[r, c])
                    .iter()
                    .zip(same.point(&[r, c]))
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn whiskered_surfaces_validate_their_joints() {
        let brane = square_sweep(2, 1, 2, 5, 5).unwrap();
        let good = PLPath::new(2, vec![vec![1.0, 1.0], vec![1.5, 0.5]]).unwrap();
        assert!(whisker_after(&brane, &good).is_ok());
        assert!(whisker_before(&good, &brane).is_err());
        let into_origin = PLPath::new(2, vec![vec![-1.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(whisker_before(&into_origin, &brane).is_ok());
        assert!(whisker_after(&brane, &into_origin).is_err());
    }

    #[test]
    fn quarter_circle_connects_the_axis_points() {
        let path = quarter_circle(100);
        assert!((path.start()[0] - 1.0).abs() < 1e-15);
        assert!((path.end()[1] - 1.0).abs() < 1e-15);
    }
}
