//! Surface and brane holonomy quadratures.
//!
//! A surface is integrated strip by strip: each strip contributes the
//! exponential of the transgressed 2-form integrated along its midline,
//! with the integrand conjugated back to the base point by the running
//! row signature. Branes of higher dimension land in abelian levels, so
//! their quadrature is a volume sum of transported form coordinates over
//! grid cells, and the boundary diagnostic recurses into the outer faces.

use crate::error::Error;
use crate::scalar::q_from_f64;
use crate::word::Letter;

use super::numeric::{max_abs_diff, NumericComplex};
use super::{
    globes, HolonomyEngine, HolonomyResult, PLPath, ResidualReport, SampledBrane,
    NEW_SEGMENT_MULTIPLIES_LEFT, NEW_STRIP_MULTIPLIES_RIGHT,
};

/// Determinant of a small dense matrix by cofactor expansion; holonomy
/// integrands never need more than `p <= n` rows.
fn det(m: &[Vec<f64>]) -> f64 {
    match m.len() {
        0 => 1.0,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        k => {
            let mut out = 0.0;
            let mut sign = 1.0;
            for r in 0..k {
                if m[r][0] != 0.0 {
                    let minor: Vec<Vec<f64>> =
                        (0..k).filter(|x| *x != r).map(|x| m[x][1..].to_vec()).collect();
                    out += sign * m[r][0] * det(&minor);
                }
                sign = -sign;
            }
            out
        }
    }
}

impl HolonomyEngine {
    /// Generator slots at `level` with `level + 1` letters, as 0-based
    /// coordinate index lists.
    fn level_slots(&self, level: usize) -> Vec<(Vec<usize>, usize)> {
        Letter::all(self.n())
            .into_iter()
            .filter(|l| l.arity() as usize == level + 1)
            .map(|l| {
                let idx = l.indices().iter().map(|i| (*i - 1) as usize).collect();
                (idx, self.generator_slot(level, l.mask()))
            })
            .collect()
    }

    fn compose_segment(&self, seg: &[f64], m: &[f64]) -> Vec<f64> {
        if NEW_SEGMENT_MULTIPLIES_LEFT {
            self.numeric().mul(0, seg, m)
        } else {
            self.numeric().mul(0, m, seg)
        }
    }

    /// Integral of the transported 2-form coordinates along one row, with
    /// the s-derivative supplied per node. The running row signature is
    /// evaluated at each segment midpoint and conjugates the integrand back
    /// to the base point.
    fn row_transgression(&self, row: &[Vec<f64>], dsv: &[Vec<f64>]) -> Vec<f64> {
        let num = self.numeric();
        let nu = self.n() as usize;
        let slots = self.level_slots(1);
        let mut b = vec![0.0; num.dim(1)];
        let mut m = vec![0.0; num.dim(0)];
        for j in 0..row.len().saturating_sub(1) {
            let seg: Vec<f64> = (0..nu).map(|i| row[j + 1][i] - row[j][i]).collect();
            let half: Vec<f64> = seg.iter().map(|x| 0.5 * x).collect();
            let m_half = self.compose_segment(&self.lift(&half), &m);
            let mut val = vec![0.0; num.dim(1)];
            let mut any = false;
            for (idx, slot) in &slots {
                let (i, k) = (idx[0], idx[1]);
                let vi = 0.5 * (dsv[j][i] + dsv[j + 1][i]);
                let vk = 0.5 * (dsv[j][k] + dsv[j + 1][k]);
                let c = seg[i] * vk - seg[k] * vi;
                if c != 0.0 {
                    any = true;
                }
                val[*slot] = c;
            }
            if any {
                let moved = num.act(1, &NumericComplex::neg(&m_half), &val);
                for (acc, x) in b.iter_mut().zip(moved.iter()) {
                    *acc += x;
                }
            }
            m = self.compose_segment(&self.lift(&seg), &m);
        }
        b
    }

    /// Value of the transgressed 2-form at a grid row: the `t` integral runs
    /// along the stored row, the `s` derivative uses central differences,
    /// one sided at the boundary rows. Coordinates refer to the level-1
    /// basis of the complex.
    pub fn transgressed_form_value(
        &self,
        brane: &SampledBrane,
        row: usize,
    ) -> Result<Vec<f64>, Error> {
        self.check_brane(brane)?;
        if brane.p() != 2 {
            return Err(Error::BadBrane(format!("transgression expects p = 2, got {}", brane.p())));
        }
        let rows = brane.shape()[0];
        let cols = brane.shape()[1];
        if rows < 2 || cols < 2 {
            return Err(Error::Degenerate("transgression needs at least a 2 x 2 grid".into()));
        }
        if row >= rows {
            return Err(Error::Dimension(format!("row {row} outside 0..{rows}")));
        }
        let inv_ds = (rows - 1) as f64;
        let nu = self.n() as usize;
        let (lo, hi, scale) = if row == 0 {
            (0, 1, inv_ds)
        } else if row == rows - 1 {
            (rows - 2, rows - 1, inv_ds)
        } else {
            (row - 1, row + 1, 0.5 * inv_ds)
        };
        let lo_row = brane.row(lo);
        let hi_row = brane.row(hi);
        let dsv: Vec<Vec<f64>> = (0..cols)
            .map(|j| (0..nu).map(|i| (hi_row[j][i] - lo_row[j][i]) * scale).collect())
            .collect();
        Ok(self.row_transgression(brane.row(row), &dsv))
    }

    /// 2-holonomy of a sampled surface: the ordered product over strips of
    /// the exponential of the strip transgression, following the frozen
    /// orientation package. Each strip evaluates the form on its midline
    /// with the staggered difference as s-derivative. The boundary
    /// diagnostic compares the image under the differential with the
    /// quotient of the boundary row signatures.
    pub fn holonomy2(&self, brane: &SampledBrane) -> Result<HolonomyResult, Error> {
        self.check_brane(brane)?;
        if brane.p() != 2 {
            return Err(Error::BadBrane(format!("holonomy2 expects p = 2, got {}", brane.p())));
        }
        let num = self.numeric();
        let rows = brane.shape()[0];
        let cols = brane.shape()[1];
        let nu = self.n() as usize;
        let mut h = vec![0.0; num.dim(1)];
        if rows >= 2 && cols >= 2 {
            let inv_ds = (rows - 1) as f64;
            let ds = 1.0 / inv_ds;
            for r in 0..rows - 1 {
                let bottom = brane.row(r);
                let top = brane.row(r + 1);
                let mid: Vec<Vec<f64>> = (0..cols)
                    .map(|j| (0..nu).map(|i| 0.5 * (bottom[j][i] + top[j][i])).collect())
                    .collect();
                let dsv: Vec<Vec<f64>> = (0..cols)
                    .map(|j| (0..nu).map(|i| (top[j][i] - bottom[j][i]) * inv_ds).collect())
                    .collect();
                let b = self.row_transgression(&mid, &dsv);
                let step: Vec<f64> = b.iter().map(|x| x * ds).collect();
                h = if NEW_STRIP_MULTIPLIES_RIGHT {
                    num.mul(1, &h, &step)
                } else {
                    num.mul(1, &step, &h)
                };
            }
        }
        let first = self.row_signature(brane.row(0));
        let last = self.row_signature(brane.row(rows - 1));
        let lhs = num.differential_apply(1, &h);
        let rhs = num.mul(0, &NumericComplex::neg(&first), &last);
        self.finish(brane, h, max_abs_diff(&lhs, &rhs))
    }

    /// Holonomy of a sampled brane of any supported dimension.
    pub fn holonomy(&self, brane: &SampledBrane) -> Result<HolonomyResult, Error> {
        if brane.p() == 2 {
            self.holonomy2(brane)
        } else {
            self.holonomy_p(brane)
        }
    }

    /// `p`-holonomy for `p >= 3`. The value lives in an abelian level, so
    /// the quadrature is a volume sum: every grid cell of the `s` axes
    /// contributes the transported `p`-form coordinates integrated along
    /// the cell's averaged mid row. Determinant columns are ordered
    /// `(t, s_1, .., s_{p-1})` with `s_1` the innermost grid axis before
    /// `t`. The boundary diagnostic recurses into the two outer faces and
    /// compares the image under the differential with
    /// `H(outer last)^{-1} * H(outer first)`; that orientation, the inverse
    /// of the level-1 pattern, is what the determinant order above produces,
    /// and `the_brane_boundary_orientation_is_fixed_by_measurement` pins it.
    pub fn holonomy_p(&self, brane: &SampledBrane) -> Result<HolonomyResult, Error> {
        self.check_brane(brane)?;
        let p = brane.p();
        if p < 3 {
            return Err(Error::BadBrane(format!("holonomy_p expects p >= 3, got {p}")));
        }
        let level = p - 1;
        let num = self.numeric();
        let nu = self.n() as usize;
        let shape = brane.shape().to_vec();
        let cols = shape[p - 1];
        let q = p - 1;
        let cells: Vec<usize> = shape[..q].iter().map(|s| s - 1).collect();
        let slots = self.level_slots(level);
        let corner_count = 1usize << q;
        let mut h = vec![0.0; num.dim(level)];
        let total_cells: usize = cells.iter().product();
        if cols >= 2 && cells.iter().all(|&c| c >= 1) {
            let mut idx = vec![0usize; p];
            for flat in 0..total_cells {
                let mut rem = flat;
                let mut cell = vec![0usize; q];
                for a in (0..q).rev() {
                    cell[a] = rem % cells[a];
                    rem /= cells[a];
                }
                // Rows over t at the 2^q corners of this s cell.
                let corner_rows: Vec<Vec<&[f64]>> = (0..corner_count)
                    .map(|corner| {
                        for a in 0..q {
                            idx[a] = cell[a] + ((corner >> a) & 1);
                        }
                        (0..cols)
                            .map(|j| {
                                idx[p - 1] = j;
                                brane.point(&idx)
                            })
                            .collect()
                    })
                    .collect();
                let mid_weight = 1.0 / corner_count as f64;
                let mid: Vec<Vec<f64>> = (0..cols)
                    .map(|j| {
                        (0..nu)
                            .map(|i| {
                                corner_rows.iter().map(|rows| rows[j][i]).sum::<f64>() * mid_weight
                            })
                            .collect()
                    })
                    .collect();
                // Face-averaged forward differences along each s axis. The
                // grid spacing stays inside: the sum over cells then equals
                // the integral against the volume element.
                let diff_weight = 2.0 / corner_count as f64;
                let diffs: Vec<Vec<Vec<f64>>> = (0..q)
                    .map(|a| {
                        (0..cols)
                            .map(|j| {
                                (0..nu)
                                    .map(|i| {
                                        (0..corner_count)
                                            .filter(|c| c & (1 << a) == 0)
                                            .map(|c| {
                                                corner_rows[c | (1 << a)][j][i]
                                                    - corner_rows[c][j][i]
                                            })
                                            .sum::<f64>()
                                            * diff_weight
                                    })
                                    .collect()
                            })
                            .collect()
                    })
                    .collect();
                let mut m = vec![0.0; num.dim(0)];
                for j in 0..cols - 1 {
                    let seg: Vec<f64> = (0..nu).map(|i| mid[j + 1][i] - mid[j][i]).collect();
                    let half: Vec<f64> = seg.iter().map(|x| 0.5 * x).collect();
                    let m_half = self.compose_segment(&self.lift(&half), &m);
                    let mut val = vec![0.0; num.dim(level)];
                    let mut any = false;
                    for (coords, slot) in &slots {
                        let mat: Vec<Vec<f64>> = coords
                            .iter()
                            .map(|&i| {
                                let mut row = Vec::with_capacity(p);
                                row.push(seg[i]);
                                for b in 1..=q {
                                    let a = q - b;
                                    row.push(0.5 * (diffs[a][j][i] + diffs[a][j + 1][i]));
                                }
                                row
                            })
                            .collect();
                        let c = det(&mat);
                        if c != 0.0 {
                            any = true;
                        }
                        val[*slot] = c;
                    }
                    if any {
                        let moved = num.act(level, &NumericComplex::neg(&m_half), &val);
                        for (acc, x) in h.iter_mut().zip(moved.iter()) {
                            *acc += x;
                        }
                    }
                    m = self.compose_segment(&self.lift(&seg), &m);
                }
            }
        }
        let first = self.holonomy(&brane.outer_slice(0))?;
        let last = self.holonomy(&brane.outer_slice(shape[0] - 1))?;
        let lhs = num.differential_apply(level, &h);
        let rhs = num.mul(level - 1, &NumericComplex::neg(&last.value_f64()), &first.value_f64());
        self.finish(brane, h, max_abs_diff(&lhs, &rhs))
    }

    fn finish(
        &self,
        brane: &SampledBrane,
        coords: Vec<f64>,
        residual: f64,
    ) -> Result<HolonomyResult, Error> {
        let level = brane.p() - 1;
        let exact = coords.iter().map(|x| q_from_f64(*x)).collect::<Result<Vec<_>, _>>()?;
        Ok(HolonomyResult {
            truncation: self.truncation(),
            shape: brane.shape().to_vec(),
            value: self.group().element(-(level as i32), exact)?,
            boundary_residual: residual,
        })
    }

    /// Residuals of the two whiskering identities: a path appended after
    /// the surface leaves the holonomy unchanged; a path prepended before
    /// it conjugates the holonomy by the inverse path signature. The
    /// boundary diagnostics of all three quadratures are included.
    pub fn whisker_residuals(
        &self,
        incoming: &PLPath,
        outgoing: &PLPath,
        brane: &SampledBrane,
    ) -> Result<ResidualReport, Error> {
        self.check_path(incoming)?;
        self.check_path(outgoing)?;
        let base = self.holonomy2(brane)?;
        let mut report = ResidualReport::default();
        let after = self.holonomy2(&globes::whisker_after(brane, outgoing)?)?;
        report.push(
            "appended path leaves the holonomy unchanged",
            max_abs_diff(&after.value_f64(), &base.value_f64()),
        );
        let before = self.holonomy2(&globes::whisker_before(incoming, brane)?)?;
        let transported = self.numeric().act(
            1,
            &NumericComplex::neg(&self.row_signature(incoming.points())),
            &base.value_f64(),
        );
        report.push(
            "prepended path conjugates the holonomy",
            max_abs_diff(&before.value_f64(), &transported),
        );
        report.push(
            "boundary diagnostics stay small",
            base.boundary_residual()
                .max(after.boundary_residual())
                .max(before.boundary_residual()),
        );
        Ok(report)
    }

    /// Thin homotopy suite on a surface: a smoothstep reparametrization of
    /// both parameters and a fold retrace of `t`, each compared against the
    /// original holonomy. The fold doubles the column count so its nodes
    /// reuse exact grid points.
    pub fn thin_homotopy_residuals(&self, brane: &SampledBrane) -> Result<ResidualReport, Error> {
        let base = self.holonomy2(brane)?;
        let rows = brane.shape()[0];
        let cols = brane.shape()[1];
        let mut report = ResidualReport::default();
        let warped =
            globes::resample_surface(brane, rows, cols, globes::smoothstep, globes::smoothstep)?;
        report.push(
            "smoothstep reparametrization",
            max_abs_diff(&self.holonomy2(&warped)?.value_f64(), &base.value_f64()),
        );
        let folded = globes::resample_surface(brane, rows, 2 * cols - 1, |s| s, globes::fold_map)?;
        report.push(
            "fold cancellation",
            max_abs_diff(&self.holonomy2(&folded)?.value_f64(), &base.value_f64()),
        );
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::globes::{
        cube_sweep, cube_sweep_point, quarter_circle, reverse_rows, sample_brane, sample_surface,
        smoothstep, square_sweep, square_sweep_band, square_sweep_point, stack_rows,
    };
    use crate::holonomy::test_support;

    #[test]
    fn the_square_sweep_has_unit_leading_coefficient() {
        let engine = test_support::engine(2, 2);
        let brane = square_sweep(2, 1, 2, 21, 21).unwrap();
        let result = engine.holonomy2(&brane).unwrap();
        let slot = engine.generator_slot(1, 0b11);
        let coords = result.value_f64();
        assert!((coords[slot] - 1.0).abs() < 1e-12);
        assert!(result.boundary_residual() < 1e-12);
    }

    #[test]
    fn surfaces_constant_in_s_have_identity_holonomy() {
        let engine = test_support::engine(2, 3);
        let path = quarter_circle(17);
        let row: Vec<Vec<f64>> = path.points().to_vec();
        let brane = SampledBrane::from_grid(2, vec![row.clone(); 9]).unwrap();
        let result = engine.holonomy2(&brane).unwrap();
        assert!(result.value_f64().iter().all(|x| x.abs() < 1e-14));
        assert!(result.boundary_residual() < 1e-12);
        let form = engine.transgressed_form_value(&brane, 4).unwrap();
        assert!(form.iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn the_transgressed_form_scales_linearly_in_one_coordinate() {
        let engine = test_support::engine(2, 2);
        let base = square_sweep(2, 1, 2, 21, 21).unwrap();
        let lambda = 0.75;
        let scaled = sample_surface(2, 21, 21, |s, t| {
            let mut pt = square_sweep_point(2, 1, 2, s, t);
            pt[1] *= lambda;
            pt
        })
        .unwrap();
        let f_base = engine.transgressed_form_value(&base, 10).unwrap();
        let f_scaled = engine.transgressed_form_value(&scaled, 10).unwrap();
        let slot = engine.generator_slot(1, 0b11);
        assert!((f_scaled[slot] - lambda * f_base[slot]).abs() < 1e-12);
    }

    #[test]
    fn malformed_transgression_requests_are_rejected() {
        let engine = test_support::engine(2, 2);
        let brane = square_sweep(2, 1, 2, 5, 5).unwrap();
        assert!(matches!(
            engine.transgressed_form_value(&brane, 5),
            Err(Error::Dimension(_))
        ));
        let flat = SampledBrane::new(2, vec![2, 1], vec![vec![0.0, 0.0]; 2]).unwrap();
        assert!(matches!(
            engine.transgressed_form_value(&flat, 0),
            Err(Error::Degenerate(_))
        ));
        let engine3 = test_support::engine(3, 3);
        let cube = cube_sweep(3, &[3, 3, 21]).unwrap();
        assert!(matches!(
            engine3.transgressed_form_value(&cube, 0),
            Err(Error::BadBrane(_))
        ));
    }

    #[test]
    fn the_boundary_identity_converges_at_second_order() {
        // Truncation 4 is the first class where the identity is not exact
        // discretely, so a genuine quadrature error is available to measure.
        let engine = test_support::engine(2, 4);
        let residual = |points: usize| {
            let brane = sample_surface(2, points, points, generic_surface_point).unwrap();
            engine.holonomy2(&brane).unwrap().boundary_residual()
        };
        let coarse = residual(11);
        let medium = residual(21);
        let fine = residual(41);
        assert!(fine < 1e-3);
        let r1 = coarse / medium;
        let r2 = medium / fine;
        assert!((2.5..6.0).contains(&r1), "first refinement ratio {r1}");
        assert!((2.5..6.0).contains(&r2), "second refinement ratio {r2}");
    }

    fn generic_surface_point(s: f64, t: f64) -> Vec<f64> {
        // The common drift keeps the boundary rows away from loops, whose
        // signatures would commute at low truncation and mask the mirror.
        let a = (std::f64::consts::PI * t).sin();
        vec![
            0.6 * t + a * (0.8 + 0.3 * (2.0 * s + 0.4).sin() * (1.3 * t).cos()),
            -0.4 * t + a * (0.5 + 0.4 * (1.7 * s).cos() * (0.9 * t + 0.2).sin()),
        ]
    }

    fn generic_brane_point(sigma: f64, s1: f64, t: f64) -> Vec<f64> {
        let a = (std::f64::consts::PI * t).sin();
        let u = s1 * (1.0 - s1);
        vec![
            a * (0.7 + 0.3 * u * (2.0 * sigma + 0.4).sin() * (1.1 * t).cos()),
            a * (0.4 + 0.5 * s1 * u * (1.7 * sigma).cos() * (0.8 * t + 0.3).sin()),
            a * (0.2 + 0.4 * u * u * (sigma + 0.2).sin() * (1.3 * t).sin()),
        ]
    }

    #[test]
    fn bootstrap_ordering_rejects_the_mirrored_convention() {
        let engine = test_support::engine(2, 4);
        let brane = sample_surface(2, 41, 41, generic_surface_point).unwrap();
        let result = engine.holonomy2(&brane).unwrap();
        let num = engine.numeric();
        let first = engine.row_signature(brane.row(0));
        let last = engine.row_signature(brane.row(40));
        let lhs = num.differential_apply(1, &result.value_f64());
        let frozen = max_abs_diff(&lhs, &num.mul(0, &NumericComplex::neg(&first), &last));
        let mirrored = max_abs_diff(&lhs, &num.mul(0, &last, &NumericComplex::neg(&first)));
        let reversed = max_abs_diff(&lhs, &num.mul(0, &NumericComplex::neg(&last), &first));
        assert!(frozen < 1e-4);
        assert!(mirrored > 100.0 * frozen, "mirrored {mirrored} vs frozen {frozen}");
        assert!(reversed > 100.0 * frozen, "reversed {reversed} vs frozen {frozen}");
    }

    #[test]
    fn the_brane_boundary_orientation_is_fixed_by_measurement() {
        let engine = test_support::engine(3, 3);
        let num = engine.numeric();
        let residuals = |shape: [usize; 3]| {
            let brane =
                sample_brane(3, &shape, |p| generic_brane_point(p[0], p[1], p[2])).unwrap();
            let result = engine.holonomy_p(&brane).unwrap();
            let first = engine.holonomy(&brane.outer_slice(0)).unwrap().value_f64();
            let last =
                engine.holonomy(&brane.outer_slice(shape[0] - 1)).unwrap().value_f64();
            let lhs = num.differential_apply(2, &result.value_f64());
            let kept = max_abs_diff(&lhs, &num.mul(1, &NumericComplex::neg(&last), &first));
            let inverted = max_abs_diff(&lhs, &num.mul(1, &NumericComplex::neg(&first), &last));
            (kept, inverted, result.boundary_residual())
        };
        let (kept_c, _, reported_c) = residuals([9, 9, 33]);
        let (kept_f, inverted_f, reported_f) = residuals([17, 17, 65]);
        assert_eq!(kept_c, reported_c);
        assert_eq!(kept_f, reported_f);
        // The kept orientation converges at second order; the inverted one
        // stalls at twice the holonomy size.
        assert!(kept_c / kept_f > 2.5, "coarse {kept_c} fine {kept_f}");
        assert!(inverted_f > 100.0 * kept_f, "inverted {inverted_f} vs kept {kept_f}");
    }

    #[test]
    fn stacked_bands_multiply_their_holonomies() {
        let engine = test_support::engine(2, 3);
        let bottom = square_sweep_band(2, 1, 2, 11, 21, 0.0, 0.5).unwrap();
        let top = square_sweep_band(2, 1, 2, 11, 21, 0.5, 1.0).unwrap();
        let whole = stack_rows(&bottom, &top).unwrap();
        let hb = engine.holonomy2(&bottom).unwrap().value_f64();
        let ht = engine.holonomy2(&top).unwrap().value_f64();
        let hw = engine.holonomy2(&whole).unwrap().value_f64();
        let product = engine.numeric().mul(1, &hb, &ht);
        assert!(max_abs_diff(&hw, &product) < 1e-12);
    }

    #[test]
    fn whisker_identities_hold_to_roundoff() {
        let engine = test_support::engine(3, 3);
        let brane = square_sweep(3, 1, 2, 15, 15).unwrap();
        let incoming =
            PLPath::new(3, vec![vec![-0.5, 0.25, 0.5], vec![-0.25, 0.0, 0.25], vec![0.0, 0.0, 0.0]])
                .unwrap();
        let outgoing =
            PLPath::new(3, vec![vec![1.0, 1.0, 0.0], vec![1.5, 0.5, -0.5], vec![1.0, 0.0, 0.5]])
                .unwrap();
        let report = engine.whisker_residuals(&incoming, &outgoing, &brane).unwrap();
        for (name, value) in &report.entries[..2] {
            assert!(*value < 1e-9, "{name} residual {value}");
        }
    }

    #[test]
    fn fold_retraces_cancel_exactly() {
        let engine = test_support::engine(2, 3);
        let brane = sample_surface(2, 21, 21, |s, t| {
            square_sweep_point(2, 1, 2, smoothstep(s), t)
        })
        .unwrap();
        let report = engine.thin_homotopy_residuals(&brane).unwrap();
        let fold = report.entries.iter().find(|(n, _)| n.contains("fold")).unwrap().1;
        assert!(fold < 1e-10, "fold residual {fold}");
        let warp = report.entries.iter().find(|(n, _)| n.contains("smoothstep")).unwrap().1;
        assert!(warp < 5e-2, "smoothstep residual {warp}");
    }

    #[test]
    fn reversing_the_sweep_inverts_the_holonomy() {
        let engine = test_support::engine(2, 3);
        let brane = sample_surface(2, 21, 21, |s, t| {
            square_sweep_point(2, 1, 2, smoothstep(s), t)
        })
        .unwrap();
        let h = engine.holonomy2(&brane).unwrap().value_f64();
        let hr = engine.holonomy2(&reverse_rows(&brane).unwrap()).unwrap().value_f64();
        let inv = NumericComplex::neg(&h);
        assert!(max_abs_diff(&hr, &inv) < 1e-12);
    }

    #[test]
    fn the_cube_sweep_reproduces_its_volume() {
        let engine = test_support::engine(3, 3);
        let brane = cube_sweep(3, &[9, 9, 41]).unwrap();
        let result = engine.holonomy_p(&brane).unwrap();
        let slot = engine.generator_slot(2, 0b111);
        let coords = result.value_f64();
        assert!((coords[slot] - 1.0).abs() < 1e-3, "volume coefficient {}", coords[slot]);
        assert!(result.boundary_residual() < 0.1);
    }

    #[test]
    fn branes_constant_in_the_outer_axis_have_identity_holonomy() {
        let engine = test_support::engine(3, 3);
        let brane =
            sample_brane(3, &[5, 9, 21], |p| cube_sweep_point(3, 0.5, p[1], p[2])).unwrap();
        let result = engine.holonomy_p(&brane).unwrap();
        assert!(result.value_f64().iter().all(|x| x.abs() < 1e-12));
        assert!(result.boundary_residual() < 1e-10);
    }

    #[test]
    fn dimension_mismatches_are_rejected() {
        let engine = test_support::engine(2, 3);
        let brane = square_sweep(2, 1, 2, 5, 5).unwrap();
        assert!(matches!(engine.holonomy_p(&brane), Err(Error::BadBrane(_))));
        let cube = cube_sweep(3, &[3, 3, 21]).unwrap();
        let engine3 = test_support::engine(3, 3);
        assert!(matches!(engine3.holonomy2(&cube), Err(Error::BadBrane(_))));
        assert!(matches!(engine.holonomy(&cube), Err(Error::Dimension(_))));
    }
}
