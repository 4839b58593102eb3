//! Exact and sampled path signatures.
//!
//! The signature of a piecewise linear path is a finite product of tensor
//! exponentials, one per segment, so it is computed exactly over the
//! rationals: vertex coordinates enter at their dyadic `f64` values. The
//! sampled variant runs the same product in double precision, and an ODE
//! integrator provides an independent oracle for both.
//!
//! Later segments multiply on the left, so the coefficient of a word is the
//! iterated integral with the word's letters in reverse time order: the
//! first letter belongs to the innermost (latest) integral.

use crate::error::Error;
use crate::group::GroupElement;
use crate::scalar::q_from_f64;
use crate::tensor::Tensor;
use crate::word::Letter;

use super::numeric::WordSeries;
use super::{HolonomyEngine, PLPath, NEW_SEGMENT_MULTIPLIES_LEFT};

/// Exact signature of a piecewise linear path as a group-like tensor,
/// truncated beyond `truncation` letters.
pub fn signature_tensor(path: &PLPath, truncation: u8) -> Result<Tensor, Error> {
    let n = path.n();
    let mut sig = Tensor::one(n, truncation);
    for pair in path.points().windows(2) {
        let mut arg = Tensor::zero(n, truncation);
        for i in 0..n as usize {
            let delta = q_from_f64(pair[1][i])? - q_from_f64(pair[0][i])?;
            let gen = Tensor::generator(n, truncation, Letter::single(i as u8 + 1))?;
            arg = arg.add(&gen.scale(&delta))?;
        }
        let seg = arg.exp()?;
        sig = if NEW_SEGMENT_MULTIPLIES_LEFT { seg.mul(&sig)? } else { sig.mul(&seg)? };
    }
    Ok(sig)
}

/// Double-precision signature of a piecewise linear path.
pub fn signature_series(path: &PLPath, truncation: u8) -> WordSeries {
    let n = path.n();
    let mut sig = WordSeries::identity(n, truncation);
    for pair in path.points().windows(2) {
        let v: Vec<f64> = (0..n as usize).map(|i| pair[1][i] - pair[0][i]).collect();
        let seg = WordSeries::segment(n, truncation, &v);
        sig = if NEW_SEGMENT_MULTIPLIES_LEFT { seg.mul(&sig) } else { sig.mul(&seg) };
    }
    sig
}

/// Independent signature oracle: integrates the coefficient ODE
/// `dC(i w)/dt = velocity_i(t) C(w)` with classical fourth order
/// Runge-Kutta over `steps` uniform steps.
///
/// When `steps` is a multiple of the segment count every step sits inside
/// one segment, the velocity is constant there, and the update equals the
/// exponential truncated at fourth order, so the result is exact through
/// class 4 up to roundoff.
pub fn signature_ode(path: &PLPath, truncation: u8, steps: usize) -> WordSeries {
    let n = path.n();
    let pts = path.points();
    let mut sig = WordSeries::identity(n, truncation);
    if pts.len() < 2 || steps == 0 {
        return sig;
    }
    let segs = pts.len() - 1;
    let h = 1.0 / steps as f64;
    for step in 0..steps {
        // The whole step is attributed to the segment under its midpoint;
        // exact as long as steps align with the breakpoints.
        let tm = (step as f64 + 0.5) * h;
        let k = ((tm * segs as f64) as usize).min(segs - 1);
        let v: Vec<f64> =
            (0..n as usize).map(|i| (pts[k + 1][i] - pts[k][i]) * segs as f64).collect();
        let k1 = sig.prepend(&v);
        let mut y2 = sig.clone();
        y2.add_scaled(&k1, h / 2.0);
        let k2 = y2.prepend(&v);
        let mut y3 = sig.clone();
        y3.add_scaled(&k2, h / 2.0);
        let k3 = y3.prepend(&v);
        let mut y4 = sig.clone();
        y4.add_scaled(&k3, h);
        let k4 = y4.prepend(&v);
        sig.add_scaled(&k1, h / 6.0);
        sig.add_scaled(&k2, h / 3.0);
        sig.add_scaled(&k3, h / 3.0);
        sig.add_scaled(&k4, h / 6.0);
    }
    sig
}

impl HolonomyEngine {
    /// Exact signature of a path: the degree-0 group element carrying the
    /// logarithm in the complex basis, plus the group-like tensor itself.
    pub fn signature(&self, path: &PLPath) -> Result<(GroupElement, Tensor), Error> {
        self.check_path(path)?;
        let sig = signature_tensor(path, self.truncation())?;
        let coords = self.basis().express(0, &sig.log()?)?;
        Ok((self.group().element(0, coords)?, sig))
    }

    /// Running log coordinates of a row signature in the degree-0 basis,
    /// in double precision.
    pub(crate) fn row_signature(&self, points: &[Vec<f64>]) -> Vec<f64> {
        let num = self.numeric();
        let n = self.n() as usize;
        let mut m = vec![0.0; num.dim(0)];
        for pair in points.windows(2) {
            let delta: Vec<f64> = (0..n).map(|i| pair[1][i] - pair[0][i]).collect();
            let seg = self.lift(&delta);
            m = if NEW_SEGMENT_MULTIPLIES_LEFT { num.mul(0, &seg, &m) } else { num.mul(0, &m, &seg) };
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::holonomy::globes::{quarter_circle, sample_curve, smoothstep};
    use crate::holonomy::test_support;
    use crate::scalar::{q_to_f64, qr, Q};
    use crate::word::Word;

    fn letters(word: &[u8]) -> Word {
        let ls: Vec<Letter> = word.iter().map(|i| Letter::single(*i)).collect();
        Word::from_letters(&ls).unwrap()
    }

    #[test]
    fn constant_paths_have_the_identity_signature() {
        let path = PLPath::new(2, vec![vec![0.25, -1.0]; 3]).unwrap();
        let sig = signature_tensor(&path, 4).unwrap();
        assert_eq!(sig, Tensor::one(2, 4));
        let series = signature_series(&path, 4);
        assert_eq!(series.coeff(&[]), 1.0);
        assert_eq!(series.coeff(&[1]), 0.0);
    }

    #[test]
    fn single_segment_coefficients_are_monomials_over_factorials() {
        let path = PLPath::new(2, vec![vec![0.0, 0.0], vec![0.5, -0.25]]).unwrap();
        let sig = signature_tensor(&path, 4).unwrap();
        let v1 = qr(1, 2);
        let v2 = qr(-1, 4);
        assert_eq!(sig.coeff(&letters(&[1])), v1);
        assert_eq!(sig.coeff(&letters(&[1, 2])), &v1 * &v2 / Q::from_integer(2.into()));
        assert_eq!(
            sig.coeff(&letters(&[2, 2, 1])),
            &(&(&v2 * &v2) * &v1) / Q::from_integer(6.into())
        );
    }

    #[test]
    fn signatures_multiply_under_concatenation() {
        let first = PLPath::new(2, vec![vec![0.0, 0.0], vec![0.5, 0.25], vec![1.0, 0.0]]).unwrap();
        let then = PLPath::new(2, vec![vec![1.0, 0.0], vec![1.5, -0.5]]).unwrap();
        let whole = first.concat(&then).unwrap();
        let sig_whole = signature_tensor(&whole, 4).unwrap();
        let sig_first = signature_tensor(&first, 4).unwrap();
        let sig_then = signature_tensor(&then, 4).unwrap();
        // The later factor multiplies on the left, exactly.
        assert_eq!(sig_whole, sig_then.mul(&sig_first).unwrap());
    }

    #[test]
    fn reversal_gives_the_exact_inverse() {
        let path =
            PLPath::new(3, vec![vec![0.0, 0.0, 0.0], vec![0.5, 1.0, -0.25], vec![1.0, 0.5, 0.75]])
                .unwrap();
        let loop_path = path.concat(&path.reversed()).unwrap();
        let sig = signature_tensor(&loop_path, 4).unwrap();
        assert_eq!(sig, Tensor::one(3, 4));
    }

    #[test]
    fn ode_oracle_matches_the_exact_signature() {
        let path = PLPath::new(
            3,
            vec![
                vec![0.0, 0.0, 0.0],
                vec![0.5, -0.25, 1.0],
                vec![1.0, 0.5, 0.5],
                vec![0.25, 1.0, -0.5],
            ],
        )
        .unwrap();
        let exact = WordSeries::from_tensor(&signature_tensor(&path, 4).unwrap()).unwrap();
        let ode = signature_ode(&path, 4, 300);
        assert!(exact.max_abs_diff(&ode) < 1e-12);
        let series = signature_series(&path, 4);
        assert!(exact.max_abs_diff(&series) < 1e-13);
    }

    #[test]
    fn engine_signature_agrees_with_the_numeric_row_signature() {
        let engine = test_support::engine(2, 4);
        let path = PLPath::new(2, vec![vec![0.0, 0.0], vec![0.75, 0.5], vec![0.25, 1.0]]).unwrap();
        let (g, sig) = engine.signature(&path).unwrap();
        assert!(sig.group_like_residual().unwrap() == Q::from_integer(0.into()));
        let exact: Vec<f64> = g.coords().iter().map(q_to_f64).collect();
        let numeric = engine.row_signature(path.points());
        let diff: f64 = exact
            .iter()
            .zip(numeric.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn quarter_circle_levy_area_matches_the_analytic_value() {
        let path = quarter_circle(2000);
        let series = signature_series(&path, 2);
        // Later segments multiply on the left, so a word lists its letters in
        // reverse time order: the area integral over t1 < t2 is coeff([2, 1]).
        let area = 0.5 * (series.coeff(&[2, 1]) - series.coeff(&[1, 2]));
        let analytic = std::f64::consts::FRAC_PI_4 - 0.5;
        assert!((area - analytic).abs() < 1e-6);
        assert!(series.shuffle_residual() < 1e-12);
    }

    #[test]
    fn smoothstep_reparametrization_leaves_the_signature_invariant() {
        let curve = |t: f64| {
            let a = t * std::f64::consts::FRAC_PI_2;
            vec![a.cos(), a.sin()]
        };
        let plain = sample_curve(2, 2000, curve).unwrap();
        let warped = sample_curve(2, 2000, |t| curve(smoothstep(t))).unwrap();
        let diff = signature_series(&plain, 4).max_abs_diff(&signature_series(&warped, 4));
        assert!(diff < 1e-6);
    }
}
