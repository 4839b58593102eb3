//! Double-precision kernels for the quadrature-heavy holonomy loops.
//!
//! The exact structure constants are converted to `f64` once when an engine
//! is built; every group operation here then mirrors its exact counterpart
//! in `group` term by term, so the numeric results can be checked against
//! the exact layer on small inputs.

use crate::error::Error;
use crate::quotient::NilpotentCrossedComplex;
use crate::scalar::q_to_f64;
use crate::tensor::Tensor;

/// Sparse linear map: `rows[b]` lists the `(k, c)` entries of column `b`.
type SparseMap = Vec<Vec<(usize, f64)>>;

/// `f64` mirror of a nilpotent crossed complex: the same sparse bracket and
/// differential tables, plus the cached BCH expansion for the chosen class.
#[derive(Debug)]
pub(crate) struct NumericComplex {
    dims: Vec<usize>,
    class: usize,
    /// `bracket[i][a][b]` lists `(k, c)` with `[e_a^0, e_b^{-i}] = sum c e_k^{-i}`.
    bracket: Vec<Vec<SparseMap>>,
    /// `differential[i - 1][b]` lists `(k, c)` with `d e_b^{-i} = sum c e_k^{-i+1}`.
    differential: Vec<SparseMap>,
    series: Vec<(f64, Vec<u8>)>,
}

impl NumericComplex {
    pub fn new(cc: &NilpotentCrossedComplex) -> Self {
        let depth = cc.depth();
        let dims: Vec<usize> = (0..depth).map(|i| cc.dim(i)).collect();
        let conv = |terms: &[(usize, crate::scalar::Q)]| -> Vec<(usize, f64)> {
            terms.iter().map(|(k, c)| (*k, q_to_f64(c))).collect()
        };
        let bracket = (0..depth)
            .map(|i| {
                (0..dims[0])
                    .map(|a| (0..dims[i]).map(|b| conv(cc.bracket_terms(i, a, b))).collect())
                    .collect()
            })
            .collect();
        let differential = (1..depth)
            .map(|i| (0..dims[i]).map(|b| conv(cc.differential_terms(i, b))).collect())
            .collect();
        NumericComplex {
            dims,
            class: cc.class() as usize,
            bracket,
            differential,
            series: crate::group::bch_series_f64(cc.class()),
        }
    }

    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    pub fn bracket_apply(&self, i: usize, u: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dims[i]];
        for (a, ua) in u.iter().enumerate() {
            if *ua == 0.0 {
                continue;
            }
            for (b, xb) in x.iter().enumerate() {
                if *xb == 0.0 {
                    continue;
                }
                for (k, c) in &self.bracket[i][a][b] {
                    out[*k] += ua * xb * c;
                }
            }
        }
        out
    }

    pub fn differential_apply(&self, i: usize, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dims[i - 1]];
        for (b, xb) in x.iter().enumerate() {
            if *xb == 0.0 {
                continue;
            }
            for (k, c) in &self.differential[i - 1][b] {
                out[*k] += xb * c;
            }
        }
        out
    }

    /// Degree `-1` bracket induced by the differential, matching the exact
    /// group law at level 1.
    fn derived_bracket(&self, u: &[f64], x: &[f64]) -> Vec<f64> {
        self.bracket_apply(1, &self.differential_apply(1, u), x)
    }

    fn eval_series(
        &self,
        dim: usize,
        x: &[f64],
        y: &[f64],
        bracket: &dyn Fn(&[f64], &[f64]) -> Vec<f64>,
    ) -> Vec<f64> {
        let mut out = vec![0.0; dim];
        'terms: for (c, seq) in &self.series {
            let last = seq[seq.len() - 1];
            let mut acc = if last == 0 { x.to_vec() } else { y.to_vec() };
            for code in seq[..seq.len() - 1].iter().rev() {
                let arg = if *code == 0 { x } else { y };
                acc = bracket(arg, &acc);
                if acc.iter().all(|v| *v == 0.0) {
                    continue 'terms;
                }
            }
            for (o, a) in out.iter_mut().zip(acc.iter()) {
                *o += c * a;
            }
        }
        out
    }

    /// Group law in log coordinates at level `i`, mirroring the exact layer:
    /// BCH over the level bracket at levels 0 and 1, addition below.
    pub fn mul(&self, i: usize, x: &[f64], y: &[f64]) -> Vec<f64> {
        match i {
            0 => self.eval_series(self.dims[0], x, y, &|u, v| self.bracket_apply(0, u, v)),
            1 => self.eval_series(self.dims[1], x, y, &|u, v| self.derived_bracket(u, v)),
            _ => x.iter().zip(y.iter()).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn neg(x: &[f64]) -> Vec<f64> {
        x.iter().map(|v| -v).collect()
    }

    /// Action `exp(ad_u)` of a degree-0 log coordinate vector on level `i`.
    pub fn act(&self, i: usize, u: &[f64], x: &[f64]) -> Vec<f64> {
        let mut out = x.to_vec();
        let mut term = x.to_vec();
        for k in 1..=self.class {
            term = self.bracket_apply(i, u, &term);
            let scale = 1.0 / k as f64;
            for t in term.iter_mut() {
                *t *= scale;
            }
            if term.iter().all(|v| *v == 0.0) {
                break;
            }
            for (o, t) in out.iter_mut().zip(term.iter()) {
                *o += t;
            }
        }
        out
    }
}

/// Truncated signature series in double precision: one coefficient per word
/// in the single-index letters, through a fixed word length.
#[derive(Clone, Debug)]
pub struct WordSeries {
    n: usize,
    degree: usize,
    /// Offset of the length-`k` block inside `coeffs`.
    offsets: Vec<usize>,
    coeffs: Vec<f64>,
}

impl WordSeries {
    fn offsets(n: usize, degree: usize) -> Vec<usize> {
        let mut offsets = vec![0usize];
        let mut block = 1usize;
        for _ in 0..=degree {
            offsets.push(offsets.last().unwrap() + block);
            block *= n;
        }
        offsets
    }

    /// Identity series: coefficient 1 on the empty word.
    pub fn identity(n: u8, degree: u8) -> Self {
        let (n, degree) = (n as usize, degree as usize);
        let offsets = Self::offsets(n, degree);
        let mut coeffs = vec![0.0; *offsets.last().unwrap()];
        coeffs[0] = 1.0;
        WordSeries { n, degree, offsets, coeffs }
    }

    pub fn n(&self) -> u8 {
        self.n as u8
    }

    pub fn degree(&self) -> u8 {
        self.degree as u8
    }

    fn index(&self, word: &[u8]) -> usize {
        let mut idx = 0usize;
        for l in word {
            debug_assert!((1..=self.n as u8).contains(l));
            idx = idx * self.n + (*l as usize - 1);
        }
        self.offsets[word.len()] + idx
    }

    /// Coefficient of a word given by letters in `1..=n`.
    pub fn coeff(&self, word: &[u8]) -> f64 {
        if word.len() > self.degree {
            return 0.0;
        }
        self.coeffs[self.index(word)]
    }

    fn set(&mut self, word: &[u8], value: f64) {
        let idx = self.index(word);
        self.coeffs[idx] = value;
    }

    /// Exponential of a single linear segment `sum v_i Z_i`: the coefficient
    /// of the word `i_1 .. i_k` is `v_{i_1} .. v_{i_k} / k!`.
    pub fn segment(n: u8, degree: u8, v: &[f64]) -> Self {
        let mut out = Self::identity(n, degree);
        let n_us = n as usize;
        let mut start = 1usize;
        let mut prev_start = 0usize;
        let mut prev_len = 1usize;
        for k in 1..=degree as usize {
            let inv_k = 1.0 / k as f64;
            let len = prev_len * n_us;
            for prev in 0..prev_len {
                let base = out.coeffs[prev_start + prev];
                for (i, vi) in v.iter().enumerate() {
                    out.coeffs[start + prev * n_us + i] = base * vi * inv_k;
                }
            }
            prev_start = start;
            prev_len = len;
            start += len;
        }
        out
    }

    /// Concatenation product: `(a * b)[w] = sum over splittings w = u v` of
    /// `a[u] b[v]`.
    pub fn mul(&self, other: &WordSeries) -> WordSeries {
        assert_eq!(self.n, other.n);
        assert_eq!(self.degree, other.degree);
        let mut out = Self::identity(self.n as u8, self.degree as u8);
        out.coeffs.iter_mut().for_each(|c| *c = 0.0);
        let n = self.n;
        for k in 0..=self.degree {
            let out_base = out.offsets[k];
            let words_k = n.pow(k as u32);
            for ka in 0..=k {
                let kb = k - ka;
                let a_base = self.offsets[ka];
                let b_base = other.offsets[kb];
                let b_count = n.pow(kb as u32);
                for w in 0..words_k {
                    let (u, v) = (w / b_count, w % b_count);
                    out.coeffs[out_base + w] += self.coeffs[a_base + u] * other.coeffs[b_base + v];
                }
            }
        }
        out
    }

    /// Left multiplication by `sum v_i Z_i` on coefficients: the word `i w`
    /// picks up `v_i` times the coefficient of `w`. This is the derivative
    /// map of the signature ODE.
    pub(crate) fn prepend(&self, v: &[f64]) -> WordSeries {
        let mut out = Self::identity(self.n as u8, self.degree as u8);
        out.coeffs.iter_mut().for_each(|c| *c = 0.0);
        let n = self.n;
        for k in 1..=self.degree {
            let src = self.offsets[k - 1];
            let dst = out.offsets[k];
            let prev_count = n.pow((k - 1) as u32);
            for (i, vi) in v.iter().enumerate() {
                if *vi == 0.0 {
                    continue;
                }
                for w in 0..prev_count {
                    out.coeffs[dst + i * prev_count + w] += vi * self.coeffs[src + w];
                }
            }
        }
        out
    }

    /// Coefficientwise `self += c * other`.
    pub(crate) fn add_scaled(&mut self, other: &WordSeries, c: f64) {
        for (a, b) in self.coeffs.iter_mut().zip(other.coeffs.iter()) {
            *a += c * b;
        }
    }

    /// Largest absolute coefficient difference against another series.
    pub fn max_abs_diff(&self, other: &WordSeries) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Projects the single-letter words of an exact tensor into a series.
    /// Words containing composite letters are rejected.
    pub fn from_tensor(t: &Tensor) -> Result<WordSeries, Error> {
        let mut out = Self::identity(t.n(), t.max_letters());
        out.coeffs.iter_mut().for_each(|c| *c = 0.0);
        for (word, coeff) in t.terms() {
            let mut letters = Vec::with_capacity(word.len());
            for l in word.iter() {
                let idx = l.indices();
                if idx.len() != 1 {
                    return Err(Error::Degree(format!("word {word} contains a composite letter")));
                }
                letters.push(idx[0]);
            }
            out.set(&letters, q_to_f64(coeff));
        }
        Ok(out)
    }

    /// Largest violation of the shuffle relations
    /// `C_u C_v = sum over shuffles w of C_w` across word pairs that fit the
    /// truncation. Zero (to roundoff) characterizes group-like series.
    pub fn shuffle_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        self.shuffle_walk_left(&mut Vec::new(), &mut worst);
        worst
    }

    /// Enumerates the left word; the right word only grows once the left is
    /// frozen, so each pair is visited exactly once.
    fn shuffle_walk_left(&self, u: &mut Vec<u8>, worst: &mut f64) {
        if !u.is_empty() {
            self.shuffle_walk_right(u, &mut Vec::new(), worst);
        }
        if u.len() + 2 > self.degree {
            return;
        }
        for l in 1..=self.n as u8 {
            u.push(l);
            self.shuffle_walk_left(u, worst);
            u.pop();
        }
    }

    fn shuffle_walk_right(&self, u: &[u8], v: &mut Vec<u8>, worst: &mut f64) {
        if !v.is_empty() {
            let mut total = 0.0;
            Self::shuffles(u, v, &mut Vec::new(), 0, 0, &mut |w| total += self.coeff(w));
            let residual = (self.coeff(u) * self.coeff(v) - total).abs();
            if residual > *worst {
                *worst = residual;
            }
        }
        if u.len() + v.len() >= self.degree {
            return;
        }
        for l in 1..=self.n as u8 {
            v.push(l);
            self.shuffle_walk_right(u, v, worst);
            v.pop();
        }
    }

    fn shuffles(u: &[u8], v: &[u8], acc: &mut Vec<u8>, i: usize, j: usize, f: &mut dyn FnMut(&[u8])) {
        if i == u.len() && j == v.len() {
            f(acc);
            return;
        }
        if i < u.len() {
            acc.push(u[i]);
            Self::shuffles(u, v, acc, i + 1, j, f);
            acc.pop();
        }
        if j < v.len() {
            acc.push(v[j]);
            Self::shuffles(u, v, acc, i, j + 1, f);
            acc.pop();
        }
    }
}

/// Largest absolute componentwise difference between coordinate vectors.
pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quotient::extract_structure_constants;
    use crate::scalar::{qi, qr};
    use crate::word::Letter;

    fn to_f64(xs: &[crate::scalar::Q]) -> Vec<f64> {
        xs.iter().map(q_to_f64).collect()
    }

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b.iter()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn numeric_group_operations_match_the_exact_layer() {
        let (cc, _basis) = extract_structure_constants(2, 3).unwrap();
        let gc = crate::group::GroupComplex::new(cc.clone());
        let num = NumericComplex::new(&cc);
        let x0: Vec<_> = (0..cc.dim(0)).map(|k| qr(k as i64 % 3 - 1, 2)).collect();
        let y0: Vec<_> = (0..cc.dim(0)).map(|k| qr((k as i64 + 1) % 4 - 2, 3)).collect();
        let x1: Vec<_> = (0..cc.dim(1)).map(|k| qi(k as i64 % 2)).collect();
        let y1: Vec<_> = (0..cc.dim(1)).map(|k| qr(1 - k as i64 % 3, 2)).collect();

        let exact0 = gc.mul(&gc.element(0, x0.clone()).unwrap(), &gc.element(0, y0.clone()).unwrap()).unwrap();
        assert!(max_diff(&num.mul(0, &to_f64(&x0), &to_f64(&y0)), &to_f64(exact0.coords())) < 1e-12);

        let exact1 = gc.mul(&gc.element(-1, x1.clone()).unwrap(), &gc.element(-1, y1.clone()).unwrap()).unwrap();
        assert!(max_diff(&num.mul(1, &to_f64(&x1), &to_f64(&y1)), &to_f64(exact1.coords())) < 1e-12);

        let exact_act = gc.act(&gc.element(0, x0.clone()).unwrap(), &gc.element(-1, y1.clone()).unwrap()).unwrap();
        assert!(max_diff(&num.act(1, &to_f64(&x0), &to_f64(&y1)), &to_f64(exact_act.coords())) < 1e-12);

        let exact_d = gc.boundary(&gc.element(-1, x1.clone()).unwrap()).unwrap();
        assert!(max_diff(&num.differential_apply(1, &to_f64(&x1)), &to_f64(exact_d.coords())) < 1e-12);
    }

    #[test]
    fn segment_series_has_the_power_over_factorial_coefficients() {
        let s = WordSeries::segment(2, 4, &[2.0, -3.0]);
        assert_eq!(s.coeff(&[]), 1.0);
        assert_eq!(s.coeff(&[1]), 2.0);
        assert_eq!(s.coeff(&[2]), -3.0);
        assert_eq!(s.coeff(&[1, 2]), 2.0 * -3.0 / 2.0);
        assert_eq!(s.coeff(&[2, 2, 1]), -3.0 * -3.0 * 2.0 / 6.0);
        assert_eq!(s.coeff(&[1, 1, 1, 1]), 16.0 / 24.0);
    }

    #[test]
    fn concatenation_product_matches_the_exact_tensor_product() {
        let n = 2;
        let d = 4;
        let z1 = Tensor::generator(n, d, Letter::single(1)).unwrap();
        let z2 = Tensor::generator(n, d, Letter::single(2)).unwrap();
        let a = z1.scale(&qr(1, 2)).add(&z2.scale(&qi(2))).unwrap().exp().unwrap();
        let b = z1.scale(&qi(-1)).add(&z2.scale(&qr(1, 3))).unwrap().exp().unwrap();
        let exact = a.mul(&b).unwrap();
        let sa = WordSeries::from_tensor(&a).unwrap();
        let sb = WordSeries::from_tensor(&b).unwrap();
        let prod = sa.mul(&sb);
        assert!(prod.max_abs_diff(&WordSeries::from_tensor(&exact).unwrap()) < 1e-12);
    }

    #[test]
    fn shuffle_residual_vanishes_exactly_for_group_like_series() {
        let s = WordSeries::segment(3, 4, &[0.5, -1.25, 2.0]);
        let t = WordSeries::segment(3, 4, &[1.0, 0.75, -0.5]);
        let prod = s.mul(&t);
        assert!(prod.shuffle_residual() < 1e-12);

        let mut broken = prod.clone();
        broken.set(&[1, 2], broken.coeff(&[1, 2]) + 0.1);
        assert!(broken.shuffle_residual() > 0.05);
    }
}
