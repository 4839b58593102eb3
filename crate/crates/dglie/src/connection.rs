//! Differential forms on ℝⁿ with constant Lie-algebra coefficients, and the
//! universal translation-invariant connection.
//!
//! A constant form is a sum `Σ_I c_I dt_I` over ascending index sets `I`,
//! with each coefficient `c_I` an element of the free dg-Lie algebra (held as
//! a tensor realization). The total differential on constant coefficients
//! reduces to the coefficient differential applied componentwise, and the
//! graded bracket of two components is
//!
//! ```text
//! [c dt_I, c' dt_J] = (−1)^{deg(c)·|J|} · sgn(I,J) · [c, c'] dt_{I∪J}
//! ```
//!
//! vanishing when `I ∩ J ≠ ∅`, where `sgn(I,J)` sorts the concatenation.
//! The universal connection `A = Σ_I Z_I dt_I` has every component of total
//! degree 1 and satisfies the flatness equation `dA − ½[A,A] = 0`; this is
//! exactly the shape of the generator differential.

use std::collections::BTreeMap;

use num::traits::Zero;

use crate::error::Error;
use crate::lie::{differential, plain_shuffle_sign};
use crate::scalar::{qi, qr, Q};
use crate::tensor::Tensor;
use crate::word::Letter;

/// A differential form on ℝⁿ with constant coefficients in the tensor
/// algebra, keyed by the index set of `dt_I` (as a bitmask, bit `i−1` for
/// index `i`). Zero components are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstantForm {
    n: u8,
    max_letters: u8,
    terms: BTreeMap<u8, Tensor>,
}

impl ConstantForm {
    /// The zero form.
    pub fn zero(n: u8, max_letters: u8) -> Self {
        ConstantForm { n, max_letters, terms: BTreeMap::new() }
    }

    /// Ambient dimension.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Word length cap of the coefficients.
    pub fn max_letters(&self) -> u8 {
        self.max_letters
    }

    /// True when every component vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of `dt_I` for the given index-set mask, if nonzero.
    pub fn component(&self, mask: u8) -> Option<&Tensor> {
        self.terms.get(&mask)
    }

    /// Index-set masks with nonzero coefficients, ascending.
    pub fn component_masks(&self) -> Vec<u8> {
        self.terms.keys().copied().collect()
    }

    /// Replace the coefficient of `dt_I`.
    pub fn set_component(&mut self, mask: u8, coeff: Tensor) -> Result<(), Error> {
        if mask == 0 || u32::from(mask) >= (1u32 << self.n) {
            return Err(Error::Degree(format!(
                "form index set {mask:#b} outside ambient dimension {}",
                self.n
            )));
        }
        if coeff.n() != self.n || coeff.max_letters() != self.max_letters {
            return Err(Error::ConfigMismatch {
                left_n: self.n,
                left_l: self.max_letters,
                right_n: coeff.n(),
                right_l: coeff.max_letters(),
            });
        }
        if coeff.is_zero() {
            self.terms.remove(&mask);
        } else {
            self.terms.insert(mask, coeff);
        }
        Ok(())
    }

    fn check_config(&self, other: &Self) -> Result<(), Error> {
        if self.n != other.n || self.max_letters != other.max_letters {
            return Err(Error::ConfigMismatch {
                left_n: self.n,
                left_l: self.max_letters,
                right_n: other.n,
                right_l: other.max_letters,
            });
        }
        Ok(())
    }

    /// Componentwise sum.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        self.check_config(other)?;
        let mut out = self.clone();
        for (mask, c) in &other.terms {
            let sum = match out.terms.get(mask) {
                Some(existing) => existing.add(c)?,
                None => c.clone(),
            };
            out.set_component(*mask, sum)?;
        }
        Ok(out)
    }

    /// Componentwise difference.
    pub fn sub(&self, other: &Self) -> Result<Self, Error> {
        self.add(&other.scale(&qi(-1)))
    }

    /// Componentwise scalar multiple.
    pub fn scale(&self, c: &Q) -> Self {
        let mut out = ConstantForm::zero(self.n, self.max_letters);
        if c.is_zero() {
            return out;
        }
        for (mask, t) in &self.terms {
            out.terms.insert(*mask, t.scale(c));
        }
        out
    }

    /// The coefficient differential applied componentwise. With constant
    /// coefficients the de Rham part contributes nothing.
    pub fn coefficient_differential(&self) -> Result<Self, Error> {
        let mut out = ConstantForm::zero(self.n, self.max_letters);
        for (mask, c) in &self.terms {
            let dc = differential(c)?;
            if !dc.is_zero() {
                out.set_component(*mask, dc)?;
            }
        }
        Ok(out)
    }

    /// The graded bracket of two constant forms. Components with overlapping
    /// index sets vanish; the coefficient degree crosses the `dt_J` factor,
    /// contributing `(−1)^{deg(c)·|J|}`, and merging `dt_I dt_J` contributes
    /// the sorting sign.
    pub fn form_bracket(&self, other: &Self) -> Result<Self, Error> {
        self.check_config(other)?;
        let mut out = ConstantForm::zero(self.n, self.max_letters);
        for (ia, ca) in &self.terms {
            for (ib, cb) in &other.terms {
                if ia & ib != 0 {
                    continue;
                }
                let merged = ia | ib;
                let merge_sign = plain_shuffle_sign(*ia, *ib);
                let q = ib.count_ones() as i64;
                for da in ca.degrees_present() {
                    let ca_d = ca.degree_component(da);
                    let cross = if (da as i64 * q) % 2 == 0 { 1 } else { -1 };
                    let sign = qi(merge_sign * cross);
                    for db in cb.degrees_present() {
                        let term = ca_d.graded_commutator(&cb.degree_component(db))?;
                        if term.is_zero() {
                            continue;
                        }
                        let prev = out
                            .terms
                            .get(&merged)
                            .cloned()
                            .unwrap_or_else(|| Tensor::zero(self.n, self.max_letters));
                        out.set_component(merged, prev.add(&term.scale(&sign))?)?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Curvature `F = dA − ½ [A, A]`.
    pub fn curvature(&self) -> Result<Self, Error> {
        let da = self.coefficient_differential()?;
        let half_bracket = self.form_bracket(self)?.scale(&qr(1, 2));
        da.sub(&half_bracket)
    }

    /// True when the curvature vanishes identically.
    pub fn is_flat(&self) -> Result<bool, Error> {
        Ok(self.curvature()?.is_zero())
    }
}

/// The universal connection `A = Σ_I Z_I dt_I` over all nonempty ascending
/// index sets `I ⊆ {1..n}`. Every component has total degree 1.
pub fn universal_connection(n: u8, max_letters: u8) -> Result<ConstantForm, Error> {
    let mut a = ConstantForm::zero(n, max_letters);
    for letter in Letter::all(n) {
        a.set_component(letter.mask(), Tensor::generator(n, max_letters, letter)?)?;
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::right_normed;

    #[test]
    fn universal_connection_is_flat_small() {
        for n in 1..=3u8 {
            let a = universal_connection(n, 3).unwrap();
            assert!(a.is_flat().unwrap(), "curvature survives at n={n}");
        }
    }

    #[test]
    fn two_generator_connection_has_bracket_curvature() {
        // A = Z1 dt1 + Z2 dt2 gives F = −[Z1, Z2] dt1 dt2.
        let mut a = ConstantForm::zero(2, 2);
        a.set_component(0b01, Tensor::generator(2, 2, Letter::single(1)).unwrap())
            .unwrap();
        a.set_component(0b10, Tensor::generator(2, 2, Letter::single(2)).unwrap())
            .unwrap();
        let f = a.curvature().unwrap();
        assert_eq!(f.component_masks(), vec![0b11]);
        let expect = right_normed(&[Letter::single(1), Letter::single(2)])
            .realize(2, 2)
            .unwrap()
            .scale(&qi(-1));
        assert_eq!(f.component(0b11).unwrap(), &expect);
    }

    #[test]
    fn bracket_rejects_mismatched_configs() {
        let a = universal_connection(2, 3).unwrap();
        let b = universal_connection(3, 3).unwrap();
        assert!(a.form_bracket(&b).is_err());
    }

    #[test]
    fn flatness_fails_without_higher_generators() {
        // Truncating A to its 1-form part leaves curvature at n = 2.
        let full = universal_connection(2, 3).unwrap();
        let mut low = ConstantForm::zero(2, 3);
        for mask in [0b01u8, 0b10] {
            low.set_component(mask, full.component(mask).unwrap().clone())
                .unwrap();
        }
        assert!(!low.is_flat().unwrap());
    }
}
