//! Exact rational linear algebra on small dense slices.
//!
//! Two tools cover every rank/dimension/quotient question in the crate:
//!
//! * [`rank`] — fraction-free (Bareiss) elimination over big integers, used
//!   wherever only the rank matters. Intermediate entries stay bounded by
//!   minors of the input, which controls coefficient blowup.
//! * [`SpanBasis`] — an incrementally maintained reduced row echelon form
//!   with change-of-basis bookkeeping, used wherever canonical
//!   representatives or coordinates in a chosen basis are needed.
//!
//! All matrices here are small: callers refine by multidegree before ever
//! building one.

use num::bigint::BigInt;
use num::traits::{One, Zero};

use crate::scalar::Q;

/// Rank of a rational matrix given as rows, by Bareiss elimination on the
/// integer matrix obtained from clearing denominators row by row.
pub fn rank(rows: &[Vec<Q>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    let cols = rows[0].len();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            debug_assert_eq!(row.len(), cols);
            let mut lcm = BigInt::one();
            for q in row {
                lcm = num::integer::lcm(lcm, q.denom().clone());
            }
            row.iter().map(|q| q.numer() * (&lcm / q.denom())).collect()
        })
        .collect();

    let mut r = 0usize;
    let mut prev = BigInt::one();
    for c in 0..cols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in (r + 1)..m.len() {
            let head = std::mem::replace(&mut m[i][c], BigInt::zero());
            if head.is_zero() && pivot.is_one() && prev.is_one() {
                continue;
            }
            for j in (c + 1)..cols {
                let v = &pivot * &m[i][j] - &head * &m[r][j];
                debug_assert!((&v % &prev).is_zero(), "Bareiss exact division failed");
                m[i][j] = v / &prev;
            }
        }
        prev = pivot;
        r += 1;
    }
    r
}

/// A growing subspace in reduced row echelon form.
///
/// Inserted vectors that increase the rank become *basis members*; the RREF
/// rows and a change-of-basis matrix are maintained so that any member of the
/// span can be expressed exactly in those basis members, and any vector can
/// be reduced to its canonical residual modulo the span.
#[derive(Clone, Debug)]
pub struct SpanBasis {
    cols: usize,
    /// Fully reduced rows; `rref[r][pivots[r]] = 1` and every other row is
    /// zero at that column.
    rref: Vec<Vec<Q>>,
    pivots: Vec<usize>,
    /// `rref[r] = Σ_b combo[r][b] · basis[b]` over the accepted insertions.
    combo: Vec<Vec<Q>>,
}

impl SpanBasis {
    /// Empty subspace of an ambient coordinate space.
    pub fn new(cols: usize) -> Self {
        SpanBasis { cols, rref: Vec::new(), pivots: Vec::new(), combo: Vec::new() }
    }

    /// Ambient coordinate count.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Current dimension of the span.
    pub fn rank(&self) -> usize {
        self.rref.len()
    }

    /// Pivot columns, in insertion-echelon order.
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Canonical residual of `v` modulo the span, together with the
    /// RREF-row multipliers that were removed.
    fn reduce_with_lambda(&self, v: &[Q]) -> (Vec<Q>, Vec<Q>) {
        assert_eq!(v.len(), self.cols, "ambient dimension mismatch");
        let mut res = v.to_vec();
        let mut lambda = Vec::with_capacity(self.rref.len());
        for (r, &p) in self.pivots.iter().enumerate() {
            let l = res[p].clone();
            if !l.is_zero() {
                for (j, x) in self.rref[r].iter().enumerate() {
                    if !x.is_zero() {
                        res[j] -= &l * x;
                    }
                }
            }
            lambda.push(l);
        }
        (res, lambda)
    }

    /// Canonical residual of `v` modulo the span (zero iff `v` is a member).
    pub fn reduce(&self, v: &[Q]) -> Vec<Q> {
        self.reduce_with_lambda(v).0
    }

    /// Membership test.
    pub fn contains(&self, v: &[Q]) -> bool {
        self.reduce(v).iter().all(Q::is_zero)
    }

    /// Offer a vector. Returns `true` when it enlarged the span (and was
    /// recorded as a basis member), `false` when it was already contained.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        let (mut res, lambda) = self.reduce_with_lambda(v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = res[p].clone().recip();
        for x in res.iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        // New basis member: v itself. Its combo row starts as the unit vector
        // on the new member, corrected for what reduction removed and scaled.
        let b = self.combo.first().map_or(0, Vec::len);
        let mut combo_new = vec![Q::zero(); b + 1];
        combo_new[b] = inv.clone();
        for (r, l) in lambda.iter().enumerate() {
            if !l.is_zero() {
                for (bb, c) in self.combo[r].iter().enumerate() {
                    if !c.is_zero() {
                        combo_new[bb] -= l * c * &inv;
                    }
                }
            }
        }
        // Widen existing combo rows for the new basis member column.
        for row in &mut self.combo {
            row.push(Q::zero());
        }
        // Back-substitute so earlier rows are zero at the new pivot.
        for r in 0..self.rref.len() {
            let c = self.rref[r][p].clone();
            if !c.is_zero() {
                for j in 0..self.cols {
                    if !res[j].is_zero() {
                        let delta = &c * &res[j];
                        self.rref[r][j] -= delta;
                    }
                }
                for bb in 0..combo_new.len() {
                    if !combo_new[bb].is_zero() {
                        let delta = &c * &combo_new[bb];
                        self.combo[r][bb] -= delta;
                    }
                }
            }
        }
        self.rref.push(res);
        self.pivots.push(p);
        self.combo.push(combo_new);
        true
    }

    /// Coordinates of `v` over the recorded basis members, or `None` when
    /// `v` is not in the span.
    pub fn express(&self, v: &[Q]) -> Option<Vec<Q>> {
        let (res, lambda) = self.reduce_with_lambda(v);
        if !res.iter().all(Q::is_zero) {
            return None;
        }
        let b = self.combo.first().map_or(0, Vec::len);
        let mut coords = vec![Q::zero(); b];
        for (r, l) in lambda.iter().enumerate() {
            if !l.is_zero() {
                for (bb, c) in self.combo[r].iter().enumerate() {
                    if !c.is_zero() {
                        coords[bb] += l * c;
                    }
                }
            }
        }
        Some(coords)
    }

    /// The data needed to express members after a one-time float conversion:
    /// pivot columns plus the change-of-basis matrix, so that
    /// `coords[b] = Σ_r v[pivots[r]] · combo[r][b]` for any member `v`.
    pub fn coordinate_extractor(&self) -> (Vec<usize>, Vec<Vec<Q>>) {
        (self.pivots.clone(), self.combo.clone())
    }
}
