//! Polynomial differential forms on ℝⁿ, currents supported at the origin,
//! and the pairing maps from the free dg-Lie algebra into currents.
//!
//! A polynomial form is `Σ c_{α,I} t^α dt_I` with ascending index sets; a
//! current is a finite functional `ω ↦ Σ c_{β,J} (∂^β ω_J)(0)`, stored by the
//! same `(multi-index, index set)` keys. The boundary operator on currents is
//! the adjoint of the exterior derivative under that evaluation pairing:
//!
//! ```text
//! ∂ φ_{β,J} = Σ_{j∈J} (−1)^{|{i∈J : i<j}|} φ_{β+e_j, J∖j}
//! ```
//!
//! (no factorial factor: `(∂^β t^β)(0) = β!` already carries it through the
//! pairing; adjointness is asserted exactly in the tests).
//!
//! The maps from Lie elements to currents send a right-normed monomial with
//! single-index letters in front to the derivative-at-zero functional over
//! its trailing part, and kill monomials with two or more higher generators.
//! General elements are handled by expressing them over the realized spanning
//! family of their letter-multiset block, so no rewriting to right-normed
//! form is ever performed on the input.

use std::collections::BTreeMap;

use num::traits::Zero;

use crate::error::Error;
use crate::lie::{multiset_permutations, right_normed, word_slice_for_multiset, LieExpr};
use crate::linalg::{rank, SpanBasis};
use crate::scalar::{factorial, qi, Q};
use crate::tensor::Tensor;
use crate::word::{Letter, Multidegree, Word, MAX_N};

/// Total degree of a monomial exponent vector.
pub fn mono_degree(m: &Multidegree) -> u32 {
    m.iter().map(|&a| a as u32).sum()
}

/// `β! = Π β_i!`.
fn mono_factorial(m: &Multidegree) -> Q {
    let mut f = qi(1);
    for &a in m {
        if a > 1 {
            f *= factorial(a as usize);
        }
    }
    f
}

/// All exponent vectors in `n` variables of total degree `q`.
pub fn monomials(n: u8, q: u32) -> Vec<Multidegree> {
    let mut out = Vec::new();
    let mut m: Multidegree = [0; MAX_N as usize];
    fn rec(n: usize, pos: usize, left: u32, m: &mut Multidegree, out: &mut Vec<Multidegree>) {
        if pos == n {
            if left == 0 {
                out.push(*m);
            }
            return;
        }
        for a in (0..=left).rev() {
            m[pos] = a as u8;
            rec(n, pos + 1, left - a, m, out);
        }
        m[pos] = 0;
    }
    rec(n as usize, 0, q, &mut m, &mut out);
    out
}

/// All ascending index sets of size `p` in `{1..n}`, as bitmasks.
pub fn index_sets(n: u8, p: u8) -> Vec<u8> {
    (0u8..(1 << n)).filter(|m| m.count_ones() == p as u32).collect()
}

/// Sign of inserting `dt_j` in front of the sorted `dt_I` and re-sorting.
fn insert_sign(j: u8, mask: u8) -> i64 {
    let below = (mask & ((1u16 << (j - 1)) as u8).wrapping_sub(1)).count_ones();
    if below % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_key(n: u8, p: u8, key: &(Multidegree, u8)) -> Result<(), Error> {
    let (m, mask) = key;
    if mask.count_ones() != p as u32 {
        return Err(Error::Degree(format!(
            "index set {mask:#b} has size {}, expected form degree {p}",
            mask.count_ones()
        )));
    }
    if u32::from(*mask) >= (1u32 << n) || m[n as usize..].iter().any(|&a| a != 0) {
        return Err(Error::Degree(format!(
            "term uses coordinates outside ambient dimension {n}"
        )));
    }
    Ok(())
}

/// A polynomial differential form of pure form degree `p` on ℝⁿ, stored as
/// coefficients over `(monomial exponents, dt index set)` keys.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyForm {
    n: u8,
    p: u8,
    terms: BTreeMap<(Multidegree, u8), Q>,
}

impl PolyForm {
    /// The zero `p`-form.
    pub fn zero(n: u8, p: u8) -> Self {
        PolyForm { n, p, terms: BTreeMap::new() }
    }

    /// Build from `(exponents, index mask, coefficient)` terms.
    pub fn from_terms(
        n: u8,
        p: u8,
        terms: impl IntoIterator<Item = (Multidegree, u8, Q)>,
    ) -> Result<Self, Error> {
        let mut out = PolyForm::zero(n, p);
        for (m, mask, c) in terms {
            check_key(n, p, &(m, mask))?;
            if c.is_zero() {
                continue;
            }
            let slot = out.terms.entry((m, mask)).or_insert_with(Q::zero);
            *slot += c;
            if slot.is_zero() {
                out.terms.remove(&(m, mask));
            }
        }
        Ok(out)
    }

    /// The single term `t^m dt_I`.
    pub fn monomial(n: u8, exponents: Multidegree, indices: &[u8]) -> Result<Self, Error> {
        let mut mask = 0u8;
        for &i in indices {
            if i == 0 || i > n {
                return Err(Error::Degree(format!("index {i} outside 1..={n}")));
            }
            if mask & (1 << (i - 1)) != 0 {
                return Err(Error::Degree(format!("repeated index {i} in dt")));
            }
            mask |= 1 << (i - 1);
        }
        PolyForm::from_terms(n, indices.len() as u8, [(exponents, mask, qi(1))])
    }

    /// Ambient dimension.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Form degree.
    pub fn degree(&self) -> u8 {
        self.p
    }

    /// True when there are no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term iterator.
    pub fn terms(&self) -> impl Iterator<Item = (&(Multidegree, u8), &Q)> {
        self.terms.iter()
    }

    /// Coefficient of `t^m dt_I`.
    pub fn coeff(&self, m: &Multidegree, mask: u8) -> Q {
        self.terms.get(&(*m, mask)).cloned().unwrap_or_else(Q::zero)
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::Degree(format!(
                "form mismatch: ({}, p={}) vs ({}, p={})",
                self.n, self.p, other.n, other.p
            )));
        }
        PolyForm::from_terms(
            self.n,
            self.p,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|((m, mask), c)| (*m, *mask, c.clone())),
        )
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Q) -> Self {
        let mut out = PolyForm::zero(self.n, self.p);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(*k, v * c);
        }
        out
    }

    /// The exterior derivative: each term contributes
    /// `Σ_{j∉I} α_j t^{α−e_j} (−1)^{|{i∈I : i<j}|} dt_{I∪j}`.
    pub fn de_rham_d(&self) -> PolyForm {
        let mut terms = Vec::new();
        for ((m, mask), c) in &self.terms {
            for j in 1..=self.n {
                let bit = 1u8 << (j - 1);
                let a = m[(j - 1) as usize];
                if mask & bit != 0 || a == 0 {
                    continue;
                }
                let mut m2 = *m;
                m2[(j - 1) as usize] -= 1;
                let sign = insert_sign(j, *mask);
                terms.push((m2, mask | bit, c * qi(sign * a as i64)));
            }
        }
        PolyForm::from_terms(self.n, self.p + 1, terms).expect("derivative keys stay valid")
    }
}

/// A current supported at the origin with homological degree `p`: the
/// functional `ω ↦ Σ c_{β,J} (∂^β ω_J)(0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Current {
    n: u8,
    p: u8,
    terms: BTreeMap<(Multidegree, u8), Q>,
}

impl Current {
    /// The zero current.
    pub fn zero(n: u8, p: u8) -> Self {
        Current { n, p, terms: BTreeMap::new() }
    }

    /// Build from `(derivative multi-index, index mask, coefficient)` terms.
    pub fn from_terms(
        n: u8,
        p: u8,
        terms: impl IntoIterator<Item = (Multidegree, u8, Q)>,
    ) -> Result<Self, Error> {
        let mut out = Current::zero(n, p);
        for (m, mask, c) in terms {
            check_key(n, p, &(m, mask))?;
            if c.is_zero() {
                continue;
            }
            let slot = out.terms.entry((m, mask)).or_insert_with(Q::zero);
            *slot += c;
            if slot.is_zero() {
                out.terms.remove(&(m, mask));
            }
        }
        Ok(out)
    }

    /// Evaluation of `dt_I` components at the origin (no derivatives).
    pub fn delta(n: u8, indices: &[u8]) -> Result<Self, Error> {
        let form = PolyForm::monomial(n, [0; MAX_N as usize], indices)?;
        let ((m, mask), _) = form.terms().next().expect("single term");
        Current::from_terms(n, form.degree(), [(*m, *mask, qi(1))])
    }

    /// Ambient dimension.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Homological degree.
    pub fn degree(&self) -> u8 {
        self.p
    }

    /// True when there are no terms.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term iterator.
    pub fn terms(&self) -> impl Iterator<Item = (&(Multidegree, u8), &Q)> {
        self.terms.iter()
    }

    /// Sum.
    pub fn add(&self, other: &Self) -> Result<Self, Error> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::Degree(format!(
                "current mismatch: ({}, p={}) vs ({}, p={})",
                self.n, self.p, other.n, other.p
            )));
        }
        Current::from_terms(
            self.n,
            self.p,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|((m, mask), c)| (*m, *mask, c.clone())),
        )
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Q) -> Self {
        let mut out = Current::zero(self.n, self.p);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(*k, v * c);
        }
        out
    }

    /// The boundary operator, adjoint to the exterior derivative. On
    /// homological degree 0 it returns the zero current, so `∂∂ = 0` holds
    /// uniformly.
    pub fn boundary(&self) -> Current {
        if self.p == 0 {
            return Current::zero(self.n, 0);
        }
        let mut terms = Vec::new();
        for ((m, mask), c) in &self.terms {
            for j in 1..=self.n {
                let bit = 1u8 << (j - 1);
                if mask & bit == 0 {
                    continue;
                }
                let mut m2 = *m;
                m2[(j - 1) as usize] += 1;
                terms.push((m2, mask & !bit, c * qi(insert_sign(j, mask & !bit))));
            }
        }
        Current::from_terms(self.n, self.p - 1, terms).expect("boundary keys stay valid")
    }

    /// Evaluation pairing `Σ c_{β,J} (∂^β ω_J)(0)`; on the stored keys this
    /// is `Σ c·ω·β!` over matching keys.
    pub fn pairing(&self, omega: &PolyForm) -> Result<Q, Error> {
        if self.n != omega.n() || self.p != omega.degree() {
            return Err(Error::Degree(format!(
                "pairing mismatch: current ({}, p={}) vs form ({}, p={})",
                self.n, self.p, omega.n, omega.p
            )));
        }
        let mut acc = Q::zero();
        for (key, c) in &self.terms {
            let w = omega.terms.get(key);
            if let Some(w) = w {
                acc += c * w * mono_factorial(&key.0);
            }
        }
        Ok(acc)
    }
}

// ---------------------------------------------------------------------------
// Dimension oracles.
// ---------------------------------------------------------------------------

/// `dim Γ_p(ℝⁿ)` at polynomial degree `q`: `C(n,p)·C(q+n−1, n−1)`.
pub fn gamma_dimension(n: u8, p: u8, q: u32) -> usize {
    crate::scalar::binomial(n as usize, p as usize)
        * crate::scalar::binomial(q as usize + n as usize - 1, n as usize - 1)
}

/// Basis keys of the `(p, q)` slice of currents.
pub fn gamma_basis(n: u8, p: u8, q: u32) -> Vec<(Multidegree, u8)> {
    let mut out = Vec::new();
    for mask in index_sets(n, p) {
        for m in monomials(n, q) {
            out.push((m, mask));
        }
    }
    out
}

/// Dimension of the closed (boundary) part of `Γ_p` fed from polynomial
/// degree `q`: the exact rank of `∂` restricted to the `Γ_{p+1}(q)` slice.
pub fn gamma_closed_dimension(n: u8, p: u8, q: u32) -> usize {
    let source = gamma_basis(n, p + 1, q);
    if source.is_empty() {
        return 0;
    }
    let target = gamma_basis(n, p, q + 1);
    let index: BTreeMap<(Multidegree, u8), usize> =
        target.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut rows = Vec::with_capacity(source.len());
    for (m, mask) in source {
        let c = Current::from_terms(n, p + 1, [(m, mask, qi(1))]).expect("basis key");
        let mut row = vec![Q::zero(); target.len()];
        for (key, v) in c.boundary().terms() {
            row[index[key]] = v.clone();
        }
        rows.push(row);
    }
    rank(&rows)
}

/// `dim Σ^λ(kⁿ)` by the hook content formula; 0 when `λ` has more than `n`
/// rows.
pub fn schur_dimension(lambda: &[usize], n: u8) -> usize {
    let lambda: Vec<usize> = lambda.iter().copied().filter(|&x| x > 0).collect();
    if lambda.windows(2).any(|w| w[0] < w[1]) {
        return 0;
    }
    if lambda.len() > n as usize {
        return 0;
    }
    let conj = |j: usize| lambda.iter().filter(|&&r| r > j).count();
    let mut dim = qi(1);
    for (i, &len) in lambda.iter().enumerate() {
        for j in 0..len {
            let content = j as i64 - i as i64;
            let hook = (len - j) + (conj(j) - i) - 1;
            dim *= qi(n as i64 + content) / qi(hook as i64);
        }
    }
    debug_assert!(dim.is_integer());
    dim.to_integer().try_into().unwrap_or(0)
}

/// Dimension of the exact `p`-forms with polynomial coefficient degree `d`:
/// the rank of the exterior derivative on the `(p−1, d+1)` slice. Equals
/// `dim Σ^{(d+1, 1^{p−1})}(kⁿ)`, which the tests assert.
pub fn closed_forms_dimension(n: u8, p: u8, d: u32) -> usize {
    assert!(p >= 1, "positive form degree required");
    let target = gamma_basis(n, p, d);
    if target.is_empty() {
        return 0;
    }
    let index: BTreeMap<(Multidegree, u8), usize> =
        target.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let mut rows = Vec::new();
    for (m, mask) in gamma_basis(n, p - 1, d + 1) {
        let form = PolyForm::from_terms(n, p - 1, [(m, mask, qi(1))]).expect("basis key");
        let mut row = vec![Q::zero(); target.len()];
        for (key, v) in form.de_rham_d().terms() {
            row[index[key]] = v.clone();
        }
        rows.push(row);
    }
    rank(&rows)
}

// ---------------------------------------------------------------------------
// From Lie elements to currents.
// ---------------------------------------------------------------------------

/// Value of one accepted spanning monomial: its letter sequence has every
/// letter single-index except possibly the last.
fn spanning_value(seq: &[Letter]) -> Option<((Multidegree, u8), Q)> {
    let last = *seq.last().expect("nonempty sequence");
    let mut beta: Multidegree = [0; MAX_N as usize];
    if last.arity() > 1 {
        // Derivatives along the single-index prefix, evaluated on ω_I.
        for l in &seq[..seq.len() - 1] {
            beta[(l.max_index() - 1) as usize] += 1;
        }
        Some(((beta, last.mask()), qi(1)))
    } else {
        // Degree 0: the last two letters select the 2-form component, with
        // antisymmetry in them; everything earlier differentiates.
        let a = seq[seq.len() - 2].max_index();
        let b = last.max_index();
        if a == b {
            return None;
        }
        for l in &seq[..seq.len() - 2] {
            beta[(l.max_index() - 1) as usize] += 1;
        }
        let mask = (1u8 << (a - 1)) | (1u8 << (b - 1));
        Some(((beta, mask), qi(if a < b { 1 } else { -1 })))
    }
}

/// The current attached to a realized Lie element of homogeneous degree
/// `−m`: degree-0 elements (with ≥ 2 letters) land in homological degree 2,
/// degree `−m` elements in `m+1`. Letter-multiset blocks containing two or
/// more higher generators contribute zero. The input is expressed over the
/// realized spanning family of each block, so any realization of a Lie
/// element is accepted.
pub fn rho_tensor(x: &Tensor) -> Result<Current, Error> {
    let n = x.n();
    if x.is_zero() {
        return Ok(Current::zero(n, 0));
    }
    let Some(deg) = x.homogeneous_degree() else {
        return Err(Error::Degree(
            "current map needs a degree-homogeneous input".into(),
        ));
    };
    let m = (-deg) as u8;
    let p_out = if deg == 0 { 2 } else { m + 1 };
    let mut out = Current::zero(n, p_out);

    // Group the realization by letter multiset; brackets never mix blocks.
    let mut blocks: BTreeMap<Vec<Letter>, Vec<(Word, Q)>> = BTreeMap::new();
    for (w, c) in x.terms() {
        let mut key: Vec<Letter> = w.iter().collect();
        key.sort();
        blocks.entry(key).or_default().push((*w, c.clone()));
    }

    for (multiset, entries) in blocks {
        let ell = multiset.len();
        let higher: Vec<Letter> = multiset.iter().copied().filter(|l| l.arity() > 1).collect();
        if higher.len() >= 2 {
            continue;
        }
        if higher.is_empty() && ell < 2 {
            return Err(Error::Degree(
                "degree-0 current map needs at least two letters".into(),
            ));
        }
        // Spanning sequences whose value is defined: the single higher
        // generator, if any, goes last; a degree-0 block spans by all
        // arrangements.
        let sequences: Vec<Vec<Letter>> = if let Some(&z) = higher.first() {
            let singles: Vec<Letter> =
                multiset.iter().copied().filter(|l| l.arity() == 1).collect();
            multiset_permutations(&singles)
                .into_iter()
                .map(|mut seq| {
                    seq.push(z);
                    seq
                })
                .collect()
        } else {
            multiset_permutations(&multiset)
        };

        let slice = word_slice_for_multiset(&multiset);
        let mut span = SpanBasis::new(slice.len());
        let mut kept: Vec<Vec<Letter>> = Vec::new();
        for seq in sequences {
            let t = right_normed(&seq).realize(n, ell as u8)?;
            if span.insert(&slice.vectorize(&t)?) {
                kept.push(seq);
            }
        }
        let mut v = vec![Q::zero(); slice.len()];
        for (w, c) in entries {
            v[slice.position(&w).expect("block member")] = c;
        }
        let Some(coords) = span.express(&v) else {
            return Err(Error::OutsideSpan(format!(
                "component on letters {:?} is not a Lie element",
                multiset.iter().map(|l| l.to_string()).collect::<Vec<_>>()
            )));
        };
        for (lambda, seq) in coords.iter().zip(&kept) {
            if lambda.is_zero() {
                continue;
            }
            if let Some(((beta, mask), sign)) = spanning_value(seq) {
                out = out.add(&Current::from_terms(n, p_out, [(beta, mask, lambda * sign)])?)?;
            }
        }
    }
    Ok(out)
}

/// The degree-0 current map on a bracket monomial with at least two letters:
/// the result acts on (closed) 2-forms.
pub fn rho0(m: &LieExpr, n: u8) -> Result<Current, Error> {
    if m.degree() != 0 {
        return Err(Error::Degree(format!(
            "expected a degree-0 monomial, got degree {}",
            m.degree()
        )));
    }
    let ell = m.letter_count();
    rho_tensor(&m.realize(n, ell as u8)?)
}

/// The negative-degree current map: a monomial of degree `−m` lands in
/// homological degree `m+1`.
pub fn rho_minus_m(m: &LieExpr, n: u8) -> Result<Current, Error> {
    if m.degree() >= 0 {
        return Err(Error::Degree(format!(
            "expected a negative-degree monomial, got degree {}",
            m.degree()
        )));
    }
    let ell = m.letter_count();
    rho_tensor(&m.realize(n, ell as u8)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::differential;
    use rand::{Rng, SeedableRng};

    fn e(i: usize) -> Multidegree {
        let mut m = [0u8; MAX_N as usize];
        m[i - 1] = 1;
        m
    }

    fn lt(idx: &[u8]) -> Letter {
        Letter::new(idx, MAX_N).unwrap()
    }

    #[test]
    fn de_rham_examples() {
        // d(t1 dt2) = dt1 dt2.
        let w = PolyForm::monomial(2, e(1), &[2]).unwrap();
        assert_eq!(w.de_rham_d(), PolyForm::monomial(2, [0; 6], &[1, 2]).unwrap());
        // d(dt1) = 0.
        assert!(PolyForm::monomial(2, [0; 6], &[1]).unwrap().de_rham_d().is_zero());
        // d(t1 t2 dt1) = −t1 dt1 dt2.
        let mut m = [0u8; MAX_N as usize];
        m[0] = 1;
        m[1] = 1;
        let w = PolyForm::monomial(2, m, &[1]).unwrap();
        let expect = PolyForm::monomial(2, e(1), &[1, 2]).unwrap().scale(&qi(-1));
        assert_eq!(w.de_rham_d(), expect);
    }

    fn random_form(rng: &mut impl Rng, n: u8, p: u8, qdeg: u32) -> PolyForm {
        let mut terms = Vec::new();
        for mask in index_sets(n, p) {
            for m in monomials(n, qdeg) {
                if rng.gen_bool(0.5) {
                    terms.push((m, mask, qi(rng.gen_range(-3..=3))));
                }
            }
        }
        PolyForm::from_terms(n, p, terms).unwrap()
    }

    fn random_current(rng: &mut impl Rng, n: u8, p: u8, qdeg: u32) -> Current {
        let mut terms = Vec::new();
        for (m, mask) in gamma_basis(n, p, qdeg) {
            if rng.gen_bool(0.5) {
                terms.push((m, mask, qi(rng.gen_range(-3..=3))));
            }
        }
        Current::from_terms(n, p, terms).unwrap()
    }

    #[test]
    fn d_squared_and_boundary_squared_vanish() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(3);
        for n in 1..=3u8 {
            for p in 0..=n {
                for qd in 0..=3u32 {
                    let w = random_form(&mut rng, n, p, qd);
                    assert!(w.de_rham_d().de_rham_d().is_zero());
                    let c = random_current(&mut rng, n, p, qd);
                    assert!(c.boundary().boundary().is_zero());
                }
            }
        }
    }

    #[test]
    fn boundary_is_adjoint_to_de_rham() {
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(5);
        for n in 1..=3u8 {
            for p in 1..=n {
                for qd in 0..=2u32 {
                    // c has degree p over derivatives of degree qd; dω raises
                    // the form degree and lowers the polynomial degree.
                    let c = random_current(&mut rng, n, p, qd);
                    let w = random_form(&mut rng, n, p - 1, qd + 1);
                    let lhs = c.boundary().pairing(&w).unwrap();
                    let rhs = c.pairing(&w.de_rham_d()).unwrap();
                    assert_eq!(lhs, rhs, "n={n} p={p} q={qd}");
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        let delta1 = Current::delta(2, &[1]).unwrap();
        let dt1 = PolyForm::monomial(2, [0; 6], &[1]).unwrap();
        assert_eq!(delta1.pairing(&dt1).unwrap(), qi(1));
        let t1dt1 = PolyForm::monomial(2, e(1), &[1]).unwrap();
        assert_eq!(delta1.pairing(&t1dt1).unwrap(), qi(0));
        // First derivative current against t1 dt2.
        let d1 = Current::from_terms(2, 1, [(e(1), 0b10, qi(1))]).unwrap();
        let t1dt2 = PolyForm::monomial(2, e(1), &[2]).unwrap();
        assert_eq!(d1.pairing(&t1dt2).unwrap(), qi(1));
    }

    #[test]
    fn gamma_dimensions() {
        assert_eq!(gamma_dimension(2, 2, 3), 4);
        assert_eq!(gamma_dimension(2, 3, 1), 0);
        assert_eq!(gamma_dimension(3, 1, 2), 18);
        // Closed slice from the displayed case: rank of ∂ out of Γ₂(q=1)
        // over k² is 2, matching the Schur dimension of (2,1).
        assert_eq!(gamma_closed_dimension(2, 1, 1), 2);
        assert_eq!(schur_dimension(&[2, 1], 2), 2);
    }

    #[test]
    fn schur_hook_content() {
        assert_eq!(schur_dimension(&[1, 1], 2), 1);
        assert_eq!(schur_dimension(&[2, 1], 2), 2);
        assert_eq!(schur_dimension(&[1, 1, 1], 2), 0);
        for n in 1..=4u8 {
            for d in 1..=4usize {
                assert_eq!(
                    schur_dimension(&[d], n),
                    crate::scalar::binomial(d + n as usize - 1, n as usize - 1),
                    "symmetric power"
                );
            }
        }
    }

    #[test]
    fn closed_forms_match_schur() {
        for n in 1..=3u8 {
            for p in 1..=n + 1 {
                for d in 0..=3u32 {
                    let mut lambda = vec![d as usize + 1];
                    lambda.extend(std::iter::repeat(1).take(p as usize - 1));
                    assert_eq!(
                        closed_forms_dimension(n, p, d),
                        schur_dimension(&lambda, n),
                        "n={n} p={p} d={d}"
                    );
                }
            }
        }
    }

    #[test]
    fn gamma_closed_matches_closed_forms() {
        // Dual computations of the same dimension: rank of ∂ out of
        // Γ_{p+1}(q), and rank of d into form degree p+1 at
        // coefficient degree q.
        for n in 1..=3u8 {
            for p in 0..=n {
                for q in 0..=3u32 {
                    assert_eq!(
                        gamma_closed_dimension(n, p, q),
                        closed_forms_dimension(n, p + 1, q),
                        "n={n} p={p} q={q}"
                    );
                }
            }
        }
    }

    #[test]
    fn rho_displayed_examples() {
        // ρ₀([Z1,Z2]) on dt1dt2 → 1.
        let m = right_normed(&[lt(&[1]), lt(&[2])]);
        let c = rho0(&m, 3).unwrap();
        let w = PolyForm::monomial(3, [0; 6], &[1, 2]).unwrap();
        assert_eq!(c.pairing(&w).unwrap(), qi(1));
        // ρ₀([Z1,[Z1,Z2]]) on t1 dt1dt2 → 1.
        let m = right_normed(&[lt(&[1]), lt(&[1]), lt(&[2])]);
        let c = rho0(&m, 3).unwrap();
        let w = PolyForm::monomial(3, e(1), &[1, 2]).unwrap();
        assert_eq!(c.pairing(&w).unwrap(), qi(1));
        // ρ₀([Z1,Z2]) on t3 dt1dt2 → 0.
        let m = right_normed(&[lt(&[1]), lt(&[2])]);
        let c = rho0(&m, 3).unwrap();
        let w = PolyForm::monomial(3, e(3), &[1, 2]).unwrap();
        assert_eq!(c.pairing(&w).unwrap(), qi(0));
        // ρ₋₁(Z12) on dt1dt2 → 1.
        let m = LieExpr::Gen(lt(&[1, 2]));
        let c = rho_minus_m(&m, 3).unwrap();
        let w = PolyForm::monomial(3, [0; 6], &[1, 2]).unwrap();
        assert_eq!(c.pairing(&w).unwrap(), qi(1));
        // ρ₋₁([Z12, Z34]) → 0.
        let m = LieExpr::Bracket(
            Box::new(LieExpr::Gen(lt(&[1, 2]))),
            Box::new(LieExpr::Gen(lt(&[3, 4]))),
        );
        assert!(rho_minus_m(&m, 4).unwrap().is_zero());
        // ρ₋₁([Z3, Z12]) on t3 dt1dt2 → 1.
        let m = right_normed(&[lt(&[3]), lt(&[1, 2])]);
        let c = rho_minus_m(&m, 3).unwrap();
        let w = PolyForm::monomial(3, e(3), &[1, 2]).unwrap();
        assert_eq!(c.pairing(&w).unwrap(), qi(1));
    }

    #[test]
    fn rho_respects_jacobi_rewriting() {
        // [Z12, Z3] = −[Z3, Z12] has the higher generator first; the value
        // must match the right-normed arrangement by linearity.
        let ugly = LieExpr::Bracket(
            Box::new(LieExpr::Gen(lt(&[1, 2]))),
            Box::new(LieExpr::Gen(lt(&[3]))),
        );
        let good = right_normed(&[lt(&[3]), lt(&[1, 2])]);
        let cu = rho_minus_m(&ugly, 3).unwrap();
        let cg = rho_minus_m(&good, 3).unwrap();
        assert_eq!(cu, cg.scale(&qi(-1)));
    }

    #[test]
    fn rho_is_a_chain_map() {
        // For degree −m with m ≥ 2: ρ(dx) = ∂(ρx) literally. At m = 1 the
        // two sides live on closed 2-forms, so they are compared through the
        // pairing with exact 2-forms (polynomial closed forms are exact).
        let mut rng = rand_chacha::ChaCha20Rng::seed_from_u64(9);
        let letters = Letter::all(3);
        let mut deep = 0u32;
        let mut top = 0u32;
        for _ in 0..80 {
            let ell = rng.gen_range(1..=4usize);
            let seq: Vec<Letter> =
                (0..ell).map(|_| letters[rng.gen_range(0..letters.len())]).collect();
            let x = right_normed(&seq);
            if x.degree() >= 0 {
                continue;
            }
            let t = x.realize(3, (ell + 1) as u8).unwrap();
            if t.is_zero() {
                continue;
            }
            let dx = differential(&t).unwrap();
            if dx.is_zero() {
                assert!(rho_tensor(&t).unwrap().boundary().is_zero(), "∂ρ({x}) ≠ 0");
                continue;
            }
            let lhs = rho_tensor(&dx).unwrap();
            if x.degree() <= -2 {
                let rhs = rho_tensor(&t).unwrap().boundary();
                assert_eq!(lhs, rhs, "chain identity fails on {x}");
                deep += 1;
            } else {
                let rhs = rho_tensor(&t).unwrap();
                for q in 0..=ell as u32 {
                    for gamma in monomials(3, q + 1) {
                        for i in 1..=3u8 {
                            let exact =
                                PolyForm::monomial(3, gamma, &[i]).unwrap().de_rham_d();
                            assert_eq!(
                                lhs.pairing(&exact).unwrap(),
                                rhs.pairing(&exact).unwrap(),
                                "closed-form pairing differs on {x}"
                            );
                        }
                    }
                }
                top += 1;
            }
        }
        assert!(deep >= 10 && top >= 5, "sampling covered both regimes");
    }
}
