//! Exact elements of the letter-truncated graded tensor algebra.
//!
//! A [`Tensor`] is a finite rational combination of words in the generators
//! `Z_I`, truncated by letter count: words with more than `L` letters are the
//! (two-sided) truncation ideal and are dropped on construction and after
//! every product. All arithmetic is exact; equality is literal equality of
//! term maps.
//!
//! # Quick start
//!
//! ```
//! use dglie::{Letter, Tensor};
//!
//! let z1 = Tensor::generator(2, 3, Letter::single(1)).unwrap();
//! let z2 = Tensor::generator(2, 3, Letter::single(2)).unwrap();
//! let bracket = z1.graded_commutator(&z2).unwrap();
//! assert_eq!(bracket.to_string(), "Z1Z2 - Z2Z1");
//! let g = z1.exp().unwrap();
//! assert_eq!(g.log().unwrap(), z1);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::scalar::{factorial, format_q, parse_q, q_abs, qi, Q};
use crate::word::{Letter, Word, MAX_LETTERS, MAX_N};

/// Exact-rational element of the weight-truncated graded tensor algebra on
/// the generators `Z_I`.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    n: u8,
    max_letters: u8,
    terms: BTreeMap<Word, Q>,
}

impl Tensor {
    /// Validate an ambient configuration.
    fn check_config(n: u8, max_letters: u8) -> Result<(), Error> {
        if n == 0 || n > MAX_N {
            return Err(Error::ResourceGuard(format!("n={n} outside 1..={MAX_N}")));
        }
        if max_letters == 0 || max_letters as usize > MAX_LETTERS {
            return Err(Error::ResourceGuard(format!(
                "maxLetters={max_letters} outside 1..={MAX_LETTERS}"
            )));
        }
        Ok(())
    }

    /// The zero element.
    pub fn zero(n: u8, max_letters: u8) -> Self {
        debug_assert!(Self::check_config(n, max_letters).is_ok());
        Tensor { n, max_letters, terms: BTreeMap::new() }
    }

    /// The algebra unit (empty word with coefficient 1).
    pub fn one(n: u8, max_letters: u8) -> Self {
        let mut t = Tensor::zero(n, max_letters);
        t.terms.insert(Word::empty(), qi(1));
        t
    }

    /// The generator `Z_I` as a tensor.
    pub fn generator(n: u8, max_letters: u8, letter: Letter) -> Result<Self, Error> {
        Self::check_config(n, max_letters)?;
        if letter.max_index() > n {
            return Err(Error::BadGenerator(format!(
                "{letter} uses an index above the ambient dimension {n}"
            )));
        }
        let mut t = Tensor::zero(n, max_letters);
        t.terms.insert(Word::letter(letter), qi(1));
        Ok(t)
    }

    /// Build from explicit terms; drops zero coefficients and over-long words,
    /// validates indices.
    pub fn from_terms(
        n: u8,
        max_letters: u8,
        terms: impl IntoIterator<Item = (Word, Q)>,
    ) -> Result<Self, Error> {
        Self::check_config(n, max_letters)?;
        let mut t = Tensor::zero(n, max_letters);
        for (w, c) in terms {
            if w.max_index() > n {
                return Err(Error::BadGenerator(format!(
                    "word {w} uses an index above the ambient dimension {n}"
                )));
            }
            if w.len() <= max_letters as usize && !c.is_zero() {
                let entry = t.terms.entry(w).or_insert_with(Q::zero);
                *entry += c;
                if entry.is_zero() {
                    t.terms.remove(&w);
                }
            }
        }
        Ok(t)
    }

    /// Ambient dimension `n`.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Letter truncation `L`.
    pub fn max_letters(&self) -> u8 {
        self.max_letters
    }

    /// True when no terms are stored.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of a word (zero when absent).
    pub fn coeff(&self, w: &Word) -> Q {
        self.terms.get(w).cloned().unwrap_or_else(Q::zero)
    }

    /// Coefficient of the empty word.
    pub fn constant_term(&self) -> Q {
        self.coeff(&Word::empty())
    }

    /// Term iteration in the canonical word order.
    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Q)> {
        self.terms.iter()
    }

    /// Number of stored terms.
    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    fn same_config(&self, other: &Tensor) -> Result<(), Error> {
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

    fn add_term(&mut self, w: Word, c: Q) {
        if c.is_zero() || w.len() > self.max_letters as usize {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Tensor) -> Result<Tensor, Error> {
        self.same_config(other)?;
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(*w, c.clone());
        }
        Ok(out)
    }

    /// Coefficient-wise difference.
    pub fn sub(&self, other: &Tensor) -> Result<Tensor, Error> {
        self.add(&other.neg())
    }

    /// Additive inverse.
    pub fn neg(&self) -> Tensor {
        self.scale(&qi(-1))
    }

    /// Scalar multiple.
    pub fn scale(&self, c: &Q) -> Tensor {
        if c.is_zero() {
            return Tensor::zero(self.n, self.max_letters);
        }
        let mut out = Tensor::zero(self.n, self.max_letters);
        for (w, a) in &self.terms {
            out.terms.insert(*w, a * c);
        }
        out
    }

    /// Concatenation product; words exceeding the truncation are dropped.
    /// No Koszul sign enters here — signs belong to the graded symmetry only.
    pub fn mul(&self, other: &Tensor) -> Result<Tensor, Error> {
        self.same_config(other)?;
        let cap = self.max_letters as usize;
        let mut out = Tensor::zero(self.n, self.max_letters);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &other.terms {
                if wa.len() + wb.len() <= cap {
                    out.add_term(wa.concat(wb), ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// The cohomological degree when every stored word shares one, `None`
    /// otherwise. The zero tensor counts as homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<i32> {
        let mut deg = None;
        for w in self.terms.keys() {
            let d = w.degree();
            match deg {
                None => deg = Some(d),
                Some(prev) if prev != d => return None,
                _ => {}
            }
        }
        Some(deg.unwrap_or(0))
    }

    /// Graded commutator `ab − (−1)^{deg a · deg b} ba`.
    pub fn graded_commutator(&self, other: &Tensor) -> Result<Tensor, Error> {
        self.same_config(other)?;
        let da = self.homogeneous_degree().ok_or_else(|| {
            Error::Degree("left operand of the graded commutator is not homogeneous".into())
        })?;
        let db = other.homogeneous_degree().ok_or_else(|| {
            Error::Degree("right operand of the graded commutator is not homogeneous".into())
        })?;
        let ab = self.mul(other)?;
        let ba = other.mul(self)?;
        if (da * db) % 2 == 0 {
            ab.sub(&ba)
        } else {
            ab.add(&ba)
        }
    }

    /// Truncated exponential; requires zero constant term, under which the
    /// argument is nilpotent and the series is finite and exact.
    pub fn exp(&self) -> Result<Tensor, Error> {
        if !self.constant_term().is_zero() {
            return Err(Error::ConstantTerm("exp needs a zero constant term".into()));
        }
        let mut out = Tensor::one(self.n, self.max_letters);
        let mut power = Tensor::one(self.n, self.max_letters);
        for k in 1..=self.max_letters as usize {
            power = power.mul(self)?;
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&factorial(k).recip()))?;
        }
        Ok(out)
    }

    /// Truncated logarithm; requires constant term 1. Exact inverse of
    /// [`Tensor::exp`] on its domain.
    pub fn log(&self) -> Result<Tensor, Error> {
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTerm("log needs constant term 1".into()));
        }
        let u = self.sub(&Tensor::one(self.n, self.max_letters))?;
        let mut out = Tensor::zero(self.n, self.max_letters);
        let mut power = Tensor::one(self.n, self.max_letters);
        for k in 1..=self.max_letters as usize {
            power = power.mul(&u)?;
            if power.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { qi(1) } else { qi(-1) };
            out = out.add(&power.scale(&(sign / qi(k as i64))))?;
        }
        Ok(out)
    }

    /// Signed sum over all `(r,s)`-shuffles of two words, with the Koszul sign
    /// determined by the crossed letter degrees. Words longer than the
    /// truncation shuffle to zero.
    pub fn shuffle_words(n: u8, max_letters: u8, u: &Word, v: &Word) -> Result<Tensor, Error> {
        Self::check_config(n, max_letters)?;
        let (r, s) = (u.len(), v.len());
        let mut out = Tensor::zero(n, max_letters);
        if r + s > max_letters as usize {
            return Ok(out);
        }
        if u.max_index() > n || v.max_index() > n {
            return Err(Error::BadGenerator(
                "shuffle words use indices above the ambient dimension".into(),
            ));
        }
        // Choose which positions of the merged word come from `u`.
        let total = r + s;
        for mask in 0u32..(1 << total) {
            if mask.count_ones() as usize != r {
                continue;
            }
            let mut letters = Vec::with_capacity(total);
            let (mut iu, mut iv) = (0, 0);
            // Koszul sign: one factor (−1)^{deg u_i · deg v_j} for every pair
            // placed in crossed order (the v letter before the u letter).
            let mut sign = 1i64;
            for pos in 0..total {
                if mask & (1 << pos) != 0 {
                    letters.push(u.get(iu));
                    iu += 1;
                } else {
                    let dv = v.get(iv).degree();
                    for k in iu..r {
                        if (u.get(k).degree() * dv) % 2 != 0 {
                            sign = -sign;
                        }
                    }
                    letters.push(v.get(iv));
                    iv += 1;
                }
            }
            out.add_term(Word::from_letters(&letters)?, qi(sign));
        }
        Ok(out)
    }

    /// Largest absolute shuffle residual `⟨g,u⟩⟨g,v⟩ − ⟨g, u ⧢ v⟩`, ranging
    /// over nonempty word pairs with `|u|+|v| ≤ L` built from the letters that
    /// occur in the support. Letters outside the support contribute nothing
    /// to either side, so this restriction loses no residuals. Requires
    /// constant term 1; the residual is 0 exactly when `g` is group-like.
    pub fn group_like_residual(&self) -> Result<Q, Error> {
        if !self.constant_term().is_one() {
            return Err(Error::ConstantTerm("group-like test needs constant term 1".into()));
        }
        let mut alphabet: BTreeSet<Letter> = BTreeSet::new();
        for w in self.terms.keys() {
            alphabet.extend(w.iter());
        }
        let alphabet: Vec<Letter> = alphabet.into_iter().collect();
        let cap = self.max_letters as usize;

        // All words over the support alphabet, grouped by length.
        let mut by_len: Vec<Vec<Word>> = vec![vec![Word::empty()]];
        for len in 1..cap {
            let mut next = Vec::new();
            for w in &by_len[len - 1] {
                for &l in &alphabet {
                    next.push(w.concat(&Word::letter(l)));
                }
            }
            by_len.push(next);
        }

        let mut worst = Q::zero();
        for ru in 1..cap {
            for rv in 1..=(cap - ru) {
                for u in &by_len[ru] {
                    for v in &by_len[rv] {
                        let lhs = self.coeff(u) * self.coeff(v);
                        let sh = Tensor::shuffle_words(self.n, self.max_letters, u, v)?;
                        let mut rhs = Q::zero();
                        for (w, c) in sh.terms() {
                            rhs += c * self.coeff(w);
                        }
                        let r = q_abs(&(lhs - rhs));
                        if r > worst {
                            worst = r;
                        }
                    }
                }
            }
        }
        Ok(worst)
    }

    /// Group-like test against a tolerance (use zero for exact inputs).
    pub fn is_group_like(&self, tol: &Q) -> Result<(bool, Q), Error> {
        let r = self.group_like_residual()?;
        Ok((r <= *tol, r))
    }

    /// Terms of one cohomological degree.
    pub fn degree_component(&self, degree: i32) -> Tensor {
        let mut out = Tensor::zero(self.n, self.max_letters);
        for (w, c) in &self.terms {
            if w.degree() == degree {
                out.terms.insert(*w, c.clone());
            }
        }
        out
    }

    /// Terms with exactly `letters` letters.
    pub fn letters_component(&self, letters: usize) -> Tensor {
        let mut out = Tensor::zero(self.n, self.max_letters);
        for (w, c) in &self.terms {
            if w.len() == letters {
                out.terms.insert(*w, c.clone());
            }
        }
        out
    }

    /// The distinct cohomological degrees present.
    pub fn degrees_present(&self) -> BTreeSet<i32> {
        self.terms.keys().map(|w| w.degree()).collect()
    }

    /// Largest absolute coefficient (zero tensor → 0). Used for residuals.
    pub fn max_abs_coeff(&self) -> Q {
        self.terms.values().map(q_abs).max().unwrap_or_else(Q::zero)
    }

    /// Re-truncate into a configuration with fewer letters (or the same).
    pub fn truncated(&self, max_letters: u8) -> Result<Tensor, Error> {
        Self::check_config(self.n, max_letters)?;
        let mut out = Tensor::zero(self.n, max_letters);
        for (w, c) in &self.terms {
            if w.len() <= max_letters as usize {
                out.terms.insert(*w, c.clone());
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            let mag = q_abs(c);
            let sign = c.is_negative();
            if i == 0 {
                if sign {
                    write!(f, "-")?;
                }
            } else if sign {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if w.is_empty() {
                write!(f, "{}", format_q(&mag))?;
            } else if mag.is_one() {
                write!(f, "{w}")?;
            } else {
                write!(f, "{}·{w}", format_q(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One serialized term: the word as a list of index sets, the coefficient
/// either exact (`num`/`den` strings) or floating (`coeff`).
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TensorTermDto {
    pub word: Vec<Vec<u8>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub num: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub den: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeff: Option<f64>,
}

/// Serialized tensor.
#[derive(Serialize, Deserialize, Debug, Clone)]
pub struct TensorDto {
    pub n: u8,
    #[serde(rename = "maxLetters")]
    pub max_letters: u8,
    pub terms: Vec<TensorTermDto>,
}

impl Tensor {
    /// Serializable form; `exact` picks num/den strings over float `coeff`.
    pub fn to_dto(&self, exact: bool) -> TensorDto {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| {
                let word = w.iter().map(|l| l.indices()).collect();
                if exact {
                    TensorTermDto {
                        word,
                        num: Some(c.numer().to_string()),
                        den: Some(c.denom().to_string()),
                        coeff: None,
                    }
                } else {
                    TensorTermDto {
                        word,
                        num: None,
                        den: None,
                        coeff: Some(crate::scalar::q_to_f64(c)),
                    }
                }
            })
            .collect();
        TensorDto { n: self.n, max_letters: self.max_letters, terms }
    }

    /// Rebuild from the serialized form; accepts exact and float coefficients
    /// (floats are converted to their exact binary rational value).
    pub fn from_dto(dto: &TensorDto) -> Result<Tensor, Error> {
        Self::check_config(dto.n, dto.max_letters)?;
        let mut terms = Vec::with_capacity(dto.terms.len());
        for t in &dto.terms {
            let mut letters = Vec::with_capacity(t.word.len());
            for idx in &t.word {
                letters.push(Letter::new(idx, dto.n)?);
            }
            let w = Word::from_letters(&letters)?;
            let c = match (&t.num, &t.den, t.coeff) {
                (Some(nu), Some(de), None) => parse_q(&format!("{nu}/{de}"))
                    .or_else(|_| if de == "1" { parse_q(nu) } else { Err(Error::BadRational(format!("{nu}/{de}"))) })?,
                (Some(nu), None, None) => parse_q(nu)?,
                (None, None, Some(f)) => Q::from_float(f)
                    .ok_or_else(|| Error::BadRational(format!("non-finite float {f}")))?,
                _ => {
                    return Err(Error::Serde(
                        "term needs either num/den or coeff, not both".into(),
                    ))
                }
            };
            terms.push((w, c));
        }
        Tensor::from_terms(dto.n, dto.max_letters, terms)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::qr;

    fn gen(n: u8, l: u8, idx: &[u8]) -> Tensor {
        Tensor::generator(n, l, Letter::new(idx, n).unwrap()).unwrap()
    }

    #[test]
    fn add_identities() {
        let a = gen(2, 3, &[1]);
        let zero = Tensor::zero(2, 3);
        assert_eq!(a.add(&zero).unwrap(), a);
        assert!(a.add(&a.neg()).unwrap().is_zero());
        let half = a.scale(&qr(1, 2));
        assert_eq!(half.add(&half).unwrap(), a);
    }

    #[test]
    fn config_mismatch_is_rejected() {
        let a = gen(2, 3, &[1]);
        let b = gen(3, 3, &[1]);
        assert!(matches!(a.add(&b), Err(Error::ConfigMismatch { .. })));
    }

    #[test]
    fn product_concatenates_and_truncates() {
        let z1 = gen(3, 2, &[1]);
        let z2 = gen(3, 2, &[2]);
        let z3 = gen(3, 2, &[3]);
        let p = z1.mul(&z2).unwrap();
        assert_eq!(p.to_string(), "Z1Z2");
        assert_eq!(Tensor::one(3, 2).mul(&p).unwrap(), p);
        // L = 2 kills the three-letter word.
        assert!(p.mul(&z3).unwrap().is_zero());
    }

    #[test]
    fn commutator_signs() {
        // Degree 0 · 0: plain commutator.
        let z1 = gen(2, 2, &[1]);
        let z2 = gen(2, 2, &[2]);
        assert_eq!(z1.graded_commutator(&z2).unwrap().to_string(), "Z1Z2 - Z2Z1");
        // Two odd letters: anticommutator form.
        let z12 = gen(4, 2, &[1, 2]);
        let z34 = gen(4, 2, &[3, 4]);
        assert_eq!(
            z12.graded_commutator(&z34).unwrap().to_string(),
            "Z12Z34 + Z34Z12"
        );
        // [x,x] = 2x² in odd degree.
        let sq = z12.graded_commutator(&z12).unwrap();
        assert_eq!(sq, z12.mul(&z12).unwrap().scale(&qi(2)));
        // Non-homogeneous input is rejected.
        let mixed = z1.add(&gen(2, 2, &[1, 2])).unwrap();
        assert!(matches!(z1.graded_commutator(&mixed), Err(Error::Degree(_))));
    }

    #[test]
    fn exp_log_round_trip() {
        let zero = Tensor::zero(2, 3);
        assert_eq!(zero.exp().unwrap(), Tensor::one(2, 3));
        let e = gen(1, 3, &[1]).exp().unwrap();
        assert_eq!(e.to_string(), "1 + Z1 + 1/2·Z1Z1 + 1/6·Z1Z1Z1");
        let x = gen(2, 3, &[1]).add(&gen(2, 3, &[2]).scale(&qr(2, 3))).unwrap();
        assert_eq!(x.exp().unwrap().log().unwrap(), x);
        assert!(Tensor::one(2, 3).exp().is_err());
        assert!(Tensor::zero(2, 3).log().is_err());
    }

    #[test]
    fn shuffle_basics() {
        let z1 = Word::letter(Letter::single(1));
        let z2 = Word::letter(Letter::single(2));
        assert_eq!(
            Tensor::shuffle_words(2, 4, &z1, &z2).unwrap().to_string(),
            "Z1Z2 + Z2Z1"
        );
        assert_eq!(
            Tensor::shuffle_words(2, 4, &Word::empty(), &z2).unwrap().to_string(),
            "Z2"
        );
        assert_eq!(
            Tensor::shuffle_words(2, 4, &z1, &z1).unwrap().to_string(),
            "2·Z1Z1"
        );
        // Odd × odd letters cross with a sign: Z12 ⧢ Z34 = Z12Z34 − Z34Z12.
        let a = Word::letter(Letter::new(&[1, 2], 4).unwrap());
        let b = Word::letter(Letter::new(&[3, 4], 4).unwrap());
        assert_eq!(
            Tensor::shuffle_words(4, 4, &a, &b).unwrap().to_string(),
            "Z12Z34 - Z34Z12"
        );
    }

    #[test]
    fn shuffle_is_associative_on_degree_zero() {
        let u = Word::letter(Letter::single(1));
        let v = Word::letter(Letter::single(2));
        let w = Word::from_letters(&[Letter::single(1), Letter::single(3)]).unwrap();
        // (u ⧢ v) ⧢ w = u ⧢ (v ⧢ w), extended bilinearly.
        let left = {
            let uv = Tensor::shuffle_words(3, 4, &u, &v).unwrap();
            let mut acc = Tensor::zero(3, 4);
            for (x, c) in uv.terms() {
                acc = acc.add(&Tensor::shuffle_words(3, 4, x, &w).unwrap().scale(c)).unwrap();
            }
            acc
        };
        let right = {
            let vw = Tensor::shuffle_words(3, 4, &v, &w).unwrap();
            let mut acc = Tensor::zero(3, 4);
            for (x, c) in vw.terms() {
                acc = acc.add(&Tensor::shuffle_words(3, 4, &u, x).unwrap().scale(c)).unwrap();
            }
            acc
        };
        assert_eq!(left, right);
    }

    #[test]
    fn group_like_detection() {
        let x = gen(2, 4, &[1]).add(&gen(2, 4, &[2]).scale(&qr(3, 5))).unwrap();
        let g = x.exp().unwrap();
        let (ok, res) = g.is_group_like(&Q::zero()).unwrap();
        assert!(ok);
        assert!(res.is_zero());

        let bad = Tensor::one(2, 4)
            .add(&gen(2, 4, &[1]).mul(&gen(2, 4, &[2])).unwrap())
            .unwrap();
        let (ok, res) = bad.is_group_like(&Q::zero()).unwrap();
        assert!(!ok);
        assert_eq!(res, qi(1));
    }

    #[test]
    fn truncation_is_a_two_sided_ideal() {
        // Dropping long words before or after multiplying agrees.
        let a = gen(2, 4, &[1]).exp().unwrap();
        let b = gen(2, 4, &[2]).exp().unwrap();
        let full = a.mul(&b).unwrap().truncated(2).unwrap();
        let pre = a.truncated(2).unwrap().mul(&b.truncated(2).unwrap()).unwrap();
        assert_eq!(full, pre);
    }

    #[test]
    fn json_round_trip_exact_and_float() {
        let t = gen(2, 3, &[1])
            .mul(&gen(2, 3, &[1, 2]))
            .unwrap()
            .scale(&qr(-7, 3));
        let dto = t.to_dto(true);
        let js = serde_json::to_string(&dto).unwrap();
        assert!(js.contains("\"maxLetters\":3"));
        assert!(js.contains("\"num\":\"-7\""));
        let back = Tensor::from_dto(&serde_json::from_str(&js).unwrap()).unwrap();
        assert_eq!(back, t);

        let f = t.to_dto(false);
        let back_f = Tensor::from_dto(&f).unwrap();
        // Floats representable exactly in binary round-trip exactly too; -7/3
        // does not, so compare loosely.
        let diff = back_f.sub(&t).unwrap().max_abs_coeff();
        assert!(crate::scalar::q_to_f64(&diff) < 1e-15);
    }
}
