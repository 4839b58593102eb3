//! The free differential graded Lie algebra on the generators `Z_I`.
//!
//! Generators are indexed by nonempty subsets `I ⊆ {1..n}`; `Z_I` has
//! cohomological degree `1 − |I|`. The differential acts on a generator by
//!
//! ```text
//! d Z_I = ½ Σ_{I = J ⊔ K} σ(J,K) [Z_J, Z_K]
//! ```
//!
//! summed over ordered pairs of nonempty disjoint subsets, and extends to the
//! tensor algebra as a degree +1 graded derivation. The sign `σ(J,K)` is the
//! sign of the shuffle permutation sorting `J ++ K`, times `(−1)^{|J|+1}`.
//! The two smallest cases pin the formula on partitions with an odd part,
//! `dZ_ij = [Z_i, Z_j]` and `dZ_ijp = [Z_i,Z_jp] − [Z_j,Z_ip] + [Z_p,Z_ij]`,
//! and `d² = 0` at four indices forces the sign on even/even partitions.
//!
//! Lie elements are always handled through their realization in the tensor
//! algebra (nested graded commutators), so equality and dimension questions
//! become exact linear algebra on word coefficients. Every computation here
//! is refined by the full index multidegree `α` (how often each ambient index
//! occurs), which the differential preserves; slices then further split by
//! the letter multiset, which brackets preserve. Both refinements keep the
//! matrices small, and dimensions are memoized up to coordinate relabeling.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num::traits::Zero;

use crate::error::Error;
use crate::linalg::{rank, SpanBasis};
use crate::scalar::{qi, qr, Q};
use crate::tensor::Tensor;
use crate::word::{Letter, Multidegree, Word, MAX_N};

/// A formal Lie monomial: a generator or a bracket of two monomials.
/// Semantic equality is equality of realizations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum LieExpr {
    /// A generator `Z_I`.
    Gen(Letter),
    /// `[a, b]`.
    Bracket(Box<LieExpr>, Box<LieExpr>),
}

impl LieExpr {
    /// `[a, b]`.
    pub fn bracket(a: LieExpr, b: LieExpr) -> LieExpr {
        LieExpr::Bracket(Box::new(a), Box::new(b))
    }

    /// Total cohomological degree.
    pub fn degree(&self) -> i32 {
        match self {
            LieExpr::Gen(l) => l.degree(),
            LieExpr::Bracket(a, b) => a.degree() + b.degree(),
        }
    }

    /// Number of generator leaves.
    pub fn letter_count(&self) -> usize {
        match self {
            LieExpr::Gen(_) => 1,
            LieExpr::Bracket(a, b) => a.letter_count() + b.letter_count(),
        }
    }

    /// Leaves, left to right.
    pub fn letters(&self) -> Vec<Letter> {
        match self {
            LieExpr::Gen(l) => vec![*l],
            LieExpr::Bracket(a, b) => {
                let mut out = a.letters();
                out.extend(b.letters());
                out
            }
        }
    }

    /// Image in the tensor algebra by recursive graded commutators.
    pub fn realize(&self, n: u8, max_letters: u8) -> Result<Tensor, Error> {
        match self {
            LieExpr::Gen(l) => Tensor::generator(n, max_letters, *l),
            LieExpr::Bracket(a, b) => {
                let ta = a.realize(n, max_letters)?;
                let tb = b.realize(n, max_letters)?;
                ta.graded_commutator(&tb)
            }
        }
    }
}

impl fmt::Display for LieExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieExpr::Gen(l) => write!(f, "{l}"),
            LieExpr::Bracket(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

impl fmt::Debug for LieExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The right-normed monomial `[g₁,[g₂,[…,g_k]]]` over a letter sequence.
///
/// # Panics
/// Panics on an empty sequence.
pub fn right_normed(letters: &[Letter]) -> LieExpr {
    assert!(!letters.is_empty(), "empty monomial");
    let mut expr = LieExpr::Gen(*letters.last().unwrap());
    for &l in letters[..letters.len() - 1].iter().rev() {
        expr = LieExpr::Bracket(Box::new(LieExpr::Gen(l)), Box::new(expr));
    }
    expr
}

/// Sign of the shuffle permutation sorting the concatenation of two disjoint
/// ascending index sets, via crossing inversions.
pub(crate) fn plain_shuffle_sign(j_mask: u8, k_mask: u8) -> i64 {
    debug_assert_eq!(j_mask & k_mask, 0);
    let mut inv = 0u32;
    for j in 0..8 {
        if j_mask & (1 << j) != 0 {
            // Count K-indices strictly below this J-index.
            inv += (k_mask & ((1u16 << j) as u8).wrapping_sub(1)).count_ones();
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// σ(J,K) in the generator differential.
fn partition_sign(j: Letter, k: Letter) -> i64 {
    let extra = if j.arity() % 2 == 1 { 1 } else { -1 };
    plain_shuffle_sign(j.mask(), k.mask()) * extra
}

/// The bracket terms of `d Z_I`, as ordered pairs with their coefficients
/// (the ½ of the partition sum is folded in; the double count fixes it).
/// Empty for single-index generators.
pub fn differential_on_generator(letter: Letter) -> Vec<(Q, LieExpr)> {
    let mask = letter.mask();
    let mut out = Vec::new();
    // Proper nonempty subsets J of I, K the complement.
    let mut j = (mask.wrapping_sub(1)) & mask;
    while j != 0 {
        let k = mask & !j;
        let coeff = qr(partition_sign(Letter::from_mask(j), Letter::from_mask(k)), 2);
        out.push((
            coeff,
            LieExpr::Bracket(
                Box::new(LieExpr::Gen(Letter::from_mask(j))),
                Box::new(LieExpr::Gen(Letter::from_mask(k))),
            ),
        ));
        j = (j.wrapping_sub(1)) & mask;
    }
    out
}

/// `d Z_I` realized in the tensor algebra.
pub fn differential_on_generator_tensor(
    n: u8,
    max_letters: u8,
    letter: Letter,
) -> Result<Tensor, Error> {
    let mut out = Tensor::zero(n, max_letters);
    for (c, expr) in differential_on_generator(letter) {
        out = out.add(&expr.realize(n, max_letters)?.scale(&c))?;
    }
    Ok(out)
}

/// The differential extended to the tensor algebra as a graded derivation:
/// on a word, each letter is replaced by its differential with the Koszul
/// sign of the degree of the prefix. Raises (degree, letters) by (+1, +1).
pub fn differential(t: &Tensor) -> Result<Tensor, Error> {
    let n = t.n();
    let max_letters = t.max_letters();
    let mut d_letter: HashMap<Letter, Vec<(Word, Q)>> = HashMap::new();
    let mut out = Tensor::zero(n, max_letters);
    let mut acc: Vec<(Word, Q)> = Vec::new();
    for (w, c) in t.terms() {
        if w.len() + 1 > max_letters as usize {
            continue;
        }
        let letters: Vec<Letter> = w.iter().collect();
        let mut prefix_deg = 0i32;
        for (p, &l) in letters.iter().enumerate() {
            if l.arity() > 1 {
                let image = d_letter.entry(l).or_insert_with(|| {
                    let dt = differential_on_generator_tensor(n, max_letters, l)
                        .expect("letters of a valid tensor realize");
                    dt.terms().map(|(w, c)| (*w, c.clone())).collect()
                });
                let sign = if prefix_deg % 2 == 0 { qi(1) } else { qi(-1) };
                for (dw, dc) in image.iter() {
                    let mut ls: Vec<Letter> = letters[..p].to_vec();
                    ls.extend(dw.iter());
                    ls.extend_from_slice(&letters[p + 1..]);
                    acc.push((Word::from_letters(&ls)?, c * dc * &sign));
                }
            }
            prefix_deg += l.degree();
        }
    }
    for (w, c) in acc {
        out = out.add(&Tensor::from_terms(n, max_letters, [(w, c)])?)?;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Bigraded slices, refined by multidegree and letter multiset.
// ---------------------------------------------------------------------------

/// Ordered list of the words with `ell` letters and multidegree `alpha`,
/// with an index map for vectorization.
pub struct WordSlice {
    pub words: Vec<Word>,
    index: HashMap<Word, usize>,
}

impl WordSlice {
    /// Number of ambient coordinates.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// True when the slice is empty.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    /// Position of a word in the slice.
    pub fn position(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    /// Coefficient vector of a tensor whose support lies in this slice.
    pub fn vectorize(&self, t: &Tensor) -> Result<Vec<Q>, Error> {
        let mut v = vec![Q::zero(); self.words.len()];
        for (w, c) in t.terms() {
            let Some(&i) = self.index.get(w) else {
                return Err(Error::Dimension(format!(
                    "word {w} falls outside the expected (letters, multidegree) slice"
                )));
            };
            v[i] = c.clone();
        }
        Ok(v)
    }
}

/// Enumerate the letters available inside a multidegree budget.
fn letters_within(alpha: &Multidegree) -> Vec<Letter> {
    let support: u8 = alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .fold(0u8, |m, (i, _)| m | (1 << i));
    let mut out = Vec::new();
    let mut sub = support;
    while sub != 0 {
        out.push(Letter::from_mask(sub));
        sub = (sub.wrapping_sub(1)) & support;
    }
    out.sort();
    out
}

/// All words with `ell` letters and multidegree exactly `alpha`,
/// in canonical word order.
pub fn word_slice(ell: u32, alpha: &Multidegree) -> WordSlice {
    let letters = letters_within(alpha);
    let mut words = Vec::new();
    let mut stack: Vec<Letter> = Vec::new();
    fn rec(
        letters: &[Letter],
        remaining: Multidegree,
        left: u32,
        stack: &mut Vec<Letter>,
        out: &mut Vec<Word>,
    ) {
        let total: u32 = remaining.iter().map(|&a| a as u32).sum();
        if left == 0 {
            if total == 0 {
                out.push(Word::from_letters(stack).expect("within letter cap"));
            }
            return;
        }
        // Each remaining letter uses each index at most once.
        if total < left || total > left * (MAX_N as u32) {
            return;
        }
        if remaining.iter().any(|&a| a as u32 > left) {
            return;
        }
        for &l in letters {
            let mut next = remaining;
            let mut ok = true;
            for i in l.indices() {
                let slot = &mut next[(i - 1) as usize];
                if *slot == 0 {
                    ok = false;
                    break;
                }
                *slot -= 1;
            }
            if ok {
                stack.push(l);
                rec(letters, next, left - 1, stack, out);
                stack.pop();
            }
        }
    }
    rec(&letters, *alpha, ell, &mut stack, &mut words);
    words.sort();
    let index = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    WordSlice { words, index }
}

/// All letter multisets (canonical: nondecreasing) with `ell` letters and
/// multidegree `alpha`. Brackets preserve the letter multiset, so each
/// multiset block of a slice can be handled independently.
pub fn letter_multisets(ell: u32, alpha: &Multidegree) -> Vec<Vec<Letter>> {
    let letters = letters_within(alpha);
    let mut out = Vec::new();
    let mut stack: Vec<Letter> = Vec::new();
    fn rec(
        letters: &[Letter],
        from: usize,
        remaining: Multidegree,
        left: u32,
        stack: &mut Vec<Letter>,
        out: &mut Vec<Vec<Letter>>,
    ) {
        let total: u32 = remaining.iter().map(|&a| a as u32).sum();
        if left == 0 {
            if total == 0 {
                out.push(stack.clone());
            }
            return;
        }
        if total < left || remaining.iter().any(|&a| a as u32 > left) {
            return;
        }
        for (pos, &l) in letters.iter().enumerate().skip(from) {
            let mut next = remaining;
            let mut ok = true;
            for i in l.indices() {
                let slot = &mut next[(i - 1) as usize];
                if *slot == 0 {
                    ok = false;
                    break;
                }
                *slot -= 1;
            }
            if ok {
                stack.push(l);
                rec(letters, pos, next, left - 1, stack, out);
                stack.pop();
            }
        }
    }
    rec(&letters, 0, *alpha, ell, &mut stack, &mut out);
    out
}

/// Distinct permutations of a letter multiset, in stable order.
pub fn multiset_permutations(multiset: &[Letter]) -> Vec<Vec<Letter>> {
    let mut sorted = multiset.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    let mut used = vec![false; sorted.len()];
    let mut stack: Vec<Letter> = Vec::new();
    fn rec(
        sorted: &[Letter],
        used: &mut Vec<bool>,
        stack: &mut Vec<Letter>,
        out: &mut Vec<Vec<Letter>>,
    ) {
        if stack.len() == sorted.len() {
            out.push(stack.clone());
            return;
        }
        let mut prev: Option<Letter> = None;
        for i in 0..sorted.len() {
            if used[i] || prev == Some(sorted[i]) {
                continue;
            }
            prev = Some(sorted[i]);
            used[i] = true;
            stack.push(sorted[i]);
            rec(sorted, used, stack, out);
            stack.pop();
            used[i] = false;
        }
    }
    rec(&sorted, &mut used, &mut stack, &mut out);
    out
}

/// A spanning family of one letter-multiset block: the right-normed
/// monomials over all distinct arrangements of the multiset. Completeness
/// follows from the Jacobi identity; redundancy is harmless because only
/// ranks and spans are consumed.
pub fn block_spanning(multiset: &[Letter]) -> Vec<LieExpr> {
    multiset_permutations(multiset).iter().map(|seq| right_normed(seq)).collect()
}

/// A finite generating set of the `(i, ell)` bigraded slice: right-normed
/// monomials over every letter sequence with `ell` letters and total degree
/// `i`, grouped by multidegree.
pub fn lie_spanning_set(n: u8, i: i32, ell: u32) -> Vec<LieExpr> {
    let mut out = Vec::new();
    for alpha in alpha_slices(n, i, ell) {
        for m in letter_multisets(ell, &alpha) {
            out.extend(block_spanning(&m));
        }
    }
    out
}

/// All multidegrees occurring in the `(i, ell)` slice for ambient dimension
/// `n`: compositions of the total index weight `ell − i` into at most `n`
/// parts, each at most `ell`.
pub fn alpha_slices(n: u8, i: i32, ell: u32) -> Vec<Multidegree> {
    let w = ell as i64 - i as i64;
    let mut out = Vec::new();
    if w < ell as i64 || w > (ell as i64) * n as i64 || ell == 0 {
        return out;
    }
    let w = w as u32;
    let mut alpha: Multidegree = [0; MAX_N as usize];
    fn rec(n: usize, pos: usize, left: u32, cap: u32, alpha: &mut Multidegree, out: &mut Vec<Multidegree>) {
        if pos == n {
            if left == 0 {
                out.push(*alpha);
            }
            return;
        }
        let max_here = left.min(cap);
        // Descending so earlier indices fill first and Z_1 precedes Z_2.
        for a in (0..=max_here).rev() {
            alpha[pos] = a as u8;
            rec(n, pos + 1, left - a, cap, alpha, out);
        }
        alpha[pos] = 0;
    }
    rec(n as usize, 0, w, ell, &mut alpha, &mut out);
    out
}

/// Sorted-descending copy of a multidegree: the memoization key under
/// coordinate relabeling (index permutations act by dg-automorphisms, so
/// every slice dimension and differential rank is relabeling-invariant).
fn canonical_alpha(alpha: &Multidegree) -> Multidegree {
    let mut a = *alpha;
    a.sort_unstable_by(|x, y| y.cmp(x));
    a
}

fn dim_cache() -> &'static Mutex<HashMap<(u32, Multidegree), usize>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, Multidegree), usize>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn out_rank_cache() -> &'static Mutex<HashMap<(u32, Multidegree), usize>> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, Multidegree), usize>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Ambient dimension large enough to realize a multidegree's support.
fn support_n(alpha: &Multidegree) -> u8 {
    alpha
        .iter()
        .enumerate()
        .filter(|(_, &a)| a > 0)
        .map(|(i, _)| i as u8 + 1)
        .max()
        .unwrap_or(1)
}

/// Basis monomials of one multiset block, as letter sequences, together with
/// the span they generate inside the block's word coordinates.
pub fn block_basis(multiset: &[Letter]) -> (WordSlice, SpanBasis, Vec<Vec<Letter>>) {
    let ell = multiset.len() as u32;
    let mut alpha: Multidegree = [0; MAX_N as usize];
    for l in multiset {
        for i in l.indices() {
            alpha[(i - 1) as usize] += 1;
        }
    }
    let n = support_n(&alpha);
    let slice = word_slice_for_multiset(multiset);
    let mut span = SpanBasis::new(slice.len());
    let mut basis_seqs = Vec::new();
    for seq in multiset_permutations(multiset) {
        let t = right_normed(&seq)
            .realize(n, ell as u8)
            .expect("block monomials realize");
        let v = slice.vectorize(&t).expect("realization stays in its block");
        if span.insert(&v) {
            basis_seqs.push(seq);
        }
        if span.rank() == slice.len() {
            break;
        }
    }
    (slice, span, basis_seqs)
}

/// The word coordinates of a single multiset block: all distinct
/// arrangements of the multiset, in canonical word order.
pub fn word_slice_for_multiset(multiset: &[Letter]) -> WordSlice {
    let mut words: Vec<Word> = multiset_permutations(multiset)
        .iter()
        .map(|seq| Word::from_letters(seq).expect("within letter cap"))
        .collect();
    words.sort();
    let index = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    WordSlice { words, index }
}

/// Dimension of the `(alpha, ell)` slice of the free dg-Lie algebra,
/// memoized up to relabeling. Sums block ranks over letter multisets.
pub fn slice_dimension_alpha(ell: u32, alpha: &Multidegree) -> usize {
    let key = (ell, canonical_alpha(alpha));
    if let Some(&d) = dim_cache().lock().unwrap().get(&key) {
        return d;
    }
    let mut total = 0usize;
    for m in letter_multisets(ell, &key.1) {
        let (_, span, _) = block_basis(&m);
        total += span.rank();
    }
    dim_cache().lock().unwrap().insert(key, total);
    total
}

/// Rank of the differential restricted to the `(alpha, ell)` slice of the
/// Lie algebra (image measured inside the `(alpha, ell+1)` word slice),
/// memoized up to relabeling.
pub fn differential_rank_alpha(ell: u32, alpha: &Multidegree) -> usize {
    let key = (ell, canonical_alpha(alpha));
    if let Some(&r) = out_rank_cache().lock().unwrap().get(&key) {
        return r;
    }
    let alpha = key.1;
    let n = support_n(&alpha);
    let target = word_slice(ell + 1, &alpha);
    let mut rows: Vec<Vec<Q>> = Vec::new();
    if !target.is_empty() {
        for m in letter_multisets(ell, &alpha) {
            let (_, _, basis_seqs) = block_basis(&m);
            for seq in basis_seqs {
                let t = right_normed(&seq)
                    .realize(n, (ell + 1) as u8)
                    .expect("slice monomials realize");
                let dt = differential(&t).expect("differential of a slice monomial");
                if !dt.is_zero() {
                    rows.push(target.vectorize(&dt).expect("d preserves the multidegree"));
                }
            }
        }
    }
    let r = rank(&rows);
    out_rank_cache().lock().unwrap().insert(key, r);
    r
}

/// Dimension of the `(i, ell)` bigraded slice of the free dg-Lie algebra.
pub fn bigraded_dimension(n: u8, i: i32, ell: u32) -> usize {
    alpha_slices(n, i, ell)
        .iter()
        .map(|a| slice_dimension_alpha(ell, a))
        .sum()
}

/// Dimension of the cohomology of the `(i, ell)` slice:
/// `dim ker(d) − dim im(d)` computed per multidegree as
/// `dim − rank(d out) − rank(d in)`.
pub fn cohomology_dimension(n: u8, i: i32, ell: u32) -> usize {
    let mut total = 0usize;
    for alpha in alpha_slices(n, i, ell) {
        let dim = slice_dimension_alpha(ell, &alpha);
        if dim == 0 {
            continue;
        }
        let out_rank = differential_rank_alpha(ell, &alpha);
        let in_rank = if ell >= 2 { differential_rank_alpha(ell - 1, &alpha) } else { 0 };
        total += dim - out_rank - in_rank;
    }
    total
}

/// Kernel dimension of the differential on the `(i, ell)` slice.
pub fn kernel_dimension(n: u8, i: i32, ell: u32) -> usize {
    alpha_slices(n, i, ell)
        .iter()
        .map(|a| slice_dimension_alpha(ell, a) - differential_rank_alpha(ell, a))
        .sum()
}

/// Image dimension of the differential arriving in the `(i, ell)` slice.
pub fn image_dimension(n: u8, i: i32, ell: u32) -> usize {
    if ell < 2 {
        return 0;
    }
    alpha_slices(n, i, ell)
        .iter()
        .map(|a| differential_rank_alpha(ell - 1, a))
        .sum()
}

/// Necklace (Witt) count: the dimension of the degree-0 slice with `ell`
/// single-index letters, used as an independent cross-check on the rank
/// computation. Only valid at degree 0, where all letters are even.
pub fn witt_dimension(n: u8, ell: u32) -> usize {
    fn moebius(mut m: u32) -> i64 {
        let mut mu = 1i64;
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                m /= p;
                if m % p == 0 {
                    return 0;
                }
                mu = -mu;
            }
            p += 1;
        }
        if m > 1 {
            mu = -mu;
        }
        mu
    }
    let mut sum = 0i64;
    for d in 1..=ell {
        if ell % d == 0 {
            sum += moebius(d) * (n as i64).pow(ell / d);
        }
    }
    (sum / ell as i64) as usize
}

/// The `(i, ell)` slice assembled across multidegrees: ambient words,
/// spanning monomials, and their realization vectors.
pub struct BigradedSubspace {
    /// Cohomological degree.
    pub i: i32,
    /// Letter count.
    pub ell: u32,
    /// Ambient word basis of the slice (all multidegrees, concatenated).
    pub words: Vec<Word>,
    /// Spanning Lie monomials.
    pub monomials: Vec<LieExpr>,
    /// Realizations of the monomials in the ambient word coordinates.
    pub vectors: Vec<Vec<Q>>,
}

impl BigradedSubspace {
    /// Exact rank of the spanning matrix: the slice dimension.
    pub fn rank(&self) -> usize {
        rank(&self.vectors)
    }
}

/// Assemble the `(i, ell)` slice of the free dg-Lie algebra for tests and
/// reports. Production code works per multidegree instead.
pub fn bigraded_subspace(n: u8, i: i32, ell: u32) -> BigradedSubspace {
    let mut words = Vec::new();
    let mut monomials = Vec::new();
    let mut vectors = Vec::new();
    let mut offset = 0usize;
    let alphas = alpha_slices(n, i, ell);
    let mut total_cols = 0usize;
    let mut slices = Vec::new();
    for alpha in &alphas {
        let ws = word_slice(ell, alpha);
        total_cols += ws.len();
        slices.push(ws);
    }
    for (alpha, ws) in alphas.iter().zip(&slices) {
        for m in letter_multisets(ell, alpha) {
            for expr in block_spanning(&m) {
                let t = expr
                    .realize(n, ell as u8)
                    .expect("slice monomials realize");
                let local = ws.vectorize(&t).expect("monomial stays in its slice");
                let mut row = vec![Q::zero(); total_cols];
                row[offset..offset + ws.len()].clone_from_slice(&local);
                monomials.push(expr);
                vectors.push(row);
            }
        }
        words.extend(ws.words.iter().copied());
        offset += ws.len();
    }
    BigradedSubspace { i, ell, words, monomials, vectors }
}

/// Index-multiset orbit representatives of the multidegrees of a slice:
/// one sorted-descending `α` per relabeling class.
pub fn alpha_orbit_representatives(n: u8, i: i32, ell: u32) -> Vec<Multidegree> {
    let mut seen: BTreeMap<Multidegree, ()> = BTreeMap::new();
    for alpha in alpha_slices(n, i, ell) {
        seen.entry(canonical_alpha(&alpha)).or_insert(());
    }
    seen.into_keys().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn letter(idx: &[u8]) -> Letter {
        Letter::new(idx, MAX_N).unwrap()
    }

    #[test]
    fn differential_matches_displayed_cases() {
        // dZ_i = 0.
        assert!(differential_on_generator(Letter::single(1)).is_empty());

        // dZ_12 = [Z1, Z2].
        let d12 = differential_on_generator_tensor(2, 2, letter(&[1, 2])).unwrap();
        let expect = right_normed(&[Letter::single(1), Letter::single(2)])
            .realize(2, 2)
            .unwrap();
        assert_eq!(d12, expect);

        // dZ_123 = [Z1,Z23] − [Z2,Z13] + [Z3,Z12].
        let d123 = differential_on_generator_tensor(3, 2, letter(&[1, 2, 3])).unwrap();
        let t1 = right_normed(&[letter(&[1]), letter(&[2, 3])]).realize(3, 2).unwrap();
        let t2 = right_normed(&[letter(&[2]), letter(&[1, 3])]).realize(3, 2).unwrap();
        let t3 = right_normed(&[letter(&[3]), letter(&[1, 2])]).realize(3, 2).unwrap();
        let expect = t1.sub(&t2).unwrap().add(&t3).unwrap();
        assert_eq!(d123, expect);
    }

    #[test]
    fn derivation_rule_on_words() {
        // d(Z1 Z2) = 0 and d(Z12 Z3) = [Z1,Z2]·Z3.
        let z1z2 = Tensor::generator(3, 3, letter(&[1]))
            .unwrap()
            .mul(&Tensor::generator(3, 3, letter(&[2])).unwrap())
            .unwrap();
        assert!(differential(&z1z2).unwrap().is_zero());

        let z12z3 = Tensor::generator(3, 3, letter(&[1, 2]))
            .unwrap()
            .mul(&Tensor::generator(3, 3, letter(&[3])).unwrap())
            .unwrap();
        let expect = right_normed(&[letter(&[1]), letter(&[2])])
            .realize(3, 3)
            .unwrap()
            .mul(&Tensor::generator(3, 3, letter(&[3])).unwrap())
            .unwrap();
        assert_eq!(differential(&z12z3).unwrap(), expect);
    }

    #[test]
    fn d_squared_vanishes_on_generators_up_to_n5() {
        // Arity 4 is the first place even/even partitions appear, arity 5
        // the first mixing them with odd splits.
        for n in [4u8, 5] {
            for letter in Letter::all(n) {
                let t = Tensor::generator(n, 3, letter).unwrap();
                let dd = differential(&differential(&t).unwrap()).unwrap();
                assert!(dd.is_zero(), "d² {letter} ≠ 0 at n={n}");
            }
        }
    }

    #[test]
    fn d_is_a_graded_derivation_on_brackets() {
        // d[a,b] = [da,b] + (−1)^{deg a}[a,db] for a = Z_12, b = Z_134.
        let a = Tensor::generator(4, 4, letter(&[1, 2])).unwrap();
        let b = Tensor::generator(4, 4, letter(&[1, 3, 4])).unwrap();
        let lhs = differential(&a.graded_commutator(&b).unwrap()).unwrap();
        let da_b = differential(&a).unwrap().graded_commutator(&b).unwrap();
        let a_db = a.graded_commutator(&differential(&b).unwrap()).unwrap();
        // deg a = −1, so the second term enters with a minus sign.
        let rhs = da_b.sub(&a_db).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn spanning_sets_match_displayed_slices() {
        let s01 = lie_spanning_set(2, 0, 1);
        assert_eq!(
            s01.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            vec!["Z1", "Z2"]
        );
        assert_eq!(bigraded_dimension(2, 0, 2), 1, "span of [Z1,Z2]");
        let gens_m1 = lie_spanning_set(3, -1, 1);
        assert_eq!(gens_m1.len(), 3, "Z12, Z13, Z23");
    }

    #[test]
    fn degree_zero_dimensions_match_witt() {
        for n in 1..=3u8 {
            for ell in 1..=5u32 {
                assert_eq!(
                    bigraded_dimension(n, 0, ell),
                    witt_dimension(n, ell),
                    "free Lie dimension at n={n}, ℓ={ell}"
                );
            }
        }
    }

    #[test]
    fn known_bigraded_dimensions() {
        // dim 𝔣⁰ at ℓ=3, n=2 → 2; dim 𝔣⁰ at ℓ=2, n=3 → 3;
        // dim 𝔣^{−1} at ℓ=1, n=3 → 3.
        assert_eq!(bigraded_dimension(2, 0, 3), 2);
        assert_eq!(bigraded_dimension(3, 0, 2), 3);
        assert_eq!(bigraded_dimension(3, -1, 1), 3);
    }

    #[test]
    fn resolution_cohomology_small_cases() {
        assert_eq!(cohomology_dimension(2, 0, 1), 2);
        assert_eq!(cohomology_dimension(2, 0, 2), 0);
        assert_eq!(cohomology_dimension(2, -1, 2), 0);
        assert_eq!(cohomology_dimension(3, -1, 3), 0);
    }
}
