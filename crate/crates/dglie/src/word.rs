//! Generators and words of the graded tensor algebra.
//!
//! A generator `Z_I` is labeled by a nonempty index set `I ⊆ {1..n}` and has
//! cohomological degree `1 − |I|` and letter weight 1. A word is a finite
//! sequence of generators. Both are small `Copy` values: the resource guard
//! caps `n` at [`MAX_N`] and the letter count at [`MAX_LETTERS`], so an index
//! set packs into one byte and a word into a fixed inline array.

use std::fmt;

use crate::error::Error;

/// Largest ambient dimension accepted anywhere in the crate.
pub const MAX_N: u8 = 6;
/// Hard cap on the letter-count truncation parameter `L`.
pub const MAX_LETTERS: usize = 8;

/// A generator `Z_I`, stored as the bitmask of its index set
/// (bit `i-1` set ⇔ `i ∈ I`).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    mask: u8,
}

impl Letter {
    /// Build from an explicit index sequence, validating that it is nonempty,
    /// strictly increasing, and within `1..=n`.
    pub fn new(indices: &[u8], n: u8) -> Result<Self, Error> {
        if indices.is_empty() {
            return Err(Error::BadGenerator("empty index set".into()));
        }
        let mut mask = 0u8;
        let mut prev = 0u8;
        for &i in indices {
            if i == 0 || i > n || i > MAX_N {
                return Err(Error::BadGenerator(format!("index {i} out of range 1..={n}")));
            }
            if i <= prev {
                return Err(Error::BadGenerator(format!(
                    "indices not strictly increasing at {i}"
                )));
            }
            prev = i;
            mask |= 1 << (i - 1);
        }
        Ok(Letter { mask })
    }

    /// The single-index generator `Z_i`.
    pub fn single(i: u8) -> Self {
        debug_assert!(i >= 1 && i <= MAX_N);
        Letter { mask: 1 << (i - 1) }
    }

    /// Rebuild from a raw bitmask; `mask` must be nonzero.
    pub fn from_mask(mask: u8) -> Self {
        debug_assert!(mask != 0, "letter mask must be nonempty");
        Letter { mask }
    }

    /// The raw index-set bitmask.
    pub fn mask(&self) -> u8 {
        self.mask
    }

    /// Ascending index sequence `I`.
    pub fn indices(&self) -> Vec<u8> {
        (1..=MAX_N).filter(|i| self.mask & (1 << (i - 1)) != 0).collect()
    }

    /// `|I|`.
    pub fn arity(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Cohomological degree `1 − |I|` (0 for single indices, negative above).
    pub fn degree(&self) -> i32 {
        1 - self.arity() as i32
    }

    /// Largest index used (0 never occurs: masks are nonempty).
    pub fn max_index(&self) -> u8 {
        8 - self.mask.leading_zeros() as u8
    }

    /// Iterate every generator available in ambient dimension `n`,
    /// in the canonical letter order.
    pub fn all(n: u8) -> Vec<Letter> {
        let mut out: Vec<Letter> = (1..(1u16 << n)).map(|m| Letter { mask: m as u8 }).collect();
        out.sort();
        out
    }
}

/// Letters order by their index sequences compared lexicographically,
/// e.g. `Z1 < Z12 < Z123 < Z13 < Z2 < Z23 < Z3`. This is the sequence order
/// the canonical word order below builds on.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        if self.mask == other.mask {
            return std::cmp::Ordering::Equal;
        }
        let (mut a, mut b) = (self.mask, other.mask);
        while a != 0 && b != 0 {
            let (ia, ib) = (a.trailing_zeros(), b.trailing_zeros());
            if ia != ib {
                return ia.cmp(&ib);
            }
            a &= a - 1;
            b &= b - 1;
        }
        // One sequence is a prefix of the other; the shorter sorts first.
        a.cmp(&b)
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z")?;
        for i in self.indices() {
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Multidegree: how many times each ambient index `1..=n` occurs across all
/// letters of a word. The tensor differential preserves it, which is what
/// lets every rank computation run on small refined slices.
pub type Multidegree = [u8; MAX_N as usize];

/// A word (basis monomial) of the tensor algebra: up to [`MAX_LETTERS`]
/// letters stored inline. The empty word is the algebra unit.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word {
    len: u8,
    letters: [u8; MAX_LETTERS],
}

impl Word {
    /// The empty word.
    pub fn empty() -> Self {
        Word { len: 0, letters: [0; MAX_LETTERS] }
    }

    /// A single-letter word.
    pub fn letter(l: Letter) -> Self {
        let mut w = Word::empty();
        w.letters[0] = l.mask();
        w.len = 1;
        w
    }

    /// Build from a letter slice. Fails if the slice exceeds the hard cap.
    pub fn from_letters(letters: &[Letter]) -> Result<Self, Error> {
        if letters.len() > MAX_LETTERS {
            return Err(Error::ResourceGuard(format!(
                "word with {} letters exceeds the cap of {MAX_LETTERS}",
                letters.len()
            )));
        }
        let mut w = Word::empty();
        for (i, l) in letters.iter().enumerate() {
            w.letters[i] = l.mask();
        }
        w.len = letters.len() as u8;
        Ok(w)
    }

    /// Number of letters.
    pub fn len(&self) -> usize {
        self.len as usize
    }

    /// True for the unit word.
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Letter at position `i`.
    pub fn get(&self, i: usize) -> Letter {
        debug_assert!(i < self.len());
        Letter::from_mask(self.letters[i])
    }

    /// Iterate the letters left to right.
    pub fn iter(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.len()).map(move |i| self.get(i))
    }

    /// Total cohomological degree (sum over letters).
    pub fn degree(&self) -> i32 {
        self.iter().map(|l| l.degree()).sum()
    }

    /// Concatenation `self ++ other`.
    ///
    /// # Panics
    /// Panics if the result would exceed [`MAX_LETTERS`]; callers truncate at
    /// `L ≤ MAX_LETTERS` before concatenating.
    pub fn concat(&self, other: &Word) -> Word {
        let total = self.len() + other.len();
        assert!(total <= MAX_LETTERS, "concatenation exceeds the letter cap");
        let mut w = *self;
        w.letters[self.len()..total].copy_from_slice(&other.letters[..other.len()]);
        w.len = total as u8;
        w
    }

    /// Largest ambient index used by any letter.
    pub fn max_index(&self) -> u8 {
        self.iter().map(|l| l.max_index()).max().unwrap_or(0)
    }

    /// Index-usage counts across all letters.
    pub fn multidegree(&self) -> Multidegree {
        let mut md = [0u8; MAX_N as usize];
        for l in self.iter() {
            for i in l.indices() {
                md[(i - 1) as usize] += 1;
            }
        }
        md
    }
}

/// Canonical word order: length-lexicographic — first by letter count, then
/// letterwise in the letter order. Gives deterministic term iteration and
/// stable serialized output.
impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| {
                for i in 0..self.len() {
                    let c = self.get(i).cmp(&other.get(i));
                    if c != std::cmp::Ordering::Equal {
                        return c;
                    }
                }
                std::cmp::Ordering::Equal
            })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "1");
        }
        for l in self.iter() {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
