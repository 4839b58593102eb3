//! Slicewise quotients of the free dg-Lie algebra: semiabelianization,
//! abelianization, the maximal crossed-module truncation, lower central
//! series cutoffs, and extraction of exact structure-constant tables for
//! nilpotent crossed complexes.
//!
//! Every quotient is presented per bigraded slice `(i, ell)` as the ambient
//! slice modulo an explicit relation span. Relation vectors are realizations
//! of bracket families (and differentials of bracket families), which are
//! homogeneous in letter multidegree, so each slice decomposes into the same
//! multidegree blocks as the ambient algebra.

use std::collections::{BTreeMap, BTreeSet};

use num::traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lie::{
    alpha_slices, bigraded_dimension, block_spanning, differential, image_dimension,
    letter_multisets, lie_spanning_set, word_slice, LieExpr, WordSlice,
};
use crate::linalg::{rank, SpanBasis};
use crate::scalar::{format_q, parse_q, Q};
use crate::tensor::Tensor;
use crate::word::{Multidegree, MAX_LETTERS, MAX_N};

/// One letter-multidegree block of a quotient slice. The span holds the
/// relation subspace first and the accepted spanning monomials after it, so
/// coordinates of any vector split into a relation part and a quotient part.
struct AlphaBlock {
    words: WordSlice,
    span: SpanBasis,
    relation_rank: usize,
    basis: Vec<LieExpr>,
    offset: usize,
}

/// A bigraded slice of a quotient of the free dg-Lie algebra: the ambient
/// `(i, ell)` slice modulo a relation span, with an explicit basis of
/// residue classes of Lie monomials.
pub struct QuotientSlice {
    n: u8,
    i: i32,
    ell: u32,
    blocks: Vec<AlphaBlock>,
    block_index: BTreeMap<Multidegree, usize>,
    dim: usize,
    ambient_dim: usize,
    relation_rank: usize,
}

impl QuotientSlice {
    /// Cohomological degree of the slice.
    pub fn degree(&self) -> i32 {
        self.i
    }

    /// Letter count of the slice.
    pub fn letters(&self) -> u32 {
        self.ell
    }

    /// Dimension of the quotient.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the ambient slice.
    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Rank of the relation subspace.
    pub fn relation_rank(&self) -> usize {
        self.relation_rank
    }

    /// Basis monomials whose residue classes form the quotient basis.
    pub fn basis(&self) -> impl Iterator<Item = &LieExpr> {
        self.blocks.iter().flat_map(|b| b.basis.iter())
    }

    /// Printed names of the basis monomials, in coordinate order.
    pub fn labels(&self) -> Vec<String> {
        self.basis().map(|e| e.to_string()).collect()
    }

    /// Coordinates of the residue class of `t` in the quotient basis. The
    /// tensor must be a Lie element of this slice (degree `i`, exactly
    /// `ell` letters per word).
    pub fn express(&self, t: &Tensor) -> Result<Vec<Q>, Error> {
        let mut coords = vec![Q::zero(); self.dim];
        let mut pending: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for (w, c) in t.terms() {
            if w.len() != self.ell as usize || w.degree() != self.i {
                return Err(Error::Degree(format!(
                    "expected a ({}, {}) slice element, found word of {} letters, degree {}",
                    self.i,
                    self.ell,
                    w.len(),
                    w.degree()
                )));
            }
            let alpha = w.multidegree();
            let bi = *self.block_index.get(&alpha).ok_or_else(|| {
                Error::Degree(format!("word multidegree {alpha:?} is not part of this slice"))
            })?;
            let block = &self.blocks[bi];
            let pos = block.words.position(w).expect("slice enumerates all words of its blocks");
            let v = pending
                .entry(bi)
                .or_insert_with(|| vec![Q::zero(); block.words.len()]);
            v[pos] = &v[pos] + c;
        }
        for (bi, v) in pending {
            let block = &self.blocks[bi];
            let full = block.span.express(&v).ok_or_else(|| {
                Error::OutsideSpan(format!(
                    "vector is not a Lie element of the ({}, {}) slice",
                    self.i, self.ell
                ))
            })?;
            for (k, c) in full[block.relation_rank..].iter().enumerate() {
                coords[block.offset + k] = c.clone();
            }
        }
        Ok(coords)
    }
}

/// Assembles a quotient slice from its relation vectors. With
/// `include_monomials == false` the ambient space is taken to be zero; this
/// is only used for the single-letter slice of the commutant, which has no
/// relations either.
fn build_slice(
    n: u8,
    i: i32,
    ell: u32,
    relations: &[Tensor],
    include_monomials: bool,
) -> QuotientSlice {
    assert!(include_monomials || relations.is_empty());
    let mut blocks: Vec<AlphaBlock> = Vec::new();
    let mut block_index = BTreeMap::new();
    for alpha in alpha_slices(n, i, ell) {
        let words = word_slice(ell, &alpha);
        if words.is_empty() {
            continue;
        }
        let cols = words.len();
        block_index.insert(alpha, blocks.len());
        blocks.push(AlphaBlock {
            words,
            span: SpanBasis::new(cols),
            relation_rank: 0,
            basis: Vec::new(),
            offset: 0,
        });
    }
    for r in relations {
        for (w, c) in r.terms() {
            debug_assert_eq!(w.len(), ell as usize);
            debug_assert_eq!(w.degree(), i);
            let _ = (w, c);
        }
        // Relations are multidegree-homogeneous, so each lands in one block.
        let mut per_block: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for (w, c) in r.terms() {
            let bi = block_index[&w.multidegree()];
            let v = per_block
                .entry(bi)
                .or_insert_with(|| vec![Q::zero(); blocks[bi].words.len()]);
            let pos = blocks[bi].words.position(w).expect("slice word");
            v[pos] = &v[pos] + c;
        }
        for (bi, v) in per_block {
            blocks[bi].span.insert(&v);
        }
    }
    for block in &mut blocks {
        block.relation_rank = block.span.rank();
    }
    if include_monomials {
        for block in &mut blocks {
            let alpha = block.words.words[0].multidegree();
            for multiset in letter_multisets(ell, &alpha) {
                for expr in block_spanning(&multiset) {
                    let t = expr
                        .realize(n, ell as u8)
                        .expect("slice parameters are within the resource guard");
                    let v = block.words.vectorize(&t).expect("realization stays in its slice");
                    if block.span.insert(&v) {
                        block.basis.push(expr);
                    }
                }
            }
        }
    }
    let mut offset = 0usize;
    let mut ambient_dim = 0usize;
    let mut relation_rank = 0usize;
    for block in &mut blocks {
        block.offset = offset;
        offset += block.basis.len();
        ambient_dim += if include_monomials { block.span.rank() } else { 0 };
        relation_rank += block.relation_rank;
    }
    QuotientSlice {
        n,
        i,
        ell,
        blocks,
        block_index,
        dim: offset,
        ambient_dim,
        relation_rank,
    }
}

/// The ambient slice itself, as the identity quotient.
pub fn full_slice(n: u8, i: i32, ell: u32) -> QuotientSlice {
    build_slice(n, i, ell, &[], true)
}

/// Bracket monomials `[x, y]` of total degree `degree` and `letters` letters,
/// with `x`, `y` running over slice spanning sets and both degrees at most
/// `cap`. With `cap == 0` the degree-0 sides are restricted to two or more
/// letters, which spans the commutant part. Mirrored splits are emitted once.
fn bracket_family(n: u8, degree: i32, letters: u32, cap: i32) -> Vec<LieExpr> {
    let mut out = Vec::new();
    if letters < 2 {
        return out;
    }
    let min_letter_degree = -((n as i32) - 1);
    for l1 in 1..letters {
        let l2 = letters - l1;
        for i1 in (min_letter_degree * l1 as i32)..=0 {
            let i2 = degree - i1;
            if i1 > cap || i2 > cap || i2 > 0 || i2 < min_letter_degree * l2 as i32 {
                continue;
            }
            if cap == 0 && ((i1 == 0 && l1 < 2) || (i2 == 0 && l2 < 2)) {
                continue;
            }
            if (l1, i1) > (l2, i2) {
                continue;
            }
            let same = (l1, i1) == (l2, i2);
            let xs = lie_spanning_set(n, i1, l1);
            let ys = if same { xs.clone() } else { lie_spanning_set(n, i2, l2) };
            for (a, x) in xs.iter().enumerate() {
                let start = if same { a } else { 0 };
                for y in &ys[start..] {
                    out.push(LieExpr::bracket(x.clone(), y.clone()));
                }
            }
        }
    }
    out
}

/// Slice `(i, ell)` of the semiabelianization: the quotient by the ideal
/// generated by brackets of two strictly negative elements. The ideal's
/// `(i, ell)` part is spanned by such brackets together with differentials
/// of such brackets one bigrade below. Degree 0 is untouched.
pub fn semiabelianization_slice(n: u8, i: i32, ell: u32) -> Result<QuotientSlice, Error> {
    if i > 0 {
        return Err(Error::Degree(format!("the algebra vanishes in positive degree {i}")));
    }
    if i == 0 {
        return Ok(full_slice(n, 0, ell));
    }
    let mut relations = Vec::new();
    for e in bracket_family(n, i, ell, -1) {
        relations.push(e.realize(n, ell as u8)?);
    }
    if ell >= 2 {
        for e in bracket_family(n, i - 1, ell - 1, -1) {
            relations.push(differential(&e.realize(n, ell as u8)?)?);
        }
    }
    Ok(build_slice(n, i, ell, &relations, true))
}

/// Slice `(i, ell)` of the abelianization of the co-unital subalgebra whose
/// degree-0 part is the commutant `[FL, FL]`: the quotient by all brackets
/// of two of its elements. In degree 0 the ambient space is the commutant
/// itself, which is the whole slice once `ell >= 2` and zero at `ell == 1`.
pub fn abelianization_slice(n: u8, i: i32, ell: u32) -> Result<QuotientSlice, Error> {
    if i > 0 {
        return Err(Error::Degree(format!("the algebra vanishes in positive degree {i}")));
    }
    if i == 0 && ell == 1 {
        return Ok(build_slice(n, 0, 1, &[], false));
    }
    let mut relations = Vec::new();
    for e in bracket_family(n, i, ell, 0) {
        relations.push(e.realize(n, ell as u8)?);
    }
    Ok(build_slice(n, i, ell, &relations, true))
}

/// Degree `-1` slice of the maximal crossed-module quotient of the
/// truncation to degrees `0, -1`: the quotient of the `(-1, ell)` slice by
/// differentials of brackets of two degree `-1` elements.
pub fn crossed_module_slice(n: u8, ell: u32) -> Result<QuotientSlice, Error> {
    let mut relations = Vec::new();
    if ell >= 3 {
        for e in bracket_family(n, -2, ell - 1, -1) {
            relations.push(differential(&e.realize(n, ell as u8)?)?);
        }
    }
    Ok(build_slice(n, -1, ell, &relations, true))
}

/// Rank of the differential induced on quotient slices. The source basis
/// representatives are differentiated and expressed in the target quotient,
/// which is valid because all quotients here are by differential ideals.
pub fn induced_differential_rank(src: &QuotientSlice, dst: &QuotientSlice) -> Result<usize, Error> {
    if dst.i != src.i + 1 || dst.ell != src.ell + 1 || dst.n != src.n {
        return Err(Error::Degree(format!(
            "differential maps ({}, {}) to ({}, {}), target is ({}, {})",
            src.i,
            src.ell,
            src.i + 1,
            src.ell + 1,
            dst.i,
            dst.ell
        )));
    }
    let mut rows = Vec::new();
    for expr in src.basis() {
        let t = differential(&expr.realize(src.n, (src.ell + 1) as u8)?)?;
        rows.push(dst.express(&t)?);
    }
    Ok(rank(&rows))
}

/// Weight-`ell` dimension of the degree-0 cohomology of the crossed-module
/// quotient: the relations in degree `-1` are differentials, so the image
/// in degree 0 agrees with the image from the ambient algebra.
pub fn h0_dimension(n: u8, ell: u32) -> usize {
    bigraded_dimension(n, 0, ell) - image_dimension(n, 0, ell)
}

/// Weight-`ell` dimension of the degree `-1` cohomology of the
/// crossed-module quotient, the kernel of the induced differential.
pub fn h_minus1_dimension(n: u8, ell: u32) -> Result<usize, Error> {
    let src = crossed_module_slice(n, ell)?;
    let dst = full_slice(n, 0, ell + 1);
    Ok(src.dim() - induced_differential_rank(&src, &dst)?)
}

/// Weight-`ell` kernel dimension of the differential on the degree `-m`
/// slice of the semiabelianization.
pub fn semiabelian_kernel_dimension(n: u8, m: u32, ell: u32) -> Result<usize, Error> {
    let src = semiabelianization_slice(n, -(m as i32), ell)?;
    let dst = semiabelianization_slice(n, 1 - (m as i32), ell + 1)?;
    Ok(src.dim() - induced_differential_rank(&src, &dst)?)
}

/// Spanning family of the lower central series member `gamma_r` inside the
/// `(i, ell)` slice, generated by honest iterated brackets. Intended for
/// small slices; the family grows quickly with `ell`.
fn gamma_spanning(n: u8, r: u32, i: i32, ell: u32) -> Vec<LieExpr> {
    if r <= 1 {
        return lie_spanning_set(n, i, ell);
    }
    let min_letter_degree = -((n as i32) - 1);
    let mut out = Vec::new();
    for l1 in 1..ell {
        let l2 = ell - l1;
        for i1 in (min_letter_degree * l1 as i32)..=0 {
            let i2 = i - i1;
            if i2 > 0 || i2 < min_letter_degree * l2 as i32 {
                continue;
            }
            let inner = gamma_spanning(n, r - 1, i2, l2);
            if inner.is_empty() {
                continue;
            }
            for x in lie_spanning_set(n, i1, l1) {
                for y in &inner {
                    out.push(LieExpr::bracket(x.clone(), y.clone()));
                }
            }
        }
    }
    out
}

/// Rank of `gamma_r` inside the `(i, ell)` slice, computed from the honest
/// bracket family. The letter grading predicts the full slice dimension for
/// `ell >= r` and zero below; this computation does not assume that.
pub fn lcs_slice_rank(n: u8, r: u32, i: i32, ell: u32) -> Result<usize, Error> {
    let slice = full_slice(n, i, ell);
    let mut per_block: BTreeMap<usize, SpanBasis> = BTreeMap::new();
    for expr in gamma_spanning(n, r, i, ell) {
        let t = expr.realize(n, ell as u8)?;
        for (w, _) in t.terms() {
            let bi = slice.block_index[&w.multidegree()];
            per_block
                .entry(bi)
                .or_insert_with(|| SpanBasis::new(slice.blocks[bi].words.len()));
        }
        let mut per_vec: BTreeMap<usize, Vec<Q>> = BTreeMap::new();
        for (w, c) in t.terms() {
            let bi = slice.block_index[&w.multidegree()];
            let v = per_vec
                .entry(bi)
                .or_insert_with(|| vec![Q::zero(); slice.blocks[bi].words.len()]);
            let pos = slice.blocks[bi].words.position(w).expect("slice word");
            v[pos] = &v[pos] + c;
        }
        for (bi, v) in per_vec {
            per_block.get_mut(&bi).expect("seeded above").insert(&v);
        }
    }
    Ok(per_block.values().map(SpanBasis::rank).sum())
}

/// Slice dimension of `gamma_r` predicted by the letter grading.
pub fn lcs_letter_grading_dimension(n: u8, r: u32, i: i32, ell: u32) -> usize {
    if ell >= r {
        bigraded_dimension(n, i, ell)
    } else {
        0
    }
}

/// Sparse coordinate vector: ascending basis index paired with an exact
/// rational coefficient.
pub type SparseVec = Vec<(usize, Q)>;

/// Exact structure-constant tables of the nilpotent crossed complex
/// `g_{n, class}`: the semiabelianization of the free dg-Lie algebra on `n`
/// generators, truncated to letter weight at most `class`. Degree 0 is the
/// free nilpotent Lie algebra; degree `-i` for `i >= 1` is abelian as a Lie
/// algebra and carries the degree-0 action recorded in its bracket table.
#[derive(Debug, Clone, PartialEq)]
pub struct NilpotentCrossedComplex {
    n: u8,
    class: u8,
    dims: Vec<usize>,
    labels: Vec<Vec<String>>,
    /// `bracket[i][a][b]`: coordinates of the bracket of degree-0 basis
    /// element `a` with degree `-i` basis element `b`, in the degree `-i`
    /// basis. Index 0 is the degree-0 Lie bracket table.
    bracket: Vec<Vec<Vec<SparseVec>>>,
    /// `differential[i - 1][b]`: coordinates of the differential of degree
    /// `-i` basis element `b` in the degree `-(i - 1)` basis.
    differential: Vec<Vec<SparseVec>>,
}

/// Per-degree basis data accompanying an extraction: the quotient slices by
/// weight, the chosen basis monomials, and generator lookups. Needed to
/// express concrete tensor realizations in complex coordinates; not part of
/// the serialized interchange format.
pub struct ComplexBasis {
    n: u8,
    class: u8,
    layers: Vec<DegreeLayer>,
}

struct DegreeLayer {
    slices: Vec<QuotientSlice>,
    offsets: Vec<usize>,
    exprs: Vec<LieExpr>,
    ell_of: Vec<u32>,
    gen_index: BTreeMap<u8, usize>,
    dim: usize,
}

impl ComplexBasis {
    /// Number of generators of the underlying algebra.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Nilpotency class (maximal letter weight).
    pub fn class(&self) -> u8 {
        self.class
    }

    /// Number of degrees, counting degree 0.
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Dimension of degree `-i`.
    pub fn dim(&self, i: usize) -> usize {
        self.layers[i].dim
    }

    /// Basis monomial `k` of degree `-i`.
    pub fn basis_expr(&self, i: usize, k: usize) -> &LieExpr {
        &self.layers[i].exprs[k]
    }

    /// Letter weight of basis member `k` of degree `-i`.
    pub fn basis_letters(&self, i: usize, k: usize) -> u32 {
        self.layers[i].ell_of[k]
    }

    /// Quotient slice of degree `-i` and weight `ell`.
    pub fn slice(&self, i: usize, ell: u32) -> &QuotientSlice {
        &self.layers[i].slices[(ell - 1) as usize]
    }

    /// Coordinate of the generator `Z_I` with index mask `mask` in the
    /// degree `-i` basis, when that generator survives in the complex.
    pub fn generator_coordinate(&self, i: usize, mask: u8) -> Option<usize> {
        self.layers[i].gen_index.get(&mask).copied()
    }

    /// Coordinates of the residue class of `t` in the degree `-i` basis.
    /// The tensor may mix letter weights up to the class; every homogeneous
    /// part must be a Lie element of its slice.
    pub fn express(&self, i: usize, t: &Tensor) -> Result<Vec<Q>, Error> {
        let layer = &self.layers[i];
        for (w, _) in t.terms() {
            if w.len() > self.class as usize {
                return Err(Error::Degree(format!(
                    "word with {} letters exceeds nilpotency class {}",
                    w.len(),
                    self.class
                )));
            }
        }
        let mut coords = vec![Q::zero(); layer.dim];
        for ell in 1..=self.class as u32 {
            let comp = t.letters_component(ell as usize);
            if comp.is_zero() {
                continue;
            }
            let local = layer.slices[(ell - 1) as usize].express(&comp)?;
            for (k, c) in local.into_iter().enumerate() {
                coords[layer.offsets[(ell - 1) as usize] + k] = c;
            }
        }
        Ok(coords)
    }
}

fn sparsify(coords: &[Q]) -> SparseVec {
    coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

fn add_scaled_sparse(acc: &mut BTreeMap<usize, Q>, scale: &Q, terms: &[(usize, Q)]) {
    for (k, c) in terms {
        let entry = acc.entry(*k).or_insert_with(Q::zero);
        *entry = &*entry + &(scale * c);
    }
}

fn is_zero_acc(acc: &BTreeMap<usize, Q>) -> bool {
    acc.values().all(Q::is_zero)
}

/// Builds the degree layers of `g_{n, class}` and extracts its exact
/// structure-constant tables. The returned tables are validated against the
/// crossed-complex axioms before they are handed out; the basis data allows
/// expressing further realizations in the same coordinates.
pub fn extract_structure_constants(
    n: u8,
    class: u8,
) -> Result<(NilpotentCrossedComplex, ComplexBasis), Error> {
    if n == 0 || n > MAX_N {
        return Err(Error::ResourceGuard(format!("n = {n} is outside 1..={MAX_N}")));
    }
    if class == 0 || class as usize > MAX_LETTERS {
        return Err(Error::ResourceGuard(format!(
            "class = {class} is outside 1..={MAX_LETTERS}"
        )));
    }
    // Degree -i is a quotient of spaces spanned by letters of arity i + 1
    // and brackets with them, so it vanishes from i = n on.
    let depth = n as usize;
    let mut layers = Vec::with_capacity(depth);
    for i in 0..depth {
        let mut slices = Vec::new();
        for ell in 1..=class as u32 {
            let slice = if i == 0 {
                full_slice(n, 0, ell)
            } else {
                semiabelianization_slice(n, -(i as i32), ell)?
            };
            slices.push(slice);
        }
        let mut offsets = Vec::with_capacity(slices.len());
        let mut exprs = Vec::new();
        let mut ell_of = Vec::new();
        let mut offset = 0usize;
        for slice in &slices {
            offsets.push(offset);
            for e in slice.basis() {
                exprs.push(e.clone());
                ell_of.push(slice.letters());
            }
            offset += slice.dim();
        }
        let mut gen_index = BTreeMap::new();
        for (k, e) in exprs.iter().enumerate() {
            if let LieExpr::Gen(l) = e {
                gen_index.insert(l.mask(), k);
            }
        }
        layers.push(DegreeLayer { slices, offsets, exprs, ell_of, gen_index, dim: offset });
    }
    for ell in 1..=class as u32 {
        let below = semiabelianization_slice(n, -(depth as i32), ell)?;
        if below.dim() != 0 {
            return Err(Error::Inconsistent(format!(
                "semiabelianization does not vanish in degree {} at weight {}",
                -(depth as i32),
                ell
            )));
        }
    }

    let dims: Vec<usize> = layers.iter().map(|l| l.dim).collect();
    let labels: Vec<Vec<String>> = layers
        .iter()
        .map(|l| l.exprs.iter().map(|e| e.to_string()).collect())
        .collect();
    for per_degree in &labels {
        let set: BTreeSet<&String> = per_degree.iter().collect();
        if set.len() != per_degree.len() {
            return Err(Error::Inconsistent("duplicate basis labels".into()));
        }
    }

    let mut bracket = Vec::with_capacity(depth);
    for (i, layer) in layers.iter().enumerate() {
        let mut table = vec![vec![SparseVec::new(); layer.dim]; layers[0].dim];
        for a in 0..layers[0].dim {
            for b in 0..layer.dim {
                let lsum = layers[0].ell_of[a] + layer.ell_of[b];
                if lsum > class as u32 {
                    continue;
                }
                let e = LieExpr::bracket(layers[0].exprs[a].clone(), layer.exprs[b].clone());
                let t = e.realize(n, lsum as u8)?;
                let local = layer.slices[(lsum - 1) as usize].express(&t)?;
                let off = layer.offsets[(lsum - 1) as usize];
                table[a][b] = sparsify(&local)
                    .into_iter()
                    .map(|(k, c)| (k + off, c))
                    .collect();
            }
        }
        bracket.push(table);
        let _ = i;
    }

    let mut diff_tables = Vec::with_capacity(depth.saturating_sub(1));
    for i in 1..depth {
        let mut rows = vec![SparseVec::new(); layers[i].dim];
        for (b, row) in rows.iter_mut().enumerate() {
            let ell = layers[i].ell_of[b];
            if ell + 1 > class as u32 {
                continue;
            }
            let t = differential(&layers[i].exprs[b].realize(n, (ell + 1) as u8)?)?;
            let local = layers[i - 1].slices[ell as usize].express(&t)?;
            let off = layers[i - 1].offsets[ell as usize];
            *row = sparsify(&local).into_iter().map(|(k, c)| (k + off, c)).collect();
        }
        diff_tables.push(rows);
    }

    // Brackets of two strictly negative elements must die in the quotient;
    // checking them through the degree -2 slices exercises the relation
    // spans against independently realized vectors.
    if depth >= 2 {
        let layer = &layers[1];
        for b1 in 0..layer.dim {
            for b2 in b1..layer.dim {
                let lsum = layer.ell_of[b1] + layer.ell_of[b2];
                if lsum > class as u32 {
                    continue;
                }
                let e = LieExpr::bracket(layer.exprs[b1].clone(), layer.exprs[b2].clone());
                let t = e.realize(n, lsum as u8)?;
                let target = semiabelianization_slice(n, -2, lsum)?;
                if target.express(&t)?.iter().any(|c| !c.is_zero()) {
                    return Err(Error::Inconsistent(format!(
                        "bracket of degree -1 classes {} and {} survives semiabelianization",
                        layer.exprs[b1], layer.exprs[b2]
                    )));
                }
            }
        }
    }

    let complex = NilpotentCrossedComplex {
        n,
        class,
        dims,
        labels,
        bracket,
        differential: diff_tables,
    };
    complex.validate()?;
    Ok((complex, ComplexBasis { n, class, layers }))
}

impl NilpotentCrossedComplex {
    /// Number of generators of the underlying algebra.
    pub fn n(&self) -> u8 {
        self.n
    }

    /// Nilpotency class (maximal letter weight).
    pub fn class(&self) -> u8 {
        self.class
    }

    /// Number of degrees, counting degree 0.
    pub fn depth(&self) -> usize {
        self.dims.len()
    }

    /// Dimension of degree `-i`.
    pub fn dim(&self, i: usize) -> usize {
        self.dims[i]
    }

    /// Basis labels of degree `-i`.
    pub fn labels(&self, i: usize) -> &[String] {
        &self.labels[i]
    }

    /// Sparse coordinates of the bracket of degree-0 basis element `a` with
    /// degree `-i` basis element `b`.
    pub fn bracket_terms(&self, i: usize, a: usize, b: usize) -> &[(usize, Q)] {
        &self.bracket[i][a][b]
    }

    /// Sparse coordinates of the differential of degree `-i` basis element
    /// `b`, for `i >= 1`.
    pub fn differential_terms(&self, i: usize, b: usize) -> &[(usize, Q)] {
        &self.differential[i - 1][b]
    }

    /// Dense bracket of a degree-0 vector with a degree `-i` vector.
    pub fn bracket_apply(&self, i: usize, u: &[Q], x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dims[i]];
        for (a, ua) in u.iter().enumerate() {
            if ua.is_zero() {
                continue;
            }
            for (b, xb) in x.iter().enumerate() {
                if xb.is_zero() {
                    continue;
                }
                let scale = ua * xb;
                for (k, c) in &self.bracket[i][a][b] {
                    out[*k] = &out[*k] + &(&scale * c);
                }
            }
        }
        out
    }

    /// Dense differential of a degree `-i` vector, for `i >= 1`.
    pub fn differential_apply(&self, i: usize, x: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dims[i - 1]];
        for (b, xb) in x.iter().enumerate() {
            if xb.is_zero() {
                continue;
            }
            for (k, c) in &self.differential[i - 1][b] {
                out[*k] = &out[*k] + &(xb * c);
            }
        }
        out
    }

    /// Checks every axiom the tables must satisfy by construction: index
    /// ranges, antisymmetry and the Jacobi identity in degree 0, the chain
    /// rule of the differential, its compatibility with brackets, the
    /// antisymmetry of the boundary pairing on degree -1, and triviality of
    /// the action of boundaries below degree -1. All checks are exact.
    pub fn validate(&self) -> Result<(), Error> {
        let depth = self.dims.len();
        if depth == 0 || self.labels.len() != depth || self.bracket.len() != depth {
            return Err(Error::Inconsistent("table shapes disagree with degree count".into()));
        }
        if self.differential.len() + 1 != depth {
            return Err(Error::Inconsistent("differential table count must be depth - 1".into()));
        }
        for i in 0..depth {
            if self.labels[i].len() != self.dims[i] {
                return Err(Error::Inconsistent(format!("label count mismatch in degree {i}")));
            }
            if self.bracket[i].len() != self.dims[0] {
                return Err(Error::Inconsistent(format!("bracket table rows mismatch in degree {i}")));
            }
            for row in &self.bracket[i] {
                if row.len() != self.dims[i] {
                    return Err(Error::Inconsistent(format!(
                        "bracket table columns mismatch in degree {i}"
                    )));
                }
                for entry in row {
                    for (k, _) in entry {
                        if *k >= self.dims[i] {
                            return Err(Error::Inconsistent(format!(
                                "bracket coordinate {k} out of range in degree {i}"
                            )));
                        }
                    }
                }
            }
        }
        for i in 1..depth {
            if self.differential[i - 1].len() != self.dims[i] {
                return Err(Error::Inconsistent(format!(
                    "differential table rows mismatch in degree {i}"
                )));
            }
            for row in &self.differential[i - 1] {
                for (k, _) in row {
                    if *k >= self.dims[i - 1] {
                        return Err(Error::Inconsistent(format!(
                            "differential coordinate {k} out of range in degree {i}"
                        )));
                    }
                }
            }
        }

        let d0 = self.dims[0];
        for a in 0..d0 {
            for b in 0..d0 {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                add_scaled_sparse(&mut acc, &Q::from_integer(1.into()), &self.bracket[0][a][b]);
                add_scaled_sparse(&mut acc, &Q::from_integer(1.into()), &self.bracket[0][b][a]);
                if !is_zero_acc(&acc) {
                    return Err(Error::Inconsistent(format!(
                        "degree-0 bracket is not antisymmetric at ({a}, {b})"
                    )));
                }
            }
        }
        for a in 0..d0 {
            for b in 0..d0 {
                for c in 0..d0 {
                    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                    for (k, lam) in &self.bracket[0][a][b] {
                        add_scaled_sparse(&mut acc, lam, &self.bracket[0][*k][c]);
                    }
                    for (k, lam) in &self.bracket[0][b][c] {
                        add_scaled_sparse(&mut acc, lam, &self.bracket[0][*k][a]);
                    }
                    for (k, lam) in &self.bracket[0][c][a] {
                        add_scaled_sparse(&mut acc, lam, &self.bracket[0][*k][b]);
                    }
                    if !is_zero_acc(&acc) {
                        return Err(Error::Inconsistent(format!(
                            "Jacobi identity fails in degree 0 at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }

        for i in 2..depth {
            for b in 0..self.dims[i] {
                let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                for (k, lam) in &self.differential[i - 1][b] {
                    add_scaled_sparse(&mut acc, lam, &self.differential[i - 2][*k]);
                }
                if !is_zero_acc(&acc) {
                    return Err(Error::Inconsistent(format!(
                        "differential does not square to zero on degree {} basis member {b}",
                        -(i as i32)
                    )));
                }
            }
        }

        for i in 1..depth {
            for a in 0..d0 {
                for b in 0..self.dims[i] {
                    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                    for (k, lam) in &self.bracket[i][a][b] {
                        add_scaled_sparse(&mut acc, lam, &self.differential[i - 1][*k]);
                    }
                    let minus = Q::from_integer((-1).into());
                    for (k, lam) in &self.differential[i - 1][b] {
                        add_scaled_sparse(&mut acc, &(&minus * lam), &self.bracket[i - 1][a][*k]);
                    }
                    if !is_zero_acc(&acc) {
                        return Err(Error::Inconsistent(format!(
                            "differential is not equivariant at degree {} pair ({a}, {b})",
                            -(i as i32)
                        )));
                    }
                }
            }
        }

        if depth >= 2 {
            // For odd x, y the derivation rule gives d[x, y] = [dx, y] + [dy, x],
            // and [x, y] dies in the quotient, so the pairing is antisymmetric.
            let d1 = self.dims[1];
            for x in 0..d1 {
                for y in 0..d1 {
                    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                    for (a, lam) in &self.differential[0][x] {
                        add_scaled_sparse(&mut acc, lam, &self.bracket[1][*a][y]);
                    }
                    for (a, lam) in &self.differential[0][y] {
                        add_scaled_sparse(&mut acc, lam, &self.bracket[1][*a][x]);
                    }
                    if !is_zero_acc(&acc) {
                        return Err(Error::Inconsistent(format!(
                            "boundary pairing on degree -1 is not antisymmetric at ({x}, {y})"
                        )));
                    }
                }
            }
        }

        for i in 2..depth {
            for y in 0..self.dims[1] {
                for x in 0..self.dims[i] {
                    let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
                    for (a, lam) in &self.differential[0][y] {
                        add_scaled_sparse(&mut acc, lam, &self.bracket[i][*a][x]);
                    }
                    if !is_zero_acc(&acc) {
                        return Err(Error::Inconsistent(format!(
                            "boundaries act nontrivially on degree {} at ({y}, {x})",
                            -(i as i32)
                        )));
                    }
                }
            }
        }

        Ok(())
    }

    /// Interchange representation with exact rational coefficients.
    pub fn to_dto(&self) -> CrossedComplexDto {
        let degrees = (0..self.dims.len())
            .map(|i| DegreeDto {
                i: -(i as i32),
                dim: self.dims[i],
                labels: self.labels[i].clone(),
            })
            .collect();
        let bracket = (0..self.dims.len())
            .map(|i| {
                let mut entries = Vec::new();
                for a in 0..self.dims[0] {
                    for b in 0..self.dims[i] {
                        if self.bracket[i][a][b].is_empty() {
                            continue;
                        }
                        entries.push(BracketEntryDto {
                            a,
                            b,
                            terms: self.bracket[i][a][b]
                                .iter()
                                .map(|(k, c)| CoeffDto { k: *k, c: format_q(c) })
                                .collect(),
                        });
                    }
                }
                BracketTableDto { degree: -(i as i32), entries }
            })
            .collect();
        let differential = (1..self.dims.len())
            .map(|i| DifferentialTableDto {
                degree: -(i as i32),
                rows: self.differential[i - 1]
                    .iter()
                    .map(|row| row.iter().map(|(k, c)| CoeffDto { k: *k, c: format_q(c) }).collect())
                    .collect(),
            })
            .collect();
        CrossedComplexDto {
            n: self.n,
            class: self.class,
            degrees,
            bracket,
            differential,
        }
    }

    /// Rebuilds tables from the interchange representation and re-validates
    /// every axiom, so a corrupted file cannot produce a usable complex.
    pub fn from_dto(dto: &CrossedComplexDto) -> Result<Self, Error> {
        let depth = dto.degrees.len();
        if depth == 0 {
            return Err(Error::Serde("complex with no degrees".into()));
        }
        let mut dims = Vec::with_capacity(depth);
        let mut labels = Vec::with_capacity(depth);
        for (i, deg) in dto.degrees.iter().enumerate() {
            if deg.i != -(i as i32) {
                return Err(Error::Serde(format!(
                    "degrees must be listed as 0, -1, ...; found {} at position {i}",
                    deg.i
                )));
            }
            dims.push(deg.dim);
            labels.push(deg.labels.clone());
        }
        if dto.bracket.len() != depth || dto.differential.len() + 1 != depth {
            return Err(Error::Serde("bracket/differential table count mismatch".into()));
        }
        let mut bracket = Vec::with_capacity(depth);
        for (i, table) in dto.bracket.iter().enumerate() {
            if table.degree != -(i as i32) {
                return Err(Error::Serde(format!("bracket table degree {} out of order", table.degree)));
            }
            let mut dense = vec![vec![SparseVec::new(); dims[i]]; dims[0]];
            for entry in &table.entries {
                if entry.a >= dims[0] || entry.b >= dims[i] {
                    return Err(Error::Serde(format!(
                        "bracket entry ({}, {}) out of range in degree {}",
                        entry.a, entry.b, table.degree
                    )));
                }
                let mut terms = SparseVec::new();
                for t in &entry.terms {
                    terms.push((t.k, parse_q(&t.c)?));
                }
                dense[entry.a][entry.b] = terms;
            }
            bracket.push(dense);
        }
        let mut differential = Vec::with_capacity(depth - 1);
        for (j, table) in dto.differential.iter().enumerate() {
            let i = j + 1;
            if table.degree != -(i as i32) {
                return Err(Error::Serde(format!(
                    "differential table degree {} out of order",
                    table.degree
                )));
            }
            if table.rows.len() != dims[i] {
                return Err(Error::Serde(format!(
                    "differential table in degree {} has {} rows, expected {}",
                    table.degree,
                    table.rows.len(),
                    dims[i]
                )));
            }
            let mut rows = Vec::with_capacity(dims[i]);
            for row in &table.rows {
                let mut terms = SparseVec::new();
                for t in row {
                    terms.push((t.k, parse_q(&t.c)?));
                }
                rows.push(terms);
            }
            differential.push(rows);
        }
        let complex = NilpotentCrossedComplex {
            n: dto.n,
            class: dto.class,
            dims,
            labels,
            bracket,
            differential,
        };
        complex.validate()?;
        Ok(complex)
    }

    /// Serializes to pretty JSON.
    pub fn to_json(&self) -> Result<String, Error> {
        serde_json::to_string_pretty(&self.to_dto()).map_err(Error::from)
    }

    /// Deserializes from JSON and re-validates.
    pub fn from_json(s: &str) -> Result<Self, Error> {
        let dto: CrossedComplexDto = serde_json::from_str(s)?;
        Self::from_dto(&dto)
    }
}

/// One coefficient of a sparse coordinate vector, with the rational as an
/// exact string.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffDto {
    pub k: usize,
    pub c: String,
}

/// Dimension and basis labels of one degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegreeDto {
    pub i: i32,
    pub dim: usize,
    pub labels: Vec<String>,
}

/// One nonzero bracket table entry.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketEntryDto {
    pub a: usize,
    pub b: usize,
    pub terms: Vec<CoeffDto>,
}

/// Bracket table of one degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BracketTableDto {
    pub degree: i32,
    pub entries: Vec<BracketEntryDto>,
}

/// Differential table out of one degree.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DifferentialTableDto {
    pub degree: i32,
    pub rows: Vec<Vec<CoeffDto>>,
}

/// Serialized form of a nilpotent crossed complex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossedComplexDto {
    pub n: u8,
    pub class: u8,
    pub degrees: Vec<DegreeDto>,
    pub bracket: Vec<BracketTableDto>,
    pub differential: Vec<DifferentialTableDto>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::{gamma_closed_dimension, gamma_dimension, schur_dimension};
    use crate::lie::{cohomology_dimension, right_normed};
    use crate::scalar::qi;
    use crate::word::Letter;

    fn letter(indices: &[u8]) -> Letter {
        Letter::new(indices, MAX_N).unwrap()
    }

    #[test]
    fn degree_zero_slices_are_identity_quotients() {
        for n in 1..=3u8 {
            for ell in 1..=4u32 {
                let s = semiabelianization_slice(n, 0, ell).unwrap();
                assert_eq!(s.dim(), bigraded_dimension(n, 0, ell));
                assert_eq!(s.relation_rank(), 0);
            }
        }
    }

    #[test]
    fn semiabelianization_kills_brackets_of_arity_two_letters() {
        // At degree -2 and two letters the ambient slice is spanned by
        // brackets of two pair letters and by single letters against triple
        // letters; only the former are relations.
        let s = semiabelianization_slice(3, -2, 2).unwrap();
        assert_eq!(s.ambient_dim(), 9);
        assert_eq!(s.relation_rank(), 6);
        assert_eq!(s.dim(), 3);
        for e in s.basis() {
            let letters = e.letters();
            assert!(letters.iter().any(|l| l.arity() == 3));
        }
    }

    #[test]
    fn semiabelianization_relation_from_differential_of_self_bracket() {
        // d[Z12, Z12] is a relation with three letters; it is the first
        // relation for n = 2 in degree -1.
        let s2 = semiabelianization_slice(2, -1, 2).unwrap();
        assert_eq!(s2.relation_rank(), 0);
        assert_eq!(s2.dim(), 2);
        let s3 = semiabelianization_slice(2, -1, 3).unwrap();
        assert_eq!(s3.relation_rank(), 1);
        assert_eq!(s3.ambient_dim(), 4);
        assert_eq!(s3.dim(), 3);
    }

    #[test]
    fn abelianized_commutant_matches_hook_schur_dimensions() {
        for n in 2..=3u8 {
            for ell in 2..=5u32 {
                let s = abelianization_slice(n, 0, ell).unwrap();
                assert_eq!(
                    s.dim(),
                    schur_dimension(&[(ell - 1) as usize, 1], n),
                    "n = {n}, ell = {ell}"
                );
            }
        }
        assert_eq!(abelianization_slice(2, 0, 3).unwrap().dim(), 2);
        assert_eq!(abelianization_slice(2, 0, 1).unwrap().dim(), 0);
    }

    #[test]
    fn abelianized_commutant_matches_closed_current_counts() {
        // The same column counted through boundaries of two-index currents.
        for n in 2..=3u8 {
            for ell in 2..=5u32 {
                let s = abelianization_slice(n, 0, ell).unwrap();
                assert_eq!(s.dim(), gamma_closed_dimension(n, 1, ell - 2), "n = {n}, ell = {ell}");
            }
        }
    }

    #[test]
    fn abelianization_matches_current_space_dimensions() {
        for n in 2..=3u8 {
            for i in 1..=(n as u32 - 1) {
                for ell in 1..=4u32 {
                    let s = abelianization_slice(n, -(i as i32), ell).unwrap();
                    assert_eq!(
                        s.dim(),
                        gamma_dimension(n, (i + 1) as u8, ell - 1),
                        "n = {n}, i = {i}, ell = {ell}"
                    );
                }
            }
        }
    }

    #[test]
    fn semiabelianization_agrees_with_abelianization_below_degree_minus_one() {
        for n in 2..=3u8 {
            for ell in 1..=3u32 {
                let sab = semiabelianization_slice(n, -2, ell).unwrap();
                let ab = abelianization_slice(n, -2, ell).unwrap();
                assert_eq!(sab.dim(), ab.dim(), "n = {n}, ell = {ell}");
            }
        }
    }

    #[test]
    fn degree_minus_one_splits_as_closed_currents_plus_commutant() {
        for n in 2..=3u8 {
            for ell in 1..=3u32 {
                let sab = semiabelianization_slice(n, -1, ell).unwrap();
                let kernel =
                    gamma_dimension(n, 2, ell - 1) - gamma_closed_dimension(n, 1, ell - 1);
                let commutant = bigraded_dimension(n, 0, ell + 1);
                assert_eq!(sab.dim(), kernel + commutant, "n = {n}, ell = {ell}");
            }
        }
    }

    #[test]
    fn crossed_module_cohomology_in_degree_zero() {
        for n in 1..=3u8 {
            assert_eq!(h0_dimension(n, 1), n as usize);
            for ell in 2..=4u32 {
                assert_eq!(h0_dimension(n, ell), 0, "n = {n}, ell = {ell}");
            }
        }
    }

    #[test]
    fn crossed_module_cohomology_in_degree_minus_one() {
        for n in 2..=3u8 {
            assert_eq!(h_minus1_dimension(n, 1).unwrap(), 0);
            for ell in 2..=4u32 {
                assert_eq!(
                    h_minus1_dimension(n, ell).unwrap(),
                    gamma_closed_dimension(n, 2, ell - 2),
                    "n = {n}, ell = {ell}"
                );
            }
        }
    }

    #[test]
    fn semiabelian_kernels_match_closed_current_counts() {
        for n in 2..=3u8 {
            for m in 1..=2u32 {
                assert_eq!(semiabelian_kernel_dimension(n, m, 1).unwrap(), 0);
                for ell in 2..=3u32 {
                    assert_eq!(
                        semiabelian_kernel_dimension(n, m, ell).unwrap(),
                        gamma_closed_dimension(n, (m + 1) as u8, ell - 2),
                        "n = {n}, m = {m}, ell = {ell}"
                    );
                }
            }
        }
    }

    #[test]
    fn semiabelianization_preserves_cohomology() {
        let n = 2u8;
        for i in -2..=0i32 {
            for ell in 1..=4u32 {
                let here = semiabelianization_slice(n, i, ell).unwrap();
                let out_rank = if i < 0 {
                    let out = semiabelianization_slice(n, i + 1, ell + 1).unwrap();
                    induced_differential_rank(&here, &out).unwrap()
                } else {
                    0
                };
                let in_rank = if ell >= 2 {
                    let prev = semiabelianization_slice(n, i - 1, ell - 1).unwrap();
                    induced_differential_rank(&prev, &here).unwrap()
                } else {
                    0
                };
                assert_eq!(
                    here.dim() - out_rank - in_rank,
                    cohomology_dimension(n, i, ell),
                    "i = {i}, ell = {ell}"
                );
            }
        }
    }

    #[test]
    fn lower_central_series_follows_the_letter_grading() {
        for (n, r, i, ell) in [
            (2u8, 2u32, 0i32, 1u32),
            (2, 2, 0, 2),
            (2, 2, 0, 3),
            (2, 2, -1, 2),
            (2, 2, -1, 3),
            (2, 3, 0, 2),
            (2, 3, 0, 3),
            (2, 3, -1, 3),
            (3, 2, -1, 2),
            (3, 2, -2, 2),
            (3, 3, 0, 3),
        ] {
            assert_eq!(
                lcs_slice_rank(n, r, i, ell).unwrap(),
                lcs_letter_grading_dimension(n, r, i, ell),
                "n = {n}, r = {r}, i = {i}, ell = {ell}"
            );
        }
    }

    #[test]
    fn monomials_on_high_arity_letters_are_symmetric_in_the_single_indices() {
        // Residue classes of [Z_a, [Z_b, Z_J]] with |J| >= 3 are unchanged
        // under swapping the single-index letters.
        let z123 = letter(&[1, 2, 3]);
        let slice = semiabelianization_slice(3, -2, 3).unwrap();
        for (a, b) in [(1u8, 2u8), (1, 3), (2, 3)] {
            let za = letter(&[a]);
            let zb = letter(&[b]);
            let lhs = right_normed(&[za, zb, z123]).realize(3, 3).unwrap();
            let rhs = right_normed(&[zb, za, z123]).realize(3, 3).unwrap();
            assert_eq!(slice.express(&lhs).unwrap(), slice.express(&rhs).unwrap());
        }
        let slice4 = semiabelianization_slice(3, -2, 4).unwrap();
        let z1 = letter(&[1]);
        let z2 = letter(&[2]);
        let z3 = letter(&[3]);
        let lhs = right_normed(&[z1, z2, z3, z123]).realize(3, 4).unwrap();
        let rhs = right_normed(&[z2, z1, z3, z123]).realize(3, 4).unwrap();
        assert_eq!(slice4.express(&lhs).unwrap(), slice4.express(&rhs).unwrap());
    }

    #[test]
    fn extraction_of_the_two_generator_class_two_complex() {
        let (complex, basis) = extract_structure_constants(2, 2).unwrap();
        assert_eq!(complex.depth(), 2);
        assert_eq!(complex.dim(0), 3);
        assert_eq!(complex.dim(1), 3);
        assert_eq!(complex.labels(0), &["Z1", "Z2", "[Z1,Z2]"]);
        assert_eq!(complex.labels(1), &["Z12", "[Z1,Z12]", "[Z12,Z2]"]);

        // d(Z12) = [Z1, Z2].
        let z12 = basis.generator_coordinate(1, 0b11).unwrap();
        assert_eq!(complex.differential_terms(1, z12), &[(2, qi(1))]);

        // [Z1, Z2] = third basis member; higher products die at class 2.
        assert_eq!(complex.bracket_terms(0, 0, 1), &[(2, qi(1))]);
        assert_eq!(complex.bracket_terms(0, 2, 0), &[]);

        // [Z1, Z12] and [Z2, Z12] = -[Z12, Z2] fill out degree -1.
        assert_eq!(complex.bracket_terms(1, 0, 0), &[(1, qi(1))]);
        assert_eq!(complex.bracket_terms(1, 1, 0), &[(2, qi(-1))]);
    }

    #[test]
    fn extraction_validates_and_round_trips_through_json() {
        let (complex, _) = extract_structure_constants(2, 3).unwrap();
        let json = complex.to_json().unwrap();
        let back = NilpotentCrossedComplex::from_json(&json).unwrap();
        assert_eq!(complex, back);
    }

    #[test]
    fn corrupted_tables_are_rejected_on_import() {
        let (complex, _) = extract_structure_constants(2, 3).unwrap();
        let mut dto = complex.to_dto();
        for row in &mut dto.differential[0].rows {
            for t in row.iter_mut() {
                t.c = format!("2{}", t.c.trim_start_matches('-'));
            }
        }
        match NilpotentCrossedComplex::from_dto(&dto) {
            Err(Error::Inconsistent(_)) => {}
            other => panic!("corrupted differential accepted: {other:?}"),
        }
    }

    #[test]
    fn expressing_realizations_in_complex_coordinates() {
        let (complex, basis) = extract_structure_constants(2, 3).unwrap();
        // [Z1, [Z1, Z2]] realized as a tensor and expressed in coordinates
        // must match the bracket table applied to unit vectors.
        let z1 = letter(&[1]);
        let z2 = letter(&[2]);
        let e = LieExpr::bracket(
            LieExpr::Gen(z1),
            LieExpr::bracket(LieExpr::Gen(z1), LieExpr::Gen(z2)),
        );
        let coords = basis.express(0, &e.realize(2, 3).unwrap()).unwrap();
        let mut x = vec![Q::zero(); complex.dim(0)];
        x[basis.generator_coordinate(0, 0b01).unwrap()] = qi(1);
        let mut y = vec![Q::zero(); complex.dim(0)];
        let inner = complex.bracket_apply(
            0,
            &x,
            &{
                let mut v = vec![Q::zero(); complex.dim(0)];
                v[basis.generator_coordinate(0, 0b10).unwrap()] = qi(1);
                v
            },
        );
        y.clone_from(&inner);
        let outer = complex.bracket_apply(0, &x, &y);
        assert_eq!(coords, outer);
    }
}
