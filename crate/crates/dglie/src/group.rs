//! Exponentiation of a nilpotent crossed complex to a crossed complex of
//! groups, and the composition calculus of the strict n-category with one
//! object that the groups assemble into.
//!
//! Elements are stored as exact log-coordinate vectors. Degree 0 multiplies
//! through the BCH series of the degree-0 bracket, degree -1 through the BCH
//! series of the derived bracket `[x, y] = [dx, y]`, and degrees below -1
//! are abelian, so multiplication there is coordinate addition. The BCH
//! expansion is computed once per letter cutoff in the rank-two tensor
//! algebra and cached; substituting any bracket whose iterated values
//! vanish beyond the cutoff keeps the evaluation exact.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num::traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::lie::block_basis;
use crate::quotient::NilpotentCrossedComplex;
use crate::scalar::{format_q, parse_q, qr, Q};
use crate::tensor::Tensor;
use crate::word::Letter;

/// One summand of the universal BCH expansion: an exact coefficient and a
/// right-normed bracket word over the two arguments, 0 selecting the left
/// argument and 1 the right.
type BchTerm = (Q, Vec<u8>);

static BCH_SERIES: OnceLock<Mutex<HashMap<u8, Arc<Vec<BchTerm>>>>> = OnceLock::new();

/// Universal expansion of `log(exp x * exp y)` with brackets of up to
/// `class` factors, expanded over right-normed monomials. Substitution is
/// exact for every Lie bracket whose (class + 1)-fold iterates vanish.
fn bch_series(class: u8) -> Arc<Vec<BchTerm>> {
    let cache = BCH_SERIES.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("BCH cache lock");
    if let Some(hit) = guard.get(&class) {
        return hit.clone();
    }
    let l1 = Letter::single(1);
    let l2 = Letter::single(2);
    let x = Tensor::generator(2, class, l1).expect("rank-two generator");
    let y = Tensor::generator(2, class, l2).expect("rank-two generator");
    let product = x
        .exp()
        .expect("generators exponentiate")
        .mul(&y.exp().expect("generators exponentiate"))
        .expect("matching configurations");
    let log = product.log().expect("group-like tensors have logarithms");
    let mut terms: Vec<BchTerm> = Vec::new();
    for ell in 1..=class as usize {
        let component = log.letters_component(ell);
        let mut buckets: BTreeMap<usize, Vec<(crate::word::Word, Q)>> = BTreeMap::new();
        for (w, c) in component.terms() {
            let ones = w.iter().filter(|l| *l == l1).count();
            buckets.entry(ones).or_default().push((*w, c.clone()));
        }
        for (ones, bucket) in buckets {
            let mut multiset = vec![l1; ones];
            multiset.extend(vec![l2; ell - ones]);
            let (words, span, seqs) = block_basis(&multiset);
            let t = Tensor::from_terms(2, class, bucket).expect("terms fit the cutoff");
            let v = words.vectorize(&t).expect("log terms stay in their block");
            let coords = span
                .express(&v)
                .expect("the logarithm of a group-like tensor is a Lie element");
            for (k, c) in coords.iter().enumerate() {
                if !c.is_zero() {
                    let seq = seqs[k]
                        .iter()
                        .map(|l| if *l == l1 { 0u8 } else { 1u8 })
                        .collect();
                    terms.push((c.clone(), seq));
                }
            }
        }
    }
    let arc = Arc::new(terms);
    guard.insert(class, arc.clone());
    arc
}

/// The cached BCH expansion with coefficients converted to doubles, for
/// quadrature loops that mirror the exact group operations.
pub(crate) fn bch_series_f64(class: u8) -> Vec<(f64, Vec<u8>)> {
    bch_series(class)
        .iter()
        .map(|(c, seq)| (crate::scalar::q_to_f64(c), seq.clone()))
        .collect()
}

/// Evaluates a cached BCH expansion on two coordinate vectors against a
/// bilinear bracket. Terms whose iterated bracket vanishes contribute
/// nothing, so one expansion serves every degree.
fn eval_series<F>(terms: &[BchTerm], dim: usize, x: &[Q], y: &[Q], bracket: F) -> Vec<Q>
where
    F: Fn(&[Q], &[Q]) -> Vec<Q>,
{
    let args = [x, y];
    let mut acc = vec![Q::zero(); dim];
    for (coeff, seq) in terms {
        let mut v = args[seq[seq.len() - 1] as usize].to_vec();
        for sel in seq[..seq.len() - 1].iter().rev() {
            if v.iter().all(|c| c.is_zero()) {
                break;
            }
            v = bracket(args[*sel as usize], &v);
        }
        for (a, c) in acc.iter_mut().zip(v.iter()) {
            if !c.is_zero() {
                *a = &*a + &(coeff * c);
            }
        }
    }
    acc
}

/// An element of one group of the exponentiated complex, stored as the
/// exact log-coordinate vector in the basis of its degree. The identity is
/// the zero vector and inversion is negation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    degree: i32,
    coords: Vec<Q>,
}

impl GroupElement {
    /// Degree of the group the element lives in, 0 or negative.
    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Exact log-coordinates in the basis of the degree.
    pub fn coords(&self) -> &[Q] {
        &self.coords
    }

    /// Whether the element is the identity of its group.
    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Serializable form with exact rational strings.
    pub fn to_dto(&self) -> GroupElementDto {
        GroupElementDto {
            degree: self.degree,
            coords: self.coords.iter().map(format_q).collect(),
        }
    }

    /// Rebuilds an element from its serialized form. Coordinate length is
    /// checked against the complex on first use, not here.
    pub fn from_dto(dto: &GroupElementDto) -> Result<Self, Error> {
        if dto.degree > 0 {
            return Err(Error::Degree(format!(
                "no group sits in degree {}",
                dto.degree
            )));
        }
        let coords = dto
            .coords
            .iter()
            .map(|s| parse_q(s))
            .collect::<Result<Vec<Q>, Error>>()?;
        Ok(GroupElement {
            degree: dto.degree,
            coords,
        })
    }

    /// JSON form of `to_dto`.
    pub fn to_json(&self) -> Result<String, Error> {
        Ok(serde_json::to_string_pretty(&self.to_dto())?)
    }

    /// Inverse of `to_json`.
    pub fn from_json(s: &str) -> Result<Self, Error> {
        let dto: GroupElementDto = serde_json::from_str(s)?;
        Self::from_dto(&dto)
    }
}

/// Serialized group element: degree and exact rational coordinates.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GroupElementDto {
    pub degree: i32,
    pub coords: Vec<String>,
}

/// An m-morphism of the one-object n-category built on the group complex:
/// a tuple of group elements in degrees -m+1 through 0, deepest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphism {
    comps: Vec<GroupElement>,
}

impl PMorphism {
    /// The dimension m of the cell.
    pub fn level(&self) -> usize {
        self.comps.len()
    }

    /// All components, the degree `-m+1` component first.
    pub fn components(&self) -> &[GroupElement] {
        &self.comps
    }

    /// Component `k` counted from the deepest degree.
    pub fn component(&self, k: usize) -> &GroupElement {
        &self.comps[k]
    }

    /// The degree-0 component.
    pub fn edge(&self) -> &GroupElement {
        &self.comps[self.comps.len() - 1]
    }
}

/// A nilpotent crossed complex exponentiated to a crossed complex of
/// groups. Tables are immutable after construction and every operation is
/// pure, so values can be shared freely across threads.
#[derive(Clone, Debug)]
pub struct GroupComplex {
    cc: Arc<NilpotentCrossedComplex>,
    bch: Arc<Vec<BchTerm>>,
}

impl GroupComplex {
    /// Wraps validated structure-constant tables for group computation.
    pub fn new(cc: NilpotentCrossedComplex) -> Self {
        let bch = bch_series(cc.class());
        GroupComplex {
            cc: Arc::new(cc),
            bch,
        }
    }

    /// The underlying structure-constant tables.
    pub fn complex(&self) -> &NilpotentCrossedComplex {
        &self.cc
    }

    /// Number of degrees carrying a group.
    pub fn depth(&self) -> usize {
        self.cc.depth()
    }

    fn level_of(&self, degree: i32) -> Result<usize, Error> {
        if degree > 0 || (-degree) as usize >= self.cc.depth() {
            return Err(Error::Degree(format!("no group sits in degree {degree}")));
        }
        Ok((-degree) as usize)
    }

    fn check_coords(&self, x: &GroupElement) -> Result<usize, Error> {
        let i = self.level_of(x.degree)?;
        if x.coords.len() != self.cc.dim(i) {
            return Err(Error::Dimension(format!(
                "degree {} carries {} coordinates, got {}",
                x.degree,
                self.cc.dim(i),
                x.coords.len()
            )));
        }
        Ok(i)
    }

    /// The identity of the degree `degree` group.
    pub fn identity(&self, degree: i32) -> Result<GroupElement, Error> {
        let i = self.level_of(degree)?;
        Ok(GroupElement {
            degree,
            coords: vec![Q::zero(); self.cc.dim(i)],
        })
    }

    /// Wraps log-coordinates as a group element of the given degree.
    pub fn element(&self, degree: i32, coords: Vec<Q>) -> Result<GroupElement, Error> {
        let out = GroupElement { degree, coords };
        self.check_coords(&out)?;
        Ok(out)
    }

    /// The group law of the degree of `x` and `y`.
    pub fn mul(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement, Error> {
        if x.degree != y.degree {
            return Err(Error::Degree(format!(
                "cannot multiply degrees {} and {}",
                x.degree, y.degree
            )));
        }
        let i = self.check_coords(x)?;
        self.check_coords(y)?;
        let dim = self.cc.dim(i);
        let coords = match i {
            0 => eval_series(&self.bch, dim, &x.coords, &y.coords, |a, b| {
                self.cc.bracket_apply(0, a, b)
            }),
            1 => eval_series(&self.bch, dim, &x.coords, &y.coords, |a, b| {
                self.cc.bracket_apply(1, &self.cc.differential_apply(1, a), b)
            }),
            _ => x
                .coords
                .iter()
                .zip(y.coords.iter())
                .map(|(a, b)| a + b)
                .collect(),
        };
        Ok(GroupElement {
            degree: x.degree,
            coords,
        })
    }

    /// The group inverse, which is negation of log-coordinates.
    pub fn inv(&self, x: &GroupElement) -> GroupElement {
        GroupElement {
            degree: x.degree,
            coords: x.coords.iter().map(|c| -c).collect(),
        }
    }

    /// The boundary homomorphism into the next degree up.
    pub fn boundary(&self, x: &GroupElement) -> Result<GroupElement, Error> {
        let i = self.check_coords(x)?;
        if i == 0 {
            return Err(Error::Degree("degree 0 has no boundary".into()));
        }
        Ok(GroupElement {
            degree: x.degree + 1,
            coords: self.cc.differential_apply(i, &x.coords),
        })
    }

    /// The action of a degree-0 element on any degree, as the exponential
    /// of the adjoint operator of its logarithm.
    pub fn act(&self, u: &GroupElement, x: &GroupElement) -> Result<GroupElement, Error> {
        if u.degree != 0 {
            return Err(Error::Degree(format!(
                "only degree 0 acts, got degree {}",
                u.degree
            )));
        }
        self.check_coords(u)?;
        let i = self.check_coords(x)?;
        let mut acc = x.coords.clone();
        let mut term = x.coords.clone();
        for k in 1..=self.cc.class() as usize {
            let scale = qr(1, k as i64);
            term = self
                .cc
                .bracket_apply(i, &u.coords, &term)
                .iter()
                .map(|c| c * &scale)
                .collect();
            if term.iter().all(|c| c.is_zero()) {
                break;
            }
            for (a, c) in acc.iter_mut().zip(term.iter()) {
                *a = &*a + c;
            }
        }
        Ok(GroupElement {
            degree: x.degree,
            coords: acc,
        })
    }

    /// Assembles components into an m-morphism, checking degrees and
    /// coordinate lengths.
    pub fn morphism(&self, comps: Vec<GroupElement>) -> Result<PMorphism, Error> {
        let m = comps.len();
        if m == 0 || m > self.cc.depth() {
            return Err(Error::Dimension(format!(
                "a cell carries between 1 and {} components, got {m}",
                self.cc.depth()
            )));
        }
        for (k, g) in comps.iter().enumerate() {
            let want = -((m - 1 - k) as i32);
            if g.degree != want {
                return Err(Error::Degree(format!(
                    "component {k} of a {m}-morphism must have degree {want}, got {}",
                    g.degree
                )));
            }
            self.check_coords(g)?;
        }
        Ok(PMorphism { comps })
    }

    /// The m-morphism with every component the identity.
    pub fn identity_morphism(&self, m: usize) -> Result<PMorphism, Error> {
        let comps = (0..m)
            .map(|k| self.identity(-((m - 1 - k) as i32)))
            .collect::<Result<Vec<_>, Error>>()?;
        self.morphism(comps)
    }

    /// The source of an m-morphism, for m at least 2: the tuple with the
    /// deepest component dropped.
    pub fn source(&self, x: &PMorphism) -> Result<PMorphism, Error> {
        if x.level() < 2 {
            return Err(Error::Degree(
                "a 1-morphism bounds only the unique object".into(),
            ));
        }
        Ok(PMorphism {
            comps: x.comps[1..].to_vec(),
        })
    }

    /// The target of an m-morphism, for m at least 2: the source with its
    /// deepest component multiplied by the boundary of the dropped one.
    pub fn target(&self, x: &PMorphism) -> Result<PMorphism, Error> {
        if x.level() < 2 {
            return Err(Error::Degree(
                "a 1-morphism bounds only the unique object".into(),
            ));
        }
        let mut comps = x.comps[1..].to_vec();
        comps[0] = self.mul(&x.comps[1], &self.boundary(&x.comps[0])?)?;
        Ok(PMorphism { comps })
    }

    /// The iterated source at level `i`, for `1 <= i < m`.
    pub fn source_at(&self, x: &PMorphism, i: usize) -> Result<PMorphism, Error> {
        if i == 0 || i >= x.level() {
            return Err(Error::Degree(format!(
                "no level-{i} boundary of a {}-morphism",
                x.level()
            )));
        }
        Ok(PMorphism {
            comps: x.comps[x.level() - i..].to_vec(),
        })
    }

    /// The iterated target at level `i`, for `1 <= i < m`.
    pub fn target_at(&self, x: &PMorphism, i: usize) -> Result<PMorphism, Error> {
        let mut out = x.clone();
        if i == 0 || i >= out.level() {
            return Err(Error::Degree(format!(
                "no level-{i} boundary of a {}-morphism",
                out.level()
            )));
        }
        while out.level() > i {
            out = self.target(&out)?;
        }
        Ok(out)
    }

    /// The degenerate (m+1)-morphism on an m-morphism: the identity of the
    /// next degree prepended.
    pub fn unit(&self, x: &PMorphism) -> Result<PMorphism, Error> {
        let m = x.level();
        if m >= self.cc.depth() {
            return Err(Error::Dimension(format!(
                "the complex has depth {}, cannot lift a {m}-morphism",
                self.cc.depth()
            )));
        }
        let mut comps = Vec::with_capacity(m + 1);
        comps.push(self.identity(-(m as i32))?);
        comps.extend(x.comps.iter().cloned());
        Ok(PMorphism { comps })
    }

    /// Iterated units lifting a cell to level `m`.
    pub fn unit_to(&self, x: &PMorphism, m: usize) -> Result<PMorphism, Error> {
        let mut out = x.clone();
        while out.level() < m {
            out = self.unit(&out)?;
        }
        if out.level() != m {
            return Err(Error::Dimension(format!(
                "cannot lower a {}-morphism to level {m}",
                out.level()
            )));
        }
        Ok(out)
    }

    /// The degree-0 component of the level-1 target: the 1-morphism every
    /// component of the cell composes down to.
    fn terminal_edge(&self, x: &PMorphism) -> Result<GroupElement, Error> {
        let m = x.level();
        if m == 1 {
            return Ok(x.comps[0].clone());
        }
        self.mul(&x.comps[m - 1], &self.boundary(&x.comps[m - 2])?)
    }

    /// The group law on m-morphisms: `x` composed after `y` along the
    /// unique object. Negative components of `x` are transported by the
    /// inverse of the terminal edge of `y` and multiply from the right;
    /// degree-0 components multiply as `x0 * y0`.
    fn product(&self, x: &PMorphism, y: &PMorphism) -> Result<PMorphism, Error> {
        let m = x.level();
        if y.level() != m {
            return Err(Error::NotComposable(format!(
                "levels {m} and {} differ",
                y.level()
            )));
        }
        let mut comps = Vec::with_capacity(m);
        if m >= 2 {
            let shift = self.inv(&self.terminal_edge(y)?);
            for k in 0..m - 1 {
                let carried = self.act(&shift, &x.comps[k])?;
                comps.push(self.mul(&y.comps[k], &carried)?);
            }
        }
        comps.push(self.mul(&x.comps[m - 1], &y.comps[m - 1])?);
        Ok(PMorphism { comps })
    }

    /// The inverse for the level-0 composition.
    pub fn cell_inverse(&self, x: &PMorphism) -> Result<PMorphism, Error> {
        let m = x.level();
        let mut comps = Vec::with_capacity(m);
        if m >= 2 {
            let shift = self.terminal_edge(x)?;
            for k in 0..m - 1 {
                comps.push(self.act(&shift, &self.inv(&x.comps[k]))?);
            }
        }
        comps.push(self.inv(&x.comps[m - 1]));
        Ok(PMorphism { comps })
    }

    /// Composition of two m-morphisms along their level-`i` boundary,
    /// requiring the level-`i` source of `x` to equal the level-`i` target
    /// of `y` exactly. Compositions above level 0 factor through the group
    /// law as `x * unit(source)^{-1} * y`.
    pub fn compose(&self, x: &PMorphism, y: &PMorphism, i: usize) -> Result<PMorphism, Error> {
        let m = x.level();
        if y.level() != m {
            return Err(Error::NotComposable(format!(
                "levels {m} and {} differ",
                y.level()
            )));
        }
        if i >= m {
            return Err(Error::NotComposable(format!(
                "no level-{i} composition of {m}-morphisms"
            )));
        }
        if i == 0 {
            return self.product(x, y);
        }
        let sx = self.source_at(x, i)?;
        if sx != self.target_at(y, i)? {
            return Err(Error::NotComposable(format!(
                "boundaries at level {i} differ"
            )));
        }
        let mid = self.cell_inverse(&self.unit_to(&sx, m)?)?;
        self.product(&self.product(x, &mid)?, y)
    }
}
