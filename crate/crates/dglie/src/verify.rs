//! Verification suites behind the command line and the integration tests:
//! exact algebraic identities, sampled group and category laws, and numeric
//! holonomy residuals.
//!
//! Each check runs one named property at a configurable scale and reports
//! pass or fail with a one-line detail, plus the measured residual and the
//! tolerance when the property is numeric. The suites bundle the checks at
//! the scales the command line exposes; integration tests call the same
//! functions at their own scales.

use num::traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::connection::universal_connection;
use crate::error::Error;
use crate::forms::{gamma_closed_dimension, gamma_dimension, schur_dimension};
use crate::group::{GroupComplex, GroupElement, PMorphism};
use crate::holonomy::{
    sample_curve, sample_surface, signature_ode, signature_series, signature_tensor, smoothstep,
    stack_rows, HolonomyEngine, PLPath,
};
use crate::lie::{
    alpha_orbit_representatives, bigraded_dimension, cohomology_dimension, differential,
    letter_multisets, multiset_permutations, right_normed,
};
use crate::quotient::{
    abelianization_slice, extract_structure_constants, h0_dimension, h_minus1_dimension,
    semiabelian_kernel_dimension, semiabelianization_slice,
};
use crate::scalar::qr;
use crate::word::{Letter, MAX_LETTERS};
use crate::{RunConfig, Tensor};

/// Outcome of one named verification check.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl Check {
    /// A check decided by an exact comparison.
    pub fn exact(name: &str, passed: bool, detail: impl Into<String>) -> Check {
        Check { name: name.into(), passed, detail: detail.into(), residual: None, tolerance: None }
    }

    /// A check decided by a measured residual against a tolerance.
    pub fn measured(name: &str, residual: f64, tolerance: f64, detail: impl Into<String>) -> Check {
        Check {
            name: name.into(),
            passed: residual.is_finite() && residual <= tolerance,
            detail: detail.into(),
            residual: Some(residual),
            tolerance: Some(tolerance),
        }
    }

    /// One-line rendering, `PASS`/`FAIL` first so reports scan vertically.
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        match (self.residual, self.tolerance) {
            (Some(r), Some(t)) => {
                format!("{verdict}  {} — {} (residual {r:.3e}, tolerance {t:.1e})", self.name, self.detail)
            }
            _ => format!("{verdict}  {} — {}", self.name, self.detail),
        }
    }
}

/// Ordered list of check outcomes from one or more suites.
#[derive(Debug, Clone, Default, Serialize)]
pub struct CheckReport {
    pub checks: Vec<Check>,
}

impl CheckReport {
    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: CheckReport) {
        self.checks.extend(other.checks);
    }

    /// True when every check passed.
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    /// Plain-text rendering, one line per check plus a summary line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&c.line());
            out.push('\n');
        }
        out.push_str(&format!(
            "{} of {} checks passed\n",
            self.checks.len() - self.failures(),
            self.checks.len()
        ));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

// ---------------------------------------------------------------------------
// Exact algebraic checks.

/// The differential squares to zero on every generator and on the
/// right-normed monomials spanning each slice with at most `max_letters`
/// letters. The differential commutes with coordinate permutations, so one
/// multidegree per orbit covers all of them; monomials are realized with two
/// letters of headroom so the second differential is not truncated away.
pub fn d_squared_check(n: u8, max_letters: u8) -> Result<Check, Error> {
    let mut generators = 0usize;
    for letter in Letter::all(n) {
        let t = Tensor::generator(n, 3, letter)?;
        if !differential(&differential(&t)?)?.is_zero() {
            return Ok(Check::exact(
                "differential squares to zero",
                false,
                format!("d² ≠ 0 on the generator {letter}"),
            ));
        }
        generators += 1;
    }
    let cap = (max_letters as u32).min(MAX_LETTERS as u32 - 2);
    let mut monomials = 0usize;
    for ell in 2..=cap {
        for i in 0..=ell * (n as u32 - 1) {
            for alpha in alpha_orbit_representatives(n, -(i as i32), ell) {
                for multiset in letter_multisets(ell, &alpha) {
                    for seq in multiset_permutations(&multiset) {
                        let t = right_normed(&seq).realize(n, (ell + 2) as u8)?;
                        if !differential(&differential(&t)?)?.is_zero() {
                            return Ok(Check::exact(
                                "differential squares to zero",
                                false,
                                format!("d² ≠ 0 on a {ell}-letter monomial"),
                            ));
                        }
                        monomials += 1;
                    }
                }
            }
        }
    }
    Ok(Check::exact(
        "differential squares to zero",
        true,
        format!(
            "{generators} generators and {monomials} right-normed monomials up to {cap} letters, \
             one multidegree per permutation orbit"
        ),
    ))
}

/// The universal connection is flat: its curvature vanishes identically at
/// the requested letter truncation.
pub fn flatness_check(n: u8, max_letters: u8) -> Result<Check, Error> {
    let connection = universal_connection(n, max_letters)?;
    let curvature = connection.curvature()?;
    Ok(Check::exact(
        "universal connection is flat",
        curvature.is_zero(),
        format!("curvature components vanish at n = {n}, {max_letters} letters"),
    ))
}

/// Cohomology of the free resolution is `n`-dimensional at `(0, 1)` and
/// zero at every other bigrade up to the letter bound.
pub fn resolution_check(n: u8, max_letters: u8) -> Check {
    let mut bigrades = 0usize;
    for ell in 1..=max_letters as u32 {
        for i in 0..=ell * (n as u32 - 1) {
            let expected = if i == 0 && ell == 1 { n as usize } else { 0 };
            let got = cohomology_dimension(n, -(i as i32), ell);
            if got != expected {
                return Check::exact(
                    "resolution cohomology is concentrated in the generators",
                    false,
                    format!("dim H = {got} ≠ {expected} at degree {}, {ell} letters", -(i as i32)),
                );
            }
            bigrades += 1;
        }
    }
    Check::exact(
        "resolution cohomology is concentrated in the generators",
        true,
        format!("{bigrades} bigrades up to {max_letters} letters"),
    )
}

/// Degree-0 abelianization of the commutant counts hook tableaux: its
/// dimension per letter count is the hook Schur number on `(ell - 1, 1)`.
pub fn hook_schur_check(n: u8, max_letters: u8) -> Result<Check, Error> {
    let mut rows = 0usize;
    for ell in 2..=max_letters as u32 {
        let got = abelianization_slice(n, 0, ell)?.dim();
        let expected = schur_dimension(&[(ell - 1) as usize, 1], n);
        if got != expected {
            return Ok(Check::exact(
                "commutant abelianization counts hook tableaux",
                false,
                format!("dim = {got} ≠ {expected} at {ell} letters"),
            ));
        }
        rows += 1;
    }
    Ok(Check::exact(
        "commutant abelianization counts hook tableaux",
        true,
        format!("{rows} letter counts from 2 to {max_letters}"),
    ))
}

/// The abelianized tower has the dimensions of currents: degree `-i` matches
/// the currents with `i + 1` indices, and the degree-0 column matches the
/// closed 1-index currents.
pub fn abelianization_check(n: u8, max_letters: u8) -> Result<Check, Error> {
    let mut slices = 0usize;
    for ell in 1..=max_letters as u32 {
        for i in 0..=ell * (n as u32 - 1) {
            let got = abelianization_slice(n, -(i as i32), ell)?.dim();
            let expected = if i == 0 {
                if ell >= 2 { gamma_closed_dimension(n, 1, ell - 2) } else { 0 }
            } else {
                gamma_dimension(n, (i + 1) as u8, ell - 1)
            };
            if got != expected {
                return Ok(Check::exact(
                    "abelianized tower matches currents",
                    false,
                    format!("dim = {got} ≠ {expected} at degree {}, {ell} letters", -(i as i32)),
                ));
            }
            slices += 1;
        }
    }
    Ok(Check::exact(
        "abelianized tower matches currents",
        true,
        format!("{slices} slices up to {max_letters} letters"),
    ))
}

/// Kernels of the semiabelian differential have the dimensions of closed
/// currents, including the two edge cases `H⁰` and `H⁻¹`.
pub fn semiabelian_kernel_check(n: u8, max_letters: u8) -> Result<Check, Error> {
    let cap = (max_letters as u32).min(MAX_LETTERS as u32 - 1);
    let mut slices = 0usize;
    for ell in 1..=cap {
        for m in 1..=ell * (n as u32 - 1) {
            let got = semiabelian_kernel_dimension(n, m, ell)?;
            let expected =
                if ell >= 2 { gamma_closed_dimension(n, (m + 1) as u8, ell - 2) } else { 0 };
            if got != expected {
                return Ok(Check::exact(
                    "semiabelian kernels match closed currents",
                    false,
                    format!("ker dim = {got} ≠ {expected} at degree {}, {ell} letters", -(m as i32)),
                ));
            }
            slices += 1;
        }
        let h0 = h0_dimension(n, ell);
        let h0_expected = if ell == 1 { n as usize } else { 0 };
        if h0 != h0_expected {
            return Ok(Check::exact(
                "semiabelian kernels match closed currents",
                false,
                format!("dim H⁰ = {h0} ≠ {h0_expected} at {ell} letters"),
            ));
        }
        let h1 = h_minus1_dimension(n, ell)?;
        let h1_expected = if ell >= 2 { gamma_closed_dimension(n, 2, ell - 2) } else { 0 };
        if h1 != h1_expected {
            return Ok(Check::exact(
                "semiabelian kernels match closed currents",
                false,
                format!("dim H⁻¹ = {h1} ≠ {h1_expected} at {ell} letters"),
            ));
        }
    }
    Ok(Check::exact(
        "semiabelian kernels match closed currents",
        true,
        format!("{slices} kernel slices plus H⁰ and H⁻¹ up to {cap} letters"),
    ))
}

/// Degree `-1` of the semiabelianization splits along the fibered square,
/// and below degree `-1` the semiabelian and abelian towers coincide.
pub fn cartesian_square_check(n: u8, max_letters: u8) -> Result<Check, Error> {
    let cap = (max_letters as u32).min(MAX_LETTERS as u32 - 1);
    let mut slices = 0usize;
    for ell in 1..=cap {
        let sab = semiabelianization_slice(n, -1, ell)?.dim();
        // Written additively so neither side underflows.
        let lhs = sab + gamma_closed_dimension(n, 1, ell - 1);
        let rhs = gamma_dimension(n, 2, ell - 1) + bigraded_dimension(n, 0, ell + 1);
        if lhs != rhs {
            return Ok(Check::exact(
                "degree -1 splits along the fibered square",
                false,
                format!("{lhs} ≠ {rhs} at {ell} letters"),
            ));
        }
        for m in 2..=ell * (n as u32 - 1) {
            let s = semiabelianization_slice(n, -(m as i32), ell)?.dim();
            let a = abelianization_slice(n, -(m as i32), ell)?.dim();
            if s != a {
                return Ok(Check::exact(
                    "degree -1 splits along the fibered square",
                    false,
                    format!(
                        "semiabelian {s} ≠ abelian {a} at degree {}, {ell} letters",
                        -(m as i32)
                    ),
                ));
            }
            slices += 1;
        }
        slices += 1;
    }
    Ok(Check::exact(
        "degree -1 splits along the fibered square",
        true,
        format!("{slices} slices up to {cap} letters"),
    ))
}

/// All exact algebraic checks at the configured scale.
pub fn exact_suite(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let mut report = CheckReport::default();
    report.push(d_squared_check(cfg.n, cfg.max_letters)?);
    report.push(flatness_check(cfg.n, cfg.max_letters)?);
    report.push(resolution_check(cfg.n, cfg.max_letters));
    report.push(hook_schur_check(cfg.n, cfg.max_letters)?);
    report.push(abelianization_check(cfg.n, cfg.max_letters)?);
    report.push(semiabelian_kernel_check(cfg.n, cfg.max_letters)?);
    report.push(cartesian_square_check(cfg.n, cfg.max_letters)?);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Sampled group and category laws.

fn random_element(gc: &GroupComplex, degree: i32, rng: &mut ChaCha8Rng) -> Result<GroupElement, Error> {
    let dim = gc.complex().dim((-degree) as usize);
    let coords = (0..dim).map(|_| qr(rng.gen_range(-2..=2), rng.gen_range(1..=2))).collect();
    gc.element(degree, coords)
}

fn random_morphism(gc: &GroupComplex, m: usize, rng: &mut ChaCha8Rng) -> Result<PMorphism, Error> {
    let comps = (0..m)
        .map(|k| random_element(gc, -((m - 1 - k) as i32), rng))
        .collect::<Result<_, _>>()?;
    gc.morphism(comps)
}

/// A random `m`-morphism whose level-`i` source equals `w`: the bottom `i`
/// components are those of `w` and the rest are random.
fn random_with_source(
    gc: &GroupComplex,
    m: usize,
    i: usize,
    w: &PMorphism,
    rng: &mut ChaCha8Rng,
) -> Result<PMorphism, Error> {
    let mut comps = Vec::with_capacity(m);
    for k in 0..m - i {
        comps.push(random_element(gc, -((m - 1 - k) as i32), rng)?);
    }
    comps.extend(w.components().iter().cloned());
    gc.morphism(comps)
}

/// Group laws in every degree on seeded samples: associativity, identity and
/// inverses, the boundary homomorphism, and the action by automorphisms.
pub fn group_law_check(gc: &GroupComplex, seed: u64, samples: usize) -> Result<Check, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = gc.depth();
    let mut checked = 0usize;
    for round in 0..samples {
        let degree = -((round % depth) as i32);
        let x = random_element(gc, degree, &mut rng)?;
        let y = random_element(gc, degree, &mut rng)?;
        let z = random_element(gc, degree, &mut rng)?;
        let assoc_left = gc.mul(&gc.mul(&x, &y)?, &z)?;
        let assoc_right = gc.mul(&x, &gc.mul(&y, &z)?)?;
        let e = gc.identity(degree)?;
        let laws_hold = assoc_left == assoc_right
            && gc.mul(&x, &e)? == x
            && gc.mul(&x, &gc.inv(&x))?.is_identity();
        if !laws_hold {
            return Ok(Check::exact(
                "group laws hold in every degree",
                false,
                format!("violated at degree {degree}, sample {round}"),
            ));
        }
        if degree < 0 {
            let of_product = gc.boundary(&gc.mul(&x, &y)?)?;
            let product_of = gc.mul(&gc.boundary(&x)?, &gc.boundary(&y)?)?;
            if of_product != product_of {
                return Ok(Check::exact(
                    "group laws hold in every degree",
                    false,
                    format!("boundary is not multiplicative at degree {degree}, sample {round}"),
                ));
            }
            let u = random_element(gc, 0, &mut rng)?;
            let v = random_element(gc, 0, &mut rng)?;
            let automorphism = gc.act(&u, &gc.mul(&x, &y)?)?
                == gc.mul(&gc.act(&u, &x)?, &gc.act(&u, &y)?)?;
            let composition =
                gc.act(&gc.mul(&u, &v)?, &x)? == gc.act(&u, &gc.act(&v, &x)?)?;
            if !automorphism || !composition {
                return Ok(Check::exact(
                    "group laws hold in every degree",
                    false,
                    format!("action axiom violated at degree {degree}, sample {round}"),
                ));
            }
        }
        checked += 1;
    }
    Ok(Check::exact(
        "group laws hold in every degree",
        true,
        format!("{checked} seeded samples across {depth} degrees"),
    ))
}

/// Crossed module and complex axioms on seeded samples: conjugation is the
/// action through the boundary, the boundary is equivariant, and boundaries
/// act trivially below degree `-1`.
pub fn crossed_axiom_check(gc: &GroupComplex, seed: u64, samples: usize) -> Result<Check, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checked = 0usize;
    for round in 0..samples {
        let g = random_element(gc, -1, &mut rng)?;
        let h = random_element(gc, -1, &mut rng)?;
        let u = random_element(gc, 0, &mut rng)?;
        let conjugate = gc.mul(&gc.mul(&g, &h)?, &gc.inv(&g))?;
        let acted = gc.act(&gc.boundary(&g)?, &h)?;
        if conjugate != acted {
            return Ok(Check::exact(
                "crossed module axioms hold",
                false,
                format!("conjugation differs from the boundary action at sample {round}"),
            ));
        }
        let left = gc.mul(&gc.mul(&u, &gc.boundary(&g)?)?, &gc.inv(&u))?;
        let right = gc.boundary(&gc.act(&u, &g)?)?;
        if left != right {
            return Ok(Check::exact(
                "crossed module axioms hold",
                false,
                format!("boundary is not equivariant at sample {round}"),
            ));
        }
        if gc.depth() >= 3 {
            let z = random_element(gc, -2, &mut rng)?;
            if gc.act(&gc.boundary(&g)?, &z)? != z {
                return Ok(Check::exact(
                    "crossed module axioms hold",
                    false,
                    format!("a boundary acts nontrivially below degree -1 at sample {round}"),
                ));
            }
        }
        checked += 1;
    }
    Ok(Check::exact("crossed module axioms hold", true, format!("{checked} seeded samples")))
}

/// Globular category laws on seeded samples: source/target compatibility,
/// neutral units, cell inverses, associativity of every composition, and
/// the interchange law for every pair of directions.
pub fn category_law_check(gc: &GroupComplex, seed: u64, samples: usize) -> Result<Check, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = gc.depth();
    let top = depth.min(3);
    let fail = |what: &str, round: usize| {
        Ok(Check::exact(
            "globular category laws hold",
            false,
            format!("{what} violated at sample {round}"),
        ))
    };
    let mut checked = 0usize;
    for round in 0..samples {
        let m = 2 + (round % (top - 1).max(1));
        let x = random_morphism(gc, m, &mut rng)?;
        if m >= 3 {
            let ss = gc.source(&gc.source(&x)?)?;
            let st = gc.source(&gc.target(&x)?)?;
            let ts = gc.target(&gc.source(&x)?)?;
            let tt = gc.target(&gc.target(&x)?)?;
            if ss != st || ts != tt {
                return fail("globular identity", round);
            }
        }
        let e = gc.identity_morphism(m)?;
        if gc.compose(&x, &e, 0)? != x || gc.compose(&e, &x, 0)? != x {
            return fail("unit law", round);
        }
        let inv = gc.cell_inverse(&x)?;
        if !gc.compose(&x, &inv, 0)?.components().iter().all(|c| c.is_identity()) {
            return fail("cell inverse", round);
        }
        for i in 0..m {
            let (a, b, c);
            if i == 0 {
                a = random_morphism(gc, m, &mut rng)?;
                b = random_morphism(gc, m, &mut rng)?;
                c = random_morphism(gc, m, &mut rng)?;
            } else {
                c = random_morphism(gc, m, &mut rng)?;
                b = random_with_source(gc, m, i, &gc.target_at(&c, i)?, &mut rng)?;
                a = random_with_source(gc, m, i, &gc.target_at(&b, i)?, &mut rng)?;
            }
            let left = gc.compose(&gc.compose(&a, &b, i)?, &c, i)?;
            let right = gc.compose(&a, &gc.compose(&b, &c, i)?, i)?;
            if left != right {
                return fail("associativity", round);
            }
            if i >= 1 {
                let from_source = gc.unit_to(&gc.source_at(&a, i)?, m)?;
                if gc.compose(&a, &from_source, i)? != a {
                    return fail("directional unit", round);
                }
            }
        }
        for i in 0..m {
            for j in i + 1..m {
                let w = random_morphism(gc, m, &mut rng)?;
                let z = if i == 0 {
                    random_morphism(gc, m, &mut rng)?
                } else {
                    random_with_source(gc, m, i, &gc.target_at(&w, i)?, &mut rng)?
                };
                let y = random_with_source(gc, m, j, &gc.target_at(&w, j)?, &mut rng)?;
                let x2 = random_with_source(gc, m, j, &gc.target_at(&z, j)?, &mut rng)?;
                let left =
                    gc.compose(&gc.compose(&x2, &y, i)?, &gc.compose(&z, &w, i)?, j)?;
                let right =
                    gc.compose(&gc.compose(&x2, &z, j)?, &gc.compose(&y, &w, j)?, i)?;
                if left != right {
                    return fail("interchange", round);
                }
            }
        }
        checked += 1;
    }
    Ok(Check::exact(
        "globular category laws hold",
        true,
        format!("{checked} seeded samples at every level up to {top}"),
    ))
}

/// All sampled group-level checks at the configured scale: crossed complex
/// axiom validation on the structure constants, then the seeded law suites.
pub fn group_suite(cfg: &RunConfig) -> Result<CheckReport, Error> {
    let (cc, _) = extract_structure_constants(cfg.n, cfg.degree)?;
    let mut report = CheckReport::default();
    let axioms = cc.validate();
    report.push(Check::exact(
        "crossed complex axioms validate",
        axioms.is_ok(),
        match &axioms {
            Ok(()) => format!("structure constants at n = {}, class {}", cfg.n, cfg.degree),
            Err(e) => format!("{e}"),
        },
    ));
    let gc = GroupComplex::new(cc);
    report.push(group_law_check(&gc, cfg.seed, 100)?);
    report.push(crossed_axiom_check(&gc, cfg.seed ^ 0x9e37_79b9, 100)?);
    report.push(category_law_check(&gc, cfg.seed ^ 0x7f4a_7c15, 25)?);
    Ok(report)
}

// ---------------------------------------------------------------------------
// Numeric holonomy checks.

/// Grid sizes for the numeric suite. Tolerances whose values are tied to a
/// specific grid live here next to it; the generic surface tolerance comes
/// from the run configuration.
#[derive(Debug, Clone)]
pub struct NumericScale {
    /// Samples for the reparametrization comparison.
    pub path_samples: usize,
    /// Steps for the stepwise signature quadrature oracle.
    pub oracle_steps: usize,
    pub oracle_tol: f64,
    pub reparam_tol: f64,
    /// Rows and columns of the square surface grids.
    pub surface_grid: usize,
    /// Three grid levels for the order-2 convergence check.
    pub convergence_grids: [usize; 3],
    /// Shape of the swept cube for the volume comparison.
    pub cube_shape: [usize; 3],
    /// Shape of the swept cube for the boundary identity.
    pub cube_boundary_shape: [usize; 3],
    pub cube_tol: f64,
}

impl Default for NumericScale {
    fn default() -> Self {
        NumericScale {
            path_samples: 2000,
            oracle_steps: 10_000,
            oracle_tol: 1e-10,
            reparam_tol: 1e-6,
            surface_grid: 201,
            convergence_grids: [41, 81, 161],
            cube_shape: [41, 41, 41],
            cube_boundary_shape: [201, 201, 41],
            cube_tol: 1e-4,
        }
    }
}

impl NumericScale {
    /// Small grids for smoke tests, with tolerances honest at that scale.
    pub fn quick() -> Self {
        NumericScale {
            path_samples: 200,
            oracle_steps: 2000,
            oracle_tol: 1e-8,
            reparam_tol: 1e-4,
            surface_grid: 41,
            convergence_grids: [21, 41, 81],
            cube_shape: [9, 9, 41],
            cube_boundary_shape: [17, 17, 41],
            cube_tol: 2e-2,
        }
    }
}

/// A smooth seeded path with distinct activity in every coordinate. Drift
/// keeps it away from loops, whose truncated signatures can commute and
/// mask ordering mistakes.
fn generic_curve(n: u8) -> impl Fn(f64) -> Vec<f64> {
    move |t| {
        (0..n)
            .map(|j| {
                let jf = j as f64;
                (0.5 - 0.15 * jf) * t
                    + 0.4 * (std::f64::consts::PI * t * (0.8 + 0.3 * jf)).sin()
                    + 0.2 * ((2.1 + 0.7 * jf) * t + jf).cos()
                    - 0.2 * jf.cos()
            })
            .collect()
    }
}

/// A smooth surface whose rows share their endpoints, with a common drift
/// so the boundary rows are not loops. The seed draws the amplitudes,
/// frequencies, and phases of the family; amplitudes stay in a band where
/// the quadrature constants match the frozen grid tolerances.
fn generic_surface(n: u8, seed: u64) -> impl Fn(f64, f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params: Vec<[f64; 6]> = (0..n)
        .map(|j| {
            let jf = j as f64;
            [
                0.6 - 0.5 * jf + rng.gen_range(-0.2..0.2),
                0.8 - 0.2 * jf + rng.gen_range(-0.2..0.2),
                rng.gen_range(0.25..0.45),
                (2.0 + 0.8 * jf) * rng.gen_range(0.7..1.3),
                (1.3 - 0.2 * jf) * rng.gen_range(0.7..1.3),
                rng.gen_range(0.0..std::f64::consts::TAU),
            ]
        })
        .collect();
    move |s, t| {
        let a = (std::f64::consts::PI * t).sin();
        params
            .iter()
            .map(|[drift, offset, amp, fs, ft, phase]| {
                drift * t + a * (offset + amp * (fs * s + phase).sin() * (ft * t + 0.4).cos())
            })
            .collect()
    }
}

/// A random piecewise-linear path with `segments` pieces inside the unit
/// box, optionally translated so its final point lands on `end`.
fn random_path(
    n: u8,
    segments: usize,
    rng: &mut ChaCha8Rng,
    end: Option<&[f64]>,
) -> Result<PLPath, Error> {
    let mut points: Vec<Vec<f64>> =
        (0..=segments).map(|_| (0..n).map(|_| rng.gen_range(-0.8..0.8)).collect()).collect();
    if let Some(end) = end {
        let last = points.last().unwrap().clone();
        for p in &mut points {
            for (k, x) in p.iter_mut().enumerate() {
                *x += end[k] - last[k];
            }
        }
    }
    PLPath::new(n, points)
}

/// The exact piecewise-linear signature agrees with a stepwise quadrature
/// of the same path on a seeded random polyline.
pub fn signature_oracle_check(
    n: u8,
    truncation: u8,
    seed: u64,
    scale: &NumericScale,
) -> Result<Check, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let path = random_path(n, 5, &mut rng, None)?;
    let exact = signature_series(&path, truncation);
    let stepped = signature_ode(&path, truncation, scale.oracle_steps);
    let residual = exact.max_abs_diff(&stepped);
    Ok(Check::measured(
        "piecewise-linear signature matches the stepwise quadrature",
        residual,
        scale.oracle_tol,
        format!("random 5-segment path, {} steps", scale.oracle_steps),
    ))
}

/// The exact signature of a seeded random polyline satisfies every shuffle
/// relation with rational residual zero.
pub fn group_like_check(n: u8, truncation: u8, seed: u64) -> Result<Check, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let path = random_path(n, 5, &mut rng, None)?;
    let tensor = signature_tensor(&path, truncation)?;
    let residual = tensor.group_like_residual()?;
    Ok(Check::exact(
        "signature is group-like",
        residual.is_zero(),
        if residual.is_zero() {
            "exact rational shuffle residual 0 on a random 5-segment path".to_string()
        } else {
            format!("exact shuffle residual {residual}")
        },
    ))
}

/// A smoothstep reparametrization of a sampled smooth curve leaves its
/// signature unchanged up to the sampling error.
pub fn reparametrization_check(
    n: u8,
    truncation: u8,
    scale: &NumericScale,
) -> Result<Check, Error> {
    let f = generic_curve(n);
    let base = sample_curve(n, scale.path_samples, &f)?;
    let warped = sample_curve(n, scale.path_samples, |t| f(smoothstep(t)))?;
    let residual = signature_series(&base, truncation)
        .max_abs_diff(&signature_series(&warped, truncation));
    Ok(Check::measured(
        "signature is reparametrization invariant",
        residual,
        scale.reparam_tol,
        format!("smoothstep warp at {} samples", scale.path_samples),
    ))
}

/// The boundary of a surface holonomy matches the signatures of its first
/// and last rows.
pub fn boundary_identity_check(
    engine: &HolonomyEngine,
    seed: u64,
    grid: usize,
    tol: f64,
) -> Result<Check, Error> {
    let brane = sample_surface(engine.n(), grid, grid, generic_surface(engine.n(), seed))?;
    let result = engine.holonomy2(&brane)?;
    Ok(Check::measured(
        "surface holonomy boundary matches the edge signatures",
        result.boundary_residual(),
        tol,
        format!("generic surface at {grid}×{grid}, class {}", engine.truncation()),
    ))
}

/// The boundary residual decays at second order when the grid is refined:
/// each halving of the step divides it by roughly four.
pub fn convergence_check(
    engine: &HolonomyEngine,
    seed: u64,
    grids: [usize; 3],
) -> Result<Check, Error> {
    let f = generic_surface(engine.n(), seed);
    let mut residuals = [0.0f64; 3];
    for (k, grid) in grids.iter().enumerate() {
        let brane = sample_surface(engine.n(), *grid, *grid, &f)?;
        residuals[k] = engine.holonomy2(&brane)?.boundary_residual();
    }
    let r1 = residuals[0] / residuals[1];
    let r2 = residuals[1] / residuals[2];
    let passed = (2.5..6.0).contains(&r1) && (2.5..6.0).contains(&r2);
    Ok(Check::exact(
        "boundary residual converges at second order",
        passed,
        format!(
            "residuals {:.3e} / {:.3e} / {:.3e} at grids {:?}, ratios {r1:.2} and {r2:.2}",
            residuals[0], residuals[1], residuals[2], grids
        ),
    ))
}

/// Stacking two surfaces along their shared row multiplies their
/// holonomies in the strip order.
pub fn vertical_composition_check(
    engine: &HolonomyEngine,
    grid: usize,
    tol: f64,
) -> Result<Check, Error> {
    let n = engine.n();
    let f = generic_surface(n);
    let half = grid / 2;
    let bottom = sample_surface(n, half + 1, grid, |s, t| f(0.5 * s, t))?;
    let top = sample_surface(n, half + 1, grid, |s, t| f(0.5 + 0.5 * s, t))?;
    let whole = stack_rows(&bottom, &top)?;
    let hb = engine.holonomy2(&bottom)?.value_f64();
    let ht = engine.holonomy2(&top)?.value_f64();
    let hw = engine.holonomy2(&whole)?.value_f64();
    let product = engine.numeric().mul(1, &hb, &ht);
    let residual = hw
        .iter()
        .zip(&product)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(Check::measured(
        "stacked surfaces multiply their holonomies",
        residual,
        tol,
        format!("two half-sweeps against the full sweep at {grid} columns"),
    ))
}

/// Whiskering a path after a surface leaves the holonomy unchanged;
/// whiskering before conjugates it by the inverse path signature.
pub fn whisker_check(
    engine: &HolonomyEngine,
    seed: u64,
    grid: usize,
    tol: f64,
) -> Result<Check, Error> {
    let n = engine.n();
    let f = generic_surface(n);
    let brane = sample_surface(n, grid, grid, &f)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let incoming = random_path(n, 4, &mut rng, Some(&f(0.0, 0.0)))?;
    let outgoing_start = f(0.0, 1.0);
    let mut outgoing = random_path(n, 4, &mut rng, None)?;
    // Reversing and translating puts the random end point at the row ends.
    outgoing = outgoing.reversed();
    let shift: Vec<f64> =
        outgoing_start.iter().zip(outgoing.start()).map(|(a, b)| a - b).collect();
    let points = outgoing
        .points()
        .iter()
        .map(|p| p.iter().zip(&shift).map(|(x, d)| x + d).collect())
        .collect();
    let outgoing = PLPath::new(n, points)?;
    let report = engine.whisker_residuals(&incoming, &outgoing, &brane)?;
    let residual = report.entries[..2].iter().map(|(_, v)| *v).fold(0.0, f64::max);
    Ok(Check::measured(
        "whiskered paths translate the holonomy",
        residual,
        tol,
        format!("seeded 4-segment paths around a {grid}×{grid} surface"),
    ))
}

/// Holonomy is unchanged by smoothstep reparametrization and by inserting a
/// fold that retraces and cancels.
pub fn thin_homotopy_check(engine: &HolonomyEngine, grid: usize, tol: f64) -> Result<Check, Error> {
    let brane = sample_surface(engine.n(), grid, grid, generic_surface(engine.n()))?;
    let report = engine.thin_homotopy_residuals(&brane)?;
    let residual = report.entries.iter().map(|(_, v)| *v).fold(0.0, f64::max);
    Ok(Check::measured(
        "thin homotopies leave the holonomy unchanged",
        residual,
        tol,
        format!("reparametrization and fold cancellation at {grid}×{grid}"),
    ))
}

/// The top coefficient of the swept unit cube's 3-holonomy is its volume.
pub fn cube_volume_check(
    engine: &HolonomyEngine,
    shape: [usize; 3],
    tol: f64,
) -> Result<Check, Error> {
    let brane = crate::holonomy::cube_sweep(engine.n(), &shape)?;
    let result = engine.holonomy_p(&brane)?;
    let slot = engine.generator_slot(2, 0b111);
    let coefficient = result.value_f64()[slot];
    Ok(Check::measured(
        "cube holonomy reproduces the volume",
        (coefficient - 1.0).abs(),
        tol,
        format!("top coefficient {coefficient:.8} at shape {shape:?}"),
    ))
}

/// The boundary of the swept cube's 3-holonomy matches the holonomies of
/// its outer faces.
pub fn cube_boundary_check(
    engine: &HolonomyEngine,
    shape: [usize; 3],
    tol: f64,
) -> Result<Check, Error> {
    let brane = crate::holonomy::cube_sweep(engine.n(), &shape)?;
    let result = engine.holonomy_p(&brane)?;
    Ok(Check::measured(
        "brane boundary matches the face holonomies",
        result.boundary_residual(),
        tol,
        format!("swept cube at shape {shape:?}"),
    ))
}

/// All numeric checks at the given scale. The cube checks run on their own
/// three-dimensional engine and are skipped below n = 3.
pub fn numeric_suite_scaled(cfg: &RunConfig, scale: &NumericScale) -> Result<CheckReport, Error> {
    let engine = HolonomyEngine::new(cfg.n, cfg.degree)?;
    let mut report = CheckReport::default();
    report.push(signature_oracle_check(cfg.n, cfg.degree, cfg.seed, scale)?);
    report.push(group_like_check(cfg.n, cfg.degree, cfg.seed ^ 0x5851_f42d)?);
    report.push(reparametrization_check(cfg.n, cfg.degree, scale)?);
    report.push(boundary_identity_check(&engine, scale.surface_grid, cfg.tol)?);
    report.push(convergence_check(&engine, scale.convergence_grids)?);
    report.push(vertical_composition_check(&engine, scale.surface_grid, cfg.tol)?);
    report.push(whisker_check(&engine, cfg.seed ^ 0x14057_b7e, scale.surface_grid, cfg.tol)?);
    report.push(thin_homotopy_check(&engine, scale.surface_grid, cfg.tol)?);
    if cfg.n >= 3 {
        let cube_engine = if cfg.n == 3 && cfg.degree == 3 {
            engine
        } else {
            HolonomyEngine::new(3, 3)?
        };
        report.push(cube_volume_check(&cube_engine, scale.cube_shape, scale.cube_tol)?);
        report.push(cube_boundary_check(&cube_engine, scale.cube_boundary_shape, scale.cube_tol)?);
    }
    Ok(report)
}

/// All numeric checks at the default command-line scale.
pub fn numeric_suite(cfg: &RunConfig) -> Result<CheckReport, Error> {
    numeric_suite_scaled(cfg, &NumericScale::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_exact_suite_passes_at_desk_scale() {
        let cfg = RunConfig::new(2, 4, 3).unwrap();
        let report = exact_suite(&cfg).unwrap();
        assert!(report.passed(), "{}", report.render());
        assert_eq!(report.checks.len(), 7);
    }

    #[test]
    fn the_group_suite_passes_at_desk_scale() {
        let cfg = RunConfig::new(2, 3, 3).unwrap();
        let report = group_suite(&cfg).unwrap();
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn the_numeric_suite_passes_at_smoke_scale() {
        let cfg = RunConfig::new(2, 3, 3).unwrap().with_tol(1e-3);
        let report = numeric_suite_scaled(&cfg, &NumericScale::quick()).unwrap();
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn failed_checks_render_and_serialize() {
        let mut report = CheckReport::default();
        report.push(Check::measured("sample residual", 2.0e-3, 1.0e-5, "synthetic"));
        assert!(!report.passed());
        assert_eq!(report.failures(), 1);
        assert!(report.render().contains("FAIL"));
        assert!(report.to_json().contains("\"tolerance\""));
    }
}
