//! Dimension tables pairing computed slice ranks with counting oracles.
//!
//! One row covers one `(degree, letters)` slice of the free algebra and its
//! quotients. Computed columns come from exact rank computations; predicted
//! columns come from the independent counting oracles (currents, closed
//! currents, hook Schur functors), so a printed table doubles as a
//! consistency check between the two pipelines.

use serde::Serialize;

use crate::error::Error;
use crate::forms::{gamma_closed_dimension, gamma_dimension, schur_dimension};
use crate::lie::{bigraded_dimension, cohomology_dimension, image_dimension, kernel_dimension};
use crate::quotient::{
    abelianization_slice, semiabelian_kernel_dimension, semiabelianization_slice,
};
use crate::word::{MAX_LETTERS, MAX_N};

/// Ranks of one `(degree, letters)` slice across the quotient tower.
///
/// `cohomology` refers to the free resolution, `semiabelian_kernel` to the
/// kernel of the differential after semiabelianization. The `*_predicted`
/// fields hold the matching oracle counts.
#[derive(Debug, Clone, Serialize)]
pub struct DimsRow {
    pub degree: i32,
    pub letters: u32,
    pub full: usize,
    pub kernel: usize,
    pub image: usize,
    pub cohomology: usize,
    #[serde(rename = "cohomologyPredicted")]
    pub cohomology_predicted: usize,
    pub semiabelian: usize,
    #[serde(rename = "semiabelianKernel", skip_serializing_if = "Option::is_none")]
    pub semiabelian_kernel: Option<usize>,
    #[serde(rename = "semiabelianKernelPredicted", skip_serializing_if = "Option::is_none")]
    pub semiabelian_kernel_predicted: Option<usize>,
    pub abelian: usize,
    #[serde(rename = "abelianPredicted")]
    pub abelian_predicted: usize,
}

impl DimsRow {
    /// True when every computed column equals its predicted partner.
    pub fn consistent(&self) -> bool {
        self.cohomology == self.cohomology_predicted
            && self.semiabelian_kernel == self.semiabelian_kernel_predicted
            && self.abelian == self.abelian_predicted
    }
}

/// Oracle for the abelianized slice: the hook Schur functor in degree 0,
/// currents with `i + 1` indices below.
fn abelian_oracle(n: u8, i: u32, ell: u32) -> usize {
    if i == 0 {
        if ell < 2 {
            return 0;
        }
        return schur_dimension(&[(ell - 1) as usize, 1], n);
    }
    if ell < 1 {
        return 0;
    }
    gamma_dimension(n, (i + 1) as u8, ell - 1)
}

/// Full dimension table for all slices with at most `max_letters` letters.
///
/// Rows are ordered by letter count, then by descending degree. Degrees run
/// from 0 down to `letters * (n - 1)`, the lowest a monomial on that many
/// generators can reach.
pub fn dims_rows(n: u8, max_letters: u8) -> Result<Vec<DimsRow>, Error> {
    if n == 0 || n > MAX_N {
        return Err(Error::ResourceGuard(format!("n = {n} outside 1..={MAX_N}")));
    }
    if max_letters == 0 || max_letters as usize > MAX_LETTERS {
        return Err(Error::ResourceGuard(format!(
            "max letters {max_letters} outside 1..={MAX_LETTERS}"
        )));
    }
    let mut rows = Vec::new();
    for ell in 1..=max_letters as u32 {
        for i in 0..=ell * (n as u32 - 1) {
            let degree = -(i as i32);
            let semiabelian = semiabelianization_slice(n, degree, ell)?.dim();
            let abelian = abelianization_slice(n, degree, ell)?.dim();
            let (sab_kernel, sab_kernel_predicted) = if i >= 1 {
                let kernel = semiabelian_kernel_dimension(n, i, ell)?;
                let predicted =
                    if ell >= 2 { gamma_closed_dimension(n, (i + 1) as u8, ell - 2) } else { 0 };
                (Some(kernel), Some(predicted))
            } else {
                (None, None)
            };
            rows.push(DimsRow {
                degree,
                letters: ell,
                full: bigraded_dimension(n, degree, ell),
                kernel: kernel_dimension(n, degree, ell),
                image: image_dimension(n, degree, ell),
                cohomology: cohomology_dimension(n, degree, ell),
                cohomology_predicted: if i == 0 && ell == 1 { n as usize } else { 0 },
                semiabelian,
                semiabelian_kernel: sab_kernel,
                semiabelian_kernel_predicted: sab_kernel_predicted,
                abelian,
                abelian_predicted: abelian_oracle(n, i, ell),
            });
        }
    }
    Ok(rows)
}

/// CSV rendering of a dimension table, header included. Optional cells are
/// left empty.
pub fn dims_csv(rows: &[DimsRow]) -> String {
    let mut out = String::from(
        "degree,letters,full,kernel,image,cohomology,cohomologyPredicted,\
         semiabelian,semiabelianKernel,semiabelianKernelPredicted,abelian,abelianPredicted\n",
    );
    for r in rows {
        let opt = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{}\n",
            r.degree,
            r.letters,
            r.full,
            r.kernel,
            r.image,
            r.cohomology,
            r.cohomology_predicted,
            r.semiabelian,
            opt(r.semiabelian_kernel),
            opt(r.semiabelian_kernel_predicted),
            r.abelian,
            r.abelian_predicted,
        ));
    }
    out
}
