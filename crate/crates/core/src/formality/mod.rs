//! Formality: Massey products, certificates of non-formality, checks of the
//! explicit quasi-isomorphisms, and the verdict tables.

pub mod certificate;
pub mod massey;
pub mod quasi_iso;

use rayon::prelude::*;
use serde::Serialize;

pub use certificate::{
    candidates, clearance, edge_sweep, evaluate, low_degree_classes, find_certificate, CandidateOutcome, CandidateSequence, CertificateFamily,
    ClearanceReport, MasseyCertificate,
};
pub use massey::{
    is_massey_admissible3, is_massey_admissible3_single, massey3, massey3_with, same_class, Admissibility, HomClass,
    HomologyCache, MasseyProduct,
};
pub use quasi_iso::{map_kind_for, verify_quasi_iso, MapKind, QuasiIsoReport};

use crate::algebra::{AlgebraContext, Flavor};
use crate::error::Result;
use crate::istate::LineSet;

/// Whether the algebra is formal, read off the classification tables.
pub fn is_formal(ctx: &AlgebraContext) -> bool {
    let (n, k, s) = (ctx.width(), ctx.size(), ctx.orientation());
    let has = |i: usize| s.contains(i);
    let only = |lines: &[usize]| s == LineSet::new(n, lines).expect("lines in range");
    match ctx.flavor() {
        Flavor::B0 => true,
        Flavor::B => s.is_empty() || k == 0 || k == n || k == n + 1,
        Flavor::Br => {
            k == 0 || k >= n || s.is_empty() || only(&[1]) || (k + 1 == n && has(1))
        }
        Flavor::Bl => {
            k == 0 || k >= n || s.is_empty() || only(&[n]) || (k + 1 == n && has(n))
        }
        Flavor::Bprime => {
            k == 0
                || k + 1 >= n
                || s.is_subset(LineSet::new(n, &[1, n]).expect("lines in range"))
                || (k + 2 == n && has(1) && has(n))
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct VerdictOptions {
    /// Evidence is computed only for `n` up to this bound.
    pub cert_bound: usize,
    /// Degree cap on `Σ alex2` for the quasi-isomorphism checks.
    pub cap: i32,
}

impl Default for VerdictOptions {
    fn default() -> Self {
        Self { cert_bound: 4, cap: 12 }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The algebra has no vertices.
    Empty,
    /// A nonzero Massey triple.
    Massey { certificate: MasseyCertificate },
    /// No certificate was found; only happens if the table is wrong.
    MissingCertificate,
    /// An explicit quasi-isomorphism, with the single-edge sweep alongside.
    QuasiIso { map: QuasiIsoReport, clearance: ClearanceReport },
    /// No explicit map; every admissible swept or family triple vanishes.
    Clearance { clearance: ClearanceReport },
    /// Above the certificate bound.
    TableOnly,
}

#[derive(Clone, Debug, Serialize)]
pub struct FormalityVerdict {
    pub context: String,
    pub n: usize,
    pub k: usize,
    pub orientation: Vec<usize>,
    pub flavor: Flavor,
    pub formal: bool,
    pub evidence: Evidence,
}

impl FormalityVerdict {
    /// Whether the attached evidence supports the verdict.
    pub fn verified(&self) -> bool {
        match &self.evidence {
            Evidence::Empty => self.formal,
            Evidence::Massey { certificate } => !self.formal && !certificate.product.is_zero(),
            Evidence::MissingCertificate => false,
            Evidence::QuasiIso { map, clearance } => self.formal && map.passed() && clearance.passed(),
            Evidence::Clearance { clearance } => self.formal && clearance.passed(),
            Evidence::TableOnly => true,
        }
    }
}

pub fn formality_verdict(ctx: &AlgebraContext, opts: &VerdictOptions) -> Result<FormalityVerdict> {
    let formal = is_formal(ctx);
    let evidence = if ctx.states().is_empty() {
        Evidence::Empty
    } else if ctx.width() > opts.cert_bound {
        Evidence::TableOnly
    } else {
        let mut cache = HomologyCache::new(*ctx);
        if formal {
            let clearance = clearance(&mut cache)?;
            match map_kind_for(ctx) {
                Some(kind) => Evidence::QuasiIso {
                    map: verify_quasi_iso(ctx, kind, opts.cap)?,
                    clearance,
                },
                None => Evidence::Clearance { clearance },
            }
        } else {
            match find_certificate(&mut cache)? {
                Some(certificate) => Evidence::Massey { certificate },
                None => Evidence::MissingCertificate,
            }
        }
    };
    Ok(FormalityVerdict {
        context: ctx.to_string(),
        n: ctx.width(),
        k: ctx.size(),
        orientation: ctx.orientation().iter().collect(),
        flavor: ctx.flavor(),
        formal,
        evidence,
    })
}

/// Verdicts for many contexts, computed in parallel and returned in order.
pub fn verdict_table(contexts: &[AlgebraContext], opts: &VerdictOptions) -> Result<Vec<FormalityVerdict>> {
    contexts.par_iter().map(|c| formality_verdict(c, opts)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize, k: usize, s: &[usize], flavor: Flavor) -> AlgebraContext {
        AlgebraContext::with_lines(n, k, s, flavor).unwrap()
    }

    #[test]
    fn table_examples() {
        assert!(!is_formal(&ctx(2, 1, &[1], Flavor::B)));
        assert!(is_formal(&ctx(3, 3, &[2], Flavor::B)));
        assert!(is_formal(&ctx(4, 2, &[1, 4], Flavor::Bprime)));
        assert!(!is_formal(&ctx(4, 2, &[2], Flavor::Bprime)));
        assert!(is_formal(&ctx(4, 3, &[1, 3], Flavor::Br)));
        assert!(!is_formal(&ctx(4, 3, &[3], Flavor::Br)));
        assert!(is_formal(&ctx(4, 3, &[4], Flavor::Bl)));
    }

    #[test]
    fn verdict_examples() {
        let opts = VerdictOptions { cert_bound: 4, cap: 6 };
        let v = formality_verdict(&ctx(2, 1, &[1], Flavor::B), &opts).unwrap();
        assert!(!v.formal && v.verified());
        let Evidence::Massey { certificate } = &v.evidence else { panic!("expected a certificate") };
        assert_eq!(certificate.value, "C1*f[{1},{2}]");
        let v = formality_verdict(&ctx(3, 3, &[2], Flavor::B), &opts).unwrap();
        assert!(v.formal && v.verified(), "{v:?}");
        let v = formality_verdict(&ctx(4, 2, &[1, 4], Flavor::Bprime), &opts).unwrap();
        assert!(v.formal && v.verified(), "{v:?}");
    }
}
