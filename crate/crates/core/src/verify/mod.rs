//! Verification engine: every identity becomes a `CheckResult` with an
//! explicit residual and threshold. Construction failures are reported as
//! failed results, never as panics or early exits.

pub mod campaign;
pub mod controls;
pub mod hk;
pub mod manifest;
pub mod structure;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use campaign::{Campaign, Report};
pub use controls::run_negative_controls;
pub use hk::run_hk_suite;
pub use structure::run_structure_suite;

/// Threshold classes; the algebraic and finite-difference classes can be
/// overridden from the command line.
#[derive(Clone, Copy, Debug)]
pub enum Tol {
    Alg(f64),
    Fd(f64),
    Fixed(f64),
}

pub const ALG: Tol = Tol::Alg(1e-9);
pub const FD: Tol = Tol::Fd(1e-6);

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TolOverrides {
    pub alg: Option<f64>,
    pub fd: Option<f64>,
}

impl TolOverrides {
    pub fn resolve(&self, tol: Tol) -> f64 {
        match tol {
            Tol::Alg(v) => self.alg.unwrap_or(v),
            Tol::Fd(v) => self.fd.unwrap_or(v),
            Tol::Fixed(v) => v,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Check,
    /// A deliberately broken variant whose designated check must fail.
    Control,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDetail {
    pub sample: usize,
    pub residual: f64,
    pub note: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub check_id: String,
    pub role: Role,
    pub space: String,
    pub params: Option<String>,
    pub samples: usize,
    pub max_residual: f64,
    pub threshold: f64,
    pub passed: bool,
    /// Worst samples, largest residual first.
    pub details: Vec<SampleDetail>,
    pub note: Option<String>,
}

impl CheckResult {
    /// Whether this result is what a clean run expects.
    pub fn as_expected(&self) -> bool {
        match self.role {
            Role::Check => self.passed,
            Role::Control => !self.passed,
        }
    }
}

/// Collects per-sample residuals for one check.
pub struct Acc {
    id: String,
    space: String,
    params: Option<String>,
    samples: Vec<SampleDetail>,
    note: Option<String>,
}

impl Acc {
    pub fn new(id: &str, space: &str, params: Option<String>) -> Self {
        Self {
            id: id.to_string(),
            space: space.to_string(),
            params,
            samples: Vec::new(),
            note: None,
        }
    }

    pub fn push(&mut self, residual: f64, note: impl Into<String>) {
        let i = self.samples.len();
        let residual = if residual.is_nan() { f64::MAX } else { residual };
        self.samples.push(SampleDetail {
            sample: i,
            residual,
            note: note.into(),
        });
    }

    /// Records a sample result; an error counts as an unbounded residual.
    pub fn record(&mut self, r: crate::Result<f64>, note: impl Into<String>) {
        match r {
            Ok(v) => self.push(v, note),
            Err(e) => {
                let n: String = note.into();
                self.push(f64::MAX, format!("{n} error: {e}"));
            }
        }
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.note = Some(note.into());
    }

    pub fn finish(self, threshold: f64, role: Role) -> CheckResult {
        let max_residual = self
            .samples
            .iter()
            .map(|s| s.residual)
            .fold(f64::NEG_INFINITY, f64::max);
        let mut details = self.samples.clone();
        details.sort_by(|a, b| b.residual.total_cmp(&a.residual).then(a.sample.cmp(&b.sample)));
        details.truncate(3);
        let empty = self.samples.is_empty();
        CheckResult {
            check_id: self.id,
            role,
            space: self.space,
            params: self.params,
            samples: self.samples.len(),
            max_residual: if empty { 0.0 } else { max_residual },
            threshold,
            passed: !empty && max_residual < threshold,
            details,
            note: if empty && self.note.is_none() {
                Some("no samples evaluated".into())
            } else {
                self.note
            },
        }
    }
}

/// A failed result for a check that could not even be set up.
pub fn failed(id: &str, space: &str, params: Option<String>, threshold: f64, why: String) -> CheckResult {
    CheckResult {
        check_id: id.to_string(),
        role: Role::Check,
        space: space.to_string(),
        params,
        samples: 0,
        max_residual: f64::MAX,
        threshold,
        passed: false,
        details: vec![SampleDetail {
            sample: 0,
            residual: f64::MAX,
            note: why.clone(),
        }],
        note: Some(why),
    }
}

/// Deterministic per-check random stream.
pub fn rng_for(seed: u64, parts: &[&str]) -> ChaCha8Rng {
    // FNV-1a, stable across platforms and releases
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in seed
        .to_le_bytes()
        .iter()
        .chain(parts.iter().flat_map(|p| p.as_bytes().iter().chain(b"|")))
    {
        h ^= *b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Boolean checks are encoded as residual 0 (holds) or 1 (violated).
pub fn flag(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        1.0
    }
}

/// Threshold used with `flag`.
pub const FLAG: Tol = Tol::Fixed(0.5);
