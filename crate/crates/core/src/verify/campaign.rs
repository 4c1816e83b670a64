//! A seeded campaign over spaces and parameter quadruples, and its report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::controls::{run_negative_controls, DEFAULT_AMPLITUDE};
use super::hk::run_hk_suite;
use super::manifest::coverage_manifest;
use super::structure::run_structure_suite;
use super::{failed, CheckResult, Role, TolOverrides};
use crate::context::SpaceContext;
use crate::error::{Error, Result};
use crate::fields::params::HkParams;
use crate::pair::SpaceSpec;

pub const REPORT_VERSION: &str = "hksym-report/1";

#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub seed: u64,
    pub spaces: Vec<SpaceSpec>,
    pub params: Vec<HkParams>,
    pub samples: usize,
    pub tol: TolOverrides,
    pub control_amplitude: f64,
    pub structure: bool,
    pub controls: bool,
}

impl Campaign {
    pub fn new(spaces: Vec<SpaceSpec>, params: Vec<HkParams>) -> Self {
        Self {
            seed: 0,
            spaces,
            params,
            samples: 100,
            tol: TolOverrides::default(),
            control_amplitude: DEFAULT_AMPLITUDE,
            structure: true,
            controls: true,
        }
    }

    /// Rejects empty campaigns and parameters outside the admissible set of
    /// any requested space.
    pub fn validate(&self) -> Result<()> {
        if self.spaces.is_empty() {
            return Err(Error::Config("no space given".into()));
        }
        if self.samples == 0 {
            return Err(Error::Config("samples must be positive".into()));
        }
        for s in &self.spaces {
            for p in &self.params {
                p.check(s.expected_type()).map_err(|e| match e {
                    Error::Params(m) => Error::Params(format!("{s} with params {p}: {m}")),
                    other => other,
                })?;
            }
        }
        Ok(())
    }

    pub fn run(&self) -> Result<Report> {
        self.validate()?;
        let per_space: Vec<Vec<CheckResult>> = self.spaces.par_iter().map(|s| self.run_space(*s)).collect();
        let checks: Vec<CheckResult> = per_space.into_iter().flatten().collect();
        if checks.is_empty() {
            return Err(Error::Config("the campaign produced no checks".into()));
        }
        Ok(Report {
            version: REPORT_VERSION.to_string(),
            seed: self.seed,
            space: self.spaces.iter().map(|s| s.to_string()).collect(),
            params: self.params.iter().map(|p| p.to_string()).collect(),
            checks,
            coverage_manifest: coverage_manifest(),
        })
    }

    fn run_space(&self, spec: SpaceSpec) -> Vec<CheckResult> {
        let space = spec.to_string();
        let ctx = match SpaceContext::build(spec) {
            Ok(c) => c,
            Err(e) => return vec![failed("space.construction", &space, None, 0.0, e.to_string())],
        };
        let mut out = Vec::new();
        if self.structure {
            out.extend(run_structure_suite(&ctx, self.samples, self.seed, &self.tol));
        }
        let cells: Vec<Vec<CheckResult>> = self
            .params
            .par_iter()
            .map(|p| {
                run_hk_suite(&ctx, p, self.samples, self.seed, &self.tol).unwrap_or_else(|e| {
                    vec![failed(
                        "space.construction",
                        &space,
                        Some(p.to_string()),
                        0.0,
                        e.to_string(),
                    )]
                })
            })
            .collect();
        out.extend(cells.into_iter().flatten());
        if self.controls {
            out.extend(run_negative_controls(
                &ctx,
                self.samples,
                self.seed,
                &self.tol,
                self.control_amplitude,
            ));
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub space: Vec<String>,
    pub params: Vec<String>,
    pub checks: Vec<CheckResult>,
    pub coverage_manifest: BTreeMap<String, String>,
}

impl Report {
    /// Every check passed and every control failed.
    pub fn all_expected(&self) -> bool {
        self.checks.iter().all(CheckResult::as_expected)
    }

    pub fn unexpected(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.as_expected())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{}  seed {}", self.version, self.seed);
        let _ = writeln!(
            s,
            "{:<6} {:<34} {:<8} {:<18} {:>7} {:>12} {:>10}",
            "status", "check", "space", "params", "samples", "max_resid", "threshold"
        );
        for c in &self.checks {
            let status = match (c.role, c.as_expected()) {
                (Role::Check, true) => "ok",
                (Role::Check, false) => "FAIL",
                (Role::Control, true) => "ctl-ok",
                (Role::Control, false) => "CTL!",
            };
            let _ = writeln!(
                s,
                "{:<6} {:<34} {:<8} {:<18} {:>7} {:>12.3e} {:>10.1e}",
                status,
                c.check_id,
                c.space,
                c.params.as_deref().unwrap_or("-"),
                c.samples,
                c.max_residual,
                c.threshold
            );
            if !c.as_expected() {
                for d in &c.details {
                    let _ = writeln!(s, "         sample {:>4}: {:.3e}  {}", d.sample, d.residual, d.note);
                }
                if let Some(n) = &c.note {
                    let _ = writeln!(s, "         note: {n}");
                }
            }
        }
        let bad = self.unexpected().count();
        let _ = writeln!(s, "{} results, {} unexpected", self.checks.len(), bad);
        s
    }
}
