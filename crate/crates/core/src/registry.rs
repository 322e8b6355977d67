//! Machine-readable table of the 23 mirror special modular K3 families and
//! the verification harness that runs the periods and Green pipelines over it.

use std::collections::BTreeSet;
use std::time::Instant;

use num_traits::One;
use rug::Float;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::green::{green_pair_with_cutoff, GreenError};
use crate::modgroup::{GroupSpec, ModError, PointH};
use crate::periods::{
    find_recurrence, frobenius_solutions, mirror_map, newton_polytope, parse_laurent,
    period_sequence, period_sequence_dense, rec_to_ode, singular_points, LaurentPolynomial3,
};

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
}

/// On-disk record shape; `schema_version` 1 is normative.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawRecord {
    pub id: String,
    pub fano: String,
    pub phi: String,
    pub group: String,
    pub status: String,
    pub notes: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RawRegistry {
    pub schema_version: u32,
    pub families: Vec<RawRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PhiEntry {
    /// Parsed polynomial plus the verbatim registry string.
    Explicit(LaurentPolynomial3, String),
    /// Reference into an external classification database ("#3873.2", ...).
    External(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyStatus {
    Proved,
    Conjectural,
}

#[derive(Debug, Clone)]
pub struct FamilyRecord {
    pub id: String,
    pub fano: String,
    pub phi: PhiEntry,
    pub group_label: String,
    /// Parsed group when the label has an explicit presentation.
    pub group: Option<GroupSpec>,
    pub status: FamilyStatus,
    pub notes: String,
}

impl FamilyRecord {
    pub fn to_raw(&self) -> RawRecord {
        RawRecord {
            id: self.id.clone(),
            fano: self.fano.clone(),
            phi: match &self.phi {
                PhiEntry::Explicit(_, s) => s.clone(),
                PhiEntry::External(r) => format!("external:{}", r),
            },
            group: self.group_label.clone(),
            status: match self.status {
                FamilyStatus::Proved => "proved".into(),
                FamilyStatus::Conjectural => "conjectural".into(),
            },
            notes: self.notes.clone(),
        }
    }
}

const CONJECTURAL_IDS: [&str; 5] = ["2-6", "2-12", "2-21", "2-32", "3-13"];
const EXTERNAL_PHI: [(&str, &str); 3] =
    [("2-6", "#3873.2"), ("2-12", "#1193"), ("3-1", "#3873.4")];
const FRICKE_ROWS: [u64; 9] = [2, 3, 4, 5, 6, 7, 8, 9, 11];

pub fn load_registry_str(text: &str) -> Result<Vec<FamilyRecord>, RegistryError> {
    let raw: RawRegistry =
        serde_json::from_str(text).map_err(|e| RegistryError::Parse(e.to_string()))?;
    if raw.schema_version != 1 {
        return Err(RegistryError::Parse(format!(
            "unsupported schema_version {}",
            raw.schema_version
        )));
    }
    let mut out = Vec::with_capacity(raw.families.len());
    for r in &raw.families {
        let phi = if let Some(ext) = r.phi.strip_prefix("external:") {
            PhiEntry::External(ext.to_string())
        } else {
            let p = parse_laurent(&r.phi).map_err(|e| {
                RegistryError::Parse(format!("row {}: bad phi: {}", r.id, e))
            })?;
            PhiEntry::Explicit(p, r.phi.clone())
        };
        let group = match GroupSpec::parse_label(&r.group) {
            Ok(g) => Some(g),
            Err(ModError::LabelOnly(_)) => None,
            Err(e) => {
                return Err(RegistryError::Parse(format!("row {}: bad group: {}", r.id, e)))
            }
        };
        let status = match r.status.as_str() {
            "proved" => FamilyStatus::Proved,
            "conjectural" => FamilyStatus::Conjectural,
            other => {
                return Err(RegistryError::Parse(format!(
                    "row {}: unknown status {:?}",
                    r.id, other
                )))
            }
        };
        out.push(FamilyRecord {
            id: r.id.clone(),
            fano: r.fano.clone(),
            phi,
            group_label: r.group.clone(),
            group,
            status,
            notes: r.notes.clone(),
        });
    }
    check_invariants(&out)?;
    Ok(out)
}

fn check_invariants(recs: &[FamilyRecord]) -> Result<(), RegistryError> {
    if recs.len() != 23 {
        return Err(RegistryError::Invariant(format!(
            "expected 23 records, found {}",
            recs.len()
        )));
    }
    let ids: BTreeSet<&str> = recs.iter().map(|r| r.id.as_str()).collect();
    if ids.len() != recs.len() {
        return Err(RegistryError::Invariant("duplicate record ids".into()));
    }
    let conj: BTreeSet<&str> = recs
        .iter()
        .filter(|r| r.status == FamilyStatus::Conjectural)
        .map(|r| r.id.as_str())
        .collect();
    let want: BTreeSet<&str> = CONJECTURAL_IDS.iter().copied().collect();
    if conj != want {
        return Err(RegistryError::Invariant(format!(
            "conjectural set must be {:?}, found {:?}",
            want, conj
        )));
    }
    let ext: Vec<(&str, &str)> = recs
        .iter()
        .filter_map(|r| match &r.phi {
            PhiEntry::External(e) => Some((r.id.as_str(), e.as_str())),
            _ => None,
        })
        .collect();
    let mut want_ext: Vec<(&str, &str)> = EXTERNAL_PHI.to_vec();
    let mut got_ext = ext.clone();
    want_ext.sort();
    got_ext.sort();
    if got_ext != want_ext {
        return Err(RegistryError::Invariant(format!(
            "external phi rows must be {:?}, found {:?}",
            want_ext, got_ext
        )));
    }
    for n in FRICKE_ROWS {
        let id = format!("{},1", n);
        let rec = recs
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| RegistryError::Invariant(format!("missing row {}", id)))?;
        let want = format!("G0({})+{}", n, n);
        if rec.group_label != want {
            return Err(RegistryError::Invariant(format!(
                "row {} group must be {}, found {}",
                id, want, rec.group_label
            )));
        }
    }
    Ok(())
}

pub fn load_registry(path: &std::path::Path) -> Result<Vec<FamilyRecord>, RegistryError> {
    let text = std::fs::read_to_string(path)?;
    load_registry_str(&text)
}

/// The registry text shipped with the crate (data/families.json at the
/// workspace root).
pub const DEFAULT_REGISTRY_TEXT: &str = include_str!("../../../data/families.json");

/// Load the default registry, honoring the GZ4_REGISTRY path override.
pub fn default_registry() -> Result<Vec<FamilyRecord>, RegistryError> {
    if let Ok(path) = std::env::var("GZ4_REGISTRY") {
        return load_registry(std::path::Path::new(&path));
    }
    load_registry_str(DEFAULT_REGISTRY_TEXT)
}

// ---------------------------------------------------------------------------
// Verification harness
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Depth {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    pub millis: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyReport {
    pub id: String,
    pub group: String,
    pub status: FamilyStatus,
    pub checks: Vec<CheckResult>,
}

impl FamilyReport {
    pub fn failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }
    /// Fully checked = at least one check ran and none were skipped.
    pub fn fully_checked(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }
}

fn run_check(
    checks: &mut Vec<CheckResult>,
    name: &str,
    body: impl FnOnce() -> (CheckStatus, String),
) {
    let start = Instant::now();
    let (status, detail) = body();
    checks.push(CheckResult {
        name: name.to_string(),
        status,
        detail,
        millis: start.elapsed().as_millis(),
    });
}

fn skip(checks: &mut Vec<CheckResult>, name: &str, why: &str) {
    checks.push(CheckResult {
        name: name.to_string(),
        status: CheckStatus::Skipped,
        detail: why.to_string(),
        millis: 0,
    });
}

/// Expected number of finite nonzero singular points of the Picard-Fuchs
/// operator, where known.
fn expected_singular_count(id: &str) -> Option<usize> {
    match id {
        "2,1" | "3,1" | "4,1" => Some(1),
        "5,1" | "6,1" | "7,1" | "8,1" | "9,1" => Some(2),
        "11,1" => Some(4),
        _ => None,
    }
}

/// Families whose mirror map is verified integral through order 20.
fn integrality_scope(id: &str) -> bool {
    matches!(id, "2,1" | "3,1" | "4,1" | "3-27" | "4-1")
}

struct PeriodsArtifacts {
    op: Option<crate::periods::HolonomicOperator>,
}

fn verify_periods(
    checks: &mut Vec<CheckResult>,
    phi: &LaurentPolynomial3,
    depth: Depth,
) -> PeriodsArtifacts {
    run_check(checks, "polytope_reflexive", || {
        match newton_polytope(phi).and_then(|p| p.is_reflexive()) {
            Ok(true) => (CheckStatus::Pass, "Newton polytope is reflexive".into()),
            Ok(false) => (CheckStatus::Fail, "Newton polytope is not reflexive".into()),
            Err(e) => (CheckStatus::Fail, format!("polytope error: {}", e)),
        }
    });
    run_check(checks, "periods_vs_oracle", || {
        let fast = period_sequence(phi, 12);
        let dense = period_sequence_dense(phi, 12);
        if fast.terms == dense.terms {
            (
                CheckStatus::Pass,
                format!("12 terms match the dense oracle; a_1={}", fast.terms[1]),
            )
        } else {
            (CheckStatus::Fail, "period terms disagree with the dense oracle".into())
        }
    });
    // recurrence recovery; 56 terms covers order <= 4, degree <= 6 with the
    // over-determination margin
    let seq = period_sequence(phi, 56);
    let op = find_recurrence(&seq, 4, 6);
    run_check(checks, "recurrence_found", || match &op {
        Some(op) => (
            CheckStatus::Pass,
            format!("order {} recurrence", op.rec_order().unwrap_or(0)),
        ),
        None => (
            CheckStatus::Fail,
            "no recurrence of order <= 4, degree <= 6 in 56 terms".into(),
        ),
    });
    if depth == Depth::Full {
        run_check(checks, "recurrence_predicts", || match &op {
            Some(op) => {
                let longer = period_sequence(phi, 61);
                match crate::periods::predict_terms(op, &seq.terms, 5) {
                    Some(pred) => {
                        let ok = pred.iter().zip(longer.terms[57..=61].iter()).all(|(p, t)| {
                            p.is_integer() && p.numer() == t
                        });
                        if ok {
                            (CheckStatus::Pass, "5 extra terms predicted exactly".into())
                        } else {
                            (CheckStatus::Fail, "prediction mismatch".into())
                        }
                    }
                    None => (CheckStatus::Fail, "operator cannot predict".into()),
                }
            }
            None => (CheckStatus::Skipped, "no operator".into()),
        });
    }
    PeriodsArtifacts { op }
}

fn verify_full_extras(checks: &mut Vec<CheckResult>, id: &str, art: &PeriodsArtifacts) {
    // singular count where an expectation exists
    match (expected_singular_count(id), &art.op) {
        (Some(expect), Some(op)) => run_check(checks, "singular_count", || {
            match rec_to_ode(op).and_then(|ode| singular_points(&ode)) {
                Ok(locus) => {
                    if locus.finite_count == expect {
                        (
                            CheckStatus::Pass,
                            format!("{} finite nonzero singular points", locus.finite_count),
                        )
                    } else {
                        (
                            CheckStatus::Fail,
                            format!(
                                "expected {} finite nonzero singular points, found {}",
                                expect, locus.finite_count
                            ),
                        )
                    }
                }
                Err(e) => (CheckStatus::Fail, format!("singular locus: {}", e)),
            }
        }),
        (Some(_), None) => skip(checks, "singular_count", "no operator"),
        (None, _) => skip(checks, "singular_count", "no stated expectation"),
    }
    // mirror-map integrality through order 20
    if integrality_scope(id) {
        match &art.op {
            Some(op) => run_check(checks, "mirror_map_integral", || {
                let ode = match rec_to_ode(op) {
                    Ok(o) => o,
                    Err(e) => return (CheckStatus::Fail, format!("ode conversion: {}", e)),
                };
                let fr = match frobenius_solutions(&ode, 26) {
                    Ok(f) => f,
                    Err(e) => return (CheckStatus::Fail, format!("frobenius: {}", e)),
                };
                let mm = mirror_map(&fr);
                for k in 0..=20usize {
                    let c = mm.t_of_q.coeff(k);
                    if !c.denom().is_one() {
                        return (
                            CheckStatus::Fail,
                            format!("t(q) coefficient {} is not integral: {}", k, c),
                        );
                    }
                }
                (CheckStatus::Pass, "t(q) integral through order 20".into())
            }),
            None => skip(checks, "mirror_map_integral", "no operator"),
        }
    } else {
        skip(checks, "mirror_map_integral", "outside the verified integrality scope");
    }
}

fn green_smoke(checks: &mut Vec<CheckResult>, group: &GroupSpec) {
    run_check(checks, "green_smoke", || {
        let prec = 96u32;
        let tau = PointH::new(Float::with_val(prec, 0.11), Float::with_val(prec, 1.23));
        let sigma = PointH::new(Float::with_val(prec, -0.31), Float::with_val(prec, 0.77));
        let target = Float::with_val(prec, 1e-6);
        let a = match green_pair_with_cutoff(group, &tau, &sigma, &target, Some(1.0e5)) {
            Ok(v) => v,
            Err(GreenError::PoleHit) | Err(GreenError::DegeneratePole) => {
                return (CheckStatus::Skipped, "evaluation point degenerate".into())
            }
            Err(e) => return (CheckStatus::Fail, format!("evaluation failed: {}", e)),
        };
        let b = match green_pair_with_cutoff(group, &tau, &sigma, &target, Some(4.0e5)) {
            Ok(v) => v,
            Err(e) => return (CheckStatus::Fail, format!("evaluation failed: {}", e)),
        };
        let diff = (a.value.clone() - &b.value).abs();
        if diff <= a.error_bound {
            (
                CheckStatus::Pass,
                format!(
                    "two-cutoff agreement: |dG| = {:.3e} <= bound {:.3e}",
                    diff.to_f64(),
                    a.error_bound.to_f64()
                ),
            )
        } else {
            (
                CheckStatus::Fail,
                format!(
                    "two-cutoff violation: |dG| = {:.3e} > bound {:.3e}",
                    diff.to_f64(),
                    a.error_bound.to_f64()
                ),
            )
        }
    });
}

pub fn verify_family(rec: &FamilyRecord, depth: Depth) -> FamilyReport {
    let mut checks = Vec::new();
    match &rec.phi {
        PhiEntry::Explicit(phi, _) => {
            let art = verify_periods(&mut checks, phi, depth);
            if depth == Depth::Full {
                verify_full_extras(&mut checks, &rec.id, &art);
            }
        }
        PhiEntry::External(r) => {
            skip(&mut checks, "polytope_reflexive", &format!("polynomial external ({})", r));
            skip(&mut checks, "periods_vs_oracle", &format!("polynomial external ({})", r));
            skip(&mut checks, "recurrence_found", &format!("polynomial external ({})", r));
        }
    }
    match (&rec.group, depth) {
        (Some(g), Depth::Full) => green_smoke(&mut checks, g),
        (Some(_), Depth::Quick) => {}
        (None, Depth::Full) => {
            skip(&mut checks, "green_smoke", "group has no explicit presentation")
        }
        (None, Depth::Quick) => {}
    }
    FamilyReport {
        id: rec.id.clone(),
        group: rec.group_label.clone(),
        status: rec.status,
        checks,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AggregateReport {
    pub depth: Depth,
    pub total: usize,
    pub fully_checked: usize,
    pub partially_checked: usize,
    pub failed: usize,
    pub families: Vec<FamilyReport>,
}

pub fn verify_all(recs: &[FamilyRecord], depth: Depth) -> AggregateReport {
    let families: Vec<FamilyReport> = recs.iter().map(|r| verify_family(r, depth)).collect();
    let fully = families.iter().filter(|f| f.fully_checked()).count();
    let failed = families.iter().filter(|f| f.failed()).count();
    AggregateReport {
        depth,
        total: families.len(),
        fully_checked: fully,
        partially_checked: families.len() - fully - failed,
        failed,
        families,
    }
}
