//! Core data model and classical-representability tests.
//!
//! A triple of membership weights for two concepts and their combination is
//! classically representable iff one probability measure on the four Boolean
//! atoms (`A∩B`, `A∩¬B`, `¬A∩B`, `¬A∩¬B`) reproduces all three weights. Two
//! equivalent routes are implemented: the closed-form inequality pair
//! (`delta`, `k`) and a brute-force atom decomposition
//! ([`kolmogorov_oracle`]). [`classify`] computes both and cross-checks them.

use std::collections::BTreeSet;

use serde::Serialize;
use thiserror::Error;

/// Inequality boundaries are tested with this guard so that the closed-form
/// conditions and the atom oracle agree bit-for-bit on data that lands within
/// rounding error of a boundary.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DomainError {
    #[error("{name} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    #[error("exemplar label must be nonempty")]
    EmptyExemplar,
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<f64, DomainError> {
    if value.is_finite() && (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(DomainError::OutOfRange {
            name,
            value,
            lo: 0.0,
            hi: 1.0,
        })
    }
}

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    lo: f64,
    hi: f64,
) -> Result<f64, DomainError> {
    if value.is_finite() && (lo..=hi).contains(&value) {
        Ok(value)
    } else {
        Err(DomainError::OutOfRange {
            name,
            value,
            lo,
            hi,
        })
    }
}

/// Whether the combination under study is `A and B` or `A or B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum CombinationKind {
    #[serde(rename = "and")]
    Conjunction,
    #[serde(rename = "or")]
    Disjunction,
}

impl CombinationKind {
    /// Parses the CSV token, case-insensitively.
    pub fn parse_token(token: &str) -> Option<Self> {
        match token.to_ascii_lowercase().as_str() {
            "and" => Some(Self::Conjunction),
            "or" => Some(Self::Disjunction),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            Self::Conjunction => "and",
            Self::Disjunction => "or",
        }
    }
}

impl std::fmt::Display for CombinationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// One exemplar's observed weights for two concepts and their combination.
///
/// Construction validates that all three weights lie in `[0, 1]` and that the
/// exemplar label is nonempty; every function in this crate may rely on those
/// invariants.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipRecord {
    exemplar: String,
    concept_a: String,
    concept_b: String,
    mu_a: f64,
    mu_b: f64,
    mu_comb: f64,
    kind: CombinationKind,
}

impl MembershipRecord {
    pub fn new(
        exemplar: impl Into<String>,
        concept_a: impl Into<String>,
        concept_b: impl Into<String>,
        mu_a: f64,
        mu_b: f64,
        mu_comb: f64,
        kind: CombinationKind,
    ) -> Result<Self, DomainError> {
        let exemplar = exemplar.into();
        if exemplar.is_empty() {
            return Err(DomainError::EmptyExemplar);
        }
        Ok(Self {
            exemplar,
            concept_a: concept_a.into(),
            concept_b: concept_b.into(),
            mu_a: check_unit("mu_a", mu_a)?,
            mu_b: check_unit("mu_b", mu_b)?,
            mu_comb: check_unit("mu_comb", mu_comb)?,
            kind,
        })
    }

    pub fn exemplar(&self) -> &str {
        &self.exemplar
    }

    pub fn concept_a(&self) -> &str {
        &self.concept_a
    }

    pub fn concept_b(&self) -> &str {
        &self.concept_b
    }

    pub fn mu_a(&self) -> f64 {
        self.mu_a
    }

    pub fn mu_b(&self) -> f64 {
        self.mu_b
    }

    pub fn mu_comb(&self) -> f64 {
        self.mu_comb
    }

    pub fn kind(&self) -> CombinationKind {
        self.kind
    }

    /// Identity used for duplicate detection in datasets.
    pub(crate) fn key(&self) -> (String, String, String, CombinationKind) {
        (
            self.exemplar.clone(),
            self.concept_a.clone(),
            self.concept_b.clone(),
            self.kind,
        )
    }
}

/// Conjunction conditions: `delta = mu_and - min(mu_a, mu_b)` and
/// `k = 1 - mu_a - mu_b + mu_and`. The triple is classically representable
/// iff `delta <= 0` and `k >= 0`.
pub fn conjunction_diagnostics(
    mu_a: f64,
    mu_b: f64,
    mu_and: f64,
) -> Result<(f64, f64), DomainError> {
    check_unit("mu_a", mu_a)?;
    check_unit("mu_b", mu_b)?;
    check_unit("mu_and", mu_and)?;
    Ok(conjunction_delta_k(mu_a, mu_b, mu_and))
}

/// Disjunction conditions: `delta = max(mu_a, mu_b) - mu_or` and
/// `k = mu_a + mu_b - mu_or`. Representable iff `delta <= 0` and `k >= 0`.
pub fn disjunction_diagnostics(
    mu_a: f64,
    mu_b: f64,
    mu_or: f64,
) -> Result<(f64, f64), DomainError> {
    check_unit("mu_a", mu_a)?;
    check_unit("mu_b", mu_b)?;
    check_unit("mu_or", mu_or)?;
    Ok(disjunction_delta_k(mu_a, mu_b, mu_or))
}

// (mu_a + mu_b) is grouped so both diagnostics are bit-exact under swapping
// the two weights.
fn conjunction_delta_k(mu_a: f64, mu_b: f64, mu_and: f64) -> (f64, f64) {
    (mu_and - mu_a.min(mu_b), 1.0 - (mu_a + mu_b) + mu_and)
}

fn disjunction_delta_k(mu_a: f64, mu_b: f64, mu_or: f64) -> (f64, f64) {
    (mu_a.max(mu_b) - mu_or, mu_a + mu_b - mu_or)
}

pub(crate) fn delta_k(record: &MembershipRecord) -> (f64, f64) {
    match record.kind {
        CombinationKind::Conjunction => {
            conjunction_delta_k(record.mu_a, record.mu_b, record.mu_comb)
        }
        CombinationKind::Disjunction => {
            disjunction_delta_k(record.mu_a, record.mu_b, record.mu_comb)
        }
    }
}

/// The four joint probabilities of a classical model for one record.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AtomDecomposition {
    pub p_ab: f64,
    pub p_a_notb: f64,
    pub p_nota_b: f64,
    pub p_nota_notb: f64,
}

impl AtomDecomposition {
    pub fn sum(&self) -> f64 {
        self.p_ab + self.p_a_notb + self.p_nota_b + self.p_nota_notb
    }

    pub fn marginal_a(&self) -> f64 {
        self.p_ab + self.p_a_notb
    }

    pub fn marginal_b(&self) -> f64 {
        self.p_ab + self.p_nota_b
    }

    /// Recovers the combination weight this decomposition carries.
    pub fn combination(&self, kind: CombinationKind) -> f64 {
        match kind {
            CombinationKind::Conjunction => self.p_ab,
            CombinationKind::Disjunction => self.p_ab + self.p_a_notb + self.p_nota_b,
        }
    }
}

/// Attempts the unique atom decomposition for the record. Returns it iff all
/// four atoms are nonnegative (values in `[-BOUNDARY_TOL, 0)` are clamped to
/// zero); otherwise no classical model exists and `None` is returned.
pub fn kolmogorov_oracle(record: &MembershipRecord) -> Option<AtomDecomposition> {
    let (a, b, c) = (record.mu_a, record.mu_b, record.mu_comb);
    let atoms = match record.kind {
        CombinationKind::Conjunction => [c, a - c, b - c, 1.0 - (a + b) + c],
        CombinationKind::Disjunction => [a + b - c, c - b, c - a, 1.0 - c],
    };
    if atoms.iter().any(|&p| p < -BOUNDARY_TOL) {
        return None;
    }
    let clamped: Vec<f64> = atoms.iter().map(|&p| p.max(0.0)).collect();
    Some(AtomDecomposition {
        p_ab: clamped[0],
        p_a_notb: clamped[1],
        p_nota_b: clamped[2],
        p_nota_notb: clamped[3],
    })
}

/// Deviation flags. `Overextended`/`Underextended` report a strictly positive
/// `delta` for the matching kind; the `Double*` variants mark combination
/// weights beyond *both* constituent weights; `KViolation` marks `k < 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassificationFlag {
    Overextended,
    Underextended,
    DoubleOverextended,
    DoubleUnderextended,
    KViolation,
}

impl ClassificationFlag {
    pub const ALL: [Self; 5] = [
        Self::Overextended,
        Self::Underextended,
        Self::DoubleOverextended,
        Self::DoubleUnderextended,
        Self::KViolation,
    ];
}

/// Outcome of [`classify`]: the `(delta, k)` diagnostics, deviation flags,
/// the classical verdict and, when one exists, the atom decomposition.
///
/// Invariant: `classical` is true iff `atoms` is present, and iff
/// `delta <= 0 && k >= 0` (boundaries guarded by [`BOUNDARY_TOL`]).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalityReport {
    pub delta: f64,
    pub k: f64,
    pub classical: bool,
    pub flags: BTreeSet<ClassificationFlag>,
    pub atoms: Option<AtomDecomposition>,
}

/// Runs both representability routes on the record and assembles the report.
///
/// The closed-form verdict and the oracle are always cross-checked; they are
/// algebraically equivalent, so a mismatch would mean a defect in one route.
pub fn classify(record: &MembershipRecord) -> ClassicalityReport {
    let (delta, k) = delta_k(record);
    let classical = delta <= BOUNDARY_TOL && k >= -BOUNDARY_TOL;
    let atoms = kolmogorov_oracle(record);
    debug_assert_eq!(
        classical,
        atoms.is_some(),
        "closed-form conditions disagree with the atom oracle for {record:?}"
    );

    let mut flags = BTreeSet::new();
    if delta > BOUNDARY_TOL {
        flags.insert(match record.kind {
            CombinationKind::Conjunction => ClassificationFlag::Overextended,
            CombinationKind::Disjunction => ClassificationFlag::Underextended,
        });
    }
    match record.kind {
        CombinationKind::Conjunction => {
            if record.mu_comb > record.mu_a.max(record.mu_b) + BOUNDARY_TOL {
                flags.insert(ClassificationFlag::DoubleOverextended);
            }
        }
        CombinationKind::Disjunction => {
            if record.mu_comb < record.mu_a.min(record.mu_b) - BOUNDARY_TOL {
                flags.insert(ClassificationFlag::DoubleUnderextended);
            }
        }
    }
    if k < -BOUNDARY_TOL {
        flags.insert(ClassificationFlag::KViolation);
    }

    ClassicalityReport {
        delta,
        k,
        classical,
        flags,
        atoms,
    }
}
