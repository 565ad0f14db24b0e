//! Closed-form evaluation and fitting of the two-sector membership model.
//!
//! The model value for a combination is a weighted mix of two contributions:
//! sector 2 treats the combination as a logical connective applied to two
//! independent copies of the exemplar (`mu_a * mu_b` for a conjunction,
//! `mu_a + mu_b - mu_a * mu_b` for a disjunction), while sector 1 treats the
//! combination as a single emergent concept and contributes the average
//! `(mu_a + mu_b) / 2` plus an interference term
//! `sqrt((1 - mu_a)(1 - mu_b)) * cos(theta)`.
//!
//! Two algebraic placements of the interference term are in circulation, so
//! both are first-class here as [`ModelVariant`]; see its documentation.

use serde::Serialize;
use thiserror::Error;

use crate::classicality::{check_range, check_unit, CombinationKind, DomainError, MembershipRecord};

/// `|cos theta|` may overshoot 1 by this much before a fit target is declared
/// unreachable; overshoots within the guard are clamped. Matches two-decimal
/// input data.
pub const FIT_COS_TOL: f64 = 1e-9;

/// Residuals below this are treated as exactly zero when the interference
/// coefficient vanishes.
const RESIDUAL_TOL: f64 = 1e-12;

/// Bisection granularity for sector-weight searches.
const M_SQ_GRANULARITY: f64 = 1e-6;

/// Where the interference term enters the combination formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelVariant {
    /// Interference scaled by the sector-1 weight:
    /// `m² s2 + n² (avg + I cosθ)`.
    Printed,
    /// Interference added outside the sector weights:
    /// `m² s2 + n² avg + I cosθ`.
    UnscaledInterference,
}

impl ModelVariant {
    pub const ALL: [Self; 2] = [Self::Printed, Self::UnscaledInterference];

    pub fn token(self) -> &'static str {
        match self {
            Self::Printed => "printed",
            Self::UnscaledInterference => "unscaled",
        }
    }

    pub fn parse_token(token: &str) -> Option<Self> {
        match token.to_ascii_lowercase().as_str() {
            "printed" => Some(Self::Printed),
            "unscaled" => Some(Self::UnscaledInterference),
            _ => None,
        }
    }
}

impl std::fmt::Display for ModelVariant {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.token())
    }
}

/// Which of the two modes carries more weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DominanceLabel {
    EmergentDominant,
    LogicalDominant,
    Balanced,
}

/// How [`fit_params`] chooses the sector weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitStrategy {
    /// Pin the sector-2 weight and fit only the angle.
    FixedM(f64),
    /// Smallest sector-2 weight (largest emergent participation) that still
    /// reproduces the target, located by bisection to 1e-6.
    MaxSector1,
    /// The weight/angle pair minimizing `|cos theta|` subject to exact
    /// reproduction; lands on `theta = 90°` whenever the target is reachable
    /// without interference.
    MidpointTheta,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FitError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("target requires cos theta = {cos_theta:.6}, outside [-1, 1]")]
    InfeasibleTheta { cos_theta: f64 },
    #[error("interference coefficient is zero but the target leaves residual {residual:.6}")]
    DegenerateInterference { residual: f64 },
    #[error("no sector weights and angle reach {target:.6}; representable interval is [{lo:.6}, {hi:.6}]")]
    InfeasibleModel { target: f64, lo: f64, hi: f64 },
}

/// Fitted or supplied model parameters for one record.
///
/// `m_sq` weights sector 2 (the logical mode), `n_sq = 1 - m_sq` weights
/// sector 1 (the emergent mode). The interference angle is held in degrees;
/// trigonometry happens in radians internally. The two phases rotate the
/// sector states and provably never affect the model value; they exist so the
/// explicit construction can demonstrate exactly that.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    m_sq: f64,
    n_sq: f64,
    theta_deg: f64,
    lambda_phase: f64,
    nu_phase: f64,
    kind: CombinationKind,
    variant: ModelVariant,
}

impl ModelParams {
    pub fn new(
        m_sq: f64,
        theta_deg: f64,
        kind: CombinationKind,
        variant: ModelVariant,
    ) -> Result<Self, DomainError> {
        check_unit("m_sq", m_sq)?;
        check_range("theta_deg", theta_deg, 0.0, 180.0)?;
        Ok(Self {
            m_sq,
            n_sq: 1.0 - m_sq,
            theta_deg,
            lambda_phase: 0.0,
            nu_phase: 0.0,
            kind,
            variant,
        })
    }

    /// Sets the sector phases (radians). They cancel in every expectation
    /// value; nonzero values are useful only for exercising that invariant.
    pub fn with_phases(mut self, lambda_phase: f64, nu_phase: f64) -> Self {
        self.lambda_phase = lambda_phase;
        self.nu_phase = nu_phase;
        self
    }

    pub fn m_sq(&self) -> f64 {
        self.m_sq
    }

    pub fn n_sq(&self) -> f64 {
        self.n_sq
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn lambda_phase(&self) -> f64 {
        self.lambda_phase
    }

    pub fn nu_phase(&self) -> f64 {
        self.nu_phase
    }

    pub fn kind(&self) -> CombinationKind {
        self.kind
    }

    pub fn variant(&self) -> ModelVariant {
        self.variant
    }
}

/// A model value together with a flag telling whether it lies in `[0, 1]`
/// (within a 1e-12 guard). Out-of-range values are not clamped: they mark
/// parameter regions the state-space construction cannot realize.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelValue {
    pub value: f64,
    pub in_range: bool,
}

impl ModelValue {
    fn new(value: f64) -> Self {
        Self {
            value,
            in_range: (-1e-12..=1.0 + 1e-12).contains(&value),
        }
    }
}

/// `sqrt((1 - mu_a)(1 - mu_b))`, the largest interference contribution the
/// construction supports at these weights.
pub fn interference_magnitude(mu_a: f64, mu_b: f64) -> Result<f64, DomainError> {
    check_unit("mu_a", mu_a)?;
    check_unit("mu_b", mu_b)?;
    Ok(((1.0 - mu_a) * (1.0 - mu_b)).sqrt())
}

/// The interference contribution at given weights and angle:
/// `value = magnitude * cos_theta`, so `|value| <= magnitude`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InterferenceTerm {
    pub magnitude: f64,
    pub cos_theta: f64,
    pub value: f64,
}

impl InterferenceTerm {
    fn at(magnitude: f64, theta_deg: f64) -> Self {
        let cos_theta = theta_deg.to_radians().cos();
        Self {
            magnitude,
            cos_theta,
            value: magnitude * cos_theta,
        }
    }
}

pub fn interference_term(
    mu_a: f64,
    mu_b: f64,
    theta_deg: f64,
) -> Result<InterferenceTerm, DomainError> {
    let magnitude = interference_magnitude(mu_a, mu_b)?;
    check_range("theta_deg", theta_deg, 0.0, 180.0)?;
    Ok(InterferenceTerm::at(magnitude, theta_deg))
}

/// The three building blocks of the closed form at fixed weights.
#[derive(Debug, Clone, Copy)]
struct Geometry {
    /// Pure sector-2 value: product (conjunction) or probabilistic union
    /// (disjunction) of the two weights.
    sector2: f64,
    /// Sector-1 averaging term.
    average: f64,
    magnitude: f64,
}

impl Geometry {
    fn new(mu_a: f64, mu_b: f64, kind: CombinationKind) -> Self {
        let sector2 = match kind {
            CombinationKind::Conjunction => mu_a * mu_b,
            CombinationKind::Disjunction => mu_a + mu_b - mu_a * mu_b,
        };
        Self {
            sector2,
            average: (mu_a + mu_b) / 2.0,
            magnitude: ((1.0 - mu_a) * (1.0 - mu_b)).sqrt(),
        }
    }

    /// What multiplies `cos theta` in the closed form.
    fn coefficient(&self, n_sq: f64, variant: ModelVariant) -> f64 {
        match variant {
            ModelVariant::Printed => n_sq * self.magnitude,
            ModelVariant::UnscaledInterference => self.magnitude,
        }
    }

    /// Model value minus every theta-independent term.
    fn residual(&self, m_sq: f64, target: f64) -> f64 {
        target - m_sq * self.sector2 - (1.0 - m_sq) * self.average
    }

    fn value(&self, m_sq: f64, theta_deg: f64, variant: ModelVariant) -> f64 {
        let n_sq = 1.0 - m_sq;
        let interference = InterferenceTerm::at(self.magnitude, theta_deg).value;
        match variant {
            ModelVariant::Printed => m_sq * self.sector2 + n_sq * (self.average + interference),
            ModelVariant::UnscaledInterference => {
                m_sq * self.sector2 + n_sq * self.average + interference
            }
        }
    }
}

/// Evaluates the model at the given weights, dispatching on `params.kind`.
pub fn eval(mu_a: f64, mu_b: f64, params: &ModelParams) -> Result<ModelValue, DomainError> {
    check_unit("mu_a", mu_a)?;
    check_unit("mu_b", mu_b)?;
    let geom = Geometry::new(mu_a, mu_b, params.kind);
    Ok(ModelValue::new(geom.value(
        params.m_sq,
        params.theta_deg,
        params.variant,
    )))
}

/// Conjunction closed form. Panics if `params.kind` is not `Conjunction`.
pub fn eval_conjunction(
    mu_a: f64,
    mu_b: f64,
    params: &ModelParams,
) -> Result<ModelValue, DomainError> {
    assert_eq!(
        params.kind,
        CombinationKind::Conjunction,
        "eval_conjunction called with disjunction parameters"
    );
    eval(mu_a, mu_b, params)
}

/// Disjunction closed form. Panics if `params.kind` is not `Disjunction`.
pub fn eval_disjunction(
    mu_a: f64,
    mu_b: f64,
    params: &ModelParams,
) -> Result<ModelValue, DomainError> {
    assert_eq!(
        params.kind,
        CombinationKind::Disjunction,
        "eval_disjunction called with conjunction parameters"
    );
    eval(mu_a, mu_b, params)
}

/// Inverts the closed form for the angle at a pinned sector-2 weight.
/// Returns the angle in degrees.
///
/// When the interference coefficient vanishes (a weight equal to 1, or a zero
/// sector-1 weight under [`ModelVariant::Printed`]) the angle is
/// unconstrained: the fit succeeds with the midpoint angle 90° if the
/// remaining terms already reproduce the target, and fails with
/// [`FitError::DegenerateInterference`] otherwise.
pub fn fit_theta(
    mu_a: f64,
    mu_b: f64,
    mu_target: f64,
    m_sq: f64,
    kind: CombinationKind,
    variant: ModelVariant,
) -> Result<f64, FitError> {
    check_unit("mu_a", mu_a)?;
    check_unit("mu_b", mu_b)?;
    check_unit("mu_target", mu_target)?;
    check_unit("m_sq", m_sq)?;
    let geom = Geometry::new(mu_a, mu_b, kind);
    fit_theta_inner(&geom, mu_target, m_sq, variant)
}

fn fit_theta_inner(
    geom: &Geometry,
    mu_target: f64,
    m_sq: f64,
    variant: ModelVariant,
) -> Result<f64, FitError> {
    let coefficient = geom.coefficient(1.0 - m_sq, variant);
    let residual = geom.residual(m_sq, mu_target);
    if coefficient == 0.0 {
        return if residual.abs() <= RESIDUAL_TOL {
            Ok(90.0)
        } else {
            Err(FitError::DegenerateInterference { residual })
        };
    }
    let cos_theta = residual / coefficient;
    if cos_theta.abs() > 1.0 + FIT_COS_TOL {
        return Err(FitError::InfeasibleTheta { cos_theta });
    }
    Ok(cos_theta.clamp(-1.0, 1.0).acos().to_degrees())
}

/// Closure of the set of values the model can reach at these weights over all
/// sector weights and angles.
pub fn representable_interval(
    mu_a: f64,
    mu_b: f64,
    kind: CombinationKind,
    variant: ModelVariant,
) -> Result<(f64, f64), DomainError> {
    check_unit("mu_a", mu_a)?;
    check_unit("mu_b", mu_b)?;
    let g = Geometry::new(mu_a, mu_b, kind);
    Ok(match variant {
        // Every value is a convex mix of the sector-2 point and a point in
        // the sector-1 band [average - I, average + I].
        ModelVariant::Printed => (
            g.sector2.min(g.average - g.magnitude),
            g.sector2.max(g.average + g.magnitude),
        ),
        // The mix spans [min, max] of the two sector terms; interference
        // shifts it by up to I either way.
        ModelVariant::UnscaledInterference => (
            g.sector2.min(g.average) - g.magnitude,
            g.sector2.max(g.average) + g.magnitude,
        ),
    })
}

/// Fits model parameters reproducing the record's combination weight to
/// within 1e-9 under the requested strategy.
pub fn fit_params(
    record: &MembershipRecord,
    strategy: FitStrategy,
    variant: ModelVariant,
) -> Result<ModelParams, FitError> {
    let geom = Geometry::new(record.mu_a(), record.mu_b(), record.kind());
    let target = record.mu_comb();
    let (lo, hi) = representable_interval(record.mu_a(), record.mu_b(), record.kind(), variant)?;
    if target < lo - RESIDUAL_TOL || target > hi + RESIDUAL_TOL {
        return Err(FitError::InfeasibleModel { target, lo, hi });
    }

    let build = |m_sq: f64, theta_deg: f64| {
        ModelParams::new(m_sq, theta_deg, record.kind(), variant).map_err(FitError::from)
    };

    match strategy {
        FitStrategy::FixedM(m_sq) => {
            check_unit("m_sq", m_sq)?;
            let theta = fit_theta_inner(&geom, target, m_sq, variant)?;
            build(m_sq, theta)
        }
        FitStrategy::MaxSector1 => {
            let m_sq = smallest_feasible_m_sq(&geom, target, variant)?;
            let theta = fit_theta_inner(&geom, target, m_sq, variant)?;
            build(m_sq, theta)
        }
        FitStrategy::MidpointTheta => {
            let (m_sq, theta) = midpoint_theta(&geom, target, variant)?;
            build(m_sq, theta)
        }
    }
}

fn feasible(geom: &Geometry, target: f64, m_sq: f64, variant: ModelVariant) -> bool {
    fit_theta_inner(geom, target, m_sq, variant).is_ok()
}

/// Sector-2 weight at which the theta-independent terms alone hit the target,
/// if one exists in [0, 1].
fn zero_residual_m_sq(geom: &Geometry, target: f64) -> Option<f64> {
    let span = geom.sector2 - geom.average;
    if span == 0.0 {
        return ((target - geom.average).abs() <= RESIDUAL_TOL).then_some(0.0);
    }
    let root = (target - geom.average) / span;
    (-RESIDUAL_TOL..=1.0 + RESIDUAL_TOL)
        .contains(&root)
        .then(|| root.clamp(0.0, 1.0))
}

/// A weight from which boundary bisection can start. The feasible set in
/// `m_sq` is a closed interval; when the target is representable it always
/// contains 0, the zero-residual weight, or 1, so probing those three covers
/// every case.
fn feasibility_seed(geom: &Geometry, target: f64, variant: ModelVariant) -> Option<f64> {
    [0.0, zero_residual_m_sq(geom, target).unwrap_or(f64::NAN), 1.0]
        .into_iter()
        .find(|&m| m.is_finite() && feasible(geom, target, m, variant))
}

fn smallest_feasible_m_sq(
    geom: &Geometry,
    target: f64,
    variant: ModelVariant,
) -> Result<f64, FitError> {
    if feasible(geom, target, 0.0, variant) {
        return Ok(0.0);
    }
    let seed = feasibility_seed(geom, target, variant).ok_or_else(|| {
        // Representability was already checked; reaching this means the
        // boundary sits within the cosine guard. Report the residual there.
        FitError::InfeasibleTheta {
            cos_theta: geom.residual(0.0, target) / geom.coefficient(1.0, variant),
        }
    })?;
    let (mut lo, mut hi) = (0.0, seed);
    while hi - lo > M_SQ_GRANULARITY {
        let mid = 0.5 * (lo + hi);
        if feasible(geom, target, mid, variant) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn largest_feasible_m_sq(geom: &Geometry, target: f64, variant: ModelVariant, seed: f64) -> f64 {
    if feasible(geom, target, 1.0, variant) {
        return 1.0;
    }
    let (mut lo, mut hi) = (seed, 1.0);
    while hi - lo > M_SQ_GRANULARITY {
        let mid = 0.5 * (lo + hi);
        if feasible(geom, target, mid, variant) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Minimizes `|cos theta|` over the feasible weights. With a zero-residual
/// weight available the minimum is 0 and the angle is 90°; otherwise
/// `cos theta` keeps one sign and is monotone in the weight, so the minimum
/// sits at an end of the feasible interval. Ties prefer the smaller weight.
fn midpoint_theta(
    geom: &Geometry,
    target: f64,
    variant: ModelVariant,
) -> Result<(f64, f64), FitError> {
    if let Some(m_sq) = zero_residual_m_sq(geom, target) {
        if feasible(geom, target, m_sq, variant) {
            return Ok((m_sq, fit_theta_inner(geom, target, m_sq, variant)?));
        }
    }
    let low_end = smallest_feasible_m_sq(geom, target, variant)?;
    let high_end = largest_feasible_m_sq(geom, target, variant, low_end);
    let cos_at = |m_sq: f64| {
        let coefficient = geom.coefficient(1.0 - m_sq, variant);
        if coefficient == 0.0 {
            0.0
        } else {
            (geom.residual(m_sq, target) / coefficient).abs()
        }
    };
    let m_sq = if cos_at(low_end) <= cos_at(high_end) {
        low_end
    } else {
        high_end
    };
    Ok((m_sq, fit_theta_inner(geom, target, m_sq, variant)?))
}

/// Which mode dominates the fitted state, by sector weight.
pub fn dominance_report(params: &ModelParams) -> DominanceLabel {
    let diff = params.n_sq - params.m_sq;
    if diff.abs() <= 1e-12 {
        DominanceLabel::Balanced
    } else if diff > 0.0 {
        DominanceLabel::EmergentDominant
    } else {
        DominanceLabel::LogicalDominant
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const MINT: (f64, f64, f64) = (0.87, 0.81, 0.90);
    const DONKEY: (f64, f64, f64) = (0.5, 0.9, 0.7);

    fn params(m_sq: f64, theta: f64, kind: CombinationKind, variant: ModelVariant) -> ModelParams {
        ModelParams::new(m_sq, theta, kind, variant).unwrap()
    }

    #[test]
    fn interference_term_bounded_by_magnitude() {
        for theta in [0.0, 17.0, 90.0, 133.0, 180.0] {
            for (a, b) in [(0.87, 0.81), (0.0, 0.0), (1.0, 0.5), (0.3, 0.4)] {
                let term = interference_term(a, b, theta).unwrap();
                assert!(term.value.abs() <= term.magnitude);
                assert!((-1.0..=1.0).contains(&term.cos_theta));
                assert_relative_eq!(term.value, term.magnitude * term.cos_theta);
            }
        }
        assert!(interference_term(0.5, 0.5, 200.0).is_err());
    }

    #[test]
    fn interference_magnitude_examples() {
        assert_relative_eq!(
            interference_magnitude(0.87, 0.81).unwrap(),
            0.157162,
            epsilon = 1e-6
        );
        assert_relative_eq!(interference_magnitude(1.0, 0.3).unwrap(), 0.0);
        assert_relative_eq!(
            interference_magnitude(0.5, 0.9).unwrap(),
            0.223607,
            epsilon = 1e-6
        );
    }

    #[test]
    fn eval_conjunction_mint() {
        let printed = eval_conjunction(
            MINT.0,
            MINT.1,
            &params(
                0.3,
                50.21,
                CombinationKind::Conjunction,
                ModelVariant::Printed,
            ),
        )
        .unwrap();
        assert_relative_eq!(printed.value, 0.869816, epsilon = 1e-6);
        assert!(printed.in_range);

        let unscaled = eval_conjunction(
            MINT.0,
            MINT.1,
            &params(
                0.3,
                50.21,
                CombinationKind::Conjunction,
                ModelVariant::UnscaledInterference,
            ),
        )
        .unwrap();
        // The reference combination weight, recovered to three decimals.
        assert_relative_eq!(unscaled.value, 0.90, epsilon = 1e-3);
    }

    #[test]
    fn eval_pure_sector2_is_product() {
        for theta in [0.0, 37.0, 90.0, 180.0] {
            let v = eval_conjunction(
                0.6,
                0.7,
                &params(
                    1.0,
                    theta,
                    CombinationKind::Conjunction,
                    ModelVariant::Printed,
                ),
            )
            .unwrap();
            assert_relative_eq!(v.value, 0.42, epsilon = 1e-12);
        }
    }

    #[test]
    fn eval_zero_interference_is_average() {
        let v = eval_conjunction(
            0.6,
            0.7,
            &params(
                0.0,
                90.0,
                CombinationKind::Conjunction,
                ModelVariant::Printed,
            ),
        )
        .unwrap();
        assert_relative_eq!(v.value, 0.65, epsilon = 1e-12);
    }

    #[test]
    fn eval_disjunction_donkey() {
        let printed = eval_disjunction(
            DONKEY.0,
            DONKEY.1,
            &params(
                0.26,
                77.34,
                CombinationKind::Disjunction,
                ModelVariant::Printed,
            ),
        )
        .unwrap();
        // The reference triple (m2 = 0.26, theta = 77.34) does not land on 0.7.
        assert_relative_eq!(printed.value, 0.801265, epsilon = 1e-6);

        let pure = eval_disjunction(
            DONKEY.0,
            DONKEY.1,
            &params(
                1.0,
                33.0,
                CombinationKind::Disjunction,
                ModelVariant::Printed,
            ),
        )
        .unwrap();
        assert_relative_eq!(pure.value, 0.95, epsilon = 1e-12);

        let averaging = eval_disjunction(
            DONKEY.0,
            DONKEY.1,
            &params(
                0.0,
                90.0,
                CombinationKind::Disjunction,
                ModelVariant::Printed,
            ),
        )
        .unwrap();
        assert_relative_eq!(averaging.value, 0.7, epsilon = 1e-12);
    }

    #[test]
    fn fit_theta_mint() {
        let unscaled = fit_theta(
            MINT.0,
            MINT.1,
            MINT.2,
            0.3,
            CombinationKind::Conjunction,
            ModelVariant::UnscaledInterference,
        )
        .unwrap();
        assert_relative_eq!(unscaled, 50.2053, epsilon = 1e-3);

        let printed = fit_theta(
            MINT.0,
            MINT.1,
            MINT.2,
            0.3,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        )
        .unwrap();
        assert_relative_eq!(printed, 23.8877, epsilon = 1e-3);
    }

    #[test]
    fn fit_theta_donkey_refit() {
        let printed = fit_theta(
            DONKEY.0,
            DONKEY.1,
            DONKEY.2,
            0.26,
            CombinationKind::Disjunction,
            ModelVariant::Printed,
        )
        .unwrap();
        assert_relative_eq!(printed, 113.1303, epsilon = 1e-3);

        let unscaled = fit_theta(
            DONKEY.0,
            DONKEY.1,
            DONKEY.2,
            0.26,
            CombinationKind::Disjunction,
            ModelVariant::UnscaledInterference,
        )
        .unwrap();
        assert_relative_eq!(unscaled, 106.8992, epsilon = 1e-3);
    }

    #[test]
    fn fit_theta_infeasible() {
        let err = fit_theta(
            0.9,
            0.9,
            0.1,
            0.0,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        )
        .unwrap_err();
        match err {
            FitError::InfeasibleTheta { cos_theta } => {
                assert_relative_eq!(cos_theta, -8.0, epsilon = 1e-9)
            }
            other => panic!("expected InfeasibleTheta, got {other:?}"),
        }
    }

    #[test]
    fn fit_theta_degenerate_interference() {
        // mu_b = 1 kills the interference magnitude.
        let err = fit_theta(
            0.5,
            1.0,
            0.9,
            0.5,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        )
        .unwrap_err();
        assert!(matches!(err, FitError::DegenerateInterference { .. }));

        // Residual zero: target equals the mix exactly; midpoint angle.
        let theta = fit_theta(
            0.5,
            1.0,
            0.625,
            0.5,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        )
        .unwrap();
        assert_relative_eq!(theta, 90.0);
    }

    #[test]
    fn representable_interval_examples() {
        let (lo, hi) = representable_interval(
            0.87,
            0.81,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        )
        .unwrap();
        assert_relative_eq!(lo, 0.682838, epsilon = 1e-6);
        assert_relative_eq!(hi, 0.997162, epsilon = 1e-6);

        let (lo, hi) = representable_interval(
            0.5,
            0.9,
            CombinationKind::Disjunction,
            ModelVariant::Printed,
        )
        .unwrap();
        assert_relative_eq!(lo, 0.476393, epsilon = 1e-6);
        assert_relative_eq!(hi, 0.95, epsilon = 1e-12);

        for variant in ModelVariant::ALL {
            let (lo, hi) =
                representable_interval(1.0, 1.0, CombinationKind::Conjunction, variant).unwrap();
            assert_relative_eq!(lo, 1.0);
            assert_relative_eq!(hi, 1.0);
        }
    }

    fn record(mu_a: f64, mu_b: f64, mu_comb: f64, kind: CombinationKind) -> MembershipRecord {
        MembershipRecord::new("x", "A", "B", mu_a, mu_b, mu_comb, kind).unwrap()
    }

    #[test]
    fn fit_params_fixed_m_mint() {
        let rec = record(MINT.0, MINT.1, MINT.2, CombinationKind::Conjunction);
        let fitted = fit_params(
            &rec,
            FitStrategy::FixedM(0.3),
            ModelVariant::UnscaledInterference,
        )
        .unwrap();
        assert_relative_eq!(fitted.m_sq(), 0.3);
        assert_relative_eq!(fitted.n_sq(), 0.7);
        assert_relative_eq!(fitted.theta_deg(), 50.2053, epsilon = 1e-3);
        let reproduced = eval(MINT.0, MINT.1, &fitted).unwrap();
        assert_relative_eq!(reproduced.value, MINT.2, epsilon = 1e-9);
    }

    #[test]
    fn fit_params_saturated_weights() {
        let rec = record(1.0, 1.0, 1.0, CombinationKind::Conjunction);
        for strategy in [FitStrategy::MaxSector1, FitStrategy::MidpointTheta] {
            let fitted = fit_params(&rec, strategy, ModelVariant::Printed).unwrap();
            assert_relative_eq!(fitted.m_sq(), 0.0);
            assert_relative_eq!(fitted.n_sq(), 1.0);
            assert_relative_eq!(fitted.theta_deg(), 90.0);
        }
    }

    #[test]
    fn fit_params_max_sector1_prefers_zero_weight() {
        let rec = record(0.5, 0.5, 0.25, CombinationKind::Conjunction);
        let fitted = fit_params(&rec, FitStrategy::MaxSector1, ModelVariant::Printed).unwrap();
        assert_relative_eq!(fitted.m_sq(), 0.0);
        // Residual -0.25 against magnitude 0.5.
        assert_relative_eq!(fitted.theta_deg(), 120.0, epsilon = 1e-9);
    }

    #[test]
    fn fit_params_max_sector1_boundary() {
        // sector2 = 0.099 sits below the zero-weight band [0.450, 0.640], so
        // a target of 0.2 is reachable only once m^2 grows past ~0.712.
        let rec = record(0.1, 0.99, 0.2, CombinationKind::Conjunction);
        let fitted = fit_params(&rec, FitStrategy::MaxSector1, ModelVariant::Printed).unwrap();
        let reproduced = eval(0.1, 0.99, &fitted).unwrap();
        assert_relative_eq!(reproduced.value, 0.2, epsilon = 1e-9);
        assert!(fitted.m_sq() > 0.7);
        // No smaller weight may be feasible.
        let smaller = fitted.m_sq() - 2e-6;
        assert!(fit_theta(
            0.1,
            0.99,
            0.2,
            smaller,
            CombinationKind::Conjunction,
            ModelVariant::Printed
        )
        .is_err());
    }

    #[test]
    fn fit_params_midpoint_lands_on_quarter_turn() {
        let rec = record(0.6, 0.7, 0.5, CombinationKind::Conjunction);
        let fitted = fit_params(&rec, FitStrategy::MidpointTheta, ModelVariant::Printed).unwrap();
        assert_relative_eq!(fitted.theta_deg(), 90.0, epsilon = 1e-9);
        let reproduced = eval(0.6, 0.7, &fitted).unwrap();
        assert_relative_eq!(reproduced.value, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn fit_params_infeasible_model() {
        let rec = record(0.9, 0.9, 0.05, CombinationKind::Conjunction);
        for strategy in [
            FitStrategy::FixedM(0.4),
            FitStrategy::MaxSector1,
            FitStrategy::MidpointTheta,
        ] {
            let err = fit_params(&rec, strategy, ModelVariant::Printed).unwrap_err();
            assert!(matches!(err, FitError::InfeasibleModel { .. }), "{err:?}");
        }
    }

    #[test]
    fn dominance_examples() {
        let mint = params(
            0.3,
            50.21,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        );
        assert_eq!(dominance_report(&mint), DominanceLabel::EmergentDominant);

        let balanced = params(
            0.5,
            10.0,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        );
        assert_eq!(dominance_report(&balanced), DominanceLabel::Balanced);

        let donkey = params(
            0.26,
            77.34,
            CombinationKind::Disjunction,
            ModelVariant::Printed,
        );
        assert_eq!(dominance_report(&donkey), DominanceLabel::EmergentDominant);

        let logical = params(
            0.8,
            10.0,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        );
        assert_eq!(dominance_report(&logical), DominanceLabel::LogicalDominant);
    }

    #[test]
    fn params_validation() {
        assert!(ModelParams::new(
            1.2,
            30.0,
            CombinationKind::Conjunction,
            ModelVariant::Printed
        )
        .is_err());
        assert!(ModelParams::new(
            0.5,
            200.0,
            CombinationKind::Conjunction,
            ModelVariant::Printed
        )
        .is_err());
        let p = params(
            0.25,
            45.0,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        );
        assert_relative_eq!(p.m_sq() + p.n_sq(), 1.0, epsilon = 1e-12);
    }
}
