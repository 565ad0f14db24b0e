//! Explicit state-vector and projector construction.
//!
//! This module rebuilds the model of [`crate::fock`] from first principles:
//! unit vectors for the two concepts in a 3-dimensional complex space, their
//! tensor product in the 9-dimensional sector-2 space, and the measurement
//! projectors, so that the combination weight can be computed as a direct-sum
//! expectation value and compared against the closed form.
//!
//! Dimensions are fixed and tiny, so matrices are dense and hand-rolled.

use num_complex::Complex64;
use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;
use thiserror::Error;

use crate::classicality::{check_unit, CombinationKind, DomainError};
use crate::fock::ModelParams;

/// `<A|B>` must vanish to this tolerance for the superposed sector-1 state to
/// be a unit vector.
pub const ORTHOGONALITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(
        "mu_a + mu_b = {sum} < 1: orthogonal unit vectors with these marginals \
         would need more interference headroom than the construction has"
    )]
    ConstructionInfeasible { sum: f64 },
    #[error("mu_a = 0 leaves the paired vector's first component undefined")]
    DegenerateMarginal,
    #[error("|<A|B>| = {overlap:e} exceeds the orthogonality tolerance")]
    NonOrthogonal { overlap: f64 },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A complex vector serialized as a JSON array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVec {
    data: Vec<Complex64>,
}

impl ComplexVec {
    pub fn new(data: Vec<Complex64>) -> Self {
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.data
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product; entry `i * other.dim() + j` is `self[i] * other[j]`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut data = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.data {
            for b in &other.data {
                data.push(a * b);
            }
        }
        Self { data }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self {
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Serialize for ComplexVec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.data.len()))?;
        for z in &self.data {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

/// A dense square complex matrix, row-major. Serialized as an array of rows,
/// each row an array of `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::ONE;
        }
        m
    }

    pub fn from_real_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = Complex64::new(d, 0.0);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn matvec(&self, v: &ComplexVec) -> ComplexVec {
        assert_eq!(self.dim, v.dim(), "matrix/vector dimension mismatch");
        let mut out = vec![Complex64::ZERO; self.dim];
        for (row, slot) in out.iter_mut().enumerate() {
            let mut acc = Complex64::ZERO;
            for col in 0..self.dim {
                acc += self.get(row, col) * v.amplitudes()[col];
            }
            *slot = acc;
        }
        ComplexVec::new(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for k in 0..self.dim {
                let aik = self.get(i, k);
                if aik == Complex64::ZERO {
                    continue;
                }
                for j in 0..self.dim {
                    out.data[i * self.dim + j] += aik * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[j * self.dim + i] = self.get(i, j).conj();
            }
        }
        out
    }

    /// Kronecker product; block `(i, j)` is `self[i][j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let dim = self.dim * other.dim;
        let mut out = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                if a == Complex64::ZERO {
                    continue;
                }
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out.data[(i * other.dim + k) * dim + (j * other.dim + l)] =
                            a * other.get(k, l);
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_idempotent(&self, tol: f64) -> bool {
        self.mul(self).max_abs_diff(self) <= tol
    }

    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        self.adjoint().max_abs_diff(self) <= tol
    }
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut rows = serializer.serialize_seq(Some(self.dim))?;
        for r in 0..self.dim {
            let row: Vec<[f64; 2]> = (0..self.dim)
                .map(|c| {
                    let z = self.get(r, c);
                    [z.re, z.im]
                })
                .collect();
            rows.serialize_element(&row)?;
        }
        rows.end()
    }
}

/// The yes-outcome projector for a single concept membership question:
/// `diag(1, 1, 0)` in the canonical basis.
pub fn membership_projector() -> ComplexMatrix {
    ComplexMatrix::from_real_diag(&[1.0, 1.0, 0.0])
}

/// Orthogonal unit vectors for the two concepts with the prescribed marginals
/// and interference angle.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConceptVectorPair {
    vec_a: ComplexVec,
    vec_b: ComplexVec,
    theta_deg: f64,
    mu_a: f64,
    mu_b: f64,
}

impl ConceptVectorPair {
    pub fn vec_a(&self) -> &ComplexVec {
        &self.vec_a
    }

    pub fn vec_b(&self) -> &ComplexVec {
        &self.vec_b
    }

    pub fn theta_deg(&self) -> f64 {
        self.theta_deg
    }

    pub fn mu_a(&self) -> f64 {
        self.mu_a
    }

    pub fn mu_b(&self) -> f64 {
        self.mu_b
    }

    /// `<A|M|B>`; its real part is the interference term of the closed form.
    pub fn interference(&self) -> Complex64 {
        self.vec_a.inner(&membership_projector().matvec(&self.vec_b))
    }
}

/// Builds the concept vectors.
///
/// `vec_a` is real: `(sqrt(mu_a), 0, sqrt(1 - mu_a))`. `vec_b` carries the
/// interference phase on its first and third components:
///
/// ```text
/// vec_b = ( sqrt((1-mu_a)(1-mu_b)/mu_a) e^{-i theta},
///           sqrt((mu_a+mu_b-1)/mu_a),
///          -sqrt(1-mu_b) e^{-i theta} )
/// ```
///
/// which is unit, orthogonal to `vec_a`, has `<B|M|B> = mu_b`, and gives
/// `Re<A|M|B> = sqrt((1-mu_a)(1-mu_b)) cos(theta)`. The middle component
/// forces `mu_a + mu_b >= 1`; below that the requested marginals and
/// orthogonality cannot coexist in three dimensions and
/// [`HilbertError::ConstructionInfeasible`] is returned.
pub fn build_concept_vectors(
    mu_a: f64,
    mu_b: f64,
    theta_deg: f64,
) -> Result<ConceptVectorPair, HilbertError> {
    check_unit("mu_a", mu_a)?;
    check_unit("mu_b", mu_b)?;
    if !theta_deg.is_finite() {
        return Err(DomainError::OutOfRange {
            name: "theta_deg",
            value: theta_deg,
            lo: f64::NEG_INFINITY,
            hi: f64::INFINITY,
        }
        .into());
    }
    if mu_a == 0.0 {
        return Err(HilbertError::DegenerateMarginal);
    }
    let sum = mu_a + mu_b;
    if sum < 1.0 {
        return Err(HilbertError::ConstructionInfeasible { sum });
    }

    let vec_a = ComplexVec::new(vec![
        Complex64::new(mu_a.sqrt(), 0.0),
        Complex64::ZERO,
        Complex64::new((1.0 - mu_a).sqrt(), 0.0),
    ]);
    let phase = Complex64::from_polar(1.0, -theta_deg.to_radians());
    let vec_b = ComplexVec::new(vec![
        phase * ((1.0 - mu_a) * (1.0 - mu_b) / mu_a).sqrt(),
        Complex64::new(((sum - 1.0) / mu_a).sqrt(), 0.0),
        -phase * (1.0 - mu_b).sqrt(),
    ]);

    Ok(ConceptVectorPair {
        vec_a,
        vec_b,
        theta_deg,
        mu_a,
        mu_b,
    })
}

/// The measurement projector for a combination, per sector.
///
/// Sector 1 uses the single-concept projector `M`. Sector 2 uses `M ⊗ M` for
/// the conjunction (both copies answer yes) and `M⊗1 + 1⊗M - M⊗M` for the
/// disjunction (at least one copy answers yes). Both sector-2 operators are
/// idempotent and self-adjoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProjectorSpec {
    pub kind: CombinationKind,
    pub sector1: ComplexMatrix,
    pub sector2: ComplexMatrix,
}

pub fn build_projector(kind: CombinationKind) -> ProjectorSpec {
    let m = membership_projector();
    let id = ComplexMatrix::identity(3);
    let sector2 = match kind {
        CombinationKind::Conjunction => m.kron(&m),
        CombinationKind::Disjunction => m.kron(&id).add(&id.kron(&m)).sub(&m.kron(&m)),
    };
    ProjectorSpec {
        kind,
        sector1: m,
        sector2,
    }
}

/// A two-sector state: amplitudes in the 3-dimensional sector-1 space and the
/// 9-dimensional sector-2 space, with amplitude weights `weight_m` (sector 2)
/// and `weight_n` (sector 1) satisfying `weight_m² + weight_n² = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FockState {
    sector1: ComplexVec,
    sector2: ComplexVec,
    weight_m: f64,
    weight_n: f64,
    lambda_phase: f64,
    nu_phase: f64,
}

impl FockState {
    pub fn sector1(&self) -> &ComplexVec {
        &self.sector1
    }

    pub fn sector2(&self) -> &ComplexVec {
        &self.sector2
    }

    pub fn weight_m(&self) -> f64 {
        self.weight_m
    }

    pub fn weight_n(&self) -> f64 {
        self.weight_n
    }

    /// `weight_m² ||sector2||² + weight_n² ||sector1||²`, 1 for valid states.
    pub fn total_norm_sq(&self) -> f64 {
        self.weight_m * self.weight_m * self.sector2.norm_sq()
            + self.weight_n * self.weight_n * self.sector1.norm_sq()
    }
}

/// Assembles the combination state: sector 2 holds the phased tensor product
/// `e^{i lambda} |A>⊗|B>`, sector 1 the phased superposition
/// `e^{i nu} (|A> + |B>)/sqrt(2)`.
pub fn build_fock_state(
    pair: &ConceptVectorPair,
    params: &ModelParams,
) -> Result<FockState, HilbertError> {
    let overlap = pair.vec_a.inner(&pair.vec_b).norm();
    if overlap > ORTHOGONALITY_TOL {
        return Err(HilbertError::NonOrthogonal { overlap });
    }
    let lambda = Complex64::from_polar(1.0, params.lambda_phase());
    let nu = Complex64::from_polar(1.0, params.nu_phase());
    let sector2 = pair.vec_a.tensor(&pair.vec_b).scaled(lambda);
    let sector1 = pair
        .vec_a
        .add(&pair.vec_b)
        .scaled(nu * Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    Ok(FockState {
        sector1,
        sector2,
        weight_m: params.m_sq().sqrt(),
        weight_n: params.n_sq().sqrt(),
        lambda_phase: params.lambda_phase(),
        nu_phase: params.nu_phase(),
    })
}

/// Direct-sum expectation value
/// `weight_m² <s2|P2|s2> + weight_n² <s1|P1|s1>`.
pub fn expectation(state: &FockState, proj: &ProjectorSpec) -> Result<f64, HilbertError> {
    if state.sector1.dim() != proj.sector1.dim() {
        return Err(HilbertError::DimensionMismatch {
            expected: proj.sector1.dim(),
            got: state.sector1.dim(),
        });
    }
    if state.sector2.dim() != proj.sector2.dim() {
        return Err(HilbertError::DimensionMismatch {
            expected: proj.sector2.dim(),
            got: state.sector2.dim(),
        });
    }
    let quad2 = state.sector2.inner(&proj.sector2.matvec(&state.sector2)).re;
    let quad1 = state.sector1.inner(&proj.sector1.matvec(&state.sector1)).re;
    Ok(state.weight_m * state.weight_m * quad2 + state.weight_n * state.weight_n * quad1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{eval, ModelVariant};
    use approx::assert_relative_eq;

    #[test]
    fn mint_vector_components() {
        let pair = build_concept_vectors(0.87, 0.81, 50.21).unwrap();
        let mags: Vec<f64> = pair.vec_b().amplitudes().iter().map(|z| z.norm()).collect();
        assert_relative_eq!(mags[0], 0.168496, epsilon = 1e-6);
        assert_relative_eq!(mags[1], 0.884086, epsilon = 1e-6);
        assert_relative_eq!(mags[2], 0.435890, epsilon = 1e-6);
    }

    #[test]
    fn pair_invariants() {
        let m = membership_projector();
        for (mu_a, mu_b, theta) in [
            (0.87, 0.81, 50.21),
            (0.5, 0.9, 113.13),
            (0.6, 0.4, 0.0),
            (1.0, 0.2, 45.0),
            (0.3, 0.7, 180.0),
        ] {
            let pair = build_concept_vectors(mu_a, mu_b, theta).unwrap();
            assert_relative_eq!(pair.vec_a().norm_sq(), 1.0, epsilon = 1e-12);
            assert_relative_eq!(pair.vec_b().norm_sq(), 1.0, epsilon = 1e-12);
            assert!(pair.vec_a().inner(pair.vec_b()).norm() <= 1e-12);
            assert_relative_eq!(
                pair.vec_a().inner(&m.matvec(pair.vec_a())).re,
                mu_a,
                epsilon = 1e-12
            );
            assert_relative_eq!(
                pair.vec_b().inner(&m.matvec(pair.vec_b())).re,
                mu_b,
                epsilon = 1e-12
            );
            let expected =
                ((1.0 - mu_a) * (1.0 - mu_b)).sqrt() * theta.to_radians().cos();
            assert_relative_eq!(pair.interference().re, expected, epsilon = 1e-12);
        }
    }

    #[test]
    fn saturated_weights_vectors() {
        let pair = build_concept_vectors(1.0, 1.0, 30.0).unwrap();
        let a: Vec<f64> = pair.vec_a().amplitudes().iter().map(|z| z.norm()).collect();
        let b: Vec<f64> = pair.vec_b().amplitudes().iter().map(|z| z.norm()).collect();
        assert_relative_eq!(a[0], 1.0);
        assert_relative_eq!(a[1] + a[2], 0.0);
        assert_relative_eq!(b[1], 1.0);
        assert_relative_eq!(b[0] + b[2], 0.0);
    }

    #[test]
    fn infeasible_marginals() {
        assert!(matches!(
            build_concept_vectors(0.3, 0.4, 10.0),
            Err(HilbertError::ConstructionInfeasible { .. })
        ));
        assert!(matches!(
            build_concept_vectors(0.0, 1.0, 10.0),
            Err(HilbertError::DegenerateMarginal)
        ));
    }

    #[test]
    fn projector_laws_and_traces() {
        let conj = build_projector(CombinationKind::Conjunction);
        let disj = build_projector(CombinationKind::Disjunction);
        for p in [&conj, &disj] {
            assert!(p.sector1.is_idempotent(1e-12));
            assert!(p.sector1.is_self_adjoint(1e-12));
            assert!(p.sector2.is_idempotent(1e-12));
            assert!(p.sector2.is_self_adjoint(1e-12));
        }
        assert_relative_eq!(conj.sector2.trace().re, 4.0);
        assert_relative_eq!(disj.sector2.trace().re, 8.0);
    }

    #[test]
    fn sector2_disjunction_identity() {
        let disj = build_projector(CombinationKind::Disjunction);
        for (mu_a, mu_b) in [(0.5, 0.9), (0.87, 0.81), (1.0, 0.4), (0.55, 0.45)] {
            let pair = build_concept_vectors(mu_a, mu_b, 42.0).unwrap();
            let product = pair.vec_a().tensor(pair.vec_b());
            let value = product.inner(&disj.sector2.matvec(&product)).re;
            assert_relative_eq!(value, mu_a + mu_b - mu_a * mu_b, epsilon = 1e-12);
        }
    }

    fn mint_params(m_sq: f64, theta: f64) -> ModelParams {
        ModelParams::new(
            m_sq,
            theta,
            CombinationKind::Conjunction,
            ModelVariant::Printed,
        )
        .unwrap()
    }

    #[test]
    fn fock_state_norms() {
        let pair = build_concept_vectors(0.87, 0.81, 50.21).unwrap();
        for m_sq in [0.0, 0.3, 1.0] {
            let state = build_fock_state(&pair, &mint_params(m_sq, 50.21)).unwrap();
            assert_relative_eq!(state.total_norm_sq(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn expectation_matches_closed_form_mint() {
        let pair = build_concept_vectors(0.87, 0.81, 50.21).unwrap();
        let params = mint_params(0.3, 50.21);
        let state = build_fock_state(&pair, &params).unwrap();
        let proj = build_projector(CombinationKind::Conjunction);
        let direct = expectation(&state, &proj).unwrap();
        let closed = eval(0.87, 0.81, &params).unwrap().value;
        assert_relative_eq!(direct, closed, epsilon = 1e-10);
        assert_relative_eq!(direct, 0.869816, epsilon = 1e-6);
    }

    #[test]
    fn expectation_pure_product_state() {
        let pair = build_concept_vectors(0.87, 0.81, 10.0).unwrap();
        let state = build_fock_state(&pair, &mint_params(1.0, 10.0)).unwrap();
        let proj = build_projector(CombinationKind::Conjunction);
        let direct = expectation(&state, &proj).unwrap();
        assert_relative_eq!(direct, 0.87 * 0.81, epsilon = 1e-12);
    }

    #[test]
    fn expectation_donkey_refit() {
        let pair = build_concept_vectors(0.5, 0.9, 113.13).unwrap();
        let params = ModelParams::new(
            0.26,
            113.13,
            CombinationKind::Disjunction,
            ModelVariant::Printed,
        )
        .unwrap();
        let state = build_fock_state(&pair, &params).unwrap();
        let proj = build_projector(CombinationKind::Disjunction);
        let direct = expectation(&state, &proj).unwrap();
        assert_relative_eq!(direct, 0.700, epsilon = 1e-3);
    }

    #[test]
    fn phases_cancel_in_expectation() {
        let pair = build_concept_vectors(0.6, 0.7, 72.0).unwrap();
        let proj = build_projector(CombinationKind::Conjunction);
        let base = expectation(
            &build_fock_state(&pair, &mint_params(0.4, 72.0)).unwrap(),
            &proj,
        )
        .unwrap();
        for (lambda, nu) in [(1.0, 0.0), (0.0, 2.5), (3.1, 5.9)] {
            let phased = mint_params(0.4, 72.0).with_phases(lambda, nu);
            let value = expectation(&build_fock_state(&pair, &phased).unwrap(), &proj).unwrap();
            assert!((value - base).abs() <= 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_detected() {
        let pair = build_concept_vectors(0.6, 0.7, 72.0).unwrap();
        let state = build_fock_state(&pair, &mint_params(0.4, 72.0)).unwrap();
        let mut proj = build_projector(CombinationKind::Conjunction);
        proj.sector2 = ComplexMatrix::identity(4);
        assert!(matches!(
            expectation(&state, &proj),
            Err(HilbertError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn json_shapes() {
        let pair = build_concept_vectors(1.0, 1.0, 0.0).unwrap();
        let json = serde_json::to_value(pair.vec_a()).unwrap();
        assert_eq!(json, serde_json::json!([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]]));
        let m = serde_json::to_value(membership_projector()).unwrap();
        assert_eq!(
            m,
            serde_json::json!([
                [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
                [[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]]
            ])
        );
    }
}
