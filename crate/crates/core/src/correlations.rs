//! Entanglement and correlation measures of the two-dot state.
//!
//! Subsystem A is dot 1 and B is dot 2; the two-qubit basis is
//! `{|gg⟩, |ge⟩, |eg⟩, |ee⟩}`. Entropies are in bits. Classical correlation
//! is maximized over orthogonal rank-1 projective measurements on B, so the
//! reported discord is an upper bound on the POVM-optimized value.

use std::f64::consts::PI;

use nalgebra::{Matrix2, Matrix4, Vector3};
use serde::{Deserialize, Serialize};

use crate::dynamics::{DensityMatrix, Trajectory};
use crate::error::{Error, Result};
use crate::hilbert::{HilbertSpace, C64, ZERO};
use crate::optimize::{nelder_mead, SimplexOptions};

/// Eigenvalues in `[-EIG_CLAMP, 0)` are treated as zero.
pub const EIG_CLAMP: f64 = 1e-10;
/// Eigenvalues below this are skipped in entropy sums.
const ENTROPY_CUTOFF: f64 = 1e-14;
/// Measurement outcomes less likely than this carry no weight.
const MIN_OUTCOME_PROB: f64 = 1e-12;

/// Reduced state of the two dots.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState(Matrix4<C64>);

impl TwoQubitState {
    pub fn new(m: Matrix4<C64>) -> Self {
        Self(m)
    }

    pub fn from_pure(amplitudes: [C64; 4]) -> Self {
        let v = nalgebra::Vector4::from(amplitudes);
        let v = v / C64::from(v.norm());
        Self(v * v.adjoint())
    }

    pub fn matrix(&self) -> &Matrix4<C64> {
        &self.0
    }

    /// State of dot 1.
    pub fn reduced_a(&self) -> Matrix2<C64> {
        Matrix2::from_fn(|a, ap| self.0[(2 * a, 2 * ap)] + self.0[(2 * a + 1, 2 * ap + 1)])
    }

    /// State of dot 2.
    pub fn reduced_b(&self) -> Matrix2<C64> {
        Matrix2::from_fn(|b, bp| self.0[(b, bp)] + self.0[(2 + b, 2 + bp)])
    }

    /// Applies local unitaries `U_A ⊗ U_B`.
    pub fn conjugate_local(&self, ua: &Matrix2<C64>, ub: &Matrix2<C64>) -> Self {
        let u = ua.kronecker(ub);
        Self(u * self.0 * u.adjoint())
    }

    /// Largest modulus among entries outside the X pattern (diagonal plus
    /// `gg↔ee` and `ge↔eg` coherences).
    pub fn non_x_magnitude(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                if r != c && r + c != 3 {
                    worst = worst.max(self.0[(r, c)].norm());
                }
            }
        }
        worst
    }
}

/// Traces out the cavity.
pub fn reduce_to_dots(space: &HilbertSpace, rho: &DensityMatrix) -> TwoQubitState {
    let m = rho.matrix();
    let f = space.fock_dim();
    TwoQubitState(Matrix4::from_fn(|a, b| (0..f).map(|n| m[(a * f + n, b * f + n)]).sum()))
}

fn clamp_eigenvalue(x: f64) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -EIG_CLAMP {
        Ok(0.0)
    } else {
        Err(Error::NegativeEigenvalue(x))
    }
}

fn hermitian4_eigen(m: &Matrix4<C64>) -> Result<(Vector4f, Matrix4<C64>)> {
    let herm = (m + m.adjoint()) * C64::from(0.5);
    let eig = nalgebra::SymmetricEigen::try_new(herm, 1e-15, 10_000).ok_or_else(|| Error::Eigen("4x4 Hermitian matrix".into()))?;
    Ok((eig.eigenvalues, eig.eigenvectors))
}

type Vector4f = nalgebra::Vector4<f64>;

fn entropy_of_spectrum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().filter(|&l| l > ENTROPY_CUTOFF).map(|l| -l * l.log2()).sum()
}

/// Binary entropy `h(x)` in bits.
pub fn binary_entropy(x: f64) -> f64 {
    entropy_of_spectrum([x, 1.0 - x])
}

/// Von Neumann entropy in bits of any Hermitian density matrix.
pub fn von_neumann_entropy(rho: &nalgebra::DMatrix<C64>) -> Result<f64> {
    let values = crate::model::hermitian_eigenvalues(&((rho + rho.adjoint()) * C64::from(0.5)))?;
    let clamped = values.into_iter().map(clamp_eigenvalue).collect::<Result<Vec<_>>>()?;
    Ok(entropy_of_spectrum(clamped))
}

/// Entropy of a (possibly unnormalized) 2x2 Hermitian matrix after
/// normalizing by its trace.
fn qubit_entropy(m: &Matrix2<C64>) -> f64 {
    let p = m[(0, 0)].re + m[(1, 1)].re;
    if p <= 0.0 {
        return 0.0;
    }
    let half_diff = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    let r = (half_diff * half_diff + m[(0, 1)].norm_sqr()).sqrt() / p;
    binary_entropy((0.5 + r).min(1.0))
}

fn entropy4(m: &Matrix4<C64>) -> Result<f64> {
    let (values, _) = hermitian4_eigen(m)?;
    let clamped = values.iter().map(|&v| clamp_eigenvalue(v)).collect::<Result<Vec<_>>>()?;
    Ok(entropy_of_spectrum(clamped))
}

fn entropy2(m: &Matrix2<C64>) -> Result<f64> {
    // Eigenvalues of a 2x2 Hermitian matrix in closed form.
    let mean = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let half_diff = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    let r = (half_diff * half_diff + m[(0, 1)].norm_sqr()).sqrt();
    Ok(entropy_of_spectrum([clamp_eigenvalue(mean + r)?, clamp_eigenvalue(mean - r)?]))
}

/// `σ_y ⊗ σ_y` in the `{gg, ge, eg, ee}` basis.
fn sigma_yy() -> Matrix4<C64> {
    let sy = Matrix2::new(ZERO, C64::new(0.0, -1.0), C64::new(0.0, 1.0), ZERO);
    sy.kronecker(&sy)
}

/// Wootters concurrence.
///
/// With `ρ = X X†`, the square roots of the eigenvalues of `ρ ρ̃` are the
/// singular values of `Xᵀ (σ_y⊗σ_y) X`, which avoids taking square roots of
/// rounding noise for (nearly) pure states.
pub fn concurrence(rho: &TwoQubitState) -> Result<f64> {
    let (values, vectors) = hermitian4_eigen(rho.matrix())?;
    let sqrt_values = values.iter().map(|&v| clamp_eigenvalue(v).map(f64::sqrt)).collect::<Result<Vec<_>>>()?;
    let x = vectors * Matrix4::from_diagonal(&nalgebra::Vector4::from_iterator(sqrt_values.into_iter().map(C64::from)));
    let m = x.transpose() * sigma_yy() * x;
    let mut lambdas: Vec<f64> = m.singular_values().iter().copied().collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).clamp(0.0, 1.0))
}

/// Entanglement of formation from the concurrence.
pub fn eof(cc: f64) -> Result<f64> {
    const SLACK: f64 = 1e-12;
    if !(-SLACK..=1.0 + SLACK).contains(&cc) {
        return Err(Error::Domain(cc));
    }
    let cc = cc.clamp(0.0, 1.0);
    Ok(binary_entropy(0.5 * (1.0 + (1.0 - cc * cc).sqrt())))
}

/// `S(ρ_A) + S(ρ_B) - S(ρ_AB)`.
pub fn mutual_information(rho: &TwoQubitState) -> Result<f64> {
    let sa = entropy2(&rho.reduced_a())?;
    let sb = entropy2(&rho.reduced_b())?;
    let sab = entropy4(rho.matrix())?;
    Ok((sa + sb - sab).max(0.0))
}

/// Bloch angles `(θ, φ)` of the measured state `cos(θ/2)|g⟩ + e^{iφ} sin(θ/2)|e⟩`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Angles {
    pub theta: f64,
    pub phi: f64,
}

impl Angles {
    fn direction(&self) -> Vector3<f64> {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        Vector3::new(st * cp, st * sp, ct)
    }

    /// Canonical representative with `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.
    fn canonical(&self) -> Self {
        let n = self.direction();
        let theta = n.z.clamp(-1.0, 1.0).acos();
        let phi = if n.x.abs() < 1e-15 && n.y.abs() < 1e-15 { 0.0 } else { n.y.atan2(n.x).rem_euclid(2.0 * PI) };
        Self { theta, phi }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSearch {
    pub theta_points: usize,
    pub phi_points: usize,
    pub refine: SimplexOptions,
}

impl Default for MeasurementSearch {
    fn default() -> Self {
        Self { theta_points: 64, phi_points: 128, refine: SimplexOptions::default() }
    }
}

/// Information gained about A by measuring B along a Bloch direction.
struct MeasurementObjective {
    entropy_a: f64,
    rho_a: Matrix2<C64>,
    /// `Tr_B[(I ⊗ σ_k) ρ]` for k = x, y, z.
    pauli_parts: [Matrix2<C64>; 3],
}

impl MeasurementObjective {
    fn new(rho: &TwoQubitState) -> Result<Self> {
        let m = rho.matrix();
        let i = C64::new(0.0, 1.0);
        let sigma = [
            Matrix2::new(ZERO, C64::from(1.0), C64::from(1.0), ZERO),
            Matrix2::new(ZERO, -i, i, ZERO),
            Matrix2::new(C64::from(1.0), ZERO, ZERO, C64::from(-1.0)),
        ];
        let pauli_parts = sigma.map(|s| {
            Matrix2::from_fn(|a, ap| {
                let mut acc = ZERO;
                for b in 0..2 {
                    for bp in 0..2 {
                        acc += s[(b, bp)] * m[(2 * a + bp, 2 * ap + b)];
                    }
                }
                acc
            })
        });
        let rho_a = rho.reduced_a();
        Ok(Self { entropy_a: entropy2(&rho_a)?, rho_a, pauli_parts })
    }

    fn gain(&self, angles: &Angles) -> f64 {
        let n = angles.direction();
        let bloch = self.pauli_parts[0] * C64::from(n.x) + self.pauli_parts[1] * C64::from(n.y) + self.pauli_parts[2] * C64::from(n.z);
        let mut conditional = 0.0;
        for sign in [1.0, -1.0] {
            let m = (self.rho_a + bloch * C64::from(sign)) * C64::from(0.5);
            let p = m[(0, 0)].re + m[(1, 1)].re;
            if p >= MIN_OUTCOME_PROB {
                conditional += p * qubit_entropy(&m);
            }
        }
        self.entropy_a - conditional
    }
}

/// Maximal information about dot 1 extractable by a projective measurement on
/// dot 2. `warm_start` adds an extra refinement from a previous optimum.
pub fn classical_correlation_with(rho: &TwoQubitState, search: &MeasurementSearch, warm_start: Option<Angles>) -> Result<(f64, Angles)> {
    let objective = MeasurementObjective::new(rho)?;
    let d_theta = PI / (search.theta_points.max(2) - 1) as f64;
    let d_phi = 2.0 * PI / search.phi_points.max(1) as f64;

    let mut best = (f64::NEG_INFINITY, Angles::default());
    for i in 0..search.theta_points.max(2) {
        for j in 0..search.phi_points.max(1) {
            let a = Angles { theta: i as f64 * d_theta, phi: j as f64 * d_phi };
            let v = objective.gain(&a);
            if v > best.0 {
                best = (v, a);
            }
        }
    }

    let mut starts = vec![best.1];
    starts.extend(warm_start);
    for start in starts {
        let (x, fx) = nelder_mead(
            |p: &[f64; 2]| -objective.gain(&Angles { theta: p[0], phi: p[1] }),
            [start.theta, start.phi],
            d_theta,
            &search.refine,
        );
        if -fx > best.0 {
            best = (-fx, Angles { theta: x[0], phi: x[1] });
        }
    }
    Ok((best.0.max(0.0), best.1.canonical()))
}

pub fn classical_correlation(rho: &TwoQubitState) -> Result<(f64, Angles)> {
    classical_correlation_with(rho, &MeasurementSearch::default(), None)
}

/// Quantum discord `I - C`.
pub fn discord(rho: &TwoQubitState) -> Result<f64> {
    Ok(analyze(rho, &MeasurementSearch::default(), None)?.discord)
}

/// Every measure for one two-qubit state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlations {
    pub cc: f64,
    pub eof: f64,
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    pub angles: Angles,
}

/// Discord values this far below zero are rounding noise and clamp to 0.
const DISCORD_SLACK: f64 = 1e-9;

pub fn analyze(rho: &TwoQubitState, search: &MeasurementSearch, warm_start: Option<Angles>) -> Result<Correlations> {
    let cc = concurrence(rho)?;
    let eof = eof(cc)?;
    let mutual_info = mutual_information(rho)?;
    let (mut classical, angles) = classical_correlation_with(rho, search, warm_start)?;
    let mut discord = mutual_info - classical;
    if (-DISCORD_SLACK..0.0).contains(&discord) {
        discord = 0.0;
        classical = mutual_info;
    }
    Ok(Correlations { cc, eof, mutual_info, classical, discord, angles })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRecord {
    pub t: f64,
    pub cc: f64,
    pub eof: f64,
    pub mutual_info: f64,
    pub classical: f64,
    pub discord: f64,
    pub theta: f64,
    pub phi: f64,
    /// Largest coherence outside the X pattern of the reduced state.
    pub non_x: f64,
}

/// One record per trajectory sample, warm-starting each measurement search
/// from the previous optimum.
pub fn evaluate_trajectory(space: &HilbertSpace, trajectory: &Trajectory) -> Result<Vec<CorrelationRecord>> {
    evaluate_trajectory_with(space, trajectory, &MeasurementSearch::default())
}

pub fn evaluate_trajectory_with(
    space: &HilbertSpace,
    trajectory: &Trajectory,
    search: &MeasurementSearch,
) -> Result<Vec<CorrelationRecord>> {
    let mut warm = None;
    let mut out = Vec::with_capacity(trajectory.len());
    for (&t, rho) in trajectory.times.iter().zip(&trajectory.states) {
        let ab = reduce_to_dots(space, rho);
        let c = analyze(&ab, search, warm).map_err(|e| Error::AtTime { t, source: Box::new(e) })?;
        warm = Some(c.angles);
        out.push(CorrelationRecord {
            t,
            cc: c.cc,
            eof: c.eof,
            mutual_info: c.mutual_info,
            classical: c.classical,
            discord: c.discord,
            theta: c.angles.theta,
            phi: c.angles.phi,
            non_x: ab.non_x_magnitude(),
        });
    }
    Ok(out)
}
