//! Lindblad evolution of the dots-plus-cavity density matrix.
//!
//! The generator is
//!
//! ```text
//! dρ/dt = -i[H, ρ] + κ/2 D[a]ρ + γ/2 Σᵢ D[σ₋ⁱ]ρ + P_c/2 D[a†]ρ + P_x(t)/2 Σᵢ D[σ₊ⁱ]ρ
//! D[L]ρ = 2LρL† - L†Lρ - ρL†L
//! ```
//!
//! with every rate in rad/ps. For evaluation it is rewritten as
//! `-i(H_eff ρ - ρ H_eff†) + Σ rₖ LₖρLₖ†` with `H_eff = H - i/2 Σ rₖ Lₖ†Lₖ`.
//! Every jump operator here maps each basis state to at most one basis state,
//! so the jump terms cost `O(dim²)` and `H_eff` is applied as a sparse matrix.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{max_abs, Dot, HilbertSpace, OperatorMatrix, C64, ONE, ZERO};
use crate::model::{angular, hamiltonian, hermitian_eigenvalues, PulseParams, SystemParams};
use crate::ode::{self, Method, Stats};

/// Hermitian, unit-trace, positive semidefinite state on the composite space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(DMatrix<C64>);

/// Tolerances a [`DensityMatrix`] must meet.
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-9;
pub const POSITIVITY_TOL: f64 = 1e-8;

impl DensityMatrix {
    /// Checks shape, hermiticity, trace and positivity.
    pub fn new(m: DMatrix<C64>) -> Result<Self> {
        let rho = Self(m);
        let report = rho.check()?;
        if report.hermiticity_drift > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!("not Hermitian (drift {:e})", report.hermiticity_drift)));
        }
        if report.trace_error > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace off by {:e}", report.trace_error)));
        }
        if report.min_eigenvalue < -POSITIVITY_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {:e}", report.min_eigenvalue)));
        }
        Ok(rho)
    }

    /// Wraps a matrix without validation.
    pub fn new_unchecked(m: DMatrix<C64>) -> Self {
        Self(m)
    }

    pub fn pure(ket: &nalgebra::DVector<C64>) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let k = ket / C64::from(norm);
        Self::new(&k * k.adjoint())
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Diagonal element `⟨i|ρ|i⟩`.
    pub fn population(&self, idx: usize) -> f64 {
        self.0[(idx, idx)].re
    }

    /// `Tr(ρ O)`.
    pub fn expect(&self, op: &OperatorMatrix) -> C64 {
        // Tr(ρ O) = Σ_ij ρ_ij O_ji
        self.0.iter().zip(op.transpose().iter()).map(|(r, o)| r * o).sum()
    }

    pub fn check(&self) -> Result<StateReport> {
        if !self.0.is_square() {
            return Err(Error::Shape { expected: self.0.nrows(), rows: self.0.nrows(), cols: self.0.ncols() });
        }
        let drift = max_abs(&(&self.0 - self.0.adjoint()));
        let herm = (&self.0 + self.0.adjoint()) * C64::from(0.5);
        let min_eig = hermitian_eigenvalues(&herm)?.first().copied().unwrap_or(0.0);
        let tr = self.0.trace();
        Ok(StateReport { hermiticity_drift: drift, trace_error: (tr - ONE).norm(), min_eigenvalue: min_eig })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub hermiticity_drift: f64,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
}

/// Initial condition of a trajectory.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum InitialState {
    /// `|g,g,0⟩`
    #[serde(rename = "gg0")]
    Ground,
    /// `|e,g,0⟩`
    #[default]
    #[serde(rename = "eg0")]
    Dot1Excited,
    /// `|g,e,0⟩`
    #[serde(rename = "ge0")]
    Dot2Excited,
    /// `(|e,g,0⟩ + |g,e,0⟩)/√2`
    #[serde(rename = "sym")]
    Symmetric,
}

impl InitialState {
    pub const TAGS: &'static [&'static str] = &["gg0", "eg0", "ge0", "sym"];

    pub fn tag(&self) -> &'static str {
        match self {
            InitialState::Ground => "gg0",
            InitialState::Dot1Excited => "eg0",
            InitialState::Dot2Excited => "ge0",
            InitialState::Symmetric => "sym",
        }
    }

    pub fn density(&self, space: &HilbertSpace) -> DensityMatrix {
        let ket = match self {
            InitialState::Ground => space.ket(0, 0, 0),
            InitialState::Dot1Excited => space.ket(1, 0, 0),
            InitialState::Dot2Excited => space.ket(0, 1, 0),
            InitialState::Symmetric => space.ket(1, 0, 0) + space.ket(0, 1, 0),
        };
        DensityMatrix::pure(&ket).expect("basis states are valid")
    }
}

impl std::str::FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "gg0" => Ok(InitialState::Ground),
            "eg0" => Ok(InitialState::Dot1Excited),
            "ge0" => Ok(InitialState::Dot2Excited),
            "sym" => Ok(InitialState::Symmetric),
            other => Err(Error::Config(format!("unknown initial state '{other}'; expected one of {}", InitialState::TAGS.join(", ")))),
        }
    }
}

/// Gaussian exciton pump `P₀ exp(-(t - t₀)² / 2τ_p²)` in rad/ps.
pub fn pump_profile(pulse: &PulseParams, t: f64) -> f64 {
    let x = (t - pulse.center()) / pulse.tau_p;
    angular(pulse.p0_over_2pi) * (-0.5 * x * x).exp()
}

/// Operator that sends each basis state to at most one basis state:
/// `L|from⟩ = c |to⟩`.
#[derive(Clone, Debug)]
struct Monomial {
    entries: Vec<(usize, usize, f64)>,
}

impl Monomial {
    fn from_dense(m: &OperatorMatrix) -> Self {
        let mut entries = Vec::new();
        for col in 0..m.ncols() {
            let nz: Vec<usize> = (0..m.nrows()).filter(|&r| m[(r, col)] != ZERO).collect();
            assert!(nz.len() <= 1, "jump operator maps a basis state to a superposition");
            if let Some(&row) = nz.first() {
                let c = m[(row, col)];
                debug_assert_eq!(c.im, 0.0);
                entries.push((col, row, c.re));
            }
        }
        Self { entries }
    }

    /// `out += rate · L ρ L†`
    fn sandwich_into(&self, rate: f64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        for &(fj, tj, cj) in &self.entries {
            for &(fi, ti, ci) in &self.entries {
                out[(ti, tj)] += rho[(fi, fj)] * (rate * ci * cj);
            }
        }
    }
}

/// Precomputed generator of the master equation for one parameter set.
#[derive(Clone, Debug)]
pub struct MasterEquation {
    space: HilbertSpace,
    pulse: PulseParams,
    /// Non-zeros `(row, col, value)` of `-i H_eff` without the exciton pump.
    static_part: Vec<(usize, usize, C64)>,
    /// Diagonal of `Σᵢ σ₋ⁱσ₊ⁱ`, scaled by `-P_x(t)/2` at evaluation time.
    pump_diag: Vec<f64>,
    static_jumps: Vec<(f64, Monomial)>,
    pump_jumps: Vec<Monomial>,
}

impl MasterEquation {
    pub fn new(space: &HilbertSpace, params: &SystemParams) -> Self {
        let dim = space.dim();
        let a = space.annihilation();
        let ad = a.adjoint();
        let s1 = space.sigma_minus(Dot::One);
        let s2 = space.sigma_minus(Dot::Two);
        let s1p = s1.adjoint();
        let s2p = s2.adjoint();

        let channels: [(f64, &OperatorMatrix); 4] =
            [(params.kappa(), &a), (params.gamma(), &s1), (params.gamma(), &s2), (params.pc(), &ad)];

        let mut h_eff = hamiltonian(space, params);
        let mut static_jumps = Vec::new();
        for (rate, l) in channels {
            if rate != 0.0 {
                h_eff -= (l.adjoint() * l) * C64::new(0.0, 0.5 * rate);
                static_jumps.push((rate, Monomial::from_dense(l)));
            }
        }
        let minus_i_h = h_eff * C64::new(0.0, -1.0);
        let mut static_part = Vec::new();
        for c in 0..dim {
            for r in 0..dim {
                let v = minus_i_h[(r, c)];
                if v != ZERO {
                    static_part.push((r, c, v));
                }
            }
        }

        let pump_ops = &s1 * &s1p + &s2 * &s2p;
        let pump_diag = (0..dim).map(|i| pump_ops[(i, i)].re).collect();

        Self {
            space: *space,
            pulse: params.pulse,
            static_part,
            pump_diag,
            static_jumps,
            pump_jumps: vec![Monomial::from_dense(&s1p), Monomial::from_dense(&s2p)],
        }
    }

    pub fn space(&self) -> &HilbertSpace {
        &self.space
    }

    pub fn pump(&self, t: f64) -> f64 {
        pump_profile(&self.pulse, t)
    }

    /// Writes `dρ/dt` at time `t` into `out`.
    pub fn rhs_into(&self, t: f64, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        let dim = self.space.dim();
        out.fill(ZERO);

        // -i H_eff ρ + (-i H_eff ρ†)† = -i H_eff ρ + i ρ H_eff†
        for &(r, c, v) in &self.static_part {
            let vc = v.conj();
            for j in 0..dim {
                out[(r, j)] += v * rho[(c, j)];
                out[(j, r)] += rho[(j, c)] * vc;
            }
        }
        let px = self.pump(t);
        if px != 0.0 {
            for (i, &d) in self.pump_diag.iter().enumerate() {
                if d != 0.0 {
                    let w = -0.5 * px * d;
                    for j in 0..dim {
                        out[(i, j)] += rho[(i, j)] * w;
                        out[(j, i)] += rho[(j, i)] * w;
                    }
                }
            }
            for l in &self.pump_jumps {
                l.sandwich_into(px, rho, out);
            }
        }
        for (rate, l) in &self.static_jumps {
            l.sandwich_into(*rate, rho, out);
        }
    }

    pub fn rhs(&self, t: f64, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(rho.nrows(), rho.ncols());
        self.rhs_into(t, rho, &mut out);
        out
    }
}

/// `dρ/dt` for one state.
pub fn lindblad_rhs(space: &HilbertSpace, params: &SystemParams, rho: &DensityMatrix, t: f64) -> Result<DMatrix<C64>> {
    let m = rho.matrix();
    if m.nrows() != space.dim() || m.ncols() != space.dim() {
        return Err(Error::Shape { expected: space.dim(), rows: m.nrows(), cols: m.ncols() });
    }
    Ok(MasterEquation::new(space, params).rhs(t, m))
}

/// Dense superoperator acting on column-stacked `vec(ρ)` for a fixed exciton
/// pump rate `px` (rad/ps). Built directly from Kronecker products, it is the
/// reference against which [`MasterEquation`] is tested.
pub fn liouvillian_superoperator(space: &HilbertSpace, params: &SystemParams, px: f64) -> DMatrix<C64> {
    let dim = space.dim();
    let id = space.identity();
    let h = hamiltonian(space, params);
    let minus_i = C64::new(0.0, -1.0);
    let mut sup = (id.kronecker(&h) - h.transpose().kronecker(&id)) * minus_i;

    let a = space.annihilation();
    let s1 = space.sigma_minus(Dot::One);
    let s2 = space.sigma_minus(Dot::Two);
    let channels = [
        (params.kappa(), a.clone()),
        (params.gamma(), s1.clone()),
        (params.gamma(), s2.clone()),
        (params.pc(), a.adjoint()),
        (px, s1.adjoint()),
        (px, s2.adjoint()),
    ];
    for (rate, l) in channels {
        if rate == 0.0 {
            continue;
        }
        let ldl = l.adjoint() * &l;
        let d = l.conjugate().kronecker(&l) * C64::from(2.0) - id.kronecker(&ldl) - ldl.transpose().kronecker(&id);
        sup += d * C64::from(0.5 * rate);
    }
    debug_assert_eq!(sup.nrows(), dim * dim);
    sup
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateOptions {
    pub method: Method,
    /// Largest allowed top-Fock population; `None` disables the check.
    pub truncation_guard: Option<f64>,
}

/// Default limit on the population of the highest photon level.
pub const TRUNCATION_GUARD: f64 = 1e-5;

impl Default for IntegrateOptions {
    fn default() -> Self {
        Self { method: Method::default(), truncation_guard: Some(TRUNCATION_GUARD) }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    /// `P_x(t)` at each sample, rad/ps.
    pub pump_values: Vec<f64>,
    /// Largest `|ρ - ρ†|` seen before the per-sample symmetrization.
    pub max_hermiticity_drift: f64,
    pub stats: Stats,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

/// `t_start, t_start + dt, …` up to and including `t_end` (within rounding).
pub fn sample_times(t_start: f64, t_end: f64, sample_dt: f64) -> Result<Vec<f64>> {
    if !(t_end > t_start) {
        return Err(Error::Config(format!("t_end ({t_end}) must exceed t_start ({t_start})")));
    }
    if !(sample_dt > 0.0) {
        return Err(Error::Config(format!("sample_dt must be positive, got {sample_dt}")));
    }
    let count = ((t_end - t_start) / sample_dt + 1e-9).floor() as usize;
    Ok((0..=count).map(|k| t_start + k as f64 * sample_dt).collect())
}

/// Integrates the master equation from `rho0` and samples every `sample_dt`.
pub fn integrate(
    space: &HilbertSpace,
    params: &SystemParams,
    rho0: &DensityMatrix,
    t_span: (f64, f64),
    sample_dt: f64,
    options: &IntegrateOptions,
) -> Result<Trajectory> {
    if rho0.dim() != space.dim() {
        return Err(Error::Shape { expected: space.dim(), rows: rho0.dim(), cols: rho0.matrix().ncols() });
    }
    params.validate()?;
    let times = sample_times(t_span.0, t_span.1, sample_dt)?;
    let eq = MasterEquation::new(space, params);
    let top = space.n_max();

    let mut states = Vec::with_capacity(times.len());
    let mut drift = 0.0f64;
    let stats = ode::integrate(
        |t, y, dy| eq.rhs_into(t, y, dy),
        rho0.matrix().clone(),
        &times,
        options.method,
        |_, t, y| {
            let adj = y.adjoint();
            drift = drift.max(max_abs(&(&*y - &adj)));
            *y = (&*y + adj) * C64::from(0.5);
            if let Some(limit) = options.truncation_guard {
                let population: f64 = (0..4).map(|dots| y[(dots * (top + 1) + top, dots * (top + 1) + top)].re).sum();
                if population > limit {
                    return Err(Error::Truncation { t, population, n_max: top });
                }
            }
            states.push(DensityMatrix::new_unchecked(y.clone()));
            Ok(())
        },
    )?;

    let pump_values = times.iter().map(|&t| eq.pump(t)).collect();
    Ok(Trajectory { times, states, pump_values, max_hermiticity_drift: drift, stats })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observables {
    pub t: f64,
    pub n_photon: f64,
    pub pop_x1: f64,
    pub pop_x2: f64,
    pub top_fock: f64,
}

/// Photon number, dot occupations and top-Fock population at one instant.
pub fn observables_at(space: &HilbertSpace, t: f64, rho: &DensityMatrix) -> Observables {
    let mut obs = Observables { t, n_photon: 0.0, pop_x1: 0.0, pop_x2: 0.0, top_fock: 0.0 };
    for idx in 0..space.dim() {
        let (e1, e2, n) = space.labels(idx);
        let p = rho.population(idx);
        obs.n_photon += n as f64 * p;
        obs.pop_x1 += e1 as f64 * p;
        obs.pop_x2 += e2 as f64 * p;
        if n == space.n_max() {
            obs.top_fock += p;
        }
    }
    obs
}

pub fn observables(space: &HilbertSpace, trajectory: &Trajectory) -> Vec<Observables> {
    trajectory.times.iter().zip(&trajectory.states).map(|(&t, rho)| observables_at(space, t, rho)).collect()
}

/// Worst-case state diagnostics over a trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryReport {
    pub max_trace_error: f64,
    pub max_hermiticity_drift: f64,
    pub min_eigenvalue: f64,
    pub max_top_fock: f64,
}

impl TrajectoryReport {
    pub fn is_valid(&self) -> bool {
        self.max_trace_error <= TRACE_TOL
            && self.max_hermiticity_drift <= HERMITIAN_TOL
            && self.min_eigenvalue >= -POSITIVITY_TOL
            && self.max_top_fock <= TRUNCATION_GUARD
    }
}

pub fn check_trajectory(space: &HilbertSpace, trajectory: &Trajectory) -> Result<TrajectoryReport> {
    let mut report = TrajectoryReport {
        max_trace_error: 0.0,
        max_hermiticity_drift: trajectory.max_hermiticity_drift,
        min_eigenvalue: f64::INFINITY,
        max_top_fock: 0.0,
    };
    for (&t, rho) in trajectory.times.iter().zip(&trajectory.states) {
        let r = rho.check()?;
        report.max_trace_error = report.max_trace_error.max(r.trace_error);
        report.max_hermiticity_drift = report.max_hermiticity_drift.max(r.hermiticity_drift);
        report.min_eigenvalue = report.min_eigenvalue.min(r.min_eigenvalue);
        report.max_top_fock = report.max_top_fock.max(observables_at(space, t, rho).top_fock);
    }
    Ok(report)
}

/// Population of `|g,g,0⟩`, the fidelity with the vacuum.
pub fn vacuum_fidelity(space: &HilbertSpace, rho: &DensityMatrix) -> f64 {
    rho.population(space.index(0, 0, 0))
}

/// Time for half a Förster exchange cycle, `π / (2Γ)` in ps.
pub fn forster_swap_time(params: &SystemParams) -> f64 {
    PI / (2.0 * params.forster())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> SystemParams {
        SystemParams {
            forster_over_2pi: 15.0,
            pc_over_2pi: 0.7,
            pulse: PulseParams { p0_over_2pi: 1.3, tau_p: 10.0, t0: Some(20.0) },
            n_max: 3,
            ..Default::default()
        }
    }

    #[test]
    fn pulse_shape() {
        let pulse = PulseParams { p0_over_2pi: 2.0, tau_p: 20.0, t0: Some(60.0) };
        let peak = angular(2.0);
        assert_eq!(pump_profile(&pulse, 60.0), peak);
        let half = pump_profile(&pulse, 60.0 + pulse.fwhm() / 2.0);
        assert!((half / peak - 0.5).abs() < 1e-12);
        assert!(pump_profile(&pulse, 60.0 + 10.0 * 20.0) < 2e-22 * peak);
    }

    #[test]
    fn vacuum_is_stationary_without_pumping() {
        let p = SystemParams { pc_over_2pi: 0.0, pulse: PulseParams::off(), ..params() };
        let s = p.space().unwrap();
        let rho = InitialState::Ground.density(&s);
        let d = lindblad_rhs(&s, &p, &rho, 3.0).unwrap();
        assert_eq!(max_abs(&d), 0.0);
    }

    #[test]
    fn cavity_decay_of_one_photon() {
        let p = SystemParams {
            g_over_2pi: 0.0,
            gamma_over_2pi: 0.0,
            forster_over_2pi: 0.0,
            pc_over_2pi: 0.0,
            pulse: PulseParams::off(),
            n_max: 3,
            ..Default::default()
        };
        let s = p.space().unwrap();
        let rho = DensityMatrix::pure(&s.ket(0, 0, 1)).unwrap();
        let d = lindblad_rhs(&s, &p, &rho, 0.0).unwrap();
        let mut expected = DMatrix::zeros(s.dim(), s.dim());
        expected[(s.index(0, 0, 0), s.index(0, 0, 0))] = C64::from(p.kappa());
        expected[(s.index(0, 0, 1), s.index(0, 0, 1))] = C64::from(-p.kappa());
        assert!(max_abs(&(d - expected)) < 1e-16);
    }

    #[test]
    fn rhs_matches_superoperator() {
        let p = params();
        let s = p.space().unwrap();
        let eq = MasterEquation::new(&s, &p);
        let t = 17.0;
        let sup = liouvillian_superoperator(&s, &p, eq.pump(t));
        // Any matrix, Hermitian or not: the generator is linear.
        let x = DMatrix::from_fn(s.dim(), s.dim(), |r, c| C64::new((r as f64 * 0.37 + c as f64).sin(), (r * c) as f64 * 0.01));
        let direct = eq.rhs(t, &x);
        let vec = &sup * nalgebra::DVector::from_column_slice(x.as_slice());
        let via_sup = DMatrix::from_column_slice(s.dim(), s.dim(), vec.as_slice());
        assert!(max_abs(&(direct - via_sup)) < 1e-14);
    }

    #[test]
    fn shape_mismatch() {
        let p = params();
        let other = HilbertSpace::new(4).unwrap();
        let rho = InitialState::Ground.density(&other);
        assert!(matches!(lindblad_rhs(&p.space().unwrap(), &p, &rho, 0.0), Err(Error::Shape { .. })));
    }

    #[test]
    fn density_validation() {
        let s = HilbertSpace::new(2).unwrap();
        let mut m = InitialState::Symmetric.density(&s).into_matrix();
        assert!(DensityMatrix::new(m.clone()).is_ok());
        m[(0, 1)] = C64::new(0.0, 0.1);
        assert!(DensityMatrix::new(m).is_err());
        let doubled = InitialState::Ground.density(&s).into_matrix() * C64::from(2.0);
        assert!(DensityMatrix::new(doubled).is_err());
    }

    #[test]
    fn sample_grid() {
        let t = sample_times(0.0, 150.0, 0.25).unwrap();
        assert_eq!(t.len(), 601);
        assert_eq!(*t.last().unwrap(), 150.0);
        assert!(sample_times(0.0, 0.0, 1.0).is_err());
        assert!(sample_times(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn observables_of_basis_states() {
        let s = HilbertSpace::new(3).unwrap();
        let vac = observables_at(&s, 0.0, &InitialState::Ground.density(&s));
        assert_eq!((vac.n_photon, vac.pop_x1, vac.pop_x2, vac.top_fock), (0.0, 0.0, 0.0, 0.0));
        let rho = DensityMatrix::pure(&s.ket(1, 1, 2)).unwrap();
        let o = observables_at(&s, 0.0, &rho);
        assert_eq!((o.n_photon, o.pop_x1, o.pop_x2, o.top_fock), (2.0, 1.0, 1.0, 0.0));
        let top = DensityMatrix::pure(&s.ket(0, 1, 3)).unwrap();
        assert_eq!(observables_at(&s, 0.0, &top).top_fock, 1.0);
    }

    #[test]
    fn truncation_guard_fires() {
        let p = SystemParams { pc_over_2pi: 4.0, n_max: 2, ..Default::default() };
        let s = p.space().unwrap();
        let err = integrate(&s, &p, &InitialState::Ground.density(&s), (0.0, 100.0), 1.0, &IntegrateOptions::default());
        assert!(matches!(err, Err(Error::Truncation { .. })));
    }

    #[test]
    fn initial_state_tags() {
        for tag in InitialState::TAGS {
            let st: InitialState = tag.parse().unwrap();
            assert_eq!(st.tag(), *tag);
        }
        assert!("ee0".parse::<InitialState>().is_err());
    }
}
