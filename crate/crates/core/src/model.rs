//! System parameters, the rotating-frame Hamiltonian and its excitation
//! manifold blocks.
//!
//! User-facing rates are linear frequencies `ν = rate / 2π` in GHz. Time is in
//! picoseconds, so the angular rate used internally is `2π · ν · 1e-3` rad/ps.
//! The Hamiltonian is written in the frame rotating at the cavity frequency;
//! the absolute cavity frequency only survives through the detuning.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hilbert::{Dot, HilbertSpace, OperatorMatrix, C64};

/// Converts a linear frequency in GHz to an angular rate in rad/ps.
pub fn angular(nu_ghz: f64) -> f64 {
    2.0 * PI * nu_ghz * 1e-3
}

/// Converts an angular rate in rad/ps back to a linear frequency in GHz.
pub fn linear_ghz(omega: f64) -> f64 {
    omega / (2.0 * PI * 1e-3)
}

/// `FWHM / τ_p` for a Gaussian.
pub fn fwhm_factor() -> f64 {
    2.0 * (2.0 * 2f64.ln()).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseParams {
    /// Peak exciton pump rate `P₀ / 2π` in GHz.
    pub p0_over_2pi: f64,
    /// Gaussian width in ps.
    pub tau_p: f64,
    /// Pulse centre in ps. `None` places it at `3 τ_p`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t0: Option<f64>,
}

impl PulseParams {
    pub fn off() -> Self {
        Self { p0_over_2pi: 0.0, tau_p: 20.0, t0: None }
    }

    pub fn center(&self) -> f64 {
        self.t0.unwrap_or(3.0 * self.tau_p)
    }

    pub fn fwhm(&self) -> f64 {
        fwhm_factor() * self.tau_p
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau_p > 0.0) {
            return Err(Error::Config(format!("tau_p must be positive, got {}", self.tau_p)));
        }
        if !(self.p0_over_2pi >= 0.0) {
            return Err(Error::Config(format!("p0_over_2pi must be non-negative, got {}", self.p0_over_2pi)));
        }
        if let Some(t0) = self.t0 {
            if !t0.is_finite() {
                return Err(Error::Config("t0 must be finite".into()));
            }
        }
        Ok(())
    }
}

/// Physical parameters of the dots-in-cavity system.
///
/// Both dots share one coupling `g` and one spontaneous emission rate `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    pub g_over_2pi: f64,
    pub gamma_over_2pi: f64,
    pub kappa_over_2pi: f64,
    pub forster_over_2pi: f64,
    pub delta_over_2pi: f64,
    pub pc_over_2pi: f64,
    pub pulse: PulseParams,
    pub n_max: usize,
}

/// Default Fock truncation. A cavity pumped at `P_c = κ/5` keeps about
/// `0.8 · 0.2ⁿ` population in level `n`, so 8 levels are needed to hold the top
/// level below the truncation guard.
pub const DEFAULT_N_MAX: usize = 8;

impl Default for SystemParams {
    /// Shared base of every preset: g/2π = 10, κ/2π = 5, γ/2π = 0.025 GHz,
    /// resonant dots, no Förster coupling and no pumping.
    fn default() -> Self {
        Self {
            g_over_2pi: 10.0,
            gamma_over_2pi: 0.025,
            kappa_over_2pi: 5.0,
            forster_over_2pi: 0.0,
            delta_over_2pi: 0.0,
            pc_over_2pi: 0.0,
            pulse: PulseParams::off(),
            n_max: DEFAULT_N_MAX,
        }
    }
}

/// Names accepted by [`SystemParams::set`].
pub const SWEEPABLE: &[&str] =
    &["g_over_2pi", "gamma_over_2pi", "kappa_over_2pi", "forster_over_2pi", "delta_over_2pi", "pc_over_2pi", "p0_over_2pi", "tau_p", "t0"];

impl SystemParams {
    pub fn g(&self) -> f64 {
        angular(self.g_over_2pi)
    }
    pub fn gamma(&self) -> f64 {
        angular(self.gamma_over_2pi)
    }
    pub fn kappa(&self) -> f64 {
        angular(self.kappa_over_2pi)
    }
    pub fn forster(&self) -> f64 {
        angular(self.forster_over_2pi)
    }
    pub fn delta(&self) -> f64 {
        angular(self.delta_over_2pi)
    }
    pub fn pc(&self) -> f64 {
        angular(self.pc_over_2pi)
    }

    /// `g > κ` and `g > γ`.
    pub fn is_strong_coupling(&self) -> bool {
        self.g_over_2pi > self.kappa_over_2pi && self.g_over_2pi > self.gamma_over_2pi
    }

    /// Cavity quality factor `ω_c / 2κ` for a given absolute cavity frequency.
    pub fn quality_factor(&self, cavity_over_2pi_ghz: f64) -> f64 {
        cavity_over_2pi_ghz / (2.0 * self.kappa_over_2pi)
    }

    pub fn space(&self) -> Result<HilbertSpace> {
        HilbertSpace::new(self.n_max)
    }

    pub fn validate(&self) -> Result<()> {
        let rates = [
            ("g_over_2pi", self.g_over_2pi),
            ("gamma_over_2pi", self.gamma_over_2pi),
            ("kappa_over_2pi", self.kappa_over_2pi),
            ("forster_over_2pi", self.forster_over_2pi),
            ("pc_over_2pi", self.pc_over_2pi),
        ];
        for (name, value) in rates {
            if !(value >= 0.0) || !value.is_finite() {
                return Err(Error::Config(format!("{name} must be a finite non-negative rate, got {value}")));
            }
        }
        if !self.delta_over_2pi.is_finite() {
            return Err(Error::Config("delta_over_2pi must be finite".into()));
        }
        self.pulse.validate()?;
        HilbertSpace::new(self.n_max)?;
        Ok(())
    }

    /// Sets a scalar parameter by name, as used by parameter sweeps.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match name {
            "g_over_2pi" => self.g_over_2pi = value,
            "gamma_over_2pi" => self.gamma_over_2pi = value,
            "kappa_over_2pi" => self.kappa_over_2pi = value,
            "forster_over_2pi" => self.forster_over_2pi = value,
            "delta_over_2pi" => self.delta_over_2pi = value,
            "pc_over_2pi" => self.pc_over_2pi = value,
            "p0_over_2pi" => self.pulse.p0_over_2pi = value,
            "tau_p" => self.pulse.tau_p = value,
            "t0" => self.pulse.t0 = Some(value),
            other => return Err(Error::Config(format!("unknown sweep parameter '{other}'; expected one of {}", SWEEPABLE.join(", ")))),
        }
        Ok(())
    }
}

/// Rotating-frame Hamiltonian (divided by ħ, in rad/ps):
/// `Δ Σᵢ σ₊ⁱσ₋ⁱ + g Σᵢ (a†σ₋ⁱ + aσ₊ⁱ) + Γ (σ₊¹σ₋² + σ₋¹σ₊²)`.
pub fn hamiltonian(space: &HilbertSpace, params: &SystemParams) -> OperatorMatrix {
    let a = space.annihilation();
    let ad = a.adjoint();
    let s1 = space.sigma_minus(Dot::One);
    let s2 = space.sigma_minus(Dot::Two);
    let s1p = s1.adjoint();
    let s2p = s2.adjoint();

    let detuning = (&s1p * &s1 + &s2p * &s2) * C64::from(params.delta());
    let jc = (&ad * &s1 + &a * &s1p + &ad * &s2 + &a * &s2p) * C64::from(params.g());
    let forster = (&s1p * &s2 + &s1 * &s2p) * C64::from(params.forster());
    detuning + jc + forster
}

/// Naked-state labels `(e1, e2, photons)` spanning manifold `n`, in the order
/// `|g,g,n⟩, |g,e,n-1⟩, |e,g,n-1⟩, |e,e,n-2⟩`. For `n = 1` the last state does
/// not exist and is left out.
pub fn manifold_basis(n: usize) -> Result<Vec<(usize, usize, usize)>> {
    if n < 1 {
        return Err(Error::InvalidManifold(n));
    }
    let mut basis = vec![(0, 0, n), (0, 1, n - 1), (1, 0, n - 1)];
    if n >= 2 {
        basis.push((1, 1, n - 2));
    }
    Ok(basis)
}

/// Hamiltonian block of excitation manifold `n` in rad/ps, energies measured
/// from `n ω_c`.
pub fn manifold_block(params: &SystemParams, n: usize) -> Result<DMatrix<C64>> {
    let basis = manifold_basis(n)?;
    let (g, gf, d) = (params.g(), params.forster(), params.delta());
    let sn = (n as f64).sqrt();
    let mut block = DMatrix::<f64>::zeros(basis.len(), basis.len());

    block[(1, 1)] = d;
    block[(2, 2)] = d;
    block[(0, 1)] = g * sn;
    block[(0, 2)] = g * sn;
    block[(1, 2)] = gf;
    if n >= 2 {
        let sn1 = ((n - 1) as f64).sqrt();
        block[(3, 3)] = 2.0 * d;
        block[(1, 3)] = g * sn1;
        block[(2, 3)] = g * sn1;
    }
    block.fill_lower_triangle_with_upper_triangle();
    Ok(block.map(C64::from))
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<C64>) -> Result<Vec<f64>> {
    let eig = m
        .clone()
        .try_symmetric_eigen(1e-15, 10_000)
        .ok_or_else(|| Error::Eigen(format!("{}x{} Hermitian matrix", m.nrows(), m.ncols())))?;
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub delta_over_2pi: f64,
    /// Ascending eigenvalues in rad/ps.
    pub eigenvalues: Vec<f64>,
}

/// Dressed-state energies of manifold `n` for each detuning in `deltas_ghz`.
pub fn spectrum_sweep(params: &SystemParams, n: usize, deltas_ghz: &[f64]) -> Result<Vec<SpectrumRow>> {
    if deltas_ghz.is_empty() {
        return Err(Error::Config("detuning range is empty".into()));
    }
    manifold_basis(n)?;
    deltas_ghz
        .iter()
        .map(|&delta| {
            let p = SystemParams { delta_over_2pi: delta, ..*params };
            Ok(SpectrumRow { delta_over_2pi: delta, eigenvalues: hermitian_eigenvalues(&manifold_block(&p, n)?)? })
        })
        .collect()
}
