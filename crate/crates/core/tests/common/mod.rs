//! Reference implementations used as test oracles. Everything here is built
//! from dense Kronecker products, independently of the library internals.
#![allow(dead_code)]

use std::f64::consts::PI;

use dotcavity::SystemParams;
use nalgebra::{DMatrix, DVector, Matrix4};
use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

/// GHz (ν = ω/2π) to rad/ps.
pub fn rad_per_ps(nu_ghz: f64) -> f64 {
    2.0 * PI * nu_ghz * 1e-3
}

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn eye(n: usize) -> DMatrix<C64> {
    DMatrix::identity(n, n)
}

/// Operators on dot1 ⊗ dot2 ⊗ Fock(0..=n_max); `|e⟩` is the second level.
pub struct Ops {
    pub dim: usize,
    pub a: DMatrix<C64>,
    pub s1: DMatrix<C64>,
    pub s2: DMatrix<C64>,
}

impl Ops {
    pub fn new(n_max: usize) -> Self {
        let f = n_max + 1;
        let mut a_f = DMatrix::zeros(f, f);
        for n in 1..f {
            a_f[(n - 1, n)] = c((n as f64).sqrt());
        }
        let mut sm = DMatrix::zeros(2, 2);
        sm[(0, 1)] = c(1.0);
        Ops {
            dim: 4 * f,
            a: eye(2).kronecker(&eye(2)).kronecker(&a_f),
            s1: sm.kronecker(&eye(2)).kronecker(&eye(f)),
            s2: eye(2).kronecker(&sm).kronecker(&eye(f)),
        }
    }

    pub fn index(&self, e1: usize, e2: usize, n: usize) -> usize {
        let f = self.dim / 4;
        (2 * e1 + e2) * f + n
    }

    pub fn hamiltonian(&self, p: &SystemParams) -> DMatrix<C64> {
        let (a, s1, s2) = (&self.a, &self.s1, &self.s2);
        let ad = a.adjoint();
        let (s1p, s2p) = (s1.adjoint(), s2.adjoint());
        (&s1p * s1 + &s2p * s2) * c(rad_per_ps(p.delta_over_2pi))
            + (&ad * s1 + a * &s1p + &ad * s2 + a * &s2p) * c(rad_per_ps(p.g_over_2pi))
            + (&s1p * s2 + &s2p * s1) * c(rad_per_ps(p.forster_over_2pi))
    }

    /// Column-stacked Liouvillian with the exciton pump frozen at `px` rad/ps.
    pub fn liouvillian(&self, p: &SystemParams, px: f64) -> DMatrix<C64> {
        let id = eye(self.dim);
        let h = self.hamiltonian(p);
        let i = C64::new(0.0, 1.0);
        let mut l = (id.kronecker(&h) - h.transpose().kronecker(&id)) * (-i);
        let channels = [
            (rad_per_ps(p.kappa_over_2pi), self.a.clone()),
            (rad_per_ps(p.gamma_over_2pi), self.s1.clone()),
            (rad_per_ps(p.gamma_over_2pi), self.s2.clone()),
            (rad_per_ps(p.pc_over_2pi), self.a.adjoint()),
            (px, self.s1.adjoint()),
            (px, self.s2.adjoint()),
        ];
        for (rate, op) in channels {
            let ldl = op.adjoint() * &op;
            l += (op.conjugate().kronecker(&op) - id.kronecker(&ldl) * c(0.5) - ldl.transpose().kronecker(&id) * c(0.5)) * c(rate);
        }
        l
    }
}

pub fn vec_cols(m: &DMatrix<C64>) -> DVector<C64> {
    DVector::from_column_slice(m.as_slice())
}

pub fn unvec_cols(v: &DVector<C64>, dim: usize) -> DMatrix<C64> {
    DMatrix::from_column_slice(dim, dim, v.as_slice())
}

/// `exp(L t) vec(ρ₀)` for a time-independent generator.
pub fn propagate_exact(ops: &Ops, p: &SystemParams, rho0: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let l = ops.liouvillian(p, 0.0) * c(t);
    unvec_cols(&(l.exp() * vec_cols(rho0)), ops.dim)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

/// Haar-distributed two-qubit pure state amplitudes in `{gg, ge, eg, ee}` order.
pub fn random_pure<R: Rng>(rng: &mut R) -> [C64; 4] {
    let v: [C64; 4] = std::array::from_fn(|_| random_complex(rng));
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.map(|z| z / norm)
}

/// Random density matrix of dimension `n` with full rank.
pub fn random_mixed<R: Rng>(rng: &mut R, n: usize) -> DMatrix<C64> {
    let g = DMatrix::from_fn(n, n, |_, _| random_complex(rng));
    let m = &g * g.adjoint();
    let tr = m.trace();
    m / tr
}

fn paulis() -> [Matrix4<C64>; 3] {
    let i = C64::new(0.0, 1.0);
    let x = nalgebra::Matrix2::new(c(0.0), c(1.0), c(1.0), c(0.0));
    let y = nalgebra::Matrix2::new(c(0.0), -i, i, c(0.0));
    let z = nalgebra::Matrix2::new(c(1.0), c(0.0), c(0.0), c(-1.0));
    [x.kronecker(&x), y.kronecker(&y), z.kronecker(&z)]
}

/// `(I + Σ cᵢ σᵢ⊗σᵢ) / 4`.
pub fn bell_diagonal(cs: [f64; 3]) -> Matrix4<C64> {
    let s = paulis();
    (Matrix4::identity() + s[0] * c(cs[0]) + s[1] * c(cs[1]) + s[2] * c(cs[2])) * c(0.25)
}

/// Correlation vector of a random Bell-diagonal state, drawn uniformly over
/// the simplex of Bell-basis weights.
pub fn random_bell_diagonal<R: Rng>(rng: &mut R) -> [f64; 3] {
    let w: [f64; 4] = std::array::from_fn(|_| Exp1.sample(rng));
    let s: f64 = w.iter().sum();
    let l = w.map(|x| x / s);
    [l[2] + l[3] - l[0] - l[1], l[1] + l[3] - l[0] - l[2], l[1] + l[2] - l[0] - l[3]]
}

fn xlog2x(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.log2()
    }
}

/// Closed-form `(I, C, Q)` of a Bell-diagonal state (Luo 2008).
pub fn bell_diagonal_measures(cs: [f64; 3]) -> (f64, f64, f64) {
    let [c1, c2, c3] = cs;
    let lambdas = [(1.0 - c1 - c2 - c3) / 4.0, (1.0 - c1 + c2 + c3) / 4.0, (1.0 + c1 - c2 + c3) / 4.0, (1.0 + c1 + c2 - c3) / 4.0];
    let mutual = 2.0 + lambdas.iter().map(|&l| xlog2x(l)).sum::<f64>();
    let cm = c1.abs().max(c2.abs()).max(c3.abs());
    let classical = 0.5 * (xlog2x(1.0 - cm) + xlog2x(1.0 + cm));
    (mutual, classical, mutual - classical)
}

/// Spearman rank correlation for samples without ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        for (rank, &i) in idx.iter().enumerate() {
            r[i] = rank as f64;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let d2: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - b).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}

/// Maximal runs of samples where `cc` is exactly zero, as
/// `(start, end, closed)`. `end` is the first nonzero sample after the run, or
/// the last sample time when the run reaches the end of the window.
pub fn zero_runs(times: &[f64], cc: &[f64]) -> Vec<(f64, f64, bool)> {
    let mut runs = Vec::new();
    let mut start = None;
    for (&t, &v) in times.iter().zip(cc) {
        match (v == 0.0, start) {
            (true, None) => start = Some(t),
            (false, Some(s)) => {
                runs.push((s, t, true));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        runs.push((s, *times.last().unwrap(), false));
    }
    runs
}

/// Interior local maxima `(t, value)` with a strict rise on the left.
pub fn local_maxima(times: &[f64], v: &[f64]) -> Vec<(f64, f64)> {
    (1..v.len().saturating_sub(1)).filter(|&i| v[i] > v[i - 1] && v[i] >= v[i + 1]).map(|i| (times[i], v[i])).collect()
}
