//! Numerical realization of the Mellin convolution operator `K¹_c` and the
//! reduced 2×2 boundary system on graded meshes: quadrature application,
//! Nyström assembly, direct dense solves, conditioning diagnostics and a
//! Mellin-transform oracle.
//!
//! The function spaces of the continuous theory are fractional; a faithful
//! fractional-norm discretization is out of scope here. Densities are
//! discretized as plain square-integrable samples on a graded mesh and
//! conditioning *trends* across a mesh ladder serve as the empirical
//! signal, with the symbol calculus as the authoritative verdict.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::quad::{integrate_half_line, GaussRule};
use crate::special::{complex_power, BranchSpec};
use crate::{Error, Result};

/// Gauss nodes per graded panel.
const GL_PER_PANEL: usize = 4;

/// Composite-Gauss mesh on `(0, T]` graded toward the vertex:
/// panels `[T(j/P)^q, T((j+1)/P)^q]` with `GL_PER_PANEL` nodes each.
#[derive(Clone, Debug)]
pub struct GradedMesh {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    truncation: f64,
    grading: f64,
}

impl GradedMesh {
    pub fn new(truncation: f64, n_nodes: usize, grading: f64) -> Result<Self> {
        if !(truncation > 0.0) {
            return Err(Error::Constraint("mesh truncation must be positive".into()));
        }
        if grading < 1.0 {
            return Err(Error::Constraint("mesh grading must be >= 1".into()));
        }
        if n_nodes == 0 || n_nodes % GL_PER_PANEL != 0 {
            return Err(Error::Constraint(format!(
                "node count must be a positive multiple of {GL_PER_PANEL}"
            )));
        }
        let panels = n_nodes / GL_PER_PANEL;
        let rule = GaussRule::new(GL_PER_PANEL);
        let mut nodes = Vec::with_capacity(n_nodes);
        let mut weights = Vec::with_capacity(n_nodes);
        for j in 0..panels {
            let a = truncation * ((j as f64) / panels as f64).powf(grading);
            let b = truncation * ((j as f64 + 1.0) / panels as f64).powf(grading);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(mid + half * x);
                weights.push(half * w);
            }
        }
        Ok(Self { nodes, weights, truncation, grading })
    }

    /// Default mesh of the solver pipeline: `T = 40`, `q = 3`, `N = 256`.
    pub fn default_pipeline() -> Self {
        Self::new(40.0, 256, 3.0).expect("default mesh parameters are valid")
    }

    /// Same grading law with twice the panels.
    pub fn refine(&self) -> Self {
        Self::new(self.truncation, 2 * self.nodes.len(), self.grading)
            .expect("refinement preserves validity")
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    pub fn grading(&self) -> f64 {
        self.grading
    }

    /// Sample a function at the mesh nodes.
    pub fn sample(&self, f: impl Fn(f64) -> Complex64) -> Vec<Complex64> {
        self.nodes.iter().map(|&t| f(t)).collect()
    }
}

/// Discretized unknown pair `(φ, ψ)` on a common mesh.
#[derive(Clone, Debug)]
pub struct DensityPair {
    pub phi: Vec<Complex64>,
    pub psi: Vec<Complex64>,
}

/// Result of a Mellin-convolution quadrature: value plus a crude bound on
/// the discarded tail beyond the mesh truncation.
#[derive(Clone, Copy, Debug)]
pub struct K1Value {
    pub value: Complex64,
    pub tail_bound: f64,
}

fn check_arg_c(c: Complex64) -> Result<f64> {
    let mut arg = c.arg();
    if arg <= 0.0 {
        arg += 2.0 * PI;
    }
    if arg <= 1e-14 || arg >= 2.0 * PI - 1e-14 {
        return Err(Error::UnsupportedDomain(
            "K1_c requires 0 < arg c < 2*pi (true Cauchy singularity otherwise)".into(),
        ));
    }
    Ok(arg)
}

/// `K¹_c φ(t) = (1/π) ∫₀^∞ φ(τ)/(t − cτ) dτ` from samples on the mesh
/// (pure Nyström product, matching [`assemble`] rows exactly).
pub fn k1_apply(
    c: Complex64,
    phi: &[Complex64],
    mesh: &GradedMesh,
    t: f64,
) -> Result<K1Value> {
    check_arg_c(c)?;
    if phi.len() != mesh.len() {
        return Err(Error::Contract("density samples do not conform to the mesh".into()));
    }
    if !(t > 0.0 && t <= mesh.truncation()) {
        return Err(Error::Domain(format!(
            "evaluation node t = {t} outside (0, T = {}]",
            mesh.truncation()
        )));
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for ((&tau, &w), &f) in mesh.nodes().iter().zip(mesh.weights()).zip(phi) {
        acc += f * w / (t - c * tau);
    }
    let tail = phi.last().map_or(0.0, |v| v.norm()) / c.norm();
    Ok(K1Value { value: acc / PI, tail_bound: tail })
}

/// Adaptive variant taking the density as a function; panels refine toward
/// the near-singular point `τ* = t cos(arg c)/|c|` when `arg c` is close
/// to the positive real axis.
pub fn k1_apply_adaptive(
    c: Complex64,
    phi: &dyn Fn(f64) -> Complex64,
    truncation: f64,
    t: f64,
) -> Result<K1Value> {
    let arg = check_arg_c(c)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("evaluation node t = {t} must be positive")));
    }
    let rule = GaussRule::new(16);
    // |t − cτ| is minimized at the projection point; its minimum is the
    // clearance t |sin(arg c)| / |c|
    let projection = t * arg.cos() / c.norm();
    let clearance = (t * arg.sin() / c.norm()).abs();
    let near = (projection > 0.0).then_some((projection, clearance.max(1e-14)));
    let value =
        integrate_half_line(&rule, truncation, near, |tau| phi(tau) / (t - c * tau)) / PI;
    let tail = phi(truncation).norm() / c.norm();
    Ok(K1Value { value, tail_bound: tail })
}

/// Discretized reduced system `[[I, −A],[A, I]]` with
/// `A = ½(K¹_{e^{iα}} + K¹_{e^{i(2π−α)}})`.
#[derive(Clone, Debug)]
pub struct DiscreteSystem {
    pub matrix: DMatrix<Complex64>,
    pub mesh: GradedMesh,
    pub alpha: f64,
    pub r: f64,
    pub p: f64,
    /// Set when `α` is within 1e-3 of `0` or `2π`: the kernel develops a
    /// near-singularity on the diagonal and plain Nyström accuracy
    /// degrades.
    pub near_degenerate: bool,
}

/// Nyström assembly of the reduced system. The orders `(r, p)` label the
/// continuous spaces; the plain-sample discretization itself does not
/// depend on them.
pub fn assemble(alpha: f64, r: f64, p: f64, mesh: &GradedMesh) -> Result<DiscreteSystem> {
    if !(alpha > 0.0 && alpha < 2.0 * PI) {
        return Err(Error::Constraint(format!("alpha = {alpha} outside (0, 2*pi)")));
    }
    let near_degenerate = alpha < 1e-3 || alpha > 2.0 * PI - 1e-3;
    let n = mesh.len();
    let c1 = Complex64::from_polar(1.0, alpha);
    let c2 = Complex64::from_polar(1.0, 2.0 * PI - alpha); // K_{e^{i(−α)}} = K_{e^{i(2π−α)}}
    let mut m = DMatrix::from_element(2 * n, 2 * n, Complex64::new(0.0, 0.0));
    for i in 0..n {
        let t = mesh.nodes()[i];
        m[(i, i)] += 1.0;
        m[(n + i, n + i)] += 1.0;
        for j in 0..n {
            let tau = mesh.nodes()[j];
            let w = mesh.weights()[j];
            let kernel = 0.5 / PI * (1.0 / (t - c1 * tau) + 1.0 / (t - c2 * tau)) * w;
            m[(i, n + j)] = -kernel;
            m[(n + i, j)] = kernel;
        }
    }
    Ok(DiscreteSystem {
        matrix: m,
        mesh: mesh.clone(),
        alpha,
        r,
        p,
        near_degenerate,
    })
}

/// Solve diagnostics.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolveInfo {
    pub residual: f64,
    pub condition_estimate: f64,
}

/// Direct dense solve of the assembled system against right-hand-side
/// samples `(G, H)` on the mesh.
pub fn solve(system: &DiscreteSystem, g: &[Complex64], h: &[Complex64]) -> Result<(DensityPair, SolveInfo)> {
    let n = system.mesh.len();
    if g.len() != n || h.len() != n {
        return Err(Error::Contract("rhs samples do not conform to the mesh".into()));
    }
    let mut rhs = DMatrix::from_element(2 * n, 1, Complex64::new(0.0, 0.0));
    for i in 0..n {
        rhs[(i, 0)] = g[i];
        rhs[(n + i, 0)] = h[i];
    }
    let cond = condition_estimate(&system.matrix)?;
    let lu = system.matrix.clone().lu();
    let sol = lu
        .solve(&rhs)
        .ok_or(Error::SingularSystem { cond })?;
    if !sol.iter().all(|v| v.is_finite()) || cond > 1e14 {
        return Err(Error::SingularSystem { cond });
    }
    let res = (&system.matrix * &sol - &rhs)
        .iter()
        .fold(0.0f64, |m, v| m.max(v.norm()));
    let pair = DensityPair {
        phi: (0..n).map(|i| sol[(i, 0)]).collect(),
        psi: (0..n).map(|i| sol[(n + i, 0)]).collect(),
    };
    Ok((pair, SolveInfo { residual: res, condition_estimate: cond }))
}

/// One-norm condition estimate `‖A‖₁ · est‖A⁻¹‖₁` (Hager's power method
/// on the inverse through LU solves).
pub fn condition_estimate(a: &DMatrix<Complex64>) -> Result<f64> {
    let n = a.nrows();
    let norm_a = (0..n)
        .map(|j| (0..n).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0f64, f64::max);
    let lu = a.clone().lu();
    let lut = a.transpose().lu();
    let mut x = DMatrix::from_element(n, 1, Complex64::new(1.0 / n as f64, 0.0));
    let mut est = 0.0f64;
    for _ in 0..6 {
        let y = lu.solve(&x).ok_or(Error::SingularSystem { cond: f64::INFINITY })?;
        let norm_y: f64 = y.iter().map(|v| v.norm()).sum();
        // sign vector of y, then one step on the transpose
        let sign = DMatrix::from_iterator(
            n,
            1,
            y.iter().map(|v| {
                if v.norm() == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    v / v.norm()
                }
            }),
        );
        let z = lut.solve(&sign).ok_or(Error::SingularSystem { cond: f64::INFINITY })?;
        let (jmax, zmax) = z
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |(ja, ma), (j, v)| if v.norm() > ma { (j, v.norm()) } else { (ja, ma) });
        if norm_y >= est {
            est = norm_y;
        }
        let sum_z: f64 = z.iter().map(|v| v.norm()).sum();
        if zmax <= sum_z / n as f64 + 1e-300 {
            break;
        }
        x = DMatrix::from_element(n, 1, Complex64::new(0.0, 0.0));
        x[(jmax, 0)] = Complex64::new(1.0, 0.0);
    }
    Ok(norm_a * est)
}

/// Conditioning classification across a mesh ladder.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ConditionTrend {
    Bounded,
    Growing,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConditionSweep {
    pub alpha: f64,
    pub r: f64,
    pub p: f64,
    pub levels: Vec<(usize, f64)>,
    pub growth_exponent: f64,
    pub classification: ConditionTrend,
}

/// Fit threshold: condition numbers growing faster than `N^0.4`, or by
/// more than 8x across the ladder, classify as growing.
const GROWTH_EXPONENT_THRESHOLD: f64 = 0.4;
const GROWTH_RATIO_THRESHOLD: f64 = 8.0;

/// Condition estimates over `n ∈ ladder` at fixed truncation and grading.
pub fn condition_sweep(
    alpha: f64,
    r: f64,
    p: f64,
    truncation: f64,
    grading: f64,
    ladder: &[usize],
) -> Result<ConditionSweep> {
    let mut levels = Vec::with_capacity(ladder.len());
    for &n in ladder {
        let mesh = GradedMesh::new(truncation, n, grading)?;
        let system = assemble(alpha, r, p, &mesh)?;
        let cond = condition_estimate(&system.matrix)?;
        levels.push((n, cond));
    }
    // least-squares slope of ln cond against ln n
    let m = levels.len() as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for &(n, c) in &levels {
        let x = (n as f64).ln();
        let y = c.ln();
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    let ratio = levels.last().unwrap().1 / levels.first().unwrap().1;
    let classification = if slope > GROWTH_EXPONENT_THRESHOLD || ratio > GROWTH_RATIO_THRESHOLD {
        ConditionTrend::Growing
    } else {
        ConditionTrend::Bounded
    };
    Ok(ConditionSweep { alpha, r, p, levels, growth_exponent: slope, classification })
}

/// Mellin multiplier of the lifted kernel:
/// `e^{−iπ(z−1)} c^{z−s−1} / sin(πz)` on the strip `0 < Re z < 1`; at
/// `s_shift = 0` this is the classical multiplier of `(1/π)(t − cτ)⁻¹`.
pub fn mellin_multiplier(
    c: Complex64,
    z: Complex64,
    s_shift: f64,
    branch: &BranchSpec,
) -> Result<Complex64> {
    if !(z.re > 0.0 && z.re < 1.0) {
        return Err(Error::Domain(format!(
            "Mellin multiplier requires 0 < Re z < 1 (strip of absolute convergence); got z = {z}"
        )));
    }
    let i = Complex64::new(0.0, 1.0);
    Ok((-i * PI * (z - 1.0)).exp() * complex_power(c, z - s_shift - 1.0, branch)?
        / (PI * z).sin())
}

/// Numeric Mellin transform `∫₀^∞ t^{z−1} f(t) dt` through the log
/// substitution `t = e^x` with a trapezoid rule on `[−span, span]`
/// (spectrally accurate for integrands decaying like the test densities).
pub fn mellin_transform(
    f: &dyn Fn(f64) -> Complex64,
    z: Complex64,
    span: f64,
    steps: usize,
) -> Complex64 {
    let h = 2.0 * span / steps as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..=steps {
        let x = -span + h * j as f64;
        let weight = if j == 0 || j == steps { 0.5 } else { 1.0 };
        acc += (z * x).exp() * f(x.exp()) * weight;
    }
    acc * h
}
