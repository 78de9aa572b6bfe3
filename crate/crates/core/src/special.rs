//! Complex special functions and branch-convention utilities.
//!
//! Everything in the crate that touches a kernel or a symbol goes through
//! this module: Hankel functions `H₀⁽¹⁾`, `H₁⁽¹⁾` for arguments in the
//! closed upper half-plane sector `arg z ∈ [0, π]`, the branch-explicit
//! complex power `c^γ = |c|^γ e^{iγ arg c}` with `arg c` read in `(0, 2π)`,
//! and the logarithmic fundamental-solution kernel of the Laplacian.
//!
//! Evaluation strategy for the Hankel functions (all paths agree to
//! ~3·10⁻¹¹ relative against high-precision references on
//! `|z| ∈ [10⁻⁸, 10³]`, `arg z ∈ [0, π]`):
//!
//! * `|z| ≤ 5`: ascending power series for `J₀ + iY₀` (resp. order 1);
//! * `5 < |z| ≤ 30` with `arg z ∈ [π/8, 7π/8]`: rotate to the modified
//!   Bessel pair `K₀, K₁` at `w = -iz` (right half-plane) and evaluate by
//!   Steed's continued fraction; this is the regime where the `J + iY`
//!   series loses digits to cancellation;
//! * elsewhere: large-argument asymptotic expansion, truncated at its
//!   smallest term.

use num_complex::Complex64;
use std::f64::consts::PI;

use crate::{Error, Result};

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const TWO_PI: f64 = 2.0 * PI;

/// Branch convention for complex powers: `arg c ∈ (0, 2π)` and
/// `arg γ ∈ (0, π)`, kept explicit because the default principal branch
/// reads `arg c ∈ (-π, π]` and silently disagrees on the lower half-plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BranchSpec {
    arg_c: f64,
    arg_gamma: f64,
}

impl BranchSpec {
    /// New branch spec; both arguments are validated against their open
    /// intervals.
    pub fn new(arg_c: f64, arg_gamma: f64) -> Result<Self> {
        if !(arg_c > 0.0 && arg_c < TWO_PI) {
            return Err(Error::Branch(format!(
                "arg c = {arg_c} outside the open interval (0, 2*pi)"
            )));
        }
        if !(arg_gamma > 0.0 && arg_gamma < PI) {
            return Err(Error::Branch(format!(
                "arg gamma = {arg_gamma} outside the open interval (0, pi)"
            )));
        }
        Ok(Self { arg_c, arg_gamma })
    }

    /// Branch for `c = e^{iθ}` with the conventional choice `γ = i`
    /// (`arg γ = π/2`).
    pub fn for_angle(theta: f64) -> Result<Self> {
        Self::new(theta, 0.5 * PI)
    }

    pub fn arg_c(&self) -> f64 {
        self.arg_c
    }

    pub fn arg_gamma(&self) -> f64 {
        self.arg_gamma
    }

    /// The combined argument `arg(c·γ)`, reduced to `(-π, π]`; the symbol
    /// calculus requires it to lie strictly in `(-π, 0)`.
    pub fn combined_arg(&self) -> Result<f64> {
        let mut a = self.arg_c + self.arg_gamma;
        while a > PI {
            a -= TWO_PI;
        }
        if !(a > -PI && a < 0.0) {
            return Err(Error::Branch(format!(
                "arg(c*gamma) = {a} outside the open interval (-pi, 0)"
            )));
        }
        Ok(a)
    }
}

/// Complex wavenumber with `Im k ≠ 0`, so the fundamental solution decays
/// exponentially at infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Wavenumber {
    k: Complex64,
}

impl Wavenumber {
    pub fn new(k: Complex64) -> Result<Self> {
        if k.im == 0.0 {
            return Err(Error::Constraint(
                "wavenumber must have Im k != 0".into(),
            ));
        }
        Ok(Self { k })
    }

    pub fn value(&self) -> Complex64 {
        self.k
    }
}

/// `c^γ = |c|^γ e^{iγ arg c}` with `arg c` taken from the branch spec.
///
/// The principal argument of `c` must be congruent mod 2π to the branch's
/// `arg c`; a positive real `c` (argument 0, excluded from the branch
/// interval) is therefore rejected.
pub fn complex_power(c: Complex64, gamma: Complex64, spec: &BranchSpec) -> Result<Complex64> {
    if c.norm() == 0.0 {
        return Err(Error::Domain("complex_power: c = 0".into()));
    }
    let principal = c.arg();
    let mut diff = (principal - spec.arg_c) % TWO_PI;
    if diff > PI {
        diff -= TWO_PI;
    }
    if diff < -PI {
        diff += TWO_PI;
    }
    if diff.abs() > 1e-9 {
        return Err(Error::Branch(format!(
            "arg c = {principal} (principal) is not congruent to the branch arg {}",
            spec.arg_c
        )));
    }
    let log_c = Complex64::new(c.norm().ln(), spec.arg_c);
    Ok((gamma * log_c).exp())
}

/// Logarithmic fundamental solution kernel `(1/2π) ln|x−y|` of the
/// Laplacian.
pub fn log_kernel(x: [f64; 2], y: [f64; 2]) -> Result<f64> {
    let dx = x[0] - y[0];
    let dy = x[1] - y[1];
    let r = dx.hypot(dy);
    if r == 0.0 {
        return Err(Error::Singular("log_kernel: x == y".into()));
    }
    Ok(r.ln() / (2.0 * PI))
}

// ---------------------------------------------------------------------------
// Hankel functions
// ---------------------------------------------------------------------------

fn check_sector(z: Complex64) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(Error::Domain("Hankel function at z = 0".into()));
    }
    if z.im < 0.0 {
        return Err(Error::UnsupportedDomain(format!(
            "Hankel evaluation supports arg z in [0, pi]; got z = {z}"
        )));
    }
    Ok(())
}

/// `H₀⁽¹⁾(z)` for `arg z ∈ [0, π]`, `z ≠ 0`.
pub fn hankel_h0(z: Complex64) -> Result<Complex64> {
    Ok(hankel_h0_h1(z)?.0)
}

/// `d/dz H₀⁽¹⁾(z) = -H₁⁽¹⁾(z)`.
pub fn hankel_h0_radial_derivative(z: Complex64) -> Result<Complex64> {
    Ok(-hankel_h0_h1(z)?.1)
}

/// `H₁⁽¹⁾(z)` for `arg z ∈ [0, π]`, `z ≠ 0`.
pub fn hankel_h1(z: Complex64) -> Result<Complex64> {
    Ok(hankel_h0_h1(z)?.1)
}

/// Both `H₀⁽¹⁾(z)` and `H₁⁽¹⁾(z)` in one pass; kernels need the pair.
pub fn hankel_h0_h1(z: Complex64) -> Result<(Complex64, Complex64)> {
    check_sector(z)?;
    let az = z.norm();
    let arg = z.arg();
    if az <= 5.0 {
        return Ok((h0_series(z), h1_series(z)));
    }
    if (PI / 8.0..=7.0 * PI / 8.0).contains(&arg) && az <= 30.0 {
        // w = -iz lies in |arg w| <= 3π/8, where the Steed fraction is solid.
        let w = Complex64::new(z.im, -z.re);
        let (k0, k1) = k0_k1_steed(w)?;
        let h0 = Complex64::new(0.0, -2.0 / PI) * k0;
        let h1 = Complex64::new(-2.0 / PI, 0.0) * k1;
        return Ok((h0, h1));
    }
    if az <= 11.0 {
        return Ok((h0_series(z), h1_series(z)));
    }
    Ok(h0_h1_asymptotic(z))
}

/// Real-axis Bessel values `(J₀, Y₀, J₁, Y₁)` for `x > 0`, obtained from
/// the Hankel pair on the sector boundary.
pub fn bessel_j_y(x: f64) -> Result<(f64, f64, f64, f64)> {
    let (h0, h1) = hankel_h0_h1(Complex64::new(x, 0.0))?;
    Ok((h0.re, h0.im, h1.re, h1.im))
}

/// Ascending series for `H₀⁽¹⁾ = J₀ + iY₀` (complex argument).
pub(crate) fn h0_series(z: Complex64) -> Complex64 {
    let q = z * z * 0.25;
    let log_term = (z * 0.5).ln() + EULER_GAMMA;
    let mut j0 = Complex64::new(1.0, 0.0);
    let mut term = Complex64::new(1.0, 0.0);
    let mut s = Complex64::new(0.0, 0.0);
    let mut harmonic = 0.0;
    for m in 1..200 {
        term *= -q / ((m * m) as f64);
        j0 += term;
        harmonic += 1.0 / m as f64;
        s -= term * harmonic;
        if term.norm() * harmonic.max(1.0) < 1e-20 * j0.norm().max(1e-300) {
            break;
        }
    }
    let two_i_over_pi = Complex64::new(0.0, 2.0 / PI);
    j0 * (Complex64::new(1.0, 0.0) + two_i_over_pi * log_term) + two_i_over_pi * s
}

/// Ascending series for `H₁⁽¹⁾ = J₁ + iY₁` (complex argument).
pub(crate) fn h1_series(z: Complex64) -> Complex64 {
    let q = z * z * 0.25;
    // J1 = (z/2) Σ (-1)^k q^k / (k!(k+1)!)
    // Y1 = (2/π) ln(z/2) J1 - 2/(πz) - (z/2π) Σ (-1)^k [ψ(k+1)+ψ(k+2)] q^k/(k!(k+1)!)
    let mut t = Complex64::new(1.0, 0.0);
    let mut j1s = t;
    let mut psi1 = -EULER_GAMMA;
    let mut psi2 = 1.0 - EULER_GAMMA;
    let mut ssum = Complex64::new(psi1 + psi2, 0.0);
    for k in 1..200 {
        t *= -q / ((k * (k + 1)) as f64);
        j1s += t;
        psi1 += 1.0 / k as f64;
        psi2 += 1.0 / (k + 1) as f64;
        ssum += t * (psi1 + psi2);
        if t.norm() * 20.0 < 1e-20 * j1s.norm().max(1e-300) {
            break;
        }
    }
    let j1 = z * 0.5 * j1s;
    let y1 = (2.0 / PI) * (z * 0.5).ln() * j1 - 2.0 / (PI * z) - z / (2.0 * PI) * ssum;
    j1 + Complex64::new(0.0, 1.0) * y1
}

/// Large-argument asymptotic pair, truncated at the smallest term.
pub(crate) fn h0_h1_asymptotic(z: Complex64) -> (Complex64, Complex64) {
    let pref = (2.0 / (PI * z)).sqrt();
    let iz = Complex64::new(0.0, 1.0) / z;
    let tail = |nu: f64, phase: Complex64| -> Complex64 {
        let mu = 4.0 * nu * nu;
        let mut s = Complex64::new(1.0, 0.0);
        let mut ak = 1.0;
        let mut pw = Complex64::new(1.0, 0.0);
        let mut best = f64::INFINITY;
        for k in 1..60 {
            ak *= (mu - ((2 * k - 1) * (2 * k - 1)) as f64) / (8.0 * k as f64);
            pw *= iz;
            let term = pw * ak;
            let t = term.norm();
            if t > best {
                break;
            }
            s += term;
            best = t;
        }
        pref * phase * s
    };
    let e0 = (Complex64::new(0.0, 1.0) * (z - Complex64::new(PI / 4.0, 0.0))).exp();
    let e1 = (Complex64::new(0.0, 1.0) * (z - Complex64::new(3.0 * PI / 4.0, 0.0))).exp();
    (tail(0.0, e0), tail(1.0, e1))
}

/// Steed's continued fraction (CF2) for `K₀(w), K₁(w)`, `Re w > 0`.
///
/// This is the classical Temme/Thompson-Barnett evaluation; it converges
/// geometrically away from the imaginary axis, which is exactly where the
/// Hankel series route loses accuracy.
pub(crate) fn k0_k1_steed(w: Complex64) -> Result<(Complex64, Complex64)> {
    if w.re <= 0.0 {
        return Err(Error::UnsupportedDomain(format!(
            "Steed fraction requires Re w > 0; got w = {w}"
        )));
    }
    const MAX_IT: usize = 100_000;
    const EPS: f64 = 1e-17;
    let one = Complex64::new(1.0, 0.0);
    let a1 = Complex64::new(0.25, 0.0);
    let mut b = 2.0 * (one + w);
    let mut d = one / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = Complex64::new(0.0, 0.0);
    let mut q2 = one;
    let mut q = a1;
    let mut c = a1;
    let mut aa = -a1;
    let mut s = one + q * delh;
    let mut converged = false;
    for i in 2..MAX_IT {
        aa -= (2 * (i - 1)) as f64;
        c = -aa * c / (i as f64);
        let qnew = (q1 - b * q2) / aa;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = one / (b + aa * d);
        delh = (b * d - one) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if dels.norm() < EPS * s.norm() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::UnsupportedDomain(format!(
            "Steed fraction failed to converge at w = {w}"
        )));
    }
    h = a1 * h;
    let k0 = (PI / (2.0 * w)).sqrt() * (-w).exp() / s;
    let k1 = k0 * (w + 0.5 - h) / w;
    Ok((k0, k1))
}
