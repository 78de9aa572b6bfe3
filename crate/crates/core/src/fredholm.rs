//! Closed-form Fredholm and unique-solvability conditions for the wedge
//! problem, forbidden-angle enumeration and cross-validation against the
//! numeric symbol determinant.
//!
//! Two parameterizations coexist: the BVP level `(α, s, p)` inside the
//! strip `1/p < s < 1 + 1/p`, and the BIE level `(α, r, p)` with the
//! lifted order `r = s − 1 − 1/p`, `r ∈ ℝ`. Exceptional parameter sets
//! are measure zero; detection snaps to them within [`SNAP_TOL`], so exact
//! rational inputs land on the sets and floating-point noise does not.
//!
//! Clause-interaction semantics (the source conditions list clauses
//! without a connective): an exceptional clause *replaces* the generic
//! clause at its exceptional values; where several exceptional sets meet,
//! precedence is integer-shift (clause 2), then odd-quarter (clause 4),
//! then half-integer (clause 3). Angle families are enumerated over
//! exactly the integer ranges that intersect `(0, 2π)`.

use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

use crate::mellin::{
    ellipticity_infimum, EllipticityVerdict, SpaceParams, XiGrid, ELLIPTIC_TOL, MARGINAL_TOL,
};
use crate::{Error, Result};

/// Snap tolerance for exceptional-value detection on floating inputs.
pub const SNAP_TOL: f64 = 1e-12;

/// BVP-level parameters.
#[derive(Clone, Copy, Debug)]
pub struct BvpParams {
    pub alpha: f64,
    pub s: f64,
    pub p: f64,
}

impl BvpParams {
    pub fn new(alpha: f64, s: f64, p: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 2.0 * PI) {
            return Err(Error::Constraint(format!("alpha = {alpha} outside (0, 2*pi)")));
        }
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::Constraint(format!("p = {p} outside (1, inf)")));
        }
        let params = Self { alpha, s, p };
        params.check_admissible()?;
        Ok(params)
    }

    /// The standing strip constraint `1/p < s < 1 + 1/p`.
    pub fn check_admissible(&self) -> Result<()> {
        if !(self.s > 1.0 / self.p && self.s < 1.0 + 1.0 / self.p) {
            return Err(Error::Constraint(format!(
                "(s, p) violates the strip 1/p < s < 1 + 1/p: s = {}, 1/p = {}",
                self.s,
                1.0 / self.p
            )));
        }
        Ok(())
    }

    /// Lifted BIE order `r = s − 1 − 1/p`.
    pub fn lifted_order(&self) -> f64 {
        self.s - 1.0 - 1.0 / self.p
    }
}

/// Which clause decided a verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Clause {
    Generic,
    Clause1,
    Clause2,
    Clause3,
    Clause4,
    UniqueWindow,
}

/// Fredholm / uniqueness verdict with the clause that produced it and the
/// distance of the parameters to the nearest exceptional set.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct Verdict {
    pub fredholm: bool,
    pub unique: bool,
    pub triggered_clause: Clause,
    pub margin: f64,
}

fn snap_integer(x: f64) -> Option<i64> {
    let n = x.round();
    if (x - n).abs() < SNAP_TOL && n.abs() < 1e15 {
        Some(n as i64)
    } else {
        None
    }
}

fn dist_to_integers(x: f64) -> f64 {
    (x - x.round()).abs()
}

fn dist_to_angle_set(alpha: f64, set: &[f64]) -> f64 {
    set.iter().fold(f64::INFINITY, |m, &a| m.min((alpha - a).abs()))
}

/// Angles `(2k+1)π/(2n)` intersected with `(0, 2π)`, `n ≠ 0`; the `k`
/// range is derived from the interval bounds, not hard-coded.
fn odd_half_family(n: i64) -> Vec<f64> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let n_f = n as f64;
    // (2k+1)/(2n) ∈ (0, 2)  ⇔  k between the two bounds
    let (lo, hi) = if n > 0 { (0.0, 4.0 * n_f) } else { (4.0 * n_f, 0.0) };
    let k_lo = ((lo - 1.0) / 2.0).floor() as i64 - 1;
    let k_hi = ((hi - 1.0) / 2.0).ceil() as i64 + 1;
    for k in k_lo..=k_hi {
        let a = (2 * k + 1) as f64 / (2.0 * n_f) * PI;
        if a > 0.0 && a < 2.0 * PI {
            out.push(a);
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    out
}

/// The two angle families of the odd-quarter clause at order
/// `r = (2n+1)/4`: `α = 2πp(2k−1)/(4−2np−3p)` and
/// `α = 2π(2−np−2kp)/(2−2np−3p)`, intersected with `(0, 2π)`.
fn quarter_families_bie(n: i64, p: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let n_f = n as f64;
    let d1 = 4.0 - 2.0 * n_f * p - 3.0 * p;
    if d1.abs() > 1e-14 {
        // 2πp(2k−1)/d1 ∈ (0, 2π) ⇔ (2k−1) between 0 and d1/p
        let b = d1 / p;
        let (lo, hi) = if b > 0.0 { (0.0, b) } else { (b, 0.0) };
        let k_lo = ((lo + 1.0) / 2.0).floor() as i64 - 1;
        let k_hi = ((hi + 1.0) / 2.0).ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            let a = 2.0 * PI * p * (2 * k - 1) as f64 / d1;
            if a > 1e-14 && a < 2.0 * PI - 1e-14 {
                out.push(a);
            }
        }
    }
    let d2 = 2.0 - 2.0 * n_f * p - 3.0 * p;
    if d2.abs() > 1e-14 {
        // 2π(2−np−2kp)/d2 ∈ (0, 2π) ⇔ (2−np−2kp)/d2 ∈ (0, 1)
        // solve for k range from the two endpoint equations
        let num_at = |k: f64| 2.0 - n_f * p - 2.0 * k * p;
        let k_a = (2.0 - n_f * p) / (2.0 * p); // num = 0
        let k_b = (2.0 - n_f * p - d2) / (2.0 * p); // num = d2
        let (lo, hi) = (k_a.min(k_b), k_a.max(k_b));
        let k_lo = lo.floor() as i64 - 1;
        let k_hi = hi.ceil() as i64 + 1;
        for k in k_lo..=k_hi {
            let a = 2.0 * PI * num_at(k as f64) / d2;
            if a > 1e-14 && a < 2.0 * PI - 1e-14 {
                out.push(a);
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).unwrap());
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    out
}

/// BIE-side clause dispatch at `(α, r, p)`.
///
/// `u := 1/p − r`. Integer `u ≠ 0` triggers the integer-shift clause with
/// forbidden angles `(2k+1)π/(2u)`; odd-quarter `r` triggers the printed
/// two-family exclusion; half-integer `r` with non-integer `u` is
/// unconditionally Fredholm (the `p`-disjunct of its clause holds);
/// `u = 0` fails the generic clause with no exceptional rescue, so no
/// opening angle is Fredholm there.
pub fn bie_fredholm(alpha: f64, r: f64, p: f64) -> Result<Verdict> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Constraint(format!("p = {p} outside (1, inf)")));
    }
    if !(alpha > 0.0 && alpha < 2.0 * PI) {
        return Err(Error::Constraint(format!("alpha = {alpha} outside (0, 2*pi)")));
    }
    let u = 1.0 / p - r;
    let unique = bie_unique(r, p)?;
    // clause 2: u ∈ ℤ \ {0}
    if let Some(n) = snap_integer(u) {
        if n != 0 {
            let family = odd_half_family(n);
            let da = dist_to_angle_set(alpha, &family);
            let fredholm = da > SNAP_TOL;
            return Ok(Verdict {
                fredholm,
                unique: unique && fredholm,
                triggered_clause: Clause::Clause2,
                margin: if fredholm { da } else { 0.0 },
            });
        }
        // u = 0: r = 1/p is excluded by the generic clause and no
        // exceptional clause covers it
        return Ok(Verdict {
            fredholm: false,
            unique: false,
            triggered_clause: Clause::Clause1,
            margin: 0.0,
        });
    }
    // clause 4: r = (2n+1)/4
    if let Some(q) = snap_integer(4.0 * r) {
        if q.rem_euclid(2) == 1 {
            let n = (q - 1) / 2;
            let family = quarter_families_bie(n, p);
            let da = dist_to_angle_set(alpha, &family);
            let fredholm = da > SNAP_TOL;
            return Ok(Verdict {
                fredholm,
                unique: unique && fredholm,
                triggered_clause: Clause::Clause4,
                // on the quarter line the exceptional set needs the angle
                // as well, so the margin is the angular distance
                margin: if fredholm { da } else { 0.0 },
            });
        }
        // clause 3: r = n/2 with u non-integer: the p-condition of the
        // clause cannot be met, so the disjunction holds for every angle
        return Ok(Verdict {
            fredholm: true,
            unique,
            triggered_clause: Clause::Clause3,
            margin: exceptional_distance_bie(r, p),
        });
    }
    Ok(Verdict {
        fredholm: true,
        unique,
        triggered_clause: Clause::Generic,
        margin: exceptional_distance_bie(r, p),
    })
}

/// Distance of `(r, p)` to the lattice of parameter values at which
/// Fredholmness can fail: integer `u = 1/p − r` and odd-quarter `r`.
pub fn exceptional_distance_bie(r: f64, p: f64) -> f64 {
    let u = 1.0 / p - r;
    let q = 4.0 * r;
    // distance of 4r to the odd integers
    let odd_dist = {
        let f = (q - 1.0) / 2.0;
        (f - f.round()).abs() * 2.0 / 4.0
    };
    dist_to_integers(u).min(odd_dist)
}

/// Unique solvability window of the reduced system:
/// `−3/4 < r ≤ 1/p − 1` for `1 < p ≤ 2`, `1/p − 1 ≤ r < −1/4` for
/// `2 ≤ p < ∞`.
pub fn bie_unique(r: f64, p: f64) -> Result<bool> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Constraint(format!("p = {p} outside (1, inf)")));
    }
    let edge = 1.0 / p - 1.0;
    Ok((p <= 2.0 && r > -0.75 && r <= edge) || (p >= 2.0 && r >= edge && r < -0.25))
}

/// BVP-side clause dispatch at admissible `(α, s, p)`.
///
/// Inside the strip the decisive offset is `d := s − 1/p ∈ (0, 1)`:
/// `d = 1/2` is the half-integer clause (its angle family is indexed by
/// the integer value of `v = s − 2/p`, which is forced to 0 inside the
/// strip, so the family is empty and every angle passes); `d ∈ {1/4, 3/4}`
/// and the uncovered value `s = 2/p` fail the generic clause for every
/// angle.
pub fn bvp_fredholm(params: &BvpParams) -> Result<Verdict> {
    params.check_admissible()?;
    let BvpParams { alpha, s, p } = *params;
    let d = s - 1.0 / p;
    let unique = bvp_unique(params)?;
    // clause 3: s = 1/p + 1/2
    if (d - 0.5).abs() < SNAP_TOL {
        let v = s - 2.0 / p;
        if let Some(m) = snap_integer(v) {
            let family = odd_half_family(m);
            let da = dist_to_angle_set(alpha, &family);
            let fredholm = da > SNAP_TOL || family.is_empty();
            return Ok(Verdict {
                fredholm,
                unique: unique && fredholm,
                triggered_clause: Clause::Clause3,
                margin: if fredholm {
                    if family.is_empty() { exceptional_distance_bvp(s, p) } else { da }
                } else {
                    0.0
                },
            });
        }
        return Ok(Verdict {
            fredholm: true,
            unique,
            triggered_clause: Clause::Clause3,
            margin: exceptional_distance_bvp(s, p),
        });
    }
    // clause 1 quarter values s = 1/p + {1/4, 3/4}: no angle survives
    if (d - 0.25).abs() < SNAP_TOL || (d - 0.75).abs() < SNAP_TOL {
        return Ok(Verdict {
            fredholm: false,
            unique: false,
            triggered_clause: Clause::Clause1,
            margin: 0.0,
        });
    }
    // clause 2 value s = 2/p − 1 (vacuous inside the strip) and the
    // uncovered clause-1 value s = 2/p
    if (s - (2.0 / p - 1.0)).abs() < SNAP_TOL {
        let family = [PI / 2.0, 1.5 * PI];
        let da = dist_to_angle_set(alpha, &family);
        let fredholm = da > SNAP_TOL;
        return Ok(Verdict {
            fredholm,
            unique: unique && fredholm,
            triggered_clause: Clause::Clause2,
            margin: if fredholm { da } else { 0.0 },
        });
    }
    if (s - 2.0 / p).abs() < SNAP_TOL {
        return Ok(Verdict {
            fredholm: false,
            unique: false,
            triggered_clause: Clause::Clause1,
            margin: 0.0,
        });
    }
    Ok(Verdict {
        fredholm: true,
        unique,
        triggered_clause: Clause::Generic,
        margin: exceptional_distance_bvp(s, p),
    })
}

/// Distance of `(s, p)` to the BVP exceptional lattice
/// `{s = 1/p + n/4, n = 1, 2, 3} ∪ {s = 2/p + n, n = 0, −1}`.
pub fn exceptional_distance_bvp(s: f64, p: f64) -> f64 {
    let d = s - 1.0 / p;
    let mut m = f64::INFINITY;
    for target in [0.25, 0.5, 0.75] {
        m = m.min((d - target).abs());
    }
    m.min((s - 2.0 / p).abs()).min((s - 2.0 / p + 1.0).abs())
}

/// Unique solvability window of the BVP:
/// `1/p + 1/4 < s ≤ 2/p` for `1 < p ≤ 2`, `2/p ≤ s < 1/p + 3/4` for
/// `2 ≤ p < ∞`.
pub fn bvp_unique(params: &BvpParams) -> Result<bool> {
    params.check_admissible()?;
    let BvpParams { s, p, .. } = *params;
    Ok((p <= 2.0 && s > 1.0 / p + 0.25 && s <= 2.0 / p)
        || (p >= 2.0 && s >= 2.0 / p && s < 1.0 / p + 0.75))
}

/// Forbidden-angle enumeration result.
#[derive(Clone, Debug, Serialize)]
pub struct ForbiddenAngles {
    /// Isolated excluded angles with the clause that produces them.
    pub angles: Vec<(f64, Clause)>,
    /// Set when the generic clause fails outright: every opening angle is
    /// non-Fredholm, and the list above is meaningless.
    pub all_angles_non_fredholm: bool,
}

/// Forbidden angles at BVP level `(s, p)`.
pub fn forbidden_angles_bvp(s: f64, p: f64) -> Result<ForbiddenAngles> {
    let probe = BvpParams::new(1.0, s, p)?; // α value irrelevant for enumeration
    let d = s - 1.0 / p;
    let _ = probe;
    if (d - 0.5).abs() < SNAP_TOL {
        let v = s - 2.0 / p;
        let angles = match snap_integer(v) {
            Some(m) => odd_half_family(m).into_iter().map(|a| (a, Clause::Clause3)).collect(),
            None => Vec::new(),
        };
        return Ok(ForbiddenAngles { angles, all_angles_non_fredholm: false });
    }
    if (d - 0.25).abs() < SNAP_TOL
        || (d - 0.75).abs() < SNAP_TOL
        || (s - 2.0 / p).abs() < SNAP_TOL
    {
        return Ok(ForbiddenAngles { angles: Vec::new(), all_angles_non_fredholm: true });
    }
    if (s - (2.0 / p - 1.0)).abs() < SNAP_TOL {
        return Ok(ForbiddenAngles {
            angles: vec![(PI / 2.0, Clause::Clause2), (1.5 * PI, Clause::Clause2)],
            all_angles_non_fredholm: false,
        });
    }
    Ok(ForbiddenAngles { angles: Vec::new(), all_angles_non_fredholm: false })
}

/// Forbidden angles at BIE level `(r, p)`.
pub fn forbidden_angles_bie(r: f64, p: f64) -> Result<ForbiddenAngles> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::Constraint(format!("p = {p} outside (1, inf)")));
    }
    let u = 1.0 / p - r;
    if let Some(n) = snap_integer(u) {
        if n != 0 {
            return Ok(ForbiddenAngles {
                angles: odd_half_family(n).into_iter().map(|a| (a, Clause::Clause2)).collect(),
                all_angles_non_fredholm: false,
            });
        }
        return Ok(ForbiddenAngles { angles: Vec::new(), all_angles_non_fredholm: true });
    }
    if let Some(q) = snap_integer(4.0 * r) {
        if q.rem_euclid(2) == 1 {
            let n = (q - 1) / 2;
            return Ok(ForbiddenAngles {
                angles: quarter_families_bie(n, p)
                    .into_iter()
                    .map(|a| (a, Clause::Clause4))
                    .collect(),
                all_angles_non_fredholm: false,
            });
        }
    }
    Ok(ForbiddenAngles { angles: Vec::new(), all_angles_non_fredholm: false })
}

/// Which level the cross-validation runs at.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationMode {
    Bvp,
    Bie,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Agreement {
    Agree,
    Inconclusive,
    HardDisagreement,
}

/// Closed-form verdict vs numeric symbol-determinant verdict.
#[derive(Clone, Debug, Serialize)]
pub struct CrossValidation {
    pub closed_form_fredholm: bool,
    pub numeric_elliptic: bool,
    pub inf_abs_det: f64,
    pub argmin_xi: f64,
    pub margin: f64,
    pub clause: Clause,
    pub agreement: Agreement,
}

/// Compare the closed-form clause verdict with the numeric infimum of the
/// symbol determinant on `Γ₁`. Disagreements inside the marginal band
/// `[1e-8, 1e-6]` are inconclusive; hard disagreements are flagged.
pub fn cross_validate(
    alpha: f64,
    order: f64,
    p: f64,
    mode: ValidationMode,
    grid: &XiGrid,
) -> Result<CrossValidation> {
    let (verdict, r) = match mode {
        ValidationMode::Bvp => {
            let params = BvpParams::new(alpha, order, p)?;
            (bvp_fredholm(&params)?, params.lifted_order())
        }
        ValidationMode::Bie => (bie_fredholm(alpha, order, p)?, order),
    };
    let sym_params = SpaceParams::new(p, r)?;
    let rep = ellipticity_infimum(alpha, &sym_params, grid);
    let numeric_elliptic = rep.inf_abs_det > ELLIPTIC_TOL;
    let agreement = if verdict.fredholm == numeric_elliptic {
        Agreement::Agree
    } else if rep.inf_abs_det > MARGINAL_TOL && rep.inf_abs_det <= ELLIPTIC_TOL {
        Agreement::Inconclusive
    } else if rep.verdict == EllipticityVerdict::Marginal {
        Agreement::Inconclusive
    } else {
        Agreement::HardDisagreement
    };
    Ok(CrossValidation {
        closed_form_fredholm: verdict.fredholm,
        numeric_elliptic,
        inf_abs_det: rep.inf_abs_det,
        argmin_xi: rep.argmin_xi,
        margin: verdict.margin,
        clause: verdict.triggered_clause,
        agreement,
    })
}

/// The master ellipticity expression of the BVP conditions at `ξ = 0`:
/// `e^{4π(s−1/p)i} sin²π(s−2/p) + cos²((π−α)(s−2/p))`. Used as the direct
/// zero-search oracle in tests.
pub fn bvp_master_expression(alpha: f64, s: f64, p: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let v = s - 2.0 / p;
    let sin2 = Complex64::new((PI * v).sin().powi(2), 0.0);
    let cos2 = Complex64::new(((PI - alpha) * v).cos().powi(2), 0.0);
    (i * 4.0 * PI * (s - 1.0 / p)).exp() * sin2 + cos2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_setting_is_fredholm_and_unique_for_any_angle() {
        for alpha in [0.1, 1.0, PI / 2.0, 2.0, PI, 4.5, 6.0] {
            let params = BvpParams::new(alpha, 1.0, 2.0).unwrap();
            let v = bvp_fredholm(&params).unwrap();
            assert!(v.fredholm, "alpha = {alpha}");
            assert!(v.unique);
            assert_eq!(v.triggered_clause, Clause::Clause3);
        }
    }

    #[test]
    fn quarter_offset_fails_for_every_angle() {
        // s = 1/p + 1/4 at p = 2
        let params = BvpParams::new(1.0, 0.75, 2.0).unwrap();
        let v = bvp_fredholm(&params).unwrap();
        assert!(!v.fredholm);
        assert_eq!(v.triggered_clause, Clause::Clause1);
        assert_eq!(v.margin, 0.0);
    }

    #[test]
    fn bvp_master_expression_cross_check() {
        // verdicts agree with a direct zero test of the master expression
        // for random admissible samples (measure-zero sets never hit)
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..200 {
            let p = 1.05 + 6.0 * rng();
            let s = 1.0 / p + 1e-3 + (1.0 - 2e-3) * rng();
            let alpha = 0.05 + (2.0 * PI - 0.1) * rng();
            let params = BvpParams::new(alpha, s, p).unwrap();
            let v = bvp_fredholm(&params).unwrap();
            let master_nonzero = bvp_master_expression(alpha, s, p).norm() > 1e-10;
            assert_eq!(v.fredholm, master_nonzero, "s={s} p={p} alpha={alpha}");
        }
    }

    #[test]
    fn bvp_unique_window() {
        assert!(bvp_unique(&BvpParams::new(1.0, 1.0, 2.0).unwrap()).unwrap());
        // p = 3: 2/3 ≤ 0.8 < 1/3 + 3/4
        assert!(bvp_unique(&BvpParams::new(1.0, 0.8, 3.0).unwrap()).unwrap());
        // boundary: strict lower bound of the first line
        assert!(!bvp_unique(&BvpParams::new(1.0, 0.75, 2.0).unwrap()).unwrap());
    }

    #[test]
    fn bie_integer_shift_clause() {
        // p=2, r=−1/2 = 1/p − 1: forbidden exactly at π/2 and 3π/2
        let v = bie_fredholm(2.0 * PI / 3.0, -0.5, 2.0).unwrap();
        assert!(v.fredholm);
        assert_eq!(v.triggered_clause, Clause::Clause2);
        let v = bie_fredholm(PI / 2.0, -0.5, 2.0).unwrap();
        assert!(!v.fredholm);
        assert_eq!(v.margin, 0.0);
        let v = bie_fredholm(1.5 * PI, -0.5, 2.0).unwrap();
        assert!(!v.fredholm);
    }

    #[test]
    fn bie_generic_matches_numeric() {
        // p=2, r=0.3, α=1: generic clause; numeric determinant scan agrees
        let v = bie_fredholm(1.0, 0.3, 2.0).unwrap();
        assert!(v.fredholm);
        assert_eq!(v.triggered_clause, Clause::Generic);
        let cv = cross_validate(1.0, 0.3, 2.0, ValidationMode::Bie, &XiGrid::default()).unwrap();
        assert_eq!(cv.agreement, Agreement::Agree);
        assert!(cv.inf_abs_det > ELLIPTIC_TOL);
    }

    #[test]
    fn bie_quarter_clause() {
        // p=2, r=1/4: clause 4; its printed families exclude {π} here
        let fam = quarter_families_bie(0, 2.0);
        assert!(fam.iter().any(|&a| (a - PI).abs() < 1e-12), "{fam:?}");
        let v = bie_fredholm(1.0, 0.25, 2.0).unwrap();
        assert!(v.fredholm);
        assert_eq!(v.triggered_clause, Clause::Clause4);
        for &a in &fam {
            let v = bie_fredholm(a, 0.25, 2.0).unwrap();
            assert!(!v.fredholm);
        }
    }

    #[test]
    fn bie_unique_window() {
        assert!(bie_unique(-0.5, 2.0).unwrap());
        assert!(!bie_unique(0.0, 2.0).unwrap());
    }

    #[test]
    fn unique_windows_agree_under_the_lift() {
        // bvp_unique(α,s,p) == bie_unique(s−1−1/p, p) on random samples
        let mut state = 0xdeadbeefcafef00du64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let p = 1.05 + 6.0 * rng();
            let s = 1.0 / p + 1e-6 + (1.0 - 2e-6) * rng();
            let params = BvpParams::new(1.0, s, p).unwrap();
            let lhs = bvp_unique(&params).unwrap();
            let rhs = bie_unique(params.lifted_order(), p).unwrap();
            assert_eq!(lhs, rhs, "s={s} p={p}");
        }
    }

    #[test]
    fn fredholm_verdicts_agree_under_the_lift_generically() {
        let mut state = 0x0123456789abcdefu64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let p = 1.05 + 6.0 * rng();
            let s = 1.0 / p + 1e-6 + (1.0 - 2e-6) * rng();
            let alpha = 0.05 + (2.0 * PI - 0.1) * rng();
            let params = BvpParams::new(alpha, s, p).unwrap();
            let lhs = bvp_fredholm(&params).unwrap().fredholm;
            let rhs = bie_fredholm(alpha, params.lifted_order(), p).unwrap().fredholm;
            assert_eq!(lhs, rhs, "s={s} p={p} alpha={alpha}");
        }
    }

    #[test]
    fn unique_implies_fredholm() {
        let mut state = 0x5bd1e995u64;
        let mut rng = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..500 {
            let p = 1.05 + 6.0 * rng();
            let r = -2.0 + 4.0 * rng();
            let alpha = 0.05 + (2.0 * PI - 0.1) * rng();
            let v = bie_fredholm(alpha, r, p).unwrap();
            assert!(!v.unique || v.fredholm);
        }
    }

    #[test]
    fn forbidden_angles_examples() {
        // classical: empty list
        let f = forbidden_angles_bvp(1.0, 2.0).unwrap();
        assert!(f.angles.is_empty() && !f.all_angles_non_fredholm);
        // s = 1/p + 1/2 exactly: the admitted m-range inside the strip is
        // {0}, whose family is empty
        let f = forbidden_angles_bvp(1.0 / 3.0 + 0.5, 3.0).unwrap();
        assert!(f.angles.is_empty() && !f.all_angles_non_fredholm);
        // quarter offset: every angle fails, flagged separately
        let f = forbidden_angles_bvp(0.75, 2.0).unwrap();
        assert!(f.all_angles_non_fredholm);
        // BIE integer shift: exactly {π/2, 3π/2}
        let f = forbidden_angles_bie(-0.5, 2.0).unwrap();
        assert_eq!(f.angles.len(), 2);
        assert!((f.angles[0].0 - PI / 2.0).abs() < 1e-12);
        assert!((f.angles[1].0 - 1.5 * PI).abs() < 1e-12);
        // perturbation check: the listed angles flip the verdict
        for &(a, _) in &f.angles {
            assert!(!bie_fredholm(a, -0.5, 2.0).unwrap().fredholm);
            assert!(bie_fredholm(a + 1e-6, -0.5, 2.0).unwrap().fredholm);
            assert!(bie_fredholm(a - 1e-6, -0.5, 2.0).unwrap().fredholm);
        }
    }

    #[test]
    fn forbidden_families_symmetric_under_angle_reflection() {
        // α ↔ 2π − α maps the integer-shift family onto itself
        for n in [-3i64, -1, 1, 2, 5] {
            let fam = odd_half_family(n);
            for &a in &fam {
                let mirrored = 2.0 * PI - a;
                assert!(
                    fam.iter().any(|&b| (b - mirrored).abs() < 1e-10),
                    "n={n}, angle {a} unmatched"
                );
            }
        }
    }

    #[test]
    fn clause_boundaries_have_zero_margin() {
        let v = bie_fredholm(PI / 2.0, -0.5, 2.0).unwrap();
        assert_eq!(v.margin, 0.0);
        let v = bvp_fredholm(&BvpParams::new(1.0, 0.75, 2.0).unwrap()).unwrap();
        assert_eq!(v.margin, 0.0);
    }

    #[test]
    fn strip_violation_is_reported_with_the_inequality() {
        let err = BvpParams::new(1.0, 2.0, 2.0).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("1/p < s < 1 + 1/p"), "{msg}");
    }

    #[test]
    fn angle_family_enumeration_covers_the_interval() {
        // n = 1: {π/2, 3π/2}; n = 2: odd multiples of π/4
        assert_eq!(odd_half_family(1).len(), 2);
        let f2 = odd_half_family(2);
        assert_eq!(f2.len(), 4);
        for &a in &f2 {
            assert!((a / (PI / 4.0)).round() as i64 % 2 == 1);
        }
        // negative n gives the same set as positive
        assert_eq!(odd_half_family(-1).len(), 2);
    }
}
