//! Explicit solutions on nonconvex plane sectors, extended constantly along
//! the crease.
//!
//! Coordinates: the crease is the x-axis, and the cross-section uses polar
//! coordinates `y = r cos(theta)`, `t = r sin(theta)` with `t` the z
//! component. The Dirichlet half-plane is `theta = 0`, the Neumann
//! half-plane `theta = alpha`, and
//! `b = r^beta sin(beta theta)` with `beta = pi / (2 alpha)`.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::par;
use crate::qmc::radical_inverse;
use crate::report::fmt_f64;
use crate::Vec3;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectorError {
    #[error("aperture {alpha} is outside [pi, 2pi)")]
    Aperture { alpha: f64 },
    #[error("point lies on the crease (r = 0), where the gradient is singular")]
    OnCrease,
    #[error("point at angle {theta} lies outside the sector [0, {alpha}]")]
    OutsideSector { theta: f64, alpha: f64 },
    #[error("stencil of radius {h} leaves the sector")]
    StencilOutside { h: f64 },
    #[error("truncation radius must lie in (0, 1], got {epsilon}")]
    Truncation { epsilon: f64 },
    #[error("crease distance must be positive, got {d}")]
    CreaseDistance { d: f64 },
    #[error("cone aperture must be positive, got {a}")]
    ConeAperture { a: f64 },
    #[error("no sample point fell inside the cone")]
    EmptyCone,
}

// Angles this close past the Neumann ray still count as on it.
const ANGLE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SectorSolution {
    alpha: f64,
    beta: f64,
}

impl SectorSolution {
    pub fn new(alpha: f64) -> Result<Self, SectorError> {
        if !(PI..TAU).contains(&alpha) {
            return Err(SectorError::Aperture { alpha });
        }
        Ok(Self {
            alpha,
            beta: PI / (2.0 * alpha),
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `(r, theta)` of a point, with `theta` in `[0, 2pi)`.
    pub fn polar(x: &Vec3) -> (f64, f64) {
        let r = x.y.hypot(x.z);
        let mut th = x.z.atan2(x.y);
        if th < 0.0 {
            th += TAU;
        }
        (r, th)
    }

    fn checked_polar(&self, x: &Vec3) -> Result<(f64, f64), SectorError> {
        let (r, th) = Self::polar(x);
        if r == 0.0 {
            return Err(SectorError::OnCrease);
        }
        if th > self.alpha + ANGLE_SLACK {
            return Err(SectorError::OutsideSector {
                theta: th,
                alpha: self.alpha,
            });
        }
        Ok((r, th.min(self.alpha)))
    }

    pub fn eval_polar(&self, r: f64, theta: f64) -> f64 {
        r.powf(self.beta) * (self.beta * theta).sin()
    }

    /// `d b / d theta`.
    pub fn angular_derivative(&self, r: f64, theta: f64) -> f64 {
        self.beta * r.powf(self.beta) * (self.beta * theta).cos()
    }

    pub fn eval_b(&self, x: &Vec3) -> Result<f64, SectorError> {
        let (r, th) = self.checked_polar(x)?;
        Ok(self.eval_polar(r, th))
    }

    pub fn eval_grad_b(&self, x: &Vec3) -> Result<Vec3, SectorError> {
        let (r, th) = self.checked_polar(x)?;
        let g = self.beta * r.powf(self.beta - 1.0);
        let (s, c) = (self.beta * th).sin_cos();
        let (st, ct) = th.sin_cos();
        let e_r = Vec3::new(0.0, ct, st);
        let e_th = Vec3::new(0.0, -st, ct);
        Ok((e_r * s + e_th * c) * g)
    }

    /// `|grad b| = beta r^(beta - 1)`.
    pub fn grad_norm(&self, r: f64) -> f64 {
        self.beta * r.powf(self.beta - 1.0)
    }

    /// Seven-point central-difference Laplacian of `b` at `x`.
    pub fn check_harmonic(&self, x: &Vec3, h: f64) -> Result<f64, SectorError> {
        for p in stencil(x, h) {
            let (r, th) = Self::polar(&p);
            if r == 0.0 || th > self.alpha {
                return Err(SectorError::StencilOutside { h });
            }
        }
        Ok(discrete_laplacian(|p| self.eval_b(p).expect("stencil checked"), x, h))
    }
}

fn stencil(x: &Vec3, h: f64) -> [Vec3; 7] {
    [
        *x,
        x + Vec3::x() * h,
        x - Vec3::x() * h,
        x + Vec3::y() * h,
        x - Vec3::y() * h,
        x + Vec3::z() * h,
        x - Vec3::z() * h,
    ]
}

/// Seven-point central-difference Laplacian of any function.
pub fn discrete_laplacian<F: Fn(&Vec3) -> f64>(f: F, x: &Vec3, h: f64) -> f64 {
    let s = stencil(x, h).map(|p| f(&p));
    (s[1..].iter().sum::<f64>() - 6.0 * s[0]) / (h * h)
}

/// Parses an angle: a plain number of radians or a rational multiple of pi
/// such as `1.5pi`, `3pi/2`, `3/2pi` or `pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let bad = || format!("cannot parse angle {text:?}");
    if !t.contains("pi") {
        return t.parse::<f64>().map_err(|_| bad());
    }
    if t.matches("pi").count() > 1 {
        return Err(bad());
    }
    let coeff = t.replacen("pi", "", 1).replace('*', "");
    let value = match coeff.split_once('/') {
        Some((n, d)) => {
            let n = if n.is_empty() {
                1.0
            } else {
                n.parse::<f64>().map_err(|_| bad())?
            };
            let d = d.parse::<f64>().map_err(|_| bad())?;
            if d == 0.0 {
                return Err(bad());
            }
            n / d
        }
        None if coeff.is_empty() => 1.0,
        None if coeff == "-" => -1.0,
        None => coeff.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(value * PI)
}

// ---------------------------------------------------------------------------
// Truncated energy

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TruncatedEnergy {
    pub epsilon: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    /// Error estimate of the adaptive quadrature.
    pub quadrature_error: f64,
}

/// `I(eps) = integral over [eps, 1] of |grad b|^2 dr` along the Dirichlet
/// ray, per unit crease length.
pub fn closed_form_energy(sol: &SectorSolution, epsilon: f64) -> f64 {
    let b = sol.beta;
    if sol.alpha == PI {
        0.25 * (1.0 / epsilon).ln()
    } else {
        b * b * (epsilon.powf(2.0 * b - 1.0) - 1.0) / (1.0 - 2.0 * b)
    }
}

/// Closed form together with an adaptive Simpson quadrature in `log r` of
/// `|grad b|^2` evaluated on the Dirichlet ray.
pub fn truncated_energy(sol: &SectorSolution, epsilon: f64) -> Result<TruncatedEnergy, SectorError> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(SectorError::Truncation { epsilon });
    }
    let f = |s: f64| {
        let r = s.exp();
        let g = sol.eval_grad_b(&Vec3::new(0.0, r, 0.0)).expect("on the Dirichlet ray");
        g.norm_squared() * r
    };
    let (quadrature, quadrature_error) = if epsilon == 1.0 {
        (0.0, 0.0)
    } else {
        adaptive_simpson(&f, epsilon.ln(), 0.0, 1e-13, 50)
    };
    Ok(TruncatedEnergy {
        epsilon,
        closed_form: closed_form_energy(sol, epsilon),
        quadrature,
        quadrature_error,
    })
}

/// Adaptive Simpson integration; returns the value and the accumulated
/// Richardson error estimate.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, depth: u32) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> (f64, f64) {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return (left + right + diff / 15.0, diff.abs() / 15.0);
    }
    let (l, le) = simpson_step(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1);
    let (r, re) = simpson_step(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
    (l + r, le + re)
}

/// Decades `1, 0.1, ..., 10^-k`.
pub fn decade_truncations(k: u32) -> Vec<f64> {
    (0..=k).map(|i| 10f64.powi(-(i as i32))).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupReport {
    pub alpha: f64,
    pub beta: f64,
    pub rows: Vec<TruncatedEnergy>,
    /// `2 beta - 1`.
    pub closed_form_exponent: f64,
    /// Slope of `log(I(eps_k+1) - I(eps_k))` against `log(eps_k)` for a
    /// geometric truncation sequence; `None` for `alpha = pi` or when the
    /// sequence is not geometric.
    pub fitted_exponent: Option<f64>,
    /// `alpha = pi`: energy grows like `log(1/eps)` rather than a power.
    pub log_law: bool,
    /// Slope of `I` against `log(1/eps)` when `log_law`.
    pub log_coefficient: Option<f64>,
}

impl BlowupReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("epsilon,I_closed_form,I_quadrature,stderr\n");
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{}",
                fmt_f64(r.epsilon),
                fmt_f64(r.closed_form),
                fmt_f64(r.quadrature),
                fmt_f64(r.quadrature_error)
            )
            .unwrap();
        }
        out
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

fn is_geometric(eps: &[f64]) -> bool {
    let q = eps[1] / eps[0];
    eps.windows(2).all(|w| ((w[1] / w[0]) / q - 1.0).abs() < 1e-9)
}

/// Energies at each truncation (sorted decreasing) and the fitted growth
/// law, using the quadrature values.
pub fn blowup_study(sol: &SectorSolution, truncations: &[f64]) -> Result<BlowupReport, SectorError> {
    let mut eps = truncations.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    eps.dedup();
    let rows = eps
        .iter()
        .map(|&e| truncated_energy(sol, e))
        .collect::<Result<Vec<_>, _>>()?;
    let log_law = sol.alpha == PI;
    let mut fitted_exponent = None;
    let mut log_coefficient = None;
    if rows.len() >= 3 {
        if log_law {
            let xs: Vec<f64> = rows.iter().map(|r| (1.0 / r.epsilon).ln()).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r.quadrature).collect();
            log_coefficient = Some(fit_slope(&xs, &ys));
        } else if is_geometric(&eps) {
            let xs: Vec<f64> = rows[..rows.len() - 1].iter().map(|r| r.epsilon.ln()).collect();
            let ys: Vec<f64> = rows
                .windows(2)
                .map(|w| (w[1].quadrature - w[0].quadrature).ln())
                .collect();
            fitted_exponent = Some(fit_slope(&xs, &ys));
        }
    }
    Ok(BlowupReport {
        alpha: sol.alpha,
        beta: sol.beta,
        rows,
        closed_form_exponent: 2.0 * sol.beta - 1.0,
        fitted_exponent,
        log_law,
        log_coefficient,
    })
}

// ---------------------------------------------------------------------------
// Nontangential maximal function

/// Approach cone `{X : |X - P| < (1 + a) dist(X, boundary)}` at the point
/// `P = (0, d, 0)` of the Dirichlet half-plane, cut off at `|X - P| <= truncation`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NtCone {
    pub d: f64,
    pub a: f64,
    pub truncation: f64,
}

impl NtCone {
    pub fn new(d: f64, a: f64, truncation: f64) -> Result<Self, SectorError> {
        if d.is_nan() || d <= 0.0 {
            return Err(SectorError::CreaseDistance { d });
        }
        if a.is_nan() || a <= 0.0 {
            return Err(SectorError::ConeAperture { a });
        }
        Ok(Self { d, a, truncation })
    }

    /// Half-angle about the vertical of the cone near `P`.
    pub fn half_angle(&self) -> f64 {
        (1.0 / (1.0 + self.a)).acos()
    }

    /// Whether the cross-section point `(y, t)` lies in the cone. The crease
    /// direction does not matter: moving along x only increases `|X - P|`.
    pub fn contains(&self, sol: &SectorSolution, y: f64, t: f64) -> bool {
        let q = Vec3::new(0.0, y, t);
        let (r, th) = SectorSolution::polar(&q);
        if r == 0.0 || th >= sol.alpha {
            return false;
        }
        let dp = (y - self.d).hypot(t);
        dp <= self.truncation && dp < (1.0 + self.a) * boundary_distance(sol.alpha, y, t)
    }

    /// Least crease distance over the cone, by a dense polar grid about `P`
    /// refined around the best cell.
    pub fn min_crease_distance(&self, sol: &SectorSolution) -> f64 {
        let search = |rho_lo: f64, rho_hi: f64, psi_lo: f64, psi_hi: f64| {
            let m = 400;
            let mut best = (f64::INFINITY, 0.0, 0.0);
            for i in 0..=m {
                let rho = rho_lo + (rho_hi - rho_lo) * i as f64 / m as f64;
                for j in 0..=m {
                    let psi = psi_lo + (psi_hi - psi_lo) * j as f64 / m as f64;
                    let (y, t) = (self.d + rho * psi.sin(), rho * psi.cos());
                    if self.contains(sol, y, t) {
                        let r = y.hypot(t);
                        if r < best.0 {
                            best = (r, rho, psi);
                        }
                    }
                }
            }
            best
        };
        let (mut r, mut rho, mut psi) = search(0.0, self.truncation, -PI, PI);
        let (mut drho, mut dpsi) = (self.truncation / 400.0, TAU / 400.0);
        for _ in 0..4 {
            let b = search((rho - drho).max(0.0), rho + drho, psi - dpsi, psi + dpsi);
            if b.0 < r {
                (r, rho, psi) = b;
            }
            drho /= 100.0;
            dpsi /= 100.0;
        }
        r.min(self.d)
    }
}

fn boundary_distance(alpha: f64, y: f64, t: f64) -> f64 {
    let ray = |phi: f64| {
        let (s, c) = phi.sin_cos();
        let along = y * c + t * s;
        if along >= 0.0 {
            (y * s - t * c).abs()
        } else {
            y.hypot(t)
        }
    };
    ray(0.0).min(ray(alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NtMaxEstimate {
    /// Largest `|grad b|` seen in the cone.
    pub sup: f64,
    /// Crease distance of the maximizing sample.
    pub r_min_sampled: f64,
    pub samples: usize,
    pub in_cone: usize,
}

/// Sup of `|grad b|` over `n` shifted Halton points spread over the disc
/// sector of half-angle [`NtCone::half_angle`] about the vertical at `P`.
/// The shift comes from `seed`. Points are kept only if they satisfy the
/// exact cone condition.
pub fn estimate_ntmax(sol: &SectorSolution, cone: &NtCone, n: usize, seed: u64) -> Result<NtMaxEstimate, SectorError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let shift: (f64, f64) = (rng.random(), rng.random());
    let psi_max = cone.half_angle();
    let found = par::map_range(n, |i| {
        let u = (radical_inverse(i as u64 + 1, 2) + shift.0).fract();
        let v = (radical_inverse(i as u64 + 1, 3) + shift.1).fract();
        let rho = cone.truncation * u.sqrt();
        let psi = psi_max * (2.0 * v - 1.0);
        let (y, t) = (cone.d + rho * psi.sin(), rho * psi.cos());
        cone.contains(sol, y, t).then(|| y.hypot(t))
    });
    let in_cone = found.iter().flatten().count();
    let r = found.into_iter().flatten().fold(f64::INFINITY, f64::min);
    if in_cone == 0 {
        return Err(SectorError::EmptyCone);
    }
    Ok(NtMaxEstimate {
        sup: sol.grad_norm(r),
        r_min_sampled: r,
        samples: n,
        in_cone,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(r: f64, th: f64) -> Vec3 {
        Vec3::new(0.3, r * th.cos(), r * th.sin())
    }

    #[test]
    fn aperture_range() {
        assert!(SectorSolution::new(PI).is_ok());
        assert!(SectorSolution::new(1.999 * PI).is_ok());
        assert!(SectorSolution::new(TAU).is_err());
        assert!(SectorSolution::new(0.9 * PI).is_err());
        assert!(SectorSolution::new(f64::NAN).is_err());
    }

    #[test]
    fn values_at_the_rays() {
        let s = SectorSolution::new(PI).unwrap();
        assert!((s.eval_b(&at(1.0, PI)).unwrap() - 1.0).abs() < 1e-15);
        for alpha in [PI, 1.3 * PI, 1.5 * PI, 1.9 * PI] {
            let s = SectorSolution::new(alpha).unwrap();
            for r in [1e-3, 0.5, 7.0] {
                assert_eq!(s.eval_b(&at(r, 0.0)).unwrap(), 0.0);
                let dth = s.angular_derivative(r, alpha);
                assert!(dth.abs() <= 1e-12 * s.beta() * r.powf(s.beta()));
            }
        }
    }

    #[test]
    fn grad_norm_depends_only_on_r() {
        let s = SectorSolution::new(1.5 * PI).unwrap();
        let expected = 0.5f64.powf(-2.0 / 3.0) / 3.0;
        assert!((expected - 0.52913).abs() < 1e-5);
        for th in [0.0, 0.4, 2.0, 4.5, 1.5 * PI] {
            let g = s.eval_grad_b(&at(0.5, th)).unwrap();
            assert!((g.norm() - expected).abs() < 1e-14);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let s = SectorSolution::new(1.25 * PI).unwrap();
        let x = at(0.8, 2.0);
        let g = s.eval_grad_b(&x).unwrap();
        let h = 1e-6;
        for k in 0..3 {
            let mut e = Vec3::zeros();
            e[k] = h;
            let fd = (s.eval_b(&(x + e)).unwrap() - s.eval_b(&(x - e)).unwrap()) / (2.0 * h);
            assert!((fd - g[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn crease_and_outside_are_errors() {
        let s = SectorSolution::new(1.5 * PI).unwrap();
        assert_eq!(s.eval_grad_b(&Vec3::new(1.0, 0.0, 0.0)), Err(SectorError::OnCrease));
        assert!(matches!(
            s.eval_b(&at(1.0, 1.75 * PI)),
            Err(SectorError::OutsideSector { .. })
        ));
    }

    #[test]
    fn harmonic_to_second_order() {
        let s = SectorSolution::new(1.5 * PI).unwrap();
        let x = Vec3::new(0.0, 0.0, 1.0);
        let l1 = s.check_harmonic(&x, 1e-3).unwrap().abs();
        assert!(l1 <= 1e-4);
        let y = at(0.7, 2.5);
        let a = s.check_harmonic(&y, 2e-2).unwrap().abs();
        let b = s.check_harmonic(&y, 1e-2).unwrap().abs();
        assert!((a / b - 4.0).abs() < 0.2, "ratio {}", a / b);
        assert!(discrete_laplacian(|p| p.x, &y, 1e-3).abs() < 1e-9);
    }

    #[test]
    fn stencil_crossing_the_boundary_is_refused() {
        let s = SectorSolution::new(PI).unwrap();
        assert!(matches!(
            s.check_harmonic(&at(1.0, 1e-4), 1e-2),
            Err(SectorError::StencilOutside { .. })
        ));
    }

    #[test]
    fn energy_spot_values() {
        let s = SectorSolution::new(1.5 * PI).unwrap();
        let e = truncated_energy(&s, 1e-6).unwrap();
        assert!((e.closed_form - 33.0).abs() < 1e-10);
        assert!((e.quadrature / e.closed_form - 1.0).abs() < 1e-6);
        let p = SectorSolution::new(PI).unwrap();
        let e = truncated_energy(&p, (-4.0f64).exp()).unwrap();
        assert!((e.closed_form - 1.0).abs() < 1e-14);
        assert!((e.quadrature - 1.0).abs() < 1e-8);
        assert_eq!(truncated_energy(&s, 1.0).unwrap().closed_form, 0.0);
        assert!(truncated_energy(&s, 0.0).is_err());
    }

    #[test]
    fn blowup_exponents() {
        for k in [1.1, 1.25, 1.5, 1.75] {
            let s = SectorSolution::new(k * PI).unwrap();
            let r = blowup_study(&s, &decade_truncations(6)).unwrap();
            let fit = r.fitted_exponent.unwrap();
            assert!((fit / r.closed_form_exponent - 1.0).abs() < 0.01);
            for w in r.rows.windows(2) {
                assert!(w[1].closed_form > w[0].closed_form);
            }
        }
        let r = blowup_study(&SectorSolution::new(PI).unwrap(), &decade_truncations(6)).unwrap();
        assert!(r.log_law);
        assert!((r.log_coefficient.unwrap() - 0.25).abs() < 0.0025);
    }

    #[test]
    fn csv_header() {
        let r = blowup_study(&SectorSolution::new(1.5 * PI).unwrap(), &[1.0, 0.1]).unwrap();
        let csv = r.to_csv();
        assert!(csv.starts_with("epsilon,I_closed_form,I_quadrature,stderr\n"));
        assert_eq!(csv.lines().count(), 3);
        assert!(r.fitted_exponent.is_none());
    }

    #[test]
    fn angle_literals() {
        assert_eq!(parse_angle("1.5pi").unwrap(), 1.5 * PI);
        assert_eq!(parse_angle("3pi/2").unwrap(), 1.5 * PI);
        assert_eq!(parse_angle("3/2pi").unwrap(), 1.5 * PI);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("2").unwrap(), 2.0);
        assert!(parse_angle("pipi").is_err());
        assert!(parse_angle("1/0pi").is_err());
        assert!(parse_angle("x").is_err());
    }

    #[test]
    fn cone_minimum_distance() {
        let s = SectorSolution::new(1.5 * PI).unwrap();
        for a in [0.5, 1.0, 2.0] {
            let c = NtCone::new(1.0, a, 2.0).unwrap();
            let r = c.min_crease_distance(&s);
            assert!((r - 1.0 / (1.0 + a)).abs() < 1e-6, "{a}: {r}");
        }
    }

    #[test]
    fn ntmax_matches_grid_minimum() {
        let s = SectorSolution::new(1.5 * PI).unwrap();
        let c = NtCone::new(1.0, 1.0, 2.0).unwrap();
        let est = estimate_ntmax(&s, &c, 100_000, 9).unwrap();
        let exact = s.grad_norm(c.min_crease_distance(&s));
        assert!((est.sup / exact - 1.0).abs() < 0.02);
        assert!(est.sup <= exact * (1.0 + 1e-12));
    }

    #[test]
    fn ntmax_scaling() {
        let s = SectorSolution::new(1.25 * PI).unwrap();
        let d = 0.8;
        let big = estimate_ntmax(&s, &NtCone::new(d, 1.0, d).unwrap(), 100_000, 4).unwrap();
        let small = estimate_ntmax(&s, &NtCone::new(d / 2.0, 1.0, d / 2.0).unwrap(), 100_000, 4).unwrap();
        let ratio = small.sup / big.sup;
        assert!((ratio / 2f64.powf(1.0 - s.beta()) - 1.0).abs() < 0.02);
    }

    #[test]
    fn thin_cone_tends_to_vertical_ray() {
        let s = SectorSolution::new(1.5 * PI).unwrap();
        let c = NtCone::new(0.5, 1e-8, 1.0).unwrap();
        let est = estimate_ntmax(&s, &c, 10_000, 1).unwrap();
        assert!((est.sup / s.grad_norm(0.5) - 1.0).abs() < 1e-3);
        assert!(NtCone::new(0.0, 1.0, 1.0).is_err());
    }
}
