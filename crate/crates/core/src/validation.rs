//! Independent checks: brute-force quadrature, finite-difference PDE
//! residuals and boundary-trace residuals along the wedge faces.

use std::path::Path;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryKind, WedgeConfig};
use crate::profiles::Profile;
use crate::quadrature::QuadratureSpec;
use crate::scalar::{from_usize, lit, to_f64, Real};
use crate::spectral::{s_in, s_s};
use crate::timedomain::total;

/// Composite trapezoid rule with `n` equally spaced nodes.
pub fn oracle_quadrature<T, F>(f: F, a: T, b: T, n: usize) -> Result<Complex<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    if n < 2 {
        return Err(Error::DomainError(format!("trapezoid oracle needs at least 2 nodes, got {n}")));
    }
    let h = (b - a) / from_usize::<T>(n - 1);
    let mut sum = Complex::new(T::zero(), T::zero());
    for j in 0..n {
        let x = if j == n - 1 { b } else { a + h * from_usize(j) };
        let v = f(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFiniteSample(to_f64(x)));
        }
        let w = if j == 0 || j == n - 1 { lit(0.5) } else { T::one() };
        sum = sum + v * w;
    }
    Ok(sum * h)
}

fn polar<T: Real>(x: T, y: T) -> (T, T) {
    let theta = y.atan2(x);
    (x.hypot(y), if theta < T::zero() { theta + T::TAU() } else { theta })
}

/// `|∂²_t u - Δu|` at the polar point `(rho, theta, t)` by second-order
/// central differences in Cartesian coordinates.
pub fn wave_residual<T, F>(field: F, point: (T, T, T), h: T) -> Result<T>
where
    T: Real,
    F: Fn(T, T, T) -> Result<Complex<T>>,
{
    let (rho, theta, t) = point;
    let (x, y) = (rho * theta.cos(), rho * theta.sin());
    let at = |x: T, y: T, t: T| {
        let (r, th) = polar(x, y);
        field(r, th, t)
    };
    let two = lit::<T>(2.0);
    let c = at(x, y, t)? * two;
    let utt = at(x, y, t + h)? + at(x, y, t - h)? - c;
    let uxx = at(x + h, y, t)? + at(x - h, y, t)? - c;
    let uyy = at(x, y + h, t)? + at(x, y - h, t)? - c;
    Ok(((utt - uxx - uyy) / (h * h)).norm())
}

/// `|(-Δ - ω²) S|` at the Cartesian point `y` by the five-point Laplacian.
pub fn helmholtz_residual<T, F>(s: F, y: [T; 2], omega: Complex<T>, h: T) -> Result<T>
where
    T: Real,
    F: Fn([T; 2]) -> Result<Complex<T>>,
{
    let centre = s(y)?;
    let four = lit::<T>(4.0);
    let lap = (s([y[0] + h, y[1]])? + s([y[0] - h, y[1]])? + s([y[0], y[1] + h])? + s([y[0], y[1] - h])? - centre * four)
        / (h * h);
    Ok((-lap - centre * omega * omega).norm())
}

/// Which field the boundary report inspects.
#[derive(Debug, Clone, PartialEq)]
pub enum BoundaryMode<T> {
    /// Total time-domain field for a (smooth) profile at time `t`.
    TimeDomain { profile: Profile<T>, t: T },
    /// Total stationary density `e^{iω n0·y} + S_s` (i.e. `F̂ = 1`).
    Stationary { omega: Complex<T> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceKind {
    Dirichlet,
    Neumann,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TracePoint<T> {
    pub rho: T,
    pub residual: T,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceReport<T> {
    pub kind: TraceKind,
    pub max_residual: T,
    pub points: Vec<TracePoint<T>>,
}

/// Trace residuals on face `Q1` (`theta = 2pi`) and `Q2` (`theta = phi`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport<T> {
    pub bc: BoundaryKind,
    pub face1: FaceReport<T>,
    pub face2: FaceReport<T>,
}

impl<T: Real + Serialize> BoundaryReport<T> {
    pub fn face1_residual(&self) -> T {
        self.face1.max_residual
    }

    pub fn face2_residual(&self) -> T {
        self.face2.max_residual
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n").map_err(|e| Error::Io(e.to_string()))
    }
}

/// Number of radial sample points on each face.
pub const REPORT_POINTS: usize = 50;
/// Angular step of the one-sided normal-derivative stencil.
pub const NORMAL_STEP: f64 = 1e-4;

/// Samples both faces on `REPORT_POINTS` radii in `[0.1, 5]`.
///
/// Dirichlet faces report `|u|`; Neumann faces report `|∂u/∂n|` from the
/// second-order one-sided stencil `(-3u_0 + 4u_1 - u_2) / (2 rho Δθ)`.
pub fn boundary_report<T: Real + Serialize>(
    cfg: &WedgeConfig<T>,
    bc: BoundaryKind,
    mode: &BoundaryMode<T>,
    quad: &QuadratureSpec<T>,
) -> Result<BoundaryReport<T>> {
    if let BoundaryMode::TimeDomain { profile, .. } = mode {
        if !profile.is_smooth() {
            return Err(Error::InvalidProfile("time-domain boundary report needs a smooth profile".into()));
        }
    }
    let field = |rho: T, theta: T| -> Result<Complex<T>> {
        match mode {
            BoundaryMode::TimeDomain { profile, t } => Ok(total(rho, theta, *t, profile, cfg, bc, quad)?.u_total),
            BoundaryMode::Stationary { omega } => Ok(s_in(rho, theta, *omega, cfg) + s_s(rho, theta, *omega, cfg, bc, quad)?),
        }
    };
    let d = lit::<T>(NORMAL_STEP);
    let face = |theta0: T, inward: T, dirichlet: bool| -> Result<FaceReport<T>> {
        let mut points = Vec::with_capacity(REPORT_POINTS);
        for j in 0..REPORT_POINTS {
            let rho = lit::<T>(0.1) + lit::<T>(4.9) * from_usize::<T>(j) / from_usize::<T>(REPORT_POINTS - 1);
            let residual = if dirichlet {
                field(rho, theta0)?.norm()
            } else {
                let u0 = field(rho, theta0)?;
                let u1 = field(rho, theta0 + inward * d)?;
                let u2 = field(rho, theta0 + inward * d * lit(2.0))?;
                ((u1 * lit::<T>(4.0) - u0 * lit::<T>(3.0) - u2) / (lit::<T>(2.0) * d * rho)).norm()
            };
            points.push(TracePoint { rho, residual });
        }
        let max_residual = points.iter().map(|p| p.residual).fold(T::zero(), T::max);
        let kind = if dirichlet { TraceKind::Dirichlet } else { TraceKind::Neumann };
        Ok(FaceReport { kind, max_residual, points })
    };
    Ok(BoundaryReport {
        bc,
        face1: face(T::TAU(), -T::one(), bc.face1_dirichlet())?,
        face2: face(cfg.phi, T::one(), bc.face2_dirichlet())?,
    })
}
