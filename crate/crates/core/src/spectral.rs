//! Stationary densities on the closed upper half-plane and limiting amplitudes.
//!
//! `S_d(omega) = (i/4Phi) ∫_R e^{i omega rho cosh beta} Z(beta + i theta) dbeta`.
//! On the real `omega` axis the exponential only oscillates, so the folded
//! integral over `[0, ∞)` is taken along `beta = s + i gamma tanh s` with
//! `gamma` of the sign of `Re omega`; there `|e^{i omega rho cosh beta}|`
//! decays like `exp(-|Re omega| rho sinh s sin gamma)`. The kernel poles sit on
//! `Re beta = 0`, so the deformation crosses none of them.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryKind, WedgeConfig};
use crate::heaviside::longtime_limit;
use crate::kernels::{decay_bound, KernelTermSet};
use crate::profiles::Profile;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::scalar::{imag, lit, Real};
use crate::timedomain::{diffracted, mirror, prefactor};

/// Tilt of the deformed contour.
pub const CONTOUR_TILT: f64 = 0.7;

/// Incident density `e^{i omega rho cos(theta - alpha)}` (for `F̂ = 1`).
pub fn s_in<T: Real>(rho: T, theta: T, omega: Complex<T>, cfg: &WedgeConfig<T>) -> Complex<T> {
    (imag(T::one()) * omega * cfg.incident_phase(rho, theta)).exp()
}

/// Reflected density: the mirror images `±e^{i omega rho cos(theta - theta_k)}`.
pub fn s_r<T: Real>(rho: T, theta: T, omega: Complex<T>, cfg: &WedgeConfig<T>, bc: BoundaryKind) -> Result<Complex<T>> {
    if theta > T::TAU() {
        return Err(Error::OutsideDomain { theta: crate::scalar::to_f64(theta) });
    }
    Ok(match mirror(theta, cfg, bc)? {
        Some((sign, th)) => (imag(T::one()) * omega * rho * (theta - th).cos()).exp() * sign,
        None => Complex::new(T::zero(), T::zero()),
    })
}

fn check_omega<T: Real>(omega: Complex<T>) -> Result<()> {
    if !(omega.im >= T::zero()) || !omega.re.is_finite() || !omega.im.is_finite() {
        return Err(Error::DomainError("stationary densities need Im omega >= 0".into()));
    }
    if omega.im == T::zero() && omega.re == T::zero() {
        return Err(Error::DomainError("omega = 0 is not admissible; use the long-time limit".into()));
    }
    Ok(())
}

/// Diffracted density `S_d`.
pub fn s_d<T: Real>(
    rho: T,
    theta: T,
    omega: Complex<T>,
    cfg: &WedgeConfig<T>,
    bc: BoundaryKind,
    quad: &QuadratureSpec<T>,
) -> Result<Complex<T>> {
    cfg.check_admissible(theta, quad.eps_ray)?;
    check_omega(omega)?;
    if !(rho > T::zero()) {
        return Err(Error::DomainError("S_d needs rho > 0".into()));
    }
    let bound = decay_bound(cfg, bc, theta)?;
    let set = KernelTermSet::new(cfg, bc);
    let gamma = if omega.re == T::zero() { T::zero() } else { lit::<T>(CONTOUR_TILT).copysign(omega.re) };
    let i = imag(T::one());
    let path = |s: T| Complex::new(s, gamma * s.tanh());
    let speed = |s: T| {
        let sech = T::one() / s.cosh();
        Complex::new(T::one(), gamma * sech * sech)
    };

    // |e^{i omega rho cosh beta}| = exp(-rho Im(omega cosh beta)) along the path.
    let damping = |s: T| (-(omega * path(s).cosh()).im * rho).exp();
    let target = quad.abs_tol / lit(10.0);
    let b_kernel = quad.truncation_for(lit::<T>(2.0) * bound.c, bound.rate);
    let step = lit::<T>(0.25);
    let mut upper = T::one();
    while upper < b_kernel {
        let tail = lit::<T>(2.0) * bound.c * (-bound.rate * upper).exp() * damping(upper) / bound.rate;
        if tail < target {
            break;
        }
        upper = upper + step;
    }
    let upper = upper.min(b_kernel);

    let mut breaks = Vec::new();
    for th in [cfg.theta1, cfg.theta2] {
        let w = (theta - th).abs();
        if w < lit(1e-2) {
            breaks.extend([lit::<T>(0.1) * w, w, lit::<T>(10.0) * w]);
        }
    }
    breaks.retain(|&b| b < upper);
    breaks.sort_by(|a, b| a.partial_cmp(b).expect("finite break points"));

    let f = |s: T| {
        let beta = path(s);
        let z = set.eval_raw(beta, theta) + set.eval_raw(-beta, theta);
        (i * omega * rho * beta.cosh()).exp() * z * speed(s)
    };
    let est = integrate(f, T::zero(), upper, &breaks, quad)?;
    Ok(est.value * prefactor(cfg))
}

/// Scattered density `S_s = S_r + S_d`.
pub fn s_s<T: Real>(
    rho: T,
    theta: T,
    omega: Complex<T>,
    cfg: &WedgeConfig<T>,
    bc: BoundaryKind,
    quad: &QuadratureSpec<T>,
) -> Result<Complex<T>> {
    Ok(s_r(rho, theta, omega, cfg, bc)? + s_d(rho, theta, omega, cfg, bc, quad)?)
}

/// Limiting amplitude `A⁰` of the diffracted wave for the switched harmonic `a0 e^{-i omega0 t}`.
pub fn limiting_amplitude<T: Real>(
    rho: T,
    theta: T,
    cfg: &WedgeConfig<T>,
    bc: BoundaryKind,
    a0: Complex<T>,
    omega0: T,
    quad: &QuadratureSpec<T>,
) -> Result<Complex<T>> {
    if omega0 == T::zero() {
        cfg.check_admissible(theta, quad.eps_ray)?;
        return longtime_limit(theta, cfg, bc, a0);
    }
    Ok(s_d(rho, theta, Complex::new(omega0, T::zero()), cfg, bc, quad)? * a0)
}

/// Running amplitude `A_d(t) = e^{i omega0 t} u_d(rho, theta, t)`.
pub fn amplitude<T: Real>(
    rho: T,
    theta: T,
    t: T,
    p: &Profile<T>,
    cfg: &WedgeConfig<T>,
    bc: BoundaryKind,
    quad: &QuadratureSpec<T>,
) -> Result<Complex<T>> {
    let phase = (imag(p.carrier_frequency() * t)).exp();
    Ok(diffracted(rho, theta, t, p, cfg, bc, quad)? * phase)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timedomain::diffracted_delta;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn reference() -> WedgeConfig<f64> {
        WedgeConfig::new(PI / 3.0, PI / 4.0).unwrap()
    }

    #[test]
    fn reflected_density() {
        let cfg = reference();
        let w = C::new(0.0, 1.0);
        assert_eq!(s_r(1.0, PI, w, &cfg, BoundaryKind::DD).unwrap(), C::new(0.0, 0.0));
        let v = s_r(1.0, 1.2, w, &cfg, BoundaryKind::DD).unwrap();
        assert!((v + C::new((-(1.2 - cfg.theta1).cos()).exp(), 0.0)).norm() < 1e-15);
        let w = C::new(1.3, 0.2);
        let nn = s_r(1.0, 6.0, w, &cfg, BoundaryKind::NN).unwrap();
        assert!((nn - (C::new(0.0, 1.0) * w * (6.0 - cfg.theta2).cos()).exp()).norm() < 1e-15);
    }

    // Independent route: the real-axis integral, which converges for Im omega > 0.
    fn real_axis(rho: f64, theta: f64, w: C, cfg: &WedgeConfig<f64>, bc: BoundaryKind) -> C {
        let set = KernelTermSet::new(cfg, bc);
        let q = QuadratureSpec::default();
        let f = |b: f64| {
            let z = set.eval(C::new(b, 0.0), theta).unwrap() + set.eval(C::new(-b, 0.0), theta).unwrap();
            (C::new(0.0, 1.0) * w * rho * b.cosh()).exp() * z
        };
        integrate(f, 0.0, 8.0, &[], &q).unwrap().value * C::new(0.0, 1.0 / (4.0 * cfg.big_phi))
    }

    #[test]
    fn contour_matches_real_axis() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        for bc in BoundaryKind::ALL {
            for (th, w) in [(PI, C::new(1.0, 1.0)), (2.0, C::new(-2.0, 0.5)), (6.0, C::new(0.3, 0.8))] {
                let a = s_d(1.0, th, w, &cfg, bc, &q).unwrap();
                let b = real_axis(1.0, th, w, &cfg, bc);
                assert!((a - b).norm() <= 1e-9 * b.norm(), "{bc} {th} {w}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn heavy_damping_bound() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        let set = KernelTermSet::new(&cfg, BoundaryKind::DD);
        let zint = integrate(
            |b: f64| C::new(set.eval(C::new(b, 0.0), PI).unwrap().norm(), 0.0),
            -40.0,
            40.0,
            &[],
            &q,
        )
        .unwrap()
        .value
        .re;
        let v = s_d(5.0, PI, C::new(0.0, 2.0), &cfg, BoundaryKind::DD, &q).unwrap();
        assert!(v.norm() <= (-10f64).exp() * zint / (4.0 * cfg.big_phi));
    }

    #[test]
    fn cauchy_riemann() {
        let cfg = reference();
        let q = QuadratureSpec { rel_tol: 1e-13, abs_tol: 1e-15, ..Default::default() };
        let f = |w: C| s_d(1.0, PI, w, &cfg, BoundaryKind::DD, &q).unwrap();
        let (w, h) = (C::new(1.0, 1.0), 1e-4);
        let dx = (f(w + h) - f(w - h)) / (2.0 * h);
        let dy = (f(w + C::new(0.0, h)) - f(w - C::new(0.0, h))) / (2.0 * h);
        // dS/dy = i dS/dx for an analytic function
        assert!((dy - C::new(0.0, 1.0) * dx).norm() < 1e-6);
    }

    #[test]
    fn dirichlet_face_trace() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        let w = C::new(1.0, 0.5);
        for rho in [0.3, 1.0, 3.0] {
            let s = s_s(rho, 2.0 * PI, w, &cfg, BoundaryKind::DD, &q).unwrap();
            let expect = -(C::new(0.0, 1.0) * w * rho * cfg.alpha.cos()).exp();
            assert!((s - expect).norm() < 1e-6, "{rho}: {s} vs {expect}");
        }
    }

    #[test]
    fn fourier_of_impulse_response() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        let w = C::new(1.0, 1.0);
        // t = rho + u^2 removes the wavefront singularity
        let f = |u: f64| {
            let t = 1.0 + u * u;
            (C::new(0.0, 1.0) * w * t).exp() * diffracted_delta(1.0, PI, t, &cfg, BoundaryKind::DD, 1e-6).unwrap() * (2.0 * u)
        };
        let lap = integrate(f, 0.0, 19f64.sqrt(), &[], &q).unwrap().value;
        let sd = s_d(1.0, PI, w, &cfg, BoundaryKind::DD, &q).unwrap();
        assert!((lap - sd).norm() <= 1e-4 * sd.norm());
    }

    #[test]
    fn limiting_amplitudes() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        let one = C::new(1.0, 0.0);
        assert_eq!(limiting_amplitude(1.0, PI, &cfg, BoundaryKind::DD, one, 0.0, &q).unwrap(), C::new(-1.0, 0.0));
        let a = limiting_amplitude(1.0, PI, &cfg, BoundaryKind::DD, C::new(0.5, 0.5), 2.0, &q).unwrap();
        let sd = s_d(1.0, PI, C::new(2.0, 0.0), &cfg, BoundaryKind::DD, &q).unwrap();
        assert!((a - sd * C::new(0.5, 0.5)).norm() < 1e-15);
        // real omega is the boundary value from the upper half-plane
        let near = s_d(1.0, PI, C::new(2.0, 1e-6), &cfg, BoundaryKind::DD, &q).unwrap();
        assert!((near - sd).norm() < 1e-4);
        assert!(s_d(1.0, PI, C::new(0.0, 0.0), &cfg, BoundaryKind::DD, &q).is_err());
        assert!(s_d(1.0, PI, C::new(1.0, -0.1), &cfg, BoundaryKind::DD, &q).is_err());
    }

    #[test]
    fn amplitude_without_carrier_is_ud() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        let a = amplitude(1.0, PI, 3.0, &Profile::Heaviside, &cfg, BoundaryKind::NN, &q).unwrap();
        let u = diffracted(1.0, PI, 3.0, &Profile::Heaviside, &cfg, BoundaryKind::NN, &q).unwrap();
        assert_eq!(a, u);
    }
}
