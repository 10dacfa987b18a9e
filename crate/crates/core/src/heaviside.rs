//! Closed forms for the Heaviside pulse, long-time limits and the
//! Sobolev/Petrashen representation of the DD solution.
//!
//! With `b = t/rho + sqrt((t/rho)^2 - 1)` the diffracted wave reduces to
//! logarithms. For DD and NN
//!
//! ```text
//! u_d = (i / 2pi) sum_k s_k Ln U_k,
//! U_k = (b^q e^{ic_k} - b^{-q} e^{-ic_k}) / -(b^q e^{-ic_k} - b^{-q} e^{ic_k})
//! ```
//!
//! and for DN, integrating `csch` gives `Ln tanh` differences that assemble to
//!
//! ```text
//! u_d = (i / 2pi) sum_k (-s_k) Ln(-V_k),
//! V_k = (b^q e^{ic_k} + 1)(b^q e^{-ic_k} - 1) / ((b^q e^{ic_k} - 1)(b^q e^{-ic_k} + 1)).
//! ```
//!
//! All logarithms are principal. `Ln(-V_k)` starts at `Ln 1 = 0` on the front
//! and its argument keeps the sign of `sin c_k` for every `b > 1`, so no
//! branch crossing occurs.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryKind, Sector, WedgeConfig, DEFAULT_EPS_RAY};
use crate::kernels::KernelTermSet;
use crate::scalar::{imag, lit, ln, real, to_f64, Real};

/// `t/rho + sqrt((t/rho)^2 - 1)`.
pub fn b_of<T: Real>(t_over_rho: T) -> Result<T> {
    let x = t_over_rho;
    if !(x >= T::one()) {
        return Err(Error::DomainError(format!("b(t/rho) needs t/rho >= 1, got {}", to_f64(x))));
    }
    if x > lit(1e8) {
        let r = T::one() / x;
        return Ok(x * (T::one() + (T::one() - r * r).sqrt()));
    }
    Ok(x + ((x - T::one()) * (x + T::one())).sqrt())
}

/// `l(lambda) = ln(lambda + sqrt(lambda^2 - 1))` for `lambda >= 1`, zero below.
pub fn l_of<T: Real>(lambda: T) -> T {
    if lambda > T::one() {
        lambda.acosh()
    } else {
        T::zero()
    }
}

/// Heaviside-pulse diffracted wave in closed form.
pub fn heaviside_diffracted<T: Real>(rho: T, theta: T, t: T, cfg: &WedgeConfig<T>, bc: BoundaryKind) -> Result<Complex<T>> {
    cfg.check_admissible(theta, lit(DEFAULT_EPS_RAY))?;
    if !(rho > T::zero()) {
        return Err(Error::DomainError("heaviside_diffracted needs rho > 0".into()));
    }
    if t <= rho {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let bq = b_of(t / rho)?.powf(cfg.q);
    let set = KernelTermSet::new(cfg, bc);
    let one = real(T::one());
    let mut acc = Complex::new(T::zero(), T::zero());
    for (k, term) in set.terms.iter().enumerate() {
        let c = set.c(k, theta);
        let e = imag(c).exp();
        let ec = e.conj();
        let s = lit::<T>(f64::from(term.sign));
        match bc {
            BoundaryKind::DD | BoundaryKind::NN => {
                let u = (e * bq - ec / bq) / -(ec * bq - e / bq);
                acc = acc + ln(u) * s;
            }
            BoundaryKind::DN => {
                let a = e * bq;
                let b = ec * bq;
                check_dn_branch(a, b)?;
                let v = (a + one) * (b - one) / ((a - one) * (b + one));
                acc = acc - ln(-v) * s;
            }
        }
    }
    Ok(acc * imag(T::one() / T::TAU()))
}

/// `arg((b^q e^{ic}+1)/(b^q e^{ic}-1)) - arg((b^q e^{-ic}+1)/(b^q e^{-ic}-1)) ∈ (-pi, pi)`.
fn check_dn_branch<T: Real>(a: Complex<T>, b: Complex<T>) -> Result<()> {
    let one = real(T::one());
    let d = ((a + one) / (a - one)).arg() - ((b + one) / (b - one)).arg();
    if d.abs() < T::PI() {
        Ok(())
    } else {
        Err(Error::BranchViolation(format!("DN argument difference {} leaves (-pi, pi)", to_f64(d))))
    }
}

/// `I(c) = -c/pi + sgn(c)/2` for `0 < |c| < pi`.
pub fn i_of<T: Real>(c: T) -> Result<T> {
    if c == T::zero() || !(c.abs() < T::PI()) {
        return Err(Error::DomainError(format!("I(c) needs 0 < |c| < pi, got {}", to_f64(c))));
    }
    let half = lit::<T>(0.5);
    Ok(-c / T::PI() + if c > T::zero() { half } else { -half })
}

/// `lim_{t→∞} u_d` for the profile `F = C h`, as `C` times the Heaviside table.
pub fn longtime_limit<T: Real>(theta: T, cfg: &WedgeConfig<T>, bc: BoundaryKind, c: Complex<T>) -> Result<Complex<T>> {
    let sector = cfg.admissible_sector(theta, lit(DEFAULT_EPS_RAY))?;
    let two = lit::<T>(2.0);
    let nn = T::TAU() / cfg.big_phi;
    let middle = matches!(sector, Sector::ShadowedMiddle);
    let value = match bc {
        BoundaryKind::DD => {
            if middle {
                -T::one()
            } else {
                T::zero()
            }
        }
        BoundaryKind::NN => {
            if middle {
                nn - T::one()
            } else {
                nn - two
            }
        }
        BoundaryKind::DN => match sector {
            Sector::ReflectionSector1 => T::zero(),
            Sector::ShadowedMiddle => -T::one(),
            _ => -two,
        },
    };
    Ok(c * value)
}

/// Long-time limit of the total Heaviside field (the same in every sector).
pub fn total_longtime_limit<T: Real>(cfg: &WedgeConfig<T>, bc: BoundaryKind) -> T {
    match bc {
        BoundaryKind::NN => T::TAU() / cfg.big_phi,
        _ => T::zero(),
    }
}

/// Petrashen variables for the DD Heaviside problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SobolevVars<T> {
    pub alpha1: T,
    pub varphi0: T,
    pub varphi: T,
    /// `rho / t`.
    pub tau: T,
    /// `b^{-2q}` (zero for `tau = 0`, undefined past the front).
    pub p_tau: T,
}

impl<T: Real> SobolevVars<T> {
    pub fn new(varphi: T, tau: T, cfg: &WedgeConfig<T>) -> Result<Self> {
        if !(tau > T::zero() && tau < T::one()) {
            return Err(Error::DomainError(format!("tau must lie in (0, 1), got {}", to_f64(tau))));
        }
        let alpha1 = cfg.big_phi;
        if !(varphi > T::zero() && varphi < alpha1) {
            return Err(Error::DomainError(format!("varphi must lie in (0, alpha1), got {}", to_f64(varphi))));
        }
        let p_tau = b_of(T::one() / tau)?.powf(-lit::<T>(2.0) * cfg.q);
        Ok(SobolevVars { alpha1, varphi0: cfg.alpha - T::PI() + alpha1, varphi, tau, p_tau })
    }

    /// Polar angle `theta = varphi + 2pi - alpha1`.
    pub fn theta(&self) -> T {
        self.varphi + T::TAU() - self.alpha1
    }

    /// Images `(varphi1, varphi2)` of the critical rays.
    pub fn critical_angles(&self) -> (T, T) {
        let pi = T::PI();
        (pi - self.varphi0, lit::<T>(2.0) * self.alpha1 - pi - self.varphi0)
    }
}

/// The Sobolev solution `U(varphi, tau)` in Petrashen's form.
///
/// Each ratio is expanded into its four factors `1 - p e^{ix}`; with `p < 1`
/// every factor has positive real part, so the principal logs are continuous.
pub fn sobolev_u<T: Real>(varphi: T, tau: T, cfg: &WedgeConfig<T>) -> Result<Complex<T>> {
    let v = SobolevVars::new(varphi, tau, cfg)?;
    cfg.check_admissible(v.theta(), lit(DEFAULT_EPS_RAY))?;
    let pi = T::PI();
    let k = pi / v.alpha1;
    let p = v.p_tau;
    let f = |x: T| ln(real(T::one()) - imag(x).exp() * p);
    let (a, b) = (varphi - v.varphi0, varphi + v.varphi0);
    let first = f(-k * (a + pi)) + f(k * (a - pi)) - f(k * (a + pi)) - f(-k * (a - pi));
    let second = f(k * (b - pi)) + f(-k * (b + pi)) - f(-k * (b - pi)) - f(k * (b + pi));
    Ok((first - second) / imag(T::TAU()))
}

/// The total DD Heaviside field `u` from the closed form, in Petrashen's variables.
///
/// Returns `1 + u_d` between the critical images and `u_d` elsewhere; for
/// `tau >= 1` (before the front) the `u_d` component is zero.
pub fn sobolev_total_from_ours<T: Real>(varphi: T, tau: T, cfg: &WedgeConfig<T>) -> Result<Complex<T>> {
    let tau_in = if tau >= T::one() { lit(0.5) } else { tau };
    let v = SobolevVars::new(varphi, tau_in, cfg)?;
    let theta = v.theta();
    let ud = if tau >= T::one() {
        cfg.check_admissible(theta, lit(DEFAULT_EPS_RAY))?;
        Complex::new(T::zero(), T::zero())
    } else {
        heaviside_diffracted(T::one(), theta, T::one() / tau, cfg, BoundaryKind::DD)?
    };
    let (p1, p2) = v.critical_angles();
    Ok(if varphi > p1 && varphi < p2 { ud + T::one() } else { ud })
}
