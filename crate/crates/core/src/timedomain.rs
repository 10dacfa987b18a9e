//! Time-domain fields: reflected images, the Sommerfeld–Malyuzhinets
//! diffracted wave, impulse responses and critical-ray jumps.
//!
//! The diffracted wave is
//!
//! ```text
//! u_d(rho, theta, t) = (i / 4 Phi) ∫_{-l}^{l} Z(beta + i theta) F(t - rho cosh beta) dbeta,   l = acosh(t / rho)
//! ```
//!
//! evaluated on `[0, l]` with the folded kernel `Z(beta + i theta) + Z(-beta + i theta)`,
//! which turns the near-pole Cauchy-type behaviour close to a critical ray
//! into an integrable Lorentzian bump of width `|theta - theta_k|`.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryKind, Sector, WedgeConfig};
use crate::heaviside::l_of;
use crate::kernels::KernelTermSet;
use crate::profiles::{incident_polar, FieldSample, Profile};
use crate::quadrature::{integrate, QuadratureSpec};
use crate::scalar::{imag, lit, real, to_f64, Real};

/// A signed Dirac impulse `weight · δ(t - arrival)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Impulse<T> {
    pub arrival: T,
    pub weight: i8,
}

/// Mirror image present at `theta`: `(sign, theta_k)`, or `None` in the middle sector.
///
/// Exactly on a critical ray the half-weight (mean of the one-sided limits) is used.
pub(crate) fn mirror<T: Real>(theta: T, cfg: &WedgeConfig<T>, bc: BoundaryKind) -> Result<Option<(T, T)>> {
    let (s1, s2) = bc.reflection_signs();
    let (s1, s2) = (lit::<T>(f64::from(s1)), lit::<T>(f64::from(s2)));
    let half = lit::<T>(0.5);
    Ok(match cfg.classify(theta, T::zero()) {
        Sector::ReflectionSector1 | Sector::Face(2) => Some((s1, cfg.theta1)),
        Sector::ReflectionSector2 | Sector::Face(_) => Some((s2, cfg.theta2)),
        Sector::ShadowedMiddle => None,
        Sector::CriticalRay(1) => Some((s1 * half, cfg.theta1)),
        Sector::CriticalRay(_) => Some((s2 * half, cfg.theta2)),
        Sector::InsideWedge => return Err(Error::OutsideDomain { theta: to_f64(theta) }),
    })
}

/// Reflected wave `u_r`.
pub fn reflected<T: Real>(rho: T, theta: T, t: T, p: &Profile<T>, cfg: &WedgeConfig<T>, bc: BoundaryKind) -> Result<Complex<T>> {
    p.require_pointwise()?;
    if theta > T::TAU() {
        return Err(Error::OutsideDomain { theta: to_f64(theta) });
    }
    Ok(match mirror(theta, cfg, bc)? {
        Some((sign, th)) => p.value_unchecked(t - rho * (theta - th).cos()) * sign,
        None => Complex::new(T::zero(), T::zero()),
    })
}

/// Reflected part of the impulse response.
pub fn reflected_delta<T: Real>(rho: T, theta: T, cfg: &WedgeConfig<T>, bc: BoundaryKind, eps_ray: T) -> Result<Impulse<T>> {
    let sector = cfg.admissible_sector(theta, eps_ray)?;
    let (s1, s2) = bc.reflection_signs();
    Ok(match sector {
        Sector::ReflectionSector1 => Impulse { arrival: rho * (theta - cfg.theta1).cos(), weight: s1 },
        Sector::ReflectionSector2 => Impulse { arrival: rho * (theta - cfg.theta2).cos(), weight: s2 },
        _ => Impulse { arrival: rho * (theta - cfg.alpha).cos(), weight: 0 },
    })
}

/// Interior break points for the folded integral on `[0, l]`.
fn breakpoints<T: Real>(theta: T, t: T, rho: T, l: T, p: &Profile<T>, cfg: &WedgeConfig<T>) -> Vec<T> {
    let mut out = Vec::new();
    for th in [cfg.theta1, cfg.theta2] {
        // the kernel bump near beta = 0 has width |c_k| / q = |theta - theta_k|
        let w = (theta - th).abs();
        if w < lit(1e-2) {
            out.extend([lit::<T>(0.1) * w, w, lit::<T>(10.0) * w]);
        }
    }
    let mut kink = |s: T| {
        let lam = (t - s) / rho;
        if lam > T::one() {
            out.push(lam.acosh());
        }
    };
    match p {
        Profile::SmoothRamp(r) | Profile::HarmonicSwitched { ramp: Some(r), .. } => kink(r.s0),
        Profile::Tabulated(tab) => tab.times().iter().copied().for_each(&mut kink),
        _ => {}
    }
    out.retain(|&b| b > T::zero() && b < l);
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite break points"));
    out
}

/// Diffracted wave `u_d` by adaptive quadrature of the Sommerfeld–Malyuzhinets integral.
pub fn diffracted<T: Real>(
    rho: T,
    theta: T,
    t: T,
    p: &Profile<T>,
    cfg: &WedgeConfig<T>,
    bc: BoundaryKind,
    quad: &QuadratureSpec<T>,
) -> Result<Complex<T>> {
    p.require_pointwise()?;
    cfg.check_admissible(theta, quad.eps_ray)?;
    if !(rho > T::zero()) {
        return Err(Error::DomainError("diffracted needs rho > 0".into()));
    }
    if t <= rho {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let l = l_of(t / rho);
    let set = KernelTermSet::new(cfg, bc);
    let f = |beta: T| set.folded_raw(real(beta), theta) * p.value_unchecked(t - rho * beta.cosh());
    let est = integrate(f, T::zero(), l, &breakpoints(theta, t, rho, l, p, cfg), quad)?;
    Ok(est.value * prefactor(cfg))
}

/// `i / (4 Phi)`.
pub(crate) fn prefactor<T: Real>(cfg: &WedgeConfig<T>) -> Complex<T> {
    imag(T::one() / (lit::<T>(4.0) * cfg.big_phi))
}

/// Diffracted part of the impulse response,
/// `(i/4Phi) (Z(l + i theta) + Z(-l + i theta)) / sqrt(t^2 - rho^2)` behind the front.
pub fn diffracted_delta<T: Real>(rho: T, theta: T, t: T, cfg: &WedgeConfig<T>, bc: BoundaryKind, eps_ray: T) -> Result<Complex<T>> {
    cfg.check_admissible(theta, eps_ray)?;
    if !(rho > T::zero()) {
        return Err(Error::DomainError("diffracted_delta needs rho > 0".into()));
    }
    let gap = t - rho;
    if gap.abs() < lit::<T>(1e-12) * rho {
        return Err(Error::WavefrontSingularity(to_f64(gap)));
    }
    if gap < T::zero() {
        return Ok(Complex::new(T::zero(), T::zero()));
    }
    let set = KernelTermSet::new(cfg, bc);
    let l = real(l_of(t / rho));
    let folded = set.eval(l, theta)? + set.eval(-l, theta)?;
    Ok(folded * prefactor(cfg) / (gap * (t + rho)).sqrt())
}

/// Incident, reflected and diffracted components at one space-time point.
pub fn total<T: Real>(
    rho: T,
    theta: T,
    t: T,
    p: &Profile<T>,
    cfg: &WedgeConfig<T>,
    bc: BoundaryKind,
    quad: &QuadratureSpec<T>,
) -> Result<FieldSample<T>> {
    let u_in = incident_polar(rho, theta, t, p, cfg)?;
    let u_r = reflected(rho, theta, t, p, cfg, bc)?;
    let u_d = diffracted(rho, theta, t, p, cfg, bc, quad)?;
    Ok(FieldSample::new(rho, theta, t, u_in, u_r, u_d))
}

/// Impulse response at one point: the singular parts stay symbolic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaField<T> {
    pub rho: T,
    pub theta: T,
    pub t: T,
    pub incident: Impulse<T>,
    pub reflected: Impulse<T>,
    pub diffracted: Complex<T>,
}

pub fn total_delta<T: Real>(rho: T, theta: T, t: T, cfg: &WedgeConfig<T>, bc: BoundaryKind, eps_ray: T) -> Result<DeltaField<T>> {
    Ok(DeltaField {
        rho,
        theta,
        t,
        incident: Impulse { arrival: cfg.incident_phase(rho, theta), weight: 1 },
        reflected: reflected_delta(rho, theta, cfg, bc, eps_ray)?,
        diffracted: diffracted_delta(rho, theta, t, cfg, bc, eps_ray)?,
    })
}

/// Offset from the ray used by [`jump`]; the extrapolation also uses half of it.
pub const JUMP_EPS: f64 = 1e-3;

/// `u_d(theta_k + 0) - u_d(theta_k - 0)`, extrapolated from offsets `ε` and `ε/2`.
pub fn jump<T: Real>(
    rho: T,
    t: T,
    k: u8,
    p: &Profile<T>,
    cfg: &WedgeConfig<T>,
    bc: BoundaryKind,
    quad: &QuadratureSpec<T>,
) -> Result<Complex<T>> {
    if !p.is_smooth() {
        return Err(Error::InvalidProfile("jump extrapolation needs a smooth profile".into()));
    }
    if !(k == 1 || k == 2) {
        return Err(Error::DomainError(format!("critical ray index must be 1 or 2, got {k}")));
    }
    let eps = lit::<T>(JUMP_EPS);
    let inner = QuadratureSpec { eps_ray: quad.eps_ray.min(eps / lit(4.0)), ..*quad };
    let th = cfg.theta_k(k);
    let across = |e: T| -> Result<Complex<T>> {
        Ok(diffracted(rho, th + e, t, p, cfg, bc, &inner)? - diffracted(rho, th - e, t, p, cfg, bc, &inner)?)
    };
    let (coarse, fine) = (across(eps)?, across(eps / lit(2.0))?);
    Ok(fine * lit::<T>(2.0) - coarse)
}

/// Sign `j_k` in `[u_d]_k = j_k F(t - rho)`: the kernel sign `s_k` of the term
/// whose pole crosses the real axis on ray `k`. It compensates the switch of
/// the mirror image, which is what keeps the total field continuous.
pub fn jump_law(k: u8, bc: BoundaryKind) -> i8 {
    let (s1, s2) = match bc {
        BoundaryKind::DD => (-1, 1),
        BoundaryKind::NN => (1, -1),
        BoundaryKind::DN => (-1, -1),
    };
    if k == 1 {
        s1
    } else {
        s2
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heaviside::heaviside_diffracted;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn reference() -> WedgeConfig<f64> {
        WedgeConfig::new(PI / 3.0, PI / 4.0).unwrap()
    }

    #[test]
    fn reflected_examples() {
        let cfg = reference();
        let h = Profile::Heaviside;
        assert_eq!(reflected(1.0, 1.2, 2.0, &h, &cfg, BoundaryKind::DD).unwrap(), C::new(-1.0, 0.0));
        for bc in BoundaryKind::ALL {
            for t in [-1.0, 0.5, 3.0] {
                assert_eq!(reflected(1.0, PI, t, &h, &cfg, bc).unwrap(), C::new(0.0, 0.0));
            }
        }
        assert_eq!(reflected(1.0, 6.0, 2.0, &h, &cfg, BoundaryKind::NN).unwrap(), C::new(1.0, 0.0));
        assert_eq!(reflected(1.0, 1.2, 2.0, &h, &cfg, BoundaryKind::DN).unwrap(), C::new(-1.0, 0.0));
        assert_eq!(reflected(1.0, 6.0, 2.0, &h, &cfg, BoundaryKind::DN).unwrap(), C::new(1.0, 0.0));
        assert!(matches!(reflected(1.0, 0.5, 2.0, &h, &cfg, BoundaryKind::DD), Err(Error::OutsideDomain { .. })));
        assert!(matches!(reflected(1.0, 2.0, 2.0, &Profile::Delta, &cfg, BoundaryKind::DD), Err(Error::DeltaNotPointwise)));
    }

    #[test]
    fn reflected_impulses() {
        let cfg = reference();
        let dd = reflected_delta(1.0, 1.2, &cfg, BoundaryKind::DD, 1e-6).unwrap();
        assert!((dd.arrival - (1.2 - cfg.theta1).cos()).abs() < 1e-15);
        assert_eq!(dd.weight, -1);
        assert_eq!(reflected_delta(1.0, 1.2, &cfg, BoundaryKind::DN, 1e-6).unwrap().weight, -1);
        assert_eq!(reflected_delta(1.0, 6.0, &cfg, BoundaryKind::DN, 1e-6).unwrap().weight, 1);
        assert_eq!(reflected_delta(1.0, PI, &cfg, BoundaryKind::NN, 1e-6).unwrap().weight, 0);
        assert!(reflected_delta(1.0, cfg.theta2, &cfg, BoundaryKind::NN, 1e-6).is_err());
    }

    #[test]
    fn diffracted_basics() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        for bc in BoundaryKind::ALL {
            assert_eq!(diffracted(1.0, PI, 0.9, &Profile::Heaviside, &cfg, bc, &q).unwrap(), C::new(0.0, 0.0));
            let quad = diffracted(1.0, PI, 2.0, &Profile::Heaviside, &cfg, bc, &q).unwrap();
            let closed = heaviside_diffracted(1.0, PI, 2.0, &cfg, bc).unwrap();
            assert!((quad - closed).norm() <= 1e-8 * closed.norm(), "{bc}: {quad} vs {closed}");
        }
        assert!(matches!(
            diffracted(1.0, PI, 2.0, &Profile::Delta, &cfg, BoundaryKind::DD, &q),
            Err(Error::DeltaNotPointwise)
        ));
        assert!(matches!(
            diffracted(1.0, cfg.theta1, 2.0, &Profile::Heaviside, &cfg, BoundaryKind::DD, &q),
            Err(Error::CriticalRay { k: 1, .. })
        ));
    }

    #[test]
    fn close_to_a_ray() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        for bc in BoundaryKind::ALL {
            for d in [1e-3, -1e-4, 1e-5] {
                let th = cfg.theta2 + d;
                let quad = diffracted(1.0, th, 2.0, &Profile::Heaviside, &cfg, bc, &q).unwrap();
                let closed = heaviside_diffracted(1.0, th, 2.0, &cfg, bc).unwrap();
                assert!((quad - closed).norm() <= 1e-8 * closed.norm().max(1e-2), "{bc} {d}: {quad} vs {closed}");
            }
        }
    }

    #[test]
    fn delta_response() {
        let cfg = reference();
        for bc in BoundaryKind::ALL {
            assert_eq!(diffracted_delta(1.0, PI, 0.5, &cfg, bc, 1e-6).unwrap(), C::new(0.0, 0.0));
            assert!(matches!(diffracted_delta(1.0, PI, 1.0, &cfg, bc, 1e-6), Err(Error::WavefrontSingularity(_))));
        }
        let set = KernelTermSet::new(&cfg, BoundaryKind::DD);
        let l = (2.0 + 3f64.sqrt()).ln();
        let folded = set.z(C::new(l, PI)).unwrap() + set.z(C::new(-l, PI)).unwrap();
        let expect = C::new(0.0, 1.0 / (4.0 * cfg.big_phi)) * folded / 3f64.sqrt();
        let got = diffracted_delta(1.0, PI, 2.0, &cfg, BoundaryKind::DD, 1e-6).unwrap();
        assert!((got - expect).norm() < 1e-15);
        // the impulse response is the time derivative of the step response
        for bc in BoundaryKind::ALL {
            let h = 1e-4;
            let step = |t| heaviside_diffracted(1.0, PI, t, &cfg, bc).unwrap();
            let fd = (step(2.0 + h) - step(2.0 - h)) / (2.0 * h);
            let got = diffracted_delta(1.0, PI, 2.0, &cfg, bc, 1e-6).unwrap();
            assert!((fd - got).norm() <= 1e-4 * got.norm(), "{bc}");
        }
        let field = total_delta(1.0, 1.2, 2.0, &cfg, BoundaryKind::DD, 1e-6).unwrap();
        assert_eq!(field.incident.weight, 1);
        assert_eq!(field.reflected.weight, -1);
    }

    #[test]
    fn total_sums_components() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        let p = Profile::smooth_ramp(1.0).unwrap();
        let s = total(1.5, 1.2, 3.0, &p, &cfg, BoundaryKind::NN, &q).unwrap();
        assert_eq!(s.u_total, s.u_in + s.u_r + s.u_d);
        let early = total(1.0, 1.2, -0.5, &Profile::Heaviside, &cfg, BoundaryKind::DD, &q).unwrap();
        assert_eq!(early.u_total, C::new(0.0, 0.0));
        // Dirichlet face Q1 (theta = 2pi) at late time
        let face = total(1.0, 2.0 * PI - 1e-3, 3.0, &p, &cfg, BoundaryKind::DD, &q).unwrap();
        assert!(face.u_total.norm() < 1e-2, "{}", face.u_total);
    }

    #[test]
    fn jump_is_kernel_sign() {
        let cfg = reference();
        let q = QuadratureSpec::default();
        let p = Profile::smooth_ramp(1.0).unwrap();
        for bc in BoundaryKind::ALL {
            for k in [1, 2] {
                let j = jump(1.0, 3.0, k, &p, &cfg, bc, &q).unwrap();
                let law = f64::from(jump_law(k, bc));
                assert!((j - C::new(law, 0.0)).norm() < 1e-3, "{bc} k={k}: {j}");
            }
        }
        assert!(matches!(jump(1.0, 3.0, 1, &Profile::Heaviside, &cfg, BoundaryKind::DD, &q), Err(Error::InvalidProfile(_))));
    }

    #[test]
    fn jump_keeps_total_continuous() {
        let cfg = reference();
        let q = QuadratureSpec { eps_ray: 1e-7, ..Default::default() };
        let p = Profile::smooth_ramp(1.0).unwrap();
        for bc in BoundaryKind::ALL {
            for k in [1u8, 2] {
                let th = cfg.theta_k(k);
                let lo = total(1.0, th - 1e-6, 3.0, &p, &cfg, bc, &q).unwrap().u_total;
                let hi = total(1.0, th + 1e-6, 3.0, &p, &cfg, bc, &q).unwrap().u_total;
                assert!((hi - lo).norm() < 1e-4, "{bc} k={k}: {lo} vs {hi}");
            }
        }
    }
}
