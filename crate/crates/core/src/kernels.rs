//! Malyuzhinets-type kernels.
//!
//! For all three boundary problems the kernel `Z(beta + i theta)` is a
//! signed sum of four `coth` (DD, NN) or `csch` (DN) terms
//!
//! ```text
//! Z(beta + i theta) = sum_k s_k kind(q beta + i c_k),   c_k = q (theta - p_k)
//! ```
//!
//! with offsets `p = (alpha, theta1, theta2, 2pi + alpha)`. The same kernel is
//! also available through its primary definition `Z(b) = -H(b - i pi/2) + H(b - 5 i pi/2)`
//! so the two routes can be cross-checked.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryKind, WedgeConfig, DEFAULT_EPS_RAY};
use crate::scalar::{expm1, imag, lit, real, to_f64, Real};

/// Distance to the pole lattice `i pi Z` below which kernels report [`Error::PoleHit`].
pub const POLE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TermKind {
    Coth,
    Csch,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTerm<T> {
    /// Angular offset `p_k`.
    pub offset: T,
    pub sign: i8,
    pub kind: TermKind,
}

/// `coth x` split as `sign + excess` where `sign = ±1` follows `Re x`.
///
/// For `|Re x|` large the excess is `O(e^{-2|Re x|})` and carries full
/// relative precision, which keeps the cancelling sums in `Z` accurate.
#[inline]
pub(crate) fn coth_split<T: Real>(x: Complex<T>) -> (i32, Complex<T>) {
    let two = lit::<T>(2.0);
    if x.re >= T::zero() {
        let e = (-x * two).exp();
        (1, -(e * two) / expm1(-x * two))
    } else {
        let (s, ex) = coth_split(-x);
        (-s, -ex)
    }
}

#[inline]
pub(crate) fn csch<T: Real>(x: Complex<T>) -> Complex<T> {
    let two = lit::<T>(2.0);
    if x.re >= T::zero() {
        -((-x).exp() * two) / expm1(-x * two)
    } else {
        -csch(-x)
    }
}

#[cfg(test)]
pub(crate) fn coth<T: Real>(x: Complex<T>) -> Complex<T> {
    let (s, ex) = coth_split(x);
    ex + lit::<T>(f64::from(s))
}

fn check_pole<T: Real>(x: Complex<T>) -> Result<()> {
    let pi = T::PI();
    let m = (x.im / pi).round();
    let d = Complex::new(x.re, x.im - m * pi).norm();
    if d < lit(POLE_TOLERANCE) {
        Err(Error::PoleHit { re: to_f64(x.re), im: to_f64(x.im) })
    } else {
        Ok(())
    }
}

/// The four-term representation of `Z` for one configuration and boundary kind.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelTermSet<T> {
    pub terms: [KernelTerm<T>; 4],
    pub q: T,
    pub bc: BoundaryKind,
    cfg: WedgeConfig<T>,
}

impl<T: Real> KernelTermSet<T> {
    pub fn new(cfg: &WedgeConfig<T>, bc: BoundaryKind) -> Self {
        let (signs, kind) = match bc {
            BoundaryKind::DD => ([-1, -1, 1, 1], TermKind::Coth),
            BoundaryKind::NN => ([-1, 1, -1, 1], TermKind::Coth),
            BoundaryKind::DN => ([-1, -1, -1, 1], TermKind::Csch),
        };
        let offsets = [cfg.alpha, cfg.theta1, cfg.theta2, T::TAU() + cfg.alpha];
        let mut terms = [KernelTerm { offset: T::zero(), sign: 0, kind }; 4];
        for k in 0..4 {
            terms[k] = KernelTerm { offset: offsets[k], sign: signs[k], kind };
        }
        KernelTermSet { terms, q: cfg.q, bc, cfg: *cfg }
    }

    pub fn config(&self) -> &WedgeConfig<T> {
        &self.cfg
    }

    pub fn kind(&self) -> TermKind {
        self.terms[0].kind
    }

    /// `c_k(theta) = q (theta - p_k)`.
    pub fn c(&self, k: usize, theta: T) -> T {
        self.q * (theta - self.terms[k].offset)
    }

    pub fn offsets_c(&self, theta: T) -> [T; 4] {
        [self.c(0, theta), self.c(1, theta), self.c(2, theta), self.c(3, theta)]
    }

    /// Exponential decay rate of `|Z(beta + i theta)|` in `|Re beta|`.
    pub fn decay_rate(&self) -> T {
        match self.kind() {
            TermKind::Coth => lit::<T>(2.0) * self.q,
            TermKind::Csch => self.q,
        }
    }

    /// `Z(beta + i theta)` without pole checks (non-finite at poles).
    #[inline]
    pub(crate) fn eval_raw(&self, beta: Complex<T>, theta: T) -> Complex<T> {
        let qb = beta * self.q;
        match self.kind() {
            TermKind::Coth => {
                let mut whole = 0i32;
                let mut excess = Complex::new(T::zero(), T::zero());
                for (k, term) in self.terms.iter().enumerate() {
                    let (s, ex) = coth_split(qb + imag(self.c(k, theta)));
                    whole += i32::from(term.sign) * s;
                    excess = excess + ex * lit::<T>(f64::from(term.sign));
                }
                excess + lit::<T>(f64::from(whole))
            }
            TermKind::Csch => self.terms.iter().enumerate().fold(Complex::new(T::zero(), T::zero()), |acc, (k, term)| {
                acc + csch(qb + imag(self.c(k, theta))) * lit::<T>(f64::from(term.sign))
            }),
        }
    }

    /// `Z(beta + i theta)` through the four-term expansion.
    pub fn eval(&self, beta: Complex<T>, theta: T) -> Result<Complex<T>> {
        let qb = beta * self.q;
        for k in 0..4 {
            check_pole(qb + imag(self.c(k, theta)))?;
        }
        Ok(self.eval_raw(beta, theta))
    }

    /// `Z(beta)` for an arbitrary complex argument.
    pub fn z(&self, beta: Complex<T>) -> Result<Complex<T>> {
        self.eval(Complex::new(beta.re, T::zero()), beta.im)
    }

    /// `Z(beta + i theta) + Z(-beta + i theta)`.
    #[inline]
    pub(crate) fn folded_raw(&self, beta: Complex<T>, theta: T) -> Complex<T> {
        self.eval_raw(beta, theta) + self.eval_raw(-beta, theta)
    }

    /// `H(beta)` as an exact integer part plus an excess (see [`coth_split`]).
    fn h_split(&self, beta: Complex<T>) -> Result<(i32, Complex<T>)> {
        let pi = T::PI();
        let alpha = self.cfg.alpha;
        let a1 = (beta + imag(pi / lit(2.0) - alpha)) * self.q;
        let a2 = (beta + imag(alpha - lit::<T>(1.5) * pi)) * self.q;
        check_pole(a1)?;
        check_pole(a2)?;
        Ok(match self.bc {
            BoundaryKind::DD | BoundaryKind::NN => {
                let (n1, e1) = coth_split(a1);
                let (n2, e2) = coth_split(a2);
                if self.bc == BoundaryKind::DD {
                    (n1 - n2, e1 - e2)
                } else {
                    (n1 + n2, e1 + e2)
                }
            }
            BoundaryKind::DN => (0, csch(a1) + csch(a2)),
        })
    }

    /// Malyuzhinets kernel `H(beta)`.
    pub fn h(&self, beta: Complex<T>) -> Result<Complex<T>> {
        let (n, ex) = self.h_split(beta)?;
        Ok(ex + lit::<T>(f64::from(n)))
    }

    /// `Z(beta) = -H(beta - i pi/2) + H(beta - 5 i pi/2)`, evaluated from `H`.
    pub fn z_composed(&self, beta: Complex<T>) -> Result<Complex<T>> {
        let pi = T::PI();
        let (n1, e1) = self.h_split(beta + imag(-pi / lit(2.0)))?;
        let (n2, e2) = self.h_split(beta + imag(-lit::<T>(2.5) * pi))?;
        Ok(e2 - e1 + lit::<T>(f64::from(n2 - n1)))
    }

    /// Whether `Z(· + i theta)` has a pole on the real axis (only possible at 0).
    pub fn has_real_pole(&self, theta: T) -> bool {
        let pi = T::PI();
        self.offsets_c(theta).iter().any(|&c| {
            let m = (c / pi).round();
            (c - m * pi).abs() < lit(POLE_TOLERANCE)
        })
    }
}

/// `H(beta)` for the given configuration.
pub fn h_kernel<T: Real>(beta: Complex<T>, cfg: &WedgeConfig<T>, bc: BoundaryKind) -> Result<Complex<T>> {
    KernelTermSet::new(cfg, bc).h(beta)
}

/// `Z(beta)` through the four-term expansion.
pub fn z_kernel<T: Real>(beta: Complex<T>, cfg: &WedgeConfig<T>, bc: BoundaryKind) -> Result<Complex<T>> {
    KernelTermSet::new(cfg, bc).z(beta)
}

/// `Z(beta + i theta) + Z(-beta + i theta)` for real `beta`.
pub fn folded_z<T: Real>(beta: T, theta: T, cfg: &WedgeConfig<T>, bc: BoundaryKind) -> Result<Complex<T>> {
    cfg.check_admissible(theta, lit(DEFAULT_EPS_RAY))?;
    let set = KernelTermSet::new(cfg, bc);
    let b = real(beta);
    Ok(set.eval(b, theta)? + set.eval(-b, theta)?)
}

/// Exponential envelope `|Z(beta + i theta)| <= c e^{-rate |beta|}` for `|beta| >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayBound<T> {
    pub c: T,
    pub rate: T,
}

fn log_spaced<T: Real>(n: usize, lo: f64, hi: f64) -> impl Iterator<Item = T> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n).map(move |j| lit::<T>((a + (b - a) * j as f64 / (n - 1) as f64).exp()))
}

fn envelope<T: Real>(set: &KernelTermSet<T>, theta: T, rate: T, samples: impl Iterator<Item = T>) -> T {
    samples
        .flat_map(|b| [b, -b])
        .map(|b| set.eval_raw(real(b), theta).norm() * (rate * b.abs()).exp())
        .fold(T::zero(), T::max)
}

/// Fits the decay constant on a coarse log-spaced sample of `|beta| ∈ [1, 50]`
/// and verifies it on a four times denser one.
pub fn decay_bound<T: Real>(cfg: &WedgeConfig<T>, bc: BoundaryKind, theta: T) -> Result<DecayBound<T>> {
    cfg.check_admissible(theta, lit(DEFAULT_EPS_RAY))?;
    let set = KernelTermSet::new(cfg, bc);
    let rate = set.decay_rate();
    let margin = lit::<T>(1.25);
    let fitted = envelope(&set, theta, rate, log_spaced::<T>(49, 1.0, 50.0)) * margin;
    let checked = envelope(&set, theta, rate, log_spaced::<T>(193, 1.0, 50.0));
    let c = if checked <= fitted { fitted } else { checked * margin };
    Ok(DecayBound { c, rate })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    type C = Complex<f64>;

    fn reference() -> WedgeConfig<f64> {
        WedgeConfig::new(PI / 3.0, PI / 4.0).unwrap()
    }

    fn i() -> C {
        C::new(0.0, 1.0)
    }

    #[test]
    fn term_tables() {
        let cfg = reference();
        let dd = KernelTermSet::new(&cfg, BoundaryKind::DD);
        assert_eq!(dd.terms.map(|t| t.sign), [-1, -1, 1, 1]);
        let nn = KernelTermSet::new(&cfg, BoundaryKind::NN);
        assert_eq!(nn.terms.map(|t| t.sign), [-1, 1, -1, 1]);
        let dn = KernelTermSet::new(&cfg, BoundaryKind::DN);
        assert_eq!(dn.terms.map(|t| t.sign), [-1, -1, -1, 1]);
        assert_eq!(dn.kind(), TermKind::Csch);
        assert_eq!(dd.terms.map(|t| t.offset), [cfg.alpha, cfg.theta1, cfg.theta2, 2.0 * PI + cfg.alpha]);
    }

    #[test]
    fn split_coth_matches_direct() {
        for x in [C::new(0.3, 0.2), C::new(-2.0, 1.0), C::new(40.0, -0.3), C::new(1e-6, 1.0), C::new(-0.1, -3.0)] {
            let direct = x.cosh() / x.sinh();
            assert!((coth(x) - direct).norm() <= 1e-14 * direct.norm().max(1.0), "{x}");
            let d2 = 1.0 / x.sinh();
            assert!((csch(x) - d2).norm() <= 1e-14 * d2.norm().max(1e-300), "{x}");
        }
        // deep tail keeps relative precision
        let x = C::new(30.0, 0.4);
        let (s, ex) = coth_split(x);
        assert_eq!(s, 1);
        let expected = 2.0 * (-2.0 * x).exp();
        assert!((ex - expected).norm() < 1e-12 * expected.norm());
    }

    #[test]
    fn h_definition_transcription() {
        let cfg = reference();
        let q = cfg.q;
        let b = C::new(0.3, 0.1);
        let dd = h_kernel(b, &cfg, BoundaryKind::DD).unwrap();
        let direct = |x: C| x.cosh() / x.sinh();
        let expect = direct(q * (b + i() * PI / 2.0 - i() * cfg.alpha)) - direct(q * (b - 1.5 * i() * PI + i() * cfg.alpha));
        assert!((dd - expect).norm() < 1e-14);

        let b = C::new(1.1, -0.2);
        let dn = h_kernel(b, &cfg, BoundaryKind::DN).unwrap();
        let expect = 1.0 / (q * (b + i() * PI / 2.0 - i() * cfg.alpha)).sinh()
            + 1.0 / (q * (b - 1.5 * i() * PI + i() * cfg.alpha)).sinh();
        assert!((dn - expect).norm() < 1e-14);

        let pole = i() * (cfg.alpha - PI / 2.0);
        assert!(matches!(h_kernel(pole, &cfg, BoundaryKind::DD), Err(Error::PoleHit { .. })));
    }

    #[test]
    fn expansion_equals_composition_at_reference_point() {
        let cfg = reference();
        for bc in BoundaryKind::ALL {
            let set = KernelTermSet::new(&cfg, bc);
            let b = C::new(0.7, 2.0);
            let a = set.z(b).unwrap();
            let c = set.z_composed(b).unwrap();
            assert!((a - c).norm() <= 1e-12 * a.norm(), "{bc}: {a} vs {c}");
        }
    }

    #[test]
    fn pole_on_critical_ray() {
        let cfg = reference();
        let set = KernelTermSet::new(&cfg, BoundaryKind::DD);
        assert!(matches!(set.eval(C::new(0.0, 0.0), cfg.theta1), Err(Error::PoleHit { .. })));
        let near = set.eval(C::new(1e-9, 0.0), cfg.theta1).unwrap();
        assert!(near.norm() > 1e8);
        for bc in BoundaryKind::ALL {
            let set = KernelTermSet::new(&cfg, bc);
            assert!(set.has_real_pole(cfg.theta1) && set.has_real_pole(cfg.theta2));
            for k in 0..=200 {
                let th = cfg.phi + (2.0 * PI - cfg.phi) * k as f64 / 200.0;
                if (th - cfg.theta1).abs() > 1e-9 && (th - cfg.theta2).abs() > 1e-9 {
                    assert!(!set.has_real_pole(th), "{bc} {th}");
                }
            }
        }
    }

    #[test]
    fn folded_kernel() {
        let cfg = reference();
        let set = KernelTermSet::new(&cfg, BoundaryKind::DD);
        let f0 = folded_z(0.0, PI, &cfg, BoundaryKind::DD).unwrap();
        assert!((f0 - 2.0 * set.eval(C::new(0.0, 0.0), PI).unwrap()).norm() < 1e-15);
        let f1 = folded_z(1.0, PI, &cfg, BoundaryKind::DD).unwrap();
        let by_terms = set.z(C::new(1.0, PI)).unwrap() + set.z(C::new(-1.0, PI)).unwrap();
        assert!((f1 - by_terms).norm() < 1e-14);
        assert!(matches!(folded_z(1.0, cfg.theta2, &cfg, BoundaryKind::DD), Err(Error::CriticalRay { k: 2, .. })));
    }

    #[test]
    fn decay_rates_and_envelope() {
        let cfg = reference();
        let dd = decay_bound(&cfg, BoundaryKind::DD, PI).unwrap();
        assert!((dd.rate - 0.6).abs() < 1e-15);
        let dn = decay_bound(&cfg, BoundaryKind::DN, PI).unwrap();
        assert!((dn.rate - 0.3).abs() < 1e-15);
        let set = KernelTermSet::new(&cfg, BoundaryKind::DD);
        let z20 = set.eval(C::new(20.0, 0.0), PI).unwrap().norm();
        assert!(z20 <= dd.c * (-0.6f64 * 20.0).exp());
        let f30 = folded_z(30.0, PI, &cfg, BoundaryKind::DD).unwrap().norm();
        assert!(f30 <= 2.0 * dd.c * (-60.0 * cfg.q).exp());
        // the envelope holds on an independent fine sweep
        for bc in BoundaryKind::ALL {
            for th in [1.1, 2.0, PI, 5.0, 6.2] {
                let bound = decay_bound(&cfg, bc, th).unwrap();
                let set = KernelTermSet::new(&cfg, bc);
                for j in 0..=1000 {
                    let b = 1.0 + 49.0 * j as f64 / 1000.0;
                    for s in [b, -b] {
                        let z = set.eval(C::new(s, 0.0), th).unwrap().norm();
                        assert!(z <= bound.c * (-bound.rate * b).exp(), "{bc} {th} {s}");
                    }
                }
                // and the rate is sharp: the scaled envelope does not vanish
                let tail = set.eval(C::new(40.0, 0.0), th).unwrap().norm() * (bound.rate * 40.0).exp();
                assert!(tail > 1e-3 * bound.c, "{bc} {th}");
            }
        }
    }

    #[test]
    fn single_precision_kernel_tracks_double() {
        let c64 = reference();
        let c32 = WedgeConfig::<f32>::new(std::f32::consts::PI / 3.0, std::f32::consts::FRAC_PI_4).unwrap();
        for bc in BoundaryKind::ALL {
            let a = KernelTermSet::new(&c64, bc).eval(C::new(0.4, 0.0), 2.5).unwrap();
            let b = KernelTermSet::new(&c32, bc).eval(Complex::new(0.4f32, 0.0), 2.5).unwrap();
            assert!((a.re - f64::from(b.re)).abs() < 1e-4 && (a.im - f64::from(b.im)).abs() < 1e-4);
        }
    }
}
