//! Incident pulse profiles `F` and the incident plane wave `F(t - n0·y)`.

use std::path::Path;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::WedgeConfig;
use crate::quadrature::{integrate, QuadratureSpec};
use crate::scalar::{imag, lit, real, to_f64, Real};

/// C^∞ ramp rising from 0 at `s <= 0` to 1 at `s >= s0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothRamp<T> {
    pub s0: T,
}

impl<T: Real> SmoothRamp<T> {
    pub fn new(s0: T) -> Result<Self> {
        if !(s0 > T::zero() && s0.is_finite()) {
            return Err(Error::InvalidProfile(format!("ramp length s0 = {} must be positive", to_f64(s0))));
        }
        Ok(SmoothRamp { s0 })
    }

    /// `psi(x) / (psi(x) + psi(1 - x))` with `psi(x) = exp(-1/x)` on `x = s/s0`.
    pub fn value(&self, s: T) -> T {
        let x = s / self.s0;
        if x <= T::zero() {
            return T::zero();
        }
        if x >= T::one() {
            return T::one();
        }
        let a = (-T::one() / x).exp();
        let b = (-T::one() / (T::one() - x)).exp();
        a / (a + b)
    }
}

/// Sampled profile with linear interpolation and an algebraic tail.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated<T> {
    times: Vec<T>,
    values: Vec<Complex<T>>,
    decay_p: T,
}

impl<T: Real> Tabulated<T> {
    pub fn new(times: Vec<T>, values: Vec<Complex<T>>, decay_p: T) -> Result<Self> {
        if times.is_empty() || times.len() != values.len() {
            return Err(Error::InvalidProfile("times and values must be non-empty and of equal length".into()));
        }
        if times[0] < T::zero() {
            return Err(Error::InvalidProfile("tabulated profile must vanish for s < 0".into()));
        }
        if times.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidProfile("sample times must be strictly increasing".into()));
        }
        if !decay_p.is_finite() {
            return Err(Error::InvalidProfile("decay exponent must be finite".into()));
        }
        let bounded = times
            .iter()
            .zip(&values)
            .all(|(s, v)| ((T::one() + s.abs()).powf(decay_p) * v.norm()).is_finite());
        if !bounded {
            return Err(Error::InvalidProfile("samples violate the growth bound (1+|s|)^p |F(s)| < inf".into()));
        }
        Ok(Tabulated { times, values, decay_p })
    }

    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn values(&self) -> &[Complex<T>] {
        &self.values
    }

    pub fn decay_p(&self) -> T {
        self.decay_p
    }

    fn last(&self) -> (T, Complex<T>) {
        let n = self.times.len() - 1;
        (self.times[n], self.values[n])
    }

    pub fn value(&self, s: T) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        if s < self.times[0] {
            return zero;
        }
        let (s_last, f_last) = self.last();
        if s >= s_last {
            let ratio = (T::one() + s_last) / (T::one() + s);
            return f_last * ratio.powf(self.decay_p);
        }
        let j = self.times.partition_point(|&x| x <= s) - 1;
        let (s0, s1) = (self.times[j], self.times[j + 1]);
        let w = (s - s0) / (s1 - s0);
        self.values[j] * (T::one() - w) + self.values[j + 1] * w
    }

    /// Reads a two-column `(time, value)` or three-column `(time, re, im)` CSV file.
    ///
    /// A header row is skipped when its first field is not numeric.
    pub fn from_csv(path: impl AsRef<Path>, decay_p: T) -> Result<Self> {
        let path = path.as_ref();
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .flexible(true)
            .from_path(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let mut times = Vec::new();
        let mut values = Vec::new();
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            let fields: Vec<&str> = record.iter().filter(|f| !f.is_empty()).collect();
            if fields.is_empty() {
                continue;
            }
            let parsed: std::result::Result<Vec<f64>, _> = fields.iter().map(|f| f.parse::<f64>()).collect();
            let nums = match parsed {
                Ok(n) => n,
                Err(_) if line == 0 => continue,
                Err(e) => {
                    return Err(Error::InvalidProfile(format!("{}:{}: {e}", path.display(), line + 1)));
                }
            };
            let (s, v) = match nums.as_slice() {
                [s, re] => (*s, Complex::new(lit(*re), T::zero())),
                [s, re, im] => (*s, Complex::new(lit(*re), lit(*im))),
                _ => {
                    return Err(Error::InvalidProfile(format!(
                        "{}:{}: expected 2 or 3 columns, found {}",
                        path.display(),
                        line + 1,
                        nums.len()
                    )))
                }
            };
            times.push(lit(s));
            values.push(v);
        }
        Tabulated::new(times, values, decay_p)
    }

    fn fourier_laplace(&self, omega: Complex<T>, quad: &QuadratureSpec<T>) -> Result<Complex<T>> {
        let i = imag::<T>(T::one());
        let e = |s: T| (i * omega * s).exp();
        // ∫_a^b e^{iωs}(f_a + (f_b - f_a)(s-a)/h) ds in closed form
        let mut acc = Complex::new(T::zero(), T::zero());
        let iw = i * omega;
        for j in 0..self.times.len() - 1 {
            let (a, b) = (self.times[j], self.times[j + 1]);
            let (fa, fb) = (self.values[j], self.values[j + 1]);
            let h = b - a;
            let (ea, eb) = (e(a), e(b));
            let base = (eb - ea) / iw;
            let slope = (fb - fa) / real(h);
            let first_moment = (eb * real(h)) / iw - (eb - ea) / (iw * iw);
            acc = acc + fa * base + slope * first_moment;
        }
        let (s_last, f_last) = self.last();
        let tail = if self.decay_p == T::zero() {
            -f_last * e(s_last) / iw
        } else {
            let damping = omega.im;
            let span = lit::<T>(40.0) / damping;
            let p = self.decay_p;
            let g = |s: T| e(s) * f_last * ((T::one() + s_last) / (T::one() + s)).powf(p);
            integrate(g, s_last, s_last + span, &[], quad)?.value
        };
        Ok(acc + tail)
    }
}

/// Incident pulse model.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile<T> {
    /// Unit step `h(s)`, with `h(0) = 1`.
    Heaviside,
    /// Dirac delta; symbolic, no pointwise values.
    Delta,
    SmoothRamp(SmoothRamp<T>),
    /// `a0 e^{-i omega0 s}` switched on by the ramp, or by `h(s)` when `ramp` is `None`.
    HarmonicSwitched { a0: Complex<T>, omega0: T, ramp: Option<SmoothRamp<T>> },
    Tabulated(Tabulated<T>),
}

impl<T: Real> Profile<T> {
    pub fn smooth_ramp(s0: T) -> Result<Self> {
        Ok(Profile::SmoothRamp(SmoothRamp::new(s0)?))
    }

    pub fn harmonic(a0: Complex<T>, omega0: T, ramp_s0: Option<T>) -> Result<Self> {
        if omega0 == T::zero() || !omega0.is_finite() {
            return Err(Error::InvalidProfile("harmonic profile needs a finite nonzero omega0".into()));
        }
        let ramp = ramp_s0.map(SmoothRamp::new).transpose()?;
        Ok(Profile::HarmonicSwitched { a0, omega0, ramp })
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, Profile::Delta)
    }

    /// Whether the profile is C^∞ (required by the jump extrapolation).
    pub fn is_smooth(&self) -> bool {
        matches!(self, Profile::SmoothRamp(_) | Profile::HarmonicSwitched { ramp: Some(_), .. })
    }

    /// Carrier frequency `omega0` (zero for non-harmonic profiles).
    pub fn carrier_frequency(&self) -> T {
        match self {
            Profile::HarmonicSwitched { omega0, .. } => *omega0,
            _ => T::zero(),
        }
    }

    pub(crate) fn require_pointwise(&self) -> Result<()> {
        if self.is_delta() {
            Err(Error::DeltaNotPointwise)
        } else {
            Ok(())
        }
    }

    /// `F(s)`; callers must have excluded [`Profile::Delta`].
    pub(crate) fn value_unchecked(&self, s: T) -> Complex<T> {
        let zero = Complex::new(T::zero(), T::zero());
        if s < T::zero() {
            return zero;
        }
        match self {
            Profile::Heaviside => real(T::one()),
            Profile::Delta => zero,
            Profile::SmoothRamp(r) => real(r.value(s)),
            Profile::HarmonicSwitched { a0, omega0, ramp } => {
                let envelope = ramp.map_or(T::one(), |r| r.value(s));
                *a0 * imag(-*omega0 * s).exp() * envelope
            }
            Profile::Tabulated(tab) => tab.value(s),
        }
    }

    /// Pointwise value `F(s)`.
    pub fn eval(&self, s: T) -> Result<Complex<T>> {
        self.require_pointwise()?;
        Ok(self.value_unchecked(s))
    }

    /// Fourier–Laplace transform `∫ e^{iωs} F(s) ds` for `Im ω > 0`.
    pub fn fourier_laplace(&self, omega: Complex<T>, quad: &QuadratureSpec<T>) -> Result<Complex<T>> {
        if !(omega.im > T::zero()) {
            return Err(Error::DomainError("Fourier-Laplace transform needs Im omega > 0".into()));
        }
        let i = imag::<T>(T::one());
        match self {
            Profile::Heaviside => Ok(i / omega),
            Profile::Delta => Ok(real(T::one())),
            Profile::HarmonicSwitched { a0, omega0, ramp: None } => Ok(i * *a0 / (omega - *omega0)),
            Profile::HarmonicSwitched { ramp: Some(_), .. } | Profile::SmoothRamp(_) => Err(Error::NotSupported(
                "no closed-form transform for ramped profiles; sample them as a tabulated profile".into(),
            )),
            Profile::Tabulated(tab) => tab.fourier_laplace(omega, quad),
        }
    }
}

/// Pointwise value of a profile; mirrors [`Profile::eval`].
pub fn eval_profile<T: Real>(p: &Profile<T>, s: T) -> Result<Complex<T>> {
    p.eval(s)
}

/// Incident plane wave `F(t - n0·y)` at the Cartesian point `y`.
pub fn incident<T: Real>(y: [T; 2], t: T, p: &Profile<T>, cfg: &WedgeConfig<T>) -> Result<Complex<T>> {
    p.require_pointwise()?;
    let phase = cfg.n0[0] * y[0] + cfg.n0[1] * y[1];
    Ok(p.value_unchecked(t - phase))
}

/// Incident plane wave at the polar point `(rho, theta)`.
pub fn incident_polar<T: Real>(rho: T, theta: T, t: T, p: &Profile<T>, cfg: &WedgeConfig<T>) -> Result<Complex<T>> {
    p.require_pointwise()?;
    Ok(p.value_unchecked(t - cfg.incident_phase(rho, theta)))
}

/// Decomposed field value at a space-time point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FieldSample<T> {
    pub rho: T,
    pub theta: T,
    pub t: T,
    pub u_in: Complex<T>,
    pub u_r: Complex<T>,
    pub u_d: Complex<T>,
    pub u_total: Complex<T>,
}

impl<T: Real> FieldSample<T> {
    pub fn new(rho: T, theta: T, t: T, u_in: Complex<T>, u_r: Complex<T>, u_d: Complex<T>) -> Self {
        FieldSample { rho, theta, t, u_in, u_r, u_d, u_total: u_in + u_r + u_d }
    }

    pub fn scattered(&self) -> Complex<T> {
        self.u_r + self.u_d
    }
}
