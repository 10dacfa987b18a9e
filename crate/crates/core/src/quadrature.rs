//! Globally adaptive 21-point Gauss–Kronrod quadrature for complex-valued
//! integrands of a real variable.
//!
//! The error estimate follows the QUADPACK `qk21` heuristics (scaled
//! Gauss–Kronrod difference with a round-off floor). Intervals are bisected
//! in order of decreasing error until the global estimate meets the
//! requested tolerance.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the nodes XGK[1], XGK[3], ..., XGK[9]
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Tolerances shared by every integral the library evaluates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
    /// Half-width used when an integral over all of `R` is truncated.
    pub truncation_b: T,
    /// Half-width of the exclusion band around the critical rays.
    pub eps_ray: T,
}

impl<T: Real> Default for QuadratureSpec<T> {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: lit(1e-10),
            abs_tol: lit(1e-12),
            max_subdivisions: 20_000,
            truncation_b: lit(60.0),
            eps_ray: lit(crate::geometry::DEFAULT_EPS_RAY),
        }
    }
}

impl<T: Real> QuadratureSpec<T> {
    pub fn new(rel_tol: T, abs_tol: T) -> Result<Self> {
        let spec = QuadratureSpec { rel_tol, abs_tol, ..Default::default() };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero() && self.abs_tol > T::zero()) {
            return Err(Error::DomainError("quadrature tolerances must be positive".into()));
        }
        if self.max_subdivisions == 0 {
            return Err(Error::DomainError("max_subdivisions must be at least 1".into()));
        }
        if !(self.truncation_b > T::zero()) || self.eps_ray < T::zero() {
            return Err(Error::DomainError("truncation_b must be positive and eps_ray non-negative".into()));
        }
        Ok(())
    }

    /// Smallest truncation `B` with `C e^{-rate B} / rate <= abs_tol / 10`.
    pub fn truncation_for(&self, c: T, rate: T) -> T {
        let ten = lit::<T>(10.0);
        let b = (ten * c / (rate * self.abs_tol)).ln() / rate;
        b.max(T::one())
    }

    /// Returns a copy whose `truncation_b` satisfies the tail bound for `(c, rate)`.
    pub fn with_truncation_from(mut self, c: T, rate: T) -> Self {
        self.truncation_b = self.truncation_for(c, rate);
        self
    }
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<T> {
    pub value: Complex<T>,
    pub error: T,
    pub intervals: usize,
    pub evaluations: usize,
}

struct Piece<T> {
    a: T,
    b: T,
    value: Complex<T>,
    error: T,
    resabs: T,
}

impl<T: Real> PartialEq for Piece<T> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<T: Real> Eq for Piece<T> {}
impl<T: Real> PartialOrd for Piece<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<T: Real> Ord for Piece<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

fn gk21<T, F>(f: &F, a: T, b: T) -> Result<Piece<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    let two = lit::<T>(2.0);
    let center = (a + b) / two;
    let half = (b - a) / two;
    let eval = |x: T| -> Result<Complex<T>> {
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFiniteSample(to_f64(x)))
        }
    };

    let mut values = [Complex::new(T::zero(), T::zero()); 21];
    values[10] = eval(center)?;
    for j in 0..10 {
        let dx = half * lit(XGK[j]);
        values[j] = eval(center - dx)?;
        values[20 - j] = eval(center + dx)?;
    }

    let mut kronrod = values[10] * lit::<T>(WGK[10]);
    let mut gauss = Complex::new(T::zero(), T::zero());
    let mut resabs = values[10].norm() * lit::<T>(WGK[10]);
    for j in 0..10 {
        let w = lit::<T>(WGK[j]);
        let pair = values[j] + values[20 - j];
        kronrod = kronrod + pair * w;
        resabs = resabs + (values[j].norm() + values[20 - j].norm()) * w;
        if j % 2 == 1 {
            gauss = gauss + pair * lit::<T>(WG[j / 2]);
        }
    }
    let mean = kronrod / two;
    let mut resasc = (values[10] - mean).norm() * lit::<T>(WGK[10]);
    for j in 0..10 {
        resasc = resasc + ((values[j] - mean).norm() + (values[20 - j] - mean).norm()) * lit::<T>(WGK[j]);
    }

    let scale = half.abs();
    let value = kronrod * half;
    let resabs = resabs * scale;
    let resasc = resasc * scale;
    let mut error = ((kronrod - gauss) * half).norm();
    if resasc > T::zero() && error > T::zero() {
        let ratio = (lit::<T>(200.0) * error / resasc).powf(lit(1.5));
        error = resasc * ratio.min(T::one());
    }
    let eps = T::epsilon();
    if resabs > T::min_positive_value() / (lit::<T>(50.0) * eps) {
        error = error.max(lit::<T>(50.0) * eps * resabs);
    }
    Ok(Piece { a, b, value, error, resabs })
}

/// Integrates `f` over `[a, b]`, pre-splitting at the interior `breakpoints`.
///
/// `a > b` is allowed and flips the sign; `a == b` yields zero.
pub fn integrate<T, F>(f: F, a: T, b: T, breakpoints: &[T], spec: &QuadratureSpec<T>) -> Result<Estimate<T>>
where
    T: Real,
    F: Fn(T) -> Complex<T>,
{
    if a == b {
        return Ok(Estimate { value: Complex::new(T::zero(), T::zero()), error: T::zero(), intervals: 0, evaluations: 0 });
    }
    if b < a {
        let mut e = integrate(f, b, a, breakpoints, spec)?;
        e.value = -e.value;
        return Ok(e);
    }

    let mut cuts: Vec<T> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap_or(Ordering::Equal));
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut frozen: Vec<Piece<T>> = Vec::new();
    let mut evaluations = 0usize;
    let mut left = a;
    for right in cuts.into_iter().chain(std::iter::once(b)) {
        heap.push(gk21(&f, left, right)?);
        evaluations += 21;
        left = right;
    }

    let eps = T::epsilon();
    let min_width = |p: &Piece<T>| lit::<T>(200.0) * eps * p.a.abs().max(p.b.abs()).max(T::min_positive_value());

    loop {
        let mut value = Complex::new(T::zero(), T::zero());
        let mut error = T::zero();
        let mut resabs = T::zero();
        for p in heap.iter().chain(frozen.iter()) {
            value = value + p.value;
            error = error + p.error;
            resabs = resabs + p.resabs;
        }
        let tolerance = spec.abs_tol.max(spec.rel_tol * value.norm());
        let roundoff_floor = lit::<T>(100.0) * eps * resabs;
        let intervals = heap.len() + frozen.len();
        if error <= tolerance || error <= roundoff_floor || heap.is_empty() {
            if error <= tolerance.max(roundoff_floor) {
                return Ok(Estimate { value, error, intervals, evaluations });
            }
            return Err(failure(a, b, error, tolerance, intervals));
        }
        if intervals >= spec.max_subdivisions {
            return Err(failure(a, b, error, tolerance, intervals));
        }
        let worst = heap.pop().expect("heap checked non-empty");
        if worst.b - worst.a <= min_width(&worst) {
            frozen.push(worst);
            continue;
        }
        let mid = (worst.a + worst.b) / lit::<T>(2.0);
        heap.push(gk21(&f, worst.a, mid)?);
        heap.push(gk21(&f, mid, worst.b)?);
        evaluations += 42;
    }
}

fn failure<T: Real>(a: T, b: T, error: T, tolerance: T, subdivisions: usize) -> Error {
    Error::QuadratureFailure {
        a: to_f64(a),
        b: to_f64(b),
        error: to_f64(error),
        tolerance: to_f64(tolerance),
        subdivisions,
    }
}
