//! TOML scenario files.
//!
//! ```toml
//! [wedge]
//! phi = "pi/3"
//! alpha = "pi/4"
//!
//! [bc]
//! kind = "DD"
//!
//! [profile]
//! kind = "smooth_ramp"   # heaviside | delta | smooth_ramp | harmonic | tabulated
//! s0 = 1.0
//!
//! [grid]
//! rho = [1.0, 2.0]
//! theta = { start = "pi/2", stop = "3*pi/2", count = 5 }
//! t = [3.0]
//!
//! [quadrature]
//! rel_tol = 1e-10
//! ```

use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;
use wedgewave::{BoundaryKind, Pulse, Quadrature, Tabulated, Wedge};

/// A number, or an expression such as `"pi/3"`, `"5*pi/12"` or `"-2pi"`.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Number(f64),
    Text(String),
}

fn number(s: &str) -> Option<f64> {
    s.parse::<f64>().ok().filter(|x| x.is_finite())
}

/// Parses `[coef][*]pi[/den]`, `num[/den]` or a plain number.
pub fn parse_angle(text: &str) -> Option<f64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect::<String>().to_ascii_lowercase();
    if let Some(x) = number(&s) {
        return Some(x);
    }
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, number(d).filter(|d| *d != 0.0)?),
        None => (s.as_str(), 1.0),
    };
    let value = match num.strip_suffix("pi").or_else(|| num.strip_suffix('π')) {
        Some(coef) => {
            let coef = coef.strip_suffix('*').unwrap_or(coef);
            let c = match coef {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => number(c)?,
            };
            c * std::f64::consts::PI
        }
        None => number(num)?,
    };
    Some(value / den)
}

impl Scalar {
    pub fn resolve(&self, key: &str) -> Result<f64> {
        match self {
            Scalar::Number(x) if x.is_finite() => Ok(*x),
            Scalar::Number(x) => bail!("config key `{key}`: {x} is not finite"),
            Scalar::Text(s) => parse_angle(s).ok_or_else(|| anyhow!("config key `{key}`: cannot parse {s:?} as a number or multiple of pi")),
        }
    }
}

/// Complex value written as `[re, im]` or as a real scalar.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ComplexValue {
    Pair([f64; 2]),
    Real(Scalar),
}

impl ComplexValue {
    pub fn resolve(&self, key: &str) -> Result<Complex64> {
        match self {
            ComplexValue::Pair([re, im]) => Ok(Complex64::new(*re, *im)),
            ComplexValue::Real(s) => Ok(Complex64::new(s.resolve(key)?, 0.0)),
        }
    }
}

/// Either an explicit list or `{ start, stop, count }` (inclusive).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Axis {
    List(Vec<Scalar>),
    Range { start: Scalar, stop: Scalar, count: usize },
}

impl Axis {
    pub fn values(&self, key: &str) -> Result<Vec<f64>> {
        match self {
            Axis::List(v) => v.iter().enumerate().map(|(i, s)| s.resolve(&format!("{key}[{i}]"))).collect(),
            Axis::Range { start, stop, count } => {
                let (a, b) = (start.resolve(&format!("{key}.start"))?, stop.resolve(&format!("{key}.stop"))?);
                match count {
                    0 => bail!("config key `{key}.count` must be at least 1"),
                    1 => Ok(vec![a]),
                    n => Ok((0..*n).map(|j| if j + 1 == *n { b } else { a + (b - a) * j as f64 / (*n - 1) as f64 }).collect()),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WedgeSection {
    pub phi: Scalar,
    pub alpha: Scalar,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BcSection {
    pub kind: String,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSection {
    pub kind: Option<String>,
    pub s0: Option<Scalar>,
    pub a0: Option<ComplexValue>,
    pub omega0: Option<Scalar>,
    pub ramp_s0: Option<Scalar>,
    pub path: Option<PathBuf>,
    pub decay_p: Option<Scalar>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub rho: Option<Axis>,
    pub theta: Option<Axis>,
    pub t: Option<Axis>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuadratureSection {
    pub rel_tol: Option<f64>,
    pub abs_tol: Option<f64>,
    pub max_subdivisions: Option<usize>,
    pub eps_ray: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralSection {
    pub omega: Option<ComplexValue>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub wedge: WedgeSection,
    pub bc: Option<BcSection>,
    #[serde(default)]
    pub profile: ProfileSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub quadrature: QuadratureSection,
    #[serde(default)]
    pub spectral: SpectralSection,
}

/// A validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub wedge: Wedge,
    pub bc: BoundaryKind,
    pub profile: Pulse,
    pub rho: Vec<f64>,
    pub theta: Vec<f64>,
    pub t: Vec<f64>,
    pub quad: Quadrature,
    pub omega: Option<Complex64>,
}

fn profile(sec: &ProfileSection, base: &Path) -> Result<Pulse> {
    let kind = sec.kind.as_deref().unwrap_or("heaviside").to_ascii_lowercase();
    let need = |v: &Option<Scalar>, key: &str| -> Result<f64> {
        v.as_ref().ok_or_else(|| anyhow!("config key `profile.{key}` is required for kind {kind:?}"))?.resolve(&format!("profile.{key}"))
    };
    let opt = |v: &Option<Scalar>, key: &str| v.as_ref().map(|s| s.resolve(&format!("profile.{key}"))).transpose();
    let p = match kind.as_str() {
        "heaviside" => Pulse::Heaviside,
        "delta" => Pulse::Delta,
        "smooth_ramp" | "ramp" => Pulse::smooth_ramp(need(&sec.s0, "s0")?).context("config key `profile.s0`")?,
        "harmonic" => {
            let a0 = sec.a0.as_ref().map(|a| a.resolve("profile.a0")).transpose()?.unwrap_or(Complex64::new(1.0, 0.0));
            Pulse::harmonic(a0, need(&sec.omega0, "omega0")?, opt(&sec.ramp_s0, "ramp_s0")?).context("config key `profile.omega0`")?
        }
        "tabulated" => {
            let path = sec.path.as_ref().ok_or_else(|| anyhow!("config key `profile.path` is required for kind \"tabulated\""))?;
            let path = if path.is_relative() { base.join(path) } else { path.clone() };
            let p = opt(&sec.decay_p, "decay_p")?.unwrap_or(0.0);
            Pulse::Tabulated(Tabulated::from_csv(&path, p).with_context(|| format!("config key `profile.path` ({})", path.display()))?)
        }
        other => bail!("config key `profile.kind`: unknown profile {other:?}"),
    };
    Ok(p)
}

impl Scenario {
    pub fn parse(text: &str, base: &Path) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text).map_err(|e| anyhow!("invalid config: {e}"))?;
        let phi = raw.wedge.phi.resolve("wedge.phi")?;
        let alpha = raw.wedge.alpha.resolve("wedge.alpha")?;
        let wedge = Wedge::new(phi, alpha).map_err(|e| anyhow!("config keys `wedge.phi`/`wedge.alpha`: {e}"))?;
        let bc = match &raw.bc {
            Some(b) => b.kind.parse::<BoundaryKind>().map_err(|e| anyhow!("config key `bc.kind`: {e}"))?,
            None => BoundaryKind::DD,
        };
        let axis = |a: &Option<Axis>, key: &str, default: f64| -> Result<Vec<f64>> {
            let v = match a {
                Some(a) => a.values(key)?,
                None => vec![default],
            };
            if v.is_empty() {
                bail!("config key `{key}` is empty");
            }
            Ok(v)
        };
        let rho = axis(&raw.grid.rho, "grid.rho", 1.0)?;
        if let Some(r) = rho.iter().find(|r| r.is_nan() || **r <= 0.0) {
            bail!("config key `grid.rho`: radii must be positive, got {r}");
        }
        let theta = axis(&raw.grid.theta, "grid.theta", std::f64::consts::PI)?;
        let t = axis(&raw.grid.t, "grid.t", 2.0)?;
        let mut quad = Quadrature::default();
        let q = &raw.quadrature;
        quad.rel_tol = q.rel_tol.unwrap_or(quad.rel_tol);
        quad.abs_tol = q.abs_tol.unwrap_or(quad.abs_tol);
        quad.max_subdivisions = q.max_subdivisions.unwrap_or(quad.max_subdivisions);
        quad.eps_ray = q.eps_ray.unwrap_or(quad.eps_ray);
        quad.validate().map_err(|e| anyhow!("section `[quadrature]`: {e}"))?;
        let omega = raw.spectral.omega.as_ref().map(|w| w.resolve("spectral.omega")).transpose()?;
        Ok(Scenario { wedge, bc, profile: profile(&raw.profile, base)?, rho, theta, t, quad, omega })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read config {}", path.display()))?;
        Scenario::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }
}
