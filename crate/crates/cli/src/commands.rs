//! Subcommand implementations. Every command renders its whole output into a
//! string first, so results are byte-identical regardless of thread count.

use std::f64::consts::PI;
use std::fmt::Write as _;

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use wedgewave::heaviside::{longtime_limit, sobolev_total_from_ours, sobolev_u, total_longtime_limit, SobolevVars};
use wedgewave::spectral::{amplitude, limiting_amplitude, s_d, s_r, s_s};
use wedgewave::timedomain::{jump, jump_law, total, total_delta};
use wedgewave::validation::{boundary_report, helmholtz_residual, BoundaryMode};
use wedgewave::{eval_profile, BoundaryKind, Pulse, Report, Sector};

use crate::config::Scenario;

/// Raised when a check ran to completion but its tolerance was exceeded.
#[derive(Debug)]
pub struct ValidationFailed(pub String);

impl std::fmt::Display for ValidationFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "validation failed: {}", self.0)
    }
}

impl std::error::Error for ValidationFailed {}

/// Result of a command: text to write, plus an optional failed check that is
/// reported after the text has been written.
pub struct Output {
    pub text: String,
    pub failure: Option<ValidationFailed>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, failure: None }
    }
}

fn e(x: f64) -> String {
    // `+ 0.0` folds -0 into 0
    format!("{:.16e}", x + 0.0)
}

fn c(z: Complex64) -> String {
    format!("{},{}", e(z.re), e(z.im))
}

fn grid3(s: &Scenario) -> Vec<(f64, f64, f64)> {
    let mut pts = Vec::with_capacity(s.rho.len() * s.theta.len() * s.t.len());
    for &r in &s.rho {
        for &th in &s.theta {
            for &t in &s.t {
                pts.push((r, th, t));
            }
        }
    }
    pts
}

fn grid2(s: &Scenario) -> Vec<(f64, f64)> {
    s.rho.iter().flat_map(|&r| s.theta.iter().map(move |&th| (r, th))).collect()
}

fn at<T>(r: wedgewave::Result<T>, what: &str) -> Result<T> {
    r.map_err(|err| anyhow!("{what}: {err}"))
}

pub fn field(s: &Scenario) -> Result<Output> {
    let pts = grid3(s);
    let mut out = String::new();
    if s.profile == Pulse::Delta {
        out.push_str("rho,theta,t,inc_arrival,inc_weight,refl_arrival,refl_weight,re_ud,im_ud\n");
        let rows: Vec<String> = pts
            .par_iter()
            .map(|&(r, th, t)| {
                let d = at(total_delta(r, th, t, &s.wedge, s.bc, s.quad.eps_ray), &format!("point rho={r} theta={th} t={t}"))?;
                Ok(format!(
                    "{},{},{},{},{},{},{},{}\n",
                    e(r),
                    e(th),
                    e(t),
                    e(d.incident.arrival),
                    d.incident.weight,
                    e(d.reflected.arrival),
                    d.reflected.weight,
                    c(d.diffracted)
                ))
            })
            .collect::<Result<_>>()?;
        rows.iter().for_each(|r| out.push_str(r));
    } else {
        out.push_str("rho,theta,t,re_uin,im_uin,re_ur,im_ur,re_ud,im_ud,re_u,im_u\n");
        let rows: Vec<String> = pts
            .par_iter()
            .map(|&(r, th, t)| {
                let f = at(total(r, th, t, &s.profile, &s.wedge, s.bc, &s.quad), &format!("point rho={r} theta={th} t={t}"))?;
                Ok(format!("{},{},{},{},{},{},{}\n", e(r), e(th), e(t), c(f.u_in), c(f.u_r), c(f.u_d), c(f.u_total)))
            })
            .collect::<Result<_>>()?;
        rows.iter().for_each(|r| out.push_str(r));
    }
    Ok(Output::ok(out))
}

fn sector_name(s: Sector) -> &'static str {
    match s {
        Sector::ReflectionSector1 => "reflection1",
        Sector::ShadowedMiddle => "middle",
        Sector::ReflectionSector2 => "reflection2",
        _ => "boundary",
    }
}

/// Long-time limit of `u_d` at the midpoint of each admissible sector, then
/// the total-field limit.
pub fn limits(s: &Scenario) -> Result<Output> {
    let w = &s.wedge;
    let mids = [(w.phi + w.theta1) / 2.0, (w.theta1 + w.theta2) / 2.0, (w.theta2 + 2.0 * PI) / 2.0];
    let mut out = String::from("sector,theta,re_limit,im_limit\n");
    for th in mids {
        let sector = at(w.admissible_sector(th, s.quad.eps_ray), "sector midpoint")?;
        let l = at(longtime_limit(th, w, s.bc, Complex64::new(1.0, 0.0)), "long-time limit")?;
        writeln!(out, "{},{},{}", sector_name(sector), e(th), c(l))?;
    }
    writeln!(out, "total,,{},{}", e(total_longtime_limit(w, s.bc)), e(0.0))?;
    Ok(Output::ok(out))
}

/// Jumps of `u_d` across both critical rays against `j_k F(t - rho)`.
pub fn jumps(s: &Scenario, tol: f64) -> Result<Output> {
    if !s.profile.is_smooth() {
        bail!("config key `profile.kind`: jump extrapolation needs a smooth profile");
    }
    let pts: Vec<(f64, f64, u8)> =
        s.rho.iter().flat_map(|&r| s.t.iter().flat_map(move |&t| [1u8, 2].map(|k| (r, t, k)))).collect();
    let rows: Vec<(String, f64)> = pts
        .par_iter()
        .map(|&(r, t, k)| {
            let what = format!("rho={r} t={t} k={k}");
            let got = at(jump(r, t, k, &s.profile, &s.wedge, s.bc, &s.quad), &what)?;
            let f = at(eval_profile(&s.profile, t - r), &what)?;
            let expected = f * f64::from(jump_law(k, s.bc));
            let err = (got - expected).norm();
            Ok((format!("{},{},{},{},{},{}\n", e(r), e(t), k, c(got), c(expected), e(err)), err))
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("rho,t,k,re_jump,im_jump,re_expected,im_expected,abs_err\n");
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    rows.iter().for_each(|r| out.push_str(&r.0));
    let failure = (worst > tol).then(|| ValidationFailed(format!("max jump error {worst:.3e} exceeds {tol:.1e}")));
    Ok(Output { text: out, failure })
}

/// Limiting amplitude `A⁰` and the running amplitude at each grid time.
pub fn lap(s: &Scenario) -> Result<Output> {
    let (a0, omega0) = match &s.profile {
        Pulse::HarmonicSwitched { a0, omega0, .. } => (*a0, *omega0),
        _ => bail!("config key `profile.kind`: lap needs kind = \"harmonic\""),
    };
    let pts = grid3(s);
    let limits: Vec<Complex64> = grid2(s)
        .par_iter()
        .map(|&(r, th)| at(limiting_amplitude(r, th, &s.wedge, s.bc, a0, omega0, &s.quad), &format!("rho={r} theta={th}")))
        .collect::<Result<_>>()?;
    let rows: Vec<String> = pts
        .par_iter()
        .enumerate()
        .map(|(i, &(r, th, t))| {
            let lim = limits[i / s.t.len()];
            let a = at(amplitude(r, th, t, &s.profile, &s.wedge, s.bc, &s.quad), &format!("rho={r} theta={th} t={t}"))?;
            Ok(format!("{},{},{},{},{},{}\n", e(r), e(th), e(t), c(lim), c(a), e((a - lim).norm())))
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("rho,theta,t,re_a0,im_a0,re_ad,im_ad,gap\n");
    rows.iter().for_each(|r| out.push_str(r));
    Ok(Output::ok(out))
}

/// Cell-centred samples of `(0, len)` mapped onto `pieces` laid end to end.
fn spread(pieces: &[(f64, f64)], n: usize) -> Vec<f64> {
    let len: f64 = pieces.iter().map(|(a, b)| b - a).sum();
    (0..n)
        .map(|j| {
            let mut x = len * (j as f64 + 0.5) / n as f64;
            for &(a, b) in pieces {
                if x <= b - a {
                    return a + x;
                }
                x -= b - a;
            }
            pieces.last().map_or(0.0, |p| p.1)
        })
        .collect()
}

pub const SOBOLEV_TOL: f64 = 1e-10;
/// Half-width of the band excluded around each critical image.
pub const SOBOLEV_BAND: f64 = 0.05;

/// Compares the closed form against Sobolev's solution on an `nv x nt` grid
/// in `(varphi, tau)`; only meaningful for DD.
pub fn sobolev(s: &Scenario, nv: usize, nt: usize) -> Result<Output> {
    if s.bc != BoundaryKind::DD {
        bail!("config key `bc.kind`: the Sobolev comparison is defined for DD only");
    }
    let cfg = &s.wedge;
    let v = at(SobolevVars::new(1e-3, 0.5, cfg), "Sobolev variables")?;
    let (p1, p2) = v.critical_angles();
    let b = SOBOLEV_BAND;
    let pieces: Vec<(f64, f64)> =
        [(0.0, p1 - b), (p1 + b, p2 - b), (p2 + b, v.alpha1)].into_iter().filter(|(a, z)| z > a).collect();
    let varphis = spread(&pieces, nv);
    let pts: Vec<(f64, f64)> =
        varphis.iter().flat_map(|&ph| (0..nt).map(move |j| (ph, (j as f64 + 0.5) / nt as f64))).collect();
    let rows: Vec<(String, f64)> = pts
        .par_iter()
        .map(|&(ph, tau)| {
            let what = format!("varphi={ph} tau={tau}");
            let u = at(sobolev_u(ph, tau, cfg), &what)?;
            let ours = at(sobolev_total_from_ours(ph, tau, cfg), &what)?;
            let d = (u - ours).norm();
            Ok((format!("{},{},{},{},{}\n", e(ph), e(tau), c(u), c(ours), e(d)), d))
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("varphi,tau,re_sobolev,im_sobolev,re_ours,im_ours,abs_diff\n");
    rows.iter().for_each(|r| out.push_str(&r.0));
    let worst = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    eprintln!("max |U - u| = {worst:.3e} on {nv}x{nt} grid");
    let failure = (worst > SOBOLEV_TOL).then(|| ValidationFailed(format!("max deviation {worst:.3e} exceeds {SOBOLEV_TOL:.0e}")));
    Ok(Output { text: out, failure })
}

pub const STATIONARY_TOL: f64 = 1e-6;
pub const TIME_DOMAIN_TOL: f64 = 1e-4;
pub const RATIO_RANGE: (f64, f64) = (3.5, 4.5);

#[derive(Serialize)]
struct ValidateReport {
    bc: BoundaryKind,
    omega: [f64; 2],
    stationary: Report,
    time_domain: Option<TimeDomainReport>,
    helmholtz: HelmholtzCheck,
    pass: bool,
}

#[derive(Serialize)]
struct TimeDomainReport {
    t: f64,
    report: Report,
}

#[derive(Serialize)]
struct HelmholtzCheck {
    point: [f64; 2],
    steps: [f64; 2],
    residuals: [f64; 2],
    ratio: f64,
}

/// Boundary-trace residuals (stationary and, for smooth profiles, time
/// domain) and the Helmholtz convergence ratio of `S_s` at `(-2, 0)`.
pub fn validate(s: &Scenario) -> Result<Output> {
    let omega = s.omega.unwrap_or(Complex64::new(1.0, 0.5));
    let cfg = &s.wedge;
    let stationary = at(boundary_report(cfg, s.bc, &BoundaryMode::Stationary { omega }, &s.quad), "stationary report")?;
    let time_domain = if s.profile.is_smooth() {
        let t = s.t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mode = BoundaryMode::TimeDomain { profile: s.profile.clone(), t };
        Some(TimeDomainReport { t, report: at(boundary_report(cfg, s.bc, &mode, &s.quad), "time-domain report")? })
    } else {
        None
    };
    let field = |y: [f64; 2]| {
        let th = y[1].atan2(y[0]).rem_euclid(2.0 * PI);
        s_s(y[0].hypot(y[1]), th, omega, cfg, s.bc, &s.quad)
    };
    let (point, steps) = ([-2.0, 0.0], [0.1, 0.05]);
    let r0 = at(helmholtz_residual(field, point, omega, steps[0]), "Helmholtz residual")?;
    let r1 = at(helmholtz_residual(field, point, omega, steps[1]), "Helmholtz residual")?;
    let ratio = r0 / r1;
    let mut failures = Vec::new();
    for (name, r) in [("stationary face1", stationary.face1_residual()), ("stationary face2", stationary.face2_residual())] {
        if r.is_nan() || r > STATIONARY_TOL {
            failures.push(format!("{name} residual {r:.3e} > {STATIONARY_TOL:.0e}"));
        }
    }
    if let Some(td) = &time_domain {
        for (name, r) in [("time-domain face1", td.report.face1_residual()), ("time-domain face2", td.report.face2_residual())] {
            if r.is_nan() || r > TIME_DOMAIN_TOL {
                failures.push(format!("{name} residual {r:.3e} > {TIME_DOMAIN_TOL:.0e}"));
            }
        }
    }
    if !(RATIO_RANGE.0..=RATIO_RANGE.1).contains(&ratio) {
        failures.push(format!("Helmholtz ratio {ratio:.3} outside [{}, {}]", RATIO_RANGE.0, RATIO_RANGE.1));
    }
    let report = ValidateReport {
        bc: s.bc,
        omega: [omega.re, omega.im],
        stationary,
        time_domain,
        helmholtz: HelmholtzCheck { point, steps, residuals: [r0, r1], ratio },
        pass: failures.is_empty(),
    };
    let text = serde_json::to_string_pretty(&report).context("serializing report")? + "\n";
    let failure = (!failures.is_empty()).then(|| ValidationFailed(failures.join("; ")));
    Ok(Output { text, failure })
}

/// `S_r`, `S_d` and `S_s` on the `rho x theta` grid.
pub fn spectral(s: &Scenario) -> Result<Output> {
    let omega = s.omega.ok_or_else(|| anyhow!("config key `spectral.omega` is required"))?;
    let rows: Vec<String> = grid2(s)
        .par_iter()
        .map(|&(r, th)| {
            let what = format!("rho={r} theta={th}");
            let sr = at(s_r(r, th, omega, &s.wedge, s.bc), &what)?;
            let sd = at(s_d(r, th, omega, &s.wedge, s.bc, &s.quad), &what)?;
            Ok(format!("{},{},{},{},{}\n", e(r), e(th), c(sr), c(sd), c(sr + sd)))
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("rho,theta,re_sr,im_sr,re_sd,im_sd,re_ss,im_ss\n");
    rows.iter().for_each(|r| out.push_str(r));
    Ok(Output::ok(out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_avoids_bands() {
        let v = spread(&[(0.0, 1.0), (2.0, 3.0)], 4);
        assert_eq!(v, vec![0.25, 0.75, 2.25, 2.75]);
    }
}
