//! Wedge and incidence geometry.
//!
//! The scatterer occupies the angles `[0, phi]`; waves live in the exterior
//! angle `Q` of opening `Phi = 2pi - phi`. The face `Q1` is parameterized as
//! `theta = 2pi` so that every angular formula is stated on `[phi, 2pi]`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{lit, to_f64, Real};

/// Default half-width of the exclusion band around the critical rays.
pub const DEFAULT_EPS_RAY: f64 = 1e-6;

/// Boundary operators on the two faces.
///
/// `DN` is Dirichlet on the face `theta = phi` (`Q2`) and Neumann on the face
/// `theta = 2pi` (`Q1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundaryKind {
    DD,
    NN,
    DN,
}

impl BoundaryKind {
    pub const ALL: [BoundaryKind; 3] = [BoundaryKind::DD, BoundaryKind::NN, BoundaryKind::DN];

    /// Whether face `Q1` (`theta = 2pi`) carries a Dirichlet condition.
    pub fn face1_dirichlet(self) -> bool {
        matches!(self, BoundaryKind::DD)
    }

    /// Whether face `Q2` (`theta = phi`) carries a Dirichlet condition.
    pub fn face2_dirichlet(self) -> bool {
        matches!(self, BoundaryKind::DD | BoundaryKind::DN)
    }

    /// Signs `(sigma1, sigma2)` of the mirror images in the two reflection sectors.
    pub fn reflection_signs(self) -> (i8, i8) {
        match self {
            BoundaryKind::DD => (-1, -1),
            BoundaryKind::NN => (1, 1),
            BoundaryKind::DN => (-1, 1),
        }
    }
}

impl fmt::Display for BoundaryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BoundaryKind::DD => "DD",
            BoundaryKind::NN => "NN",
            BoundaryKind::DN => "DN",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for BoundaryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "DD" => Ok(BoundaryKind::DD),
            "NN" => Ok(BoundaryKind::NN),
            "DN" => Ok(BoundaryKind::DN),
            other => Err(Error::DomainError(format!("unknown boundary kind {other:?}"))),
        }
    }
}

/// Angular sector of a direction `theta` relative to the wedge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    /// `(phi, theta1)`: incident plus the image reflected by face `Q2`.
    ReflectionSector1,
    /// `(theta1, theta2)`: incident wave only.
    ShadowedMiddle,
    /// `(theta2, 2pi)`: incident plus the image reflected by face `Q1`.
    ReflectionSector2,
    CriticalRay(u8),
    Face(u8),
    InsideWedge,
}

/// Geometry of the wedge and the incident direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeConfig<T> {
    pub phi: T,
    pub alpha: T,
    /// Exterior opening `2pi - phi`.
    pub big_phi: T,
    pub theta1: T,
    pub theta2: T,
    /// `pi / (2 Phi)`.
    pub q: T,
    pub n0: [T; 2],
    pub n1: [T; 2],
    pub n2: [T; 2],
}

impl<T: Real> WedgeConfig<T> {
    /// Builds the configuration for wedge opening `phi` and incidence `alpha`.
    pub fn new(phi: T, alpha: T) -> Result<Self> {
        let pi = T::PI();
        let half_pi = T::FRAC_PI_2();
        if !(phi > T::zero() && phi < pi) {
            return Err(Error::WedgeAngleOutOfRange { phi: to_f64(phi) });
        }
        let lower = (phi - half_pi).max(T::zero());
        let upper = half_pi.min(phi);
        if !(alpha > lower && alpha < upper) {
            return Err(Error::IncidenceOutOfRange { phi: to_f64(phi), alpha: to_f64(alpha) });
        }
        let two = lit::<T>(2.0);
        let two_pi = two * pi;
        let big_phi = two_pi - phi;
        let theta1 = two * phi - alpha;
        let theta2 = two_pi - alpha;
        let unit = |a: T| [a.cos(), a.sin()];
        Ok(WedgeConfig {
            phi,
            alpha,
            big_phi,
            theta1,
            theta2,
            q: pi / (two * big_phi),
            n0: unit(alpha),
            n1: unit(theta1),
            n2: unit(theta2),
        })
    }

    /// Critical direction `theta_k`, `k ∈ {1, 2}`.
    pub fn theta_k(&self, k: u8) -> T {
        if k == 1 {
            self.theta1
        } else {
            self.theta2
        }
    }

    /// Classifies a direction `theta ∈ [0, 2pi]`.
    pub fn classify(&self, theta: T, eps_ray: T) -> Sector {
        let two_pi = T::TAU();
        if theta < self.phi {
            return Sector::InsideWedge;
        }
        if theta == self.phi {
            return Sector::Face(2);
        }
        if theta >= two_pi {
            return Sector::Face(1);
        }
        if (theta - self.theta1).abs() <= eps_ray {
            return Sector::CriticalRay(1);
        }
        if (theta - self.theta2).abs() <= eps_ray {
            return Sector::CriticalRay(2);
        }
        if theta < self.theta1 {
            Sector::ReflectionSector1
        } else if theta < self.theta2 {
            Sector::ShadowedMiddle
        } else {
            Sector::ReflectionSector2
        }
    }

    /// Which of the three open sectors (or their closures at the faces) `theta` belongs to.
    ///
    /// Faces are folded into the adjacent reflection sector. Fails on critical
    /// rays and outside `[phi, 2pi]`.
    pub fn admissible_sector(&self, theta: T, eps_ray: T) -> Result<Sector> {
        match self.classify(theta, eps_ray) {
            Sector::CriticalRay(k) => Err(Error::CriticalRay {
                theta: to_f64(theta),
                k,
                eps: to_f64(eps_ray),
            }),
            Sector::InsideWedge => Err(Error::OutsideDomain { theta: to_f64(theta) }),
            Sector::Face(2) => Ok(Sector::ReflectionSector1),
            Sector::Face(_) => Ok(Sector::ReflectionSector2),
            s => Ok(s),
        }
    }

    /// Fails if `theta` is within `eps_ray` of a critical ray or outside `[phi, 2pi]`.
    pub fn check_admissible(&self, theta: T, eps_ray: T) -> Result<()> {
        self.admissible_sector(theta, eps_ray).map(|_| ())
    }

    /// `n0 · y` for the point `(rho cos theta, rho sin theta)`.
    pub fn incident_phase(&self, rho: T, theta: T) -> T {
        rho * (theta - self.alpha).cos()
    }
}

/// Convenience wrapper mirroring [`WedgeConfig::new`].
pub fn make_wedge<T: Real>(phi: T, alpha: T) -> Result<WedgeConfig<T>> {
    WedgeConfig::new(phi, alpha)
}

/// Convenience wrapper mirroring [`WedgeConfig::classify`].
pub fn classify<T: Real>(theta: T, cfg: &WedgeConfig<T>, eps_ray: T) -> Sector {
    cfg.classify(theta, eps_ray)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn reference() -> WedgeConfig<f64> {
        WedgeConfig::new(PI / 3.0, PI / 4.0).unwrap()
    }

    #[test]
    fn reference_wedge_derived_angles() {
        let c = reference();
        assert!((c.big_phi - 5.0 * PI / 3.0).abs() < 1e-15);
        assert!((c.q - 0.3).abs() < 1e-15);
        assert!((c.theta1 - 5.0 * PI / 12.0).abs() < 1e-15);
        assert!((c.theta2 - 7.0 * PI / 4.0).abs() < 1e-15);
    }

    #[test]
    fn right_angle_wedge() {
        let c = WedgeConfig::new(PI / 2.0, PI / 4.0).unwrap();
        assert!((c.big_phi - 1.5 * PI).abs() < 1e-15);
        assert!((c.q - 1.0 / 3.0).abs() < 1e-15);
        assert!((c.theta1 - 0.75 * PI).abs() < 1e-15);
        assert!((c.theta2 - 1.75 * PI).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_angles() {
        assert!(matches!(
            WedgeConfig::new(PI / 3.0, PI / 2.0),
            Err(Error::IncidenceOutOfRange { .. })
        ));
        assert!(matches!(WedgeConfig::new(PI, 0.1), Err(Error::WedgeAngleOutOfRange { .. })));
        assert!(matches!(WedgeConfig::new(0.0, 0.1), Err(Error::WedgeAngleOutOfRange { .. })));
        // obtuse wedge: alpha must exceed phi - pi/2
        assert!(WedgeConfig::new(2.5, 2.5 - PI / 2.0).is_err());
        assert!(WedgeConfig::new(2.5, 1.2).is_ok());
    }

    #[test]
    fn classify_reference_examples() {
        let c = reference();
        let eps = DEFAULT_EPS_RAY;
        assert_eq!(c.classify(PI, eps), Sector::ShadowedMiddle);
        assert_eq!(c.classify(1.2, eps), Sector::ReflectionSector1);
        assert_eq!(c.classify(c.theta1, eps), Sector::CriticalRay(1));
        assert_eq!(c.classify(c.theta2 + 0.5 * eps, eps), Sector::CriticalRay(2));
        assert_eq!(c.classify(6.0, eps), Sector::ReflectionSector2);
        assert_eq!(c.classify(0.5, eps), Sector::InsideWedge);
        assert_eq!(c.classify(c.phi, eps), Sector::Face(2));
        assert_eq!(c.classify(2.0 * PI, eps), Sector::Face(1));
    }

    #[test]
    fn single_precision_instantiation() {
        let c = WedgeConfig::<f32>::new(std::f32::consts::PI / 3.0, std::f32::consts::FRAC_PI_4).unwrap();
        assert!((c.q - 0.3).abs() < 1e-6);
    }

    fn valid_angles() -> impl Strategy<Value = (f64, f64)> {
        (1e-3..PI - 1e-3, 0.0..1.0f64).prop_filter_map("empty incidence range", |(phi, u)| {
            let lo = (phi - PI / 2.0).max(0.0);
            let hi = (PI / 2.0).min(phi);
            let alpha = lo + (hi - lo) * (0.001 + 0.998 * u);
            (alpha > lo && alpha < hi).then_some((phi, alpha))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn derived_angles_ordered((phi, alpha) in valid_angles()) {
            let c = WedgeConfig::new(phi, alpha).unwrap();
            prop_assert!(c.phi < c.theta1 && c.theta1 < c.theta2 && c.theta2 < 2.0 * PI);
            prop_assert!(c.q > 0.25 && c.q < 0.5);
            prop_assert!(c.big_phi > PI && c.big_phi < 2.0 * PI);
        }
    }

    proptest! {
        #[test]
        fn reflected_direction_phase(rho in 0.0..10.0f64, theta in 0.0..(2.0 * PI)) {
            let c = reference();
            for (n, th) in [(c.n1, c.theta1), (c.n2, c.theta2)] {
                let dot = n[0] * rho * theta.cos() + n[1] * rho * theta.sin();
                prop_assert!((dot - rho * (theta - th).cos()).abs() < 1e-12);
            }
        }
    }
}
