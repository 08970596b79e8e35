use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

/// Which form of the model equations is advanced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formulation {
    /// Plain system with the Galilean curl term in the `J` equation.
    Original,
    /// Adds the symmetrizing curl multiple to the momentum equation.
    GodunovPowell,
    /// Augmented system with the `psi`/`phi` curl-cleaning subsystem.
    Glm,
    /// `J` on vertices, updated through the compatible corner gradient.
    CurlFree,
}

impl Formulation {
    pub const ALL: [Formulation; 4] = [
        Formulation::Original,
        Formulation::GodunovPowell,
        Formulation::Glm,
        Formulation::CurlFree,
    ];

    /// Number of cell-centered components carried by this formulation.
    pub fn ncomp(self) -> usize {
        match self {
            Formulation::Original | Formulation::GodunovPowell => 7,
            Formulation::Glm => 11,
            Formulation::CurlFree => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Formulation::Original => "Original",
            Formulation::GodunovPowell => "GodunovPowell",
            Formulation::Glm => "GLM",
            Formulation::CurlFree => "CurlFree",
        }
    }
}

impl fmt::Display for Formulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownFormulation;

impl fmt::Display for UnknownFormulation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected one of Original, GodunovPowell, GLM, CurlFree")
    }
}

impl FromStr for Formulation {
    type Err = UnknownFormulation;

    fn from_str(s: &str) -> core::result::Result<Self, Self::Err> {
        Formulation::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or(UnknownFormulation)
    }
}

/// Energy potential and cleaning parameters.
///
/// The internal energy is isentropic, `e(rho) = k0 rho^(gamma - 1) / (gamma - 1)`,
/// and `c0` scales the `J` contribution `c0^2 |J|^2 / 2` to the specific energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub c0: f64,
    pub k0: f64,
    pub gamma: f64,
    /// Curl-cleaning speed.
    pub a_c: f64,
    /// Divergence-cleaning speed of the `psi` field.
    pub a_d: f64,
    pub eps_c: f64,
    pub eps_d: f64,
    pub cfl: f64,
}

pub const DEFAULT_CLEANING_SPEED: f64 = 5.0;

/// Ratio between damping rate and cleaning speed used when no damping is given.
pub const DAMPING_PER_SPEED: f64 = 0.1;

impl Default for ModelParams {
    fn default() -> Self {
        Self::with_cleaning_speed(DEFAULT_CLEANING_SPEED)
    }
}

impl ModelParams {
    /// Defaults with `a_d = a_c` and both damping rates tied to `a_c`.
    pub fn with_cleaning_speed(a_c: f64) -> Self {
        Self {
            c0: 1.0,
            k0: 1.0,
            gamma: 2.0,
            a_c,
            a_d: a_c,
            eps_c: DAMPING_PER_SPEED * a_c,
            eps_d: DAMPING_PER_SPEED * a_c,
            cfl: 0.45,
        }
    }

    pub fn validate(&self, formulation: Formulation) -> Result<()> {
        let check = |name: &'static str, value: f64, ok: bool| {
            if ok && value.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter { name, value })
            }
        };
        check("c0", self.c0, self.c0 > 0.0)?;
        check("k0", self.k0, self.k0 > 0.0)?;
        check("gamma", self.gamma, self.gamma > 1.0)?;
        check("cfl", self.cfl, self.cfl > 0.0 && self.cfl < 1.0)?;
        if formulation == Formulation::Glm {
            check("a_c", self.a_c, self.a_c > 0.0)?;
            check("a_d", self.a_d, self.a_d > 0.0)?;
            check("eps_c", self.eps_c, self.eps_c >= 0.0)?;
            check("eps_d", self.eps_d, self.eps_d >= 0.0)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn formulation_names_round_trip() {
        for f in Formulation::ALL {
            assert_eq!(f.name().parse::<Formulation>(), Ok(f));
        }
        assert_eq!("glm".parse::<Formulation>(), Ok(Formulation::Glm));
        assert!("Maxwell".parse::<Formulation>().is_err());
    }

    #[test]
    fn defaults_tie_damping_to_cleaning_speed() {
        let p = ModelParams::with_cleaning_speed(5.0);
        assert_eq!(p.eps_c, 0.5);
        assert_eq!(p.eps_d, 0.5);
        assert_eq!((p.k0, p.gamma, p.c0, p.cfl), (1.0, 2.0, 1.0, 0.45));
    }

    #[test]
    fn cleaning_parameters_only_matter_for_glm() {
        let p = ModelParams {
            a_c: -1.0,
            ..ModelParams::default()
        };
        assert!(p.validate(Formulation::Original).is_ok());
        assert_eq!(
            p.validate(Formulation::Glm),
            Err(Error::InvalidParameter {
                name: "a_c",
                value: -1.0
            })
        );
    }
}
