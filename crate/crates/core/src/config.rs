use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest supported ratio of sphere radius to sensing radius.
pub const MIN_RADIUS_FACTOR: f64 = 5.0;

/// Deployment parameters: sphere radius, sensing and communication radii
/// (great-circle lengths) and the node intensity per unit area.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NetworkConfig {
    pub radius: f64,
    pub sensing_radius: f64,
    pub comm_radius: f64,
    pub intensity: f64,
}

impl NetworkConfig {
    pub fn new(radius: f64, sensing_radius: f64, comm_radius: f64, intensity: f64) -> Result<Self> {
        let cfg = Self {
            radius,
            sensing_radius,
            comm_radius,
            intensity,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if !(self.radius.is_finite() && self.radius > 0.0) {
            return bad(format!("sphere radius must be positive, got {}", self.radius));
        }
        if !(self.sensing_radius.is_finite() && self.sensing_radius > 0.0) {
            return bad(format!(
                "sensing radius must be positive, got {}",
                self.sensing_radius
            ));
        }
        if !(self.comm_radius > 0.0 && self.comm_radius <= self.radius * PI / 4.0) {
            return bad(format!(
                "communication radius {} outside (0, R*pi/4]",
                self.comm_radius
            ));
        }
        if !(self.intensity.is_finite() && self.intensity >= 0.0) {
            return bad(format!("intensity must be >= 0, got {}", self.intensity));
        }
        if self.radius < MIN_RADIUS_FACTOR * self.sensing_radius * (1.0 - 1e-12) {
            return bad(format!(
                "sphere radius {} below {}x sensing radius {}",
                self.radius, MIN_RADIUS_FACTOR, self.sensing_radius
            ));
        }
        Ok(())
    }

    pub fn with_intensity(&self, intensity: f64) -> Self {
        Self { intensity, ..*self }
    }

    /// Angular sensing radius `R_s / R`.
    pub fn sensing_angle(&self) -> f64 {
        self.sensing_radius / self.radius
    }

    /// Angular communication radius `R_c / R`.
    pub fn comm_angle(&self) -> f64 {
        self.comm_radius / self.radius
    }

    /// `R_c / R_s`.
    pub fn gamma(&self) -> f64 {
        self.comm_radius / self.sensing_radius
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(NetworkConfig::new(100.0, 10.0, 30.0, 0.01).is_ok());
        assert!(NetworkConfig::new(50.0, 10.0, 30.0, 0.0).is_ok());
        assert!(NetworkConfig::new(40.0, 10.0, 20.0, 0.01).is_err());
        assert!(NetworkConfig::new(100.0, 10.0, 90.0, 0.01).is_err());
        assert!(NetworkConfig::new(100.0, 10.0, 30.0, -1.0).is_err());
        assert!(NetworkConfig::new(100.0, 0.0, 30.0, 0.1).is_err());
        assert!(NetworkConfig::new(100.0, 10.0, 0.0, 0.1).is_err());
    }
}
