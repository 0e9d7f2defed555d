//! Static-equilibrium interaction force model.
//!
//! With the vehicle resting against the surface and the arm held rigidly,
//! the composite body is in static equilibrium. Force balance along the
//! inertial Z and Y axes
//!
//! ```text
//! T_sum cos(phi0) = m_E g + m_B g + f_E cos(beta0)
//! T_sum sin(phi0) = f_E sin(beta0)
//! ```
//!
//! fixes the contact force `f_E` and total thrust `T_sum` in closed form. The
//! torque balance about the vehicle CoG only determines the propeller torque
//! the attitude loop has to supply and is reported as a diagnostic.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::PoseConfig;

/// Joint-angle magnitude below which a pose is treated as singular [rad].
pub const SINGULAR_ALPHA: f64 = 1e-6;

/// Relative offset of the last envelope grid point from `beta0`.
pub const SWEEP_EPSILON: f64 = 1e-3;

/// Masses and moment arms entering the equilibrium balance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassGeometry {
    /// Vehicle mass [kg].
    pub m_b: f64,
    /// Manipulator mass [kg].
    pub m_e: f64,
    /// Gravitational acceleration [m/s²].
    pub g: f64,
    /// Distance from the vehicle CoG to the contact force line [m].
    pub l_e: f64,
    /// Distance from the vehicle CoG to the manipulator gravity line [m].
    pub l_ge: f64,
}

impl MassGeometry {
    pub fn new(m_b: f64, m_e: f64, g: f64, l_e: f64, l_ge: f64) -> Result<Self> {
        let ok = m_b > 0.0 && m_e >= 0.0 && g > 0.0 && l_e >= 0.0 && l_ge >= 0.0;
        if !ok || ![m_b, m_e, g, l_e, l_ge].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidConfig(format!(
                "mass geometry out of range: m_B={m_b}, m_E={m_e}, g={g}, l_E={l_e}, l_GE={l_ge}"
            )));
        }
        Ok(Self {
            m_b,
            m_e,
            g,
            l_e,
            l_ge,
        })
    }

    /// Mass geometry with the whole weight on the vehicle and zero moment arms.
    pub fn from_total_weight(g_t: f64, g: f64) -> Result<Self> {
        Self::new(g_t / g, 0.0, g, 0.0, 0.0)
    }

    pub fn total_mass(&self) -> f64 {
        self.m_b + self.m_e
    }

    /// Total weight `G_t = (m_B + m_E) g`.
    pub fn g_t(&self) -> f64 {
        self.total_mass() * self.g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EquilibriumSolution {
    /// Contact force magnitude along `Z_E` [N].
    pub f_e: f64,
    /// Component of the contact force along inertial `-Z` [N].
    pub f_e_z: f64,
    /// Total thrust [N].
    pub t_sum: f64,
    /// Propeller torque about X in the positive-angle convention, `f_E l_E - m_E g l_GE` [N·m].
    /// The signed roll moment for a pose is `k_s * tau_sum_x`.
    pub tau_sum_x: f64,
}

/// `G_t sin(phi0) / sin(alpha0)` with no singularity guard.
pub fn push_force(phi0: f64, alpha0: f64, g_t: f64) -> f64 {
    g_t * phi0.sin() / alpha0.sin()
}

/// `G_t sin(beta0) / sin(alpha0)` with no singularity guard.
pub fn total_thrust(beta0: f64, alpha0: f64, g_t: f64) -> f64 {
    g_t * beta0.sin() / alpha0.sin()
}

/// Closed-form contact force, thrust and propeller torque at equilibrium.
pub fn equilibrium_forces(config: &PoseConfig, mg: &MassGeometry) -> Result<EquilibriumSolution> {
    let (beta0, phi0, alpha0) = (config.beta0(), config.phi0(), config.alpha0());
    if beta0 == 0.0 {
        return Err(Error::InvalidConfig(
            "horizontal surface: force is thrust-limited, not equilibrium-determined".into(),
        ));
    }
    if alpha0 < SINGULAR_ALPHA {
        return Err(Error::SingularConfig { alpha0 });
    }
    if phi0 >= beta0 {
        return Err(Error::InvalidConfig(format!(
            "roll magnitude {phi0} must be below surface inclination {beta0}"
        )));
    }
    let g_t = mg.g_t();
    let f_e = push_force(phi0, alpha0, g_t);
    Ok(EquilibriumSolution {
        f_e,
        f_e_z: f_e * beta0.cos(),
        t_sum: total_thrust(beta0, alpha0, g_t),
        tau_sum_x: f_e * mg.l_e - mg.m_e * mg.g * mg.l_ge,
    })
}

/// Raw residuals of the three balance equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Residual {
    /// Inertial Z force balance [N].
    pub z: f64,
    /// Inertial Y force balance [N].
    pub y: f64,
    /// Torque balance about X [N·m].
    pub x: f64,
}

impl Residual {
    pub fn max_abs(&self) -> f64 {
        self.z.abs().max(self.y.abs()).max(self.x.abs())
    }
}

pub fn residual(config: &PoseConfig, mg: &MassGeometry, sol: &EquilibriumSolution) -> Residual {
    let (beta0, phi0) = (config.beta0(), config.phi0());
    Residual {
        z: sol.t_sum * phi0.cos() - mg.m_e * mg.g - mg.m_b * mg.g - sol.f_e * beta0.cos(),
        y: sol.t_sum * phi0.sin() - sol.f_e * beta0.sin(),
        x: sol.tau_sum_x + mg.m_e * mg.g * mg.l_ge - sol.f_e * mg.l_e,
    }
}

/// Angular distance `alpha0 = beta0 - phi0` to the singular pose.
pub fn singularity_margin(config: &PoseConfig) -> f64 {
    config.beta0() - config.phi0()
}

/// One row of an envelope sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeRow {
    pub phi0: f64,
    pub f_e: f64,
    pub f_e_z: f64,
    pub t_sum: f64,
}

/// Force profile over `phi0 ∈ [0, beta0)` on a uniform grid whose last point
/// sits at `beta0 (1 - SWEEP_EPSILON)`.
pub fn envelope_sweep(beta0: f64, mg: &MassGeometry, n_points: usize) -> Result<Vec<EnvelopeRow>> {
    if !(beta0 > 0.0 && beta0 <= std::f64::consts::FRAC_PI_2 + 1e-12) {
        return Err(Error::InvalidSurface(format!(
            "envelope requires beta0 in (0, pi/2], got {beta0}"
        )));
    }
    if n_points < 2 {
        return Err(Error::InvalidConfig("envelope needs at least two grid points".into()));
    }
    let last = beta0 * (1.0 - SWEEP_EPSILON);
    (0..n_points)
        .map(|i| {
            let phi0 = last * i as f64 / (n_points - 1) as f64;
            let pose = PoseConfig::from_magnitudes(beta0, phi0, 1.0)?;
            let sol = equilibrium_forces(&pose, mg)?;
            Ok(EnvelopeRow {
                phi0,
                f_e: sol.f_e,
                f_e_z: sol.f_e_z,
                t_sum: sol.t_sum,
            })
        })
        .collect()
}
