//! Four-rotor mixing and per-rotor saturation.
//!
//! Rotor `i` sits at angle `base + (i - 1) * 90°` from body X_B, at distance
//! `rotor_arm`, spinning with sign `(-1)^(i+1)`. Its thrust `T_i` points along
//! body Z_B and its drag moment is `(k_am / k_af) T_i` about Z_B.

use nalgebra::{Matrix4, Rotation3, Vector3, Vector4};
use serde::{Deserialize, Serialize};

use crate::dynamics::UamParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotorLayout {
    /// Rotors 1 and 3 on ±Y_B, 2 and 4 on ∓X_B.
    #[default]
    Plus,
    /// Rotors on the diagonals, 45° off the body axes.
    Cross,
}

impl RotorLayout {
    fn base_angle(self) -> f64 {
        match self {
            RotorLayout::Plus => std::f64::consts::FRAC_PI_2,
            RotorLayout::Cross => std::f64::consts::FRAC_PI_4,
        }
    }
}

/// Body-frame rotor center positions `(x, y)`.
pub fn rotor_positions(params: &UamParams) -> [(f64, f64); 4] {
    let base = params.layout.base_angle();
    std::array::from_fn(|i| {
        let a = base + i as f64 * std::f64::consts::FRAC_PI_2;
        (params.rotor_arm * a.cos(), params.rotor_arm * a.sin())
    })
}

fn spin_sign(i: usize) -> f64 {
    // (-1)^(i+1) with one-based rotor index i + 1
    if i % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Maps rotor thrusts to `[T_sum, M_X, M_Y, M_Z]` in the body frame.
pub fn mixing_matrix(params: &UamParams) -> Matrix4<f64> {
    let drag = params.k_am / params.k_af;
    let pos = rotor_positions(params);
    let mut a = Matrix4::zeros();
    for (i, &(x, y)) in pos.iter().enumerate() {
        a[(0, i)] = 1.0;
        // r × (0, 0, T) = (y T, -x T, 0)
        a[(1, i)] = y;
        a[(2, i)] = -x;
        a[(3, i)] = spin_sign(i) * drag;
    }
    a
}

/// Per-rotor thrusts and the speeds that produce them.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotorCommand {
    pub thrusts: [f64; 4],
    pub speeds: [f64; 4],
}

impl RotorCommand {
    pub fn from_thrusts(thrusts: [f64; 4], k_af: f64) -> Self {
        Self {
            thrusts,
            speeds: thrusts.map(|t| (t / k_af).sqrt()),
        }
    }

    /// Aerodynamic drag moment magnitudes `k_am Ω_i²`.
    pub fn drag_moments(&self, k_am: f64) -> [f64; 4] {
        self.speeds.map(|w| k_am * w * w)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Allocation {
    pub command: RotorCommand,
    pub commanded_t_sum: f64,
    pub commanded_moments: [f64; 3],
    pub achieved_t_sum: f64,
    pub achieved_m_x: f64,
    /// True when at least one rotor hit a limit.
    pub saturated: bool,
}

/// Allocates a thrust/moment demand to the rotors and clamps each rotor to
/// `[0, t_i_max]`. Saturation is reported, never redistributed.
pub fn allocate(t_sum_cmd: f64, m_cmd: [f64; 3], params: &UamParams) -> Allocation {
    let a = mixing_matrix(params);
    let inv = a
        .try_inverse()
        .expect("rotor mixing matrix is invertible for positive rotor_arm and k_am");
    let raw = inv * Vector4::new(t_sum_cmd, m_cmd[0], m_cmd[1], m_cmd[2]);
    let mut saturated = false;
    let thrusts: [f64; 4] = std::array::from_fn(|i| {
        let t = raw[i];
        if t < 0.0 || t > params.t_i_max {
            saturated = true;
        }
        t.clamp(0.0, params.t_i_max)
    });
    let command = RotorCommand::from_thrusts(thrusts, params.k_af);
    let achieved = a * Vector4::from(thrusts);
    Allocation {
        command,
        commanded_t_sum: t_sum_cmd,
        commanded_moments: m_cmd,
        achieved_t_sum: achieved[0],
        achieved_m_x: achieved[1],
        saturated,
    }
}

/// Body-frame moments of a rotor command, with drag from the rotor speeds.
pub fn body_moments(cmd: &RotorCommand, params: &UamParams) -> Vector3<f64> {
    let drag = cmd.drag_moments(params.k_am);
    rotor_positions(params)
        .iter()
        .enumerate()
        .fold(Vector3::zeros(), |acc, (i, &(x, y))| {
            let thrust = Vector3::new(0.0, 0.0, cmd.thrusts[i]);
            acc + Vector3::new(x, y, 0.0).cross(&thrust) + Vector3::z() * (spin_sign(i) * drag[i])
        })
}

/// Total thrust magnitude and inertial X torque of a rotor command at roll `phi`.
pub fn achieved_wrench(cmd: &RotorCommand, phi: f64, params: &UamParams) -> (f64, f64) {
    let m_inertial = Rotation3::from_axis_angle(&Vector3::x_axis(), phi) * body_moments(cmd, params);
    (cmd.thrusts.iter().sum(), m_inertial.x)
}
