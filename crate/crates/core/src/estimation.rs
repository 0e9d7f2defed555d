//! External wrench estimation from IMU data and the contact detector.
//!
//! The observer's nominal model is the bare vehicle: mass `m_B`, thrust
//! along body Z, and the composite roll inertia. Anything else acting on the
//! vehicle, the arm weight included, shows up in the total external wrench.
//! Subtracting the arm-gravity disturbance `D` leaves the interaction wrench,
//! which is projected on `-Z_E` to get the pushing force.

use serde::Serialize;

use crate::dynamics::{body_to_inertial, PlanarState, StateDerivative, UamParams, Wrench2D};
use crate::geometry::{rotation, z_axis, Vec2};

/// One accelerometer + gyro sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ImuSample {
    /// Specific force at the vehicle CoG in body axes [m/s²].
    pub specific_force: Vec2,
    /// Roll rate [rad/s].
    pub omega: f64,
}

impl ImuSample {
    /// Ideal sample from the true state and its derivative.
    pub fn ideal(state: &PlanarState, deriv: &StateDerivative, g: f64) -> Self {
        let s_inertial = deriv.dv + Vec2::new(0.0, g);
        Self {
            specific_force: rotation(state.phi).transpose() * s_inertial,
            omega: state.omega,
        }
    }
}

/// Thrust and roll torque last applied by the rotors.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct AppliedInputs {
    pub t_sum: f64,
    pub tau_x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct WrenchEstimate {
    /// External wrench at the vehicle CoG, inertial frame.
    pub total_ext: Wrench2D,
    /// `total_ext - D`.
    pub interaction: Wrench2D,
    /// Interaction force along `-Z_E` [N].
    pub f_e_est: f64,
    /// Time derivative of the filtered `f_e_est` [N/s].
    pub f_e_est_rate: f64,
}

/// Arm-gravity disturbance on the vehicle at roll `phi`.
pub fn arm_gravity_disturbance(phi: f64, alpha: f64, params: &UamParams) -> Wrench2D {
    Wrench2D::new(0.0, -params.m_e * params.g, params.arm_gravity_torque(phi, alpha))
}

/// Component of `f` along `-Z_E` for an end-effector at orientation `phi_e`.
pub fn push_component(f: &Vec2, phi_e: f64) -> f64 {
    f.dot(&(-z_axis(phi_e)))
}

/// First-order residual observer.
///
/// Force channel: `m_B a - T R_B e3 + m_B g e3`, computed from the specific
/// force as `m_B s - T R_B e3`. Torque channel: `I ω̇ - τ_X` with `ω̇`
/// differenced from consecutive gyro samples. Both are low-passed with
/// bandwidth `k_obs`, so a constant wrench is tracked with time constant
/// `1 / k_obs`.
#[derive(Debug, Clone)]
pub struct WrenchObserver {
    k_obs: f64,
    total: Wrench2D,
    prev: Option<(f64, f64)>,
}

impl WrenchObserver {
    pub fn new(k_obs: f64) -> Self {
        Self {
            k_obs,
            total: Wrench2D::zero(),
            prev: None,
        }
    }

    pub fn k_obs(&self) -> f64 {
        self.k_obs
    }

    pub fn reset(&mut self) {
        self.total = Wrench2D::zero();
        self.prev = None;
    }

    pub fn step(
        &mut self,
        imu: &ImuSample,
        u: &AppliedInputs,
        phi: f64,
        alpha: f64,
        params: &UamParams,
        dt: f64,
    ) -> WrenchEstimate {
        let gain = 1.0 - (-self.k_obs * dt).exp();
        let raw_f = body_to_inertial(phi, &imu.specific_force) * params.m_b - z_axis(phi) * u.t_sum;
        self.total.f += (raw_f - self.total.f) * gain;
        if let Some((prev_omega, prev_tau)) = self.prev {
            let raw_tau = params.roll_inertia(alpha) * (imu.omega - prev_omega) / dt - prev_tau;
            self.total.tau_x += (raw_tau - self.total.tau_x) * gain;
        }
        self.prev = Some((imu.omega, u.tau_x));

        let d = arm_gravity_disturbance(phi, alpha, params);
        let interaction = self.total - d;
        let phi_e = phi + alpha;
        let f_e_est = push_component(&interaction.f, phi_e);
        let raw_push = push_component(&(raw_f - d.f), phi_e);
        WrenchEstimate {
            total_ext: self.total,
            interaction,
            f_e_est,
            f_e_est_rate: self.k_obs * (raw_push - f_e_est),
        }
    }
}

/// Threshold detector with release at half the engage threshold.
#[derive(Debug, Clone)]
pub struct ContactDetector {
    threshold: f64,
    release: f64,
    engaged: bool,
}

impl ContactDetector {
    pub const RELEASE_FRACTION: f64 = 0.5;

    pub fn new(threshold: f64) -> Self {
        assert!(threshold > 0.0, "contact threshold must be positive");
        Self {
            threshold,
            release: threshold * Self::RELEASE_FRACTION,
            engaged: false,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn engaged(&self) -> bool {
        self.engaged
    }

    pub fn update(&mut self, f_e_est: f64) -> bool {
        if self.engaged {
            if f_e_est < self.release {
                self.engaged = false;
            }
        } else if f_e_est >= self.threshold {
            self.engaged = true;
        }
        self.engaged
    }

    pub fn reset(&mut self) {
        self.engaged = false;
    }
}
