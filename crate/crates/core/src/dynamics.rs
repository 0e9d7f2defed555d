//! Planar plant: the vehicle and held arm as one rigid body, a penalty
//! contact at the end-effector tip, and a fixed-step RK4 integrator.
//!
//! The state is referred to the vehicle CoG `G_B`. Translation uses the
//! total mass; rotation about `G_B` picks up the arm weight as a gravity
//! torque from the arm CoG offset.

use serde::{Deserialize, Serialize};

use crate::actuation::RotorLayout;
use crate::error::{Error, Result};
use crate::force_model::MassGeometry;
use crate::geometry::{cross, rotation, z_axis, PoseConfig, SurfaceDef, Vec2};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarState {
    /// Vehicle CoG position (y, z) [m].
    pub p: Vec2,
    /// CoG velocity [m/s].
    pub v: Vec2,
    /// Roll [rad], unwrapped.
    pub phi: f64,
    /// Roll rate [rad/s].
    pub omega: f64,
}

impl PlanarState {
    pub fn at_rest(p: Vec2, phi: f64) -> Self {
        Self {
            p,
            v: Vec2::zeros(),
            phi,
            omega: 0.0,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.p.iter().chain(self.v.iter()).all(|c| c.is_finite())
            && self.phi.is_finite()
            && self.omega.is_finite()
    }

    /// Roll wrapped to (-pi, pi].
    pub fn phi_wrapped(&self) -> f64 {
        let w = self.phi.rem_euclid(std::f64::consts::TAU);
        if w > std::f64::consts::PI {
            w - std::f64::consts::TAU
        } else {
            w
        }
    }

    fn add_scaled(&self, d: &StateDerivative, h: f64) -> Self {
        Self {
            p: self.p + d.dp * h,
            v: self.v + d.dv * h,
            phi: self.phi + d.dphi * h,
            omega: self.omega + d.domega * h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateDerivative {
    pub dp: Vec2,
    pub dv: Vec2,
    pub dphi: f64,
    pub domega: f64,
}

impl StateDerivative {
    pub fn max_abs(&self) -> f64 {
        self.dp
            .iter()
            .chain(self.dv.iter())
            .chain([self.dphi, self.domega].iter())
            .fold(0.0_f64, |m, v| m.max(v.abs()))
    }
}

/// Planar wrench: force in the (Y, Z) plane and torque about X.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Wrench2D {
    pub f: Vec2,
    pub tau_x: f64,
}

impl Wrench2D {
    pub fn new(fy: f64, fz: f64, tau_x: f64) -> Self {
        Self {
            f: Vec2::new(fy, fz),
            tau_x,
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }
}

impl std::ops::Add for Wrench2D {
    type Output = Wrench2D;
    fn add(self, rhs: Wrench2D) -> Wrench2D {
        Wrench2D {
            f: self.f + rhs.f,
            tau_x: self.tau_x + rhs.tau_x,
        }
    }
}

impl std::ops::Sub for Wrench2D {
    type Output = Wrench2D;
    fn sub(self, rhs: Wrench2D) -> Wrench2D {
        Wrench2D {
            f: self.f - rhs.f,
            tau_x: self.tau_x - rhs.tau_x,
        }
    }
}

/// Physical parameters of the vehicle and arm. All fixtures, none published.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct UamParams {
    /// Vehicle mass [kg].
    pub m_b: f64,
    /// Arm mass [kg].
    pub m_e: f64,
    /// Gravity [m/s²].
    pub g: f64,
    /// Roll inertia of the bare vehicle about its CoG [kg·m²].
    pub vehicle_inertia: f64,
    /// Joint to tip distance [m].
    pub arm_length: f64,
    /// Joint position along body Z from the CoG [m].
    pub joint_offset: f64,
    /// Arm CoG location along the link, as a fraction of `arm_length`.
    pub arm_cog_fraction: f64,
    /// Rotor center distance from the CoG [m].
    pub rotor_arm: f64,
    /// Thrust coefficient [N/(rad/s)²].
    pub k_af: f64,
    /// Drag-moment coefficient [N·m/(rad/s)²].
    pub k_am: f64,
    /// Per-rotor thrust limit [N].
    pub t_i_max: f64,
    pub layout: RotorLayout,
}

impl Default for UamParams {
    fn default() -> Self {
        Self {
            // 0.6997 kg puts (m_B + m_E) g at the 7.4529 N total weight implied
            // by the reference closed-form cases.
            m_b: 0.6997,
            m_e: 0.06,
            g: crate::GRAVITY,
            vehicle_inertia: 0.01,
            arm_length: 0.30,
            joint_offset: 0.05,
            arm_cog_fraction: 0.5,
            rotor_arm: 0.17,
            k_af: 8.0e-6,
            k_am: 1.6e-7,
            t_i_max: 4.0,
            layout: RotorLayout::Plus,
        }
    }
}

impl UamParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("m_b", self.m_b),
            ("m_e", self.m_e),
            ("g", self.g),
            ("vehicle_inertia", self.vehicle_inertia),
            ("arm_length", self.arm_length),
            ("joint_offset", self.joint_offset),
            ("arm_cog_fraction", self.arm_cog_fraction),
            ("rotor_arm", self.rotor_arm),
            ("k_af", self.k_af),
            ("k_am", self.k_am),
            ("t_i_max", self.t_i_max),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::Validation(format!("{name} must be positive, got {v}")));
            }
        }
        if self.arm_cog_fraction > 1.0 {
            return Err(Error::Validation("arm_cog_fraction must be <= 1".into()));
        }
        Ok(())
    }

    pub fn total_mass(&self) -> f64 {
        self.m_b + self.m_e
    }

    /// Joint position relative to the CoG.
    pub fn joint_offset_vec(&self, phi: f64) -> Vec2 {
        z_axis(phi) * self.joint_offset
    }

    /// Tip position relative to the CoG for roll `phi` and joint angle `alpha`.
    pub fn tip_offset(&self, phi: f64, alpha: f64) -> Vec2 {
        self.joint_offset_vec(phi) + z_axis(phi + alpha) * self.arm_length
    }

    pub fn arm_cog_offset(&self, phi: f64, alpha: f64) -> Vec2 {
        self.joint_offset_vec(phi) + z_axis(phi + alpha) * (self.arm_length * self.arm_cog_fraction)
    }

    /// Composite roll inertia about the vehicle CoG with the arm held at `alpha`.
    ///
    /// The arm is a slender link: point mass at its CoG plus `m_E L² / 12`.
    pub fn roll_inertia(&self, alpha: f64) -> f64 {
        let r = self.arm_cog_offset(0.0, alpha);
        self.vehicle_inertia
            + self.m_e * r.norm_squared()
            + self.m_e * self.arm_length * self.arm_length / 12.0
    }

    /// Torque of the arm weight about the vehicle CoG.
    pub fn arm_gravity_torque(&self, phi: f64, alpha: f64) -> f64 {
        let r = self.arm_cog_offset(phi, alpha);
        cross(&r, &Vec2::new(0.0, -self.m_e * self.g))
    }

    /// Torque about the CoG per newton of push reaction along `-Z_E` at the tip.
    pub fn contact_lever(&self, phi: f64, alpha: f64) -> f64 {
        cross(&self.tip_offset(phi, alpha), &(-z_axis(phi + alpha)))
    }

    /// Mass geometry at a pushing pose, with moment arms from the layout.
    pub fn mass_geometry(&self, pose: &PoseConfig) -> Result<MassGeometry> {
        let (phi, alpha) = (pose.phi_signed(), pose.alpha_signed());
        MassGeometry::new(
            self.m_b,
            self.m_e,
            self.g,
            self.contact_lever(phi, alpha).abs(),
            self.arm_cog_offset(phi, alpha).x.abs(),
        )
    }
}

/// Penalty contact parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ContactParams {
    /// Normal stiffness [N/m].
    pub k_n: f64,
    /// Normal damping [N·s/m].
    pub c_n: f64,
    /// Coulomb coefficient.
    pub mu: f64,
    /// Tangential speed at which friction saturates [m/s].
    pub v_stick: f64,
}

impl Default for ContactParams {
    fn default() -> Self {
        Self {
            k_n: 5000.0,
            c_n: 50.0,
            mu: 0.8,
            v_stick: 0.01,
        }
    }
}

impl ContactParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.k_n > 0.0 && self.c_n >= 0.0 && self.mu >= 0.0 && self.v_stick > 0.0) {
            return Err(Error::Validation(format!("contact parameters out of range: {self:?}")));
        }
        Ok(())
    }
}

/// Thrust magnitude and roll moment actually applied to the body.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BodyInputs {
    pub t_sum: f64,
    pub m_x: f64,
}

pub fn ee_tip_position(state: &PlanarState, alpha_signed: f64, params: &UamParams) -> Vec2 {
    state.p + params.tip_offset(state.phi, alpha_signed)
}

/// Wrench on the vehicle (about its CoG) from the tip touching `surface`.
pub fn contact_wrench(
    state: &PlanarState,
    alpha: f64,
    surface: &SurfaceDef,
    params: &UamParams,
    cp: &ContactParams,
) -> Wrench2D {
    let r = params.tip_offset(state.phi, alpha);
    let tip = state.p + r;
    let penetration = -surface.signed_distance(&tip);
    if penetration <= 0.0 {
        return Wrench2D::zero();
    }
    let frame = surface.frame();
    let v_tip = state.v + Vec2::new(-r.y, r.x) * state.omega;
    let penetration_rate = -v_tip.dot(&frame.normal);
    let f_n = (cp.k_n * penetration + cp.c_n * penetration_rate).max(0.0);
    let v_t = v_tip.dot(&frame.tangent);
    let f_t = -cp.mu * f_n * (v_t / cp.v_stick).clamp(-1.0, 1.0);
    let f = frame.normal * f_n + frame.tangent * f_t;
    Wrench2D {
        f,
        tau_x: cross(&r, &f),
    }
}

/// Equations of motion. `ext` is every external wrench except gravity.
pub fn dynamics_rhs(
    state: &PlanarState,
    u: &BodyInputs,
    ext: &Wrench2D,
    params: &UamParams,
    alpha: f64,
) -> StateDerivative {
    let m_t = params.total_mass();
    let thrust = z_axis(state.phi) * u.t_sum;
    let gravity = Vec2::new(0.0, -m_t * params.g);
    let torque = u.m_x + ext.tau_x + params.arm_gravity_torque(state.phi, alpha);
    StateDerivative {
        dp: state.v,
        dv: (thrust + gravity + ext.f) / m_t,
        dphi: state.omega,
        domega: torque / params.roll_inertia(alpha),
    }
}

/// One classical RK4 step of `f`.
pub fn rk4<F>(state: &PlanarState, dt: f64, f: F) -> PlanarState
where
    F: Fn(&PlanarState) -> StateDerivative,
{
    let k1 = f(state);
    let k2 = f(&state.add_scaled(&k1, 0.5 * dt));
    let k3 = f(&state.add_scaled(&k2, 0.5 * dt));
    let k4 = f(&state.add_scaled(&k3, dt));
    PlanarState {
        p: state.p + (k1.dp + k2.dp * 2.0 + k3.dp * 2.0 + k4.dp) * (dt / 6.0),
        v: state.v + (k1.dv + k2.dv * 2.0 + k3.dv * 2.0 + k4.dv) * (dt / 6.0),
        phi: state.phi + (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi) * (dt / 6.0),
        omega: state.omega
            + (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega) * (dt / 6.0),
    }
}

/// The environment around the body: an optional work surface and an
/// optional constant injected wrench (used to test the observer).
#[derive(Debug, Clone, Copy)]
pub struct Plant {
    pub params: UamParams,
    pub alpha: f64,
    pub surface: Option<SurfaceDef>,
    pub contact: ContactParams,
    pub injected: Wrench2D,
}

impl Plant {
    pub fn free_flight(params: UamParams, alpha: f64) -> Self {
        Self {
            params,
            alpha,
            surface: None,
            contact: ContactParams::default(),
            injected: Wrench2D::zero(),
        }
    }

    pub fn contact_wrench(&self, state: &PlanarState) -> Wrench2D {
        match &self.surface {
            Some(s) => contact_wrench(state, self.alpha, s, &self.params, &self.contact),
            None => Wrench2D::zero(),
        }
    }

    pub fn external_wrench(&self, state: &PlanarState) -> Wrench2D {
        self.contact_wrench(state) + self.injected
    }

    pub fn derivative(&self, state: &PlanarState, u: &BodyInputs) -> StateDerivative {
        dynamics_rhs(state, u, &self.external_wrench(state), &self.params, self.alpha)
    }

    /// RK4 step with inputs held over the step.
    pub fn step_rk4(&self, state: &PlanarState, u: &BodyInputs, dt: f64) -> Result<PlanarState> {
        step_rk4(state, u, dt, self)
    }

    /// Total mechanical energy: translational, rotational, and gravity
    /// potential of both the vehicle and the offset arm CoG.
    pub fn mechanical_energy(&self, state: &PlanarState) -> f64 {
        let p = &self.params;
        let m_t = p.total_mass();
        0.5 * m_t * state.v.norm_squared()
            + 0.5 * p.roll_inertia(self.alpha) * state.omega * state.omega
            + m_t * p.g * state.p.y
            + p.m_e * p.g * p.arm_cog_offset(state.phi, self.alpha).y
    }
}

pub fn step_rk4(state: &PlanarState, u: &BodyInputs, dt: f64, plant: &Plant) -> Result<PlanarState> {
    if !(dt > 0.0) {
        return Err(Error::InvalidConfig(format!("time step must be positive, got {dt}")));
    }
    let next = rk4(state, dt, |s| plant.derivative(s, u));
    if next.is_finite() {
        Ok(next)
    } else {
        Err(Error::NonFinite)
    }
}

/// Rotates a body-frame vector into the inertial frame.
pub fn body_to_inertial(phi: f64, v: &Vec2) -> Vec2 {
    rotation(phi) * v
}
