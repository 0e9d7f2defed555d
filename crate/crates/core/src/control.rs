//! Baseline flight control and the hybrid attitude/force interaction controller.
//!
//! Free flight uses a PD altitude loop on total thrust, a PD lateral loop
//! that turns position error into a roll command, and a PD attitude loop
//! with arm-gravity feedforward. Once the contact detector fires, the roll
//! command is frozen at the pushing pose's `phi_d` (which sets the direction
//! and magnitude of the equilibrium push) and total thrust carries the
//! weight and interaction feedforwards plus a PID loop on the estimated
//! push force.
//!
//! Altitude errors use negative feedback in a Z-up frame: the thrust law
//! reads `[-k_p e_z - k_d ė_z + m a_z^d + m g + ...] / cos(phi)`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{PlanarState, UamParams, Wrench2D};
use crate::error::{Error, Result};
use crate::estimation::{arm_gravity_disturbance, ContactDetector, WrenchEstimate};
use crate::force_model::MassGeometry;
use crate::geometry::{PoseConfig, Vec2};

/// Below this `|cos(phi)|` the thrust laws refuse to divide.
pub const MIN_COS_TILT: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Gains {
    /// Altitude stiffness [N/m].
    pub k_p: f64,
    /// Altitude damping [N·s/m].
    pub k_d: f64,
    /// Roll stiffness [N·m/rad].
    pub k_phi_p: f64,
    /// Roll damping [N·m·s/rad].
    pub k_phi_d: f64,
    pub k_p_f: f64,
    pub k_d_f: f64,
    /// Force integral gain [1/s].
    pub k_i_f: f64,
    /// Lateral position gains of the approach loop [1/s², 1/s].
    pub pos_kp: f64,
    pub pos_kd: f64,
    /// Roll command limit during approach [deg].
    pub max_tilt_deg: f64,
}

impl Default for Gains {
    fn default() -> Self {
        Self {
            k_p: 20.0,
            k_d: 8.0,
            k_phi_p: 4.0,
            k_phi_d: 0.3,
            k_p_f: 0.5,
            k_d_f: 0.0,
            k_i_f: 3.0,
            pos_kp: 6.0,
            pos_kd: 4.0,
            max_tilt_deg: 15.0,
        }
    }
}

impl Gains {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.k_p,
            self.k_d,
            self.k_phi_p,
            self.k_phi_d,
            self.k_p_f,
            self.k_d_f,
            self.k_i_f,
            self.pos_kp,
            self.pos_kd,
            self.max_tilt_deg,
        ];
        if all.iter().any(|g| !(g.is_finite() && *g >= 0.0)) {
            return Err(Error::Validation(format!("gains must be finite and non-negative: {self:?}")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Baseline,
    Interaction,
}

impl Mode {
    pub fn as_flag(self) -> u8 {
        match self {
            Mode::Baseline => 0,
            Mode::Interaction => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setpoint {
    pub mode: Mode,
    pub p_d: Vec2,
    pub v_d: Vec2,
    pub a_d: Vec2,
    pub phi_d: f64,
    pub f_e_d: f64,
    /// Signed surface inclination.
    pub beta: f64,
}

impl Setpoint {
    pub fn beta0(&self) -> f64 {
        self.beta.abs()
    }
}

fn checked_cos(phi: f64) -> Result<f64> {
    let c = phi.cos();
    if c.abs() < MIN_COS_TILT {
        return Err(Error::TiltSingular { cos_phi: c });
    }
    Ok(c)
}

fn altitude_pd(state: &PlanarState, sp: &Setpoint, gains: &Gains) -> f64 {
    -gains.k_p * (state.p.y - sp.p_d.y) - gains.k_d * (state.v.y - sp.v_d.y)
}

/// Free-flight altitude thrust. Carries only the vehicle weight `m_B g`.
pub fn baseline_thrust(state: &PlanarState, sp: &Setpoint, gains: &Gains, mg: &MassGeometry) -> Result<f64> {
    let c = checked_cos(state.phi)?;
    Ok((altitude_pd(state, sp, gains) + mg.m_b * sp.a_d.y + mg.m_b * mg.g) / c)
}

/// Roll moment: PD toward `phi_d` plus cancellation of the arm weight torque.
pub fn attitude_moment(state: &PlanarState, phi_d: f64, alpha: f64, gains: &Gains, params: &UamParams) -> f64 {
    -gains.k_phi_p * (state.phi - phi_d) - gains.k_phi_d * state.omega - params.arm_gravity_torque(state.phi, alpha)
}

/// Arm-gravity disturbance `D` and the desired-interaction disturbance `D_E`
/// at the pushing pose, as wrenches on the vehicle CoG.
pub fn disturbance_vectors(sp: &Setpoint, params: &UamParams, alpha: f64) -> (Wrench2D, Wrench2D) {
    let d = arm_gravity_disturbance(sp.phi_d, alpha, params);
    let (s, c) = sp.beta.sin_cos();
    let d_e = Wrench2D::new(
        sp.f_e_d * s,
        -sp.f_e_d * c,
        sp.f_e_d * params.contact_lever(sp.phi_d, alpha),
    );
    (d, d_e)
}

/// Integral state of the force PID with a symmetric clamp.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForceLoop {
    integral: f64,
    bound: f64,
}

impl ForceLoop {
    pub fn new(f_e_d: f64, k_i_f: f64) -> Self {
        Self {
            integral: 0.0,
            bound: if k_i_f > 0.0 { 2.0 * f_e_d / k_i_f } else { 0.0 },
        }
    }

    pub fn integral(&self) -> f64 {
        self.integral
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }
}

/// Thrust during interaction: `T_sum^1 + u_f / cos(phi)`. Returns `(T_sum^int, u_f)`.
pub fn interaction_thrust(
    state: &PlanarState,
    sp: &Setpoint,
    est: &WrenchEstimate,
    gains: &Gains,
    mg: &MassGeometry,
    force: &mut ForceLoop,
    dt: f64,
) -> Result<(f64, f64)> {
    let c = checked_cos(state.phi)?;
    let t1 = (altitude_pd(state, sp, gains)
        + mg.m_b * sp.a_d.y
        + mg.total_mass() * mg.g
        + sp.f_e_d * sp.beta0().cos())
        / c;
    let err = sp.f_e_d - est.f_e_est;
    let u_f = gains.k_p_f * err - gains.k_d_f * est.f_e_est_rate + gains.k_i_f * force.integral;
    force.integral = (force.integral + err * dt).clamp(-force.bound, force.bound);
    Ok((t1 + u_f / c, u_f))
}

/// Straight-line reference from `start` to `target` at constant speed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproachReference {
    pub start: Vec2,
    pub target: Vec2,
    pub speed: f64,
}

impl ApproachReference {
    pub fn hold(p: Vec2) -> Self {
        Self {
            start: p,
            target: p,
            speed: 0.0,
        }
    }

    /// Position, velocity and acceleration references at time `t`.
    pub fn sample(&self, t: f64) -> (Vec2, Vec2, Vec2) {
        let delta = self.target - self.start;
        let len = delta.norm();
        if len == 0.0 || self.speed <= 0.0 {
            return (self.start, Vec2::zeros(), Vec2::zeros());
        }
        let dir = delta / len;
        let s = self.speed * t.max(0.0);
        if s >= len {
            (self.target, Vec2::zeros(), Vec2::zeros())
        } else {
            (self.start + dir * s, dir * self.speed, Vec2::zeros())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlOutput {
    pub t_sum_cmd: f64,
    pub moments: [f64; 3],
    pub mode: Mode,
    pub phi_cmd: f64,
    pub u_f: f64,
}

/// Mode-switching controller for one run.
#[derive(Debug, Clone)]
pub struct Controller {
    gains: Gains,
    params: UamParams,
    pose: PoseConfig,
    approach: ApproachReference,
    detector: ContactDetector,
    force: ForceLoop,
    sp: Setpoint,
    transitions: usize,
}

impl Controller {
    pub fn new(
        gains: Gains,
        params: UamParams,
        pose: PoseConfig,
        f_e_d: f64,
        approach: ApproachReference,
        threshold: f64,
    ) -> Self {
        let (p_d, v_d, a_d) = approach.sample(0.0);
        Self {
            gains,
            params,
            pose,
            approach,
            detector: ContactDetector::new(threshold),
            force: ForceLoop::new(f_e_d, gains.k_i_f),
            sp: Setpoint {
                mode: Mode::Baseline,
                p_d,
                v_d,
                a_d,
                phi_d: pose.phi_signed(),
                f_e_d,
                beta: pose.beta_signed(),
            },
            transitions: 0,
        }
    }

    pub fn mode(&self) -> Mode {
        self.sp.mode
    }

    pub fn setpoint(&self) -> &Setpoint {
        &self.sp
    }

    pub fn force_loop(&self) -> &ForceLoop {
        &self.force
    }

    /// Number of Baseline → Interaction switches so far.
    pub fn transitions(&self) -> usize {
        self.transitions
    }

    /// Switches to interaction mode and holds the altitude the vehicle will
    /// have once rotated into the pushing pose about the current tip position.
    pub fn enter_interaction(&mut self, state: &PlanarState) {
        let alpha = self.pose.alpha_signed();
        let tip = state.p + self.params.tip_offset(state.phi, alpha);
        let eq = tip - self.params.tip_offset(self.pose.phi_signed(), alpha);
        self.sp.mode = Mode::Interaction;
        self.sp.p_d = Vec2::new(state.p.x, eq.y);
        self.sp.v_d = Vec2::zeros();
        self.sp.a_d = Vec2::zeros();
        self.force = ForceLoop::new(self.sp.f_e_d, self.gains.k_i_f);
        self.transitions += 1;
    }

    fn mass_geometry(&self) -> MassGeometry {
        MassGeometry {
            m_b: self.params.m_b,
            m_e: self.params.m_e,
            g: self.params.g,
            l_e: 0.0,
            l_ge: 0.0,
        }
    }

    pub fn step(&mut self, t: f64, state: &PlanarState, est: &WrenchEstimate, dt: f64) -> Result<ControlOutput> {
        let engaged = self.detector.update(est.f_e_est);
        match (self.sp.mode, engaged) {
            (Mode::Baseline, true) => self.enter_interaction(state),
            (Mode::Interaction, false) => self.sp.mode = Mode::Baseline,
            _ => {}
        }
        let alpha = self.pose.alpha_signed();
        let mg = self.mass_geometry();
        let gains = self.gains;
        match self.sp.mode {
            Mode::Baseline => {
                let (p_d, v_d, a_d) = self.approach.sample(t);
                self.sp.p_d = p_d;
                self.sp.v_d = v_d;
                self.sp.a_d = a_d;
                let a_lat = a_d.x - gains.pos_kp * (state.p.x - p_d.x) - gains.pos_kd * (state.v.x - v_d.x);
                let max_tilt = gains.max_tilt_deg.to_radians();
                let phi_cmd = (-(a_lat / self.params.g).atan()).clamp(-max_tilt, max_tilt);
                let t_sum = baseline_thrust(state, &self.sp, &gains, &mg)?;
                let m_x = attitude_moment(state, phi_cmd, alpha, &gains, &self.params);
                Ok(ControlOutput {
                    t_sum_cmd: t_sum,
                    moments: [m_x, 0.0, 0.0],
                    mode: Mode::Baseline,
                    phi_cmd,
                    u_f: 0.0,
                })
            }
            Mode::Interaction => {
                let (t_sum, u_f) = interaction_thrust(state, &self.sp, est, &gains, &mg, &mut self.force, dt)?;
                let (_, d_e) = disturbance_vectors(&self.sp, &self.params, alpha);
                let m_x = attitude_moment(state, self.sp.phi_d, alpha, &gains, &self.params) - d_e.tau_x;
                Ok(ControlOutput {
                    t_sum_cmd: t_sum,
                    moments: [m_x, 0.0, 0.0],
                    mode: Mode::Interaction,
                    phi_cmd: self.sp.phi_d,
                    u_f,
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::actuation::allocate;
    use crate::dynamics::{contact_wrench, dynamics_rhs, BodyInputs, ContactParams, Plant};
    use crate::force_model::equilibrium_forces;
    use crate::geometry::{solve_joint_angle, surface_frame, SurfaceDef};
    use approx::assert_abs_diff_eq;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    fn mg(params: &UamParams) -> MassGeometry {
        MassGeometry::new(params.m_b, params.m_e, params.g, 0.0, 0.0).unwrap()
    }

    fn setpoint(phi_d: f64, f_e_d: f64, beta: f64) -> Setpoint {
        Setpoint {
            mode: Mode::Interaction,
            p_d: Vec2::zeros(),
            v_d: Vec2::zeros(),
            a_d: Vec2::zeros(),
            phi_d,
            f_e_d,
            beta,
        }
    }

    #[test]
    fn baseline_thrust_examples() {
        let params = UamParams::default();
        let m = mg(&params);
        let g = Gains::default();
        let sp = setpoint(0.0, 0.0, 0.0);
        let s = PlanarState::default();
        assert_abs_diff_eq!(baseline_thrust(&s, &sp, &g, &m).unwrap(), m.m_b * m.g, epsilon = 1e-12);
        let tilted = PlanarState { phi: deg(30.0), ..s };
        assert_abs_diff_eq!(
            baseline_thrust(&tilted, &sp, &g, &m).unwrap(),
            m.m_b * m.g / deg(30.0).cos(),
            epsilon = 1e-12
        );
        let flat = PlanarState { phi: deg(89.0), ..s };
        assert!(matches!(baseline_thrust(&flat, &sp, &g, &m), Err(Error::TiltSingular { .. })));
        // below the setpoint means more thrust
        let low = PlanarState { p: Vec2::new(0.0, -0.1), ..s };
        assert!(baseline_thrust(&low, &sp, &g, &m).unwrap() > m.m_b * m.g);
    }

    #[test]
    fn attitude_moment_examples() {
        let params = UamParams::default();
        let g = Gains::default();
        let s = PlanarState::default();
        assert_eq!(attitude_moment(&s, 0.0, 0.0, &g, &params), 0.0);
        // arm at -50 deg, level vehicle: the moment cancels the arm weight torque
        let alpha = deg(-50.0);
        let r = params.arm_cog_offset(0.0, alpha);
        let static_torque = -params.m_e * params.g * r.x;
        assert_abs_diff_eq!(attitude_moment(&s, 0.0, alpha, &g, &params), -static_torque, epsilon = 1e-15);
    }

    #[test]
    fn attitude_step_settles_fast() {
        let params = UamParams::default();
        let gains = Gains::default();
        let alpha = deg(-30.0);
        let plant = Plant::free_flight(params, alpha);
        let mut s = PlanarState::default();
        let phi_d = deg(10.0);
        let m = mg(&params);
        let sp = setpoint(phi_d, 0.0, 0.0);
        let dt = 1e-3;
        let mut settled_at = None;
        for k in 0..1000 {
            let t_sum = baseline_thrust(&s, &Setpoint { p_d: s.p, v_d: s.v, ..sp }, &gains, &m).unwrap();
            let m_x = attitude_moment(&s, phi_d, alpha, &gains, &params);
            let a = allocate(t_sum, [m_x, 0.0, 0.0], &params);
            let u = BodyInputs { t_sum: a.achieved_t_sum, m_x: a.achieved_m_x };
            s = plant.step_rk4(&s, &u, dt).unwrap();
            let inside = (s.phi - phi_d).abs() <= 0.02 * phi_d;
            match (inside, settled_at) {
                (true, None) => settled_at = Some(k),
                (false, Some(_)) => settled_at = None,
                _ => {}
            }
        }
        let t_settle = settled_at.expect("never settled") as f64 * dt;
        assert!(t_settle < 0.5, "settled after {t_settle} s");
    }

    #[test]
    fn disturbance_examples() {
        let params = UamParams { m_e: 0.0, ..Default::default() };
        let (d, _) = disturbance_vectors(&setpoint(deg(-10.0), 1.0, deg(-60.0)), &params, deg(-50.0));
        assert_eq!(d, Wrench2D::zero());

        let params = UamParams::default();
        let (_, d_e) = disturbance_vectors(&setpoint(deg(-10.0), 0.0, deg(-60.0)), &params, deg(-50.0));
        assert_eq!(d_e.f, Vec2::zeros());
        assert_eq!(d_e.tau_x, 0.0);

        let (d, d_e) = disturbance_vectors(&setpoint(deg(-10.0), 1.6895, deg(-60.0)), &params, deg(-50.0));
        assert_abs_diff_eq!(d_e.f, Vec2::new(-1.4632, -0.8448), epsilon = 1e-4);
        assert_abs_diff_eq!(d.f, Vec2::new(0.0, -params.m_e * params.g), epsilon = 1e-15);
    }

    #[test]
    fn zero_error_thrust_matches_closed_form() {
        let params = UamParams::default();
        let m = mg(&params);
        let gains = Gains::default();
        for (b, p) in [(-30.0, -5.0), (-30.0, -10.0), (-60.0, -10.0), (-60.0, -15.0), (-90.0, -15.0), (-90.0, -20.0)] {
            let pose = solve_joint_angle(deg(b), deg(p)).unwrap();
            let sol = equilibrium_forces(&pose, &m).unwrap();
            let sp = setpoint(pose.phi_signed(), sol.f_e, pose.beta_signed());
            let s = PlanarState::at_rest(Vec2::zeros(), pose.phi_signed());
            let est = WrenchEstimate { f_e_est: sol.f_e, ..Default::default() };
            let mut fl = ForceLoop::new(sol.f_e, gains.k_i_f);
            let (t, u_f) = interaction_thrust(&s, &sp, &est, &gains, &m, &mut fl, 1e-3).unwrap();
            assert_eq!(u_f, 0.0);
            assert!((t - sol.t_sum).abs() < 1e-9, "case ({b},{p}): {t} vs {}", sol.t_sum);
        }
    }

    #[test]
    fn force_loop_starts_proportional() {
        let params = UamParams::default();
        let m = mg(&params);
        let gains = Gains::default();
        let sp = setpoint(deg(-10.0), 1.69, deg(-60.0));
        let s = PlanarState::at_rest(Vec2::zeros(), deg(-10.0));
        let mut fl = ForceLoop::new(1.69, gains.k_i_f);
        let (_, u_f) = interaction_thrust(&s, &sp, &WrenchEstimate::default(), &gains, &m, &mut fl, 1e-3).unwrap();
        assert_abs_diff_eq!(u_f, gains.k_p_f * 1.69, epsilon = 1e-15);
        assert!(fl.integral() > 0.0);
    }

    #[test]
    fn vertical_wall_feedforward() {
        let params = UamParams::default();
        let m = mg(&params);
        let gains = Gains::default();
        let sp = setpoint(deg(-15.0), 1.9970, deg(-90.0));
        let s = PlanarState::at_rest(Vec2::zeros(), deg(-15.0));
        let est = WrenchEstimate { f_e_est: 1.9970, ..Default::default() };
        let mut fl = ForceLoop::new(1.9970, gains.k_i_f);
        let (t, _) = interaction_thrust(&s, &sp, &est, &gains, &m, &mut fl, 1e-3).unwrap();
        assert_abs_diff_eq!(t, m.g_t() / deg(15.0).cos(), epsilon = 1e-12);
    }

    #[test]
    fn integrator_is_clamped() {
        let params = UamParams::default();
        let m = mg(&params);
        let gains = Gains::default();
        let sp = setpoint(deg(-10.0), 1.0, deg(-60.0));
        let s = PlanarState::at_rest(Vec2::zeros(), deg(-10.0));
        let mut fl = ForceLoop::new(1.0, gains.k_i_f);
        for _ in 0..100_000 {
            interaction_thrust(&s, &sp, &WrenchEstimate::default(), &gains, &m, &mut fl, 1e-3).unwrap();
            assert!(fl.integral().abs() <= fl.bound());
        }
        assert_abs_diff_eq!(fl.integral(), 2.0 / gains.k_i_f, epsilon = 1e-12);
    }

    #[test]
    fn approach_reference_profile() {
        let r = ApproachReference {
            start: Vec2::new(0.0, 0.0),
            target: Vec2::new(0.3, 0.4),
            speed: 0.2,
        };
        let (p, v, _) = r.sample(1.0);
        assert_abs_diff_eq!(p, Vec2::new(0.12, 0.16), epsilon = 1e-12);
        assert_abs_diff_eq!(v.norm(), 0.2, epsilon = 1e-12);
        let (p, v, _) = r.sample(10.0);
        assert_eq!(p, r.target);
        assert_eq!(v, Vec2::zeros());
    }

    /// At the analytic equilibrium of every reference pose, with exact force
    /// feedback, the interaction controller's output leaves the plant at rest.
    #[test]
    fn controller_holds_equilibrium() {
        let params = UamParams::default();
        let cp = ContactParams::default();
        let m = mg(&params);
        for (b, p) in [(-30.0, -5.0), (-30.0, -10.0), (-60.0, -10.0), (-60.0, -15.0), (-90.0, -15.0), (-90.0, -20.0), (45.0, 20.0)] {
            let pose = solve_joint_angle(deg(b), deg(p)).unwrap();
            let sol = equilibrium_forces(&pose, &m).unwrap();
            let surface = SurfaceDef::new(pose.beta_signed(), Vec2::zeros());
            let n = surface_frame(&surface).normal;
            let tip = -n * (sol.f_e / cp.k_n);
            let state = PlanarState::at_rest(tip - params.tip_offset(pose.phi_signed(), pose.alpha_signed()), pose.phi_signed());
            let mut ctl = Controller::new(Gains::default(), params, pose, sol.f_e, ApproachReference::hold(state.p), 0.3);
            ctl.enter_interaction(&state);
            let est = WrenchEstimate { f_e_est: sol.f_e, ..Default::default() };
            let out = ctl.step(0.0, &state, &est, 1e-3).unwrap();
            assert_eq!(out.mode, Mode::Interaction);
            let a = allocate(out.t_sum_cmd, out.moments, &params);
            assert!(!a.saturated);
            let u = BodyInputs { t_sum: a.achieved_t_sum, m_x: a.achieved_m_x };
            let w = contact_wrench(&state, pose.alpha_signed(), &surface, &params, &cp);
            let d = dynamics_rhs(&state, &u, &w, &params, pose.alpha_signed());
            assert!(d.max_abs() < 1e-6, "pose ({b},{p}): {d:?}");
        }
    }

    #[test]
    fn rising_edge_switches_once_and_resets_integrator() {
        let params = UamParams::default();
        let pose = solve_joint_angle(deg(-60.0), deg(-10.0)).unwrap();
        let mut ctl = Controller::new(Gains::default(), params, pose, 1.69, ApproachReference::hold(Vec2::zeros()), 0.3);
        let s = PlanarState::default();
        let quiet = WrenchEstimate::default();
        for _ in 0..10 {
            assert_eq!(ctl.step(0.0, &s, &quiet, 1e-3).unwrap().mode, Mode::Baseline);
        }
        let touching = WrenchEstimate { f_e_est: 0.4, ..Default::default() };
        let out = ctl.step(0.0, &s, &touching, 1e-3).unwrap();
        assert_eq!(out.mode, Mode::Interaction);
        assert_eq!(ctl.transitions(), 1);
        // u_f on the first interaction step has no integral contribution
        assert_abs_diff_eq!(out.u_f, Gains::default().k_p_f * (1.69 - 0.4), epsilon = 1e-12);
        for _ in 0..50 {
            ctl.step(0.0, &s, &WrenchEstimate { f_e_est: 0.2, ..Default::default() }, 1e-3).unwrap();
        }
        assert_eq!(ctl.transitions(), 1);
        assert_eq!(ctl.mode(), Mode::Interaction);
    }

    proptest::proptest! {
        #[test]
        fn integral_never_leaves_clamp(
            f_d in 0.1f64..5.0,
            k_i in 0.1f64..10.0,
            ests in proptest::collection::vec(-10.0f64..10.0, 1..400),
        ) {
            let params = UamParams::default();
            let m = mg(&params);
            let gains = Gains { k_i_f: k_i, ..Gains::default() };
            let sp = setpoint(deg(-10.0), f_d, deg(-60.0));
            let s = PlanarState::at_rest(Vec2::zeros(), deg(-10.0));
            let mut fl = ForceLoop::new(f_d, k_i);
            for e in ests {
                let est = WrenchEstimate { f_e_est: e, ..Default::default() };
                interaction_thrust(&s, &sp, &est, &gains, &m, &mut fl, 0.01).unwrap();
                proptest::prop_assert!(fl.integral().abs() <= 2.0 * f_d / k_i + 1e-12);
            }
        }

        #[test]
        fn one_switch_per_contact_event(
            events in proptest::collection::vec((1usize..40, 0.35f64..3.0), 1..8),
        ) {
            let params = UamParams::default();
            let pose = solve_joint_angle(deg(-60.0), deg(-10.0)).unwrap();
            let mut ctl = Controller::new(Gains::default(), params, pose, 1.69, ApproachReference::hold(Vec2::zeros()), 0.3);
            let s = PlanarState::default();
            for (len, level) in &events {
                for _ in 0..*len {
                    ctl.step(0.0, &s, &WrenchEstimate { f_e_est: *level, ..Default::default() }, 1e-3).unwrap();
                }
                ctl.step(0.0, &s, &WrenchEstimate::default(), 1e-3).unwrap();
            }
            proptest::prop_assert_eq!(ctl.transitions(), events.len());
        }
    }
}
