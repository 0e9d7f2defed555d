//! Scenario runner: configuration, the closed-loop simulation loop,
//! telemetry, steady-state reports and the six reference pushing cases.

mod plot;
mod table;

pub use plot::{envelope_csv, envelope_svg, timeseries_svg, DEFAULT_ENVELOPE_BETAS};
pub use table::{run_table, table_markdown, Comparison, ComparisonKind, TableReport, TableRow};

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::actuation::allocate;
use crate::control::{ApproachReference, Controller, Gains, Mode};
use crate::dynamics::{BodyInputs, ContactParams, PlanarState, Plant, UamParams};
use crate::error::{Error, Result};
use crate::estimation::{push_component, AppliedInputs, ImuSample, WrenchEstimate, WrenchObserver};
use crate::force_model::equilibrium_forces;
use crate::geometry::{solve_joint_angle, z_axis, PoseConfig, SurfaceDef, Vec2};

/// `(beta_deg, phi_d_deg)` of the six reference pushing cases.
pub const TABLE_CASES: [(f64, f64); 6] = [
    (-30.0, -5.0),
    (-30.0, -10.0),
    (-60.0, -10.0),
    (-60.0, -15.0),
    (-90.0, -15.0),
    (-90.0, -20.0),
];

/// Fraction of the run, at the end, averaged for steady-state values.
pub const STEADY_WINDOW: f64 = 0.2;
/// `settled` requires the force estimate's std below this fraction of its mean.
pub const SETTLED_STD_FRACTION: f64 = 0.02;

const TELEMETRY_HEADER: [&str; 18] = [
    "t", "y", "z", "phi_deg", "vy", "vz", "omega", "T_sum_cmd", "T_sum_ach", "M_X", "T1", "T2", "T3", "T4",
    "f_E_est", "f_E_true", "mode", "u_f",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ObserverConfig {
    pub k_obs: f64,
    /// Contact detection threshold on the estimated push [N].
    pub threshold: f64,
    /// Accelerometer noise std [m/s²]; zero disables noise.
    pub accel_noise_std: f64,
    /// Gyro noise std [rad/s].
    pub gyro_noise_std: f64,
    pub seed: u64,
}

impl Default for ObserverConfig {
    fn default() -> Self {
        Self {
            k_obs: 20.0,
            threshold: 0.3,
            accel_noise_std: 0.0,
            gyro_noise_std: 0.0,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ApproachConfig {
    /// Reference speed [m/s].
    pub speed: f64,
    /// Start distance from the contact point along the surface normal [m].
    pub standoff: f64,
    /// How far past the surface the reference aims the tip [m].
    pub overshoot: f64,
}

impl Default for ApproachConfig {
    fn default() -> Self {
        Self {
            speed: 0.2,
            standoff: 0.15,
            overshoot: 0.02,
        }
    }
}

/// Initial vehicle pose, overriding the one derived from the approach.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StartPose {
    pub y: f64,
    pub z: f64,
    #[serde(default)]
    pub phi_deg: f64,
}

fn default_duration() -> f64 {
    8.0
}

fn default_dt() -> f64 {
    1e-3
}

/// One pushing scenario. Angles in degrees, everything else SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimCase {
    pub name: String,
    pub beta_deg: f64,
    pub phi_d_deg: f64,
    #[serde(default = "default_duration")]
    pub duration_s: f64,
    #[serde(default = "default_dt")]
    pub dt_s: f64,
    #[serde(default)]
    pub params: UamParams,
    #[serde(default)]
    pub contact: ContactParams,
    #[serde(default)]
    pub gains: Gains,
    #[serde(default)]
    pub observer: ObserverConfig,
    #[serde(default)]
    pub approach: ApproachConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_pose: Option<StartPose>,
}

impl SimCase {
    pub fn new(name: impl Into<String>, beta_deg: f64, phi_d_deg: f64) -> Self {
        Self {
            name: name.into(),
            beta_deg,
            phi_d_deg,
            duration_s: default_duration(),
            dt_s: default_dt(),
            params: UamParams::default(),
            contact: ContactParams::default(),
            gains: Gains::default(),
            observer: ObserverConfig::default(),
            approach: ApproachConfig::default(),
            start_pose: None,
        }
    }

    /// Reference case `n` in `1..=6`.
    pub fn table_case(n: usize) -> Option<Self> {
        let (b, p) = *TABLE_CASES.get(n.checked_sub(1)?)?;
        Some(Self::new(format!("case{n}"), b, p))
    }

    pub fn table_cases() -> Vec<Self> {
        (1..=TABLE_CASES.len()).filter_map(Self::table_case).collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let case: Self = serde_json::from_str(text)?;
        case.validate()?;
        Ok(case)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn pose(&self) -> Result<PoseConfig> {
        solve_joint_angle(self.beta_deg.to_radians(), self.phi_d_deg.to_radians())
    }

    pub fn steps(&self) -> usize {
        (self.duration_s / self.dt_s).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Validation(format!("{}: {msg}", self.name)));
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return bad(format!("duration_s must be positive, got {}", self.duration_s));
        }
        if !(self.dt_s.is_finite() && self.dt_s > 0.0 && self.dt_s <= self.duration_s) {
            return bad(format!("dt_s must be in (0, duration_s], got {}", self.dt_s));
        }
        if self.phi_d_deg == 0.0 {
            return bad("phi_d_deg must be nonzero for a pushing task".into());
        }
        if !(self.phi_d_deg.abs() < self.beta_deg.abs()) {
            return bad(format!("|phi_d_deg| = {} must be below |beta_deg| = {}", self.phi_d_deg.abs(), self.beta_deg.abs()));
        }
        let o = &self.observer;
        if !(o.k_obs > 0.0 && o.threshold > 0.0 && o.accel_noise_std >= 0.0 && o.gyro_noise_std >= 0.0) {
            return bad(format!("invalid observer settings {o:?}"));
        }
        let a = &self.approach;
        if !(a.speed > 0.0 && a.standoff >= 0.0 && a.overshoot >= 0.0) {
            return bad(format!("invalid approach settings {a:?}"));
        }
        self.params.validate()?;
        self.contact.validate()?;
        self.gains.validate()?;
        self.pose()?;
        Ok(())
    }
}

/// One logged simulation step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TelemetryRow {
    pub t: f64,
    pub y: f64,
    pub z: f64,
    pub phi_deg: f64,
    pub vy: f64,
    pub vz: f64,
    pub omega: f64,
    #[serde(rename = "T_sum_cmd")]
    pub t_sum_cmd: f64,
    #[serde(rename = "T_sum_ach")]
    pub t_sum_ach: f64,
    #[serde(rename = "M_X")]
    pub m_x: f64,
    #[serde(rename = "T1")]
    pub t1: f64,
    #[serde(rename = "T2")]
    pub t2: f64,
    #[serde(rename = "T3")]
    pub t3: f64,
    #[serde(rename = "T4")]
    pub t4: f64,
    #[serde(rename = "f_E_est")]
    pub f_e_est: f64,
    #[serde(rename = "f_E_true")]
    pub f_e_true: f64,
    pub mode: u8,
    pub u_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimReport {
    pub name: String,
    pub beta_deg: f64,
    pub phi_d_deg: f64,
    pub alpha_d_deg: f64,
    #[serde(rename = "f_E_d")]
    pub f_e_d: f64,
    #[serde(rename = "T_sum_d")]
    pub t_sum_d: f64,
    /// Mean estimated push over the steady window.
    #[serde(rename = "f_E_ss")]
    pub f_e_ss: f64,
    /// Mean true contact push over the same window.
    #[serde(rename = "f_E_true_ss")]
    pub f_e_true_ss: f64,
    #[serde(rename = "T_sum_ss")]
    pub t_sum_ss: f64,
    #[serde(rename = "f_E_err_pct")]
    pub f_e_err_pct: f64,
    #[serde(rename = "T_sum_err_pct")]
    pub t_sum_err_pct: f64,
    pub settled: bool,
    pub saturated_steps: usize,
    pub engaged_at_s: f64,
    pub transitions: usize,
    pub rows: usize,
    #[serde(skip)]
    pub telemetry: Vec<TelemetryRow>,
}

impl SimReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        write_telemetry(&self.telemetry, out)
    }
}

pub fn write_telemetry<W: Write>(rows: &[TelemetryRow], out: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(TELEMETRY_HEADER)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Contact point on the surface, approach target and start position for `case`.
fn approach_geometry(case: &SimCase, pose: &PoseConfig, surface: &SurfaceDef) -> (Vec2, Vec2) {
    let into_surface = z_axis(pose.beta_signed());
    let tip0 = case.params.tip_offset(0.0, pose.alpha_signed());
    let target = surface.anchor_point + into_surface * case.approach.overshoot - tip0;
    let start = target - into_surface * case.approach.standoff;
    (start, target)
}

struct ImuNoise {
    rng: ChaCha8Rng,
    accel: Option<Normal<f64>>,
    gyro: Option<Normal<f64>>,
}

impl ImuNoise {
    fn new(cfg: &ObserverConfig) -> Result<Self> {
        let dist = |std: f64| -> Result<Option<Normal<f64>>> {
            if std > 0.0 {
                Normal::new(0.0, std).map(Some).map_err(|e| Error::Validation(e.to_string()))
            } else {
                Ok(None)
            }
        };
        Ok(Self {
            rng: ChaCha8Rng::seed_from_u64(cfg.seed),
            accel: dist(cfg.accel_noise_std)?,
            gyro: dist(cfg.gyro_noise_std)?,
        })
    }

    fn corrupt(&mut self, mut s: ImuSample) -> ImuSample {
        if let Some(n) = &self.accel {
            s.specific_force += Vec2::new(n.sample(&mut self.rng), n.sample(&mut self.rng));
        }
        if let Some(n) = &self.gyro {
            s.omega += n.sample(&mut self.rng);
        }
        s
    }
}

/// Runs the approach, contact and interaction phases of one case.
pub fn run_case(case: &SimCase) -> Result<SimReport> {
    case.validate()?;
    let params = case.params;
    let pose = case.pose()?;
    let alpha = pose.alpha_signed();
    let sol = equilibrium_forces(&pose, &params.mass_geometry(&pose)?)?;

    let surface = SurfaceDef::new(pose.beta_signed(), Vec2::zeros());
    let plant = Plant {
        surface: Some(surface),
        contact: case.contact,
        ..Plant::free_flight(params, alpha)
    };
    let (start, target) = approach_geometry(case, &pose, &surface);
    let mut state = match case.start_pose {
        Some(sp) => PlanarState::at_rest(Vec2::new(sp.y, sp.z), sp.phi_deg.to_radians()),
        None => PlanarState::at_rest(start, 0.0),
    };
    let origin = state.p;
    let reference = ApproachReference {
        start: state.p,
        target,
        speed: case.approach.speed,
    };
    let mut ctl = Controller::new(case.gains, params, pose, sol.f_e, reference, case.observer.threshold);
    let mut observer = WrenchObserver::new(case.observer.k_obs);
    let mut noise = ImuNoise::new(&case.observer)?;
    let mut est = WrenchEstimate::default();

    let dt = case.dt_s;
    let n = case.steps();
    let mut rows = Vec::with_capacity(n + 1);
    let mut saturated_steps = 0;
    let mut engaged_at = None;
    for k in 0..=n {
        let t = k as f64 * dt;
        let out = ctl.step(t, &state, &est, dt)?;
        if out.mode == Mode::Interaction && engaged_at.is_none() {
            engaged_at = Some(t);
        }
        let alloc = allocate(out.t_sum_cmd, out.moments, &params);
        saturated_steps += usize::from(alloc.saturated);
        let u = BodyInputs {
            t_sum: alloc.achieved_t_sum,
            m_x: alloc.achieved_m_x,
        };
        let contact = plant.contact_wrench(&state);
        let deriv = plant.derivative(&state, &u);
        let imu = noise.corrupt(ImuSample::ideal(&state, &deriv, params.g));
        est = observer.step(
            &imu,
            &AppliedInputs {
                t_sum: u.t_sum,
                tau_x: u.m_x,
            },
            state.phi,
            alpha,
            &params,
            dt,
        );
        let th = alloc.command.thrusts;
        rows.push(TelemetryRow {
            t,
            y: state.p.x,
            z: state.p.y,
            phi_deg: state.phi.to_degrees(),
            vy: state.v.x,
            vz: state.v.y,
            omega: state.omega,
            t_sum_cmd: out.t_sum_cmd,
            t_sum_ach: u.t_sum,
            m_x: u.m_x,
            t1: th[0],
            t2: th[1],
            t3: th[2],
            t4: th[3],
            f_e_est: est.f_e_est,
            f_e_true: push_component(&contact.f, state.phi + alpha),
            mode: out.mode.as_flag(),
            u_f: out.u_f,
        });
        if k < n {
            state = plant.step_rk4(&state, &u, dt).map_err(|e| match e {
                Error::NonFinite => Error::Diverged { t: t + dt },
                other => other,
            })?;
            if state.phi.abs() > 1.4 || (state.p - origin).norm() > 10.0 {
                return Err(Error::Diverged { t: t + dt });
            }
        }
    }
    let engaged_at_s = engaged_at.ok_or(Error::DidNotEngage {
        duration_s: case.duration_s,
    })?;

    let window = &rows[rows.len() - ((rows.len() as f64 * STEADY_WINDOW).ceil() as usize).max(1)..];
    let (f_mean, f_std) = mean_std(window.iter().map(|r| r.f_e_est));
    let (f_true, _) = mean_std(window.iter().map(|r| r.f_e_true));
    let (t_mean, _) = mean_std(window.iter().map(|r| r.t_sum_ach));
    let pct = |x: f64, r: f64| 100.0 * (x - r).abs() / r;
    Ok(SimReport {
        name: case.name.clone(),
        beta_deg: case.beta_deg,
        phi_d_deg: case.phi_d_deg,
        alpha_d_deg: alpha.to_degrees(),
        f_e_d: sol.f_e,
        t_sum_d: sol.t_sum,
        f_e_ss: f_mean,
        f_e_true_ss: f_true,
        t_sum_ss: t_mean,
        f_e_err_pct: pct(f_mean, sol.f_e),
        t_sum_err_pct: pct(t_mean, sol.t_sum),
        settled: f_mean > 0.0 && f_std < SETTLED_STD_FRACTION * f_mean,
        saturated_steps,
        engaged_at_s,
        transitions: ctl.transitions(),
        rows: rows.len(),
        telemetry: rows,
    })
}

fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var.sqrt())
}
