//! Frames and angle conventions of the planar model.
//!
//! Everything lives in the inertial (Y, Z) plane with Z up. Angles are
//! rotations about the inertial X axis, positive anticlockwise, stored in
//! radians. A 2-vector `(y, z)` is represented as [`Vec2`] with `x` holding
//! the Y component and `y` holding the Z component.

use std::f64::consts::FRAC_PI_2;

use nalgebra::{Matrix2, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planar vector in the inertial (Y, Z) plane.
pub type Vec2 = Vector2<f64>;

/// Slack allowed on the `beta = phi + alpha` constraint.
pub const ANGLE_SUM_TOL: f64 = 1e-12;

const RANGE_TOL: f64 = 1e-12;

/// Rotation about X by `angle`, acting on `(y, z)` coordinates.
pub fn rotation(angle: f64) -> Matrix2<f64> {
    let (s, c) = angle.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Z axis of a frame rotated by `angle` about X, expressed in the inertial frame.
pub fn z_axis(angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(-s, c)
}

/// Y axis of a frame rotated by `angle` about X.
pub fn y_axis(angle: f64) -> Vec2 {
    let (s, c) = angle.sin_cos();
    Vec2::new(c, s)
}

/// Planar cross product: X component of `a × b` for vectors in the (Y, Z) plane.
pub fn cross(a: &Vec2, b: &Vec2) -> f64 {
    a.x * b.y - a.y * b.x
}

/// Orientation of the end-effector frame: `phi_E = phi + alpha`.
pub fn ee_orientation(phi_signed: f64, alpha_signed: f64) -> f64 {
    phi_signed + alpha_signed
}

/// Surface inclination, vehicle roll and joint angle of a pushing pose.
///
/// Constructed through [`PoseConfig::new`] or [`solve_joint_angle`], both of
/// which enforce `beta = phi + alpha` and a common sign for all three angles.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoseConfig {
    beta_signed: f64,
    phi_signed: f64,
    alpha_signed: f64,
}

impl PoseConfig {
    pub fn new(beta_signed: f64, phi_signed: f64, alpha_signed: f64) -> Result<Self> {
        for (name, v) in [("beta", beta_signed), ("phi", phi_signed), ("alpha", alpha_signed)] {
            if !v.is_finite() || v.abs() > FRAC_PI_2 + RANGE_TOL {
                return Err(Error::InvalidConfig(format!(
                    "{name} = {v} rad outside [-pi/2, pi/2]"
                )));
            }
        }
        let sum = ee_orientation(phi_signed, alpha_signed);
        if (sum - beta_signed).abs() > ANGLE_SUM_TOL {
            return Err(Error::InvalidConfig(format!(
                "end-effector not orthogonal to surface: phi + alpha = {sum}, beta = {beta_signed}"
            )));
        }
        let mixed = |a: f64, b: f64| a * b < 0.0;
        if mixed(beta_signed, phi_signed)
            || mixed(beta_signed, alpha_signed)
            || mixed(phi_signed, alpha_signed)
        {
            return Err(Error::InvalidConfig(
                "beta, phi and alpha must share the same sign".into(),
            ));
        }
        Ok(Self {
            beta_signed,
            phi_signed,
            alpha_signed,
        })
    }

    /// Builds a pose from magnitudes `beta0 >= phi0 >= 0` and the sign selector `k_s`.
    pub fn from_magnitudes(beta0: f64, phi0: f64, k_s: f64) -> Result<Self> {
        if beta0 < 0.0 || phi0 < 0.0 {
            return Err(Error::InvalidConfig("magnitudes must be non-negative".into()));
        }
        let k = if k_s < 0.0 { -1.0 } else { 1.0 };
        Self::new(k * beta0, k * phi0, k * (beta0 - phi0))
    }

    pub fn beta_signed(&self) -> f64 {
        self.beta_signed
    }

    pub fn phi_signed(&self) -> f64 {
        self.phi_signed
    }

    pub fn alpha_signed(&self) -> f64 {
        self.alpha_signed
    }

    pub fn beta0(&self) -> f64 {
        self.beta_signed.abs()
    }

    pub fn phi0(&self) -> f64 {
        self.phi_signed.abs()
    }

    pub fn alpha0(&self) -> f64 {
        self.alpha_signed.abs()
    }

    /// Sign selector: `-1` for negative surfaces, `+1` otherwise.
    pub fn k_s(&self) -> f64 {
        if self.beta_signed < 0.0 {
            -1.0
        } else {
            1.0
        }
    }

    pub fn ee_orientation(&self) -> f64 {
        ee_orientation(self.phi_signed, self.alpha_signed)
    }

    /// The flat-ceiling pose `beta = phi = alpha = 0`.
    pub fn is_ceiling(&self) -> bool {
        self.beta_signed == 0.0 && self.phi_signed == 0.0 && self.alpha_signed == 0.0
    }
}

/// Joint angle that keeps the end-effector orthogonal to a surface of
/// inclination `beta_signed` while the vehicle rolls to `phi_desired`.
pub fn solve_joint_angle(beta_signed: f64, phi_desired: f64) -> Result<PoseConfig> {
    if !beta_signed.is_finite() || beta_signed.abs() > FRAC_PI_2 + RANGE_TOL {
        return Err(Error::InvalidSurface(format!(
            "beta = {beta_signed} rad outside [-pi/2, pi/2]"
        )));
    }
    if beta_signed == 0.0 {
        if phi_desired == 0.0 {
            return PoseConfig::new(0.0, 0.0, 0.0);
        }
        return Err(Error::InvalidSurface(
            "horizontal surface admits only the zero-roll pose".into(),
        ));
    }
    if phi_desired * beta_signed < 0.0 {
        return Err(Error::InvalidConfig(
            "desired roll must have the sign of the surface inclination".into(),
        ));
    }
    let beta0 = beta_signed.abs();
    let phi0 = phi_desired.abs();
    if phi0 >= beta0 {
        return Err(Error::SingularConfig {
            alpha0: (beta0 - phi0).max(0.0),
        });
    }
    let k_s = beta_signed.signum();
    // alpha is taken as the exact remainder so the sum constraint holds bit-for-bit
    // whenever the subtraction is exact.
    let phi = k_s * phi0;
    PoseConfig::new(beta_signed, phi, beta_signed - phi)
}

/// A flat rigid work surface obtained by rotating the horizontal plane by `beta_signed`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurfaceDef {
    pub beta_signed: f64,
    pub anchor_point: Vec2,
}

/// Unit normal and tangent of a surface.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurfaceFrame {
    /// Points from the surface toward the side the robot operates on (below it).
    pub normal: Vec2,
    /// Surface direction, the rotated inertial Y axis.
    pub tangent: Vec2,
}

/// Normal and tangent of the surface line.
///
/// The normal is the negative Z axis of the rotated plane, i.e. it points
/// away from the surface toward the robot's side, and equals `-Z_E` for an
/// end-effector pushing orthogonally into the surface.
pub fn surface_frame(surface: &SurfaceDef) -> SurfaceFrame {
    SurfaceFrame {
        normal: -z_axis(surface.beta_signed),
        tangent: y_axis(surface.beta_signed),
    }
}

impl SurfaceDef {
    pub fn new(beta_signed: f64, anchor_point: Vec2) -> Self {
        Self {
            beta_signed,
            anchor_point,
        }
    }

    pub fn frame(&self) -> SurfaceFrame {
        surface_frame(self)
    }

    /// Signed distance of `point` from the surface, positive on the robot's side.
    pub fn signed_distance(&self, point: &Vec2) -> f64 {
        (point - self.anchor_point).dot(&self.frame().normal)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn ee_orientation_examples() {
        assert_eq!(ee_orientation(0.0, 0.0), 0.0);
        assert_abs_diff_eq!(ee_orientation(deg(-10.0), deg(-50.0)), deg(-60.0), epsilon = 1e-15);
        assert_abs_diff_eq!(ee_orientation(deg(15.0), deg(30.0)), deg(45.0), epsilon = 1e-15);
    }

    #[test]
    fn joint_angle_table_cases() {
        let p = solve_joint_angle(deg(-60.0), deg(-10.0)).unwrap();
        assert_abs_diff_eq!(p.alpha_signed(), deg(-50.0), epsilon = 1e-12);
        assert_eq!(p.k_s(), -1.0);
        let p = solve_joint_angle(deg(-90.0), deg(-20.0)).unwrap();
        assert_abs_diff_eq!(p.alpha_signed(), deg(-70.0), epsilon = 1e-12);
        let p = solve_joint_angle(deg(30.0), 0.0).unwrap();
        assert_abs_diff_eq!(p.alpha_signed(), deg(30.0), epsilon = 1e-15);
        assert_eq!(p.phi_signed(), 0.0);
        assert_eq!(p.k_s(), 1.0);
    }

    #[test]
    fn joint_angle_errors() {
        assert!(matches!(
            solve_joint_angle(deg(-30.0), deg(-30.0)),
            Err(Error::SingularConfig { .. })
        ));
        assert!(matches!(
            solve_joint_angle(deg(-30.0), deg(-40.0)),
            Err(Error::SingularConfig { .. })
        ));
        assert!(matches!(
            solve_joint_angle(0.0, deg(5.0)),
            Err(Error::InvalidSurface(_))
        ));
        assert!(matches!(
            solve_joint_angle(deg(30.0), deg(-5.0)),
            Err(Error::InvalidConfig(_))
        ));
        let ceiling = solve_joint_angle(0.0, 0.0).unwrap();
        assert!(ceiling.is_ceiling());
    }

    #[test]
    fn pose_rejects_mixed_signs_and_broken_sum() {
        assert!(PoseConfig::new(deg(30.0), deg(-5.0), deg(35.0)).is_err());
        assert!(PoseConfig::new(deg(30.0), deg(5.0), deg(20.0)).is_err());
        assert!(PoseConfig::new(deg(100.0), deg(50.0), deg(50.0)).is_err());
    }

    #[test]
    fn surface_frame_examples() {
        let f = surface_frame(&SurfaceDef::new(0.0, Vec2::zeros()));
        assert_abs_diff_eq!(f.normal, Vec2::new(0.0, -1.0), epsilon = 1e-15);
        assert_abs_diff_eq!(f.tangent, Vec2::new(1.0, 0.0), epsilon = 1e-15);
        // Rotating (0, -1) by -90 degrees about X gives (-1, 0): a wall on the
        // +Y side with the robot on the -Y side.
        let f = surface_frame(&SurfaceDef::new(deg(-90.0), Vec2::zeros()));
        let rotated = rotation(deg(-90.0)) * Vec2::new(0.0, -1.0);
        assert_abs_diff_eq!(f.normal, rotated, epsilon = 1e-15);
        assert_abs_diff_eq!(f.normal, Vec2::new(-1.0, 0.0), epsilon = 1e-15);
    }

    #[test]
    fn normal_is_minus_ee_axis_for_orthogonal_push() {
        let pose = solve_joint_angle(deg(-60.0), deg(-10.0)).unwrap();
        let f = surface_frame(&SurfaceDef::new(pose.beta_signed(), Vec2::zeros()));
        assert_abs_diff_eq!(f.normal, -z_axis(pose.ee_orientation()), epsilon = 1e-15);
    }

    #[test]
    fn signed_distance_sides() {
        let s = SurfaceDef::new(deg(-90.0), Vec2::new(1.0, 0.0));
        assert!(s.signed_distance(&Vec2::new(0.5, 3.0)) > 0.0);
        assert!(s.signed_distance(&Vec2::new(1.5, 3.0)) < 0.0);
        let s = SurfaceDef::new(0.0, Vec2::new(0.0, 2.0));
        assert_abs_diff_eq!(s.signed_distance(&Vec2::new(7.0, 1.0)), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn round_trip_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let beta0: f64 = rng.random_range(1e-3..FRAC_PI_2);
            let phi0 = rng.random_range(0.0..beta0 * 0.999);
            let k: f64 = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let p = solve_joint_angle(k * beta0, k * phi0).unwrap();
            assert!((p.alpha_signed() + p.phi_signed() - p.beta_signed()).abs() <= 1e-12);
        }
    }

    proptest! {
        #[test]
        fn accepted_poses_share_sign(beta0 in 1e-4f64..FRAC_PI_2, frac in 0.0f64..0.999, neg in any::<bool>()) {
            let k = if neg { -1.0 } else { 1.0 };
            let p = solve_joint_angle(k * beta0, k * beta0 * frac).unwrap();
            let s = [p.beta_signed(), p.phi_signed(), p.alpha_signed()];
            prop_assert!(s.iter().all(|v| *v * k >= 0.0));
            prop_assert!((ee_orientation(p.phi_signed(), p.alpha_signed()) - p.beta_signed()).abs() <= 1e-12);
            prop_assert!((p.beta0() - p.phi0() - p.alpha0()).abs() <= 1e-12);
        }

        #[test]
        fn surface_frame_orthonormal(beta in -FRAC_PI_2..FRAC_PI_2) {
            let f = surface_frame(&SurfaceDef::new(beta, Vec2::zeros()));
            prop_assert!((f.normal.norm() - 1.0).abs() < 1e-15);
            prop_assert!((f.tangent.norm() - 1.0).abs() < 1e-15);
            prop_assert!(f.normal.dot(&f.tangent).abs() < 1e-15);
        }
    }
}
