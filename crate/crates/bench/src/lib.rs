//! Fixtures shared by the benchmarks.

use uam_core::force_model::MassGeometry;
use uam_core::geometry::solve_joint_angle;
use uam_core::harness::TABLE_CASES;
use uam_core::{PoseConfig, UamParams};

pub fn table_poses() -> Vec<PoseConfig> {
    TABLE_CASES
        .iter()
        .map(|&(b, p)| solve_joint_angle(b.to_radians(), p.to_radians()).expect("reference pose is valid"))
        .collect()
}

pub fn fixture_mass() -> MassGeometry {
    let p = UamParams::default();
    MassGeometry::new(p.m_b, p.m_e, p.g, 0.0, 0.0).expect("fixture masses are valid")
}
