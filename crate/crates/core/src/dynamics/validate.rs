use super::DynamicsError;
use crate::model::LatticeGrid;

/// RK4 stability boundary on the imaginary axis is `2√2`; stay below it.
pub const MAX_STABLE_PHASE_STEP: f64 = 2.5;

/// Geometry of a wave-packet run for pre-flight checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioGeometry {
    pub n_sep: usize,
    /// Initial packet centre.
    pub center: i64,
    pub sigma: f64,
    /// Speed of every scattered component, `2J |sin k_f|`.
    pub speed: f64,
    pub t_end: f64,
}

impl ScenarioGeometry {
    /// Checks that
    /// * sites 0 and N keep a margin of at least `3σ + |m0|` to the walls, and
    /// * no amplitude reflected off a wall can re-enter the window `[0, N]`
    ///   before `t_end`.
    pub fn validate(&self, grid: &LatticeGrid) -> Result<(), DynamicsError> {
        grid.check_coupling_sites(self.n_sep).map_err(|e| DynamicsError::Configuration(e.to_string()))?;
        let required = 3.0 * self.sigma + self.center.unsigned_abs() as f64;
        for m in [0, self.n_sep as i64] {
            let margin = grid.boundary_margin(m).unwrap_or(0) as f64;
            if margin < required {
                return Err(DynamicsError::Configuration(format!(
                    "coupling site {m} is {margin} sites from a wall; needs at least 3σ + |m0| = {required}"
                )));
            }
        }
        if !(self.speed > 0.0) {
            return Err(DynamicsError::Configuration("packet speed must be positive".into()));
        }
        let lo = self.center as f64 - 3.0 * self.sigma;
        let hi = self.center as f64 + 3.0 * self.sigma;
        let (m_min, m_max) = (grid.m_min() as f64, grid.m_max() as f64);
        let n = self.n_sep as f64;
        // shortest wall round trip from the packet edge back to the window
        let via_left = (lo - m_min).max(0.0) + (0.0 - m_min);
        let via_right = (m_max - hi).max(0.0) + (m_max - n);
        let t_return = via_left.min(via_right) / self.speed;
        if self.t_end > t_return {
            return Err(DynamicsError::Configuration(format!(
                "t_end = {} exceeds the wall round-trip time {t_return:.1}; enlarge the grid or stop earlier",
                self.t_end
            )));
        }
        Ok(())
    }
}
