use serde::{Deserialize, Serialize};

use super::{ModelError, ModelKind};

/// One of the two frequency lattices (clockwise `a`, counter-clockwise `b`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Lattice {
    A,
    B,
}

impl Lattice {
    pub fn other(self) -> Self {
        match self {
            Self::A => Self::B,
            Self::B => Self::A,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::A => "a",
            Self::B => "b",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AtomLevel {
    E,
    F,
}

/// Truncated lattice of `n_sites` modes per lattice with hard walls.
///
/// Site label `m` lives at array index `site0_index + m`. The flat state
/// vector is `[a_0 .. a_{n-1}, b_0 .. b_{n-1}, w_e, (w_f)]` in array order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeGrid {
    n_sites: usize,
    site0_index: usize,
}

impl Default for LatticeGrid {
    fn default() -> Self {
        Self::centered(400)
    }
}

impl LatticeGrid {
    pub fn new(n_sites: usize, site0_index: usize) -> Result<Self, ModelError> {
        if n_sites < 2 {
            return Err(ModelError::invalid("grid.n_sites", "must be >= 2"));
        }
        if site0_index >= n_sites {
            return Err(ModelError::invalid("grid.site0_index", "must lie inside the grid"));
        }
        Ok(Self { n_sites, site0_index })
    }

    /// Site 0 at the middle of the array.
    pub fn centered(n_sites: usize) -> Self {
        Self { n_sites, site0_index: n_sites / 2 }
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn site0_index(&self) -> usize {
        self.site0_index
    }

    /// Smallest site label on the grid.
    pub fn m_min(&self) -> i64 {
        -(self.site0_index as i64)
    }

    /// Largest site label on the grid.
    pub fn m_max(&self) -> i64 {
        (self.n_sites - 1 - self.site0_index) as i64
    }

    pub fn contains(&self, m: i64) -> bool {
        (self.m_min()..=self.m_max()).contains(&m)
    }

    /// Array position of site `m` within one lattice block.
    pub fn site_index(&self, m: i64) -> Option<usize> {
        self.contains(m).then(|| (m - self.m_min()) as usize)
    }

    pub fn site_label(&self, index: usize) -> i64 {
        index as i64 + self.m_min()
    }

    /// Flat state index of site `m` on `lattice`.
    pub fn index(&self, lattice: Lattice, m: i64) -> Option<usize> {
        let i = self.site_index(m)?;
        Some(match lattice {
            Lattice::A => i,
            Lattice::B => self.n_sites + i,
        })
    }

    pub fn atom_index(&self, kind: ModelKind, level: AtomLevel) -> Option<usize> {
        match (kind, level) {
            (_, AtomLevel::E) => Some(2 * self.n_sites),
            (ModelKind::Full, AtomLevel::F) => Some(2 * self.n_sites + 1),
            (ModelKind::Effective, AtomLevel::F) => None,
        }
    }

    pub fn dim(&self, kind: ModelKind) -> usize {
        2 * self.n_sites + kind.atom_levels()
    }

    /// Number of sites between `m` and the nearest wall.
    pub fn boundary_margin(&self, m: i64) -> Option<u64> {
        self.contains(m).then(|| (m - self.m_min()).min(self.m_max() - m) as u64)
    }

    /// Both coupling sites strictly inside the array.
    pub fn check_coupling_sites(&self, n_sep: usize) -> Result<(), ModelError> {
        let n = n_sep as i64;
        if !(self.contains(0) && self.contains(n))
            || self.boundary_margin(0) == Some(0)
            || self.boundary_margin(n) == Some(0)
        {
            return Err(ModelError::Configuration(format!(
                "coupling sites 0 and {n} must lie strictly inside the grid [{}, {}]",
                self.m_min(),
                self.m_max()
            )));
        }
        Ok(())
    }
}
