/// Reduced Planck constant in eV·fs.
pub const HBAR_EV_FS: f64 = 0.658_211_956_9;
/// Speed of light in μm/fs.
pub const C_UM_PER_FS: f64 = 0.299_792_458;

/// Unit constants used to turn energies and wave vectors into velocities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// eV·fs
    pub hbar: f64,
    /// μm/fs
    pub c: f64,
}

impl PhysicalConstants {
    pub const SI_DEFINED: PhysicalConstants = PhysicalConstants {
        hbar: HBAR_EV_FS,
        c: C_UM_PER_FS,
    };
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::SI_DEFINED
    }
}
