//! Physical configuration: photon band, exciton disorder, coupling and presets.

mod cavity;
mod config;
pub mod constants;
mod disorder;
mod grid;
mod presets;
mod tabulated;

pub use cavity::CavityDispersion;
pub use config::{Dispersion, SystemConfig};
pub use constants::{PhysicalConstants, C_UM_PER_FS, HBAR_EV_FS};
pub use disorder::GaussianDisorder;
pub use grid::QGrid;
pub use presets::{bodipy_bsw_from_file, preset, PRESET_NAMES};
pub use tabulated::TabulatedDispersion;
