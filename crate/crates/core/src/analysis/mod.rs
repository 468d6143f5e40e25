//! Quantities derived from branch solutions: group velocities, broadening, shifts,
//! weak-disorder theory, the renormalization map and its contours.

mod contour;
mod hopfield;
mod map;
mod perturbative;
mod shift;
pub mod stencil;
mod velocity;

pub use contour::{crossover_slope, extract_contour, Contour, ContourPoint, Field};
pub use hopfield::{exciton_fraction, hopfield_exciton_weight};
pub use map::{renormalization_map, renormalization_metric, MetricMode, RenormalizationMap};
pub use perturbative::{modified_rabi, perturbative_energy, WEAK_DISORDER_MARGIN};
pub use shift::{disorder_shift, ShiftProfile};
pub use velocity::{
    group_velocity, wavevector_broadening, zero_disorder_velocity, VelocityProfile,
};
