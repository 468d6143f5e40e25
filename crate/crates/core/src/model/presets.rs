use std::sync::{Arc, LazyLock};

use super::{CavityDispersion, Dispersion, GaussianDisorder, SystemConfig, TabulatedDispersion};
use crate::error::{Error, Result};

/// Names accepted by [`preset`].
pub const PRESET_NAMES: [&str; 2] = ["perovskite", "bodipy-bsw"];

const BSW_DATA: &str = include_str!("../../data/bodipy_bsw_dispersion.dat");

static BSW_TABLE: LazyLock<Arc<TabulatedDispersion>> = LazyLock::new(|| {
    Arc::new(
        TabulatedDispersion::parse(BSW_DATA, "bodipy_bsw_dispersion.dat")
            .expect("bundled dispersion table is valid"),
    )
});

/// Built-in systems, both with zero disorder; set σ with [`SystemConfig::with_sigma`].
///
/// * `perovskite`: E_M = 0.214 eV, E_C0 = 0.157 eV, Ω_R = 0.550 eV, L_C = 0.667 μm, m = 1.
/// * `bodipy-bsw`: E_M = 0.213 eV, Ω_R = 0.142 eV, tabulated surface-wave band.
pub fn preset(name: &str) -> Result<SystemConfig> {
    match name {
        "perovskite" => SystemConfig::new(
            Dispersion::Cavity(CavityDispersion::new(0.157, 0.667, 1)?),
            GaussianDisorder::new(0.214, 0.0)?,
            0.550,
            "perovskite",
        ),
        "bodipy-bsw" => bsw_with(Arc::clone(&BSW_TABLE)),
        other => Err(Error::UnknownPreset(other.to_string())),
    }
}

/// The `bodipy-bsw` preset with its band read from `path` instead of the bundled table.
pub fn bodipy_bsw_from_file(path: &std::path::Path) -> Result<SystemConfig> {
    bsw_with(Arc::new(TabulatedDispersion::from_file(path)?))
}

fn bsw_with(table: Arc<TabulatedDispersion>) -> Result<SystemConfig> {
    SystemConfig::new(
        Dispersion::Tabulated(table),
        GaussianDisorder::new(0.213, 0.0)?,
        0.142,
        "bodipy-bsw",
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        let p = preset("perovskite").unwrap();
        assert_eq!(p.omega_r(), 0.550);
        assert_eq!(p.e_m(), 0.214);
        assert_eq!(p.photon_energy(0.0).unwrap(), 0.157);
        let b = preset("bodipy-bsw").unwrap();
        assert_eq!(b.e_m(), 0.213);
        assert_eq!(b.omega_r(), 0.142);
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(preset("unknown"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn bsw_file_override() {
        let missing = bodipy_bsw_from_file(std::path::Path::new("/no/such/band.dat"));
        assert!(matches!(missing, Err(Error::MissingDispersionFile(_))));
    }

    #[test]
    fn bundled_table_round_trips() {
        let t: &TabulatedDispersion = &BSW_TABLE;
        let again = TabulatedDispersion::parse(&t.serialize(), "again").unwrap();
        assert_eq!(&again, t);
    }

    #[test]
    fn both_presets_are_red_detuned() {
        for name in PRESET_NAMES {
            let p = preset(name).unwrap();
            assert!(p.photon_energy(0.0).unwrap() < p.e_m());
            assert!(p.resonance_wavevector().is_some());
        }
    }
}
