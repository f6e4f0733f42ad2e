//! TOML document describing a [`FieldState`].
//!
//! ```toml
//! format_version = 1
//! time = 0.0              # s, optional (default 0)
//!
//! [geometry]
//! radius = 0.05           # m
//! height = 0.08           # m
//!
//! [constants]             # optional, each key optional (CODATA SI default)
//! speed_of_light = 299792458.0
//! vacuum_permittivity = 8.8541878128e-12
//! reduced_planck = 1.054571817e-34
//!
//! [[mode]]
//! m = 0
//! mu = 1
//! n = 0
//! sigma = 1               # 1 = TM, 2 = TE
//! re = 1.0
//! im = 0.0
//! ```
//!
//! Unknown keys are rejected. Amplitudes are the values at `time`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CavityError, Result};
use crate::spectrum::{mode_data, CavityGeometry, ModeIndex, PhysicalConstants, Polarization};
use crate::synthesis::{FieldState, ModeAmplitude};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub radius: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed_of_light: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vacuum_permittivity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced_planck: Option<f64>,
}

impl ConstantsSection {
    pub fn resolve(&self) -> PhysicalConstants {
        let si = PhysicalConstants::SI;
        PhysicalConstants {
            speed_of_light: self.speed_of_light.unwrap_or(si.speed_of_light),
            vacuum_permittivity: self.vacuum_permittivity.unwrap_or(si.vacuum_permittivity),
            reduced_planck: self.reduced_planck.unwrap_or(si.reduced_planck),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub m: i32,
    pub mu: u32,
    pub n: u32,
    pub sigma: u8,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub format_version: u32,
    #[serde(default)]
    pub time: f64,
    pub geometry: GeometrySection,
    #[serde(default)]
    pub constants: ConstantsSection,
    #[serde(default, rename = "mode")]
    pub modes: Vec<ModeEntry>,
}

impl StateFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: StateFile =
            toml::from_str(text).map_err(|e| CavityError::StateFile(e.to_string()))?;
        if f.format_version != FORMAT_VERSION {
            return Err(CavityError::StateFile(format!(
                "unsupported format_version {}, expected {FORMAT_VERSION}",
                f.format_version
            )));
        }
        Ok(f)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("state file serializes")
    }

    pub fn geometry(&self) -> Result<CavityGeometry> {
        CavityGeometry::with_constants(
            self.geometry.radius,
            self.geometry.height,
            self.constants.resolve(),
        )
    }

    pub fn to_state(&self) -> Result<FieldState> {
        let geom = self.geometry()?;
        let entries = self
            .modes
            .iter()
            .map(|e| {
                let idx = ModeIndex::new(e.m, e.mu, e.n, Polarization::from_number(e.sigma)?)?;
                Ok(ModeAmplitude {
                    mode: mode_data(&geom, idx)?,
                    amplitude: Complex64::new(e.re, e.im),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        FieldState::new(geom, entries, self.time)
    }

    pub fn from_state(state: &FieldState) -> Self {
        let g = state.geometry();
        let k = g.constants();
        StateFile {
            format_version: FORMAT_VERSION,
            time: state.time(),
            geometry: GeometrySection {
                radius: g.radius(),
                height: g.height(),
            },
            constants: ConstantsSection {
                speed_of_light: Some(k.speed_of_light),
                vacuum_permittivity: Some(k.vacuum_permittivity),
                reduced_planck: Some(k.reduced_planck),
            },
            modes: state
                .entries()
                .iter()
                .map(|e| ModeEntry {
                    m: e.mode.index.m,
                    mu: e.mode.index.mu,
                    n: e.mode.index.n,
                    sigma: e.mode.index.sigma.number(),
                    re: e.amplitude.re,
                    im: e.amplitude.im,
                })
                .collect(),
        }
    }
}
