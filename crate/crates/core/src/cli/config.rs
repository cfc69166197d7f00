//! Resolved run configurations, presets and the file/flag layering.

use std::f64::consts::FRAC_PI_2;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{config_err, CliError, Preset};
use crate::numerics::QuadratureSpec;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    pub k0: f64,
    /// Empty for a single Gaussian; otherwise one superposition per value.
    pub k1: Vec<f64>,
    pub re_beta: Vec<f64>,
    /// Explicit Im β values. When empty the log grid below is used.
    pub im_beta: Vec<f64>,
    pub im_beta_min: f64,
    pub im_beta_max: f64,
    pub im_beta_points: usize,
    pub l: Option<f64>,
    pub laplace: bool,
    pub quadrature: QuadratureSpec,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            k0: 20.0,
            k1: Vec::new(),
            re_beta: vec![0.0],
            im_beta: Vec::new(),
            im_beta_min: 1.0,
            im_beta_max: 400.0,
            im_beta_points: 121,
            l: None,
            laplace: false,
            quadrature: QuadratureSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum GeometryKind {
    Inclined,
    LShaped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AngularConfig {
    pub geometry: GeometryKind,
    pub k0x: f64,
    pub k0y: f64,
    pub re_beta: f64,
    pub im_beta: f64,
    /// Inclinations of the flat screen, radians.
    pub alpha: Vec<f64>,
    /// Screen distances for the finite-L density; empty to skip it.
    pub l: Vec<f64>,
    /// θ range; defaults to the closure of the admissible interval(s).
    pub theta_min: Option<f64>,
    pub theta_max: Option<f64>,
    pub samples: usize,
    pub finite_l_stride: usize,
    pub farfield: bool,
    pub quadrature: QuadratureSpec,
}

impl Default for AngularConfig {
    fn default() -> Self {
        Self {
            geometry: GeometryKind::Inclined,
            k0x: 0.0,
            k0y: -5.0,
            re_beta: 0.0,
            im_beta: 5.0,
            alpha: vec![FRAC_PI_2],
            l: Vec::new(),
            theta_min: None,
            theta_max: None,
            samples: 721,
            finite_l_stride: 1,
            farfield: true,
            quadrature: QuadratureSpec::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub k0x: f64,
    pub k0y: f64,
    pub re_beta: f64,
    pub im_beta: f64,
    pub l: f64,
    pub times: Vec<f64>,
    pub nx: usize,
    pub ny: usize,
    pub x_min: f64,
    pub y_min: f64,
    /// Samples along each screen segment.
    pub boundary_samples: usize,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            k0x: 9.66,
            k0y: 2.59,
            re_beta: 0.0,
            im_beta: 2.59,
            l: 5.0,
            times: vec![0.0, 0.5, 1.0, 1.5, 2.0, 2.5],
            nx: 400,
            ny: 400,
            x_min: -20.0,
            y_min: -8.0,
            boundary_samples: 401,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ValidateConfig {
    pub seed: u64,
    pub quadrature: QuadratureSpec,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self {
            seed: 0x5eed,
            quadrature: QuadratureSpec::default(),
        }
    }
}

/// Log-spaced grid from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|j| (a + (b - a) * j as f64 / (n - 1) as f64).exp())
                .collect()
        }
    }
}

impl SweepConfig {
    pub fn preset(p: Preset) -> Option<Self> {
        match p {
            Preset::Fig1 => Some(Self {
                k0: 20.0,
                re_beta: vec![0.0, 5.0, 10.0, 20.0],
                l: Some(2.0),
                ..Self::default()
            }),
            Preset::Fig2 => Some(Self {
                k0: 5.0,
                k1: vec![15.0, 30.0, 100.0, 1000.0],
                re_beta: vec![0.0],
                im_beta_min: 1.0,
                im_beta_max: 2000.0,
                l: Some(10.0),
                laplace: true,
                ..Self::default()
            }),
            _ => None,
        }
    }

    pub fn im_grid(&self) -> Vec<f64> {
        if self.im_beta.is_empty() {
            log_grid(self.im_beta_min, self.im_beta_max, self.im_beta_points)
        } else {
            self.im_beta.clone()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        finite("k0", self.k0)?;
        for &k in &self.k1 {
            finite("k1", k)?;
        }
        if self.re_beta.is_empty() {
            return Err(config_err("re_beta: the grid is empty"));
        }
        for &r in &self.re_beta {
            finite("re_beta", r)?;
        }
        if self.im_beta.is_empty() {
            finite("im_beta_min", self.im_beta_min)?;
            finite("im_beta_max", self.im_beta_max)?;
            if self.im_beta_points == 0 {
                return Err(config_err("im_beta_points: the grid is empty"));
            }
            if self.im_beta_max < self.im_beta_min {
                return Err(config_err("im_beta_max: must be >= im_beta_min"));
            }
        }
        for b in self.im_grid() {
            im_positive("im_beta", b)?;
        }
        if let Some(l) = self.l {
            positive("l", l)?;
        }
        quadrature(&self.quadrature)
    }
}

impl AngularConfig {
    pub fn preset(p: Preset) -> Option<Self> {
        match p {
            Preset::Fig5 => Some(Self {
                geometry: GeometryKind::Inclined,
                k0x: -1.0,
                k0y: 3f64.sqrt(),
                re_beta: 0.0,
                im_beta: 2.0,
                alpha: [0.0, -0.1, 0.1, -0.2, 0.2].iter().map(|d| FRAC_PI_2 + d).collect(),
                l: vec![15.0],
                finite_l_stride: 24,
                ..Self::default()
            }),
            Preset::Fig7 => Some(Self {
                geometry: GeometryKind::LShaped,
                k0x: 9.66,
                k0y: 2.59,
                re_beta: 0.0,
                im_beta: 2.59,
                alpha: Vec::new(),
                l: vec![15.0, 50.0, 100.0],
                farfield: false,
                ..Self::default()
            }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        finite("k0x", self.k0x)?;
        finite("k0y", self.k0y)?;
        finite("re_beta", self.re_beta)?;
        im_positive("im_beta", self.im_beta)?;
        if self.geometry == GeometryKind::Inclined && self.alpha.is_empty() {
            return Err(config_err("alpha: inclined geometry needs at least one angle"));
        }
        for &a in &self.alpha {
            finite("alpha", a)?;
        }
        for &l in &self.l {
            positive("l", l)?;
        }
        if self.samples == 0 {
            return Err(config_err("samples: must be > 0"));
        }
        if self.finite_l_stride == 0 {
            return Err(config_err("finite_l_stride: must be > 0"));
        }
        if let Some(t) = self.theta_min {
            finite("theta_min", t)?;
        }
        if let Some(t) = self.theta_max {
            finite("theta_max", t)?;
        }
        if let (Some(a), Some(b)) = (self.theta_min, self.theta_max) {
            if b < a {
                return Err(config_err("theta_max: must be >= theta_min"));
            }
        }
        quadrature(&self.quadrature)
    }
}

impl EvolveConfig {
    pub fn preset(p: Preset) -> Option<Self> {
        match p {
            Preset::Fig6 => Some(Self::default()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        finite("k0x", self.k0x)?;
        finite("k0y", self.k0y)?;
        finite("re_beta", self.re_beta)?;
        im_positive("im_beta", self.im_beta)?;
        positive("l", self.l)?;
        if self.times.is_empty() {
            return Err(config_err("times: no snapshot times given"));
        }
        for &t in &self.times {
            finite("times", t)?;
            if t < 0.0 {
                return Err(config_err(format!("times: must be >= 0, got {t}")));
            }
        }
        if self.nx < 2 || self.ny < 2 || self.boundary_samples < 2 {
            return Err(config_err("nx, ny, boundary_samples: need at least 2 points each"));
        }
        finite("x_min", self.x_min)?;
        finite("y_min", self.y_min)?;
        if self.x_min >= self.l || self.y_min >= self.l {
            return Err(config_err("x_min, y_min: must lie below the screen distance l"));
        }
        Ok(())
    }
}

fn finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(config_err(format!("{name}: must be finite, got {v}")))
    }
}

fn positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(config_err(format!("{name}: must be finite and > 0, got {v}")))
    }
}

fn im_positive(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(config_err(format!(
            "{name}: detection requires Im beta > 0, got {v}"
        )))
    }
}

fn quadrature(spec: &QuadratureSpec) -> Result<(), CliError> {
    spec.validate()
        .map_err(|e| config_err(format!("quadrature: {e}")))
}

/// Recursively overlays `top` onto `base`; tables merge, everything else
/// replaces.
fn overlay(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => overlay(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// `base` with the fields of the TOML file at `path` laid over it.
pub fn layer_file<C>(base: C, path: Option<&Path>) -> Result<C, CliError>
where
    C: Serialize + DeserializeOwned,
{
    let Some(path) = path else {
        return Ok(base);
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    let file: toml::Table = toml::from_str(&text)
        .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
    let mut merged = serde_json::to_value(&base).map_err(|e| config_err(e.to_string()))?;
    let file = serde_json::to_value(file).map_err(|e| config_err(e.to_string()))?;
    overlay(&mut merged, file);
    serde_json::from_value(merged).map_err(|e| config_err(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn log_grid_hits_both_ends() {
        let g = log_grid(1.0, 400.0, 121);
        assert_eq!(g.len(), 121);
        assert!((g[0] - 1.0).abs() < 1e-15);
        assert!((g[120] - 400.0).abs() < 1e-10);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn file_values_override_preset_but_keep_the_rest() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "k0 = 7.5\nre_beta = [1.0]\n[quadrature]\nabs_tol = 1e-8").unwrap();
        let base = SweepConfig::preset(Preset::Fig1).unwrap();
        let c = layer_file(base, Some(f.path())).unwrap();
        assert_eq!(c.k0, 7.5);
        assert_eq!(c.re_beta, vec![1.0]);
        assert_eq!(c.l, Some(2.0));
        assert_eq!(c.quadrature.abs_tol, 1e-8);
        assert_eq!(c.quadrature.rel_tol, QuadratureSpec::default().rel_tol);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "kzero = 1.0").unwrap();
        let e = layer_file(SweepConfig::default(), Some(f.path())).unwrap_err();
        assert!(e.to_string().contains("kzero"), "{e}");
    }

    #[test]
    fn field_level_messages() {
        let c = SweepConfig {
            im_beta: vec![1.0, -2.0],
            ..SweepConfig::default()
        };
        let e = c.validate().unwrap_err().to_string();
        assert!(e.contains("im_beta") && e.contains("-2"), "{e}");
        let c = AngularConfig {
            im_beta: 0.0,
            ..AngularConfig::default()
        };
        assert!(c.validate().unwrap_err().to_string().contains("im_beta"));
    }

    #[test]
    fn presets_belong_to_their_commands() {
        assert!(SweepConfig::preset(Preset::Fig5).is_none());
        assert!(AngularConfig::preset(Preset::Fig1).is_none());
        assert!(EvolveConfig::preset(Preset::Fig6).is_some());
        for p in [Preset::Fig1, Preset::Fig2] {
            SweepConfig::preset(p).unwrap().validate().unwrap();
        }
        for p in [Preset::Fig5, Preset::Fig7] {
            AngularConfig::preset(p).unwrap().validate().unwrap();
        }
    }
}
