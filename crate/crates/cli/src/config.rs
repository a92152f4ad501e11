//! Run configuration files.
//!
//! A config is plain text with `key = value` lines. Keys before the first
//! section header are top-level (only `model` is recognised there). Each
//! model reads its parameters from a section named after it, and the
//! optional `[grid]`, `[run]` and `[fit]` sections tune the sweep:
//!
//! ```text
//! model = free_wave
//!
//! [free_wave]
//! n = 1
//! s = 0
//! u0 = zero
//! v1 = gaussian(1)
//!
//! [grid]
//! t_min = 1e2
//! t_max = 1e6
//! count = 25
//! log = true
//!
//! [run]
//! tol = 1e-6
//! ```
//!
//! `#` and `;` start comments. Unknown sections and keys are errors, so a
//! typo never silently falls back to a default.

use std::collections::BTreeMap;
use std::path::PathBuf;

use wavenorm_core::quadrature::TOL_RANGE;
use wavenorm_core::RadialProfile;

use crate::grammar::parse_profile;

pub const MODEL_NAMES: [&str; 7] = [
    "free_wave",
    "sigma_evolution",
    "scale_invariant",
    "mgt",
    "euler",
    "singular_l2",
    "kernel",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Raw `key = value` content, grouped by section ("" for the top level).
#[derive(Debug, Default, Clone)]
pub struct Document {
    sections: BTreeMap<String, BTreeMap<String, String>>,
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut doc = Document::default();
        doc.sections.insert(String::new(), BTreeMap::new());
        let mut current = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = match raw.find(['#', ';']) {
                Some(cut) => &raw[..cut],
                None => raw,
            }
            .trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let Some(name) = rest.strip_suffix(']') else {
                    return err(format!("line {line_no}: unterminated section header"));
                };
                let name = name.trim().to_string();
                if name.is_empty() || doc.sections.contains_key(&name) {
                    return err(format!("line {line_no}: empty or repeated section '[{name}]'"));
                }
                doc.sections.insert(name.clone(), BTreeMap::new());
                current = name;
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return err(format!("line {line_no}: expected 'key = value'"));
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if key.is_empty() {
                return err(format!("line {line_no}: empty key"));
            }
            let section = doc.sections.get_mut(&current).expect("section exists");
            if section.insert(key.clone(), value).is_some() {
                return err(format!("line {line_no}: duplicate key '{key}'"));
            }
        }
        Ok(doc)
    }

    fn section(&self, name: &str) -> Option<&BTreeMap<String, String>> {
        self.sections.get(name)
    }
}

/// Typed, consuming view of one section; reports leftovers as unknown keys.
struct Section<'a> {
    name: &'a str,
    entries: BTreeMap<String, String>,
}

impl<'a> Section<'a> {
    fn new(doc: &Document, name: &'a str) -> Self {
        Self {
            name,
            entries: doc.section(name).cloned().unwrap_or_default(),
        }
    }

    fn raw(&mut self, key: &str) -> Option<String> {
        self.entries.remove(key)
    }

    fn ctx(&self, key: &str) -> String {
        if self.name.is_empty() {
            key.to_string()
        } else {
            format!("[{}] {key}", self.name)
        }
    }

    fn f64_opt(&mut self, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.raw(key) {
            None => Ok(None),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .map(Some)
                .ok_or_else(|| ConfigError(format!("{}: '{v}' is not a finite number", self.ctx(key)))),
        }
    }

    fn f64_or(&mut self, key: &str, default: f64) -> Result<f64, ConfigError> {
        Ok(self.f64_opt(key)?.unwrap_or(default))
    }

    fn f64_req(&mut self, key: &str) -> Result<f64, ConfigError> {
        self.f64_opt(key)?
            .ok_or_else(|| ConfigError(format!("{}: missing", self.ctx(key))))
    }

    fn u32_req(&mut self, key: &str) -> Result<u32, ConfigError> {
        let v = self.f64_req(key)?;
        if v < 1.0 || v.fract() != 0.0 || v > 64.0 {
            return err(format!("{}: expected an integer in 1..=64", self.ctx(key)));
        }
        Ok(v as u32)
    }

    fn usize_or(&mut self, key: &str, default: usize) -> Result<usize, ConfigError> {
        match self.f64_opt(key)? {
            None => Ok(default),
            Some(v) if v >= 0.0 && v.fract() == 0.0 && v <= 1e7 => Ok(v as usize),
            Some(_) => err(format!("{}: expected a non-negative integer", self.ctx(key))),
        }
    }

    fn bool_or(&mut self, key: &str, default: bool) -> Result<bool, ConfigError> {
        match self.raw(key).as_deref() {
            None => Ok(default),
            Some("true" | "yes" | "1") => Ok(true),
            Some("false" | "no" | "0") => Ok(false),
            Some(v) => err(format!("{}: '{v}' is not a boolean", self.ctx(key))),
        }
    }

    fn profile(&mut self, key: &str, default: Option<&str>) -> Result<ProfileSpec, ConfigError> {
        let src = match (self.raw(key), default) {
            (Some(v), _) => v,
            (None, Some(d)) => d.to_string(),
            (None, None) => return err(format!("{}: missing profile", self.ctx(key))),
        };
        let profile =
            parse_profile(&src).map_err(|e| ConfigError(format!("{}: {e}", self.ctx(key))))?;
        Ok(ProfileSpec {
            source: src,
            profile,
        })
    }

    fn finish(self) -> Result<(), ConfigError> {
        match self.entries.keys().next() {
            None => Ok(()),
            Some(k) => err(format!("{}: unknown key", self.ctx(k))),
        }
    }
}

/// A parsed profile together with the text it came from.
#[derive(Debug, Clone)]
pub struct ProfileSpec {
    pub source: String,
    pub profile: RadialProfile,
}

impl ProfileSpec {
    pub fn parse(src: &str) -> Result<Self, ConfigError> {
        Ok(Self {
            source: src.to_string(),
            profile: parse_profile(src).map_err(|e| ConfigError(e.to_string()))?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EulerField {
    Density,
    Velocity,
}

#[derive(Debug, Clone)]
pub enum ModelConfig {
    FreeWave {
        n: u32,
        s: f64,
        u0: ProfileSpec,
        v1: ProfileSpec,
    },
    SigmaEvolution {
        n: u32,
        sigma: f64,
        s: f64,
        w0: ProfileSpec,
        w1: ProfileSpec,
    },
    ScaleInvariant {
        n: u32,
        s: f64,
        tau1: f64,
        u0: ProfileSpec,
        u1: ProfileSpec,
    },
    Mgt {
        n: u32,
        s: f64,
        tau: f64,
        psi0: ProfileSpec,
        psi1: ProfileSpec,
        psi2: ProfileSpec,
    },
    Euler {
        n: u32,
        s: f64,
        beta: f64,
        rho0: ProfileSpec,
        /// Potential scalar `q̂`, given directly or derived from a divergence.
        potential: ProfileSpec,
        solenoidal: f64,
        field: EulerField,
    },
    SingularL2 {
        n: u32,
        sigma: f64,
        epsilon: f64,
    },
    /// General kernel `cos(r^σ t) φ₀ + sin(r^σ t)/r^{σ+s} φ₁` with `φ₁` as given.
    Kernel {
        n: u32,
        sigma: f64,
        s: f64,
        phi0: ProfileSpec,
        phi1: ProfileSpec,
    },
}

impl ModelConfig {
    pub fn name(&self) -> &'static str {
        match self {
            ModelConfig::FreeWave { .. } => "free_wave",
            ModelConfig::SigmaEvolution { .. } => "sigma_evolution",
            ModelConfig::ScaleInvariant { .. } => "scale_invariant",
            ModelConfig::Mgt { .. } => "mgt",
            ModelConfig::Euler { .. } => "euler",
            ModelConfig::SingularL2 { .. } => "singular_l2",
            ModelConfig::Kernel { .. } => "kernel",
        }
    }

    fn from_section(name: &str, doc: &Document) -> Result<Self, ConfigError> {
        let mut sec = Section::new(doc, name);
        let z = Some("zero");
        let model = match name {
            "free_wave" => ModelConfig::FreeWave {
                n: sec.u32_req("n")?,
                s: sec.f64_or("s", 0.0)?,
                u0: sec.profile("u0", z)?,
                v1: sec.profile("v1", None)?,
            },
            "sigma_evolution" => ModelConfig::SigmaEvolution {
                n: sec.u32_req("n")?,
                sigma: sec.f64_req("sigma")?,
                s: sec.f64_or("s", 0.0)?,
                w0: sec.profile("w0", z)?,
                w1: sec.profile("w1", None)?,
            },
            "scale_invariant" => ModelConfig::ScaleInvariant {
                n: sec.u32_req("n")?,
                s: sec.f64_or("s", 0.0)?,
                tau1: sec.f64_req("tau1")?,
                u0: sec.profile("u0", z)?,
                u1: sec.profile("u1", None)?,
            },
            "mgt" => ModelConfig::Mgt {
                n: sec.u32_req("n")?,
                s: sec.f64_or("s", 0.0)?,
                tau: sec.f64_req("tau")?,
                psi0: sec.profile("psi0", z)?,
                psi1: sec.profile("psi1", z)?,
                psi2: sec.profile("psi2", z)?,
            },
            "euler" => {
                let n = sec.u32_req("n")?;
                let s = sec.f64_or("s", 0.0)?;
                let beta = sec.f64_req("beta")?;
                let rho0 = sec.profile("rho0", z)?;
                let potential = match (sec.raw("potential"), sec.raw("divergence")) {
                    (Some(_), Some(_)) => {
                        return err("[euler] give either 'potential' or 'divergence', not both")
                    }
                    (Some(p), None) => ProfileSpec::parse(&p)
                        .map_err(|e| ConfigError(format!("[euler] potential: {e}")))?,
                    (None, Some(d)) => {
                        let div = ProfileSpec::parse(&d)
                            .map_err(|e| ConfigError(format!("[euler] divergence: {e}")))?;
                        ProfileSpec {
                            source: format!("({d})/r"),
                            profile: wavenorm_core::models::potential_from_divergence(&div.profile),
                        }
                    }
                    (None, None) => ProfileSpec::parse("zero")?,
                };
                let solenoidal = sec.f64_or("solenoidal", 0.0)?;
                let field = match sec.raw("field").as_deref() {
                    None | Some("density") => EulerField::Density,
                    Some("velocity") => EulerField::Velocity,
                    Some(v) => return err(format!("[euler] field: '{v}' is not density|velocity")),
                };
                ModelConfig::Euler {
                    n,
                    s,
                    beta,
                    rho0,
                    potential,
                    solenoidal,
                    field,
                }
            }
            "singular_l2" => ModelConfig::SingularL2 {
                n: sec.u32_req("n")?,
                sigma: sec.f64_or("sigma", 1.0)?,
                epsilon: sec.f64_req("epsilon")?,
            },
            "kernel" => ModelConfig::Kernel {
                n: sec.u32_req("n")?,
                sigma: sec.f64_req("sigma")?,
                s: sec.f64_or("s", 0.0)?,
                phi0: sec.profile("phi0", z)?,
                phi1: sec.profile("phi1", None)?,
            },
            other => {
                return err(format!(
                    "model '{other}' is not one of {}",
                    MODEL_NAMES.join(" | ")
                ))
            }
        };
        sec.finish()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub t_min: f64,
    pub t_max: f64,
    pub count: usize,
    pub log: bool,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.log {
            wavenorm_core::asymptotics::log_spaced(self.t_min, self.t_max, self.count)
        } else {
            let step = (self.t_max - self.t_min) / (self.count - 1) as f64;
            (0..self.count)
                .map(|i| {
                    if i == self.count - 1 {
                        self.t_max
                    } else {
                        self.t_min + step * i as f64
                    }
                })
                .collect()
        }
    }
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            t_min: 1e2,
            t_max: 1e6,
            count: wavenorm_core::asymptotics::DEFAULT_SAMPLES,
            log: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub grid: Grid,
    pub tol: f64,
    /// Fit window; defaults to the grid range.
    pub fit_window: (f64, f64),
    /// Optional `M/D` band for a two-sided check of the sweep.
    pub band: Option<(f64, f64)>,
    /// Prior sweep CSV for `fit`.
    pub input: Option<PathBuf>,
}

pub const DEFAULT_TOL: f64 = 1e-6;

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let doc = Document::parse(text)?;
        for name in doc.sections.keys() {
            let known = name.is_empty()
                || matches!(name.as_str(), "grid" | "run" | "fit")
                || MODEL_NAMES.contains(&name.as_str());
            if !known {
                return err(format!("unknown section '[{name}]'"));
            }
        }
        let mut top = Section::new(&doc, "");
        let Some(model_name) = top.raw("model") else {
            return err("missing top-level 'model = <name>'");
        };
        top.finish()?;
        for name in MODEL_NAMES {
            if name != model_name && doc.section(name).is_some() {
                return err(format!("section '[{name}]' does not match model '{model_name}'"));
            }
        }
        let model = ModelConfig::from_section(&model_name, &doc)?;

        let mut g = Section::new(&doc, "grid");
        let defaults = Grid::default();
        let grid = Grid {
            t_min: g.f64_or("t_min", defaults.t_min)?,
            t_max: g.f64_or("t_max", defaults.t_max)?,
            count: g.usize_or("count", defaults.count)?,
            log: g.bool_or("log", defaults.log)?,
        };
        g.finish()?;
        if !(grid.t_min > 0.0) {
            return err("[grid] t_min must be > 0");
        }
        if grid.count < 2 {
            return err("[grid] count must be >= 2");
        }
        if !(grid.t_max > grid.t_min) {
            return err("[grid] t_max must exceed t_min");
        }

        let mut r = Section::new(&doc, "run");
        let tol = r.f64_or("tol", DEFAULT_TOL)?;
        let input = r.raw("input").map(PathBuf::from);
        let band = match (r.f64_opt("band_low")?, r.f64_opt("band_high")?) {
            (Some(lo), Some(hi)) if lo > 0.0 && lo < hi => Some((lo, hi)),
            (None, None) => None,
            _ => return err("[run] band_low and band_high must both be set with 0 < low < high"),
        };
        r.finish()?;
        check_tol(tol)?;

        let mut f = Section::new(&doc, "fit");
        let fit_window = (
            f.f64_or("t_min", grid.t_min)?,
            f.f64_or("t_max", grid.t_max)?,
        );
        f.finish()?;
        if !(fit_window.0 > 0.0 && fit_window.0 < fit_window.1) {
            return err("[fit] window needs 0 < t_min < t_max");
        }

        Ok(RunConfig {
            model,
            grid,
            tol,
            fit_window,
            band,
            input,
        })
    }
}

pub fn check_tol(tol: f64) -> Result<(), ConfigError> {
    if tol > TOL_RANGE.0 && tol < TOL_RANGE.1 {
        Ok(())
    } else {
        err(format!(
            "tolerance {tol} outside ({:e}, {:e})",
            TOL_RANGE.0, TOL_RANGE.1
        ))
    }
}
