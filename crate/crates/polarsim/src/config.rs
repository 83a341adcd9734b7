//! Simulation configuration: flat `key = value` text files with `[code]`
//! and `[sim]` sections, plus the domain types they populate.
//!
//! Every validation failure names the offending field so batch runs fail
//! with actionable messages.

use std::fmt;
use std::path::{Path, PathBuf};

use polar::code::{read_reliability_file, CodeConfig};
use polar::crc::Crc;
use polar::select::SelectionProfile;

/// Which decoder drives the simulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecoderKind {
    Sc,
    Scl,
    Sscl,
    PsScl,
}

impl DecoderKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sc" => Some(Self::Sc),
            "scl" => Some(Self::Scl),
            "sscl" => Some(Self::Sscl),
            "ps-scl" | "ps_scl" | "psscl" => Some(Self::PsScl),
            _ => None,
        }
    }

    /// Stable tag used in output file names.
    pub fn tag(self) -> &'static str {
        match self {
            Self::Sc => "sc",
            Self::Scl => "scl",
            Self::Sscl => "sscl",
            Self::PsScl => "ps-scl",
        }
    }
}

impl fmt::Display for DecoderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// A candidate-selection box evaluated against collected PMP tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PmpBox {
    pub label: String,
    pub profile: SelectionProfile,
}

/// Fully validated simulation setup.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub code: CodeConfig,
    pub decoder: DecoderKind,
    pub list_size: usize,
    pub profile: Option<SelectionProfile>,
    pub esn0_sweep: Vec<f64>,
    pub seed: u64,
    pub max_frames: u64,
    pub min_frame_errors: u64,
    pub pmp_boxes: Vec<PmpBox>,
}

/// One or more configuration problems, each tied to a field name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub problems: Vec<(String, String)>,
}

impl ConfigError {
    fn one(field: &str, message: impl Into<String>) -> Self {
        Self {
            problems: vec![(field.to_string(), message.into())],
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "invalid configuration:")?;
        for (field, message) in &self.problems {
            writeln!(f, "  {field}: {message}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

/// Raw key/value view of a config file before validation, so command-line
/// overrides can be layered on top of file contents.
#[derive(Debug, Clone, Default)]
pub struct RawConfig {
    pub n_block: Option<usize>,
    pub k_payload: Option<usize>,
    pub crc: Option<Option<Crc>>,
    pub node_size: Option<usize>,
    pub reliability_file: Option<PathBuf>,
    pub decoder: Option<DecoderKind>,
    pub list_size: Option<usize>,
    pub profile: Option<SelectionProfile>,
    pub esn0_sweep: Option<Vec<f64>>,
    pub seed: Option<u64>,
    pub max_frames: Option<u64>,
    pub min_frame_errors: Option<u64>,
    pub pmp_boxes: Option<Vec<PmpBox>>,
}

/// Parse `x,y,z` (or a single `x`, meaning a rectangle) into a profile.
pub fn parse_profile(s: &str) -> Result<SelectionProfile, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let nums: Result<Vec<usize>, _> = parts.iter().map(|p| p.parse::<usize>()).collect();
    let nums = nums.map_err(|e| format!("expected integers, got {s:?} ({e})"))?;
    let profile = match nums.as_slice() {
        [x] => SelectionProfile::rectangle(*x),
        [x, y, z] => SelectionProfile::new(*x, *y, *z),
        _ => return Err(format!("expected `x`, or `x,y,z`, got {s:?}")),
    };
    profile.map_err(|e| e.to_string())
}

/// Parse `a:b:step` (inclusive), a comma list, or a single value into an
/// ascending sweep of Es/N0 points in dB.
pub fn parse_sweep(s: &str) -> Result<Vec<f64>, String> {
    let s = s.trim();
    if let Some((a, rest)) = s.split_once(':') {
        let (b, step) = rest
            .split_once(':')
            .ok_or_else(|| format!("expected `a:b:step`, got {s:?}"))?;
        let a: f64 = a.trim().parse().map_err(|e| format!("bad start: {e}"))?;
        let b: f64 = b.trim().parse().map_err(|e| format!("bad stop: {e}"))?;
        let step: f64 = step.trim().parse().map_err(|e| format!("bad step: {e}"))?;
        if !(step > 0.0) || !a.is_finite() || !b.is_finite() || b < a {
            return Err(format!("need finite start <= stop and step > 0, got {s:?}"));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        return Ok((0..count).map(|i| a + i as f64 * step).collect());
    }
    let points: Result<Vec<f64>, _> = s.split(',').map(|p| p.trim().parse::<f64>()).collect();
    let points = points.map_err(|e| format!("bad sweep value in {s:?}: {e}"))?;
    if points.is_empty() || points.iter().any(|p| !p.is_finite()) {
        return Err(format!("sweep must be nonempty and finite, got {s:?}"));
    }
    Ok(points)
}

fn parse_boxes(s: &str) -> Result<Vec<PmpBox>, String> {
    let mut boxes = Vec::new();
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let profile = parse_profile(part)?;
        boxes.push(PmpBox {
            label: part.replace(' ', ""),
            profile,
        });
    }
    if boxes.is_empty() {
        return Err("no boxes given".into());
    }
    Ok(boxes)
}

/// Default selection boxes reported by PMP collection: a narrow stair, a
/// same-budget rectangle, and a wide stair.
pub fn default_pmp_boxes() -> Vec<PmpBox> {
    vec![
        PmpBox {
            label: "4,2,1".into(),
            profile: SelectionProfile::new(4, 2, 1).unwrap(),
        },
        PmpBox {
            label: "4".into(),
            profile: SelectionProfile::rectangle(4).unwrap(),
        },
        PmpBox {
            label: "8,4,2".into(),
            profile: SelectionProfile::new(8, 4, 2).unwrap(),
        },
    ]
}

impl RawConfig {
    /// Parse the `[code]`/`[sim]` sectioned `key = value` format. Lines
    /// starting with `#` or `;` are comments; blank lines are ignored.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut raw = RawConfig::default();
        let mut section = String::new();
        let mut problems = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') || line.starts_with(';') {
                continue;
            }
            if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
                section = name.trim().to_string();
                if section != "code" && section != "sim" {
                    problems.push((
                        format!("line {}", lineno + 1),
                        format!("unknown section [{section}] (expected [code] or [sim])"),
                    ));
                }
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                problems.push((
                    format!("line {}", lineno + 1),
                    format!("expected `key = value`, got {line:?}"),
                ));
                continue;
            };
            let key = key.trim();
            let value = value.trim();
            let field = if section.is_empty() {
                key.to_string()
            } else {
                format!("{section}.{key}")
            };
            if let Err(message) = raw.set(&section, key, value) {
                problems.push((field, message));
            }
        }
        if problems.is_empty() {
            Ok(raw)
        } else {
            Err(ConfigError { problems })
        }
    }

    /// Parse a config file from disk.
    pub fn parse_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            ConfigError::one("config", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    fn set(&mut self, section: &str, key: &str, value: &str) -> Result<(), String> {
        fn int<T: std::str::FromStr>(value: &str) -> Result<T, String>
        where
            T::Err: fmt::Display,
        {
            value.parse().map_err(|e| format!("bad integer {value:?}: {e}"))
        }
        match (section, key) {
            ("code", "n_block") => self.n_block = Some(int(value)?),
            ("code", "k_payload") => self.k_payload = Some(int(value)?),
            ("code", "crc") => {
                self.crc = Some(match value {
                    "none" => None,
                    "crc11" => Some(Crc::crc11()),
                    other => return Err(format!("expected `crc11` or `none`, got {other:?}")),
                })
            }
            ("code", "node_size") => self.node_size = Some(int(value)?),
            ("code", "reliability_file") => self.reliability_file = Some(PathBuf::from(value)),
            ("sim", "decoder") => {
                self.decoder = Some(
                    DecoderKind::parse(value)
                        .ok_or_else(|| format!("expected sc|scl|sscl|ps-scl, got {value:?}"))?,
                )
            }
            ("sim", "list_size") => self.list_size = Some(int(value)?),
            ("sim", "profile") => self.profile = Some(parse_profile(value)?),
            ("sim", "esn0_db") => self.esn0_sweep = Some(parse_sweep(value)?),
            ("sim", "seed") => self.seed = Some(int(value)?),
            ("sim", "max_frames") => self.max_frames = Some(int(value)?),
            ("sim", "min_frame_errors") => self.min_frame_errors = Some(int(value)?),
            ("sim", "pmp_boxes") => self.pmp_boxes = Some(parse_boxes(value)?),
            _ => return Err(format!("unknown key `{key}` in section [{section}]")),
        }
        Ok(())
    }

    /// Overlay another raw config (command-line overrides) on top of this
    /// one; fields set in `over` win.
    pub fn overlay(mut self, over: RawConfig) -> RawConfig {
        macro_rules! take {
            ($($f:ident),*) => { $( if over.$f.is_some() { self.$f = over.$f; } )* };
        }
        take!(
            n_block,
            k_payload,
            crc,
            node_size,
            reliability_file,
            decoder,
            list_size,
            profile,
            esn0_sweep,
            seed,
            max_frames,
            min_frame_errors,
            pmp_boxes
        );
        self
    }

    /// Validate and build the final [`SimConfig`], applying defaults for
    /// unset fields.
    pub fn build(self) -> Result<SimConfig, ConfigError> {
        let mut problems = Vec::new();
        let n_block = self.n_block.unwrap_or(128);
        let k_payload = self.k_payload.unwrap_or(38);
        let crc = self.crc.unwrap_or_else(|| Some(Crc::crc11()));
        let node_size = self.node_size.unwrap_or(4);
        let decoder = self.decoder.unwrap_or(DecoderKind::Sscl);
        let list_size = self.list_size.unwrap_or(8);
        let seed = self.seed.unwrap_or(1);
        let max_frames = self.max_frames.unwrap_or(1_000_000);
        let min_frame_errors = self.min_frame_errors.unwrap_or(100);
        let esn0_sweep = self.esn0_sweep.unwrap_or_default();

        let code = match &self.reliability_file {
            Some(path) => read_reliability_file(path, n_block)
                .map_err(|e| e.to_string())
                .and_then(|order| {
                    CodeConfig::with_reliability_order(n_block, k_payload, crc, node_size, &order)
                        .map_err(|e| e.to_string())
                }),
            None => CodeConfig::new(n_block, k_payload, crc, node_size).map_err(|e| e.to_string()),
        };
        let code = match code {
            Ok(code) => Some(code),
            Err(message) => {
                problems.push(("code".to_string(), message));
                None
            }
        };

        if decoder != DecoderKind::Sc {
            if let Err(e) = polar::decode::validate_list_size(list_size) {
                problems.push(("sim.list_size".to_string(), e.to_string()));
            }
        }
        let profile = self.profile;
        if decoder == DecoderKind::PsScl {
            match profile {
                None => problems.push((
                    "sim.profile".to_string(),
                    "decoder ps-scl requires a selection profile `x,y,z`".to_string(),
                )),
                Some(p) => {
                    if list_size % 4 != 0 {
                        problems.push((
                            "sim.list_size".to_string(),
                            format!("profile selection needs a list size divisible by 4, got {list_size}"),
                        ));
                    }
                    if p.x() > 1 << node_size {
                        problems.push((
                            "sim.profile".to_string(),
                            format!(
                                "profile keeps up to {} candidates but node size {node_size} offers only {}",
                                p.x(),
                                1 << node_size
                            ),
                        ));
                    }
                }
            }
        }
        if esn0_sweep.is_empty() {
            problems.push((
                "sim.esn0_db".to_string(),
                "sweep is required (single point, comma list, or a:b:step)".to_string(),
            ));
        }
        if max_frames == 0 {
            problems.push(("sim.max_frames".to_string(), "must be at least 1".to_string()));
        }

        if !problems.is_empty() {
            return Err(ConfigError { problems });
        }
        Ok(SimConfig {
            code: code.expect("validated above"),
            decoder,
            list_size,
            profile,
            esn0_sweep,
            seed,
            max_frames,
            min_frame_errors,
            pmp_boxes: self.pmp_boxes.unwrap_or_else(default_pmp_boxes),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "\
# demo configuration
[code]
n_block = 64
k_payload = 32
crc = crc11
node_size = 4

[sim]
decoder = ps-scl
list_size = 32
profile = 4,2,1
esn0_db = 1.0:2.0:0.5
seed = 7
max_frames = 5000
min_frame_errors = 50
";

    #[test]
    fn parses_complete_file() {
        let cfg = RawConfig::parse(GOOD).unwrap().build().unwrap();
        assert_eq!(cfg.code.n_block(), 64);
        assert_eq!(cfg.code.k_total(), 43);
        assert_eq!(cfg.decoder, DecoderKind::PsScl);
        assert_eq!(cfg.list_size, 32);
        assert_eq!(cfg.profile.unwrap().x(), 4);
        assert_eq!(cfg.esn0_sweep, vec![1.0, 1.5, 2.0]);
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.max_frames, 5000);
        assert_eq!(cfg.min_frame_errors, 50);
        assert_eq!(cfg.pmp_boxes.len(), 3);
    }

    #[test]
    fn defaults_fill_missing_fields() {
        let cfg = RawConfig::parse("[sim]\ndecoder = scl\nesn0_db = 3.0\n")
            .unwrap()
            .build()
            .unwrap();
        assert_eq!(cfg.code.n_block(), 128);
        assert_eq!(cfg.code.k_payload(), 38);
        assert_eq!(cfg.code.k_total(), 49);
        assert_eq!(cfg.list_size, 8);
        assert_eq!(cfg.max_frames, 1_000_000);
        assert_eq!(cfg.min_frame_errors, 100);
    }

    #[test]
    fn errors_name_the_field() {
        let err = RawConfig::parse("[sim]\ndecoder = warp\n").unwrap_err();
        assert_eq!(err.problems.len(), 1);
        assert_eq!(err.problems[0].0, "sim.decoder");

        let err = RawConfig::parse("[code]\nwidgets = 9\n").unwrap_err();
        assert!(err.problems[0].1.contains("unknown key"));

        let err = RawConfig::parse("[sim]\ndecoder = ps-scl\nesn0_db = 2.0\n")
            .unwrap()
            .build()
            .unwrap_err();
        assert!(err.problems.iter().any(|(f, _)| f == "sim.profile"));
    }

    #[test]
    fn bad_code_parameters_are_reported_with_field() {
        let err = RawConfig::parse("[code]\nn_block = 100\n[sim]\nesn0_db = 1\n")
            .unwrap()
            .build()
            .unwrap_err();
        assert_eq!(err.problems[0].0, "code");
        assert!(err.problems[0].1.contains("power of two"));
    }

    #[test]
    fn sweep_forms() {
        assert_eq!(parse_sweep("3.0").unwrap(), vec![3.0]);
        assert_eq!(parse_sweep("1,2,2.5").unwrap(), vec![1.0, 2.0, 2.5]);
        assert_eq!(parse_sweep("0:1:0.25").unwrap().len(), 5);
        assert!(parse_sweep("2:1:0.5").is_err());
        assert!(parse_sweep("1:2:0").is_err());
        assert!(parse_sweep("").is_err());
    }

    #[test]
    fn profile_forms() {
        let p = parse_profile("8,4,2").unwrap();
        assert_eq!((p.x(), p.y(), p.z()), (8, 4, 2));
        let r = parse_profile("4").unwrap();
        assert_eq!((r.x(), r.y(), r.z()), (4, 4, 4));
        assert!(parse_profile("1,2,3,4").is_err());
        assert!(parse_profile("2,4,1").is_err()); // must be nonincreasing
    }

    #[test]
    fn overlay_prefers_overrides() {
        let base = RawConfig::parse(GOOD).unwrap();
        let over = RawConfig {
            list_size: Some(8),
            seed: Some(99),
            ..RawConfig::default()
        };
        let cfg = base.overlay(over).build().unwrap();
        assert_eq!(cfg.list_size, 8);
        assert_eq!(cfg.seed, 99);
        assert_eq!(cfg.code.n_block(), 64); // untouched
    }

    #[test]
    fn box_list_parses() {
        let boxes = parse_boxes("4,2,1; 4; 8,4,2").unwrap();
        assert_eq!(boxes.len(), 3);
        assert_eq!(boxes[1].label, "4");
        assert_eq!(boxes[1].profile.z(), 4);
    }
}
