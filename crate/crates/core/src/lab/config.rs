//! Scenario files.
//!
//! Line-oriented `key = value` pairs grouped under `[section]` headers. `#`
//! and `;` start comment lines, and a `#` after whitespace starts a trailing
//! comment. Parsing is strict: unknown sections and keys, duplicates and
//! malformed values are errors carrying the line number.
//!
//! ```text
//! [scenario]
//! name = tg-inviscid
//! kind = single-run
//!
//! [solver]
//! n = 32
//! dt = 1e-3
//! t_end = 0.5
//!
//! [data]
//! generator = taylor-green
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{LabError, Result};
use crate::solver::{helical_mode, random_spectrum, taylor_green, Helicity, SolverConfig};
use crate::spectral::{Grid, SpectralVectorField};

pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug, PartialEq)]
pub enum DataSpec {
    TaylorGreen { amplitude: f64 },
    Helical { k: [i64; 3], helicity: Helicity, amplitude: f64 },
    RandomSpectrum { k0: f64, l2_norm: f64 },
}

impl DataSpec {
    pub fn generator(&self) -> &'static str {
        match self {
            DataSpec::TaylorGreen { .. } => "taylor-green",
            DataSpec::Helical { .. } => "helical",
            DataSpec::RandomSpectrum { .. } => "random-spectrum",
        }
    }

    pub fn build(&self, grid: &Grid, seed: u64) -> SpectralVectorField {
        match *self {
            DataSpec::TaylorGreen { amplitude } => taylor_green(grid, amplitude),
            DataSpec::Helical { k, helicity, amplitude } => helical_mode(grid, k, helicity, amplitude),
            DataSpec::RandomSpectrum { k0, l2_norm } => random_spectrum(grid, k0, l2_norm, seed),
        }
    }
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec::TaylorGreen { amplitude: 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScenarioKind {
    SingleRun,
    DeltaStudy { deltas: Vec<f64> },
    RotationSweep { omegas: Vec<f64>, threshold: f64 },
    Strichartz { omegas: Vec<f64>, r: f64, shell: i32, t_end: f64, center: [f64; 3] },
    VerifyLemmas { ensemble: usize, low_regularity_commutator: bool },
}

impl ScenarioKind {
    pub fn label(&self) -> &'static str {
        match self {
            ScenarioKind::SingleRun => "single-run",
            ScenarioKind::DeltaStudy { .. } => "delta-study",
            ScenarioKind::RotationSweep { .. } => "rotation-sweep",
            ScenarioKind::Strichartz { .. } => "strichartz",
            ScenarioKind::VerifyLemmas { .. } => "verify-lemmas",
        }
    }

    fn uses_data(&self) -> bool {
        matches!(
            self,
            ScenarioKind::SingleRun | ScenarioKind::DeltaStudy { .. } | ScenarioKind::RotationSweep { .. }
        )
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioSpec {
    pub name: String,
    pub kind: ScenarioKind,
    pub solver: SolverConfig,
    pub data: DataSpec,
    pub seed: u64,
    pub output: PathBuf,
}

impl ScenarioSpec {
    pub fn initial_data(&self) -> Result<SpectralVectorField> {
        Ok(self.data.build(&self.solver.grid()?, self.seed))
    }

    /// Full config text with every default spelled out; parsing it gives
    /// back `self`.
    pub fn to_config_text(&self) -> String {
        let mut s = String::new();
        let c = &self.solver;
        let w = &mut s;
        let _ = writeln!(w, "[scenario]");
        let _ = writeln!(w, "name = {}", self.name);
        let _ = writeln!(w, "kind = {}", self.kind.label());
        let _ = writeln!(w, "seed = {}", self.seed);
        let _ = writeln!(w, "output = {}", self.output.display());
        let _ = writeln!(w, "\n[solver]");
        let _ = writeln!(w, "n = {}", c.n);
        let _ = writeln!(w, "box_size = {:?}", c.box_size);
        let _ = writeln!(w, "omega = {:?}", c.omega);
        let _ = writeln!(w, "delta = {:?}", c.delta);
        let _ = writeln!(w, "dt = {:?}", c.dt);
        let _ = writeln!(w, "t_end = {:?}", c.t_end);
        let _ = writeln!(w, "scheme = {}", c.scheme);
        let _ = writeln!(w, "nonlinear = {}", c.nonlinear);
        let _ = writeln!(w, "dealias = {}", c.dealias);
        let _ = writeln!(w, "cfl_max = {:?}", c.cfl_max);
        let _ = writeln!(w, "snapshot_stride = {}", c.snapshot_stride);
        let _ = writeln!(w, "bkm_ceiling = {:?}", c.bkm_ceiling);
        if self.kind.uses_data() {
            let _ = writeln!(w, "\n[data]");
            let _ = writeln!(w, "generator = {}", self.data.generator());
            match &self.data {
                DataSpec::TaylorGreen { amplitude } => {
                    let _ = writeln!(w, "amplitude = {amplitude:?}");
                }
                DataSpec::Helical { k, helicity, amplitude } => {
                    let _ = writeln!(w, "k = {}, {}, {}", k[0], k[1], k[2]);
                    let _ = writeln!(w, "helicity = {}", helicity_label(*helicity));
                    let _ = writeln!(w, "amplitude = {amplitude:?}");
                }
                DataSpec::RandomSpectrum { k0, l2_norm } => {
                    let _ = writeln!(w, "k0 = {k0:?}");
                    let _ = writeln!(w, "l2_norm = {l2_norm:?}");
                }
            }
        }
        let _ = writeln!(w, "\n[{}]", self.kind.label());
        match &self.kind {
            ScenarioKind::SingleRun => {}
            ScenarioKind::DeltaStudy { deltas } => {
                let _ = writeln!(w, "deltas = {}", join(deltas));
            }
            ScenarioKind::RotationSweep { omegas, threshold } => {
                let _ = writeln!(w, "omegas = {}", join(omegas));
                let _ = writeln!(w, "threshold = {threshold:?}");
            }
            ScenarioKind::Strichartz { omegas, r, shell, t_end, center } => {
                let _ = writeln!(w, "omegas = {}", join(omegas));
                let _ = writeln!(w, "r = {r:?}");
                let _ = writeln!(w, "shell = {shell}");
                let _ = writeln!(w, "t_end = {t_end:?}");
                let _ = writeln!(w, "center = {}", join(center));
            }
            ScenarioKind::VerifyLemmas { ensemble, low_regularity_commutator } => {
                let _ = writeln!(w, "ensemble = {ensemble}");
                let _ = writeln!(w, "low_regularity_commutator = {low_regularity_commutator}");
            }
        }
        s
    }
}

fn join(values: &[f64]) -> String {
    values.iter().map(|v| format!("{v:?}")).collect::<Vec<_>>().join(", ")
}

fn helicity_label(h: Helicity) -> &'static str {
    match h {
        Helicity::Plus => "plus",
        Helicity::Minus => "minus",
    }
}

fn err(line: usize, message: impl Into<String>) -> LabError {
    LabError::Config { line, message: message.into() }
}

#[derive(Debug)]
struct Entry {
    value: String,
    line: usize,
    used: bool,
}

#[derive(Debug)]
struct Section {
    name: String,
    line: usize,
    entries: BTreeMap<String, Entry>,
}

impl Section {
    fn raw(&mut self, key: &str) -> Option<(&str, usize)> {
        self.entries.get_mut(key).map(|e| {
            e.used = true;
            (e.value.as_str(), e.line)
        })
    }

    fn get<T: ParseValue>(&mut self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some((v, line)) => T::parse_value(v)
                .map(Some)
                .map_err(|m| err(line, format!("{key}: {m}"))),
        }
    }

    fn get_or<T: ParseValue>(&mut self, key: &str, default: T) -> Result<T> {
        Ok(self.get(key)?.unwrap_or(default))
    }

    fn require<T: ParseValue>(&mut self, key: &str) -> Result<T> {
        let line = self.line;
        let name = self.name.clone();
        self.get(key)?
            .ok_or_else(|| err(line, format!("missing required key '{key}' in [{name}]")))
    }

    fn line_of(&self, key: &str) -> usize {
        self.entries.get(key).map_or(self.line, |e| e.line)
    }

    fn finish(self) -> Result<()> {
        let mut unused: Vec<(&String, &Entry)> = self.entries.iter().filter(|(_, e)| !e.used).collect();
        unused.sort_by_key(|(_, e)| e.line);
        match unused.first() {
            None => Ok(()),
            Some((k, e)) => Err(err(e.line, format!("unknown key '{k}' in [{}]", self.name))),
        }
    }
}

trait ParseValue: Sized {
    fn parse_value(s: &str) -> std::result::Result<Self, String>;
}

impl ParseValue for f64 {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        match s.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(format!("expected a finite number, found {s}")),
        }
    }
}

macro_rules! parse_int {
    ($($t:ty),*) => {$(
        impl ParseValue for $t {
            fn parse_value(s: &str) -> std::result::Result<Self, String> {
                s.parse().map_err(|_| format!("expected an integer, found {s}"))
            }
        }
    )*};
}
parse_int!(usize, u64, i32, i64);

impl ParseValue for bool {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        match s {
            "true" => Ok(true),
            "false" => Ok(false),
            _ => Err(format!("expected true or false, found {s}")),
        }
    }
}

impl ParseValue for String {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        let t = s.strip_prefix('"').and_then(|t| t.strip_suffix('"')).unwrap_or(s);
        Ok(t.to_string())
    }
}

impl<T: ParseValue> ParseValue for Vec<T> {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        s.split(',')
            .map(|p| T::parse_value(p.trim()))
            .collect::<std::result::Result<Vec<_>, _>>()
    }
}

struct Parsed<T>(T);

impl<T: FromStr<Err = String>> ParseValue for Parsed<T> {
    fn parse_value(s: &str) -> std::result::Result<Self, String> {
        s.parse().map(Parsed)
    }
}

fn array3<T: ParseValue + Copy>(v: Vec<T>, line: usize, key: &str) -> Result<[T; 3]> {
    v.try_into()
        .map_err(|v: Vec<T>| err(line, format!("{key}: expected 3 components, found {}", v.len())))
}

const SECTIONS: &[&str] = &[
    "scenario",
    "solver",
    "data",
    "single-run",
    "delta-study",
    "rotation-sweep",
    "strichartz",
    "verify-lemmas",
];

fn tokenize(text: &str) -> Result<BTreeMap<String, Section>> {
    let mut sections: BTreeMap<String, Section> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let t = strip_trailing_comment(raw).trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with(';') {
            continue;
        }
        if let Some(rest) = t.strip_prefix('[') {
            let name = rest
                .strip_suffix(']')
                .ok_or_else(|| err(line, format!("malformed section header '{t}'")))?
                .trim()
                .to_string();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(err(line, format!("unknown section [{name}]")));
            }
            if let Some(prev) = sections.get(&name) {
                return Err(err(
                    line,
                    format!("duplicate section [{name}] (first defined on line {})", prev.line),
                ));
            }
            sections.insert(name.clone(), Section { name: name.clone(), line, entries: BTreeMap::new() });
            current = Some(name);
            continue;
        }
        let (key, value) = t
            .split_once('=')
            .ok_or_else(|| err(line, format!("expected 'key = value', found '{t}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err(line, "empty key"));
        }
        let section = match &current {
            Some(name) => sections.get_mut(name).expect("section exists"),
            None => return Err(err(line, format!("key '{key}' appears before any [section] header"))),
        };
        if let Some(prev) = section.entries.get(key) {
            return Err(err(
                line,
                format!("duplicate key '{key}' on lines {} and {line}", prev.line),
            ));
        }
        section
            .entries
            .insert(key.to_string(), Entry { value: value.to_string(), line, used: false });
    }
    Ok(sections)
}

fn strip_trailing_comment(line: &str) -> &str {
    let bytes = line.as_bytes();
    match (1..bytes.len()).find(|&i| bytes[i] == b'#' && bytes[i - 1].is_ascii_whitespace()) {
        Some(i) => &line[..i],
        None => line,
    }
}

fn filesystem_safe(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
}

pub fn parse_config(text: &str) -> Result<ScenarioSpec> {
    let mut sections = tokenize(text)?;
    let mut scenario = sections
        .remove("scenario")
        .ok_or_else(|| err(1, "missing [scenario] section"))?;

    let name: String = scenario.require("name")?;
    if !filesystem_safe(&name) {
        return Err(err(
            scenario.line_of("name"),
            format!("name '{name}' must be nonempty and use only letters, digits, '-', '_' or '.'"),
        ));
    }
    let kind_line = scenario.line_of("kind");
    let kind_label: String = scenario.require("kind")?;
    let seed = scenario.get_or("seed", DEFAULT_SEED)?;
    let output = scenario
        .get::<String>("output")?
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from("runs").join(&name));
    scenario.finish()?;

    let solver = parse_solver(sections.remove("solver"))?;

    let mut kind_section = sections.remove(kind_label.as_str());
    let kind = match kind_label.as_str() {
        "single-run" => ScenarioKind::SingleRun,
        "delta-study" => {
            let s = need(&mut kind_section, "delta-study", kind_line)?;
            let deltas: Vec<f64> = s.require("deltas")?;
            if deltas.is_empty() || deltas.iter().any(|d| !(*d > 0.0 && *d < 1.0)) {
                return Err(err(s.line_of("deltas"), "deltas must lie in (0, 1)"));
            }
            ScenarioKind::DeltaStudy { deltas }
        }
        "rotation-sweep" => {
            let s = need(&mut kind_section, "rotation-sweep", kind_line)?;
            let omegas = s.require("omegas")?;
            let threshold: f64 = s.require("threshold")?;
            if threshold <= 0.0 {
                return Err(err(s.line_of("threshold"), "threshold must be positive"));
            }
            ScenarioKind::RotationSweep { omegas, threshold }
        }
        "strichartz" => {
            let s = need(&mut kind_section, "strichartz", kind_line)?;
            let omegas = s.require("omegas")?;
            let r = s.get_or("r", 4.0)?;
            let shell = s.get_or("shell", 3)?;
            let t_end = s.get_or("t_end", 2.0)?;
            let center_line = s.line_of("center");
            let center = array3(s.get_or("center", vec![1.0, 2.0, 3.0])?, center_line, "center")?;
            ScenarioKind::Strichartz { omegas, r, shell, t_end, center }
        }
        "verify-lemmas" => {
            let (ensemble, low_regularity_commutator) = match kind_section.as_mut() {
                Some(s) => (s.get_or("ensemble", 100)?, s.get_or("low_regularity_commutator", false)?),
                None => (100, false),
            };
            if ensemble == 0 {
                return Err(err(kind_line, "ensemble must be positive"));
            }
            ScenarioKind::VerifyLemmas { ensemble, low_regularity_commutator }
        }
        other => {
            return Err(err(
                kind_line,
                format!(
                    "unknown kind '{other}' (expected single-run | delta-study | rotation-sweep | strichartz | verify-lemmas)"
                ),
            ))
        }
    };
    if let Some(s) = kind_section {
        s.finish()?;
    }

    let data = match sections.remove("data") {
        Some(s) if !kind.uses_data() => {
            return Err(err(s.line, format!("[data] is not used by kind {}", kind.label())));
        }
        Some(s) => parse_data(s)?,
        None => DataSpec::default(),
    };

    if let Some(s) = sections.into_values().min_by_key(|s| s.line) {
        return Err(err(s.line, format!("section [{}] does not apply to kind {}", s.name, kind.label())));
    }

    Ok(ScenarioSpec { name, kind, solver, data, seed, output })
}

fn need<'a>(section: &'a mut Option<Section>, name: &str, line: usize) -> Result<&'a mut Section> {
    section
        .as_mut()
        .ok_or_else(|| err(line, format!("kind {name} needs a [{name}] section")))
}

fn parse_solver(section: Option<Section>) -> Result<SolverConfig> {
    let d = SolverConfig::default();
    let Some(mut s) = section else {
        return Ok(d);
    };
    let c = SolverConfig {
        n: s.get_or("n", d.n)?,
        box_size: s.get_or("box_size", d.box_size)?,
        omega: s.get_or("omega", d.omega)?,
        delta: s.get_or("delta", d.delta)?,
        dt: s.get_or("dt", d.dt)?,
        t_end: s.get_or("t_end", d.t_end)?,
        scheme: s.get_or("scheme", Parsed(d.scheme))?.0,
        nonlinear: s.get_or("nonlinear", Parsed(d.nonlinear))?.0,
        dealias: s.get_or("dealias", d.dealias)?,
        cfl_max: s.get_or("cfl_max", d.cfl_max)?,
        snapshot_stride: s.get_or("snapshot_stride", d.snapshot_stride)?,
        bkm_ceiling: s.get_or("bkm_ceiling", d.bkm_ceiling)?,
    };
    if let Err(e) = c.validate() {
        let key = match &e {
            LabError::InvalidGrid(_) => "n",
            LabError::InvalidParameter(m) => ["dt", "t_end", "delta", "omega", "cfl_max", "bkm_ceiling"]
                .into_iter()
                .find(|k| m.starts_with(k))
                .unwrap_or(""),
            _ => "",
        };
        return Err(err(s.line_of(key), e.to_string()));
    }
    s.finish()?;
    Ok(c)
}

fn parse_data(mut s: Section) -> Result<DataSpec> {
    let line = s.line_of("generator");
    let generator: String = s.get_or("generator", "taylor-green".to_string())?;
    let data = match generator.as_str() {
        "taylor-green" => DataSpec::TaylorGreen { amplitude: s.get_or("amplitude", 1.0)? },
        "helical" => {
            let k_line = s.line_of("k");
            let k = array3(s.require::<Vec<i64>>("k")?, k_line, "k")?;
            if k == [0, 0, 0] {
                return Err(err(k_line, "k must be nonzero"));
            }
            let helicity = match s.get_or("helicity", "plus".to_string())?.as_str() {
                "plus" => Helicity::Plus,
                "minus" => Helicity::Minus,
                other => {
                    return Err(err(
                        s.line_of("helicity"),
                        format!("helicity: expected plus or minus, found {other}"),
                    ))
                }
            };
            DataSpec::Helical { k, helicity, amplitude: s.get_or("amplitude", 1.0)? }
        }
        "random-spectrum" => {
            let k0: f64 = s.get_or("k0", 3.0)?;
            if k0 <= 0.0 {
                return Err(err(s.line_of("k0"), "k0 must be positive"));
            }
            DataSpec::RandomSpectrum { k0, l2_norm: s.get_or("l2_norm", 1.0)? }
        }
        other => {
            return Err(err(
                line,
                format!("unknown generator '{other}' (expected taylor-green | helical | random-spectrum)"),
            ))
        }
    };
    s.finish()?;
    Ok(data)
}

impl fmt::Display for ScenarioSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.name, self.kind.label())
    }
}
