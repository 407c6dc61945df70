//! Run configuration in a line-oriented `key = value` format.
//!
//! ```text
//! # comments start with '#'
//! case = rp1
//! scheme = grp
//! model.gamma = 1.6666666666666667
//! grid.nx = 200
//! control.theta = 1
//! output.snapshots = 0.01, 0.02
//! ```
//!
//! Keys are `case`, `scheme`, `model.{gamma,a_rad}`, `grid.{nx,ny}`,
//! `control.{cfl,theta,t_end,max_steps,split}`,
//! `riemann.{left,right,split}` (an inline one-dimensional Riemann problem
//! with `(ρ, u, T)` triples, used instead of a registered case) and
//! `output.{dir,snapshots,fields,every}`. Unknown keys, repeated keys and lines
//! without `=` are errors. Everything not given defaults to the case's own
//! parameters, then to γ = 5/3, â_R = 1, CFL 0.45, θ = 1.5.

use std::fmt::Write as _;
use std::path::PathBuf;

use crate::cases::{self, Case, CaseKind};
use crate::error::{Error, Result};
use crate::mesh1d::StepControl;
use crate::solver2d::SplitOrder;
use crate::sweep::Scheme;
use crate::thermo::GasModel;

/// Columns a 1D profile file can carry, in file order.
pub const PROFILE_FIELDS: [&str; 7] = ["rho", "u", "p_tot", "T", "c", "p_rad", "e"];

const KEYS: [&str; 18] = [
    "case",
    "scheme",
    "model.gamma",
    "model.a_rad",
    "grid.nx",
    "grid.ny",
    "control.cfl",
    "control.theta",
    "control.t_end",
    "control.max_steps",
    "control.split",
    "riemann.left",
    "riemann.right",
    "riemann.split",
    "output.dir",
    "output.snapshots",
    "output.fields",
    "output.every",
];

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSpec {
    pub dir: PathBuf,
    /// Intermediate times at which profiles are written, ascending.
    pub snapshots: Vec<f64>,
    /// Profile columns, a subset of [`PROFILE_FIELDS`] in that order.
    pub fields: Vec<String>,
    /// Conservation log interval in steps; 0 disables the log.
    pub every: usize,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { dir: PathBuf::from("."), snapshots: Vec::new(), fields: PROFILE_FIELDS.iter().map(|s| s.to_string()).collect(), every: 1 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub model: GasModel,
    pub case: Case,
    /// `(nx, ny)`, with `ny = 1` in one dimension.
    pub cells: (usize, usize),
    pub control: StepControl,
    pub scheme: Scheme,
    pub split: SplitOrder,
    pub output: OutputSpec,
}

impl RunConfig {
    pub fn dimension(&self) -> usize {
        self.case.dimension()
    }

    /// Defaults for a registered case.
    pub fn for_case(case: Case) -> Result<Self> {
        let model = validated_model(case.gamma, case.a_rad)?;
        let control = StepControl { t_end: case.t_end, theta: case.theta, ..Default::default() };
        Ok(Self { model, cells: case.cells, case, control, scheme: Scheme::Grp, split: SplitOrder::Xyx, output: OutputSpec::default() })
    }

    pub fn validate(&self) -> Result<()> {
        self.control.validate()?;
        let (nx, ny) = self.cells;
        if nx < 4 || (self.dimension() == 2 && ny < 4) {
            return Err(invalid("grid.nx", format!("{nx}x{ny} cells; at least 4 per direction required")));
        }
        if self.dimension() == 1 && ny != 1 {
            return Err(invalid("grid.ny", format!("{ny} rows for a one-dimensional case")));
        }
        let mut last = 0.0;
        for &t in &self.output.snapshots {
            if !(t >= last && t <= self.control.t_end) {
                return Err(invalid("output.snapshots", format!("{t} not ascending within [0, {}]", self.control.t_end)));
            }
            last = t;
        }
        for f in &self.output.fields {
            if !PROFILE_FIELDS.contains(&f.as_str()) {
                return Err(invalid("output.fields", format!("unknown field `{f}`")));
            }
        }
        Ok(())
    }

    /// Text that [`parse_config`] reads back to an equal configuration.
    pub fn serialize(&self) -> String {
        let mut s = String::new();
        match self.case.kind {
            CaseKind::Riemann { left, right, split } if self.case.name == INLINE_NAME => {
                writeln!(s, "riemann.left = {}", list(&left)).unwrap();
                writeln!(s, "riemann.right = {}", list(&right)).unwrap();
                writeln!(s, "riemann.split = {split}").unwrap();
            }
            _ => writeln!(s, "case = {}", self.case.name).unwrap(),
        }
        writeln!(s, "scheme = {}", self.scheme.name()).unwrap();
        writeln!(s, "model.gamma = {}", self.model.gamma()).unwrap();
        writeln!(s, "model.a_rad = {}", self.model.a_rad()).unwrap();
        writeln!(s, "grid.nx = {}", self.cells.0).unwrap();
        writeln!(s, "grid.ny = {}", self.cells.1).unwrap();
        let c = &self.control;
        writeln!(s, "control.cfl = {}", c.cfl).unwrap();
        writeln!(s, "control.theta = {}", c.theta).unwrap();
        writeln!(s, "control.t_end = {}", c.t_end).unwrap();
        writeln!(s, "control.max_steps = {}", c.max_steps).unwrap();
        writeln!(s, "control.split = {}", if self.split == SplitOrder::Xyx { "xyx" } else { "yxy" }).unwrap();
        writeln!(s, "output.dir = {}", self.output.dir.display()).unwrap();
        writeln!(s, "output.snapshots = {}", list(&self.output.snapshots)).unwrap();
        writeln!(s, "output.fields = {}", self.output.fields.join(", ")).unwrap();
        writeln!(s, "output.every = {}", self.output.every).unwrap();
        s
    }
}

/// Name given to a Riemann problem defined inline in a configuration.
pub const INLINE_NAME: &str = "riemann";

fn list(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
}

fn invalid(field: &str, message: impl Into<String>) -> Error {
    Error::Validation { field: field.into(), message: message.into() }
}

fn validated_model(gamma: f64, a_rad: f64) -> Result<GasModel> {
    if !(gamma > 1.0) {
        return Err(invalid("model.gamma", format!("{gamma} must exceed 1")));
    }
    if !(a_rad >= 0.0) {
        return Err(invalid("model.a_rad", format!("{a_rad} must be nonnegative")));
    }
    GasModel::new(gamma, a_rad).map_err(|e| invalid("model.gamma", e.to_string()))
}

struct Entry<'a> {
    line: usize,
    value: &'a str,
}

fn number<T: std::str::FromStr>(key: &str, e: &Entry) -> Result<T> {
    e.value.parse().map_err(|_| Error::Parse { line: e.line, message: format!("`{key}` expects a number, got `{}`", e.value) })
}

fn numbers(key: &str, e: &Entry) -> Result<Vec<f64>> {
    if e.value.is_empty() {
        return Ok(Vec::new());
    }
    e.value.split(',').map(|t| number(key, &Entry { line: e.line, value: t.trim() })).collect()
}

fn triple(key: &str, e: &Entry) -> Result<[f64; 3]> {
    let v = numbers(key, e)?;
    v.try_into().map_err(|_| Error::Parse { line: e.line, message: format!("`{key}` expects three comma-separated numbers") })
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut entries: Vec<(&str, Entry)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or_else(|| Error::Parse { line, message: format!("expected `key = value`, got `{body}`") })?;
        let key = key.trim();
        let Some(&key) = KEYS.iter().find(|&&k| k == key) else {
            return Err(Error::Parse { line, message: format!("unknown key `{key}`") });
        };
        if entries.iter().any(|(k, _)| *k == key) {
            return Err(Error::Parse { line, message: format!("`{key}` given twice") });
        }
        entries.push((key, Entry { line, value: value.trim() }));
    }
    let get = |key: &str| entries.iter().find(|(k, _)| *k == key).map(|(_, e)| e);

    let inline = ["riemann.left", "riemann.right", "riemann.split"].map(get);
    let case = match (get("case"), inline.iter().any(Option::is_some)) {
        (Some(e), false) => cases::find(e.value).map_err(|_| invalid("case", format!("unknown case `{}`", e.value)))?,
        (Some(e), true) => return Err(Error::Parse { line: e.line, message: "`case` and inline `riemann.*` keys are exclusive".into() }),
        (None, true) => {
            let [Some(l), Some(r), Some(x)] = inline else {
                return Err(invalid("riemann", "inline problems need `riemann.left`, `riemann.right` and `riemann.split`"));
            };
            let mut c = cases::find("rp1")?;
            c.name = INLINE_NAME;
            c.summary = "Riemann problem given in the configuration";
            c.theta = 1.5;
            c.kind = CaseKind::Riemann { left: triple("riemann.left", l)?, right: triple("riemann.right", r)?, split: number("riemann.split", x)? };
            c
        }
        (None, false) => return Err(invalid("case", "no case given")),
    };

    let gamma = get("model.gamma").map(|e| number("model.gamma", e)).transpose()?.unwrap_or(case.gamma);
    let a_rad = get("model.a_rad").map(|e| number("model.a_rad", e)).transpose()?.unwrap_or(case.a_rad);
    let mut cfg = RunConfig::for_case(case)?;
    cfg.model = validated_model(gamma, a_rad)?;
    if let Some(e) = get("scheme") {
        cfg.scheme = Scheme::parse(e.value).ok_or_else(|| invalid("scheme", format!("unknown scheme `{}`", e.value)))?;
    }
    if let Some(e) = get("grid.nx") {
        cfg.cells.0 = number("grid.nx", e)?;
    }
    if let Some(e) = get("grid.ny") {
        cfg.cells.1 = number("grid.ny", e)?;
    }
    let c = &mut cfg.control;
    if let Some(e) = get("control.cfl") {
        c.cfl = number("control.cfl", e)?;
    }
    if let Some(e) = get("control.theta") {
        c.theta = number("control.theta", e)?;
    }
    if let Some(e) = get("control.t_end") {
        c.t_end = number("control.t_end", e)?;
    }
    if let Some(e) = get("control.max_steps") {
        c.max_steps = number("control.max_steps", e)?;
    }
    if let Some(e) = get("control.split") {
        cfg.split = match e.value {
            "xyx" => SplitOrder::Xyx,
            "yxy" => SplitOrder::Yxy,
            v => return Err(invalid("control.split", format!("`{v}` is neither xyx nor yxy"))),
        };
    }
    if let Some(e) = get("output.dir") {
        cfg.output.dir = PathBuf::from(e.value);
    }
    if let Some(e) = get("output.snapshots") {
        cfg.output.snapshots = numbers("output.snapshots", e)?;
    }
    if let Some(e) = get("output.fields") {
        let wanted: Vec<&str> = e.value.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        if let Some(bad) = wanted.iter().find(|f| !PROFILE_FIELDS.contains(f)) {
            return Err(invalid("output.fields", format!("unknown field `{bad}`")));
        }
        cfg.output.fields = PROFILE_FIELDS.iter().filter(|f| wanted.contains(f)).map(|s| s.to_string()).collect();
    }
    if let Some(e) = get("output.every") {
        cfg.output.every = number("output.every", e)?;
    }
    cfg.validate()?;
    Ok(cfg)
}
