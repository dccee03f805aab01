//! Line-oriented scenario files.
//!
//! ```text
//! seed = 7
//!
//! [grid]
//! n_r = 64
//! k_max = 3.0
//!
//! [testfn probe]
//! center = 1.4, 0.1, 0, 1.4
//! half_width = 0.9, 0.9, 0.9, 0.9
//! amplitude = 0.5+0.2i
//! polarization = vector-field
//! v = 0.2, 1, 0
//!
//! [task probe-norm]
//! op = norm
//! f = probe
//! ```
//!
//! Blank lines and `#` comments are ignored. Every error carries the line it
//! was detected on.

use std::collections::BTreeMap;
use std::fmt;

use emcov::{GridSpec, C64};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScenarioError {
    pub line: usize,
    pub message: String,
}

impl ScenarioError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ScenarioError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ScenarioError {}

type Parsed<T> = Result<T, ScenarioError>;

/// A value as written, with the line it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub raw: String,
}

impl Entry {
    fn err(&self, msg: impl Into<String>) -> ScenarioError {
        ScenarioError::new(self.line, msg)
    }

    pub fn real(&self) -> Parsed<f64> {
        parse_real(&self.raw)
            .ok_or_else(|| self.err(format!("expected a number, got '{}'", self.raw)))
    }

    pub fn count(&self) -> Parsed<usize> {
        self.raw.trim().parse().map_err(|_| {
            self.err(format!(
                "expected a non-negative integer, got '{}'",
                self.raw
            ))
        })
    }

    pub fn complex(&self) -> Parsed<C64> {
        parse_complex(&self.raw)
            .ok_or_else(|| self.err(format!("expected a complex number, got '{}'", self.raw)))
    }

    pub fn reals<const N: usize>(&self) -> Parsed<[f64; N]> {
        let v: Vec<f64> = self
            .list()
            .iter()
            .map(|s| parse_real(s))
            .collect::<Option<_>>()
            .ok_or_else(|| self.err(format!("expected {N} numbers, got '{}'", self.raw)))?;
        v.try_into()
            .map_err(|v: Vec<f64>| self.err(format!("expected {N} numbers, got {}", v.len())))
    }

    pub fn complexes<const N: usize>(&self) -> Parsed<[C64; N]> {
        let v: Vec<C64> = self
            .list()
            .iter()
            .map(|s| parse_complex(s))
            .collect::<Option<_>>()
            .ok_or_else(|| self.err(format!("expected {N} complex numbers, got '{}'", self.raw)))?;
        v.try_into().map_err(|v: Vec<C64>| {
            self.err(format!("expected {N} complex numbers, got {}", v.len()))
        })
    }

    pub fn list(&self) -> Vec<String> {
        self.raw
            .split(',')
            .map(|s| s.trim().to_string())
            .filter(|s| !s.is_empty())
            .collect()
    }

    pub fn flag(&self) -> Parsed<bool> {
        match self.raw.trim() {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            other => Err(self.err(format!("expected true or false, got '{other}'"))),
        }
    }
}

fn parse_real(s: &str) -> Option<f64> {
    let v: f64 = s.trim().parse().ok()?;
    v.is_finite().then_some(v)
}

/// `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i`; exponents such as `1e-3+2e-4i` are
/// allowed in either part.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return parse_real(&s).map(C64::from);
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(j) => (parse_real(&body[..j])?, &body[j..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => parse_real(x)?,
    };
    Some(C64::new(re, im))
}

/// One `[kind NAME]` block.
#[derive(Debug, Clone, PartialEq)]
pub struct Section {
    pub kind: String,
    pub name: Option<String>,
    pub line: usize,
    pub entries: BTreeMap<String, Entry>,
}

impl Section {
    pub fn get(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    pub fn require(&self, key: &str) -> Parsed<&Entry> {
        self.get(key).ok_or_else(|| {
            ScenarioError::new(
                self.line,
                format!("[{}] is missing required key '{key}'", self.title()),
            )
        })
    }

    pub fn title(&self) -> String {
        match &self.name {
            Some(n) => format!("{} {n}", self.kind),
            None => self.kind.clone(),
        }
    }

    fn allow(&self, keys: &[&str]) -> Parsed<()> {
        for (k, e) in &self.entries {
            if !keys.contains(&k.as_str()) {
                return Err(e.err(format!("unknown key '{k}' in [{}]", self.title())));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileShape {
    Separable,
    Gaussian,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PolarizationSpec {
    VectorField([C64; 3]),
    Conserved { u: [C64; 4], v: [C64; 4] },
    Fixed([C64; 4]),
    Gradient,
    NullGauge,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSpec {
    pub shape: ProfileShape,
    pub center: [f64; 4],
    pub half_width: [f64; 4],
    pub amplitude: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TestFnBody {
    Mode {
        profile: ProfileSpec,
        polarization: PolarizationSpec,
    },
    /// `count` draws from the scenario's random stream at the given
    /// amplitude; with `count > 1` the members are named `NAME.0`, `NAME.1`, ...
    Random {
        amplitude: f64,
        count: usize,
    },
    Sum(Vec<String>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TestFnDef {
    pub name: String,
    pub line: usize,
    pub body: TestFnBody,
    pub translate: [f64; 4],
    pub scale: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GreensSpec {
    Retarded,
    Advanced,
    Feynman(Option<f64>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum CurrentDef {
    None,
    Coulomb {
        charge: f64,
    },
    Pulse {
        v: [C64; 3],
        profile: ProfileSpec,
        greens: GreensSpec,
    },
    Quantum {
        v: [C64; 3],
        profile: ProfileSpec,
        fx1: String,
        fx2: String,
        greens: GreensSpec,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    Free,
    Classical,
    Quantum,
}

impl KernelKind {
    pub fn name(self) -> &'static str {
        match self {
            KernelKind::Free => "free",
            KernelKind::Classical => "classical",
            KernelKind::Quantum => "quantum",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Op {
    Norm,
    ScalarProduct,
    Acl,
    Ahom,
    Radiation,
    Y,
    X,
    XBound,
    Corr,
    MeanField,
    SecondMoment,
    Covariance,
    Gram,
    Positivity,
    Weyl,
    Ir,
    Coherent,
    ShiftToZero,
}

/// `(name, keys it accepts, keys it requires, keys naming test functions)`.
struct OpInfo {
    op: Op,
    name: &'static str,
    keys: &'static [&'static str],
    required: &'static [&'static str],
    refs: &'static [&'static str],
}

const COMMON_KEYS: &[&str] = &["op", "tol", "csv"];

const OPS: &[OpInfo] = &[
    OpInfo {
        op: Op::Norm,
        name: "norm",
        keys: &["f"],
        required: &["f"],
        refs: &["f"],
    },
    OpInfo {
        op: Op::ScalarProduct,
        name: "scalar_product",
        keys: &["f", "g"],
        required: &["f", "g"],
        refs: &["f", "g"],
    },
    OpInfo {
        op: Op::Acl,
        name: "acl",
        keys: &["f", "expect"],
        required: &["f"],
        refs: &["f"],
    },
    OpInfo {
        op: Op::Ahom,
        name: "ahom",
        keys: &["f", "expect"],
        required: &["f"],
        refs: &["f"],
    },
    OpInfo {
        op: Op::Radiation,
        name: "radiation",
        keys: &["f"],
        required: &["f"],
        refs: &["f"],
    },
    OpInfo {
        op: Op::Y,
        name: "y",
        keys: &["f", "far_future"],
        required: &["f"],
        refs: &["f"],
    },
    OpInfo {
        op: Op::X,
        name: "x",
        keys: &["f"],
        required: &["f"],
        refs: &["f"],
    },
    OpInfo {
        op: Op::XBound,
        name: "x_bound",
        keys: &["family"],
        required: &["family"],
        refs: &["family"],
    },
    OpInfo {
        op: Op::Corr,
        name: "corr",
        keys: &["f", "g"],
        required: &["f", "g"],
        refs: &["f", "g"],
    },
    OpInfo {
        op: Op::MeanField,
        name: "mean_field",
        keys: &["f"],
        required: &["f"],
        refs: &["f"],
    },
    OpInfo {
        op: Op::SecondMoment,
        name: "second_moment",
        keys: &["f", "g"],
        required: &["f", "g"],
        refs: &["f", "g"],
    },
    OpInfo {
        op: Op::Covariance,
        name: "covariance",
        keys: &["f", "g", "h"],
        required: &["f", "g", "h"],
        refs: &["f", "g", "h"],
    },
    OpInfo {
        op: Op::Gram,
        name: "gram",
        keys: &["family"],
        required: &["family"],
        refs: &["family"],
    },
    OpInfo {
        op: Op::Positivity,
        name: "positivity",
        keys: &["matrix"],
        required: &["matrix"],
        refs: &[],
    },
    OpInfo {
        op: Op::Weyl,
        name: "weyl",
        keys: &["family", "h1", "h2"],
        required: &["family", "h1", "h2"],
        refs: &["family", "h1", "h2"],
    },
    OpInfo {
        op: Op::Ir,
        name: "ir",
        keys: &["power", "strength", "shells", "k_top", "expect"],
        required: &[],
        refs: &[],
    },
    OpInfo {
        op: Op::Coherent,
        name: "coherent",
        keys: &["f", "g", "v", "expect"],
        required: &["f", "g", "v"],
        refs: &["f", "g", "v"],
    },
    OpInfo {
        op: Op::ShiftToZero,
        name: "shift_to_zero",
        keys: &["f", "shift"],
        required: &["f", "shift"],
        refs: &["f"],
    },
];

impl Op {
    pub fn name(self) -> &'static str {
        OPS.iter()
            .find(|i| i.op == self)
            .map(|i| i.name)
            .unwrap_or("?")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub name: String,
    pub line: usize,
    pub op: Op,
    pub tol: Option<f64>,
    pub csv: Option<String>,
    pub args: BTreeMap<String, Entry>,
}

impl Task {
    pub fn arg(&self, key: &str) -> Option<&Entry> {
        self.args.get(key)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub seed: u64,
    pub grid: GridSpec,
    pub testfns: Vec<TestFnDef>,
    pub current: CurrentDef,
    pub current_line: usize,
    pub kernel: KernelKind,
    pub tasks: Vec<Task>,
    pub json: Option<String>,
}

impl Scenario {
    pub fn testfn(&self, name: &str) -> Option<&TestFnDef> {
        self.testfns.iter().find(|t| t.name == name)
    }
}

fn split_sections(text: &str) -> Parsed<(BTreeMap<String, Entry>, Vec<Section>)> {
    let mut top = BTreeMap::new();
    let mut sections: Vec<Section> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(header) = content.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| ScenarioError::new(line, "unterminated section header"))?;
            let mut parts = header.split_whitespace();
            let kind = parts.next().unwrap_or("").to_string();
            let name = parts.next().map(str::to_string);
            if parts.next().is_some() {
                return Err(ScenarioError::new(
                    line,
                    format!("malformed section header '[{header}]'"),
                ));
            }
            sections.push(Section {
                kind,
                name,
                line,
                entries: BTreeMap::new(),
            });
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| {
            ScenarioError::new(line, format!("expected 'key = value', got '{content}'"))
        })?;
        let key = key.trim().to_string();
        let entry = Entry {
            line,
            raw: value.trim().to_string(),
        };
        let map = match sections.last_mut() {
            Some(s) => &mut s.entries,
            None => &mut top,
        };
        if map.insert(key.clone(), entry).is_some() {
            return Err(ScenarioError::new(line, format!("duplicate key '{key}'")));
        }
    }
    Ok((top, sections))
}

/// Member names a definition introduces.
pub fn member_names(def: &TestFnDef) -> Vec<String> {
    match def.body {
        TestFnBody::Random { count, .. } if count > 1 => {
            (0..count).map(|i| format!("{}.{i}", def.name)).collect()
        }
        _ => vec![def.name.clone()],
    }
}

/// Names a reference stands for; a group name expands to its members only
/// where a family is expected.
pub fn expand(known: &[TestFnDef], name: &str, family: bool) -> Option<Vec<String>> {
    for def in known {
        let members = member_names(def);
        if members.iter().any(|m| m == name) {
            return Some(vec![name.to_string()]);
        }
        if family && def.name == name {
            return Some(members);
        }
    }
    None
}

fn check_ref(known: &[TestFnDef], e: &Entry, name: &str, family: bool) -> Parsed<()> {
    match expand(known, name, family) {
        Some(_) => Ok(()),
        None if known.iter().any(|t| t.name == name) => Err(e.err(format!(
            "'{name}' is a group of test functions; pick a member such as '{name}.0'"
        ))),
        None => Err(e.err(format!("undefined test function '{name}'"))),
    }
}

fn parse_grid(s: &Section) -> Parsed<GridSpec> {
    s.allow(&["n_r", "n_theta", "n_phi", "k_min", "k_max"])?;
    let mut g = GridSpec::default();
    if let Some(e) = s.get("n_r") {
        g.n_r = e.count()?;
    }
    if let Some(e) = s.get("n_theta") {
        g.n_theta = e.count()?;
    }
    if let Some(e) = s.get("n_phi") {
        g.n_phi = e.count()?;
    }
    if let Some(e) = s.get("k_min") {
        g.k_min = e.real()?;
    }
    if let Some(e) = s.get("k_max") {
        g.k_max = e.real()?;
    }
    g.build()
        .map_err(|e| ScenarioError::new(s.line, e.to_string()))?;
    Ok(g)
}

const PROFILE_KEYS: &[&str] = &["kind", "center", "half_width", "amplitude"];

fn parse_profile(s: &Section) -> Parsed<ProfileSpec> {
    let shape = match s.get("kind").map(|e| (e, e.raw.as_str())) {
        None | Some((_, "gaussian")) => ProfileShape::Gaussian,
        Some((_, "separable")) => ProfileShape::Separable,
        Some((e, other)) => {
            return Err(e.err(format!(
                "unknown profile kind '{other}' (gaussian, separable)"
            )))
        }
    };
    let half = s.require("half_width")?;
    let half_width = half.reals::<4>()?;
    if half_width.iter().any(|&h| h <= 0.0) {
        return Err(half.err("half widths must be positive"));
    }
    Ok(ProfileSpec {
        shape,
        center: s.require("center")?.reals()?,
        half_width,
        amplitude: s
            .get("amplitude")
            .map(Entry::complex)
            .transpose()?
            .unwrap_or(C64::new(1.0, 0.0)),
    })
}

fn parse_testfn(s: &Section, known: &[TestFnDef]) -> Parsed<TestFnDef> {
    let name = s
        .name
        .clone()
        .ok_or_else(|| ScenarioError::new(s.line, "[testfn] needs a name"))?;
    if known
        .iter()
        .any(|t| t.name == name || member_names(t).contains(&name))
    {
        return Err(ScenarioError::new(
            s.line,
            format!("test function '{name}' defined twice"),
        ));
    }
    let translate = s
        .get("translate")
        .map(Entry::reals::<4>)
        .transpose()?
        .unwrap_or([0.0; 4]);
    let scale = s
        .get("scale")
        .map(Entry::complex)
        .transpose()?
        .unwrap_or(C64::new(1.0, 0.0));
    let body = if let Some(e) = s.get("random") {
        s.allow(&["random", "count", "translate", "scale"])?;
        let count = s.get("count").map(Entry::count).transpose()?.unwrap_or(1);
        if count == 0 {
            return Err(s.require("count")?.err("count must be at least 1"));
        }
        TestFnBody::Random {
            amplitude: e.real()?,
            count,
        }
    } else if let Some(e) = s.get("sum") {
        s.allow(&["sum", "translate", "scale"])?;
        let parts = e.list();
        for p in &parts {
            check_ref(known, e, p, false)?;
        }
        TestFnBody::Sum(parts)
    } else {
        let mut keys = PROFILE_KEYS.to_vec();
        keys.extend(["polarization", "v", "u", "e", "translate", "scale"]);
        s.allow(&keys)?;
        let profile = parse_profile(s)?;
        let pol = s.require("polarization")?;
        let polarization = match pol.raw.as_str() {
            "vector-field" => PolarizationSpec::VectorField(s.require("v")?.complexes()?),
            "conserved" => PolarizationSpec::Conserved {
                u: s.require("u")?.complexes()?,
                v: s.require("v")?.complexes()?,
            },
            "fixed" => PolarizationSpec::Fixed(s.require("e")?.complexes()?),
            "gradient" => PolarizationSpec::Gradient,
            "null-gauge" => PolarizationSpec::NullGauge,
            other => {
                return Err(pol.err(format!(
                    "unknown polarization '{other}' (vector-field, conserved, fixed, gradient, null-gauge)"
                )))
            }
        };
        TestFnBody::Mode {
            profile,
            polarization,
        }
    };
    Ok(TestFnDef {
        name,
        line: s.line,
        body,
        translate,
        scale,
    })
}

fn parse_greens(s: &Section) -> Parsed<GreensSpec> {
    let eps = s.get("epsilon").map(Entry::real).transpose()?;
    match s.get("greens").map(|e| (e, e.raw.as_str())) {
        None | Some((_, "retarded")) => Ok(GreensSpec::Retarded),
        Some((_, "advanced")) => Ok(GreensSpec::Advanced),
        Some((_, "feynman")) => Ok(GreensSpec::Feynman(eps)),
        Some((e, other)) => Err(e.err(format!(
            "unknown greens '{other}' (retarded, advanced, feynman)"
        ))),
    }
}

fn parse_current(s: &Section, known: &[TestFnDef]) -> Parsed<CurrentDef> {
    let kind = s.require("type")?;
    let reference = |key: &str| -> Parsed<String> {
        let e = s.require(key)?;
        check_ref(known, e, &e.raw, false)?;
        Ok(e.raw.clone())
    };
    let mut keys = PROFILE_KEYS.to_vec();
    keys.extend(["type", "v", "greens", "epsilon"]);
    match kind.raw.as_str() {
        "none" => {
            s.allow(&["type"])?;
            Ok(CurrentDef::None)
        }
        "coulomb" => {
            s.allow(&["type", "charge"])?;
            Ok(CurrentDef::Coulomb {
                charge: s.get("charge").map(Entry::real).transpose()?.unwrap_or(1.0),
            })
        }
        "pulse" => {
            s.allow(&keys)?;
            Ok(CurrentDef::Pulse {
                v: s.require("v")?.complexes()?,
                profile: parse_profile(s)?,
                greens: parse_greens(s)?,
            })
        }
        "quantum" => {
            keys.extend(["fx1", "fx2"]);
            s.allow(&keys)?;
            Ok(CurrentDef::Quantum {
                v: s.require("v")?.complexes()?,
                profile: parse_profile(s)?,
                fx1: reference("fx1")?,
                fx2: reference("fx2")?,
                greens: parse_greens(s)?,
            })
        }
        other => Err(kind.err(format!(
            "unknown current type '{other}' (none, coulomb, pulse, quantum)"
        ))),
    }
}

fn parse_task(s: &Section, known: &[TestFnDef]) -> Parsed<Task> {
    let name = s
        .name
        .clone()
        .ok_or_else(|| ScenarioError::new(s.line, "[task] needs a name"))?;
    let op_entry = s.require("op")?;
    let info = OPS.iter().find(|i| i.name == op_entry.raw).ok_or_else(|| {
        let names: Vec<&str> = OPS.iter().map(|i| i.name).collect();
        op_entry.err(format!(
            "unknown op '{}' (one of: {})",
            op_entry.raw,
            names.join(", ")
        ))
    })?;
    let mut keys = COMMON_KEYS.to_vec();
    keys.extend(info.keys);
    s.allow(&keys)?;
    for key in info.required {
        s.require(key)?;
    }
    for key in info.refs {
        if let Some(e) = s.get(key) {
            let family = *key == "family";
            let names = if family {
                e.list()
            } else {
                vec![e.raw.clone()]
            };
            for n in names {
                check_ref(known, e, &n, family)?;
            }
        }
    }
    let tol = s.get("tol").map(Entry::real).transpose()?;
    let args = s
        .entries
        .iter()
        .filter(|(k, _)| !COMMON_KEYS.contains(&k.as_str()))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    Ok(Task {
        name,
        line: s.line,
        op: info.op,
        tol,
        csv: s.get("csv").map(|e| e.raw.clone()),
        args,
    })
}

pub fn parse_scenario(text: &str) -> Parsed<Scenario> {
    let (top, sections) = split_sections(text)?;
    for (k, e) in &top {
        if k != "seed" {
            return Err(e.err(format!("unknown top-level key '{k}'")));
        }
    }
    let seed = match top.get("seed") {
        Some(e) => e
            .raw
            .trim()
            .parse()
            .map_err(|_| e.err("seed must be a non-negative integer"))?,
        None => 0,
    };
    let mut grid = None;
    let mut testfns = Vec::new();
    let mut current = None;
    let mut kernel = None;
    let mut tasks: Vec<Task> = Vec::new();
    let mut json = None;
    let once = |present: bool, s: &Section| -> Parsed<()> {
        if present {
            Err(ScenarioError::new(
                s.line,
                format!("[{}] given twice", s.kind),
            ))
        } else {
            Ok(())
        }
    };
    for s in &sections {
        match s.kind.as_str() {
            "grid" => {
                once(grid.is_some(), s)?;
                grid = Some(parse_grid(s)?);
            }
            "testfn" => {
                let def = parse_testfn(s, &testfns)?;
                testfns.push(def);
            }
            "current" => {
                once(current.is_some(), s)?;
                current = Some((parse_current(s, &testfns)?, s.line));
            }
            "kernel" => {
                once(kernel.is_some(), s)?;
                s.allow(&["type"])?;
                let e = s.require("type")?;
                kernel = Some(match e.raw.as_str() {
                    "free" => KernelKind::Free,
                    "classical" => KernelKind::Classical,
                    "quantum" => KernelKind::Quantum,
                    other => {
                        return Err(e.err(format!(
                            "unknown kernel '{other}' (free, classical, quantum)"
                        )))
                    }
                });
            }
            "task" => {
                let t = parse_task(s, &testfns)?;
                if tasks.iter().any(|o| o.name == t.name) {
                    return Err(ScenarioError::new(
                        s.line,
                        format!("task '{}' defined twice", t.name),
                    ));
                }
                tasks.push(t);
            }
            "output" => {
                once(json.is_some(), s)?;
                s.allow(&["json"])?;
                json = Some(s.require("json")?.raw.clone());
            }
            other => {
                return Err(ScenarioError::new(
                    s.line,
                    format!("unknown section [{other}]"),
                ))
            }
        }
    }
    let (current, current_line) = current.unwrap_or((CurrentDef::None, 0));
    let kernel = kernel.unwrap_or(match current {
        CurrentDef::None => KernelKind::Free,
        CurrentDef::Quantum { .. } => KernelKind::Quantum,
        _ => KernelKind::Classical,
    });
    let consistent = matches!(
        (kernel, &current),
        (KernelKind::Free, _)
            | (
                KernelKind::Classical,
                CurrentDef::Coulomb { .. } | CurrentDef::Pulse { .. } | CurrentDef::None
            )
            | (KernelKind::Quantum, CurrentDef::Quantum { .. })
    );
    if !consistent {
        let line = sections
            .iter()
            .find(|s| s.kind == "kernel")
            .map_or(current_line, |s| s.line);
        return Err(ScenarioError::new(
            line,
            format!(
                "kernel '{}' does not match the [current] type",
                kernel.name()
            ),
        ));
    }
    if tasks.is_empty() {
        return Err(ScenarioError::new(
            text.lines().count().max(1),
            "scenario defines no [task]",
        ));
    }
    Ok(Scenario {
        seed,
        grid: grid.unwrap_or_default(),
        testfns,
        current,
        current_line,
        kernel,
        tasks,
        json,
    })
}
