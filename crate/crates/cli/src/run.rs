//! Builds the objects a scenario names and executes its tasks.

use std::collections::BTreeMap;
use std::sync::Arc;

use emcov::currents::{
    ahom_smear, ir_diagnostic, y_far_future, ClassicalCurrent, OnShellSource, QuantumCurrent, Rule,
    Source, SyntheticAmplitude,
};
use emcov::gns::{
    covariance_residual, from_rows, gram_matrix, positivity_report, weyl_consistency, GramReport,
};
use emcov::hilbert::{scalar_product, scalar_product_transverse};
use emcov::sampling::Sampler;
use emcov::states::{coherent_radiation_check, second_moment_from_features, shift_to_zero};
use emcov::testfn::restrict_to_shell;
use emcov::{
    CorrelationKernel, Greens, Grid, GridSpec, Mode, Polarization, Profile, ProfileKind,
    TestFunction, C64,
};
use serde_json::{json, Value};

use crate::scenario::{
    expand, member_names, CurrentDef, Entry, GreensSpec, KernelKind, Op, PolarizationSpec,
    ProfileShape, ProfileSpec, Scenario, ScenarioError, Task, TestFnBody,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub grid_scale: f64,
    pub seed: Option<u64>,
    pub parallel: bool,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            grid_scale: 1.0,
            seed: None,
            parallel: false,
        }
    }
}

#[derive(Debug, Clone)]
pub enum CurrentModel {
    None,
    Classical(ClassicalCurrent),
    Quantum(QuantumCurrent),
}

/// Everything a task may refer to.
pub struct Context {
    pub grid_spec: GridSpec,
    pub grid: Arc<Grid>,
    pub rule: Rule,
    pub seed: u64,
    pub testfns: BTreeMap<String, TestFunction>,
    pub current: CurrentModel,
    pub kernel: CorrelationKernel,
    defs: Vec<crate::scenario::TestFnDef>,
}

fn profile(p: &ProfileSpec, line: usize) -> Result<Profile, ScenarioError> {
    let kind = match p.shape {
        ProfileShape::Separable => ProfileKind::SeparableBump,
        ProfileShape::Gaussian => ProfileKind::GaussianWindowedBump,
    };
    Profile::new(kind, p.center, p.half_width, p.amplitude)
        .map_err(|e| ScenarioError::new(line, e.to_string()))
}

fn greens(g: GreensSpec, grid: &GridSpec) -> Greens {
    match g {
        GreensSpec::Retarded => Greens::Retarded,
        GreensSpec::Advanced => Greens::Advanced,
        GreensSpec::Feynman(eps) => Greens::Feynman {
            epsilon: eps.unwrap_or(1e-6 * grid.k_max * grid.k_max),
        },
    }
}

pub fn build(s: &Scenario, opts: &Options) -> Result<Context, ScenarioError> {
    let grid_spec = s.grid.scaled(opts.grid_scale);
    let grid = Arc::new(
        grid_spec
            .build()
            .map_err(|e| ScenarioError::new(1, e.to_string()))?,
    );
    let rule = Rule::default().scaled(opts.grid_scale);
    let seed = opts.seed.unwrap_or(s.seed);
    let mut sampler = Sampler::new(seed);
    let mut testfns: BTreeMap<String, TestFunction> = BTreeMap::new();
    for def in &s.testfns {
        let post = |f: TestFunction| f.rotate(def.scale).translate(&def.translate);
        match &def.body {
            TestFnBody::Mode {
                profile: p,
                polarization,
            } => {
                let pol = match polarization {
                    PolarizationSpec::VectorField(v) => Polarization::from_vector_field(*v),
                    PolarizationSpec::Conserved { u, v } => {
                        Polarization::Conserved { u: *u, v: *v }
                    }
                    PolarizationSpec::Fixed(e) => Polarization::Fixed(*e),
                    PolarizationSpec::Gradient => Polarization::Gradient,
                    PolarizationSpec::NullGauge => Polarization::NullGauge,
                };
                let f = TestFunction::new(vec![Mode::new(pol, profile(p, def.line)?)]);
                testfns.insert(def.name.clone(), post(f));
            }
            TestFnBody::Random { amplitude, .. } => {
                for name in member_names(def) {
                    testfns.insert(name, post(sampler.test_function(*amplitude)));
                }
            }
            TestFnBody::Sum(parts) => {
                let f = parts
                    .iter()
                    .fold(TestFunction::zero(), |acc, p| acc.add(&testfns[p]));
                testfns.insert(def.name.clone(), post(f));
            }
        }
    }
    let at_current = |e: emcov::Error| ScenarioError::new(s.current_line, e.to_string());
    let current = match &s.current {
        CurrentDef::None => CurrentModel::None,
        CurrentDef::Coulomb { charge } => {
            CurrentModel::Classical(ClassicalCurrent::coulomb(*charge))
        }
        CurrentDef::Pulse {
            v,
            profile: p,
            greens: g,
        } => CurrentModel::Classical(
            ClassicalCurrent::new(
                Source::pulse(*v, profile(p, s.current_line)?),
                greens(*g, &grid_spec),
            )
            .map_err(at_current)?
            .with_rule(rule),
        ),
        CurrentDef::Quantum {
            v,
            profile: p,
            fx1,
            fx2,
            greens: g,
        } => {
            let alpha = QuantumCurrent::alpha_from_vector_fields(&[(
                *v,
                profile(p, s.current_line)?,
                [0.0; 4],
            )]);
            CurrentModel::Quantum(
                QuantumCurrent::new(
                    alpha,
                    testfns[fx1].clone(),
                    testfns[fx2].clone(),
                    greens(*g, &grid_spec),
                    grid.clone(),
                )
                .map_err(at_current)?
                .with_rule(rule),
            )
        }
    };
    let kernel = match (&current, s.kernel) {
        (CurrentModel::Classical(c), KernelKind::Classical) => {
            CorrelationKernel::classical(c.clone(), grid.clone())
        }
        (CurrentModel::None, KernelKind::Classical) => {
            CorrelationKernel::classical(ClassicalCurrent::coulomb(0.0), grid.clone())
        }
        (CurrentModel::Quantum(q), KernelKind::Quantum) => CorrelationKernel::quantum(q.clone()),
        _ => CorrelationKernel::free(grid.clone()),
    };
    Ok(Context {
        grid_spec,
        grid,
        rule,
        seed,
        testfns,
        current,
        kernel,
        defs: s.testfns.clone(),
    })
}

/// Outcome of one task, as it appears in the JSON report.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct TaskReport {
    pub op: String,
    /// Library routine that produced the outputs.
    pub provenance: String,
    pub inputs: BTreeMap<String, Value>,
    pub outputs: BTreeMap<String, Value>,
    pub tolerance: Option<f64>,
    pub pass: bool,
    pub error: Option<String>,
    #[serde(skip)]
    pub table: Option<Table>,
}

/// Rows destined for a CSV file.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub path: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

pub fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

struct Outcome {
    provenance: &'static str,
    outputs: BTreeMap<String, Value>,
    tolerance: Option<f64>,
    pass: bool,
    table: Option<(Vec<String>, Vec<Vec<f64>>)>,
}

impl Outcome {
    fn new(provenance: &'static str, tolerance: Option<f64>) -> Self {
        Self {
            provenance,
            outputs: BTreeMap::new(),
            tolerance,
            pass: true,
            table: None,
        }
    }

    fn put(&mut self, key: &str, v: impl Into<Value>) -> &mut Self {
        self.outputs.insert(key.to_string(), v.into());
        self
    }
}

type TaskResult = Result<Outcome, String>;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

impl Context {
    fn tf(&self, task: &Task, key: &str) -> Result<&TestFunction, String> {
        let e = task.arg(key).ok_or_else(|| format!("missing '{key}'"))?;
        self.testfns
            .get(&e.raw)
            .ok_or_else(|| format!("undefined test function '{}'", e.raw))
    }

    fn family(&self, task: &Task) -> Result<Vec<TestFunction>, String> {
        let e = task.arg("family").ok_or("missing 'family'")?;
        let mut out = Vec::new();
        for n in e.list() {
            for m in expand(&self.defs, &n, true)
                .ok_or_else(|| format!("undefined test function '{n}'"))?
            {
                out.push(self.testfns[&m].clone());
            }
        }
        Ok(out)
    }

    fn classical(&self) -> Result<&ClassicalCurrent, String> {
        match &self.current {
            CurrentModel::Classical(c) => Ok(c),
            _ => Err("this task needs a classical current (coulomb or pulse)".into()),
        }
    }

    fn quantum(&self) -> Result<&QuantumCurrent, String> {
        match &self.current {
            CurrentModel::Quantum(q) => Ok(q),
            _ => Err("this task needs a quantum current".into()),
        }
    }

    fn execute(&self, task: &Task) -> TaskResult {
        let e = |err: emcov::Error| err.to_string();
        let grid = &self.grid;
        let kernel = &self.kernel;
        let tol = task.tol;
        let expect = |key: &str| {
            task.arg(key)
                .map(Entry::real)
                .transpose()
                .map_err(|x| x.message)
        };
        match task.op {
            Op::Norm => {
                let phi = restrict_to_shell(self.tf(task, "f")?, grid).map_err(e)?;
                let n = scalar_product(&phi, &phi).map_err(e)?;
                let scale = phi.magnitude_scale();
                let t = tol.unwrap_or(1e-12);
                let mut o = Outcome::new("hilbert::scalar_product", Some(t));
                o.put("norm", n.re)
                    .put("imaginary_part", n.im)
                    .put("scale", scale);
                o.pass = n.re >= -t * scale && n.im.abs() <= t * scale.max(f64::MIN_POSITIVE);
                Ok(o)
            }
            Op::ScalarProduct => {
                let phi = restrict_to_shell(self.tf(task, "f")?, grid).map_err(e)?;
                let psi = restrict_to_shell(self.tf(task, "g")?, grid).map_err(e)?;
                let a = scalar_product(&phi, &psi).map_err(e)?;
                let b = scalar_product_transverse(&phi, &psi).map_err(e)?;
                let scale = (scalar_product(&phi, &phi).map_err(e)?.re
                    * scalar_product(&psi, &psi).map_err(e)?.re)
                    .sqrt();
                let t = tol.unwrap_or(1e-10);
                let gap = (a - b).norm() / scale.max(f64::MIN_POSITIVE);
                let mut o = Outcome::new("hilbert::scalar_product_transverse", Some(t));
                o.put("value", complex(a))
                    .put("transverse_value", complex(b))
                    .put("relative_gap", gap);
                o.pass = gap <= t;
                Ok(o)
            }
            Op::Acl => {
                let a = self
                    .classical()?
                    .acl_smear_complex(self.tf(task, "f")?, grid)
                    .map_err(e)?;
                let mut o = Outcome::new("currents::ClassicalCurrent::acl_smear", None);
                o.put("value", a.re).put("imaginary_part", a.im);
                if let Some(x) = expect("expect")? {
                    let t = tol.unwrap_or(1e-3);
                    o.tolerance = Some(t);
                    o.put("expected", x).put("relative_gap", rel(a.re, x));
                    o.pass = rel(a.re, x) <= t;
                }
                Ok(o)
            }
            Op::Ahom => {
                let f = self.tf(task, "f")?;
                let v = match &self.current {
                    CurrentModel::Classical(c) => ahom_smear(c, f, grid),
                    CurrentModel::Quantum(q) => ahom_smear(q, f, grid),
                    CurrentModel::None => return Err("this task needs a current".into()),
                }
                .map_err(e)?;
                let mut o = Outcome::new("currents::ahom_smear", None);
                o.put("value", v);
                if let Some(x) = expect("expect")? {
                    let t = tol.unwrap_or(1e-3);
                    o.tolerance = Some(t);
                    o.put("expected", x).put("relative_gap", rel(v, x));
                    o.pass = rel(v, x) <= t;
                }
                Ok(o)
            }
            Op::Radiation => {
                let c = self.classical()?;
                let f = self.tf(task, "f")?;
                let acl = c.acl_smear(f, grid).map_err(e)?;
                let hom = ahom_smear(c, f, grid).map_err(e)?;
                let t = tol.unwrap_or(1e-3);
                let mut o = Outcome::new("currents::ahom_smear", Some(t));
                o.put("acl", acl)
                    .put("ahom", hom)
                    .put("relative_gap", rel(2.0 * hom, acl));
                o.pass = rel(2.0 * hom, acl) <= t;
                Ok(o)
            }
            Op::Y => {
                let q = self.quantum()?;
                let f = self.tf(task, "f")?;
                let y = q.y_functional(f).map_err(e)?;
                let mut o = Outcome::new("currents::QuantumCurrent::y_functional", None);
                o.put("value", complex(y));
                let far = task
                    .arg("far_future")
                    .map(Entry::flag)
                    .transpose()
                    .map_err(|x| x.message)?;
                if far == Some(true) {
                    let t = tol.unwrap_or(1e-3);
                    let route = y_far_future(q, f, grid).map_err(e)?;
                    let gap = (y - route).norm() / y.norm().max(f64::MIN_POSITIVE);
                    o.tolerance = Some(t);
                    o.put("light_cone_value", complex(route))
                        .put("relative_gap", gap);
                    o.pass = gap <= t;
                }
                Ok(o)
            }
            Op::X => {
                let q = self.quantum()?;
                let phi = restrict_to_shell(self.tf(task, "f")?, grid).map_err(e)?;
                let x = q.x_from_wave(&phi).map_err(e)?;
                let s = scalar_product(&phi, &phi).map_err(e)?.re;
                let t = tol.unwrap_or(1e-10);
                let mut o = Outcome::new("currents::QuantumCurrent::x_functional", Some(t));
                o.put("value", complex(x)).put("norm", s);
                o.pass = x.norm_sqr() <= s * (1.0 + t);
                Ok(o)
            }
            Op::XBound => {
                let q = self.quantum()?;
                let t = tol.unwrap_or(1e-10);
                let mut worst = f64::NEG_INFINITY;
                let fam = self.family(task)?;
                for f in &fam {
                    let phi = restrict_to_shell(f, grid).map_err(e)?;
                    let s = scalar_product(&phi, &phi).map_err(e)?.re;
                    let x = q.x_from_wave(&phi).map_err(e)?;
                    worst = worst.max((x.norm_sqr() - s) / s.max(f64::MIN_POSITIVE));
                }
                let mut o = Outcome::new("currents::QuantumCurrent::x_functional", Some(t));
                o.put("samples", fam.len())
                    .put("max_relative_excess", worst);
                o.pass = worst <= t;
                Ok(o)
            }
            Op::Corr => {
                let (f, g) = (self.tf(task, "f")?, self.tf(task, "g")?);
                let fg = kernel.corr(f, g).map_err(e)?;
                let gf = kernel.corr(g, f).map_err(e)?;
                let t = tol.unwrap_or(1e-12);
                let mut o = Outcome::new("states::CorrelationKernel::corr", Some(t));
                o.put("value", complex(fg))
                    .put("modulus", fg.norm())
                    .put("hermiticity_gap", (fg - gf.conj()).norm());
                o.pass = (fg - gf.conj()).norm() <= t && fg.norm() <= 1.0 + t;
                Ok(o)
            }
            Op::MeanField => {
                let f = self.tf(task, "f")?;
                let m = kernel.mean_field(f).map_err(e)?;
                let t = tol.unwrap_or(1e-6);
                let mut o = Outcome::new("states::CorrelationKernel::mean_field", Some(t));
                o.put("value", m);
                match &self.current {
                    CurrentModel::Classical(c)
                        if matches!(self.kernel.variant, emcov::KernelVariant::Classical(_)) =>
                    {
                        let a = c.acl_smear(f, grid).map_err(e)?;
                        o.put("acl", a);
                        o.pass = if a == 0.0 {
                            m.abs() <= t
                        } else {
                            rel(m, a) <= t
                        };
                    }
                    _ => {
                        let feats = kernel.features(f).map_err(e)?;
                        let scale = scalar_product(&feats.phi, &feats.phi).map_err(e)?.re.sqrt()
                            + feats.y.norm()
                            + feats.x.norm();
                        o.put("scale", scale);
                        o.pass = m.abs() <= t * scale;
                    }
                }
                Ok(o)
            }
            Op::SecondMoment => {
                let (f, g) = (self.tf(task, "f")?, self.tf(task, "g")?);
                let fd = kernel.second_moment_fd(f, g).map_err(e)?;
                let t = tol.unwrap_or(1e-5);
                let mut o = Outcome::new("states::second_moment_quantum", Some(t));
                o.put("finite_difference", complex(fd));
                if let emcov::KernelVariant::Quantum(_) = kernel.variant {
                    let a = kernel.features(f).map_err(e)?;
                    let b = kernel.features(g).map_err(e)?;
                    let exact = second_moment_from_features(&a, &b).map_err(e)?;
                    let gap = (fd - exact).norm() / exact.norm().max(f64::MIN_POSITIVE);
                    o.put("value", complex(exact)).put("relative_gap", gap);
                    o.pass = gap <= t;
                } else {
                    o.provenance = "states::CorrelationKernel::second_moment_fd";
                }
                Ok(o)
            }
            Op::Covariance => {
                let r = covariance_residual(
                    kernel,
                    self.tf(task, "f")?,
                    self.tf(task, "g")?,
                    self.tf(task, "h")?,
                )
                .map_err(e)?;
                let t = tol.unwrap_or(1e-10);
                let mut o = Outcome::new("gns::covariance_residual", Some(t));
                o.put("residual", r);
                o.pass = r <= t;
                Ok(o)
            }
            Op::Gram => {
                let fam = self.family(task)?;
                let g = gram_matrix(kernel, &fam).map_err(e)?;
                let t = tol.unwrap_or(1e-8);
                Ok(gram_outcome(
                    "gns::gram_matrix",
                    positivity_report(&g, t).map_err(e)?,
                ))
            }
            Op::Positivity => {
                let entry = task.arg("matrix").ok_or("missing 'matrix'")?;
                let rows = entry
                    .raw
                    .split(';')
                    .map(|r| {
                        r.split(',')
                            .map(|x| {
                                crate::scenario::parse_complex(x)
                                    .ok_or_else(|| format!("bad matrix entry '{x}'"))
                            })
                            .collect::<Result<Vec<C64>, String>>()
                    })
                    .collect::<Result<Vec<_>, String>>()?;
                let g = from_rows(&rows).map_err(e)?;
                let t = tol.unwrap_or(1e-8);
                Ok(gram_outcome(
                    "gns::positivity_report",
                    positivity_report(&g, t).map_err(e)?,
                ))
            }
            Op::Weyl => {
                let base = self.family(task)?;
                let r = weyl_consistency(kernel, &base, self.tf(task, "h1")?, self.tf(task, "h2")?)
                    .map_err(e)?;
                let t = tol.unwrap_or(1e-8);
                let mut o = Outcome::new("gns::weyl_consistency", Some(t));
                o.put("residual", r).put("base_size", base.len());
                o.pass = r <= t;
                Ok(o)
            }
            Op::Ir => self.infrared(task),
            Op::Coherent => {
                let c = self.classical()?;
                let r = coherent_radiation_check(
                    c,
                    self.tf(task, "f")?,
                    self.tf(task, "g")?,
                    self.tf(task, "v")?,
                    grid,
                )
                .map_err(e)?;
                let above = match task.arg("expect").map(|x| x.raw.as_str()) {
                    None | Some("below") => false,
                    Some("above") => true,
                    Some(other) => {
                        return Err(format!("expect must be 'below' or 'above', got '{other}'"))
                    }
                };
                let t = tol.unwrap_or(if above { 1e-3 } else { 1e-6 });
                let mut o = Outcome::new("states::coherent_radiation_check", Some(t));
                o.put("residual", r)
                    .put("expect", if above { "above" } else { "below" });
                o.pass = if above { r > t } else { r <= t };
                Ok(o)
            }
            Op::ShiftToZero => {
                let shift = task
                    .arg("shift")
                    .ok_or("missing 'shift'")?
                    .reals::<4>()
                    .map_err(|x| x.message)?;
                let r = shift_to_zero(kernel, self.tf(task, "f")?, &shift).map_err(e)?;
                let t = tol.unwrap_or(1e-8);
                let mut o = Outcome::new("states::shift_to_zero", Some(t));
                o.put("norm", r.norm)
                    .put("shifted_norm", r.shifted_norm)
                    .put("moment", r.moment)
                    .put("shifted_moment", r.shifted_moment);
                o.pass = r.moment.abs() > 1e-3
                    && r.shifted_moment.abs() < t
                    && r.norm < 1e-10
                    && r.shifted_norm < 1e-10;
                Ok(o)
            }
        }
    }

    fn infrared(&self, task: &Task) -> TaskResult {
        let real = |key: &str| {
            task.arg(key)
                .map(Entry::real)
                .transpose()
                .map_err(|x| x.message)
        };
        let shells = task
            .arg("shells")
            .map(Entry::count)
            .transpose()
            .map_err(|x| x.message)?
            .unwrap_or(8);
        let k_top = real("k_top")?.unwrap_or(1.0);
        let synthetic = match real("power")? {
            Some(p) => Some(SyntheticAmplitude {
                power: p,
                strength: real("strength")?.unwrap_or(1.0),
            }),
            None => None,
        };
        let source: &dyn OnShellSource = match (&synthetic, &self.current) {
            (Some(s), _) => s,
            (None, CurrentModel::Classical(c)) => c,
            (None, CurrentModel::Quantum(q)) => q,
            (None, CurrentModel::None) => return Err("ir needs 'power' or a current".into()),
        };
        let r = ir_diagnostic(source, shells, k_top, &self.grid_spec).map_err(|e| e.to_string())?;
        let verdict = serde_json::to_value(r.verdict).map_err(|e| e.to_string())?;
        let t = task.tol.unwrap_or(1e-6);
        let mut o = Outcome::new("currents::ir_diagnostic", Some(t));
        o.put("verdict", verdict.clone())
            .put("ratio", r.ratio)
            .put("fitted_exponent", r.fitted_exponent);
        let mut header = vec![
            "shell_lower".to_string(),
            "shell_upper".into(),
            "integral".into(),
        ];
        let mut rows = Vec::new();
        let mut worst = 0.0f64;
        for &(lo, v) in &r.shell_integrals {
            let mut row = vec![lo, 2.0 * lo, v];
            if let Some(s) = &synthetic {
                let exact = s.shell_integral(lo, 2.0 * lo);
                worst = worst.max(if exact == 0.0 { v.abs() } else { rel(v, exact) });
                row.push(exact);
            }
            rows.push(row);
        }
        if synthetic.is_some() {
            header.push("analytic".into());
            o.put("max_oracle_gap", worst);
            o.pass = worst <= t;
        }
        o.put(
            "shell_integrals",
            Value::Array(
                r.shell_integrals
                    .iter()
                    .map(|&(lo, v)| json!([lo, v]))
                    .collect(),
            ),
        );
        if let Some(want) = task.arg("expect") {
            o.put("expected_verdict", want.raw.as_str());
            o.pass &= verdict.as_str() == Some(want.raw.as_str());
        }
        o.table = Some((header, rows));
        Ok(o)
    }

    pub fn run_task(&self, task: &Task) -> TaskReport {
        let inputs = task
            .args
            .iter()
            .map(|(k, v)| (k.clone(), Value::String(v.raw.clone())))
            .collect();
        match self.execute(task) {
            Ok(o) => TaskReport {
                op: task.op.name().to_string(),
                provenance: format!("emcov::{}", o.provenance),
                inputs,
                outputs: o.outputs,
                tolerance: o.tolerance,
                pass: o.pass,
                error: None,
                table: match (o.table, &task.csv) {
                    (Some((header, rows)), Some(path)) => Some(Table {
                        path: path.clone(),
                        header,
                        rows,
                    }),
                    _ => None,
                },
            },
            Err(msg) => TaskReport {
                op: task.op.name().to_string(),
                provenance: String::new(),
                inputs,
                outputs: BTreeMap::new(),
                tolerance: task.tol,
                pass: false,
                error: Some(msg),
                table: None,
            },
        }
    }
}

fn gram_outcome(provenance: &'static str, r: GramReport) -> Outcome {
    let mut o = Outcome::new(provenance, Some(r.tolerance));
    o.put("dimension", r.dimension)
        .put("min_eig", r.min_eig)
        .put("max_eig", r.max_eig)
        .put("eigenvalues", r.eigenvalues.clone());
    o.pass = r.verdict;
    o.table = Some((
        vec!["index".into(), "eigenvalue".into()],
        r.eigenvalues
            .iter()
            .enumerate()
            .map(|(i, &v)| vec![i as f64, v])
            .collect(),
    ));
    o
}

/// Runs every task; a failing task never stops the others.
pub fn run_tasks(ctx: &Context, tasks: &[Task], parallel: bool) -> BTreeMap<String, TaskReport> {
    if !parallel {
        return tasks
            .iter()
            .map(|t| (t.name.clone(), ctx.run_task(t)))
            .collect();
    }
    std::thread::scope(|scope| {
        let handles: Vec<_> = tasks
            .iter()
            .map(|t| (t.name.clone(), scope.spawn(move || ctx.run_task(t))))
            .collect();
        handles
            .into_iter()
            .map(|(name, h)| (name, h.join().expect("task thread panicked")))
            .collect()
    })
}
