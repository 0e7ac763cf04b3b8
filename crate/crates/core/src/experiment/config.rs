//! Strict `key = value` experiment configuration.
//!
//! ```text
//! # global keys
//! seed = 7
//! out = results
//!
//! [sinsin]
//! kind = fem-converge
//! levels = 5
//! ```
//!
//! Each `[name]` section is one experiment. Every key is checked against the
//! experiment kind before anything runs; unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::fem::{LoadQuadrature, Point, Triangulation};

/// Keys of one section with the line each came from.
#[derive(Debug, Clone, Default)]
pub struct Section {
    pub name: String,
    entries: BTreeMap<String, (String, usize)>,
}

impl Section {
    pub fn new(name: &str) -> Self {
        Self { name: name.to_string(), entries: BTreeMap::new() }
    }

    pub fn insert(&mut self, key: &str, value: &str, line: usize) -> Result<()> {
        if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::Config(format!("line {line}: invalid key {key:?}")));
        }
        if self.entries.insert(key.to_string(), (value.to_string(), line)).is_some() {
            return Err(Error::Config(format!("line {line}: key {key:?} repeated in [{}]", self.name)));
        }
        Ok(())
    }

    /// Section built from `KEY=VALUE` arguments.
    pub fn from_pairs<S: AsRef<str>>(name: &str, pairs: &[S]) -> Result<Self> {
        let mut section = Self::new(name);
        for (i, pair) in pairs.iter().enumerate() {
            let pair = pair.as_ref();
            let (k, v) =
                pair.split_once('=').ok_or_else(|| Error::Config(format!("argument {pair:?} is not KEY=VALUE")))?;
            section.insert(k.trim(), v.trim(), i + 1)?;
        }
        Ok(section)
    }

    fn take_raw(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    pub fn take<T: FromStr>(&mut self, key: &str, default: T) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.take_opt(key)?.unwrap_or(default))
    }

    pub fn take_opt<T: FromStr>(&mut self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.take_raw(key)
            .map(|(v, line)| {
                v.parse::<T>().map_err(|e| Error::Config(format!("line {line}: [{}] {key} = {v:?}: {e}", self.name)))
            })
            .transpose()
    }

    fn take_positive(&mut self, key: &str, default: f64) -> Result<f64> {
        let v: f64 = self.take(key, default)?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(Error::Config(format!("[{}] {key} must be positive, got {v}", self.name)));
        }
        Ok(v)
    }

    fn take_count(&mut self, key: &str, default: usize, min: usize) -> Result<usize> {
        let v: usize = self.take(key, default)?;
        if v < min {
            return Err(Error::Config(format!("[{}] {key} must be at least {min}, got {v}", self.name)));
        }
        Ok(v)
    }

    fn take_list(&mut self, key: &str) -> Result<Option<Vec<f64>>> {
        self.take_raw(key)
            .map(|(v, line)| {
                parse_list(&v).map_err(|e| Error::Config(format!("line {line}: [{}] {key}: {e}", self.name)))
            })
            .transpose()
    }

    /// Fails on any key that was not consumed.
    pub fn finish(self) -> Result<()> {
        match self.entries.iter().next() {
            Some((key, (_, line))) => {
                Err(Error::Config(format!("line {line}: unknown key {key:?} in [{}]", self.name)))
            }
            None => Ok(()),
        }
    }
}

/// Comma-separated floats.
pub fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',').map(|x| x.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{x:?}: {e}")))).collect()
}

/// `x,y; x,y; ...`
pub fn parse_points(s: &str) -> Result<Vec<Point>> {
    s.split(';')
        .map(|p| match parse_list(p)?.as_slice() {
            [x, y] => Ok([*x, *y]),
            _ => Err(Error::Parse(format!("{p:?} is not a point x,y"))),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub enum MeshSpec {
    Square,
    LShape,
    File(PathBuf),
}

impl FromStr for MeshSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "square" => Self::Square,
            "lshape" => Self::LShape,
            path => Self::File(PathBuf::from(path)),
        })
    }
}

impl MeshSpec {
    pub fn load(&self) -> Result<Triangulation> {
        match self {
            Self::Square => Ok(Triangulation::unit_square()),
            Self::LShape => Ok(Triangulation::l_shape()),
            Self::File(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                crate::fem::io::parse_mesh(&text)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FemProblem {
    /// Manufactured `u = sin(πx) sin(πy)`.
    SinSin,
    /// `f ≡ 1`.
    Constant,
    Zero,
}

impl FromStr for FemProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sinsin" => Ok(Self::SinSin),
            "constant" => Ok(Self::Constant),
            "zero" => Ok(Self::Zero),
            other => Err(Error::Config(format!("unknown FEM problem {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSpec {
    pub solver_tol: f64,
    pub jacobi: bool,
    pub quadrature: LoadQuadrature,
}

impl SolverSpec {
    fn parse(s: &mut Section) -> Result<Self> {
        Ok(Self {
            solver_tol: s.take_positive("solver_tol", 1e-10)?,
            jacobi: s.take("jacobi", false)?,
            quadrature: s.take("quadrature", LoadQuadrature::EdgeMidpoint)?,
        })
    }

    pub fn fem_options(&self) -> crate::fem::FemOptions {
        crate::fem::FemOptions {
            cg: crate::fem::CgOptions { rtol: self.solver_tol, jacobi: self.jacobi, ..Default::default() },
            quadrature: self.quadrature,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FemConvergeSpec {
    pub mesh: MeshSpec,
    pub problem: FemProblem,
    pub levels: usize,
    pub tol: f64,
    pub window: usize,
    pub solver: SolverSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IftProblemKind {
    /// `f(x, y) = y + x y - x` per coordinate.
    Scalar,
    /// The same map on `dim` coordinates.
    Componentwise,
    /// `f(x, y) = y`.
    Trivial,
}

impl FromStr for IftProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "scalar" => Ok(Self::Scalar),
            "componentwise" => Ok(Self::Componentwise),
            "trivial" => Ok(Self::Trivial),
            other => Err(Error::Config(format!("unknown implicit problem {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IftSpec {
    pub problem: IftProblemKind,
    pub dim: usize,
    pub x_radius: f64,
    pub y_radius: f64,
    pub levels: Vec<u32>,
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
}

impl IftSpec {
    fn parse(s: &mut Section) -> Result<Self> {
        let problem = s.take("problem", IftProblemKind::Scalar)?;
        let default_dim = if problem == IftProblemKind::Componentwise { 8 } else { 1 };
        let levels = match s.take_list("levels")? {
            None => vec![0, 1, 2],
            Some(l) => l
                .into_iter()
                .map(|v| {
                    if v >= 0.0 && v.fract() == 0.0 && v <= 64.0 {
                        Ok(v as u32)
                    } else {
                        Err(Error::Config(format!("[{}] levels must be small non-negative integers", s.name)))
                    }
                })
                .collect::<Result<_>>()?,
        };
        let spec = Self {
            problem,
            dim: s.take_count("dim", default_dim, 1)?,
            x_radius: s.take_positive("x_radius", 2.0)?,
            y_radius: s.take_positive("y_radius", 100.0)?,
            levels,
            tol: s.take_positive("tol", 1e-12)?,
            max_iter: s.take_count("max_iter", 10_000, 5)?,
            window: s.take_count("window", 3, 3)?,
        };
        if spec.problem == IftProblemKind::Scalar && spec.dim != 1 {
            return Err(Error::Config(format!("[{}] the scalar problem has dim = 1", s.name)));
        }
        if spec.max_iter < spec.window + 2 {
            return Err(Error::Config(format!("[{}] max_iter must be at least window + 2", s.name)));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IftSolveSpec {
    pub ift: IftSpec,
    /// Explicit parameter; defaults to `x_k = 0.5 / (1 + k)`.
    pub x: Option<Vec<f64>>,
    /// Additional random scalar parameters drawn from `(-0.9, 0.9)`.
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IftDomainSpec {
    pub ift: IftSpec,
    pub ray: Vec<f64>,
    pub steps: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrobeniusProblemKind {
    /// `f(x, y)(a) = y · a`, `J = y e^{x - x₀}`.
    Exponential,
    /// `f(x, y)(a) = c · a`, `J = y + c (x - x₀)`.
    Constant,
}

impl FromStr for FrobeniusProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exponential" => Ok(Self::Exponential),
            "constant" => Ok(Self::Constant),
            other => Err(Error::Config(format!("unknown Frobenius problem {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrobeniusSpec {
    pub problem: FrobeniusProblemKind,
    pub c: f64,
    pub x: f64,
    pub y: f64,
    pub grid: usize,
    pub grids: Vec<usize>,
    pub identity_samples: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub window: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeTarget {
    /// Superposition and derivative of the FEM scheme in the load.
    Linearity,
    /// FEM solution as one interior vertex moves.
    Vertex,
    /// Implicit solution `u(x)` along `x = t`.
    Implicit,
}

impl FromStr for ProbeTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "linearity" => Ok(Self::Linearity),
            "vertex" => Ok(Self::Vertex),
            "implicit" => Ok(Self::Implicit),
            other => Err(Error::Config(format!("unknown probe target {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSpec {
    pub target: ProbeTarget,
    pub mesh: MeshSpec,
    /// Refinements applied to the mesh before it becomes the probe's base.
    pub base_level: usize,
    pub levels: usize,
    pub t: f64,
    pub vertex: Point,
    pub direction: Point,
    pub amplitude: f64,
    pub area_floor: f64,
    pub samples: Vec<Point>,
    pub point: f64,
    pub h0: f64,
    pub solver: SolverSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CounterexampleSpec {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub k_max: usize,
    pub tol: f64,
    pub window: usize,
    pub max_index: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExperimentKind {
    FemConverge(FemConvergeSpec),
    IftSolve(IftSolveSpec),
    IftDomain(IftDomainSpec),
    Frobenius(FrobeniusSpec),
    Probe(ProbeSpec),
    Counterexample(CounterexampleSpec),
}

pub const KINDS: [&str; 6] = ["fem-converge", "ift-solve", "ift-domain", "frobenius", "probe", "counterexample"];

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::FemConverge(_) => "fem-converge",
            Self::IftSolve(_) => "ift-solve",
            Self::IftDomain(_) => "ift-domain",
            Self::Frobenius(_) => "frobenius",
            Self::Probe(_) => "probe",
            Self::Counterexample(_) => "counterexample",
        }
    }

    /// Parses every key of `section` for `kind`, leaving none unread.
    pub fn parse(kind: &str, mut s: Section) -> Result<Self> {
        let parsed = match kind {
            "fem-converge" => {
                let spec = FemConvergeSpec {
                    mesh: s.take("mesh", MeshSpec::Square)?,
                    problem: s.take("problem", FemProblem::SinSin)?,
                    levels: s.take_count("levels", 5, 2)?,
                    tol: s.take_positive("tol", crate::fem::DEFAULT_SCHEME_TOL)?,
                    window: s.take_count("window", 3, 3)?,
                    solver: SolverSpec::parse(&mut s)?,
                };
                if spec.problem == FemProblem::SinSin && spec.mesh == MeshSpec::LShape {
                    return Err(Error::Config(format!("[{}] sinsin is manufactured on the unit square only", s.name)));
                }
                Self::FemConverge(spec)
            }
            "ift-solve" => {
                let ift = IftSpec::parse(&mut s)?;
                let x = s.take_list("x")?;
                if let Some(x) = &x {
                    if x.len() != ift.dim {
                        return Err(Error::Config(format!("[{}] x needs {} values", s.name, ift.dim)));
                    }
                }
                let samples = s.take("samples", 0)?;
                if samples > 0 && ift.problem != IftProblemKind::Scalar {
                    return Err(Error::Config(format!("[{}] samples apply to the scalar problem only", s.name)));
                }
                Self::IftSolve(IftSolveSpec { ift, x, samples })
            }
            "ift-domain" => {
                let ift = IftSpec::parse(&mut s)?;
                let ray = s.take_list("ray")?.unwrap_or_else(|| vec![1.0; ift.dim]);
                if ray.len() != ift.dim {
                    return Err(Error::Config(format!("[{}] ray needs {} values", s.name, ift.dim)));
                }
                let steps = s.take_list("steps")?.unwrap_or_else(|| vec![0.1, 0.5, 0.9, 1.5]);
                if steps.is_empty() || steps[0] <= 0.0 || steps.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::Config(format!("[{}] steps must be positive and increasing", s.name)));
                }
                Self::IftDomain(IftDomainSpec { ift, ray, steps })
            }
            "frobenius" => {
                let grids = s
                    .take_list("grids")?
                    .unwrap_or_else(|| vec![50.0, 100.0, 200.0, 400.0])
                    .into_iter()
                    .map(|g| {
                        if g >= 2.0 && g.fract() == 0.0 {
                            Ok(g as usize)
                        } else {
                            Err(Error::Config(format!("[{}] grids must be integers >= 2", s.name)))
                        }
                    })
                    .collect::<Result<Vec<_>>>()?;
                let spec = FrobeniusSpec {
                    problem: s.take("problem", FrobeniusProblemKind::Exponential)?,
                    c: s.take("c", 1.0)?,
                    x: s.take("x", 1.0)?,
                    y: s.take("y", 1.0)?,
                    grid: s.take_count("grid", crate::frobenius::DEFAULT_GRID, 2)?,
                    grids,
                    identity_samples: s.take("identity_samples", 10)?,
                    tol: s.take_positive("tol", 1e-12)?,
                    max_iter: s.take_count("max_iter", 200, 5)?,
                    window: s.take_count("window", 3, 3)?,
                };
                Self::Frobenius(spec)
            }
            "probe" => {
                let target = s.take("target", ProbeTarget::Linearity)?;
                let samples = match s.take_raw("samples") {
                    Some((v, line)) => {
                        parse_points(&v).map_err(|e| Error::Config(format!("line {line}: samples: {e}")))?
                    }
                    None => vec![[0.3, 0.2], [0.62, 0.71]],
                };
                let point2 = |s: &mut Section, key: &str, default: Point| -> Result<Point> {
                    match s.take_list(key)? {
                        None => Ok(default),
                        Some(v) if v.len() == 2 => Ok([v[0], v[1]]),
                        Some(_) => Err(Error::Config(format!("[{}] {key} must be x,y", s.name))),
                    }
                };
                let spec = ProbeSpec {
                    target,
                    mesh: s.take("mesh", MeshSpec::Square)?,
                    base_level: s.take("base_level", usize::from(target == ProbeTarget::Vertex))?,
                    levels: s.take_count(
                        "levels",
                        if target == ProbeTarget::Vertex { 2 } else { 4 },
                        if target == ProbeTarget::Vertex { 0 } else { 1 },
                    )?,
                    t: s.take("t", 1.0)?,
                    vertex: point2(&mut s, "vertex", [0.5, 0.5])?,
                    direction: point2(&mut s, "direction", [1.0, 0.3])?,
                    amplitude: s.take_positive("amplitude", 0.1)?,
                    area_floor: s.take("area_floor", 1e-3)?,
                    samples,
                    point: s.take("point", 0.5)?,
                    h0: s.take_positive(
                        "h0",
                        if target == ProbeTarget::Linearity {
                            0.25
                        } else if target == ProbeTarget::Vertex {
                            1e-3
                        } else {
                            1e-2
                        },
                    )?,
                    solver: SolverSpec::parse(&mut s)?,
                };
                Self::Probe(spec)
            }
            "counterexample" => {
                let x = s.take_list("x")?.unwrap_or_else(|| vec![0.0]);
                let y = s.take_list("y")?.unwrap_or_else(|| vec![1.0; x.len()]);
                if x.len() != y.len() {
                    return Err(Error::Config(format!("[{}] x and y must have the same length", s.name)));
                }
                let spec = CounterexampleSpec {
                    x,
                    y,
                    k_max: s.take("k_max", 10)?,
                    tol: s.take_positive("tol", 1e-12)?,
                    window: s.take_count("window", 3, 3)?,
                    max_index: s.take_count("max_index", 20, 5)?,
                };
                if spec.max_index < spec.window + 2 {
                    return Err(Error::Config(format!("[{}] max_index must be at least window + 2", s.name)));
                }
                Self::Counterexample(spec)
            }
            other => {
                return Err(Error::Config(format!("[{}] unknown kind {other:?}; expected one of {KINDS:?}", s.name)))
            }
        };
        s.finish()?;
        Ok(parsed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub kind: ExperimentKind,
}

impl ExperimentSpec {
    /// Experiment from a section that carries a `kind` key.
    pub fn from_section(mut section: Section) -> Result<Self> {
        let (kind, line) =
            section.take_raw("kind").ok_or_else(|| Error::Config(format!("[{}] has no kind", section.name)))?;
        let name = section.name.clone();
        let kind = ExperimentKind::parse(&kind, section).map_err(|e| match e {
            Error::Config(m) if m.starts_with('[') => Error::Config(format!("line {line}: {m}")),
            other => other,
        })?;
        Ok(Self { name, kind })
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub experiments: Vec<ExperimentSpec>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut global = Section::new("global");
        let mut sections: Vec<Section> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .map(str::trim)
                    .filter(|n| !n.is_empty() && n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-'))
                    .ok_or_else(|| Error::Config(format!("line {line_no}: bad section header {line:?}")))?;
                if sections.iter().any(|s| s.name == name) {
                    return Err(Error::Config(format!("line {line_no}: section [{name}] repeated")));
                }
                sections.push(Section::new(name));
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {line_no}: expected key = value, got {line:?}")))?;
            sections.last_mut().unwrap_or(&mut global).insert(k.trim(), v.trim(), line_no)?;
        }
        let seed = global.take("seed", 0u64)?;
        let out = global.take_opt::<String>("out")?.map(PathBuf::from);
        global.finish()?;
        let experiments = sections.into_iter().map(ExperimentSpec::from_section).collect::<Result<_>>()?;
        Ok(Self { seed, out, experiments })
    }

    /// Keeps only the named experiments, in config order.
    pub fn select(&mut self, names: &[String]) -> Result<()> {
        if let Some(missing) = names.iter().find(|n| !self.experiments.iter().any(|e| &e.name == *n)) {
            return Err(Error::Config(format!("no experiment named {missing:?}")));
        }
        if !names.is_empty() {
            self.experiments.retain(|e| names.contains(&e.name));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_sections_and_defaults() {
        let cfg = ExperimentConfig::parse(
            "seed = 3\n# comment\n[a]\nkind = fem-converge\nlevels = 4\n\n[b]\nkind = ift-domain # trailing\nsteps = 0.1,0.5\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 3);
        assert_eq!(cfg.experiments.len(), 2);
        match &cfg.experiments[0].kind {
            ExperimentKind::FemConverge(s) => {
                assert_eq!(s.levels, 4);
                assert_eq!(s.mesh, MeshSpec::Square);
                assert_eq!(s.solver.solver_tol, 1e-10);
            }
            other => panic!("{other:?}"),
        }
        match &cfg.experiments[1].kind {
            ExperimentKind::IftDomain(s) => assert_eq!(s.steps, vec![0.1, 0.5]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_and_repeated_keys_fail() {
        assert!(ExperimentConfig::parse("[a]\nkind = fem-converge\nlevel = 4\n").is_err());
        assert!(ExperimentConfig::parse("[a]\nkind = fem-converge\nlevels = 4\nlevels = 5\n").is_err());
        assert!(ExperimentConfig::parse("colour = red\n").is_err());
        assert!(ExperimentConfig::parse("[a]\nkind = nope\n").is_err());
        assert!(ExperimentConfig::parse("[a]\nlevels = 4\n").is_err());
        assert!(ExperimentConfig::parse("[a]\nkind = ift-domain\nsteps = 0.5,0.1\n").is_err());
        assert!(ExperimentConfig::parse("[a]\nkind = fem-converge\nlevels = -1\n").is_err());
        assert!(ExperimentConfig::parse("[a]\nkind = fem-converge\ntol = 0\n").is_err());
        assert!(ExperimentConfig::parse("[a]\nkind = fem-converge\n[a]\nkind = probe\n").is_err());
    }

    #[test]
    fn empty_config_is_valid() {
        let cfg = ExperimentConfig::parse("").unwrap();
        assert!(cfg.experiments.is_empty());
    }

    #[test]
    fn pairs_become_a_section() {
        let s = Section::from_pairs("ift-domain", &["problem=scalar", "ray=1", "steps=0.1,0.5,0.9,1.5"]).unwrap();
        let kind = ExperimentKind::parse("ift-domain", s).unwrap();
        assert!(matches!(kind, ExperimentKind::IftDomain(ref d) if d.steps.len() == 4));
        assert!(Section::from_pairs("x", &["novalue"]).is_err());
    }

    #[test]
    fn selection_keeps_order_and_rejects_unknown_names() {
        let mut cfg =
            ExperimentConfig::parse("[a]\nkind = probe\n[b]\nkind = frobenius\n[c]\nkind = counterexample\n").unwrap();
        cfg.select(&["c".into(), "a".into()]).unwrap();
        let names: Vec<_> = cfg.experiments.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, ["a", "c"]);
        assert!(cfg.select(&["zzz".into()]).is_err());
    }

    #[test]
    fn point_lists() {
        assert_eq!(parse_points("0.1,0.2; 0.3,0.4").unwrap(), vec![[0.1, 0.2], [0.3, 0.4]]);
        assert!(parse_points("0.1").is_err());
    }
}
