//! Numerical schemes for `F(u, q) = 0`: a map `q ↦ (x_n)` into Cauchy
//! sequences whose residuals `‖F(x_n, q)‖` tend to zero.

use std::sync::Arc;

use crate::cauchy::CauchySequence;
use crate::error::{Error, Result};
use crate::experiment::csvio::{fmt_f64, CsvTable};
use crate::fem::assemble::{assemble, Load};
use crate::fem::mesh::Triangulation;
use crate::fem::solve::{prolong_to, solve_poisson, FemOptions};
use crate::fem::sparse::{conjugate_gradient, dot};
use crate::ift::{phi_step, ImplicitProblem};
use crate::ilb::ScaledVector;

/// Number of trailing residuals that must be below tolerance.
pub const CERTIFY_WINDOW: usize = 3;

pub trait NumericalScheme {
    type Param;

    /// `Num(q)`.
    fn approximation(&self, q: &Self::Param) -> Result<CauchySequence>;

    /// `‖F(x_n, q)‖` for the term `x_n = Num(q)_n`.
    fn residual_norm(&self, q: &Self::Param, n: usize, term: &ScaledVector) -> Result<f64>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResidualTrace {
    pub entries: Vec<(usize, f64)>,
    pub tol: f64,
    /// The last [`CERTIFY_WINDOW`] residuals are all `<= tol`.
    pub certified: bool,
}

impl ResidualTrace {
    /// Columns `n, residual`.
    pub fn to_table(&self) -> Result<CsvTable> {
        let mut table = CsvTable::new(&["n", "residual"]);
        for &(n, r) in &self.entries {
            table.push(vec![n.to_string(), fmt_f64(r)])?;
        }
        Ok(table)
    }
}

/// `‖F(x_n, q)‖` for `n = 0..max_n`.
pub fn residual_trace<S: NumericalScheme>(scheme: &S, q: &S::Param, max_n: usize, tol: f64) -> Result<ResidualTrace> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let seq = scheme.approximation(q)?;
    let entries = (0..max_n).map(|n| Ok((n, scheme.residual_norm(q, n, &seq.ev(n)?)?))).collect::<Result<Vec<_>>>()?;
    let certified =
        entries.len() >= CERTIFY_WINDOW && entries[entries.len() - CERTIFY_WINDOW..].iter().all(|&(_, r)| r <= tol);
    Ok(ResidualTrace { entries, tol, certified })
}

/// Fixed-point iterates `φ_x^n(0)` with `F = f(x, ·)`.
#[derive(Debug, Clone)]
pub struct ImplicitScheme {
    pub problem: ImplicitProblem,
}

impl NumericalScheme for ImplicitScheme {
    type Param = ScaledVector;

    fn approximation(&self, x: &ScaledVector) -> Result<CauchySequence> {
        let (problem, x) = (self.problem.clone(), x.clone());
        Ok(CauchySequence::recursive(ScaledVector::zeros(self.problem.y_dim()), move |_, y| phi_step(&problem, &x, y)))
    }

    fn residual_norm(&self, x: &ScaledVector, _n: usize, term: &ScaledVector) -> Result<f64> {
        Ok(self.problem.eval(x, term)?.norm(0))
    }
}

/// P1 solutions on levels `1, 2, ...` as nodal vectors on a reference level.
/// `F` is the Galerkin residual on the next finer mesh in the dual energy norm,
/// which equals the energy distance to the next Galerkin solution.
#[derive(Debug, Clone)]
pub struct FemScheme {
    meshes: Arc<Vec<Arc<Triangulation>>>,
    pub fem: FemOptions,
}

impl FemScheme {
    /// Supports terms on levels `1..=max_level`.
    pub fn new(mesh0: &Triangulation, max_level: usize, fem: FemOptions) -> Result<Self> {
        if max_level < 2 {
            return Err(Error::InvalidArgument("max_level must be at least 2".into()));
        }
        Ok(Self { meshes: Arc::new(mesh0.hierarchy(max_level)?), fem })
    }

    pub fn max_level(&self) -> usize {
        self.meshes.len() - 1
    }
}

impl NumericalScheme for FemScheme {
    type Param = Load;

    fn approximation(&self, load: &Load) -> Result<CauchySequence> {
        let (meshes, load, fem) = (Arc::clone(&self.meshes), load.clone(), self.fem);
        Ok(CauchySequence::from_fn(move |n| {
            let level = n + 1;
            if level >= meshes.len() {
                return Err(Error::InvalidArgument(format!("level {level} beyond the prepared hierarchy")));
            }
            let sol = solve_poisson(Arc::clone(&meshes[level]), &load, &fem)?;
            ScaledVector::new(prolong_to(&meshes, level, &sol.nodal)?)
        }))
    }

    fn residual_norm(&self, load: &Load, n: usize, term: &ScaledVector) -> Result<f64> {
        let next = n + 2;
        let mesh = self
            .meshes
            .get(next)
            .ok_or_else(|| Error::InvalidArgument(format!("residual of term {n} needs level {next}")))?;
        // vertex numbering is preserved by refinement
        let nodal = &term.as_slice()[..mesh.num_vertices()];
        let sys = assemble(mesh, load, self.fem.quadrature)?;
        let u = sys.dofs.restrict(nodal);
        let mut r = sys.stiffness.matvec(&u);
        r.iter_mut().zip(&sys.load).for_each(|(r, b)| *r += b);
        let z = conjugate_gradient(&sys.stiffness, &r, &self.fem.cg)?;
        Ok(dot(&r, &z.x).max(0.0).sqrt())
    }
}

/// `F ≡ 0` with the constant sequence `0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct ZeroScheme;

impl NumericalScheme for ZeroScheme {
    type Param = ();

    fn approximation(&self, _: &()) -> Result<CauchySequence> {
        Ok(CauchySequence::constant(ScaledVector::zeros(1)))
    }

    fn residual_norm(&self, _: &(), _: usize, _: &ScaledVector) -> Result<f64> {
        Ok(0.0)
    }
}
