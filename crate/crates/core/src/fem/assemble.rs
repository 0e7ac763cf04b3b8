//! Galerkin system for `Δu = f` with zero boundary values in the hat basis.
//!
//! The stored matrix is the SPD stiffness `K_jk = ∫ ∇δ_j·∇δ_k`, the load is
//! `b_k = ∫ f δ_k`, and the weak form of `Δu = f` reads `K u = -b`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fem::mesh::{Point, Triangulation};
use crate::fem::sparse::CsrMatrix;

type ScalarField = dyn Fn(Point) -> f64 + Send + Sync;
type VectorField = dyn Fn(Point) -> [f64; 2] + Send + Sync;

/// Right-hand side `f` of `Δu = f`.
#[derive(Clone)]
pub struct Load {
    f: Arc<ScalarField>,
}

impl fmt::Debug for Load {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Load")
    }
}

impl Load {
    pub fn new(f: impl Fn(Point) -> f64 + Send + Sync + 'static) -> Self {
        Self { f: Arc::new(f) }
    }

    pub fn zero() -> Self {
        Self::new(|_| 0.0)
    }

    pub fn constant(c: f64) -> Self {
        Self::new(move |_| c)
    }

    pub fn eval(&self, p: Point) -> Result<f64> {
        let v = (self.f)(p);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite(format!("load at {p:?}")))
        }
    }

    /// `self + t · other`.
    pub fn add_scaled(&self, t: f64, other: &Load) -> Load {
        let (a, b) = (Arc::clone(&self.f), Arc::clone(&other.f));
        Self::new(move |p| a(p) + t * b(p))
    }
}

/// Load together with the exact solution it was manufactured from.
#[derive(Clone)]
pub struct Manufactured {
    pub load: Load,
    u: Arc<ScalarField>,
    grad: Arc<VectorField>,
}

impl fmt::Debug for Manufactured {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Manufactured")
    }
}

impl Manufactured {
    pub fn new(
        load: Load,
        u: impl Fn(Point) -> f64 + Send + Sync + 'static,
        grad: impl Fn(Point) -> [f64; 2] + Send + Sync + 'static,
    ) -> Self {
        Self { load, u: Arc::new(u), grad: Arc::new(grad) }
    }

    /// `u = sin(πx) sin(πy)` on the unit square, `f = Δu = -2π² u`.
    pub fn sin_sin() -> Self {
        Self::new(
            Load::new(|p| -2.0 * PI * PI * (PI * p[0]).sin() * (PI * p[1]).sin()),
            |p| (PI * p[0]).sin() * (PI * p[1]).sin(),
            |p| [PI * (PI * p[0]).cos() * (PI * p[1]).sin(), PI * (PI * p[0]).sin() * (PI * p[1]).cos()],
        )
    }

    pub fn u(&self, p: Point) -> f64 {
        (self.u)(p)
    }

    pub fn grad(&self, p: Point) -> [f64; 2] {
        (self.grad)(p)
    }
}

/// Quadrature for `∫_T f δ_k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadQuadrature {
    /// Three edge midpoints; exact for quadratic `f δ_k`.
    #[default]
    EdgeMidpoint,
    /// Three vertices.
    Vertex,
    /// Centroid only.
    Centroid,
}

impl FromStr for LoadQuadrature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "midpoint" | "edge-midpoint" => Ok(Self::EdgeMidpoint),
            "vertex" => Ok(Self::Vertex),
            "centroid" => Ok(Self::Centroid),
            other => Err(Error::Config(format!("unknown quadrature {other:?}"))),
        }
    }
}

/// Gradients of the three barycentric coordinates and the area.
pub fn p1_gradients(c: [Point; 3]) -> ([[f64; 2]; 3], f64) {
    let det = (c[1][0] - c[0][0]) * (c[2][1] - c[0][1]) - (c[1][1] - c[0][1]) * (c[2][0] - c[0][0]);
    let grads = std::array::from_fn(|i| {
        let (p, q) = (c[(i + 1) % 3], c[(i + 2) % 3]);
        [(p[1] - q[1]) / det, (q[0] - p[0]) / det]
    });
    (grads, 0.5 * det)
}

/// Element stiffness `∫_T ∇λ_i·∇λ_j`.
pub fn element_stiffness(c: [Point; 3]) -> [[f64; 3]; 3] {
    let (g, area) = p1_gradients(c);
    std::array::from_fn(|i| std::array::from_fn(|j| area * (g[i][0] * g[j][0] + g[i][1] * g[j][1])))
}

/// Element load `∫_T f λ_i`.
pub fn element_load(c: [Point; 3], load: &Load, rule: LoadQuadrature) -> Result<[f64; 3]> {
    let area = 0.5 * crate::fem::mesh::orient(c[0], c[1], c[2]);
    let mid = |i: usize, j: usize| [0.5 * (c[i][0] + c[j][0]), 0.5 * (c[i][1] + c[j][1])];
    Ok(match rule {
        LoadQuadrature::EdgeMidpoint => {
            let m = [load.eval(mid(0, 1))?, load.eval(mid(1, 2))?, load.eval(mid(2, 0))?];
            [area / 6.0 * (m[0] + m[2]), area / 6.0 * (m[0] + m[1]), area / 6.0 * (m[1] + m[2])]
        }
        LoadQuadrature::Vertex => {
            [area / 3.0 * load.eval(c[0])?, area / 3.0 * load.eval(c[1])?, area / 3.0 * load.eval(c[2])?]
        }
        LoadQuadrature::Centroid => {
            let g = [(c[0][0] + c[1][0] + c[2][0]) / 3.0, (c[0][1] + c[1][1] + c[2][1]) / 3.0];
            [area / 3.0 * load.eval(g)?; 3]
        }
    })
}

/// Numbering of the interior vertices, which carry the unknowns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DofMap {
    dof_of_vertex: Vec<Option<usize>>,
    vertex_of_dof: Vec<usize>,
}

impl DofMap {
    pub fn new(mesh: &Triangulation) -> Self {
        let vertex_of_dof = mesh.interior_vertices();
        let mut dof_of_vertex = vec![None; mesh.num_vertices()];
        for (d, &v) in vertex_of_dof.iter().enumerate() {
            dof_of_vertex[v] = Some(d);
        }
        Self { dof_of_vertex, vertex_of_dof }
    }

    pub fn len(&self) -> usize {
        self.vertex_of_dof.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_of_dof.is_empty()
    }

    pub fn dof(&self, vertex: usize) -> Option<usize> {
        self.dof_of_vertex[vertex]
    }

    pub fn vertex(&self, dof: usize) -> usize {
        self.vertex_of_dof[dof]
    }

    /// Nodal values on every vertex, zero on the boundary.
    pub fn expand(&self, coeffs: &[f64]) -> Vec<f64> {
        self.dof_of_vertex.iter().map(|d| d.map_or(0.0, |d| coeffs[d])).collect()
    }

    pub fn restrict(&self, nodal: &[f64]) -> Vec<f64> {
        self.vertex_of_dof.iter().map(|&v| nodal[v]).collect()
    }
}

#[derive(Debug, Clone)]
pub struct GalerkinSystem {
    pub stiffness: CsrMatrix,
    pub load: Vec<f64>,
    pub dofs: DofMap,
}

impl GalerkinSystem {
    /// Right-hand side of the SPD system `K u = -b`.
    pub fn rhs(&self) -> Vec<f64> {
        self.load.iter().map(|b| -b).collect()
    }
}

type Element = ([usize; 3], [[f64; 3]; 3], [f64; 3]);

/// Element matrices are computed in parallel and scattered in triangle
/// order, so the result is identical to a sequential assembly.
pub fn assemble(mesh: &Triangulation, load: &Load, rule: LoadQuadrature) -> Result<GalerkinSystem> {
    let dofs = DofMap::new(mesh);
    let elements: Vec<Element> = (0..mesh.num_triangles())
        .into_par_iter()
        .map(|t| {
            let c = mesh.corners(t);
            Ok((mesh.triangles()[t], element_stiffness(c), element_load(c, load, rule)?))
        })
        .collect::<Result<_>>()?;
    let mut triplets = Vec::with_capacity(9 * elements.len());
    let mut b = vec![0.0; dofs.len()];
    for (tri, k, f) in &elements {
        for i in 0..3 {
            let Some(di) = dofs.dof(tri[i]) else { continue };
            b[di] += f[i];
            for j in 0..3 {
                if let Some(dj) = dofs.dof(tri[j]) {
                    triplets.push((di, dj, k[i][j]));
                }
            }
        }
    }
    Ok(GalerkinSystem { stiffness: CsrMatrix::from_triplets(dofs.len(), &triplets)?, load: b, dofs })
}
