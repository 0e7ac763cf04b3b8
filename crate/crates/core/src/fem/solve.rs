use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::assemble::{assemble, p1_gradients, Load, LoadQuadrature, Manufactured};
use crate::fem::mesh::{Point, Triangulation};
use crate::fem::sparse::{conjugate_gradient, dot, CgOptions};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct FemOptions {
    pub cg: CgOptions,
    pub quadrature: LoadQuadrature,
}

/// Galerkin solution `u_n = Σ_k c_k δ_k` on one mesh.
#[derive(Debug, Clone)]
pub struct FemSolution {
    pub mesh: Arc<Triangulation>,
    /// Coefficients on interior vertices, in vertex order.
    pub coeffs: Vec<f64>,
    /// Values on every vertex; zero on the boundary.
    pub nodal: Vec<f64>,
    /// `‖K c + b‖ / ‖b‖` of the linear solve.
    pub residual: f64,
    pub iterations: usize,
    /// `½ cᵀK c + bᵀc`, minimal over the discrete space at the solution.
    pub energy: f64,
}

impl FemSolution {
    pub fn level(&self) -> usize {
        self.mesh.level()
    }

    pub fn ndof(&self) -> usize {
        self.coeffs.len()
    }

    /// `u_n(p)` by barycentric interpolation.
    pub fn eval(&self, p: Point) -> Result<f64> {
        eval_nodal(&self.mesh, &self.nodal, p)
    }
}

pub fn eval_nodal(mesh: &Triangulation, nodal: &[f64], p: Point) -> Result<f64> {
    let (t, l) = mesh.locate(p).ok_or_else(|| Error::DomainViolation(format!("{p:?} is not in the mesh")))?;
    let tri = mesh.triangles()[t];
    Ok((0..3).map(|i| l[i] * nodal[tri[i]]).sum())
}

/// Assembles and solves `K u = -b` by conjugate gradients.
pub fn solve_poisson(mesh: Arc<Triangulation>, load: &Load, opts: &FemOptions) -> Result<FemSolution> {
    let sys = assemble(&mesh, load, opts.quadrature)?;
    let rhs = sys.rhs();
    let cg = conjugate_gradient(&sys.stiffness, &rhs, &opts.cg)?;
    let kc = sys.stiffness.matvec(&cg.x);
    let energy = 0.5 * dot(&cg.x, &kc) + dot(&sys.load, &cg.x);
    Ok(FemSolution {
        nodal: sys.dofs.expand(&cg.x),
        coeffs: cg.x,
        residual: cg.relative_residual,
        iterations: cg.iterations,
        energy,
        mesh,
    })
}

/// Interpolates nodal values from the parent of `fine` onto `fine`.
/// Old vertices keep their values; midpoints take the edge average.
pub fn prolong(fine: &Triangulation, coarse_nodal: &[f64]) -> Result<Vec<f64>> {
    let parent = fine.parent().ok_or_else(|| Error::InvalidMesh("mesh has no parent".into()))?;
    if coarse_nodal.len() != parent.num_vertices() {
        return Err(Error::DimensionMismatch { expected: parent.num_vertices(), actual: coarse_nodal.len() });
    }
    let mut out = coarse_nodal.to_vec();
    for v in parent.num_vertices()..fine.num_vertices() {
        let [a, b] = fine.edge_parent(v).expect("refined vertex has a parent edge");
        out.push(0.5 * (coarse_nodal[a] + coarse_nodal[b]));
    }
    Ok(out)
}

/// Prolongs nodal values from `meshes[from]` up to the last mesh of the chain.
pub fn prolong_to(meshes: &[Arc<Triangulation>], from: usize, nodal: &[f64]) -> Result<Vec<f64>> {
    let mut values = nodal.to_vec();
    for mesh in &meshes[from + 1..] {
        values = prolong(mesh, &values)?;
    }
    Ok(values)
}

/// `(∫ |∇v|²)^{1/2}` of the P1 function with nodal values `v`.
pub fn energy_norm(mesh: &Triangulation, nodal: &[f64]) -> f64 {
    (0..mesh.num_triangles())
        .map(|t| {
            let (g, area) = p1_gradients(mesh.corners(t));
            let tri = mesh.triangles()[t];
            let gx: f64 = (0..3).map(|i| g[i][0] * nodal[tri[i]]).sum();
            let gy: f64 = (0..3).map(|i| g[i][1] * nodal[tri[i]]).sum();
            area * (gx * gx + gy * gy)
        })
        .sum::<f64>()
        .sqrt()
}

/// Degree-5 seven-point rule: `(weight, barycentric coordinates)`.
const QUAD7: [(f64, [f64; 3]); 7] = {
    const A1: f64 = 0.059_715_871_789_769_82;
    const B1: f64 = 0.470_142_064_105_115_1;
    const A2: f64 = 0.797_426_985_353_087_3;
    const B2: f64 = 0.101_286_507_323_456_3;
    const W1: f64 = 0.132_394_152_788_506_2;
    const W2: f64 = 0.125_939_180_544_827_2;
    [
        (0.225, [1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]),
        (W1, [A1, B1, B1]),
        (W1, [B1, A1, B1]),
        (W1, [B1, B1, A1]),
        (W2, [A2, B2, B2]),
        (W2, [B2, A2, B2]),
        (W2, [B2, B2, A2]),
    ]
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorNorms {
    /// `|u - u_n|_{H¹}`.
    pub h1: f64,
    /// `‖u - u_n‖_{L²}`.
    pub l2: f64,
}

/// Errors against a manufactured solution by seven-point quadrature.
pub fn error_norms(mesh: &Triangulation, nodal: &[f64], exact: &Manufactured) -> ErrorNorms {
    let (mut h1, mut l2) = (0.0, 0.0);
    for t in 0..mesh.num_triangles() {
        let c = mesh.corners(t);
        let tri = mesh.triangles()[t];
        let (g, area) = p1_gradients(c);
        let gh = [
            (0..3).map(|i| g[i][0] * nodal[tri[i]]).sum::<f64>(),
            (0..3).map(|i| g[i][1] * nodal[tri[i]]).sum::<f64>(),
        ];
        for (w, l) in QUAD7 {
            let p =
                [l[0] * c[0][0] + l[1] * c[1][0] + l[2] * c[2][0], l[0] * c[0][1] + l[1] * c[1][1] + l[2] * c[2][1]];
            let uh: f64 = (0..3).map(|i| l[i] * nodal[tri[i]]).sum();
            let du = exact.grad(p);
            l2 += w * area * (exact.u(p) - uh).powi(2);
            h1 += w * area * ((du[0] - gh[0]).powi(2) + (du[1] - gh[1]).powi(2));
        }
    }
    ErrorNorms { h1: h1.sqrt(), l2: l2.sqrt() }
}
