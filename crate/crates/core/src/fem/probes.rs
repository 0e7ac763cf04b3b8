//! Smooth dependence of the scheme on the load and on the mesh geometry.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fem::assemble::{p1_gradients, Load};
use crate::fem::mesh::{Point, Triangulation};
use crate::fem::solve::{energy_norm, eval_nodal, solve_poisson, FemOptions};
use crate::ilb::{probe_curve, Plot, ProbeConfig, SmoothnessReport};

/// `∫ ∇u·∇v` for nodal vectors on one mesh.
pub fn energy_inner(mesh: &Triangulation, u: &[f64], v: &[f64]) -> f64 {
    (0..mesh.num_triangles())
        .map(|t| {
            let (g, area) = p1_gradients(mesh.corners(t));
            let tri = mesh.triangles()[t];
            let grad = |w: &[f64]| -> [f64; 2] {
                [(0..3).map(|i| g[i][0] * w[tri[i]]).sum(), (0..3).map(|i| g[i][1] * w[tri[i]]).sum()]
            };
            let (a, b) = (grad(u), grad(v));
            area * (a[0] * b[0] + a[1] * b[1])
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinearityLevel {
    pub level: usize,
    /// `‖Num(f₀ + t δf) - Num(f₀) - t Num(δf)‖` in the energy norm.
    pub defect: f64,
    /// `defect` over the largest of the three solution norms.
    pub relative_defect: f64,
}

#[derive(Debug, Clone)]
pub struct LinearityReport {
    pub t: f64,
    pub levels: Vec<LinearityLevel>,
    /// `Num(f₀ + 0·δf)` reproduces `Num(f₀)` bit for bit on every level.
    pub exact_at_zero: bool,
    /// `‖Num(δf)‖` on the finest level.
    pub delta_norm: f64,
    /// Probe of `t ↦ ⟨Num(f₀ + t δf), Num(δf)⟩ / ‖Num(δf)‖` at `t = 0`.
    pub derivative: SmoothnessReport,
    /// `|derivative - ‖Num(δf)‖| / ‖Num(δf)‖`.
    pub derivative_rel_error: f64,
}

impl LinearityReport {
    pub fn max_relative_defect(&self) -> f64 {
        self.levels.iter().map(|l| l.relative_defect).fold(0.0, f64::max)
    }
}

/// Checks superposition of the discrete solution operator at levels
/// `1..=levels` and probes its derivative along `t ↦ f₀ + t δf`.
pub fn scheme_linearity_probe(
    mesh0: &Triangulation,
    f0: &Load,
    df: &Load,
    levels: usize,
    t: f64,
    opts: &FemOptions,
    config: &ProbeConfig,
) -> Result<LinearityReport> {
    if levels == 0 {
        return Err(Error::InvalidArgument("at least one level is required".into()));
    }
    let meshes = mesh0.hierarchy(levels)?;
    let mut rows = Vec::new();
    let mut exact_at_zero = true;
    let mut delta = Vec::new();
    for mesh in &meshes[1..] {
        let u0 = solve_poisson(Arc::clone(mesh), f0, opts)?;
        let ud = solve_poisson(Arc::clone(mesh), df, opts)?;
        let ut = solve_poisson(Arc::clone(mesh), &f0.add_scaled(t, df), opts)?;
        let zero = solve_poisson(Arc::clone(mesh), &f0.add_scaled(0.0, df), opts)?;
        exact_at_zero &= zero.nodal == u0.nodal;
        let diff: Vec<f64> = (0..mesh.num_vertices()).map(|v| ut.nodal[v] - u0.nodal[v] - t * ud.nodal[v]).collect();
        let defect = energy_norm(mesh, &diff);
        let scale =
            [energy_norm(mesh, &ut.nodal), energy_norm(mesh, &u0.nodal), t.abs() * energy_norm(mesh, &ud.nodal)]
                .into_iter()
                .fold(f64::MIN_POSITIVE, f64::max);
        rows.push(LinearityLevel { level: mesh.level(), defect, relative_defect: defect / scale });
        delta = ud.nodal;
    }

    let finest = Arc::clone(&meshes[levels]);
    let delta_norm = energy_norm(&finest, &delta);
    if delta_norm == 0.0 {
        return Err(Error::InvalidArgument("perturbation load has a zero discrete solution".into()));
    }
    let (f0, df, fem) = (f0.clone(), df.clone(), *opts);
    let mesh = Arc::clone(&finest);
    let plot =
        Plot::curve(-1.0, 1.0, move |s| Ok(solve_poisson(Arc::clone(&mesh), &f0.add_scaled(s, &df), &fem)?.nodal))?;
    let observable = move |u: &Vec<f64>| energy_inner(&finest, u, &delta) / delta_norm;
    let config = ProbeConfig { noise_floor: config.noise_floor.max(opts.cg.rtol * delta_norm), ..*config };
    let derivative = probe_curve(&plot, &observable, 0.0, &config)?;
    let derivative_rel_error = (derivative.derivative_estimate - delta_norm).abs() / delta_norm;
    Ok(LinearityReport { t, levels: rows, exact_at_zero, delta_norm, derivative, derivative_rel_error })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VertexPerturbation {
    /// Interior vertex of the base mesh that moves.
    pub vertex: usize,
    pub direction: Point,
    /// The vertex moves by `t · direction` for `t ∈ (-amplitude, amplitude)`.
    pub amplitude: f64,
    /// Every triangle must keep at least this area over the whole box.
    pub area_floor: f64,
    /// The observable is the sum of `u_n` over these points.
    pub samples: Vec<Point>,
}

/// Base mesh with the vertex moved by `t · direction`, checked against the
/// area floor.
pub fn perturbed_mesh(mesh0: &Triangulation, p: &VertexPerturbation, t: f64) -> Result<Triangulation> {
    let base = mesh0.vertices()[p.vertex];
    let moved = mesh0.with_vertex_moved(p.vertex, [base[0] + t * p.direction[0], base[1] + t * p.direction[1]])?;
    if let Some(tri) = (0..moved.num_triangles()).find(|&k| moved.area(k) < p.area_floor) {
        return Err(Error::InvalidMesh(format!(
            "triangle {tri} has area {:e} below the floor {:e} at t = {t}",
            moved.area(tri),
            p.area_floor
        )));
    }
    moved.validate()?;
    Ok(moved)
}

/// Probes `t ↦ Σ_p u_n(p)` at `t = 0` on levels `0..=levels` of the mesh
/// obtained by moving one interior vertex.
///
/// Triangle areas are affine in `t`, so checking the area floor at both
/// ends of the amplitude box covers the whole box.
pub fn vertex_perturbation_probe(
    mesh0: &Triangulation,
    load: &Load,
    perturbation: &VertexPerturbation,
    levels: usize,
    opts: &FemOptions,
    config: &ProbeConfig,
) -> Result<Vec<(usize, SmoothnessReport)>> {
    let p = perturbation;
    if p.vertex >= mesh0.num_vertices() || mesh0.is_boundary(p.vertex) {
        return Err(Error::InvalidArgument(format!("vertex {} is not an interior vertex", p.vertex)));
    }
    let len = (p.direction[0].powi(2) + p.direction[1].powi(2)).sqrt();
    if !(len > 0.0 && p.amplitude > 0.0 && p.area_floor >= 0.0) {
        return Err(Error::InvalidArgument("direction and amplitude must be non-zero".into()));
    }
    if p.samples.is_empty() {
        return Err(Error::InvalidArgument("at least one sample point is required".into()));
    }
    let p = Arc::new(VertexPerturbation { direction: [p.direction[0] / len, p.direction[1] / len], ..p.clone() });
    perturbed_mesh(mesh0, &p, -p.amplitude)?;
    perturbed_mesh(mesh0, &p, p.amplitude)?;

    (0..=levels)
        .map(|level| {
            let (mesh0, load, p, fem) = (mesh0.clone(), load.clone(), Arc::clone(&p), *opts);
            let plot = Plot::curve(-p.amplitude, p.amplitude, move |t| {
                let meshes = perturbed_mesh(&mesh0, &p, t)?.hierarchy(level)?;
                let sol = solve_poisson(Arc::clone(&meshes[level]), &load, &fem)?;
                p.samples.iter().map(|&q| eval_nodal(&meshes[level], &sol.nodal, q)).sum::<Result<f64>>()
            })?;
            let config = ProbeConfig { noise_floor: config.noise_floor.max(opts.cg.rtol), ..*config };
            Ok((level, probe_curve(&plot, &|v: &f64| *v, 0.0, &config)?))
        })
        .collect()
}
