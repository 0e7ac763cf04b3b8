//! Conforming planar triangulations and uniform midpoint refinement.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};

pub type Point = [f64; 2];

/// Twice the signed area of `(a, b, c)`; positive when counterclockwise.
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

const AREA_RTOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct Triangulation {
    vertices: Vec<Point>,
    triangles: Vec<[usize; 3]>,
    boundary: Vec<bool>,
    level: usize,
    parent: Option<Arc<Triangulation>>,
    /// For each vertex added by refinement, the endpoints of its parent edge.
    edge_parents: Vec<[usize; 2]>,
    domain_area: f64,
}

impl Triangulation {
    /// Level-0 mesh from explicit data; the covered area is taken from the
    /// boundary loop and every invariant is checked.
    pub fn from_parts(vertices: Vec<Point>, triangles: Vec<[usize; 3]>, boundary: Vec<bool>) -> Result<Self> {
        if vertices.len() != boundary.len() {
            return Err(Error::InvalidMesh("one boundary flag per vertex required".into()));
        }
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("no triangles".into()));
        }
        let mut mesh =
            Self { vertices, triangles, boundary, level: 0, parent: None, edge_parents: Vec::new(), domain_area: 0.0 };
        mesh.check_indices()?;
        mesh.domain_area = mesh.boundary_loop_area()?;
        mesh.validate()?;
        Ok(mesh)
    }

    /// `[0,1]²` split along the diagonal from `(0,0)` to `(1,1)`.
    pub fn unit_square() -> Self {
        Self::from_parts(
            vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
            vec![[0, 1, 2], [0, 2, 3]],
            vec![true; 4],
        )
        .expect("unit square fixture is valid")
    }

    /// `[0,1]² \ (½,1]²`: three half-size squares, each split in two.
    pub fn l_shape() -> Self {
        Self::from_parts(
            vec![[0.0, 0.0], [0.5, 0.0], [1.0, 0.0], [1.0, 0.5], [0.5, 0.5], [0.5, 1.0], [0.0, 1.0], [0.0, 0.5]],
            vec![[0, 1, 4], [0, 4, 7], [1, 2, 3], [1, 3, 4], [7, 4, 5], [7, 5, 6]],
            vec![true; 8],
        )
        .expect("L-shape fixture is valid")
    }

    /// Ear-clipping triangulation of a simple counterclockwise polygon.
    pub fn from_polygon(polygon: &[Point]) -> Result<Self> {
        validate_polygon(polygon)?;
        let triangles = ear_clip(polygon)?;
        Self::from_parts(polygon.to_vec(), triangles, vec![true; polygon.len()])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn parent(&self) -> Option<&Arc<Triangulation>> {
        self.parent.as_ref()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }

    /// Area of the polygon the mesh must cover.
    pub fn domain_area(&self) -> f64 {
        self.domain_area
    }

    /// Parent edge of vertex `v` if it was created by the last refinement.
    pub fn edge_parent(&self, v: usize) -> Option<[usize; 2]> {
        let first_new = self.parent.as_ref()?.num_vertices();
        v.checked_sub(first_new).map(|i| self.edge_parents[i])
    }

    pub fn corners(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|v| self.vertices[v])
    }

    pub fn area(&self, t: usize) -> f64 {
        let [a, b, c] = self.corners(t);
        0.5 * orient(a, b, c)
    }

    pub fn total_area(&self) -> f64 {
        (0..self.num_triangles()).map(|t| self.area(t)).sum()
    }

    /// Longest edge length.
    pub fn h_max(&self) -> f64 {
        self.edges().iter().map(|&(a, b)| dist(self.vertices[a], self.vertices[b])).fold(0.0, f64::max)
    }

    /// Undirected edges `(a, b)`, `a < b`, sorted, with the number of
    /// triangles containing each.
    pub fn edge_counts(&self) -> Vec<((usize, usize), usize)> {
        let mut counts: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &self.triangles {
            for i in 0..3 {
                *counts.entry(edge_key(tri[i], tri[(i + 1) % 3])).or_default() += 1;
            }
        }
        let mut out: Vec<_> = counts.into_iter().collect();
        out.sort_unstable();
        out
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.edge_counts().into_iter().map(|(e, _)| e).collect()
    }

    pub fn num_edges(&self) -> usize {
        self.edge_counts().len()
    }

    pub fn boundary_edges(&self) -> Vec<(usize, usize)> {
        self.edge_counts().into_iter().filter(|&(_, c)| c == 1).map(|(e, _)| e).collect()
    }

    pub fn interior_vertices(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| !self.boundary[v]).collect()
    }

    /// Splits every triangle into four through its edge midpoints.
    ///
    /// Old vertices keep their indices; midpoints follow in the order their
    /// edges are first met. A midpoint is on the boundary iff its edge is.
    pub fn refine(&self) -> Result<Self> {
        let on_boundary: HashMap<(usize, usize), bool> =
            self.edge_counts().into_iter().map(|(e, c)| (e, c == 1)).collect();
        let mut vertices = self.vertices.clone();
        let mut boundary = self.boundary.clone();
        let mut edge_parents = Vec::new();
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut triangles = Vec::with_capacity(4 * self.triangles.len());
        for &[a, b, c] in &self.triangles {
            let mut mid = |p: usize, q: usize| -> usize {
                *midpoint.entry(edge_key(p, q)).or_insert_with(|| {
                    let (u, v) = (self.vertices[p], self.vertices[q]);
                    vertices.push([0.5 * (u[0] + v[0]), 0.5 * (u[1] + v[1])]);
                    boundary.push(on_boundary[&edge_key(p, q)]);
                    edge_parents.push([p, q]);
                    vertices.len() - 1
                })
            };
            let (ab, bc, ca) = (mid(a, b), mid(b, c), mid(c, a));
            triangles.extend_from_slice(&[[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
        }
        let child = Self {
            vertices,
            triangles,
            boundary,
            level: self.level + 1,
            parent: Some(Arc::new(self.clone())),
            edge_parents,
            domain_area: self.domain_area,
        };
        child.validate()?;
        Ok(child)
    }

    /// Chain `[self, refine(self), ...]` of `levels + 1` meshes.
    pub fn hierarchy(&self, levels: usize) -> Result<Vec<Arc<Self>>> {
        let mut out = vec![Arc::new(self.clone())];
        for _ in 0..levels {
            let next = out[out.len() - 1].refine()?;
            out.push(Arc::new(next));
        }
        Ok(out)
    }

    /// Copy of the mesh with vertex `v` moved to `p`, as a new level-0 mesh.
    pub fn with_vertex_moved(&self, v: usize, p: Point) -> Result<Self> {
        if v >= self.num_vertices() {
            return Err(Error::InvalidArgument(format!("vertex {v} out of range")));
        }
        let mut vertices = self.vertices.clone();
        vertices[v] = p;
        let mut moved = Self {
            vertices,
            triangles: self.triangles.clone(),
            boundary: self.boundary.clone(),
            level: 0,
            parent: None,
            edge_parents: Vec::new(),
            domain_area: 0.0,
        };
        moved.domain_area = moved.boundary_loop_area()?;
        Ok(moved)
    }

    fn check_indices(&self) -> Result<()> {
        let n = self.num_vertices();
        for (t, tri) in self.triangles.iter().enumerate() {
            if tri.iter().any(|&v| v >= n) {
                return Err(Error::InvalidMesh(format!("triangle {t} references a missing vertex")));
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(Error::InvalidMesh(format!("triangle {t} repeats a vertex")));
            }
        }
        if self.vertices.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
            return Err(Error::NonFinite("vertex coordinates".into()));
        }
        Ok(())
    }

    /// Shoelace area of the directed boundary edges.
    fn boundary_loop_area(&self) -> Result<f64> {
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for tri in &self.triangles {
            for i in 0..3 {
                *directed.entry((tri[i], tri[(i + 1) % 3])).or_default() += 1;
            }
        }
        let area: f64 = directed
            .keys()
            .filter(|&&(a, b)| !directed.contains_key(&(b, a)))
            .map(|&(a, b)| {
                let (p, q) = (self.vertices[a], self.vertices[b]);
                0.5 * (p[0] * q[1] - q[0] * p[1])
            })
            .sum();
        if !(area > 0.0) {
            return Err(Error::InvalidMesh(format!("enclosed area {area} is not positive")));
        }
        Ok(area)
    }

    /// Checks orientation, conformity, boundary flags, covering and
    /// pairwise non-overlap.
    pub fn validate(&self) -> Result<()> {
        self.check_indices()?;
        let scale = self.domain_area;
        for t in 0..self.num_triangles() {
            let a = self.area(t);
            if !(a > AREA_RTOL * scale) {
                return Err(Error::InvalidMesh(format!("triangle {t} has non-positive area {a}")));
            }
        }
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (t, tri) in self.triangles.iter().enumerate() {
            for i in 0..3 {
                if let Some(other) = directed.insert((tri[i], tri[(i + 1) % 3]), t) {
                    return Err(Error::InvalidMesh(format!(
                        "triangles {other} and {t} share edge {:?} with equal orientation",
                        (tri[i], tri[(i + 1) % 3])
                    )));
                }
            }
        }
        let mut on_boundary_edge = vec![false; self.num_vertices()];
        for (a, b) in self.boundary_edges() {
            on_boundary_edge[a] = true;
            on_boundary_edge[b] = true;
        }
        if let Some(v) = (0..self.num_vertices()).find(|&v| on_boundary_edge[v] != self.boundary[v]) {
            return Err(Error::InvalidMesh(format!("boundary flag of vertex {v} disagrees with the boundary edges")));
        }
        let total = self.total_area();
        if (total - self.domain_area).abs() > AREA_RTOL * self.domain_area.max(1.0) {
            return Err(Error::InvalidMesh(format!("triangles cover {total}, polygon area is {}", self.domain_area)));
        }
        if let Some((s, t)) = self.find_overlap() {
            return Err(Error::InvalidMesh(format!("triangles {s} and {t} overlap")));
        }
        Ok(())
    }

    /// First pair of triangles with intersecting interiors, found by
    /// bucketing bounding boxes on a uniform grid.
    pub fn find_overlap(&self) -> Option<(usize, usize)> {
        let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
        for p in &self.vertices {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let diam = ((hi[0] - lo[0]).powi(2) + (hi[1] - lo[1]).powi(2)).sqrt();
        let eps = 1e-12 * diam;
        let cells = ((self.num_triangles() as f64).sqrt().ceil() as usize).max(1);
        let cell = |x: f64, k: usize| -> usize {
            let w = (hi[k] - lo[k]).max(f64::MIN_POSITIVE);
            (((x - lo[k]) / w * cells as f64) as usize).min(cells - 1)
        };
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); cells * cells];
        for t in 0..self.num_triangles() {
            let c = self.corners(t);
            let (x0, x1) = (
                c.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min),
                c.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max),
            );
            let (y0, y1) = (
                c.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min),
                c.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max),
            );
            for i in cell(x0 - eps, 0)..=cell(x1 + eps, 0) {
                for j in cell(y0 - eps, 1)..=cell(y1 + eps, 1) {
                    buckets[i * cells + j].push(t);
                }
            }
        }
        for bucket in &buckets {
            for (i, &s) in bucket.iter().enumerate() {
                for &t in &bucket[i + 1..] {
                    if interiors_overlap(self.corners(s), self.corners(t), eps) {
                        return Some((s.min(t), s.max(t)));
                    }
                }
            }
        }
        None
    }

    /// Triangle containing `p` and its barycentric coordinates.
    pub fn locate(&self, p: Point) -> Option<(usize, [f64; 3])> {
        let tol = -1e-12;
        (0..self.num_triangles()).find_map(|t| {
            let lambda = barycentric(self.corners(t), p);
            lambda.iter().all(|&l| l >= tol).then_some((t, lambda))
        })
    }

    /// Vertex at `p` up to `tol`.
    pub fn find_vertex(&self, p: Point, tol: f64) -> Option<usize> {
        self.vertices.iter().position(|&q| dist(p, q) <= tol)
    }
}

pub fn dist(a: Point, b: Point) -> f64 {
    ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)).sqrt()
}

pub fn barycentric(c: [Point; 3], p: Point) -> [f64; 3] {
    let det = orient(c[0], c[1], c[2]);
    let l1 = orient(c[0], p, c[2]) / det;
    let l2 = orient(c[0], c[1], p) / det;
    [1.0 - l1 - l2, l1, l2]
}

/// Separating-axis test on the six edge normals.
fn interiors_overlap(s: [Point; 3], t: [Point; 3], eps: f64) -> bool {
    for tri in [&s, &t] {
        for i in 0..3 {
            let (a, b) = (tri[i], tri[(i + 1) % 3]);
            let n = [b[1] - a[1], a[0] - b[0]];
            let len = (n[0] * n[0] + n[1] * n[1]).sqrt();
            let proj = |p: &Point| (n[0] * p[0] + n[1] * p[1]) / len;
            let (s0, s1) = minmax(s.iter().map(proj));
            let (t0, t1) = minmax(t.iter().map(proj));
            if s1 <= t0 + eps || t1 <= s0 + eps {
                return false;
            }
        }
    }
    true
}

fn minmax(it: impl Iterator<Item = f64>) -> (f64, f64) {
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

fn segments_cross(p1: Point, p2: Point, q1: Point, q2: Point) -> bool {
    let d1 = orient(q1, q2, p1);
    let d2 = orient(q1, q2, p2);
    let d3 = orient(p1, p2, q1);
    let d4 = orient(p1, p2, q2);
    let on = |a: Point, b: Point, c: Point| {
        c[0] >= a[0].min(b[0]) && c[0] <= a[0].max(b[0]) && c[1] >= a[1].min(b[1]) && c[1] <= a[1].max(b[1])
    };
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0)) {
        return true;
    }
    (d1 == 0.0 && on(q1, q2, p1))
        || (d2 == 0.0 && on(q1, q2, p2))
        || (d3 == 0.0 && on(p1, p2, q1))
        || (d4 == 0.0 && on(p1, p2, q2))
}

pub fn polygon_area(polygon: &[Point]) -> f64 {
    let n = polygon.len();
    0.5 * (0..n)
        .map(|i| {
            let (p, q) = (polygon[i], polygon[(i + 1) % n]);
            p[0] * q[1] - q[0] * p[1]
        })
        .sum::<f64>()
}

fn validate_polygon(polygon: &[Point]) -> Result<()> {
    let n = polygon.len();
    if n < 3 {
        return Err(Error::InvalidMesh("polygon needs at least 3 vertices".into()));
    }
    if polygon.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(Error::NonFinite("polygon vertex".into()));
    }
    for i in 0..n {
        for j in i + 1..n {
            if polygon[i] == polygon[j] {
                return Err(Error::InvalidMesh(format!("polygon vertices {i} and {j} coincide")));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let adjacent = j == i + 1 || (i == 0 && j == n - 1);
            if !adjacent && segments_cross(polygon[i], polygon[(i + 1) % n], polygon[j], polygon[(j + 1) % n]) {
                return Err(Error::InvalidMesh(format!("polygon edges {i} and {j} intersect")));
            }
        }
    }
    let area = polygon_area(polygon);
    if area == 0.0
        || area.abs() <= AREA_RTOL * polygon.iter().map(|p| p[0].abs() + p[1].abs()).fold(0.0, f64::max).powi(2)
    {
        return Err(Error::InvalidMesh("polygon has zero area".into()));
    }
    if area < 0.0 {
        return Err(Error::InvalidMesh("polygon is clockwise".into()));
    }
    Ok(())
}

fn ear_clip(polygon: &[Point]) -> Result<Vec<[usize; 3]>> {
    let mut idx: Vec<usize> = (0..polygon.len()).collect();
    let mut out = Vec::with_capacity(polygon.len() - 2);
    while idx.len() > 3 {
        let m = idx.len();
        let ear = (0..m).find(|&i| {
            let (a, b, c) = (idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]);
            let (pa, pb, pc) = (polygon[a], polygon[b], polygon[c]);
            orient(pa, pb, pc) > 0.0
                && idx.iter().filter(|&&v| v != a && v != b && v != c).all(|&v| {
                    let l = barycentric([pa, pb, pc], polygon[v]);
                    l.iter().any(|&x| x < 0.0)
                })
        });
        let Some(i) = ear else {
            return Err(Error::InvalidMesh("no ear found; polygon is not simple".into()));
        };
        out.push([idx[(i + m - 1) % m], idx[i], idx[(i + 1) % m]]);
        idx.remove(i);
    }
    out.push([idx[0], idx[1], idx[2]]);
    Ok(out)
}
