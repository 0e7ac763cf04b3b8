//! Plain-text mesh and solution files.
//!
//! Mesh: `vertices N`, then `x y boundary_flag` per vertex; `triangles M`,
//! then `i j k` per triangle (0-based). Solution: `level n`, then one nodal
//! value per line in vertex order.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::experiment::csvio::{fmt_f64, parse_f64};
use crate::fem::mesh::Triangulation;
use crate::fem::solve::FemSolution;

pub fn write_mesh(mesh: &Triangulation) -> String {
    let mut out = String::new();
    writeln!(out, "vertices {}", mesh.num_vertices()).unwrap();
    for (p, &b) in mesh.vertices().iter().zip(mesh.boundary_flags()) {
        writeln!(out, "{} {} {}", fmt_f64(p[0]), fmt_f64(p[1]), u8::from(b)).unwrap();
    }
    writeln!(out, "triangles {}", mesh.num_triangles()).unwrap();
    for t in mesh.triangles() {
        writeln!(out, "{} {} {}", t[0], t[1], t[2]).unwrap();
    }
    out
}

fn header(line: Option<&str>, key: &str) -> Result<usize> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
    match line.split_whitespace().collect::<Vec<_>>().as_slice() {
        [k, n] if *k == key => n.parse().map_err(|e| Error::Parse(format!("{line:?}: {e}"))),
        _ => Err(Error::Parse(format!("expected `{key} N`, got {line:?}"))),
    }
}

fn fields(line: Option<&str>, n: usize) -> Result<Vec<&str>> {
    let line = line.ok_or_else(|| Error::Parse("unexpected end of file".into()))?;
    let f: Vec<&str> = line.split_whitespace().collect();
    if f.len() != n {
        return Err(Error::Parse(format!("expected {n} fields in {line:?}")));
    }
    Ok(f)
}

fn parse_index(s: &str) -> Result<usize> {
    s.parse().map_err(|e| Error::Parse(format!("{s:?}: {e}")))
}

/// Parses and validates a level-0 mesh.
pub fn parse_mesh(text: &str) -> Result<Triangulation> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let nv = header(lines.next(), "vertices")?;
    let mut vertices = Vec::with_capacity(nv);
    let mut boundary = Vec::with_capacity(nv);
    for _ in 0..nv {
        let f = fields(lines.next(), 3)?;
        vertices.push([parse_f64(f[0])?, parse_f64(f[1])?]);
        boundary.push(match f[2] {
            "0" => false,
            "1" => true,
            other => return Err(Error::Parse(format!("boundary flag must be 0 or 1, got {other:?}"))),
        });
    }
    let nt = header(lines.next(), "triangles")?;
    let mut triangles = Vec::with_capacity(nt);
    for _ in 0..nt {
        let f = fields(lines.next(), 3)?;
        triangles.push([parse_index(f[0])?, parse_index(f[1])?, parse_index(f[2])?]);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("trailing content {extra:?}")));
    }
    Triangulation::from_parts(vertices, triangles, boundary)
}

pub fn write_solution(solution: &FemSolution) -> String {
    let mut out = format!("level {}\n", solution.level());
    for &v in &solution.nodal {
        out.push_str(&fmt_f64(v));
        out.push('\n');
    }
    out
}

/// `(level, nodal values)`.
pub fn parse_solution(text: &str) -> Result<(usize, Vec<f64>)> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let level = header(lines.next(), "level")?;
    let values = lines.map(parse_f64).collect::<Result<Vec<_>>>()?;
    Ok((level, values))
}
