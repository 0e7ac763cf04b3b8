//! Cross-module properties checked on random inputs.

use std::sync::Arc;

use cauchy_core::experiment::ExperimentConfig;
use cauchy_core::fem::{assemble, prolong, solve_poisson, FemOptions, Load, LoadQuadrature, Triangulation};
use cauchy_core::frobenius::{problems as frob, solve_frobenius, FrobeniusOptions};
use cauchy_core::ift::{problems::affine, solve_implicit, SolveOptions};
use cauchy_core::scheme::{residual_trace, ImplicitScheme};
use cauchy_core::{NormScale, ScaledVector};
use proptest::prelude::*;

fn scale012() -> NormScale {
    NormScale::new(vec![0, 1, 2]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn accepted_solves_have_small_residual(x in prop::collection::vec(-0.85f64..0.85, 1..6)) {
        let problem = affine(x.len(), 2.0, 100.0, scale012()).unwrap();
        let opts = SolveOptions::default();
        let sol = solve_implicit(&problem, &ScaledVector::new(x).unwrap(), &opts).unwrap();
        prop_assert!(sol.accepted());
        prop_assert!(sol.residual_norms[0] <= 10.0 * opts.tol, "{:?}", sol.residual_norms);
    }

    #[test]
    fn lower_level_traces_are_dominated(x in prop::collection::vec(-0.85f64..0.85, 2..6)) {
        let problem = affine(x.len(), 2.0, 100.0, scale012()).unwrap();
        let sol = solve_implicit(&problem, &ScaledVector::new(x).unwrap(), &SolveOptions::default()).unwrap();
        for pair in sol.iterates_trace.windows(2) {
            for (lo, hi) in pair[0].iter().zip(&pair[1]) {
                prop_assert!(lo <= hi);
            }
        }
    }

    #[test]
    fn implicit_scheme_residuals_are_certified(x in -0.8f64..0.8) {
        let scheme = ImplicitScheme { problem: affine(1, 2.0, 100.0, NormScale::default()).unwrap() };
        let trace = residual_trace(&scheme, &ScaledVector::scalar(x).unwrap(), 200, 1e-10).unwrap();
        prop_assert!(trace.certified);
    }

    #[test]
    fn frobenius_is_identity_at_the_base_point(y in -50.0f64..50.0, m in 2usize..300) {
        let problem = frob::exponential(0.0, 1.0, 100.0).unwrap();
        let j = solve_frobenius(&problem, &ScaledVector::scalar(0.0).unwrap(), &ScaledVector::scalar(y).unwrap(), m, &FrobeniusOptions::default()).unwrap();
        prop_assert!((j.j_value[0] - y).abs() <= 1e-14);
    }

    #[test]
    fn picard_differences_contract_by_x(x in 0.05f64..0.9) {
        let problem = frob::exponential(1.0, 1.0, 10.0).unwrap();
        let sol = solve_frobenius(&problem, &ScaledVector::scalar(x).unwrap(), &ScaledVector::scalar(1.0).unwrap(), 100, &FrobeniusOptions::default()).unwrap();
        prop_assert!(sol.accepted());
        let diffs: Vec<f64> = sol.trace.iter().map(|t| t.1).filter(|&d| d > 1e-13).collect();
        for w in diffs.windows(2) {
            prop_assert!(w[1] <= x * w[0] * (1.0 + 1e-9), "{w:?}");
        }
    }

    #[test]
    fn galerkin_residual_within_solver_tolerance(a in -5.0f64..5.0, b in -5.0f64..5.0, c in 0.1f64..3.0) {
        let mesh = Arc::new(Triangulation::l_shape().refine().unwrap().refine().unwrap());
        let load = Load::new(move |p| a * p[0] + b * p[1] * p[1] + c);
        let opts = FemOptions::default();
        let sol = solve_poisson(Arc::clone(&mesh), &load, &opts).unwrap();
        let sys = assemble(&mesh, &load, LoadQuadrature::EdgeMidpoint).unwrap();
        let rhs = sys.rhs();
        let ku = sys.stiffness.matvec(&sol.coeffs);
        let res: f64 = ku.iter().zip(&rhs).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt();
        let norm: f64 = rhs.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!(res <= opts.cg.rtol * norm * (1.0 + 1e-6), "{res} vs {norm}");
    }

    #[test]
    fn prolongation_keeps_old_nodal_values(values in prop::collection::vec(-10.0f64..10.0, 8)) {
        let coarse = Triangulation::l_shape();
        let fine = coarse.refine().unwrap();
        let fine_values = prolong(&fine, &values).unwrap();
        prop_assert_eq!(&fine_values[..8], &values[..]);
        for (v, &value) in fine_values.iter().enumerate().skip(8) {
            let [p, q] = fine.edge_parent(v).unwrap();
            prop_assert_eq!(value, 0.5 * (values[p] + values[q]));
        }
    }

    #[test]
    fn convex_polygons_refine_with_exact_counts(n in 3usize..10, r in 0.5f64..3.0, phase in 0.0f64..1.0) {
        let polygon: Vec<[f64; 2]> = (0..n)
            .map(|k| {
                let t = std::f64::consts::TAU * (k as f64 + phase) / n as f64;
                [r * t.cos(), r * t.sin()]
            })
            .collect();
        let mut mesh = Triangulation::from_polygon(&polygon).unwrap();
        let area = mesh.total_area();
        for _ in 0..3 {
            let fine = mesh.refine().unwrap();
            prop_assert_eq!(fine.num_vertices(), mesh.num_vertices() + mesh.num_edges());
            prop_assert_eq!(fine.num_triangles(), 4 * mesh.num_triangles());
            prop_assert!(fine.validate().is_ok());
            prop_assert!((fine.total_area() - area).abs() <= 1e-12 * area);
            mesh = fine;
        }
    }

    #[test]
    fn unknown_keys_are_rejected(key in "[a-z]{3,10}") {
        let known = ["mesh", "problem", "levels", "tol", "window", "solver_tol", "jacobi", "quadrature"];
        prop_assume!(!known.contains(&key.as_str()));
        let text = format!("[e]\nkind = fem-converge\n{key} = 1\n");
        prop_assert!(ExperimentConfig::parse(&text).is_err());
    }
}

#[test]
fn energy_does_not_increase_under_refinement() {
    let load = cauchy_core::fem::Manufactured::sin_sin().load;
    let meshes = Triangulation::unit_square().hierarchy(5).unwrap();
    let energies: Vec<f64> = meshes[1..]
        .iter()
        .map(|m| solve_poisson(Arc::clone(m), &load, &FemOptions::default()).unwrap().energy)
        .collect();
    for w in energies.windows(2) {
        assert!(w[1] <= w[0] + 1e-12 * w[0].abs(), "{energies:?}");
    }
}
