mod common;

use graph_spectra::analysis::{convergence_study, hadamard_derivatives, potential_mass};
use graph_spectra::io::{parse_json, parse_text, write_json, write_text};
use graph_spectra::random::{random_connected_graph, RandomGraphParams};
use graph_spectra::{
    apply, eigendecompose, quadratic_form, truncate_potential, ClosedForm, Graph, GraphFamily,
    HeatKernel, OperatorMatrix, Spectrum, TruncationFlavor,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::without_potential;

fn graph_from(seed: u64, max: usize) -> (Graph, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let params = RandomGraphParams::default().with_vertices(1, max);
    (random_connected_graph(&mut rng, &params), rng)
}

fn vector(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

fn solve(g: &Graph) -> Spectrum {
    eigendecompose(&OperatorMatrix::assemble(g).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn form_represents_operator(seed in any::<u64>()) {
        let (g, mut rng) = graph_from(seed, 30);
        let f = vector(&mut rng, g.len());
        let h = vector(&mut rng, g.len());
        let q = quadratic_form(&g, &f, &h).unwrap();
        let lh = apply(&g, &h).unwrap();
        let inner = g.weighted_inner_product(&f, &lh).unwrap();
        let scale = (1.0 + quadratic_form(&g, &f, &f).unwrap().abs())
            * (1.0 + quadratic_form(&g, &h, &h).unwrap().abs());
        prop_assert!((q - inner).abs() <= 1e-10 * scale);
    }

    #[test]
    fn matrix_agrees_with_flux_formula(seed in any::<u64>()) {
        let (g, mut rng) = graph_from(seed, 40);
        let f = vector(&mut rng, g.len());
        let op = OperatorMatrix::assemble(&g).unwrap();
        let direct = op.apply(&f).unwrap();
        let via = op.apply_via_matrix(&f).unwrap();
        let scale = direct.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for (a, b) in direct.iter().zip(&via) {
            prop_assert!((a - b).abs() <= 1e-12 * scale);
        }
    }

    #[test]
    fn operator_is_nonnegative(seed in any::<u64>()) {
        let (g, mut rng) = graph_from(seed, 30);
        let f = vector(&mut rng, g.len());
        prop_assert!(quadratic_form(&g, &f, &f).unwrap() >= 0.0);
        let s = solve(&g);
        let norm = OperatorMatrix::assemble(&g).unwrap().inf_norm();
        prop_assert!(s.eigenvalue(0) >= -1e-12 * (1.0 + norm));
    }

    #[test]
    fn trace_identity_and_min_max(seed in any::<u64>()) {
        let (g, _) = graph_from(seed, 40);
        let base = without_potential(&g);
        let s0 = solve(&base);
        let sc = solve(&g);
        let mass = potential_mass(g.potential(), g.measure());
        let total: f64 = sc.eigenvalues().iter().zip(s0.eigenvalues()).map(|(a, b)| a - b).sum();
        prop_assert!((total - mass).abs() <= 1e-9 * (1.0 + mass));
        for (a, b) in sc.eigenvalues().iter().zip(s0.eigenvalues()) {
            prop_assert!(a - b >= -1e-9);
        }
    }

    #[test]
    fn eigenfunctions_are_orthonormal(seed in any::<u64>()) {
        let (g, _) = graph_from(seed, 60);
        prop_assert!(solve(&g).orthonormality_defect() <= 1e-9);
    }

    #[test]
    fn nested_truncations_are_monotone(seed in any::<u64>()) {
        let (g, _) = graph_from(seed, 15);
        let base = without_potential(&g);
        let mut prev = solve(&base).eigenvalues().to_vec();
        for cut in 1..=g.len() {
            let c = truncate_potential(g.potential(), cut).unwrap();
            let next = solve(&base.add_potential(&c).unwrap()).eigenvalues().to_vec();
            for (a, b) in next.iter().zip(&prev) {
                prop_assert!(a - b >= -1e-9);
            }
            prev = next;
        }
    }

    #[test]
    fn hadamard_sum_is_potential_mass(seed in any::<u64>(), tau in 0.0f64..=1.0) {
        let (g, _) = graph_from(seed, 30);
        let base = without_potential(&g);
        let d = hadamard_derivatives(&base, g.potential(), tau).unwrap();
        let mass = potential_mass(g.potential(), g.measure());
        prop_assert!((d.iter().sum::<f64>() - mass).abs() <= 1e-8 * (1.0 + mass));
        prop_assert!(d.iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn heat_kernel_properties(seed in any::<u64>(), t in 0.01f64..2.0, s in 0.01f64..2.0) {
        let (g, _) = graph_from(seed, 15);
        let sp = solve(&g);
        let hk = HeatKernel::new(&sp);
        let m = g.measure();
        let n = g.len();
        let pt = hk.kernel_matrix(t).unwrap();
        let ps = hk.kernel_matrix(s).unwrap();
        let pts = hk.kernel_matrix(t + s).unwrap();
        for x in 0..n {
            prop_assert!(pt[(x, x)] <= 1.0 / m[x] + 1e-10);
            // diagonal decreases in time
            prop_assert!(pts[(x, x)] <= pt[(x, x)] + 1e-10);
            for y in 0..n {
                prop_assert_eq!(hk.kernel(t, x, y).unwrap(), hk.kernel(t, y, x).unwrap());
                prop_assert!(pt[(x, y)] >= -1e-10);
                let composed: f64 = (0..n).map(|z| pt[(x, z)] * ps[(z, y)] * m[z]).sum();
                prop_assert!((composed - pts[(x, y)]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn heat_conserves_mass_without_potential(seed in any::<u64>(), t in 0.01f64..5.0) {
        let (g, _) = graph_from(seed, 15);
        let sp = solve(&without_potential(&g));
        let out = HeatKernel::new(&sp).semigroup_apply(t, &vec![1.0; g.len()]).unwrap();
        for v in out {
            prop_assert!((v - 1.0).abs() <= 1e-9);
        }
    }

    #[test]
    fn text_and_json_round_trip(seed in any::<u64>()) {
        let (g, _) = graph_from(seed, 20);
        prop_assert_eq!(&parse_text(&write_text(&g)).unwrap(), &g);
        prop_assert_eq!(&parse_json(&write_json(&g)).unwrap(), &g);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn truncation_flavors_differ_only_at_the_boundary(size in 1usize..80) {
        let family = GraphFamily::paper_path();
        let d = family.truncate(size, TruncationFlavor::Dirichlet).unwrap();
        let n = family.truncate(size, TruncationFlavor::Neumann).unwrap();
        prop_assert_eq!(d.measure(), n.measure());
        prop_assert_eq!(d.edges().collect::<Vec<_>>(), n.edges().collect::<Vec<_>>());
        for x in 0..size {
            if x + 1 < size {
                prop_assert_eq!(d.potential()[x], n.potential()[x]);
            } else {
                prop_assert!(d.potential()[x] > n.potential()[x]);
            }
        }
        // the Dirichlet operator dominates the Neumann one
        let sd = solve(&d);
        let sn = solve(&n);
        for (a, b) in sd.eigenvalues().iter().zip(sn.eigenvalues()) {
            prop_assert!(a - b >= -1e-9 * (1.0 + b.abs()));
        }
    }

    #[test]
    fn paper_path_embeds_in_the_next_size(size in 1usize..80) {
        let a = GraphFamily::paper_path().truncate(size, TruncationFlavor::Neumann).unwrap();
        let b = GraphFamily::paper_path().truncate(size + 1, TruncationFlavor::Neumann).unwrap();
        prop_assert_eq!(a.measure(), &b.measure()[..size]);
        for (x, y, w) in a.edges() {
            prop_assert_eq!(b.edge_weight(x, y), w);
        }
        prop_assert_eq!(b.edge_count(), a.edge_count() + 1);
    }
}

#[test]
fn partial_sums_grow_with_size() {
    let c = ClosedForm::monomial(1.0, -6.0);
    let study = convergence_study(&GraphFamily::paper_path(), &c, &[2, 4, 8, 16, 32], 3).unwrap();
    for flavor in TruncationFlavor::BOTH {
        let targets: Vec<f64> = study.results(flavor).map(|r| r.report.target).collect();
        assert!(targets.windows(2).all(|w| w[1] > w[0]), "{targets:?}");
    }
}
