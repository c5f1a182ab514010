use std::sync::Arc;

use proptest::prelude::*;
use trisplit::experiments::{
    build_deblur, grid_sweep, haar_3stage, haar_3stage_inverse, synthetic_image, CellState,
    GridSpec, HardSoft, ImageProblemSpec, Measure, SweepCase, TwoBall, Variant,
};
use trisplit::io::{read_float_csv, read_pgm, write_float_csv, write_pgm, Image};
use trisplit::operators::Vector;
use trisplit::Error;

#[test]
fn two_ball_solvers_agree_with_oracle() {
    let tb = TwoBall::standard();
    let oracle = tb.oracle_solution(1e-10).unwrap();
    assert!(tb.feasible(&oracle));
    for gamma in [0.5, 1.5, 3.0] {
        let lambda = 0.9 * (2.0 - gamma / 2.0);
        let config = trisplit::SolverConfig::constant(gamma, lambda).with_tol_residual(1e-13);
        let out = trisplit::solve(&tb.problem(), &config, &tb.x0).unwrap();
        assert!(out.converged());
        assert!(out.solution.distance(&oracle) < 1e-6, "gamma {gamma}");
    }
}

#[test]
fn hard_soft_resolvents_agree_with_oracle() {
    for rho in [1.0, 2.0] {
        let hs = HardSoft::standard().with_rho(rho);
        let oracle = hs.oracle_solution(1e-10).unwrap();
        for config in [hs.dy_config(), hs.strengthened_config()] {
            let r = hs.resolvent(&config, 1e-13).unwrap();
            assert!(r.converged());
            let d = r.point.distance(&oracle);
            assert!(d < 1e-6, "rho {rho}: {d}");
            // the iterate also beats nearby feasible points on the objective
            assert!(hs.objective(&r.point) <= hs.objective(&oracle) + 1e-12);
        }
    }
}

fn hard_soft_case(variant: Variant, max_iter: usize) -> SweepCase {
    let hs = HardSoft::standard();
    SweepCase {
        problem: hs.problem().unwrap(),
        x0: hs.x0.clone(),
        variant,
        measure: Measure::Iterations {
            reference: hs.reference_solution().unwrap(),
            tol: 1e-8,
            max_iter,
        },
    }
}

#[test]
fn sweep_marks_the_infeasible_triangle() {
    let case = hard_soft_case(
        Variant::Strengthened(HardSoft::standard().dy_config()),
        2000,
    );
    let grid = GridSpec::uniform(19, 9);
    let result = grid_sweep(&case, &grid, 2).unwrap();
    for i in 0..grid.gammas.len() {
        for j in 0..grid.lambdas.len() {
            let (g, l) = result.coords(i, j);
            let infeasible = matches!(result.get(i, j), CellState::Infeasible);
            assert_eq!(infeasible, l > 2.0 - g / 2.0, "cell ({g}, {l})");
        }
    }
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let case = hard_soft_case(Variant::DavisYin, 3000);
    let grid = GridSpec::uniform(15, 7);
    let one = grid_sweep(&case, &grid, 1).unwrap();
    let many = grid_sweep(&case, &grid, 5).unwrap();
    assert_eq!(one, many);
    let mut a = Vec::new();
    let mut b = Vec::new();
    one.write_csv(&mut a).unwrap();
    many.write_csv(&mut b).unwrap();
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert_eq!(
        text.lines().next().unwrap(),
        "gamma_norm,lambda,status,iterations,objective"
    );
    assert_eq!(text.lines().count(), 1 + 15 * 7);
}

#[test]
fn objective_sweep_prefers_large_steps_on_deblur() {
    let spec = ImageProblemSpec {
        width: 8,
        height: 8,
        kernel_size: 5,
        kernel_std: 1.5,
        noise_std: 1e-3,
        seed: 2,
        reg_weight: 2e-5,
        stages: 2,
    };
    let dp = Arc::new(build_deblur(&spec, &synthetic_image(8, 8)).unwrap());
    let obj = dp.clone();
    let case = SweepCase {
        problem: dp.problem.clone(),
        x0: dp.x0.clone(),
        variant: Variant::DavisYin,
        measure: Measure::Objective {
            iterations: 50,
            objective: Arc::new(move |x: &Vector| obj.objective(x)),
        },
    };
    let grid = GridSpec::new(vec![0.5, 1.0, 1.98], vec![0.5, 0.99]).unwrap();
    let result = grid_sweep(&case, &grid, 0).unwrap();
    let value = |i, j| match result.get(i, j) {
        CellState::Objective(v) => v,
        other => panic!("{other:?}"),
    };
    assert!(value(2, 1) < value(0, 0));
    assert_eq!(result.argmin(), vec![(2, 1)]);
}

#[test]
fn grid_validation() {
    assert!(GridSpec::new(vec![], vec![1.0]).is_err());
    assert!(GridSpec::new(vec![0.0], vec![1.0]).is_err());
    assert!(GridSpec::new(vec![1.0], vec![-0.1]).is_err());
    let standard = GridSpec::standard();
    assert_eq!((standard.gammas.len(), standard.lambdas.len()), (99, 50));
    assert!(
        (standard.gammas[0] - 0.04).abs() < 1e-15 && (standard.gammas[98] - 3.96).abs() < 1e-15
    );
    assert!(
        (standard.lambdas[0] - 2.0 / 51.0).abs() < 1e-15
            && (standard.lambdas[49] - 100.0 / 51.0).abs() < 1e-15
    );
}

#[test]
fn identity_blur_without_noise_is_recovered() {
    let spec = ImageProblemSpec {
        width: 16,
        height: 16,
        kernel_size: 1,
        kernel_std: 1.0,
        noise_std: 0.0,
        seed: 0,
        reg_weight: 1e-9,
        stages: 3,
    };
    let truth = synthetic_image(16, 16);
    let dp = build_deblur(&spec, &truth).unwrap();
    assert_eq!(dp.observed, Vector::from(truth.pixels()));
    let run = dp.run(1.9 * dp.beta(), 0.99, 200).unwrap();
    let restored = dp.image(&run.coeffs);
    let worst = restored
        .pixels()
        .iter()
        .zip(truth.pixels())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst < 1e-3, "{worst}");
}

#[test]
fn deblur_rejects_bad_input() {
    let spec = ImageProblemSpec::default();
    assert!(matches!(
        build_deblur(&spec, &synthetic_image(16, 16)),
        Err(Error::DimensionMismatch { .. })
    ));
    let bright = Image::filled(32, 32, 1.5);
    assert!(build_deblur(&spec, &bright).is_err());
    let odd = ImageProblemSpec {
        width: 12,
        height: 12,
        ..ImageProblemSpec::default()
    };
    assert!(matches!(
        build_deblur(&odd, &synthetic_image(12, 12)),
        Err(Error::ImageShape { .. })
    ));
    let even_kernel = ImageProblemSpec {
        kernel_size: 4,
        ..ImageProblemSpec::default()
    };
    assert!(build_deblur(&even_kernel, &synthetic_image(32, 32)).is_err());
}

#[test]
fn deblur_noise_is_seeded() {
    let truth = synthetic_image(32, 32);
    let a = build_deblur(&ImageProblemSpec::default(), &truth).unwrap();
    let b = build_deblur(&ImageProblemSpec::default(), &truth).unwrap();
    assert_eq!(a.observed, b.observed);
    let other = ImageProblemSpec {
        seed: 1,
        ..ImageProblemSpec::default()
    };
    let c = build_deblur(&other, &truth).unwrap();
    assert_ne!(a.observed, c.observed);
    let noise: Vec<f64> = a
        .observed
        .iter()
        .zip(a.blurred.iter())
        .map(|(o, b)| o - b)
        .collect();
    let std = (noise.iter().map(|n| n * n).sum::<f64>() / noise.len() as f64).sqrt();
    assert!((std - 1e-3).abs() < 2e-4, "{std}");
}

#[test]
fn malformed_pgm_is_rejected() {
    for text in [
        "",
        "P5\n2 2\n255\n0 0 0 0",
        "P2\n2 2\n255\n0 0 0",
        "P2\n2 2\n255\n0 0 0 300",
        "P2\n2 x\n255\n",
    ] {
        assert!(
            matches!(read_pgm(text.as_bytes()), Err(Error::Format { .. })),
            "{text:?}"
        );
    }
    let img = read_pgm("P2\n# comment\n2 1\n4\n0 4\n".as_bytes()).unwrap();
    assert_eq!(img.pixels(), &[0.0, 1.0]);
}

proptest! {
    #[test]
    fn float_csv_round_trips_exactly(w in 1usize..6, h in 1usize..6, seed in any::<u64>()) {
        let pixels: Vec<f64> = (0..w * h)
            .map(|i| ((seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64)) % 1_000_003) as f64 / 7.0e5 - 0.3)
            .collect();
        let img = Image::new(w, h, pixels).unwrap();
        let mut buf = Vec::new();
        write_float_csv(&img, &mut buf).unwrap();
        prop_assert_eq!(read_float_csv(buf.as_slice()).unwrap(), img);
    }

    #[test]
    fn pgm_round_trips_on_the_quantization_grid(levels in prop::collection::vec(0u8..=255, 12)) {
        let img = Image::new(4, 3, levels.iter().map(|&v| v as f64 / 255.0).collect()).unwrap();
        let mut buf = Vec::new();
        write_pgm(&img, &mut buf).unwrap();
        let back = read_pgm(buf.as_slice()).unwrap();
        for (a, b) in back.pixels().iter().zip(img.pixels()) {
            prop_assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn haar_is_orthonormal(values in prop::collection::vec(-1.0..1.0f64, 64)) {
        let coeffs = haar_3stage(&values, 8, 8).unwrap();
        let energy_in: f64 = values.iter().map(|v| v * v).sum();
        let energy_out: f64 = coeffs.iter().map(|v| v * v).sum();
        prop_assert!((energy_in - energy_out).abs() < 1e-12);
        let back = haar_3stage_inverse(&coeffs, 8, 8).unwrap();
        for (a, b) in back.iter().zip(&values) {
            prop_assert!((a - b).abs() < 1e-14);
        }
    }
}
