mod common;

use common::random_image;
use noisebench::{run_benchmark, BenchPlan, FilterSpec, NoiseKind, NoiseParams};

#[test]
fn zero_strength_rows_with_identity_filters_are_infinite() {
    let mut plan = BenchPlan::new(random_image(24, 20, 1), "z");
    plan.set_noise(NoiseParams::Gaussian {
        mu: 0.0,
        sigma: 0.0,
    });
    plan.set_noise(NoiseParams::SaltPepper {
        density: 0.0,
        salt_fraction: 0.5,
    });
    plan.set_noise(NoiseParams::Speckle { variance: 0.0 });
    plan.set_noise(NoiseParams::Periodic {
        amplitude: 0.0,
        cycles_x: 8,
        cycles_y: 8,
        phase: 0.0,
    });
    plan.set_filter(FilterSpec::Median { window: 1 });
    plan.set_filter(FilterSpec::Mean { window: 1 });
    let csv = run_benchmark(&plan).unwrap().to_csv();
    for kind in ["gaussian", "salt_pepper", "speckle", "periodic"] {
        let line = csv
            .lines()
            .find(|l| l.starts_with(&format!("{kind},")))
            .unwrap();
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells[1], "inf", "{line}");
        assert_eq!(cells[2], "inf", "{line}");
        assert_eq!(cells[9], "median", "{line}");
    }
}

#[test]
fn rows_are_independent() {
    let base = BenchPlan::new(random_image(32, 32, 2), "r");
    let before = run_benchmark(&base).unwrap().to_csv();
    let mut changed = base.clone();
    changed.set_noise(NoiseParams::Gaussian {
        mu: 5.0,
        sigma: 35.0,
    });
    let after = run_benchmark(&changed).unwrap().to_csv();
    for (a, b) in before.lines().zip(after.lines()) {
        if a.starts_with("gaussian,") {
            assert_ne!(a, b);
        } else {
            assert_eq!(a, b);
        }
    }
}

#[test]
fn best_column_is_row_argmax() {
    let report = run_benchmark(&BenchPlan::new(random_image(32, 24, 3), "a")).unwrap();
    for row in report.rows() {
        let best = row.best();
        for c in row.cells {
            assert!(row.cell(best).db >= c.db);
        }
    }
    assert_eq!(report.rows().len(), NoiseKind::ALL.len());
}

#[test]
fn dump_dir_gets_every_cell() {
    let dir = tempfile::tempdir().unwrap();
    let mut plan = BenchPlan::new(random_image(16, 16, 4), "d");
    plan.dump_dir = Some(dir.path().to_path_buf());
    run_benchmark(&plan).unwrap();
    let count = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(count, 1 + 8 + 64);
    assert!(dir.path().join("poisson_bilateral.pgm").exists());
    assert!(dir.path().join("gaussian_noisy.pgm").exists());
}
