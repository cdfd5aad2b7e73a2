use std::process::Command;

use numdiff::csv_io::{parse_series, read_series_csv, render_series, write_series_csv};
use numdiff_core::models::sample_model;
use numdiff_core::series::MISSING;
use numdiff_core::{LogisticModel, Series};
use proptest::prelude::*;

fn run_bytes(args: &[&str]) -> (i32, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_numdiff"))
        .args(args)
        .env_remove("NUMDIFF_PRESETS")
        .output()
        .unwrap();
    (o.status.code().unwrap(), o.stdout)
}

#[test]
fn repeated_invocations_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let samples = sample_model(&LogisticModel::published(), 0.0, 120.0, 61).unwrap();
    let input = dir.path().join("in.csv");
    write_series_csv(&samples, &input).unwrap();
    let input = input.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["stencil", "--scheme", "centered", "--accuracy", "high", "--format", "md"],
        vec!["diff", "--input", input, "--scheme", "forward", "--accuracy", "high"],
        vec!["case", "run", "logistic"],
        vec!["case", "run", "temperature", "--format", "json"],
        vec!["case", "run", "market", "--format", "csv"],
        vec!["case", "run", "market", "--format", "svg"],
        vec!["converge", "--case", "temperature", "--scheme", "centered", "--accuracy", "high", "--t", "6"],
        vec!["cost", "--format", "json"],
    ];
    for args in commands {
        let (c1, first) = run_bytes(&args);
        let (c2, second) = run_bytes(&args);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert!(!first.is_empty(), "{args:?}");
        assert_eq!(first, second, "{args:?}");
    }
}

#[test]
fn plot_file_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.svg");
    let b = dir.path().join("b.svg");
    for path in [&a, &b] {
        let (code, _) = run_bytes(&["case", "run", "logistic", "--plot", path.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
}

#[test]
fn generated_logistic_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("logistic.csv");
    let samples = sample_model(&LogisticModel::published(), 0.0, 120.0, 241).unwrap();
    write_series_csv(&samples, &path).unwrap();
    let first = read_series_csv(&path).unwrap();
    write_series_csv(&first, &path).unwrap();
    let second = read_series_csv(&path).unwrap();
    assert_eq!(first.len(), 241);
    for (a, b) in first.iter().zip(second.iter()).chain(first.iter().zip(samples.iter())) {
        assert_eq!(a.0.to_bits(), b.0.to_bits());
        assert_eq!(a.1.to_bits(), b.1.to_bits());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn write_then_read_is_identity(
        t0 in -1e6f64..1e6,
        steps in proptest::collection::vec(1e-9f64..1e3, 1..40),
        raw in proptest::collection::vec(prop_oneof![9 => proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL | proptest::num::f64::ZERO, 1 => Just(MISSING)], 41),
    ) {
        let mut times = vec![t0];
        for s in &steps {
            let next = times.last().unwrap() + s;
            prop_assume!(next > *times.last().unwrap());
            times.push(next);
        }
        let values = raw[..times.len()].to_vec();
        let series = Series::new(times, values).unwrap();
        let text = render_series(&series);
        let back = parse_series(&text, "mem").unwrap();
        prop_assert_eq!(back.len(), series.len());
        for ((ta, va), (tb, vb)) in series.iter().zip(back.iter()) {
            prop_assert_eq!(ta.to_bits(), tb.to_bits());
            if va.is_nan() {
                prop_assert!(vb.is_nan());
            } else {
                prop_assert_eq!(va.to_bits(), vb.to_bits());
            }
        }
        prop_assert_eq!(render_series(&back), text);
    }
}
