use bsa_core::stats::{Method, Verdict, WilcoxonResult};
use bsa_core::{Algorithm, FunctionId};
use bsa_lab::config::{ExperimentSpec, Metric, Mode, Profile};
use bsa_lab::harness::{run_range_sweep, success_ratio_by_function};
use bsa_lab::report::{
    descriptives, render_comparison, render_comparisons_csv, render_descriptives,
    render_success_ratio, ComparisonRow, ComparisonTable, Format, DESCRIPTIVES_CSV_HEADER,
};
use bsa_lab::store::{read_records_csv, render_records_csv};

fn result(p: f64, r_plus: f64, r_minus: f64, verdict: Verdict) -> Option<WilcoxonResult> {
    Some(WilcoxonResult {
        r_plus,
        r_minus,
        n_effective: 30,
        p_value: p,
        method: Method::Exact,
        verdict,
    })
}

fn table() -> ComparisonTable {
    ComparisonTable {
        mode: Mode::DimensionSweep,
        config: "D60".to_string(),
        metric: Metric::Evals,
        alpha: 0.05,
        competitors: vec![Algorithm::De, Algorithm::Pso],
        rows: vec![
            ComparisonRow {
                function: FunctionId::Bird,
                results: vec![
                    result(0.00003, 465.0, 0.0, Verdict::Plus),
                    result(0.0879, 316.0, 149.0, Verdict::Equal),
                ],
            },
            ComparisonRow {
                function: FunctionId::Leon,
                results: vec![
                    result(0.01, 100.5, 364.5, Verdict::Minus),
                    result(0.002, 400.0, 65.0, Verdict::Plus),
                ],
            },
        ],
    }
}

fn small_records() -> Vec<bsa_lab::RunRecord> {
    let mut spec = ExperimentSpec::from_profile(Profile::Smoke);
    spec.algorithms = vec![Algorithm::Bsa, Algorithm::Abc];
    spec.functions = vec![FunctionId::Sphere, FunctionId::Easom];
    spec.ranges = vec![5.0, 100.0];
    spec.runs = 5;
    spec.iterations = 40;
    spec.pop_size = 10;
    spec.timing = false;
    run_range_sweep(&spec).unwrap()
}

#[test]
fn markdown_comparison_layout() {
    let md = render_comparison(&table(), Format::Markdown);
    assert!(
        md.contains("| F3 | <0.0001 | 465 | 0 | + | 0.0879 | 316 | 149 | = |"),
        "{md}"
    );
    assert!(
        md.contains("| F4 | 0.0100 | 100.5 | 364.5 | - | 0.0020 | 400 | 65 | + |"),
        "{md}"
    );
    let footer = md.lines().last().unwrap();
    assert_eq!(footer, "| +/=/- | | | | 1/0/1 | | | | 1/1/0 |");
    assert!(md.contains("DE p-value | DE R+ | DE R- | DE Win"));
}

#[test]
fn footer_matches_column_tallies() {
    let t = table();
    let f = t.footer();
    for (c, summary) in f.iter().enumerate() {
        let count = |v| {
            t.rows
                .iter()
                .filter(|r| r.results[c].unwrap().verdict == v)
                .count()
        };
        assert_eq!(summary.plus, count(Verdict::Plus));
        assert_eq!(summary.equal, count(Verdict::Equal));
        assert_eq!(summary.minus, count(Verdict::Minus));
    }
}

#[test]
fn empty_table_has_zero_footer() {
    let mut t = table();
    t.rows.clear();
    let md = render_comparison(&t, Format::Markdown);
    assert_eq!(
        md.lines().last().unwrap(),
        "| +/=/- | | | | 0/0/0 | | | | 0/0/0 |"
    );
    t.competitors.clear();
    let md = render_comparison(&t, Format::Markdown);
    assert_eq!(md.lines().last().unwrap(), "| +/=/- | 0/0/0 |");
    let csv = render_comparison(&t, Format::Csv);
    assert_eq!(csv.lines().count(), 1);
}

#[test]
fn comparison_csv_round_trips() {
    let t = table();
    let text = render_comparisons_csv(std::slice::from_ref(&t));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    let mut i = 0;
    for row in &t.rows {
        for r in row.results.iter().flatten() {
            let line = &rows[i];
            assert_eq!(line[4].parse::<f64>().unwrap(), r.p_value);
            assert_eq!(line[5].parse::<f64>().unwrap(), r.r_plus);
            assert_eq!(line[6].parse::<f64>().unwrap(), r.r_minus);
            assert_eq!(&line[9], r.verdict.symbol());
            i += 1;
        }
    }
    let json: serde_json::Value =
        serde_json::from_str(&render_comparison(&t, Format::Json)).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
    assert_eq!(json[0]["r_plus"], 465.0);
}

#[test]
fn records_csv_round_trips() {
    let records = small_records();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("records.csv");
    std::fs::write(&path, render_records_csv(&records)).unwrap();
    let back = read_records_csv(&path).unwrap();
    assert_eq!(back.len(), records.len());
    for (a, b) in records.iter().zip(&back) {
        assert_eq!(a.algorithm.name(), b.algorithm);
        assert_eq!(a.function.code(), b.function);
        assert_eq!(a.mode.as_str(), b.mode);
        assert_eq!(a.config, b.config);
        assert_eq!(a.seed, b.seed);
        assert_eq!(a.best_value.to_bits(), b.best_value.to_bits());
        assert_eq!(a.evaluations, b.evaluations);
        assert_eq!(a.evals_to_target, b.evals_to_target);
        assert_eq!(a.wall_time_s, b.wall_time_s);
        assert_eq!(a.success, b.success);
    }
    let header = render_records_csv(&[]);
    assert_eq!(
        header.trim(),
        "algorithm,function,mode,config,seed,best_value,evaluations,evals_to_target,wall_time_s,success"
    );
}

#[test]
fn descriptives_recomputed_from_raw_csv() {
    let records = small_records();
    let rows = descriptives(&records).unwrap();
    let text = render_descriptives(&rows, Format::Csv);
    assert_eq!(text.lines().next().unwrap(), DESCRIPTIVES_CSV_HEADER);
    assert_eq!(rows.len(), 2 * 2 * 2);

    // Recompute each mean and population std from the records CSV text
    // alone, as a spreadsheet would.
    let raw = render_records_csv(&records);
    let mut raw_reader = csv::Reader::from_reader(raw.as_bytes());
    let raw_rows: Vec<csv::StringRecord> = raw_reader.records().map(Result::unwrap).collect();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    for line in reader.records().map(Result::unwrap) {
        let values: Vec<f64> = raw_rows
            .iter()
            .filter(|r| r[0] == line[0] && r[1] == line[1] && r[2] == line[2] && r[3] == line[3])
            .map(|r| r[5].parse().unwrap())
            .collect();
        assert_eq!(values.len(), 5);
        let n = values.len() as f64;
        let mean: f64 = values.iter().sum::<f64>() / n;
        let std = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        let got_mean: f64 = line[4].parse().unwrap();
        let got_std: f64 = line[5].parse().unwrap();
        let scale = mean.abs().max(1e-300);
        assert!(
            (got_mean - mean).abs() <= 1e-12 * scale,
            "{got_mean} vs {mean}"
        );
        assert!(
            (got_std - std).abs() <= 1e-9 * scale.max(std),
            "{got_std} vs {std}"
        );
        let successes: usize = line[9].parse().unwrap();
        let fails: usize = line[10].parse().unwrap();
        assert_eq!(successes + fails, 5);
    }
}

#[test]
fn constant_cell_has_zero_std() {
    let mut records = small_records();
    for r in &mut records {
        r.best_value = 2.5;
    }
    for row in descriptives(&records).unwrap() {
        assert_eq!(row.stats.std_dev, 0.0);
        assert_eq!(row.stats.mean, 2.5);
    }
}

#[test]
fn success_ratio_rows() {
    let records = small_records();
    let rows = success_ratio_by_function(&records);
    // algorithms x configs x functions, all with data
    assert_eq!(rows.len(), 2 * 2 * 2);
    let text = render_success_ratio(&rows, Format::Csv);
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut n = 0;
    for line in reader.records().map(Result::unwrap) {
        let s: f64 = line[5].parse().unwrap();
        let f: f64 = line[6].parse().unwrap();
        assert!((s + f - 1.0).abs() < 1e-15);
        n += 1;
    }
    assert_eq!(n, rows.len());

    let mut all_good = records.clone();
    all_good.truncate(5);
    for r in &mut all_good {
        r.success = true;
    }
    let rows = success_ratio_by_function(&all_good);
    assert_eq!(rows.len(), 1);
    let json: serde_json::Value =
        serde_json::from_str(&render_success_ratio(&rows, Format::Json)).unwrap();
    assert_eq!(json[0]["success_ratio"], 1.0);
    assert_eq!(json[0]["failure_ratio"], 0.0);
}
