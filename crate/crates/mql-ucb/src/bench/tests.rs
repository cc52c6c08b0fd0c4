use tempfile::tempdir;

use super::*;

fn small_spec() -> ExperimentSpec {
    ExperimentSpec {
        schema: EXPSPEC_SCHEMA.to_string(),
        instance: InstanceSpec::Random { num_states: 3, num_actions: 2, horizon: 2, seed: 7 },
        agents: vec![
            AgentEntry { name: "mql".into(), kind: AgentKind::MqlUcb { mode: None, config: None } },
            AgentEntry { name: "rand".into(), kind: AgentKind::UniformRandom },
        ],
        num_episodes: 80,
        seeds: vec![1, 2, 3],
        output_dir: None,
        emit: EmitOptions::default(),
    }
}

#[test]
fn grid_produces_one_trace_per_run_plus_summary() {
    let dir = tempdir().unwrap();
    let spec = small_spec();
    let outcome = run_experiment(&spec, dir.path(), 2, 0).unwrap();
    assert!(outcome.all_succeeded());
    assert_eq!(outcome.records.len(), 6);
    let mut files: Vec<String> = std::fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    files.sort();
    assert_eq!(files.len(), 7, "6 traces + summary: {files:?}");
    assert!(files.contains(&"summary.json".to_string()));
    assert!(files.contains(&"trace_mql_1.csv".to_string()));
    assert!(files.contains(&"trace_rand_3.csv".to_string()));
}

#[test]
fn reruns_are_byte_identical() {
    let spec = small_spec();
    let dir_a = tempdir().unwrap();
    let dir_b = tempdir().unwrap();
    run_experiment(&spec, dir_a.path(), 2, 0).unwrap();
    run_experiment(&spec, dir_b.path(), 1, 0).unwrap();
    for entry in std::fs::read_dir(dir_a.path()).unwrap() {
        let name = entry.unwrap().file_name();
        if name == "summary.json" {
            continue; // wall-clock timings differ by design
        }
        let a = std::fs::read(dir_a.path().join(&name)).unwrap();
        let b = std::fs::read(dir_b.path().join(&name)).unwrap();
        assert_eq!(a, b, "trace {name:?} differs between reruns");
    }
}

#[test]
fn summary_means_recompute_from_traces() {
    let dir = tempdir().unwrap();
    let spec = small_spec();
    let outcome = run_experiment(&spec, dir.path(), 2, 0).unwrap();
    for agg in &outcome.summary.aggregates {
        let finals: Vec<f64> = outcome
            .summary
            .runs
            .iter()
            .filter(|r| r.agent == agg.agent)
            .map(|r| {
                let csv = std::fs::read_to_string(
                    dir.path().join(r.trace_file.as_ref().unwrap()),
                )
                .unwrap();
                RunMetrics::from_csv(&csv).unwrap().final_cum_regret
            })
            .collect();
        let mean = finals.iter().sum::<f64>() / finals.len() as f64;
        assert!(
            (mean - agg.mean_final_cum_regret).abs() <= 1e-12,
            "{}: {} vs {}",
            agg.agent,
            mean,
            agg.mean_final_cum_regret
        );
    }
}

#[test]
fn seed_permutation_preserves_individual_runs() {
    let dir_a = tempdir().unwrap();
    let dir_b = tempdir().unwrap();
    let spec = small_spec();
    let mut permuted = spec.clone();
    permuted.seeds = vec![3, 1, 2];
    run_experiment(&spec, dir_a.path(), 2, 0).unwrap();
    run_experiment(&permuted, dir_b.path(), 2, 0).unwrap();
    for seed in [1u64, 2, 3] {
        for agent in ["mql", "rand"] {
            let name = format!("trace_{agent}_{seed}.csv");
            let a = std::fs::read(dir_a.path().join(&name)).unwrap();
            let b = std::fs::read(dir_b.path().join(&name)).unwrap();
            assert_eq!(a, b, "{name} changed under seed permutation");
        }
    }
}

#[test]
fn identical_agent_under_two_labels_gives_identical_columns() {
    let dir = tempdir().unwrap();
    let mut spec = small_spec();
    spec.agents = vec![
        AgentEntry { name: "a".into(), kind: AgentKind::MqlUcb { mode: None, config: None } },
        AgentEntry { name: "b".into(), kind: AgentKind::MqlUcb { mode: None, config: None } },
    ];
    run_experiment(&spec, dir.path(), 2, 0).unwrap();
    let sets = load_trace_sets(dir.path()).unwrap();
    let table = compare_regret(&sets).unwrap();
    assert_eq!(table.rows[0].regret_checkpoints, table.rows[1].regret_checkpoints);
    assert_eq!(table.rows[0].mean_switches, table.rows[1].mean_switches);
}

#[test]
fn checkpoints_recompute_from_raw_rows() {
    let dir = tempdir().unwrap();
    let spec = small_spec();
    run_experiment(&spec, dir.path(), 2, 0).unwrap();
    let sets = load_trace_sets(dir.path()).unwrap();
    let table = compare_regret(&sets).unwrap();
    let k = spec.num_episodes;
    for (set, row) in sets.iter().zip(&table.rows) {
        let mean_at_k: f64 =
            set.runs.iter().map(|(_, m)| m.cum_regret_at(k)).sum::<f64>() / set.runs.len() as f64;
        assert!((mean_at_k - row.regret_checkpoints[2]).abs() < 1e-12);
    }
}

#[test]
fn mismatched_grids_are_rejected() {
    let dir_a = tempdir().unwrap();
    let dir_b = tempdir().unwrap();
    let spec = small_spec();
    let mut other = spec.clone();
    other.num_episodes = 40;
    run_experiment(&spec, dir_a.path(), 2, 0).unwrap();
    run_experiment(&other, dir_b.path(), 2, 0).unwrap();
    let mut sets = load_trace_sets(dir_a.path()).unwrap();
    sets.extend(load_trace_sets(dir_b.path()).unwrap());
    assert!(matches!(compare_regret(&sets), Err(BenchError::GridMismatch(_))));
    assert!(matches!(compare_regret(&sets[..1]), Err(BenchError::NotEnoughSets(1))));
}

#[test]
fn spec_validation_reports_field_paths() {
    let bad_schema = r#"{"schema":"expspec/v0","instance":{"kind":"chain2"},
        "agents":[{"name":"a","kind":"uniform_random"}],"num_episodes":5,"seeds":[1]}"#;
    match ExperimentSpec::from_json(bad_schema) {
        Err(BenchError::Validation { path, .. }) => assert_eq!(path, "schema"),
        other => panic!("expected schema validation error, got {other:?}"),
    }

    let dup = r#"{"schema":"expspec/v1","instance":{"kind":"chain2"},
        "agents":[{"name":"a","kind":"uniform_random"},{"name":"a","kind":"uniform_random"}],
        "num_episodes":5,"seeds":[1]}"#;
    match ExperimentSpec::from_json(dup) {
        Err(BenchError::Validation { path, msg }) => {
            assert_eq!(path, "agents[1].name");
            assert!(msg.contains("duplicate"));
        }
        other => panic!("expected duplicate-name error, got {other:?}"),
    }

    let bad_field = r#"{"schema":"expspec/v1","instance":{"kind":"random","num_states":"three",
        "num_actions":2,"horizon":2,"seed":1},
        "agents":[{"name":"a","kind":"uniform_random"}],"num_episodes":5,"seeds":[1]}"#;
    match ExperimentSpec::from_json(bad_field) {
        Err(BenchError::Validation { path, .. }) => {
            assert!(path.contains("instance"), "path was {path}");
        }
        other => panic!("expected parse error with a path, got {other:?}"),
    }

    let hard = r#"{"schema":"expspec/v1","instance":{"kind":"hard","d":6,"horizon":3,"seed":1},
        "agents":[{"name":"a","kind":"uniform_random"}],"num_episodes":5,"seeds":[1]}"#;
    match ExperimentSpec::from_json(hard) {
        Err(BenchError::Validation { path, .. }) => assert_eq!(path, "instance.d"),
        other => panic!("expected hard-instance validation error, got {other:?}"),
    }
}

#[test]
fn spec_round_trips_through_json() {
    let spec = small_spec();
    let back = ExperimentSpec::from_json(&spec.to_json()).unwrap();
    assert_eq!(spec, back);
}

#[test]
fn output_dir_resolution_order() {
    let spec_with_dir = ExperimentSpec { output_dir: Some("from-spec".into()), ..small_spec() };
    assert_eq!(
        resolve_output_dir(Some(Path::new("from-flag")), &spec_with_dir),
        PathBuf::from("from-flag")
    );
    std::env::remove_var(OUTPUT_DIR_ENV);
    assert_eq!(resolve_output_dir(None, &spec_with_dir), PathBuf::from("from-spec"));
    assert_eq!(resolve_output_dir(None, &small_spec()), PathBuf::from("mql-bench-out"));
    std::env::set_var(OUTPUT_DIR_ENV, "from-env");
    assert_eq!(resolve_output_dir(None, &spec_with_dir), PathBuf::from("from-env"));
    std::env::remove_var(OUTPUT_DIR_ENV);
}

#[test]
fn one_failing_run_does_not_abort_siblings() {
    let dir = tempdir().unwrap();
    let mut spec = small_spec();
    // A vanishing regularizer plus zeroed variance channels drives the
    // recorded weights to the tiny alpha floor, tripping the
    // condition-estimate guard on the first data-bearing fit; the healthy
    // sibling agent must still finish.
    let mut bad_cfg = crate::algorithm::AlgoConfig::practical(6.0, 2, 80);
    bad_cfg.lambda = 1e-15;
    bad_cfg.gamma = 0.0;
    bad_cfg.alpha = 1e-9;
    bad_cfg.c_bernstein = 0.0;
    bad_cfg.c_hoeffding = 0.0;
    bad_cfg.c_second = 0.0;
    bad_cfg.f_multiplier = 0.0;
    spec.agents = vec![
        AgentEntry {
            name: "sick".into(),
            kind: AgentKind::MqlUcb { mode: None, config: Some(bad_cfg) },
        },
        AgentEntry { name: "healthy".into(), kind: AgentKind::UniformRandom },
    ];
    let outcome = run_experiment(&spec, dir.path(), 2, 0).unwrap();
    assert!(!outcome.all_succeeded());
    assert_eq!(outcome.summary.failures.len(), 3);
    assert!(outcome.summary.failures.iter().all(|f| f.agent == "sick"));
    assert!(outcome.summary.failures[0].error.contains("ill-conditioned"));
    let healthy: Vec<_> =
        outcome.summary.runs.iter().filter(|r| r.agent == "healthy").collect();
    assert_eq!(healthy.len(), 3);
    assert!(dir.path().join("trace_healthy_1.csv").exists());
}

#[test]
fn budget_agent_resolves_recursively() {
    let json = r#"{"schema":"expspec/v1","instance":{"kind":"chain2"},
        "agents":[{"name":"capped","kind":"budget_limited","budget":0,
                   "inner":{"kind":"mql_ucb"}}],
        "num_episodes":20,"seeds":[5]}"#;
    let spec = ExperimentSpec::from_json(json).unwrap();
    let dir = tempdir().unwrap();
    let outcome = run_experiment(&spec, dir.path(), 1, 0).unwrap();
    assert!(outcome.all_succeeded());
    let run = &outcome.summary.runs[0];
    assert_eq!(run.total_switches, 0);
}
