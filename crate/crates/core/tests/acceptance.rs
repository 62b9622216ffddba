//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use amreval::embeddings::EmbeddingStore;
use amreval::metrics::{smatch, wwlk_cost_matrix, MetricConfig, MetricId, Scorer, WwlkOptions};
use amreval::penman::{parse_penman, serialize_penman, AmrEntry, AmrGraph};
use amreval::report::{compare_report, correlation_report, meta_eval_report, Aggregate, CompareReport};
use amreval::stats::{
    bootstrap_ci, pairwise_accuracy, parse_acceptability, parse_preferences, EvalCorpus, HumanJudgments,
    ScoreTable, TiesMode,
};
use amreval::synth::{perturb, random_graph, synthetic_corpus, GraphShape, SynthItem};
use amreval::transport::{solve_exact, wasserstein_distance, TransportProblem};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn scorer() -> Scorer {
    Scorer::with_fallback_embeddings(MetricConfig::default())
}

fn corpus_of(gold: &str, parsers: &[(&str, &str)]) -> EvalCorpus {
    let cands = parsers
        .iter()
        .map(|(id, path)| (id.to_string(), common::load(path)))
        .collect();
    EvalCorpus::align(common::load(gold), cands).unwrap().0
}

fn synth_corpus(items: &[SynthItem]) -> EvalCorpus {
    let gold: Vec<AmrEntry> = items.iter().map(|i| i.gold.clone()).collect();
    let a: Vec<AmrEntry> = items.iter().map(|i| i.a.clone()).collect();
    let b: Vec<AmrEntry> = items.iter().map(|i| i.b.clone()).collect();
    EvalCorpus::align(gold, vec![("a".into(), a), ("b".into(), b)]).unwrap().0
}

fn demo() -> (EvalCorpus, HumanJudgments) {
    let corpus = corpus_of("demo/gold.amr", &[("alpha", "demo/alpha.amr"), ("beta", "demo/beta.amr")]);
    let mut h = HumanJudgments::default();
    parse_preferences(&std::fs::read_to_string(common::fixture("demo/prefs.tsv")).unwrap(), &mut h).unwrap();
    parse_acceptability(&std::fs::read_to_string(common::fixture("demo/accept.tsv")).unwrap(), &mut h).unwrap();
    (corpus, h)
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn look_over() -> Outcome {
    let start = Instant::now();
    let reference = &common::load("look_over/gold.amr")[0].graph;
    let c1 = &common::load("look_over/cand1.amr")[0].graph;
    let c2 = &common::load("look_over/cand2.amr")[0].graph;
    let s1 = smatch(c1, reference, 4, 0).0.similarity;
    let s2 = smatch(c2, reference, 4, 0).0.similarity;
    let elapsed = start.elapsed();
    check((s1 - 0.2).abs() < 1e-12 && (s2 - 0.2).abs() < 1e-12, || {
        format!("smatch {s1} and {s2}, expected 0.2")
    })?;
    check(elapsed.as_secs_f64() < 1.0, || format!("took {elapsed:?}"))?;
    Ok(format!("candidate 1 = {s1:.2}, candidate 2 = {s2:.2} in {elapsed:.2?}"))
}

fn identity_suite() -> Outcome {
    let mut graphs: Vec<AmrGraph> = Vec::new();
    for path in [
        "identity.amr",
        "look_over/gold.amr",
        "look_over/cand1.amr",
        "look_over/cand2.amr",
        "micro_macro/gold.amr",
        "demo/gold.amr",
        "demo/alpha.amr",
        "demo/beta.amr",
    ] {
        graphs.extend(common::load(path).into_iter().map(|e| e.graph));
    }
    let s = scorer();
    let mut checked = 0;
    for g in &graphs {
        let renamed = g.rename_vars(|v| format!("r_{v}")).unwrap();
        for m in MetricId::ALL {
            for (x, y) in [(g, g), (g, &renamed), (&renamed, g)] {
                let v = s.score(m, x, y).similarity;
                check((v - 1.0).abs() <= 1e-9, || {
                    format!("{m} gives {v} on\n{}", serialize_penman(g))
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{} graphs, {checked} self/renamed comparisons all 1.0", graphs.len()))
}

fn alignment_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_241_017);
    let shape = GraphShape {
        max_nodes: 6,
        reentrancy: 0.2,
        attribute: 0.25,
        ..GraphShape::default()
    };
    let total = 1000;
    let mut mismatches = Vec::new();
    for i in 0..total {
        let reference = random_graph(&mut rng, &shape);
        let candidate = if i % 2 == 0 {
            perturb(&mut rng, &reference, 0.35, &shape)
        } else {
            random_graph(&mut rng, &shape)
        };
        let got = smatch(&candidate, &reference, 4, 0).0.similarity;
        let want = common::exhaustive_smatch(&candidate, &reference);
        if (got - want).abs() > 1e-12 {
            mismatches.push((i, got, want, candidate, reference));
        }
    }
    for (i, got, want, c, r) in &mismatches {
        eprintln!(
            "  pair {i}: hill climbing {got:.6} < exhaustive {want:.6}\n  candidate:\n{}\n  reference:\n{}",
            serialize_penman(c),
            serialize_penman(r)
        );
    }
    let rate = 1.0 - mismatches.len() as f64 / total as f64;
    check(rate >= 0.99, || format!("agreement {rate:.3} with {} mismatches", mismatches.len()))?;
    Ok(format!("{}/{total} pairs match the exhaustive optimum", total - mismatches.len()))
}

fn transport_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let masses = |rng: &mut ChaCha8Rng, n: usize| {
        let raw: Vec<f64> = (0..n).map(|_| rng.random_range(0.05..1.0)).collect();
        let s: f64 = raw.iter().sum();
        let mut m: Vec<f64> = raw.iter().map(|x| x / s).collect();
        m[0] += 1.0 - m.iter().sum::<f64>();
        m
    };
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let n = rng.random_range(1..=4);
        let m = rng.random_range(1..=4);
        let integer = i % 3 == 0;
        let cost: Vec<Vec<f64>> = (0..n)
            .map(|_| {
                (0..m)
                    .map(|_| {
                        if integer {
                            rng.random_range(0..3) as f64
                        } else {
                            rng.random_range(0.0..10.0)
                        }
                    })
                    .collect()
            })
            .collect();
        let (a, b) = if i % 2 == 0 {
            (vec![1.0 / n as f64; n], vec![1.0 / m as f64; m])
        } else {
            (masses(&mut rng, n), masses(&mut rng, m))
        };
        let p = TransportProblem::new(cost.clone(), a.clone(), b.clone()).map_err(|e| e.to_string())?;
        let got = solve_exact(&p).map_err(|e| e.to_string())?.objective;
        let want = common::transport_lp_oracle(&cost, &a, &b);
        worst = worst.max((got - want).abs());
        check((got - want).abs() <= 1e-9, || format!("instance {i}: {got} vs oracle {want}"))?;
    }
    let point = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..3).map(|_| rng.random_range(-2.0..2.0)).collect() };
    for _ in 0..200 {
        let sets: Vec<Vec<Vec<f64>>> = (0..3)
            .map(|_| {
                let k = rng.random_range(1..=5);
                (0..k).map(|_| point(&mut rng)).collect()
            })
            .collect();
        let d = |x: usize, y: usize| wasserstein_distance(&sets[x], &sets[y]).unwrap();
        check((d(0, 1) - d(1, 0)).abs() < 1e-9, || "asymmetric distance".into())?;
        check(d(0, 0).abs() < 1e-9, || "nonzero self distance".into())?;
        check(d(0, 2) <= d(0, 1) + d(1, 2) + 1e-9, || "triangle inequality violated".into())?;
    }
    Ok(format!("1000 problems, max |solver - oracle| = {worst:.1e}; axioms hold on 200 triples"))
}

fn compare(corpus: &EvalCorpus, metrics: &[MetricId], a: &str, b: &str) -> CompareReport {
    let table = ScoreTable::build(corpus, &scorer(), metrics, &strings(&[a, b])).unwrap();
    compare_report(&table, a, b, Aggregate::Both, TiesMode::Split, false).unwrap()
}

fn micro_macro() -> Outcome {
    let corpus = corpus_of("micro_macro/gold.amr", &[("a", "micro_macro/a.amr"), ("b", "micro_macro/b.amr")]);
    let r = compare(&corpus, &[MetricId::Smatch], "a", "b");
    let row = &r.rows[0];
    let (mi, ma) = (row.micro_score.unwrap(), row.macro_score.unwrap());
    check(mi.delta > 0.0 && ma.delta < 0.0, || {
        format!("micro delta {:.4}, macro delta {:.4}", mi.delta, ma.delta)
    })?;
    Ok(format!(
        "micro A {:.4} vs B {:.4} (delta {:+.4}); macro A {:.4} vs B {:.4} (delta {:+.4})",
        mi.a, mi.b, mi.delta, ma.a, ma.b, ma.delta
    ))
}

fn conservation() -> Outcome {
    let mut runs = vec![
        (
            "demo",
            corpus_of("demo/gold.amr", &[("alpha", "demo/alpha.amr"), ("beta", "demo/beta.amr")]),
            strings(&["alpha", "beta"]),
        ),
        (
            "micro_macro",
            corpus_of("micro_macro/gold.amr", &[("a", "micro_macro/a.amr"), ("b", "micro_macro/b.amr")]),
            strings(&["a", "b"]),
        ),
        (
            "look_over",
            corpus_of("look_over/gold.amr", &[("c1", "look_over/cand1.amr"), ("c2", "look_over/cand2.amr")]),
            strings(&["c1", "c2"]),
        ),
    ];
    let items = synthetic_corpus(5, 60, &GraphShape::default(), 0.2, 0.2);
    runs.push(("synthetic", synth_corpus(&items), strings(&["a", "b"])));
    let mut rows = 0;
    for (name, corpus, p) in &runs {
        let r = compare(corpus, &MetricId::ALL, &p[0], &p[1]);
        for row in &r.rows {
            check(row.preference.a + row.preference.b == corpus.len() as f64, || {
                format!("{name}/{}: {} + {} != {}", row.metric, row.preference.a, row.preference.b, corpus.len())
            })?;
            rows += 1;
        }
    }
    let (corpus, h) = demo();
    let parsers = strings(&["alpha", "beta"]);
    let table = ScoreTable::build(&corpus, &scorer(), &MetricId::ALL, &parsers).unwrap();
    let m = meta_eval_report(&corpus, &table, "alpha", "beta", &h, 1000, 0).map_err(|e| e.to_string())?;
    let find = |n: &str| m.rows.iter().find(|r| r.name == n);
    let hum = find("HUM").ok_or("no HUM row")?;
    let rand = find("RAND").ok_or("no RAND row")?;
    check(hum.pairwise_accuracy.value == 1.0, || "HUM PA is not 1.0".into())?;
    check(
        rand.pairwise_accuracy.value == 0.5 && rand.acceptability_delta.value == 0.0,
        || "RAND row is not 0.5 / 0.0".into(),
    )?;
    Ok(format!("{rows} metric rows over {} compare runs sum to n; HUM 1.0, RAND 0.5 / 0.0", runs.len()))
}

fn rank_invariance() -> Outcome {
    let (corpus, h) = demo();
    let parsers = strings(&["alpha", "beta"]);
    let table = ScoreTable::build(&corpus, &scorer(), &MetricId::ALL, &parsers).unwrap();
    let exp = table.map_similarities(f64::exp);
    let c1 = compare_report(&table, "alpha", "beta", Aggregate::Macro, TiesMode::Split, false).unwrap();
    let c2 = compare_report(&exp, "alpha", "beta", Aggregate::Macro, TiesMode::Split, false).unwrap();
    for (x, y) in c1.rows.iter().zip(&c2.rows) {
        check(x.preference == y.preference && x.test == y.test, || {
            format!("{}: preference counts changed", x.metric)
        })?;
    }
    let m1 = meta_eval_report(&corpus, &table, "alpha", "beta", &h, 1000, 3).unwrap();
    let m2 = meta_eval_report(&corpus, &exp, "alpha", "beta", &h, 1000, 3).unwrap();
    check(m1 == m2, || "PA or acceptability delta changed".into())?;
    let s1 = correlation_report(&table).unwrap();
    let s2 = correlation_report(&exp).unwrap();
    check(s1 == s2, || "Spearman matrix changed".into())?;
    Ok(format!(
        "{} metrics: preference counts, PA, acceptability delta (with intervals) and Spearman identical under exp",
        table.metrics().len()
    ))
}

/// Mean and standard error of `f` over `n` draws.
fn monte_carlo(n: usize, mut f: impl FnMut() -> f64) -> (f64, f64) {
    let mut sum = 0.0;
    let mut sq = 0.0;
    for _ in 0..n {
        let x = f();
        sum += x;
        sq += x * x;
    }
    let mean = sum / n as f64;
    let var = (sq / n as f64 - mean * mean) * n as f64 / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

fn expected_distance() -> Outcome {
    // Determinism of full score tables.
    let shape = GraphShape {
        min_nodes: 2,
        max_nodes: 9,
        oov: 0.3,
        ..GraphShape::default()
    };
    let items = synthetic_corpus(99, 50, &shape, 0.3, 0.3);
    let corpus = synth_corpus(&items);
    let parsers = strings(&["a", "b"]);
    let run = || {
        let t = ScoreTable::build(&corpus, &scorer(), &[MetricId::WwlkK3e2n], &parsers).unwrap();
        let bits: Vec<u64> = parsers
            .iter()
            .flat_map(|p| t.similarities(MetricId::WwlkK3e2n, p))
            .map(f64::to_bits)
            .collect();
        bits
    };
    let first = run();
    check(first == run(), || "two runs differ".into())?;
    let store = EmbeddingStore::fallback();
    let oov_labels = corpus
        .items()
        .iter()
        .flat_map(|i| i.gold.nodes().iter().map(|n| n.concept.clone()))
        .filter(|c| store.lookup(c).is_none())
        .count();
    check(oov_labels > 0, || "fixture has no OOV concepts".into())?;

    // Token-level closed form against sampling.
    const SAMPLES: usize = 100_000;
    let sigma = store.oov_variance().sqrt();
    let normal = Normal::new(0.0, sigma).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let dim = store.dimension();
    let mut worst_z: f64 = 0.0;
    let mut cases = 0;
    for (a, b) in [("boy", "zorblat"), ("zorblat", "frangle")] {
        let closed = store.expected_euclidean_distance(a, b).value;
        let (mean, se) = monte_carlo(SAMPLES, || {
            let x: Vec<f64> = match store.lookup(a) {
                Some(v) => v.to_vec(),
                None => (0..dim).map(|_| normal.sample(&mut rng)).collect(),
            };
            let y: Vec<f64> = (0..dim).map(|_| normal.sample(&mut rng)).collect();
            x.iter().zip(&y).map(|(p, q)| (p - q) * (p - q)).sum::<f64>()
        });
        let z = (closed * closed - mean).abs() / se;
        worst_z = worst_z.max(z);
        cases += 1;
        check(z <= 3.0, || format!("{a}/{b}: closed {closed:.5}^2 vs sampled {mean:.5} (z = {z:.2})"))?;
    }

    // Contextualized node distances after the edge-to-node rewrite.
    let table: HashMap<String, Vec<f64>> = [
        ("see", vec![1.0, 0.0, 0.0, 0.0]),
        ("cat", vec![0.0, 1.0, 0.0, 0.0]),
        ("arg0", vec![0.0, 0.0, 1.0, 0.0]),
        ("arg1", vec![0.0, 0.0, 0.0, 1.0]),
    ]
    .into_iter()
    .map(|(k, v)| (k.to_string(), v))
    .collect();
    let base = EmbeddingStore::from_table(table.clone()).unwrap();
    let g1 = parse_penman("(s / see-01 :ARG0 (z / zorblat) :ARG1 (c / cat))").unwrap();
    let g2 = parse_penman("(s / see-01 :ARG0 (f / frangle) :ARG1 (z / zorblat))").unwrap();
    let opts = WwlkOptions {
        iterations: 3,
        edge_to_node: true,
        uniform_weight: Some(1.0),
    };
    let closed = wwlk_cost_matrix(&g1, &g2, &base, &opts);
    let normal = Normal::new(0.0, base.oov_variance().sqrt()).unwrap();
    let (rows, cols) = (closed.len(), closed[0].len());
    let mut sum = vec![vec![0.0; cols]; rows];
    let mut sq = vec![vec![0.0; cols]; rows];
    for _ in 0..SAMPLES {
        let mut t = table.clone();
        for key in ["zorblat", "frangle"] {
            t.insert(key.into(), (0..4).map(|_| normal.sample(&mut rng)).collect());
        }
        let sampled = EmbeddingStore::from_table(t).unwrap();
        let c = wwlk_cost_matrix(&g1, &g2, &sampled, &opts);
        for i in 0..rows {
            for j in 0..cols {
                let d2 = c[i][j] * c[i][j];
                sum[i][j] += d2;
                sq[i][j] += d2 * d2;
            }
        }
    }
    let n = SAMPLES as f64;
    for i in 0..rows {
        for j in 0..cols {
            let mean = sum[i][j] / n;
            let var = (sq[i][j] / n - mean * mean) * n / (n - 1.0);
            let se = (var / n).sqrt();
            let target = closed[i][j] * closed[i][j];
            if se == 0.0 {
                check((target - mean).abs() < 1e-9, || format!("cell ({i},{j}) deterministic mismatch"))?;
                continue;
            }
            let z = (target - mean).abs() / se;
            worst_z = worst_z.max(z);
            cases += 1;
            check(z <= 3.0, || format!("cell ({i},{j}): closed {target:.5} vs sampled {mean:.5} (z = {z:.2})"))?;
        }
    }
    Ok(format!(
        "50-item tables identical across runs ({oov_labels} OOV gold concepts); {cases} closed-form distances within {worst_z:.2} SE of 1e5-sample estimates"
    ))
}

fn bootstrap_calibration() -> Outcome {
    let n = 200;
    let agree = 140;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut data: Vec<(f64, i8)> = (0..n)
        .map(|i| {
            let h: i8 = if rng.random_bool(0.5) { 1 } else { -1 };
            let mag = rng.random_range(0.01..1.0);
            let d = if i < agree { mag * h as f64 } else { -mag * h as f64 };
            (d, h)
        })
        .collect();
    data.shuffle(&mut rng);
    let stat = |s: &[(f64, i8)]| {
        let (d, h): (Vec<f64>, Vec<i8>) = s.iter().copied().unzip();
        pairwise_accuracy(&d, &h).ok()
    };
    let pa = stat(&data).unwrap();
    let (lo, hi) = bootstrap_ci(&data, stat, 1000, 0.95, 2024).ok_or("no interval")?;
    let half = (hi - lo) / 2.0;
    let normal = 1.96 * (0.7f64 * 0.3 / n as f64).sqrt();
    check(!(lo..=hi).contains(&0.5), || format!("interval ({lo:.4}, {hi:.4}) contains 0.5"))?;
    check((0.05..=0.09).contains(&half), || format!("half-width {half:.4}"))?;
    Ok(format!(
        "PA {pa:.3}, 95% CI ({lo:.4}, {hi:.4}), half-width {half:.4} vs normal approximation {normal:.4}"
    ))
}

fn throughput() -> Outcome {
    let shape = GraphShape {
        min_nodes: 4,
        max_nodes: 24,
        reentrancy: 0.1,
        attribute: 0.2,
        oov: 0.1,
    };
    let items = synthetic_corpus(10, 200, &shape, 0.25, 0.25);
    let gold: Vec<AmrEntry> = items.iter().map(|i| i.gold.clone()).collect();
    let a: Vec<AmrEntry> = items.iter().map(|i| i.a.clone()).collect();
    let corpus = EvalCorpus::align(gold, vec![("a".into(), a)]).unwrap().0;
    let scorer = Scorer::new(MetricConfig::default(), Arc::new(EmbeddingStore::fallback()));
    let start = Instant::now();
    let table = ScoreTable::build(&corpus, &scorer, &MetricId::ALL, &strings(&["a"])).unwrap();
    let elapsed = start.elapsed();
    let cells: usize = MetricId::ALL.iter().map(|&m| table.scores(m, "a").len()).sum();
    check(elapsed.as_secs_f64() < 60.0, || format!("took {elapsed:?}"))?;
    Ok(format!("200 pairs x 9 metrics ({cells} scores) in {elapsed:.2?}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("look-over reproduction", look_over),
        ("identity suite", identity_suite),
        ("alignment oracle", alignment_oracle),
        ("transport oracle", transport_oracle),
        ("micro/macro divergence", micro_macro),
        ("statistics conservation", conservation),
        ("rank invariance", rank_invariance),
        ("expected-distance determinism", expected_distance),
        ("bootstrap calibration", bootstrap_calibration),
        ("desk-scale throughput", throughput),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("acceptance {:>2} PASS  {name}: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("acceptance {:>2} FAIL  {name}: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
