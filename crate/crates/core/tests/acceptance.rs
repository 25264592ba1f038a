//! Acceptance criteria 1-10. Every criterion prints one PASS/FAIL line; the
//! test fails if any criterion does.
//!
//! Run with `cargo test -p dimdraw-core --test acceptance -- --nocapture`.

mod common;

use std::time::{Duration, Instant};

use common::*;
use dimdraw::engine::{compute_coordinates, weak_dominance_stats, GridDrawing};
use dimdraw::graph::UGraph;
use dimdraw::oct::cnf::encode_oct;
use dimdraw::oct::{min_oct_exact, OctError, OctMethod, OctResult, Strategy};
use dimdraw::order::{boolean_lattice, grid, standard_example, OrderRelation};
use dimdraw::orientation::{compute_conjugate_order, realizer_from_conjugate};
use dimdraw::render::{self, CanvasSpec};
use dimdraw::tig::{build_tig, incompatible, IncPair};
use rand::Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Every drawing produced here, for the invariant sweeps of criteria 6 and 7.
#[derive(Default)]
struct Runs {
    drawings: Vec<(OrderRelation, GridDrawing)>,
}

impl Runs {
    fn draw(&mut self, o: &OrderRelation, strategy: &mut Strategy) -> GridDrawing {
        let d = compute_coordinates(o, strategy).expect("pipeline run");
        self.drawings.push((o.clone(), d.clone()));
        d
    }
}

fn criterion_1(runs: &mut Runs) -> Outcome {
    let o = standard_example(3);
    let start = Instant::now();
    let d = runs.draw(&o, &mut Strategy::default());
    let elapsed = start.elapsed();
    let t = &d.extension;
    let matching = t.pairs.iter().all(|(a, b)| {
        let (la, lb) = (o.label(a), o.label(b));
        la.starts_with('a') && lb.starts_with('b') && la[1..] == lb[1..]
    });
    let dim2 = oracle_two_dimensional(&strict_matrix(&t.extended));
    outcome(
        t.pairs.len() == 1 && matching && t.passes == 1 && dim2 && elapsed < Duration::from_secs(1),
        format!(
            "|C|={} C={:?} passes={} dim2={dim2} time={:.1}ms",
            t.pairs.len(),
            t.pairs.iter().map(|(a, b)| (o.label(a), o.label(b))).collect::<Vec<_>>(),
            t.passes,
            elapsed.as_secs_f64() * 1e3
        ),
    )
}

fn criterion_2() -> Outcome {
    let mut r = rng(2);
    let mut bad = 0;
    for _ in 0..200 {
        let n = r.gen_range(2..=40);
        let k = r.gen_range(1..=8);
        let p = r.gen_range(0.0..0.5);
        let g = random_graph(&mut r, n, p);
        let m = g.edge_count();
        let cnf = encode_oct(&g, k);
        let vars = (n - 1) * (k + 3) + 3;
        let clauses = 2 * m + 2 * n * k + 2 * n - 3 * k - 1;
        if cnf.num_vars() != vars || cnf.num_clauses() != clauses {
            bad += 1;
        }
    }
    outcome(bad == 0, format!("200 instances, {bad} mismatches"))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let mut r = rng(3);
    let mut graphs: Vec<UGraph> = (0..500)
        .map(|_| {
            let n = r.gen_range(1..=12);
            let p = r.gen_range(0.1..0.9);
            random_graph(&mut r, n, p)
        })
        .collect();
    graphs.push(build_tig(&standard_example(3)).graph().clone());
    graphs.push(build_tig(&boolean_lattice(3)).graph().clone());
    let mut bad = 0;
    for g in &graphs {
        let sat = min_oct_exact(g, Default::default(), &Default::default()).unwrap();
        if sat.len() != oracle_min_oct(g) || !sat.optimal {
            bad += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        bad == 0 && elapsed < Duration::from_secs(300),
        format!(
            "{} graphs, {bad} mismatches, {:.1}s",
            graphs.len(),
            elapsed.as_secs_f64()
        ),
    )
}

/// Random orders with up to six elements plus every naturally labelled
/// order on six elements, so that three-dimensional inputs are present.
fn small_order_suite() -> (Vec<OrderRelation>, usize) {
    let mut suite = order_suite(4, 1200, 6);
    let random = suite.len();
    suite.extend(all_naturally_labelled_orders(6));
    (suite, random)
}

fn criterion_4(suite: &[OrderRelation], random: usize) -> Outcome {
    let mut bad = 0;
    let mut two_dim = 0;
    for o in suite {
        let bip = build_tig(o).bipartite_check(&[]).is_bipartite();
        let conj = compute_conjugate_order(o).is_some();
        let brute = oracle_two_dimensional(&strict_matrix(o));
        if !(bip == conj && conj == brute) {
            bad += 1;
        }
        two_dim += usize::from(brute);
    }
    outcome(
        bad == 0 && random >= 1000 && two_dim < suite.len(),
        format!(
            "{} orders ({random} random), {} of dimension three, {bad} mismatches",
            suite.len(),
            suite.len() - two_dim
        ),
    )
}

fn criterion_5(suite: &[OrderRelation]) -> Outcome {
    let mut checked = 0usize;
    let mut bad = 0;
    for o in suite {
        let inc = o.incomparable_pairs().to_vec();
        for &p in &inc {
            for &q in &inc {
                let lemma = incompatible(IncPair::new(p.0, p.1), IncPair::new(q.0, q.1), o).unwrap();
                if lemma != oracle_incompatible(o, p, q) {
                    bad += 1;
                }
                checked += 1;
            }
        }
    }
    outcome(bad == 0, format!("{checked} pair combinations, {bad} mismatches"))
}

fn criterion_8(runs: &mut Runs) -> Outcome {
    let mut notes = Vec::new();
    let mut pass = true;
    let mut two_dim: Vec<(String, OrderRelation)> = Vec::new();
    for m in 1..=5 {
        for n in 1..=5 {
            two_dim.push((format!("grid({m},{n})"), grid(m, n)));
        }
    }
    two_dim.push(("B2".into(), boolean_lattice(2)));
    for (name, o) in &two_dim {
        let d = runs.draw(o, &mut Strategy::default());
        let false_comp = weak_dominance_stats(&d, o).false_comparabilities;
        if !d.extension.pairs.is_empty() || false_comp != 0 {
            pass = false;
            notes.push(format!("{name}: |C|={} false={false_comp}", d.extension.pairs.len()));
        }
    }
    let b3 = boolean_lattice(3);
    let d3 = runs.draw(&b3, &mut Strategy::default());
    let min3 = oracle_min_two_dim_extension(&b3, 9);
    if min3 != Some(d3.extension.pairs.len()) {
        pass = false;
    }
    notes.push(format!("B3 |C|={} brute={:?}", d3.extension.pairs.len(), min3));

    let b4 = boolean_lattice(4);
    let d4 = runs.draw(&b4, &mut Strategy::default());
    let ext = &d4.extension.extended;
    let realizer_ok = realizer_from_conjugate(ext, &d4.extension.conjugate)
        .map(|(l1, l2)| {
            (0..ext.len()).all(|a| {
                (0..ext.len()).all(|b| (l1.order().leq(a, b) && l2.order().leq(a, b)) == ext.leq(a, b))
            })
        })
        .unwrap_or(false);
    let valid = extension_violations(&d4.extension, &b4).is_empty() && realizer_ok;
    pass &= valid;
    notes.push(format!(
        "B4 |C|={} passes={} valid={valid}",
        d4.extension.pairs.len(),
        d4.extension.passes
    ));
    outcome(pass, format!("{} two-dimensional inputs; {}", two_dim.len(), notes.join("; ")))
}

fn criterion_9(runs: &mut Runs) -> Outcome {
    let (o, first) = multi_pass_order();
    let scripted = tig_indices(&o, &first);
    let mut calls = 0;
    let mut script = |g: &UGraph| -> Result<OctResult, OctError> {
        calls += 1;
        if calls == 1 {
            Ok(OctResult {
                removed: scripted.clone(),
                method: OctMethod::Scripted,
                optimal: false,
                stats: Default::default(),
            })
        } else {
            Strategy::default().solve(g)
        }
    };
    let d = match compute_coordinates(&o, &mut script) {
        Ok(d) => d,
        Err(e) => return outcome(false, format!("pipeline failed: {e}")),
    };
    runs.drawings.push((o.clone(), d.clone()));
    let after_first: dimdraw::PairSet = first.iter().map(|&(a, b)| (b, a)).collect();
    let first_pass_dim3 = !oracle_two_dimensional(&strict_matrix(&o.with_pairs(&after_first).unwrap()));
    let t = &d.extension;
    let valid = extension_violations(t, &o).is_empty() && compute_conjugate_order(&t.extended).is_some();
    outcome(
        t.passes >= 2 && first_pass_dim3 && valid,
        format!(
            "passes={} |C|={} first pass leaves dim>2: {first_pass_dim3}, final extension valid: {valid}",
            t.passes,
            t.pairs.len()
        ),
    )
}

fn sweep_runs(runs: &mut Runs) {
    let strategies = [
        Strategy::default(),
        Strategy::Greedy,
        Strategy::Anneal {
            seed: 6,
            params: Default::default(),
        },
        Strategy::Genetic {
            seed: 6,
            params: Default::default(),
        },
    ];
    for o in order_suite(6, 120, 8) {
        for s in &strategies {
            runs.draw(&o, &mut s.clone());
        }
    }
    runs.draw(&standard_example(4), &mut Strategy::default());
}

fn criterion_6(runs: &Runs) -> Outcome {
    let bad = runs
        .drawings
        .iter()
        .filter(|(o, d)| !extension_violations(&d.extension, o).is_empty())
        .count();
    outcome(bad == 0, format!("{} runs, {bad} violations", runs.drawings.len()))
}

fn criterion_7(runs: &Runs) -> Outcome {
    let mut bad = 0;
    let mut perturbed = 0;
    for (o, d) in &runs.drawings {
        let fixed = match render::postprocess(d) {
            Ok(f) => f,
            Err(_) => {
                bad += 1;
                continue;
            }
        };
        perturbed += usize::from(fixed.plane != d.plane);
        if !dominance_violations(d, o).is_empty() || !dominance_violations(&fixed, o).is_empty() {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!(
            "{} drawings ({perturbed} perturbed), {bad} violations",
            runs.drawings.len()
        ),
    )
}

fn criterion_10() -> Outcome {
    let configs = [
        Strategy::default(),
        Strategy::Anneal {
            seed: 10,
            params: Default::default(),
        },
        Strategy::Genetic {
            seed: 10,
            params: Default::default(),
        },
        Strategy::Portfolio {
            seed: 10,
            par: Default::default(),
        },
    ];
    let inputs = [standard_example(4), boolean_lattice(4), multi_pass_order().0];
    let render_all = |o: &OrderRelation, s: &Strategy| {
        let d = render::postprocess(&compute_coordinates(o, &mut s.clone()).unwrap()).unwrap();
        (render::emit_svg(&d, &CanvasSpec::default()).unwrap(), render::emit_json(&d))
    };
    let mut bad = 0;
    let mut total = 0;
    for o in &inputs {
        for s in &configs {
            total += 1;
            if render_all(o, s) != render_all(o, s) {
                bad += 1;
            }
        }
    }
    outcome(bad == 0, format!("{total} configurations rendered twice, {bad} differ"))
}

#[test]
fn acceptance() {
    let mut runs = Runs::default();
    let (suite, random) = small_order_suite();
    let mut results = vec![
        (1, "S3 end-to-end", criterion_1(&mut runs)),
        (2, "CNF size identities", criterion_2()),
        (3, "exact OCT against brute force", criterion_3()),
        (4, "bipartite tig iff two-dimensional", criterion_4(&suite, random)),
        (5, "incompatibility by cycle detection", criterion_5(&suite)),
    ];
    let c8 = criterion_8(&mut runs);
    let c9 = criterion_9(&mut runs);
    sweep_runs(&mut runs);
    results.push((6, "extensions are valid orders", criterion_6(&runs)));
    results.push((7, "dominance and upward edges", criterion_7(&runs)));
    results.push((8, "two-dimensional fast path", c8));
    results.push((9, "multi-pass regression", c9));
    results.push((10, "determinism", criterion_10()));
    results.sort_by_key(|r| r.0);

    for (id, name, o) in &results {
        println!(
            "criterion {id:>2} [{}] {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    let failed: Vec<_> = results.iter().filter(|r| !r.2.pass).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
