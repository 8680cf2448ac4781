//! Acceptance suite: one pass/fail line per criterion.
//!
//! Runs without the libtest harness so each criterion reports on its own
//! line; the process fails if any criterion fails or exceeds its time cap.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::{Duration, Instant};

use rand::Rng;

use causal_bandits::admg::{catalog, Admg, AdmgBuilder, NodeId, NodeSet};
use causal_bandits::estimators::{
    build_strata, compute_m_prime, compute_n_of_q, default_threshold, estimate_mu_bayes,
    slice_estimates, update_mu0, FrequencyProfile, ObsLog, ObservationalIndex,
};
use causal_bandits::harness::{run_sweep, ExperimentConfig, RegretReport};
use causal_bandits::policies::{run_policy, Phase, PolicyConfig, PolicyKind, PolicyTrace};
use causal_bandits::scm::{
    make_parallel_model, make_random_model, optimal_value, Arm, ArmSet, CostSet, ParallelParams,
    Scm,
};
use causal_bandits::seed;

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 8] = [
        (
            1,
            "graph algebra exactness",
            Duration::from_secs(5),
            graph_algebra,
        ),
        (
            2,
            "oracle exactness",
            Duration::from_secs(10),
            oracle_exactness,
        ),
        (
            3,
            "estimator unbiasedness",
            Duration::from_secs(120),
            unbiasedness,
        ),
        (
            4,
            "bayes-net accuracy",
            Duration::from_secs(60),
            bayes_accuracy,
        ),
        (
            5,
            "threshold inequalities",
            Duration::from_secs(5),
            threshold_inequalities,
        ),
        (
            6,
            "simple-regret reproduction",
            Duration::from_secs(600),
            simple_regret,
        ),
        (
            7,
            "cumulative-regret reproduction",
            Duration::from_secs(900),
            cumulative_regret,
        ),
        (
            8,
            "protocol invariants",
            Duration::from_secs(300),
            protocol_invariants,
        ),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (n, name, cap, run) in criteria {
        if !filter.is_empty()
            && !filter
                .iter()
                .any(|f| name.contains(f.as_str()) || *f == n.to_string())
        {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let pass = outcome.pass && elapsed <= cap;
        failed += usize::from(!pass);
        println!(
            "criterion {n} ({name}): {} [{}; {:.1}s of {}s]",
            if pass { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed.as_secs_f64(),
            cap.as_secs()
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// Criterion 1

fn random_admg<R: Rng>(rng: &mut R, max_nodes: usize) -> Admg {
    let n = rng.gen_range(3..=max_nodes);
    let names: Vec<String> = (0..n - 1)
        .map(|k| format!("V{k}"))
        .chain(["Y".into()])
        .collect();
    let mut b = AdmgBuilder::new().nodes(names.iter().map(String::as_str));
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(0.35) {
                b = b.directed(names[i].as_str(), names[j].as_str());
            }
        }
    }
    for j in 1..n {
        for i in 0..j {
            if rng.gen_bool(0.2) {
                b = b.bidirected(names[i].as_str(), names[j].as_str());
            }
        }
    }
    b.reward("Y").build().expect("forward edges are acyclic")
}

/// Edge of the skeleton: `(other end, arrowhead at this end, arrowhead at
/// the other end)`.
fn incident(g: &Admg, v: NodeId) -> Vec<(NodeId, bool, bool)> {
    let mut out = Vec::new();
    for (a, b) in g.directed_edges() {
        if a == v {
            out.push((b, false, true));
        }
        if b == v {
            out.push((a, true, false));
        }
    }
    for (a, b) in g.bidirected_edges() {
        if a == v {
            out.push((b, true, true));
        }
        if b == v {
            out.push((a, true, true));
        }
    }
    out
}

/// Enumerates every simple path from `i` to the reward that starts with an
/// arrowhead at `i`, and reports whether one has no collider.
fn brute_force_backdoor(g: &Admg, i: NodeId) -> bool {
    fn walk(g: &Admg, at: NodeId, head_here: bool, seen: &mut Vec<NodeId>) -> bool {
        if at == g.reward() {
            return true;
        }
        for (next, head_at, head_next) in incident(g, at) {
            if seen.contains(&next) || (head_here && head_at) {
                continue;
            }
            seen.push(next);
            let open = walk(g, next, head_next, seen);
            seen.pop();
            if open {
                return true;
            }
        }
        false
    }
    incident(g, i)
        .into_iter()
        .any(|(next, head_at_i, head_next)| {
            head_at_i && walk(g, next, head_next, &mut vec![i, next])
        })
}

type EdgeSet = BTreeSet<(String, String)>;

fn named_edges(g: &Admg) -> (EdgeSet, EdgeSet) {
    let name = |(a, b): (NodeId, NodeId)| (g.name(a).to_string(), g.name(b).to_string());
    (
        g.directed_edges().into_iter().map(name).collect(),
        g.bidirected_edges().into_iter().map(name).collect(),
    )
}

fn graph_algebra() -> Outcome {
    let g = catalog::confounded_example();
    let components: BTreeSet<String> = g.c_components().iter().map(|c| g.format_set(c)).collect();
    let expected: BTreeSet<String> = ["{X1, X2, X3, X5}", "{X4}"].map(String::from).into();
    if components != expected {
        return Outcome::check(false, format!("c-components {components:?}"));
    }

    let keep_ends = |g: &Admg| -> NodeSet { [g.node("A").unwrap(), g.node("C").unwrap()].into() };
    let chain = AdmgBuilder::new()
        .nodes(["A", "B", "C"])
        .directed("A", "B")
        .directed("B", "C")
        .reward("C")
        .build()
        .unwrap();
    let (dir, bi) = named_edges(&chain.latent_project(&keep_ends(&chain)).unwrap());
    if dir != [("A".to_string(), "C".to_string())].into() || !bi.is_empty() {
        return Outcome::check(false, format!("chain projection {dir:?} {bi:?}"));
    }
    let fork = AdmgBuilder::new()
        .nodes(["B", "A", "C"])
        .directed("B", "A")
        .directed("B", "C")
        .reward("C")
        .build()
        .unwrap();
    let (dir, bi) = named_edges(&fork.latent_project(&keep_ends(&fork)).unwrap());
    if !dir.is_empty() || bi.len() != 1 {
        return Outcome::check(false, format!("fork projection {dir:?} {bi:?}"));
    }

    let mut rng = seed::from_seed(1001);
    let mut disagreements = 0;
    let mut checked = 0;
    for _ in 0..200 {
        let g = random_admg(&mut rng, 7);
        for &i in g.intervenable() {
            checked += 1;
            if g.has_unblocked_backdoor(i).unwrap() != brute_force_backdoor(&g, i) {
                disagreements += 1;
            }
        }
    }
    Outcome::check(
        disagreements == 0,
        format!("confounded-example components and both projections exact; backdoor {disagreements} disagreements over {checked} nodes in 200 graphs"),
    )
}

// ---------------------------------------------------------------------------
// Criterion 2

fn brute_force_knapsack(means: &[f64], costs: &[usize], budget: usize) -> f64 {
    fn go(means: &[f64], costs: &[usize], k: usize, left: usize) -> f64 {
        if k == means.len() {
            return 0.0;
        }
        (0..=left / costs[k])
            .map(|n| n as f64 * means[k] + go(means, costs, k + 1, left - n * costs[k]))
            .fold(f64::NEG_INFINITY, f64::max)
    }
    go(means, costs, 0, budget)
}

fn oracle_exactness() -> Outcome {
    let scm = make_parallel_model(&ParallelParams::standard(50)).unwrap();
    let arms = ArmSet::for_graph(scm.graph());
    let means = scm.oracle_means(&arms).unwrap();
    let x1 = arms
        .index_of(Arm::intervene(scm.graph().node("X1").unwrap(), 1))
        .unwrap();
    let (mu0, mu1) = (means[0], means[x1]);
    if (mu0 - 0.5).abs() > 1e-12 || (mu1 - 0.8).abs() > 1e-12 {
        return Outcome::check(false, format!("mu0 = {mu0}, mu(X1=1) = {mu1}"));
    }
    let mut rng = seed::from_seed(2002);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let k = rng.gen_range(2..=5);
        let means: Vec<f64> = (0..k).map(|_| rng.gen::<f64>()).collect();
        // The first arm plays the observational arm, which always costs 1.
        let costs: Vec<usize> = (0..k)
            .map(|a| if a == 0 { 1 } else { rng.gen_range(1..=6) })
            .collect();
        let set = CostSet::explicit(costs.iter().map(|&c| c as f64).collect()).unwrap();
        for budget in 0..=20 {
            let dp = optimal_value(&means, &set, budget as f64).unwrap();
            worst = worst.max((dp - brute_force_knapsack(&means, &costs, budget)).abs());
        }
    }
    Outcome::check(
        worst < 1e-9,
        format!("mu0 = {mu0}, mu(X1=1) = {mu1}; knapsack max deviation {worst:.1e} over 50 instances x 21 budgets"),
    )
}

// ---------------------------------------------------------------------------
// Criterion 3

fn unbiasedness() -> Outcome {
    const REPLICATIONS: usize = 500;
    const LOG_SIZE: usize = 2000;
    let g = catalog::front_door();
    let scm = make_random_model(&g, &mut seed::from_seed(3003)).unwrap();
    let arms = ArmSet::for_graph(&g);
    let oracle = scm.oracle_means(&arms).unwrap();
    let mut estimates = vec![Vec::with_capacity(REPLICATIONS); arms.len()];
    for rep in 0..REPLICATIONS as u64 {
        let log = ObsLog::observe(&scm, arms.len(), LOG_SIZE as u64, &mut seed::from_seed(rep));
        estimates[0].push(update_mu0(&log).unwrap());
        let index = ObservationalIndex::build(&log, &g, seed::mix64(rep));
        for a in arms.interventional() {
            let Arm::Intervene { node, value } = arms.get(a) else {
                unreachable!()
            };
            let strata = build_strata(&index, &g, node, value).unwrap();
            let ys = slice_estimates(&g, &index, &strata, &log).unwrap();
            if ys.is_empty() {
                return Outcome::check(
                    false,
                    format!("arm {a} has no slices in replication {rep}"),
                );
            }
            estimates[a].push(ys.iter().sum::<f64>() / ys.len() as f64);
        }
    }
    let mut worst = 0.0f64;
    for (a, xs) in estimates.iter().enumerate() {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        worst = worst.max((mean - oracle[a]).abs() / se);
    }
    Outcome::check(
        worst <= 4.0,
        format!("max |mean - mu| = {worst:.2} standard errors over {} arms, {REPLICATIONS} logs of {LOG_SIZE}", arms.len()),
    )
}

// ---------------------------------------------------------------------------
// Criterion 4

fn bayes_accuracy() -> Outcome {
    let scm = make_parallel_model(&ParallelParams::standard(3)).unwrap();
    let g = scm.graph().clone();
    let arms = ArmSet::for_graph(&g);
    let means = scm.oracle_means(&arms).unwrap();
    let profile = FrequencyProfile::exact(&scm, &arms, true).unwrap();
    let frequent: Vec<usize> = profile
        .entries
        .iter()
        .filter(|e| e.q >= 0.1)
        .map(|e| e.arm)
        .collect();
    let threshold = default_threshold(10_000);
    let mut worst = 0.0f64;
    for s in 0..20 {
        let log = ObsLog::observe(&scm, arms.len(), 10_000, &mut seed::from_seed(4000 + s));
        for &a in &frequent {
            let Arm::Intervene { node, value } = arms.get(a) else {
                unreachable!()
            };
            let mu = estimate_mu_bayes(&log, &g, node, value, threshold).unwrap();
            worst = worst.max((mu - means[a]).abs());
        }
    }
    Outcome::check(
        worst <= 0.05,
        format!(
            "max error {worst:.4} over {} arms with q >= 0.1 and 20 seeds",
            frequent.len()
        ),
    )
}

// ---------------------------------------------------------------------------
// Criterion 5

fn random_no_backdoor_model<R: Rng>(rng: &mut R) -> Scm {
    loop {
        let g = random_admg(rng, 6);
        if g.is_no_backdoor() && !g.has_bidirected_edges() {
            return make_random_model(&g, rng).unwrap();
        }
    }
}

fn threshold_inequalities() -> Outcome {
    let mut rng = seed::from_seed(5005);
    let mut dominance = 0;
    let mut bound = 0;
    for _ in 0..1000 {
        let scm = random_no_backdoor_model(&mut rng);
        let arms = ArmSet::for_graph(scm.graph());
        let q = FrequencyProfile::exact(&scm, &arms, true).unwrap();
        let q_new = FrequencyProfile::exact(&scm, &arms, false).unwrap();
        let costs = CostSet::random_from(&arms, &[1.0, 2.0, 3.0, 4.0, 5.0], &mut rng).unwrap();
        if compute_n_of_q(&q_new, &costs) > compute_n_of_q(&q, &costs) {
            dominance += 1;
        }
        for c in [2.0, 3.0, 5.0] {
            let uniform = CostSet::uniform(&arms, c).unwrap();
            if compute_n_of_q(&q, &uniform) as f64 > c * compute_m_prime(&q) as f64 {
                bound += 1;
            }
        }
    }
    Outcome::check(
        dominance == 0 && bound == 0,
        format!(
            "1000 profiles: {dominance} n(q_new) > n(q) violations, {bound} n > c m' violations"
        ),
    )
}

// ---------------------------------------------------------------------------
// Criteria 6 and 7

fn sweep(source: &str) -> RegretReport {
    let config = ExperimentConfig::parse(source, Path::new(".")).unwrap();
    run_sweep(&config, 0).unwrap()
}

fn series(report: &RegretReport, policy: &str) -> Vec<(f64, f64, f64)> {
    report
        .series(policy)
        .iter()
        .map(|c| (c.sweep_value, c.mean_regret, c.stderr))
        .collect()
}

fn simple_regret() -> Outcome {
    let report = sweep(
        r#"
name = "criterion-6"
trials = 100
seed = 6

[model]
kind = "parallel"
n = 7

[costs]
kind = "random"
choices = [2, 3, 4, 5]

[sweep]
budgets = [500, 1000, 2000, 3000]

[[policy]]
kind = "simple-budgeted"
"#,
    );
    let s = series(&report, "simple-budgeted");
    let monotone = s
        .windows(2)
        .all(|w| w[1].1 <= w[0].1 + 2.0 * (w[0].2 + w[1].2));
    let endpoint = s.last().unwrap().1;

    let paired = sweep(
        r#"
name = "criterion-6-gamma"
trials = 100
seed = 6

[model]
kind = "parallel"
n = 7

[costs]
kind = "uniform"
value = 4

[sweep]
budgets = [1500]

[[policy]]
kind = "simple-budgeted"

[[policy]]
kind = "gamma-nb"
"#,
    );
    let ours = paired.cell("simple-budgeted", 1500.0).unwrap().mean_regret;
    let gamma = paired.cell("gamma-nb", 1500.0).unwrap().mean_regret;
    let means: Vec<String> = s.iter().map(|p| format!("{:.4}", p.1)).collect();
    Outcome::check(
        monotone && endpoint <= 0.05 && ours <= gamma,
        format!(
            "means [{}] by budget, non-increasing within 2 se: {monotone}; B=1500 at c=4: {ours:.4} vs gamma-nb {gamma:.4}",
            means.join(", ")
        ),
    )
}

fn cumulative_regret() -> Outcome {
    let report = sweep(
        r#"
name = "criterion-7"
trials = 100
seed = 7

[model]
kind = "xor"
graph = "cumulative-n6"

[costs]
kind = "random"
choices = [2, 3]

[sweep]
budgets = [500, 1000, 1500, 2500]

[[policy]]
kind = "cumulative-ucb"

[[policy]]
kind = "budgeted-kube"
"#,
    );
    let ucb = series(&report, "cumulative-ucb");
    let kube = series(&report, "budgeted-kube");
    let ordered = ucb.iter().zip(&kube).all(|(u, k)| u.1 <= k.1);
    let first = ucb[1].1 - ucb[0].1;
    let last = ucb[3].1 - ucb[2].1;
    let pairs: Vec<String> = ucb
        .iter()
        .zip(&kube)
        .map(|(u, k)| format!("{}: {:.1}/{:.1}", u.0, u.1, k.1))
        .collect();
    Outcome::check(
        ordered && last < first,
        format!(
            "ucb/kube {}; increments first {first:.2}, last {last:.2}",
            pairs.join(", ")
        ),
    )
}

// ---------------------------------------------------------------------------
// Criterion 8

fn check_conservation(trace: &PolicyTrace, costs: &CostSet) -> Result<(), String> {
    let mut remaining = trace.budget;
    for r in &trace.rounds {
        if r.cost != costs.get(r.arm) {
            return Err(format!(
                "round {} charged {} for arm {}",
                r.t, r.cost, r.arm
            ));
        }
        remaining -= r.cost;
        if (r.remaining - remaining).abs() > 1e-9 || r.remaining < -1e-9 {
            return Err(format!(
                "round {} remaining {} vs {}",
                r.t, r.remaining, remaining
            ));
        }
    }
    if trace.spent() > trace.budget + 1e-9 {
        return Err("overspent".into());
    }
    Ok(())
}

fn check_two_phase(trace: &PolicyTrace, costs: &CostSet) -> Result<(), String> {
    let observe = (trace.budget / 2.0).floor() as usize;
    let rounds = &trace.rounds;
    if rounds.len() < observe
        || rounds[..observe]
            .iter()
            .any(|r| r.arm != 0 || r.phase != Phase::Observe)
    {
        return Err("observation phase is not the first floor(B/2) rounds".into());
    }
    if trace.chosen.is_none() {
        return Err("no arm chosen".into());
    }
    let rest = &rounds[observe..];
    if trace.infrequent.is_empty() {
        if rest.iter().any(|r| r.arm != 0 || r.phase != Phase::Observe) {
            return Err("empty exploration set but non-observational rounds".into());
        }
        if rounds.last().map_or(trace.budget, |r| r.remaining) >= 1.0 {
            return Err("observational budget left unspent".into());
        }
        return Ok(());
    }
    let explore: Vec<usize> = rest
        .iter()
        .filter(|r| r.phase == Phase::Explore)
        .map(|r| r.arm)
        .collect();
    let total: f64 = trace.infrequent.iter().map(|&a| costs.get(a)).sum();
    let cycles = (trace.budget / (2.0 * total)).floor() as usize;
    let expected: Vec<usize> = (0..cycles)
        .flat_map(|_| trace.infrequent.iter().copied())
        .collect();
    if explore != expected {
        return Err(format!(
            "explore pulls {} vs {} expected",
            explore.len(),
            expected.len()
        ));
    }
    if trace.spent_in(Phase::Explore) > trace.budget / 2.0 + 1e-9 {
        return Err("exploration phase overspent".into());
    }
    if rest.iter().any(|r| !trace.infrequent.contains(&r.arm)) {
        return Err("second phase pulled an arm outside the exploration set".into());
    }
    let left = rounds.last().map_or(trace.budget, |r| r.remaining);
    if trace.infrequent.iter().any(|&a| costs.get(a) <= left) {
        return Err("leftover budget could still buy a pull".into());
    }
    Ok(())
}

fn check_guards(trace: &PolicyTrace, costs: &CostSet, arms: usize) -> Result<(), String> {
    let min_cost = costs.min_interventional();
    let mut observations = 0;
    let mut budget = trace.budget;
    let mut guards = trace.guards.iter();
    for (k, r) in trace.rounds.iter().enumerate() {
        if k >= arms {
            let g = guards.next().ok_or("missing guard record")?;
            let forced =
                !(observations as f64 >= g.beta * g.beta * (g.t as f64).ln() && budget >= min_cost);
            if g.t != r.t || g.observations != observations || (g.budget - budget).abs() > 1e-9 {
                return Err(format!("guard at round {} does not match the trace", r.t));
            }
            if !(g.beta.is_finite() && g.beta > 0.0) || g.forced != forced || (forced && r.arm != 0)
            {
                return Err(format!("guard replay differs at round {}", r.t));
            }
        }
        observations += usize::from(r.arm == 0);
        budget = r.remaining;
    }
    if guards.next().is_some() {
        return Err("extra guard records".into());
    }
    if budget >= 1.0 {
        return Err("stopped with budget for an observation".into());
    }
    Ok(())
}

fn fuzz_config<R: Rng>(rng: &mut R) -> (Scm, PolicyConfig) {
    let g = if rng.gen_bool(0.3) {
        catalog::parallel(rng.gen_range(2..=5))
    } else {
        random_admg(rng, 6)
    };
    let scm = make_random_model(&g, rng).unwrap();
    let arms = ArmSet::for_graph(&g);
    let costs = if rng.gen_bool(0.3) {
        CostSet::uniform(&arms, rng.gen_range(1..=4) as f64).unwrap()
    } else {
        CostSet::random_from(&arms, &[1.0, 2.0, 3.0, 4.0, 5.0], rng).unwrap()
    };
    let floor = costs.as_slice().iter().sum::<f64>();
    let budget = (floor + rng.gen_range(0.0..250.0)).floor();
    let kind = PolicyKind::ALL[rng.gen_range(0..PolicyKind::ALL.len())];
    (scm, PolicyConfig::new(kind, budget, costs, rng.gen()))
}

fn protocol_invariants() -> Outcome {
    let mut rng = seed::from_seed(8008);
    let mut violations = Vec::new();
    let mut ran = 0;
    for case in 0..1000 {
        let (scm, config) = fuzz_config(&mut rng);
        let first = run_policy(&scm, &config);
        let second = run_policy(&scm, &config);
        if first != second {
            violations.push(format!(
                "case {case}: nondeterministic {}",
                config.kind.name()
            ));
            continue;
        }
        let Ok(trace) = first else { continue };
        ran += 1;
        let arms = ArmSet::for_graph(scm.graph()).len();
        let mut result = check_conservation(&trace, &config.costs);
        if result.is_ok() {
            result = match config.kind {
                PolicyKind::SimpleBudgeted | PolicyKind::SimpleNobackdoor | PolicyKind::GammaNb => {
                    check_two_phase(&trace, &config.costs)
                }
                PolicyKind::CumulativeUcb | PolicyKind::UniformCostCausalUcb => {
                    check_guards(&trace, &config.costs, arms)
                }
                PolicyKind::BudgetedKube | PolicyKind::SuccessiveRejects => Ok(()),
            };
        }
        if let Err(e) = result {
            violations.push(format!("case {case} ({}): {e}", config.kind.name()));
        }
    }
    Outcome::check(
        violations.is_empty() && ran >= 500,
        format!(
            "1000 configs, {ran} ran to completion, {} violations{}",
            violations.len(),
            violations
                .first()
                .map_or(String::new(), |v| format!(": {v}"))
        ),
    )
}
