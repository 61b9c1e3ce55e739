//! Acceptance criteria, one PASS/FAIL line each. Values are compared against
//! the brute-force oracles in `common`.

mod common;

use std::time::{Duration, Instant};

use approxcommute::approx::{certify, ruzsa_cover, CertMode};
use approxcommute::family::{build_example, check_predictions, ExampleParams};
use approxcommute::group::normal_subgroups;
use approxcommute::named;
use approxcommute::probability::commuting_probability;
use approxcommute::spec::{GroupSpec, ResolvedGroup};
use approxcommute::suite::{default_corpus, random_subset, run_suite, SuiteConfig};
use approxcommute::witness::{witness_theorem_1_1, witness_theorem_1_2, PipelineOptions};
use approxcommute::{Rational, Subset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:?}, limit {:?}", start.elapsed(), limit))
}

fn corpus(max_order: usize) -> Vec<ResolvedGroup> {
    default_corpus()
        .iter()
        .map(|spec| spec.resolve(500).expect("default corpus resolves"))
        .filter(|r| r.group.order() <= max_order)
        .collect()
}

fn exact_values() -> Outcome {
    let start = Instant::now();
    let cases = [
        ("S3", named::symmetric(3).unwrap(), Rational::new(1, 2)),
        ("D4", named::dihedral(4).unwrap(), Rational::new(5, 8)),
        ("Q8", named::dicyclic(2).unwrap(), Rational::new(5, 8)),
    ];
    for (name, g, expected) in &cases {
        let all = Subset::full(g);
        let pr = commuting_probability(&all, &all).map_err(|e| e.to_string())?;
        let oracle = common::pr(g, &common::all(g), &common::all(g));
        ensure(pr == *expected && oracle == *expected, || format!("{name}: got {pr}, oracle {oracle}"))?;
    }
    within(start, Duration::from_secs(1))?;
    Ok("pr(S3,S3)=1/2, pr(D4,D4)=pr(Q8,Q8)=5/8".into())
}

fn example_equalities() -> Outcome {
    let start = Instant::now();
    for (n, k, u) in [(2, 1, 1), (5, 2, 2), (6, 2, 3)] {
        let inst = build_example(ExampleParams::new(n, k, u).unwrap(), 2304).map_err(|e| e.to_string())?;
        let g = &inst.group;
        let (a, a0) = (inst.a.to_vec(), inst.a0.to_vec());
        let all = common::all(g);
        let z = 2 * u;
        let kz = k * z;
        let closed = (Rational::ratio(kz, n) + Rational::one()) / Rational::from(kz + 1);
        let pr_a = common::pr(g, &a, &all);
        ensure(pr_a == closed, || format!("({n},{k},{u}): pr(A,G) = {pr_a}, closed form {closed}"))?;
        ensure(a.len() == kz + 1, || format!("({n},{k},{u}): |A| = {}", a.len()))?;
        let h = common::closure(g, &a);
        ensure(h.len() == (1 << k) * z, || format!("({n},{k},{u}): |H| = {}", h.len()))?;
        for &x in a.iter().filter(|&&x| x != 0) {
            let c = common::class_under(g, x, &all).len();
            ensure(c == n, || format!("({n},{k},{u}): |a^G| = {c} for a = {x}"))?;
        }
        let pr_a0 = common::pr(g, &a0, &all);
        ensure(pr_a0 > Rational::ratio(1, k + 1), || format!("({n},{k},{u}): pr(A0,G) = {pr_a0}"))?;
        let bound = (Rational::ratio(1, n) + Rational::ratio(1, kz)) * Rational::from(k + 1);
        ensure(&pr_a / &pr_a0 < bound, || format!("({n},{k},{u}): ratio bound fails"))?;
        for c in check_predictions(&inst, 200_000).map_err(|e| e.to_string())? {
            ensure(c.holds, || format!("({n},{k},{u}): {c:?}"))?;
        }
    }
    within(start, Duration::from_secs(30))?;
    Ok("(2,1,1), (5,2,2), (6,2,3): closed forms, sizes, class sizes and ratio bounds".into())
}

fn certification() -> Outcome {
    for (n, k, u) in [(2, 1, 1), (3, 1, 1), (4, 2, 1), (5, 2, 2)] {
        let inst = build_example(ExampleParams::new(n, k, u).unwrap(), 2000).map_err(|e| e.to_string())?;
        let g = &inst.group;
        for (name, set) in [("A", &inst.a), ("A0", &inst.a0)] {
            let cert = certify(set, CertMode::Exact).map_err(|e| e.to_string())?;
            ensure(cert.k_cert <= k + 1, || format!("({n},{k},{u}) {name}: k_cert = {}", cert.k_cert))?;
            let sq = common::power(g, &set.to_vec(), 2);
            let ea = common::product(g, &cert.cover.to_vec(), &set.to_vec());
            ensure(common::is_subset(&sq, &ea), || format!("({n},{k},{u}) {name}: A² ⊄ EA"))?;
        }
    }
    let mut subgroups = 0;
    for r in corpus(60) {
        for h in common::all_subgroups(&r.group) {
            let set = Subset::from_ids(&r.group, h.iter().copied()).unwrap();
            for mode in [CertMode::Exact, CertMode::Greedy] {
                let cert = certify(&set, mode).map_err(|e| e.to_string())?;
                ensure(cert.k_cert == 1, || format!("{}: subgroup of order {} got k = {}", r.label, h.len(), cert.k_cert))?;
            }
            subgroups += 1;
        }
    }
    Ok(format!("example sets certified within k+1; {subgroups} subgroups certified with k=1"))
}

fn statement_suite() -> Outcome {
    let start = Instant::now();
    let config = SuiteConfig { order_cap: 500, jobs: Some(1), ..SuiteConfig::default() };
    let report = run_suite(&config).map_err(|e| e.to_string())?;
    ensure(report.statements.len() == 12, || format!("{} statements ran", report.statements.len()))?;
    for s in &report.statements {
        ensure(s.random >= 500, || format!("{}: only {} random instances", s.id, s.random))?;
        ensure(s.failures == 0, || format!("{}: {} failures, first {:?}", s.id, s.failures, s.failure_records.first()))?;
    }
    ensure(report.passed(), || format!("{} failures", report.failures))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("{} checks, 0 failures, {} corpus groups", report.total_checks, report.corpus.len()))
}

fn witness_pipelines() -> Outcome {
    let opts = PipelineOptions::default();
    let mut runs = 0;
    for r in corpus(500) {
        let g = &r.group;
        let mut targets = vec![Subset::full(g)];
        if let Some(ex) = &r.example {
            targets.push(ex.a.clone());
        }
        for a in targets {
            let label = &r.label;
            let ids = a.to_vec();
            let all = common::all(g);

            let w2 = witness_theorem_1_2(&a, None, &opts).map_err(|e| format!("{label} thm2: {e}"))?;
            ensure(w2.epsilon == common::pr(g, &ids, &ids), || format!("{label}: epsilon is not pr(A,A)"))?;
            let c = w2.c.to_vec();
            ensure(common::closure(g, &c) == c, || format!("{label}: C is not a subgroup"))?;
            let a2 = common::power(g, &ids, 2);
            let meet = common::intersection_len(&c, &a2);
            let k = Rational::from(w2.certificate.k_cert);
            ensure(Rational::from(4 * meet) >= &w2.epsilon * &w2.eta * Rational::from(ids.len()), || {
                format!("{label}: |C∩A²| below (εη/4)|A|")
            })?;
            let gamma = Rational::ratio(meet, ids.len());
            ensure(gamma == w2.gamma, || format!("{label}: gamma mismatch"))?;
            let cosets: std::collections::BTreeSet<Vec<usize>> =
                ids.iter().map(|&x| common::product(g, &[x], &c)).collect();
            ensure(cosets.len() == w2.coset_count, || format!("{label}: coset count mismatch"))?;
            ensure(Rational::from(cosets.len()) <= &k * &k / &gamma, || format!("{label}: coset count above γ⁻¹K²"))?;
            let c_prime = common::commutator_group(g, &c, &c);
            ensure(c_prime.len() == w2.c_prime_size, || format!("{label}: |C'| mismatch"))?;

            let w1 = witness_theorem_1_1(&a, None, &opts).map_err(|e| format!("{label} thm1: {e}"))?;
            ensure(w1.epsilon == common::pr(g, &ids, &all), || format!("{label}: epsilon is not pr(A,G)"))?;
            let t = w1.t.to_vec();
            ensure(common::is_normal(g, &t), || format!("{label}: T is not normal"))?;
            let gen_b = common::closure(g, &w1.extraction.b.to_vec());
            let comm = common::commutator_group(g, &t, &gen_b);
            ensure(comm.len() == w1.commutator_size, || format!("{label}: |[T,<B>]| mismatch"))?;
            let b = w1.extraction.b.to_vec();
            let gamma1 = Rational::ratio(common::intersection_len(&ids, &b), ids.len().max(b.len()));
            let bound = &w1.epsilon / &Rational::from(2 * w1.certificate.k_cert);
            ensure(gamma1 == w1.gamma && gamma1 >= bound, || format!("{label}: thm1 gamma {gamma1} vs {bound}"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} (group, A) pairs through both pipelines"))
}

fn oracle_equivalence() -> Outcome {
    let mut groups = 0;
    for r in corpus(200) {
        let lib: Vec<Vec<usize>> =
            normal_subgroups(&r.group, 64).map_err(|e| e.to_string())?.iter().map(|s| s.to_vec()).collect();
        let mut oracle: Vec<Vec<usize>> =
            common::all_subgroups(&r.group).into_iter().filter(|h| common::is_normal(&r.group, h)).collect();
        oracle.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
        ensure(lib == oracle, || format!("{}: {} normal subgroups vs oracle {}", r.label, lib.len(), oracle.len()))?;
        groups += 1;
    }
    let pool = corpus(500);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for i in 0..200 {
        let r = &pool[rng.random_range(0..pool.len())];
        let g = &r.group;
        let a = random_subset(g, &Rational::new(1, rng.random_range(1..=8)), &mut rng).unwrap();
        let y = random_subset(g, &Rational::new(1, rng.random_range(1..=16)), &mut rng).unwrap();
        let f = ruzsa_cover(&a, &y).map_err(|e| e.to_string())?.to_vec();
        let (av, yv) = (a.to_vec(), y.to_vec());
        let ay = common::product(g, &av, &yv).len();
        ensure(f.len() * yv.len() <= ay, || format!("ruzsa #{i} on {}: |F| too large", r.label))?;
        let y_inv: Vec<usize> = yv.iter().map(|&x| common::inverse(g, x)).collect();
        let reach = common::product(g, &common::product(g, &f, &yv), &y_inv);
        ensure(common::is_subset(&av, &reach), || format!("ruzsa #{i} on {}: A ⊄ FYY⁻¹", r.label))?;
    }
    Ok(format!("normal subgroups match on {groups} groups; 200 Ruzsa covers verified"))
}

fn determinism() -> Outcome {
    let config = SuiteConfig {
        corpus: ["S3", "D4", "Q8", "A4", "Ex(3,1,1)"].iter().map(|s| GroupSpec::from_shorthand(s).unwrap()).collect(),
        random_instances_per_statement: 100,
        seed: 99,
        ..SuiteConfig::default()
    };
    let first = run_suite(&config).map_err(|e| e.to_string())?.payload_json().map_err(|e| e.to_string())?;
    let second = run_suite(&SuiteConfig { jobs: Some(1), ..config.clone() })
        .map_err(|e| e.to_string())?
        .payload_json()
        .map_err(|e| e.to_string())?;
    ensure(first == second, || "reports differ".into())?;
    let other = run_suite(&SuiteConfig { seed: 100, ..config }).map_err(|e| e.to_string())?;
    ensure(other.payload_json().unwrap() != first, || "seed has no effect".into())?;
    Ok(format!("byte-identical payloads ({} bytes), parallel vs single-threaded", first.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("exact commuting probabilities", exact_values),
        ("example family equalities", example_equalities),
        ("certification", certification),
        ("statement suite", statement_suite),
        ("witness pipelines", witness_pipelines),
        ("oracle equivalence", oracle_equivalence),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let ms = start.elapsed().as_millis();
        match &outcome {
            Ok(detail) => println!("criterion {}: PASS [{name}] ({ms} ms) {detail}", i + 1),
            Err(reason) => {
                println!("criterion {}: FAIL [{name}] ({ms} ms) {reason}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
