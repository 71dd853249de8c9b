//! End-to-end acceptance checks, one line of output per criterion.
//!
//! Runs without the libtest harness so the report is always printed.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use drskit::baselines::{self, EmbeddingTable};
use drskit::clause::{Clause, PartOfSpeech, Synset, Variable};
use drskit::counter::{match_score, ClauseCounts, MatchConfig};
use drskit::eval::{approx_randomization, ensemble_oracle, fine_grained, score_corpus};
use drskit::fixtures::{self, load};
use drskit::referee::{validate, Rule};
use drskit::{ClausalForm, SynsetMap};
use rand::Rng;

fn within(limit: Duration, start: Instant, what: &str) {
    let took = start.elapsed();
    assert!(took < limit, "{what} took {took:?}, limit {limit:?}");
}

fn everything_new_reproduced() -> String {
    let start = Instant::now();
    let (s, g) = (load(fixtures::EVERYTHING_NEW_SYSTEM), load(fixtures::EVERYTHING_NEW_GOLD));
    let r = match_score(&s, &g, &MatchConfig::exhaustive()).unwrap();
    assert_eq!((r.matched, r.produced, r.gold), (3, 7, 7));
    for seed in 0..20 {
        let h = match_score(&s, &g, &MatchConfig::default().with_seed(seed)).unwrap();
        assert_eq!((h.matched, h.produced, h.gold), (3, 7, 7), "seed {seed}");
    }
    assert!((r.f1 - 3.0 / 7.0).abs() < 1e-15);
    assert_eq!(format!("{:.1}", r.f1 * 100.0), "42.9");
    within(Duration::from_secs(1), start, "scoring");
    format!("matched 3, produced 7, gold 7, F {:.1} in {:?}", r.f1 * 100.0, start.elapsed())
}

fn validator_suite() -> String {
    for (name, text) in [
        ("Tom", fixtures::TOM_AFRAID),
        ("piano", fixtures::PIANO_SANG),
        ("money", fixtures::HIS_MONEY),
        ("Leeson", fixtures::NICK_LEESON),
    ] {
        let report = validate(&load(text));
        assert!(report.valid, "{name}: {:?}", report.violations);
    }
    let drop_line = |text: &str, line: &str| {
        let f = load(text);
        let clauses: Vec<Clause> = f.clauses.iter().filter(|c| c.to_string() != line).cloned().collect();
        assert_eq!(clauses.len() + 1, f.clauses.len(), "{line} not found");
        f.with_clauses(clauses)
    };
    let no_ref = validate(&drop_line(fixtures::TOM_AFRAID, "b3 REF x2"));
    assert!(no_ref.has(Rule::UnboundReferent), "{:?}", no_ref.rules());
    let no_member = validate(&drop_line(fixtures::PIANO_SANG, "b6 DRS b1"));
    assert!(no_member.has(Rule::DanglingDiscourseRelation), "{:?}", no_member.rules());
    let cycle: Vec<Clause> = ["b1 NOT b2", "b2 NOT b1", "b1 REF x1"].iter().map(|l| l.parse().unwrap()).collect();
    let cycle = validate(&ClausalForm::new("0", "", cycle));
    assert!(cycle.has(Rule::CyclicSubordination), "{:?}", cycle.rules());
    "4 fixtures valid; deleted REF, deleted DRS membership and NOT cycle rejected".into()
}

fn self_identity() -> String {
    let config = MatchConfig::default();
    for text in fixtures::ALL {
        let f = load(text);
        let r = match_score(&f, &f, &config).unwrap();
        assert_eq!(r.f1, 1.0);
        for (cat, score) in fine_grained(&f, &f, &r, &config) {
            assert!(score.f1 == 1.0 || (score.produced == 0 && score.gold == 0), "{cat:?}");
        }
    }
    format!("{} fixtures score 1.0 in every non-empty category", fixtures::ALL.len())
}

fn oracle_equivalence() -> String {
    let start = Instant::now();
    let (mut equal, mut pairs, mut seed) = (0, 0, 0u64);
    while pairs < 200 {
        let (s, g) = common::random_pair(seed, 6);
        seed += 1;
        if common::vars_per_kind(&s, &g) > 6 {
            continue;
        }
        let best = match_score(&s, &g, &MatchConfig::exhaustive()).unwrap().matched;
        let found = match_score(&s, &g, &MatchConfig::default().with_seed(seed)).unwrap().matched;
        assert!(found <= best, "pair {seed}: hill climb {found} above exhaustive {best}");
        equal += usize::from(found == best);
        pairs += 1;
    }
    assert!(equal * 100 >= 95 * pairs, "{equal}/{pairs} equal");
    within(Duration::from_secs(30), start, "200 pairs");
    format!("{equal}/{pairs} pairs equal, none above the optimum, in {:?}", start.elapsed())
}

fn replacement_rule() -> String {
    let config = MatchConfig::default();
    let g0 = load(fixtures::EVERYTHING_NEW_GOLD);
    let s0 = load(fixtures::EVERYTHING_NEW_SYSTEM);
    let mut g1 = load(fixtures::TOM_AFRAID);
    g1.doc_id = "1".into();
    let mut s1 = g1.clone();
    s1.clauses.retain(|c| c.to_string() != "b1 REF x1");
    assert!(!validate(&s1).valid);
    let doc0 = match_score(&s0, &g0, &config).unwrap();
    let doc1_gold = drskit::counter::strip_redundant_refs(&g1).clauses.len();
    let corpus = score_corpus(&[s0, s1], &[g0, g1], &config, None).unwrap();
    let (m0, p0, g0n) = (doc0.matched, doc0.produced, doc0.gold);
    assert_eq!(corpus.micro.counts(), ClauseCounts::new(m0, p0 + 1, g0n + doc1_gold));
    assert_eq!(corpus.micro.precision, m0 as f64 / (p0 + 1) as f64);
    assert_eq!(corpus.micro.recall, m0 as f64 / (g0n + doc1_gold) as f64);
    format!("P = {m0}/{} and R = {m0}/{} exactly", p0 + 1, g0n + doc1_gold)
}

fn synset_normalization() -> String {
    let b1 = Variable::new("b1").unwrap();
    let x1 = Variable::new("x1").unwrap();
    let with = |lemma: &str, sense| {
        ClausalForm::new(
            "0",
            "",
            vec![
                "b1 REF x1".parse().unwrap(),
                Clause::concept(b1.clone(), Synset::new(lemma, PartOfSpeech::Noun, sense), x1.clone()),
                "b1 Name x1 \"reynard\"".parse().unwrap(),
            ],
        )
    };
    let (system, gold) = (with("fox", 2), with("dodger", 1));
    let config = MatchConfig::default();
    let plain = score_corpus(std::slice::from_ref(&system), std::slice::from_ref(&gold), &config, None).unwrap();
    assert_eq!(plain.micro.matched, 1);
    let map = SynsetMap::parse("fox.n.02\tdodger.n.01\n").unwrap();
    let mapped = score_corpus(&[system], &[gold], &config, Some(&map)).unwrap();
    assert_eq!(mapped.micro.matched, 2);
    assert_eq!(mapped.micro.f1, 1.0);
    "fox.n.02 matches dodger.n.01 once normalized".into()
}

fn significance() -> String {
    let docs: Vec<ClauseCounts> = (0..20).map(|i| ClauseCounts::new(i % 7, 8, 9)).collect();
    let same = approx_randomization(&docs, &docs, 1000, 0.05, 3).unwrap();
    assert_eq!(same.p_value, 1.0);
    let a = vec![ClauseCounts::new(10, 10, 10); 50];
    let b = vec![ClauseCounts::new(0, 10, 10); 50];
    let r = approx_randomization(&a, &b, 1000, 0.05, 3).unwrap();
    assert!(r.p_value <= 0.05, "p = {}", r.p_value);
    let again = approx_randomization(&a, &b, 1000, 0.05, 3).unwrap();
    assert_eq!(r.p_value.to_bits(), again.p_value.to_bits());
    assert_eq!(r.observed_delta.to_bits(), again.observed_delta.to_bits());
    format!("identical p = 1.0; perfect vs zero p = {:.4}; repeatable", r.p_value)
}

fn ensemble_dominance() -> String {
    let config = MatchConfig::default();
    let mut margin = f64::INFINITY;
    for trial in 0..50 {
        let (gold, outputs) = common::random_corpora(1000 + trial, 8, 3);
        let ensemble = ensemble_oracle(&outputs, &gold, &config).unwrap().f1;
        for o in &outputs {
            let single = score_corpus(o, &gold, &config, None).unwrap().micro.f1;
            assert!(ensemble >= single, "trial {trial}: {ensemble} < {single}");
            margin = margin.min(ensemble - single);
        }
    }
    format!("50 trials, smallest margin {margin:.4}")
}

fn baseline_properties() -> String {
    let config = MatchConfig::default();
    let training = vec![load(fixtures::TOM_AFRAID), load(fixtures::TOM_AFRAID), load(fixtures::HIS_MONEY)];
    assert_eq!(baselines::spar_select_index(&training, &config, None).unwrap(), 0);

    let pairs = baselines::training_pairs(&fixtures::ALL.iter().map(|t| load(t)).collect::<Vec<_>>());
    let mut rng = common::rng(9);
    let mut text = String::new();
    let mut vocab: Vec<String> = pairs.iter().flat_map(|(s, _)| baselines::tokenize(s)).collect();
    vocab.sort();
    vocab.dedup();
    for w in &vocab {
        let v: Vec<String> = (0..8).map(|_| format!("{:.4}", rng.gen_range(-1.0..1.0))).collect();
        text.push_str(&format!("{w} {}\n", v.join(" ")));
    }
    let table = EmbeddingTable::parse(&text).unwrap();
    let sentences: Vec<&str> = pairs.iter().map(|(s, _)| s.as_str()).collect();
    for scaled in [table.clone(), table.scaled(0.001), table.scaled(250.0)] {
        let out = baselines::sim_spar_predict(&sentences, &pairs, &scaled).unwrap();
        for (o, (sentence, _)) in out.iter().zip(&pairs) {
            let first = pairs.iter().find(|(s, _)| s == sentence).unwrap();
            assert_eq!(o.clauses, first.1.clauses);
        }
    }
    let probes = ["tom sang in the box", "money for nothing", "everything afraid"];
    let base = baselines::sim_spar_predict(&probes, &pairs, &table).unwrap();
    assert_eq!(base, baselines::sim_spar_predict(&probes, &pairs, &table.scaled(17.5)).unwrap());
    "SPAR picks the duplicated form; SIM-SPAR exact matches; scaling keeps argmax".into()
}

fn not_reproducible() -> String {
    "not reproducible: published participant, per-system, pairwise, ensemble and baseline scores need unreleased data and system outputs".into()
}

fn throughput() -> String {
    let mut rng = common::rng(600);
    let mut system = Vec::new();
    let mut gold = Vec::new();
    for i in 0..600 {
        let refs = rng.gen_range(2..=6);
        let boxes = rng.gen_range(1..=4);
        let extra = rng.gen_range(4..=20 - refs);
        let g = common::random_form(&mut rng, boxes, refs, extra);
        let s = common::perturb(&mut rng, &g, 4, refs);
        let trim = |mut f: ClausalForm| {
            f.clauses.truncate(20);
            f.doc_id = i.to_string();
            f
        };
        system.push(trim(s));
        gold.push(trim(g));
    }
    // Random forms are mostly ill-formed, so match them directly rather than through the validator.
    let config = MatchConfig::default();
    let start = Instant::now();
    let per_doc: Vec<_> = system.iter().zip(&gold).map(|(s, g)| match_score(s, g, &config).unwrap()).collect();
    let micro = drskit::micro_average(&per_doc);
    score_corpus(&system, &gold, &config, None).unwrap();
    within(Duration::from_secs(60), start, "600 documents");
    format!("600 documents, F {:.1}, in {:?}", micro.f1 * 100.0, start.elapsed())
}

fn main() -> ExitCode {
    type Check = fn() -> String;
    let criteria: [(&str, Check); 11] = [
        ("sample pair scores 3/7/7", everything_new_reproduced),
        ("validator fixtures", validator_suite),
        ("self identity", self_identity),
        ("hill climb against exact search", oracle_equivalence),
        ("ill-formed replacement", replacement_rule),
        ("synset normalization", synset_normalization),
        ("significance test", significance),
        ("ensemble dominance", ensemble_dominance),
        ("baselines", baseline_properties),
        ("published corpus scores", not_reproducible),
        ("throughput", throughput),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match panic::catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => {
                let status = if i == 9 { "NOT REPRODUCIBLE" } else { "PASS" };
                println!("criterion {:>2} {status}: {name}: {detail}", i + 1);
            }
            Err(e) => {
                failed += 1;
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                println!("criterion {:>2} FAIL: {name}: {msg}", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
