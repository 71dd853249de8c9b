use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::ClausalForm;
use crate::counter::{ClauseCounts, MatchConfig, MatchResult};
use crate::senses::SynsetMap;

use super::{
    fine_grained, length_breakdown, oracle_transform, prepare, score_prepared, token_count, ClauseCategory, DocScore,
    EvalError, LengthBucket, OracleMode, PreparedPair,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LabeledScore {
    pub label: String,
    pub score: MatchResult,
}

/// Everything `analyze` prints, in one serializable object.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub documents: usize,
    pub micro: MatchResult,
    pub perfect_count: usize,
    pub ill_formed_count: usize,
    pub categories: Vec<LabeledScore>,
    pub oracles: Vec<LabeledScore>,
    pub lengths: Vec<LengthBucket>,
    pub per_doc: Vec<DocScore>,
}

/// Overall, per-category, oracle and per-length scores for one system.
///
/// Token counts default to whitespace tokens of the gold raw text (system
/// raw text when gold has none).
pub fn analyze(
    system: &[ClausalForm],
    gold: &[ClausalForm],
    config: &MatchConfig,
    map: Option<&SynsetMap>,
    token_counts: Option<&[usize]>,
) -> Result<AnalysisReport, EvalError> {
    let pairs = prepare(system, gold, map)?;
    let score = score_prepared(&pairs, config)?;

    let mut categories: Vec<(ClauseCategory, ClauseCounts)> =
        ClauseCategory::all().into_iter().map(|c| (c, ClauseCounts::default())).collect();
    for (pair, doc) in pairs.iter().zip(&score.per_doc) {
        let fine = fine_grained(&pair.system, &pair.gold, &doc.result, config);
        for (cat, total) in categories.iter_mut() {
            *total = *total + fine[cat].counts();
        }
    }

    let mut oracles = Vec::new();
    for mode in OracleMode::ALL {
        let transformed: Vec<PreparedPair> = pairs
            .iter()
            .map(|p| PreparedPair {
                system: if p.valid {
                    oracle_transform(&p.system, &p.gold, mode)
                } else {
                    p.system.clone()
                },
                ..p.clone()
            })
            .collect();
        oracles.push(LabeledScore {
            label: mode.label().into(),
            score: score_prepared(&transformed, config)?.micro,
        });
    }

    let counts: Vec<usize> = match token_counts {
        Some(c) => c.to_vec(),
        None => pairs
            .iter()
            .map(|p| {
                let text = if p.gold.raw_text.is_empty() { &p.system.raw_text } else { &p.gold.raw_text };
                token_count(text)
            })
            .collect(),
    };
    let lengths = length_breakdown(&score.counts(), &counts)?;

    Ok(AnalysisReport {
        documents: pairs.len(),
        micro: score.micro.clone(),
        perfect_count: score.perfect_count,
        ill_formed_count: score.ill_formed_count,
        categories: categories
            .into_iter()
            .map(|(c, n)| LabeledScore {
                label: c.label(),
                score: MatchResult::from_counts(n),
            })
            .collect(),
        oracles,
        lengths,
        per_doc: score.per_doc,
    })
}

fn pct(x: f64) -> String {
    format!("{:.1}", x * 100.0)
}

impl AnalysisReport {
    /// Tab-separated tables: scores, counts, then the length breakdown.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let row = |out: &mut String, label: &str, r: &MatchResult| {
            let _ = writeln!(
                out,
                "{label}\t{}\t{}\t{}\t{}\t{}\t{}",
                pct(r.precision),
                pct(r.recall),
                pct(r.f1),
                r.matched,
                r.produced,
                r.gold
            );
        };
        out.push_str("category\tP\tR\tF\tmatched\tproduced\tgold\n");
        row(&mut out, "all clauses", &self.micro);
        for c in &self.categories {
            row(&mut out, &c.label, &c.score);
        }
        for o in &self.oracles {
            row(&mut out, &o.label, &o.score);
        }
        let _ = writeln!(out, "\ndocuments\t{}", self.documents);
        let _ = writeln!(out, "perfect DRSs\t{}", self.perfect_count);
        let _ = writeln!(out, "ill-formed DRSs\t{}", self.ill_formed_count);
        out.push_str("\ntokens\tdocs\tF\n");
        for b in &self.lengths {
            let span = if b.min_len == b.max_len {
                b.min_len.to_string()
            } else {
                format!("{}-{}", b.min_len, b.max_len)
            };
            let _ = writeln!(out, "{span}\t{}\t{}", b.docs, pct(b.micro.f1));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, load};

    #[test]
    fn report_on_fixtures() {
        let gold: Vec<_> = fixtures::ALL
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let mut f = load(t);
                f.doc_id = i.to_string();
                f
            })
            .collect();
        let r = analyze(&gold, &gold, &MatchConfig::default(), None, None).unwrap();
        assert_eq!(r.micro.f1, 1.0);
        assert_eq!(r.perfect_count, gold.len());
        assert!(r.oracles.iter().all(|o| o.score.f1 == 1.0));
        let top: ClauseCounts = r.categories[..3].iter().map(|c| c.score.counts()).sum();
        assert_eq!(top, r.micro.counts());
        let tsv = r.to_tsv();
        assert!(tsv.contains("all clauses\t100.0\t100.0\t100.0"));
        assert!(tsv.contains("perfect DRSs\t6"));
    }
}
