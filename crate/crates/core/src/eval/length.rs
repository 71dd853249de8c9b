use serde::{Deserialize, Serialize};

use crate::counter::{ClauseCounts, MatchResult};

use super::EvalError;

/// Documents below this count are merged into a neighbouring bucket.
pub const MIN_BUCKET: usize = 5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthBucket {
    /// Shortest and longest token count in the bucket.
    pub min_len: usize,
    pub max_len: usize,
    pub docs: usize,
    pub micro: MatchResult,
}

/// Whitespace token count of a sentence.
pub fn token_count(text: &str) -> usize {
    text.split_whitespace().count()
}

/// Token counts from a pre-tokenized file, one sentence per line.
pub fn token_counts_from(tokenized: &str) -> Vec<usize> {
    tokenized.lines().map(token_count).collect()
}

/// Micro scores per sentence length.
///
/// Distinct lengths are visited in ascending order and grouped until a group
/// has at least [`MIN_BUCKET`] documents; a short final group is folded into
/// the one before it.
pub fn length_breakdown(per_doc: &[ClauseCounts], token_counts: &[usize]) -> Result<Vec<LengthBucket>, EvalError> {
    if per_doc.len() != token_counts.len() {
        return Err(EvalError::LengthMismatch {
            left: per_doc.len(),
            right: token_counts.len(),
        });
    }
    let mut lengths: Vec<usize> = token_counts.to_vec();
    lengths.sort_unstable();
    lengths.dedup();

    let mut groups: Vec<(usize, usize, usize)> = Vec::new();
    let mut open: Option<(usize, usize, usize)> = None;
    for len in lengths {
        let n = token_counts.iter().filter(|&&t| t == len).count();
        let (lo, _, count) = open.unwrap_or((len, len, 0));
        let group = (lo, len, count + n);
        if group.2 >= MIN_BUCKET {
            groups.push(group);
            open = None;
        } else {
            open = Some(group);
        }
    }
    if let Some((lo, hi, count)) = open {
        match groups.last_mut() {
            Some(last) => {
                last.1 = hi;
                last.2 += count;
            }
            None => groups.push((lo, hi, count)),
        }
    }

    Ok(groups
        .into_iter()
        .map(|(lo, hi, docs)| {
            let counts = per_doc
                .iter()
                .zip(token_counts)
                .filter(|(_, &t)| (lo..=hi).contains(&t))
                .map(|(c, _)| *c)
                .sum();
            LengthBucket {
                min_len: lo,
                max_len: hi,
                docs,
                micro: MatchResult::from_counts(counts),
            }
        })
        .collect())
}
