use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::counter::ClauseCounts;

use super::EvalError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignificanceResult {
    /// Micro F of A minus micro F of B.
    pub observed_delta: f64,
    pub p_value: f64,
    pub rounds: usize,
    pub alpha: f64,
    pub significant: bool,
}

fn micro_f(docs: &[ClauseCounts]) -> f64 {
    docs.iter().copied().sum::<ClauseCounts>().f1()
}

/// Paired approximate randomization test on per-document counts.
///
/// Each round swaps every document's pair of results with probability one
/// half and recomputes the difference in micro F. The p-value counts rounds
/// at least as extreme as the observed difference, with add-one smoothing.
pub fn approx_randomization(
    a: &[ClauseCounts],
    b: &[ClauseCounts],
    rounds: usize,
    alpha: f64,
    seed: u64,
) -> Result<SignificanceResult, EvalError> {
    if a.len() != b.len() {
        return Err(EvalError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if rounds == 0 {
        return Err(EvalError::NoRounds);
    }
    let observed = micro_f(a) - micro_f(b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut extreme = 0usize;
    for _ in 0..rounds {
        let (mut sa, mut sb) = (ClauseCounts::default(), ClauseCounts::default());
        for (x, y) in a.iter().zip(b) {
            if rng.gen_bool(0.5) {
                sa = sa + *y;
                sb = sb + *x;
            } else {
                sa = sa + *x;
                sb = sb + *y;
            }
        }
        let delta = sa.f1() - sb.f1();
        // tolerance guards against rounding when the sums coincide
        if delta.abs() >= observed.abs() - 1e-12 {
            extreme += 1;
        }
    }
    let p_value = (extreme + 1) as f64 / (rounds + 1) as f64;
    Ok(SignificanceResult {
        observed_delta: observed,
        p_value,
        rounds,
        alpha,
        significant: p_value < alpha,
    })
}
