//! James-type p-variation norm over increasing index subsequences.
//!
//! For a finite vector x the value is the maximum, over all increasing index
//! sequences i_1 < ... < i_m inside the stored entries, of
//! `(sum |x[i_{k+1}] - x[i_k]|^p)^(1/p)`. Constant vectors have value zero.

/// Dynamic program over (last index, predecessor) states: `best[j]` is the
/// largest p-th-power variation of a subsequence ending at `j`.
pub fn james_norm(x: &[f64], p: f64) -> f64 {
    let n = x.len();
    let mut best = vec![0.0_f64; n];
    for j in 0..n {
        let mut b = 0.0_f64;
        for i in 0..j {
            let cand = best[i] + (x[j] - x[i]).abs().powf(p);
            if cand > b {
                b = cand;
            }
        }
        best[j] = b;
    }
    let top = best.iter().fold(0.0_f64, |m, &v| m.max(v));
    top.powf(1.0 / p)
}
