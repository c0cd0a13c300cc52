use crate::error::Result;
use crate::vector::CoeffVector;

use super::rng;
use super::SearchReport;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AscentConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_sweeps: usize,
    pub initial_step: f64,
    pub min_step: f64,
}

impl AscentConfig {
    pub fn new(trials: usize, seed: u64) -> Self {
        Self {
            trials,
            seed,
            max_sweeps: 400,
            initial_step: 0.5,
            min_step: 1e-12,
        }
    }
}

/// Best of `trials` random starts, each refined by coordinate-wise local
/// ascent. `project` maps a candidate onto the search domain in place and
/// returns `false` when the candidate is degenerate (e.g. the zero vector).
///
/// Trial `i` draws from ChaCha stream `i` of `seed`, so results do not depend
/// on evaluation order. `converged` reports that every start stalled before
/// the sweep cap.
pub fn sampled_ascent<F, P>(
    objective: F,
    project: P,
    dim: usize,
    config: AscentConfig,
) -> Result<SearchReport>
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&mut [f64]) -> bool,
{
    let trials = config.trials.max(1);
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut iterations = 0;
    let mut all_stalled = true;

    for trial in 0..trials {
        let mut rng = rng::substream(config.seed, trial as u64);
        let mut x = rng::uniform_vec(&mut rng, dim, -1.0, 1.0);
        let mut tries = 0;
        while !project(&mut x) {
            tries += 1;
            if tries > 16 {
                break;
            }
            x = rng::uniform_vec(&mut rng, dim, -1.0, 1.0);
        }
        if tries > 16 {
            continue;
        }
        let (fx, x, sweeps, stalled) = local_ascent(&objective, &project, x, &config);
        iterations += sweeps;
        all_stalled &= stalled;
        if best.as_ref().is_none_or(|(b, _)| fx > *b) {
            best = Some((fx, x));
        }
    }

    let (best_value, point) = best.unwrap_or((f64::NEG_INFINITY, vec![0.0; dim]));
    Ok(SearchReport {
        best_value,
        best_point: CoeffVector::from_vec(point),
        iterations,
        converged: all_stalled,
        seed: config.seed,
    })
}

fn local_ascent<F, P>(
    objective: &F,
    project: &P,
    mut x: Vec<f64>,
    config: &AscentConfig,
) -> (f64, Vec<f64>, usize, bool)
where
    F: Fn(&[f64]) -> f64,
    P: Fn(&mut [f64]) -> bool,
{
    let mut fx = objective(&x);
    let mut step = config.initial_step;
    let mut candidate = x.clone();
    for sweep in 0..config.max_sweeps {
        let mut improved = false;
        for i in 0..x.len() {
            let peak = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            // Step moves plus snaps to 0 and to the current peak magnitude;
            // the snaps reach vertices of polyhedral balls quickly.
            for value in [x[i] + step, x[i] - step, 0.0, peak, -peak] {
                candidate.copy_from_slice(&x);
                candidate[i] = value;
                if !project(&mut candidate) {
                    continue;
                }
                let fc = objective(&candidate);
                if fc > fx + 1e-15 * fx.abs().max(1.0) {
                    fx = fc;
                    x.copy_from_slice(&candidate);
                    improved = true;
                }
            }
        }
        if !improved {
            step *= 0.5;
            if step < config.min_step {
                return (fx, x, sweep + 1, true);
            }
        }
    }
    (fx, x, config.max_sweeps, false)
}
