//! Wall-clock timed experiments.

use std::thread;
use std::time::Instant;

use satclass_core::eval::{run_experiment, ClassifierSpec, Experiment, LabeledWell};

use crate::error::Result;

/// Runs one experiment, timing training and prediction with a monotonic
/// clock.
pub fn run_timed(wells: &[LabeledWell], held_out: &str, spec: &ClassifierSpec) -> Result<Experiment> {
    let origin = Instant::now();
    Ok(run_experiment(wells, held_out, spec, || {
        origin.elapsed().as_secs_f64()
    })?)
}

/// Runs `jobs` on up to `workers` threads; results keep job order.
pub fn run_all(
    wells: &[LabeledWell],
    jobs: &[(String, ClassifierSpec)],
    workers: usize,
) -> Result<Vec<Experiment>> {
    let workers = workers.clamp(1, jobs.len().max(1));
    if workers == 1 {
        return jobs.iter().map(|(w, s)| run_timed(wells, w, s)).collect();
    }
    let chunk = jobs.len().div_ceil(workers);
    thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|(w, s)| run_timed(wells, w, s))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(jobs.len());
        for h in handles {
            out.extend(h.join().expect("experiment worker panicked")?);
        }
        Ok(out)
    })
}
