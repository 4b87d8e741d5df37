//! Multi-threaded volume classification.

use std::thread;

use satclass_core::geodata::{SeismicTrace, TraceCollection};
use satclass_core::volume::{classify_trace, prepare_sweep, Cell, ClassifiedVolume};
use satclass_core::SvddModel;

use crate::error::Result;

/// Classifies every trace using `workers` threads. Traces are split into
/// contiguous blocks in key order and every column is computed
/// independently, so the result equals the single-threaded sweep.
pub fn classify_volume_parallel(
    model: &SvddModel,
    traces: &TraceCollection,
    feature_names: &[String],
    workers: usize,
) -> Result<ClassifiedVolume> {
    let grid = prepare_sweep(traces, feature_names)?;
    let all: Vec<&SeismicTrace> = traces.iter().collect();
    let workers = workers.clamp(1, all.len().max(1));
    let chunk = all.len().div_ceil(workers).max(1);

    let columns: Vec<((i32, i32), Vec<Cell>)> = thread::scope(|scope| {
        let grid = &grid;
        let handles: Vec<_> = all
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|t| Ok((t.key(), classify_trace(model, t, feature_names, grid)?)))
                        .collect::<Result<Vec<_>>>()
                })
            })
            .collect();
        let mut out = Vec::with_capacity(all.len());
        for h in handles {
            out.extend(h.join().expect("sweep worker panicked")?);
        }
        Ok::<_, crate::error::Error>(out)
    })?;

    let mut volume = ClassifiedVolume::empty(grid);
    for ((il, xl), column) in columns {
        volume.set_column(il, xl, &column)?;
    }
    Ok(volume)
}
