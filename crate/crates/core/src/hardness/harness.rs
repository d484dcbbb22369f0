use super::HardnessInstance;
use crate::error::{Error, Result};
use crate::oracle::{ElementId, QueryRecord};
use crate::order::StreamOrder;
use crate::stream::StreamingAlgorithm;

#[derive(Clone, Debug, PartialEq)]
pub struct BoundedRun {
    pub selection: Vec<ElementId>,
    /// `f̂` of the selection, as a fraction of the cube.
    pub value: f64,
    pub peak_memory: usize,
}

/// Streams `order` into `alg`, checking after every step that it holds at
/// most `budget` elements.
pub fn run_memory_bounded<A: StreamingAlgorithm + ?Sized>(
    alg: &mut A,
    inst: &HardnessInstance,
    budget: usize,
    order: &StreamOrder,
) -> Result<BoundedRun> {
    let mut peak = 0;
    for (step, &e) in order.elements().iter().enumerate() {
        alg.push(e)?;
        let live = alg.live_elements();
        peak = peak.max(live);
        if live > budget {
            return Err(Error::BudgetExceeded { step, live, budget });
        }
    }
    let selection = alg.finish()?;
    let value = inst.value(&selection)?;
    Ok(BoundedRun { selection, value, peak_memory: peak })
}

/// True iff every recorded query contained fewer than `r` good elements.
pub fn indistinguishability_audit(transcript: &[QueryRecord], inst: &HardnessInstance, r: usize) -> bool {
    transcript.iter().all(|q| inst.good_count(&q.set) < r)
}
