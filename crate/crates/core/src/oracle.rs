//! Ground sets, set functions and the query-counting value oracle.

use std::cell::{Cell, RefCell};
use std::fmt;

use crate::error::{Error, Result};

/// Dense index into a ground set of size `n`: `0 <= id < n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElementId(pub u32);

impl ElementId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for ElementId {
    fn from(i: usize) -> Self {
        ElementId(u32::try_from(i).expect("element id exceeds u32"))
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Convenience for tests and examples: `ids(&[0, 2])`.
pub fn ids(raw: &[u32]) -> Vec<ElementId> {
    raw.iter().map(|&i| ElementId(i)).collect()
}

/// A set function `f : 2^E -> R` with `f(∅) = 0`.
///
/// Implementations must be deterministic and read-only, so a single instance
/// can back any number of concurrently running algorithms. Sets are passed as
/// slices of distinct ids in arbitrary order.
pub trait SetFunction: Sync {
    fn ground_size(&self) -> usize;

    fn evaluate(&self, set: &[ElementId]) -> Result<f64>;

    /// Whether `f(S) <= f(T)` holds for all `S ⊆ T`.
    fn is_monotone(&self) -> bool;

    fn name(&self) -> &str {
        "set-function"
    }
}

impl<F: SetFunction + ?Sized> SetFunction for &F {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn evaluate(&self, set: &[ElementId]) -> Result<f64> {
        (**self).evaluate(set)
    }
    fn is_monotone(&self) -> bool {
        (**self).is_monotone()
    }
    fn name(&self) -> &str {
        (**self).name()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleMode {
    /// Only sets of size at most `k_limit` may be queried.
    Weak { k_limit: usize },
    Strong,
}

/// One answered query, kept when transcript recording is enabled.
#[derive(Clone, Debug, PartialEq)]
pub struct QueryRecord {
    pub set: Vec<ElementId>,
    pub value: f64,
}

/// Per-run view of a [`SetFunction`] that counts queries, enforces the
/// weak/strong access mode and optionally records a transcript.
///
/// Not `Sync`: every algorithm run owns its own `ValueOracle` over a shared
/// function.
pub struct ValueOracle<'a> {
    f: &'a dyn SetFunction,
    mode: OracleMode,
    queries: Cell<u64>,
    max_query_size: Cell<usize>,
    transcript: Option<RefCell<Vec<QueryRecord>>>,
}

impl<'a> ValueOracle<'a> {
    pub fn new(f: &'a dyn SetFunction, mode: OracleMode) -> Self {
        Self {
            f,
            mode,
            queries: Cell::new(0),
            max_query_size: Cell::new(0),
            transcript: None,
        }
    }

    pub fn weak(f: &'a dyn SetFunction, k_limit: usize) -> Self {
        Self::new(f, OracleMode::Weak { k_limit })
    }

    pub fn strong(f: &'a dyn SetFunction) -> Self {
        Self::new(f, OracleMode::Strong)
    }

    /// Enables transcript recording of every answered query.
    pub fn recording(mut self) -> Self {
        self.transcript = Some(RefCell::new(Vec::new()));
        self
    }

    pub fn function(&self) -> &'a dyn SetFunction {
        self.f
    }

    pub fn mode(&self) -> OracleMode {
        self.mode
    }

    pub fn ground_size(&self) -> usize {
        self.f.ground_size()
    }

    pub fn is_monotone(&self) -> bool {
        self.f.is_monotone()
    }

    /// Evaluates `f(set)`. Counts one query per answered call; a call rejected
    /// by the weak-mode check is not counted.
    pub fn eval(&self, set: &[ElementId]) -> Result<f64> {
        if let OracleMode::Weak { k_limit } = self.mode {
            if set.len() > k_limit {
                return Err(Error::OracleMode { size: set.len(), limit: k_limit });
            }
        }
        if set.is_empty() {
            self.count(0);
            self.log(set, 0.0);
            return Ok(0.0);
        }
        let value = self.f.evaluate(set)?;
        self.count(set.len());
        self.log(set, value);
        Ok(value)
    }

    /// Evaluates `f(set ∪ {e})` without the caller building the union.
    pub fn eval_with(&self, set: &[ElementId], e: ElementId) -> Result<f64> {
        let mut buf = Vec::with_capacity(set.len() + 1);
        buf.extend_from_slice(set);
        buf.push(e);
        self.eval(&buf)
    }

    fn count(&self, size: usize) {
        self.queries.set(self.queries.get() + 1);
        if size > self.max_query_size.get() {
            self.max_query_size.set(size);
        }
    }

    fn log(&self, set: &[ElementId], value: f64) {
        if let Some(t) = &self.transcript {
            t.borrow_mut().push(QueryRecord { set: set.to_vec(), value });
        }
    }

    pub fn query_count(&self) -> u64 {
        self.queries.get()
    }

    pub fn max_query_size(&self) -> usize {
        self.max_query_size.get()
    }

    pub fn take_transcript(&self) -> Vec<QueryRecord> {
        self.transcript
            .as_ref()
            .map(|t| std::mem::take(&mut *t.borrow_mut()))
            .unwrap_or_default()
    }
}

/// `f(e | S) = f(S ∪ {e}) − f(S)`. Costs exactly two queries.
pub fn marginal(oracle: &ValueOracle<'_>, e: ElementId, set: &[ElementId]) -> Result<f64> {
    if set.contains(&e) {
        return Err(Error::Precondition(format!("element {e} already in the base set")));
    }
    let base = oracle.eval(set)?;
    marginal_with_base(oracle, e, set, base)
}

/// Marginal with a caller-cached `f(S)`. Costs exactly one query.
pub fn marginal_with_base(
    oracle: &ValueOracle<'_>,
    e: ElementId,
    set: &[ElementId],
    base: f64,
) -> Result<f64> {
    Ok(oracle.eval_with(set, e)? - base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{Additive, CoverageInstance};

    #[test]
    fn marginal_on_coverage() {
        let cov = CoverageInstance::new(vec![vec![0, 1]], 2).unwrap();
        let o = ValueOracle::strong(&cov);
        assert_eq!(marginal(&o, ElementId(0), &[]).unwrap(), 2.0);
        assert_eq!(o.query_count(), 2);
    }

    #[test]
    fn saturated_marginal_is_zero() {
        let cov = CoverageInstance::new(vec![vec![0, 1], vec![0, 1, 2], vec![1]], 3).unwrap();
        let o = ValueOracle::strong(&cov);
        assert_eq!(marginal(&o, ElementId(2), &ids(&[1])).unwrap(), 0.0);
    }

    #[test]
    fn additive_marginal_is_weight() {
        let f = Additive::new(vec![5.0, 3.0, 2.0]);
        let o = ValueOracle::strong(&f);
        for s in [vec![], ids(&[1]), ids(&[1, 2])] {
            assert_eq!(marginal(&o, ElementId(0), &s).unwrap(), 5.0);
        }
        assert_eq!(o.query_count(), 6);
        let base = o.eval(&ids(&[1])).unwrap();
        assert_eq!(marginal_with_base(&o, ElementId(0), &ids(&[1]), base).unwrap(), 5.0);
        assert_eq!(o.query_count(), 8);
    }

    #[test]
    fn weak_mode_rejects_oversized_sets() {
        let f = Additive::new(vec![1.0; 4]);
        let o = ValueOracle::weak(&f, 2);
        assert_eq!(o.eval(&ids(&[0, 1])).unwrap(), 2.0);
        let err = o.eval(&ids(&[0, 1, 2])).unwrap_err();
        assert_eq!(err, Error::OracleMode { size: 3, limit: 2 });
        assert!(marginal(&o, ElementId(3), &ids(&[0, 1])).is_err());
        assert_eq!(o.query_count(), 2);
        assert_eq!(o.max_query_size(), 2);
    }

    #[test]
    fn empty_set_is_zero_and_counted() {
        let f = Additive::new(vec![4.0]);
        let o = ValueOracle::strong(&f);
        assert_eq!(o.eval(&[]).unwrap(), 0.0);
        assert_eq!(o.query_count(), 1);
    }

    #[test]
    fn transcript_records_queries() {
        let f = Additive::new(vec![1.0, 2.0]);
        let o = ValueOracle::strong(&f).recording();
        o.eval(&ids(&[1])).unwrap();
        o.eval(&ids(&[0, 1])).unwrap();
        let t = o.take_transcript();
        assert_eq!(t.len(), 2);
        assert_eq!(t[1], QueryRecord { set: ids(&[0, 1]), value: 3.0 });
    }

    #[test]
    fn marginal_rejects_member() {
        let f = Additive::new(vec![1.0, 2.0]);
        let o = ValueOracle::strong(&f);
        assert!(marginal(&o, ElementId(0), &ids(&[0])).is_err());
    }
}
