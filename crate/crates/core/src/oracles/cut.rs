use crate::error::{Error, Result};
use crate::oracle::{ElementId, SetFunction};

use super::check_range;

/// Weighted graph cut: `f(S)` is the total weight of edges with exactly one
/// endpoint in `S`. Nonnegative, submodular, not monotone.
#[derive(Clone, Debug)]
pub struct CutInstance {
    vertex_count: usize,
    edges: Vec<(u32, u32, f64)>,
}

impl CutInstance {
    /// Edges are stored with `u < v`; self-loops and negative weights are
    /// rejected.
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Result<Self> {
        let mut stored = Vec::new();
        for (u, v, w) in edges {
            if u == v {
                return Err(Error::InvalidInput(format!("self-loop on vertex {u}")));
            }
            if w.is_nan() || w < 0.0 {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) has weight {w}")));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            if b as usize >= vertex_count {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) outside {vertex_count} vertices")));
            }
            stored.push((a, b, w));
        }
        Ok(Self { vertex_count, edges: stored })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(u32, u32, f64)] {
        &self.edges
    }
}

impl SetFunction for CutInstance {
    fn ground_size(&self) -> usize {
        self.vertex_count
    }

    fn evaluate(&self, set: &[ElementId]) -> Result<f64> {
        check_range(set, self.vertex_count)?;
        let mut inside = vec![false; self.vertex_count];
        for e in set {
            inside[e.index()] = true;
        }
        Ok(self
            .edges
            .iter()
            .filter(|(u, v, _)| inside[*u as usize] != inside[*v as usize])
            .map(|(_, _, w)| w)
            .sum())
    }

    fn is_monotone(&self) -> bool {
        false
    }

    fn name(&self) -> &str {
        "cut"
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::ids;

    fn triangle() -> CutInstance {
        CutInstance::new(3, [(0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)]).unwrap()
    }

    #[test]
    fn empty_and_full_cut_are_zero() {
        let g = triangle();
        assert_eq!(g.evaluate(&[]).unwrap(), 0.0);
        assert_eq!(g.evaluate(&ids(&[0, 1, 2])).unwrap(), 0.0);
    }

    #[test]
    fn triangle_single_vertex() {
        assert_eq!(triangle().evaluate(&ids(&[1])).unwrap(), 2.0);
    }

    #[test]
    fn stores_ordered_edges() {
        assert_eq!(triangle().edges()[2], (0, 2, 1.0));
    }

    #[test]
    fn rejects_self_loops_and_negative_weights() {
        assert!(CutInstance::new(2, [(1, 1, 1.0)]).is_err());
        assert!(CutInstance::new(2, [(0, 1, -1.0)]).is_err());
        assert!(CutInstance::new(2, [(0, 2, 1.0)]).is_err());
    }
}
