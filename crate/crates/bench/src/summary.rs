//! Per-(algorithm, k) mean and unbiased variance.

use std::collections::BTreeMap;

use crate::experiment::RunRecord;

type Group = (Vec<f64>, Vec<f64>);

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub algorithm: String,
    pub k: usize,
    pub runs: usize,
    pub mean_value: f64,
    pub var_value: f64,
    pub mean_ratio: f64,
    pub var_ratio: f64,
}

/// Sample mean and unbiased variance (0 for a single value).
pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

pub fn summarize(records: &[RunRecord]) -> Vec<Summary> {
    if records.is_empty() {
        log::warn!("no records to summarize");
    }
    let mut groups: BTreeMap<(&str, usize), Group> = BTreeMap::new();
    for r in records {
        let g = groups.entry((&r.algorithm, r.k)).or_default();
        g.0.push(r.value);
        g.1.push(r.ratio);
    }
    groups
        .into_iter()
        .map(|((algorithm, k), (values, ratios))| {
            let (mean_value, var_value) = mean_var(&values);
            let (mean_ratio, var_ratio) = mean_var(&ratios);
            Summary { algorithm: algorithm.to_string(), k, runs: values.len(), mean_value, var_value, mean_ratio, var_ratio }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_points() {
        assert_eq!(mean_var(&[2.0, 4.0]), (3.0, 2.0));
        assert_eq!(mean_var(&[5.0]), (5.0, 0.0));
    }
}
