//! Deterministic floating-point reductions.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SummationScheme {
    /// Neumaier's compensated running sum.
    #[default]
    Compensated,
    /// Recursive halving over the stored terms.
    Pairwise,
}

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    #[inline]
    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn pairwise(terms: &[f64]) -> f64 {
    const LEAF: usize = 16;
    if terms.len() <= LEAF {
        return terms.iter().sum();
    }
    let (lo, hi) = terms.split_at(terms.len() / 2);
    pairwise(lo) + pairwise(hi)
}

/// Sum of `terms` in the given order under `scheme`.
pub fn reduce(terms: &[f64], scheme: SummationScheme) -> f64 {
    match scheme {
        SummationScheme::Compensated => {
            let mut acc = Neumaier::default();
            terms.iter().for_each(|&v| acc.add(v));
            acc.value()
        }
        SummationScheme::Pairwise => pairwise(terms),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_lost_digits() {
        let terms = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(reduce(&terms, SummationScheme::Compensated), 2.0);
        assert_eq!(terms.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn pairwise_matches_on_exact_inputs() {
        let terms: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(reduce(&terms, SummationScheme::Pairwise), 500_500.0);
        assert_eq!(reduce(&[], SummationScheme::Pairwise), 0.0);
    }

    #[test]
    fn half_weight_identity() {
        let block0 = -0.312_5;
        let rest = [-0.1, -0.02, -3e-4];
        let mut halved = Neumaier::default();
        halved.add(0.5 * block0);
        rest.iter().for_each(|&v| halved.add(v));
        let mut doubled = Neumaier::default();
        doubled.add(block0);
        doubled.add(block0);
        rest.iter().for_each(|&v| doubled.add(v));
        doubled.add(-1.5 * block0);
        assert!((halved.value() - doubled.value()).abs() <= 1e-16);
    }
}
