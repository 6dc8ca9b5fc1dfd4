//! Finite probability distributions with their provenance.
//!
//! Every distribution in the crate is either the exact result of an
//! exhaustive enumeration or an empirical estimate from seeded draws; the
//! [`Provenance`] tag travels with the values so reports can say which.

use std::collections::BTreeMap;

use serde::Serialize;

/// Where a distribution's numbers came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Provenance {
    ExactEnumeration,
    Sampled { seed: u64, trials: u64 },
}

/// A finite distribution over values of type `T`, support sorted ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    support: Vec<(T, f64)>,
    provenance: Provenance,
}

impl<T: Ord + Clone> Distribution<T> {
    /// Build from unnormalized nonnegative weights; duplicate values are
    /// merged. Panics on an empty or zero-weight support, which always
    /// indicates a harness bug.
    pub fn from_weights<I>(weights: I, provenance: Provenance) -> Self
    where
        I: IntoIterator<Item = (T, f64)>,
    {
        let mut merged: BTreeMap<T, f64> = BTreeMap::new();
        for (value, w) in weights {
            debug_assert!(w >= 0.0, "negative weight");
            if w > 0.0 {
                *merged.entry(value).or_insert(0.0) += w;
            }
        }
        let total: f64 = merged.values().sum();
        assert!(total > 0.0, "distribution with zero total weight");
        Distribution {
            support: merged.into_iter().map(|(v, w)| (v, w / total)).collect(),
            provenance,
        }
    }

    /// The distribution putting all mass on one value.
    pub fn point(value: T, provenance: Provenance) -> Self {
        Distribution {
            support: vec![(value, 1.0)],
            provenance,
        }
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// `(value, probability)` pairs in ascending value order.
    pub fn support(&self) -> &[(T, f64)] {
        &self.support
    }

    pub fn prob_of(&self, value: &T) -> f64 {
        self.support
            .iter()
            .find(|(v, _)| v == value)
            .map_or(0.0, |(_, p)| *p)
    }

    /// Sum of all probabilities; 1 up to accumulated rounding.
    pub fn total_mass(&self) -> f64 {
        self.support.iter().map(|(_, p)| p).sum()
    }

    /// Total variation distance: half the L1 distance between the mass
    /// functions.
    pub fn tv_distance(&self, other: &Distribution<T>) -> f64 {
        let mut values: Vec<&T> = self.support.iter().map(|(v, _)| v).collect();
        values.extend(other.support.iter().map(|(v, _)| v));
        values.sort();
        values.dedup();
        0.5 * values
            .iter()
            .map(|v| (self.prob_of(v) - other.prob_of(v)).abs())
            .sum::<f64>()
    }

    /// Expected value of `f` under the distribution.
    pub fn expect(&self, mut f: impl FnMut(&T) -> f64) -> f64 {
        self.support.iter().map(|(v, p)| p * f(v)).sum()
    }

    /// Map the support through `f`, merging values that collide.
    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Distribution<U> {
        Distribution::from_weights(
            self.support.iter().map(|(v, p)| (f(v), *p)),
            self.provenance,
        )
    }
}

/// Distributions over `{0,1}` come up constantly as experiment outcomes.
pub type BitDistribution = Distribution<u8>;

impl BitDistribution {
    /// Build a `{0,1}`-valued distribution from the probability of 1.
    pub fn from_prob_one(p1: f64, provenance: Provenance) -> Self {
        let p1 = p1.clamp(0.0, 1.0);
        Distribution::from_weights([(0u8, 1.0 - p1), (1u8, p1)], provenance)
    }

    pub fn prob_one(&self) -> f64 {
        self.prob_of(&1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_normalize_and_merge() {
        let d = Distribution::from_weights(
            [(1u8, 1.0), (0u8, 2.0), (1u8, 1.0)],
            Provenance::ExactEnumeration,
        );
        assert_eq!(d.support().len(), 2);
        assert!((d.prob_of(&0) - 0.5).abs() < 1e-15);
        assert!((d.prob_of(&1) - 0.5).abs() < 1e-15);
        assert!((d.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tv_distance_basics() {
        let a = Distribution::point(0u8, Provenance::ExactEnumeration);
        let b = Distribution::point(1u8, Provenance::ExactEnumeration);
        assert_eq!(a.tv_distance(&b), 1.0);
        assert_eq!(a.tv_distance(&a), 0.0);
        let c = BitDistribution::from_prob_one(0.25, Provenance::ExactEnumeration);
        assert!((a.tv_distance(&c) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_weight_values_are_dropped() {
        let d =
            Distribution::from_weights([(3u32, 0.0), (7u32, 1.0)], Provenance::ExactEnumeration);
        assert_eq!(d.support().len(), 1);
        assert_eq!(d.prob_of(&3), 0.0);
    }
}
