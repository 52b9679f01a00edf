//! Exhaustive tallies over all n^n mappings for small n.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gfseries::CountTable;
use crate::mapping_sim::{GraphSummary, Mapping, Workspace};

pub const MAX_ENUM_N: usize = 7;

/// Key of the joint histogram: (M, N, Λ_1, Λ_2), with Λ_2 = 0 when there is
/// a single cycle.
pub type JointKey = (usize, usize, usize, usize);

/// Exact distributions over all mappings of one size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTables {
    pub n: usize,
    /// a_{nmℓ} keyed by (m, ℓ).
    pub counts: CountTable,
    pub joint: BTreeMap<JointKey, u64>,
    pub connected_count: u64,
    /// Mappings whose largest component holds a longest cycle.
    pub largest_holds_longest: u64,
}

impl ExactTables {
    fn empty(n: usize) -> Self {
        Self {
            n,
            counts: CountTable::new(),
            joint: BTreeMap::new(),
            connected_count: 0,
            largest_holds_longest: 0,
        }
    }

    fn add(&mut self, s: &GraphSummary) {
        *self.counts.entry((s.components, s.cyclic_points)).or_default() += 1;
        *self
            .joint
            .entry((s.components, s.cyclic_points, s.cycle(1), s.cycle(2)))
            .or_default() += 1;
        if s.components == 1 {
            self.connected_count += 1;
        }
        if s.largest_component_contains_longest_cycle {
            self.largest_holds_longest += 1;
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        for (k, v) in other.joint {
            *self.joint.entry(k).or_default() += v;
        }
        self.connected_count += other.connected_count;
        self.largest_holds_longest += other.largest_holds_longest;
        self
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// E[Λ_1] exactly, as a float.
    pub fn mean_longest_cycle(&self) -> f64 {
        let s: u64 = self.joint.iter().map(|(k, v)| k.2 as u64 * v).sum();
        s as f64 / self.total() as f64
    }

    /// P{M = 1}.
    pub fn connected_fraction(&self) -> f64 {
        self.connected_count as f64 / self.total() as f64
    }
}

/// Enumerates every mapping on n ≤ 7 points. Work is split by the value of
/// the first image entry.
pub fn enumerate_all(n: usize) -> Result<ExactTables> {
    if n == 0 || n > MAX_ENUM_N {
        return Err(Error::Size(format!("n = {n} outside 1..={MAX_ENUM_N}")));
    }
    let parts: Vec<ExactTables> = (0..n as u32)
        .into_par_iter()
        .map(|first| {
            let mut tables = ExactTables::empty(n);
            let mut ws = Workspace::new();
            let mut image = vec![0u32; n];
            image[0] = first;
            loop {
                let m = Mapping::new(image.clone()).expect("odometer stays in range");
                tables.add(&ws.analyze(&m));
                // odometer over positions 1..n
                let mut pos = n;
                loop {
                    pos -= 1;
                    if pos == 0 {
                        return tables;
                    }
                    image[pos] += 1;
                    if image[pos] < n as u32 {
                        break;
                    }
                    image[pos] = 0;
                }
            }
        })
        .collect();
    Ok(parts
        .into_iter()
        .fold(ExactTables::empty(n), ExactTables::merge))
}
