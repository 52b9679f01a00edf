//! Random mappings of {0, …, n−1} into itself: sampling, structural analysis
//! of the functional graph, and parallel Monte Carlo aggregation.
//!
//! Points are 0-based here; [`Mapping::from_one_based`] accepts the usual
//! 1-based notation.

use rand::distributions::{Distribution, Uniform};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};

/// A function f: {0, …, n−1} → {0, …, n−1} stored as its image array.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mapping {
    image: Vec<u32>,
}

impl Mapping {
    pub fn new(image: Vec<u32>) -> Result<Self> {
        let n = image.len();
        if n == 0 {
            return Err(Error::domain("Mapping", "empty image"));
        }
        if n > u32::MAX as usize {
            return Err(Error::Size(format!("n = {n} too large")));
        }
        if let Some(&bad) = image.iter().find(|&&v| v as usize >= n) {
            return Err(Error::domain("Mapping", format!("image value {bad} outside 0..{n}")));
        }
        Ok(Self { image })
    }

    /// Builds from f(1), …, f(n) with values in 1..=n.
    pub fn from_one_based(image: &[u32]) -> Result<Self> {
        if image.contains(&0) {
            return Err(Error::domain("Mapping", "1-based image contains 0"));
        }
        Self::new(image.iter().map(|&v| v - 1).collect())
    }

    pub fn n(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[u32] {
        &self.image
    }
}

/// Uniform random mapping on n points.
pub fn sample_mapping<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Mapping> {
    if n == 0 || n > u32::MAX as usize {
        return Err(Error::Size(format!("n = {n} outside 1..=2^32-1")));
    }
    let mut image = vec![0u32; n];
    fill_uniform(&mut image, rng);
    Ok(Mapping { image })
}

fn fill_uniform<R: Rng + ?Sized>(image: &mut [u32], rng: &mut R) {
    let dist = Uniform::new(0, image.len() as u32);
    for v in image.iter_mut() {
        *v = dist.sample(rng);
    }
}

/// Structure of one functional graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphSummary {
    pub n: usize,
    /// M, the number of components.
    pub components: usize,
    /// N, the number of points on cycles.
    pub cyclic_points: usize,
    /// Cycle lengths, longest first; one per component.
    pub cycle_lengths: Vec<usize>,
    /// Component sizes, largest first.
    pub component_sizes: Vec<usize>,
    /// Whether the largest component holds a longest cycle. Among equally
    /// large components the one with the longer cycle, then the smaller
    /// minimum label, counts as largest.
    pub largest_component_contains_longest_cycle: bool,
    /// Cycle length inside the largest component.
    pub deepest_cycle: usize,
    /// Size of the component holding a longest cycle (the largest such
    /// component when several cycles tie).
    pub richest_component: usize,
}

impl GraphSummary {
    /// Λ_r, the r-th longest cycle (1-based), or 0 past the last one.
    pub fn cycle(&self, r: usize) -> usize {
        r.checked_sub(1)
            .and_then(|i| self.cycle_lengths.get(i).copied())
            .unwrap_or(0)
    }
}

const REMOVED: u32 = u32::MAX;

/// Reusable scratch space for [`Workspace::analyze`].
#[derive(Debug, Default, Clone)]
pub struct Workspace {
    indegree: Vec<u32>,
    // component index of each point
    label: Vec<u32>,
    // removal order of the peeled points
    order: Vec<u32>,
}

impl Workspace {
    pub fn new() -> Self {
        Self::default()
    }

    /// Analyzes `m` in O(n). In-degree peeling leaves exactly the cyclic
    /// points; each cycle found by walking f labels one component, and the
    /// peeled points inherit the label of their image in reverse removal
    /// order, which always finds the image already labelled.
    pub fn analyze(&mut self, m: &Mapping) -> GraphSummary {
        let f = &m.image;
        let n = f.len();
        self.indegree.clear();
        self.indegree.resize(n, 0);
        for &v in f {
            self.indegree[v as usize] += 1;
        }

        self.order.clear();
        self.order.extend((0..n as u32).filter(|&i| self.indegree[i as usize] == 0));
        let mut head = 0;
        while head < self.order.len() {
            let v = self.order[head] as usize;
            head += 1;
            self.indegree[v] = REMOVED;
            let w = f[v] as usize;
            self.indegree[w] -= 1;
            if self.indegree[w] == 0 {
                self.order.push(w as u32);
            }
        }

        self.label.clear();
        self.label.resize(n, REMOVED);
        // (size, cycle length) per component, indexed by label
        let mut comps: Vec<(usize, usize)> = Vec::new();
        let mut cyclic_points = 0usize;
        for start in 0..n {
            if self.indegree[start] == REMOVED || self.label[start] != REMOVED {
                continue;
            }
            let id = comps.len() as u32;
            let mut len = 0usize;
            let mut v = start;
            while self.label[v] == REMOVED {
                self.label[v] = id;
                len += 1;
                v = f[v] as usize;
            }
            cyclic_points += len;
            comps.push((len, len));
        }
        for &v in self.order.iter().rev() {
            let id = self.label[f[v as usize] as usize];
            self.label[v as usize] = id;
            comps[id as usize].0 += 1;
        }

        let longest = comps.iter().map(|c| c.1).max().unwrap_or(0);
        let top = *comps.iter().max().expect("a mapping has at least one component");
        let tied = comps.iter().filter(|&&c| c == top).count();
        let largest = if tied == 1 {
            top
        } else {
            // the tied component holding the smallest label
            let first = self
                .label
                .iter()
                .find(|&&id| comps[id as usize] == top)
                .expect("tied components are labelled");
            comps[*first as usize]
        };
        let richest = comps
            .iter()
            .filter(|c| c.1 == longest)
            .map(|c| c.0)
            .max()
            .unwrap_or(0);

        let mut cycle_lengths: Vec<usize> = comps.iter().map(|c| c.1).collect();
        cycle_lengths.sort_unstable_by(|a, b| b.cmp(a));
        let mut component_sizes: Vec<usize> = comps.iter().map(|c| c.0).collect();
        component_sizes.sort_unstable_by(|a, b| b.cmp(a));

        GraphSummary {
            n,
            components: comps.len(),
            cyclic_points,
            cycle_lengths,
            component_sizes,
            largest_component_contains_longest_cycle: largest.1 == longest,
            deepest_cycle: largest.1,
            richest_component: richest,
        }
    }
}

/// Number of weakly connected components by union–find over the edges
/// {i, f(i)}; independent of [`Workspace::analyze`].
pub fn count_components_union_find(m: &Mapping) -> usize {
    fn find(parent: &mut [u32], mut x: u32) -> u32 {
        while parent[x as usize] != x {
            let p = parent[x as usize];
            parent[x as usize] = parent[p as usize];
            x = parent[x as usize];
        }
        x
    }
    let n = m.n();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    let mut count = n;
    for (i, &v) in m.image.iter().enumerate() {
        let a = find(&mut parent, i as u32);
        let b = find(&mut parent, v);
        if a != b {
            parent[a.max(b) as usize] = a.min(b);
            count -= 1;
        }
    }
    count
}

/// Analyzes one mapping with a fresh [`Workspace`].
pub fn analyze(m: &Mapping) -> GraphSummary {
    Workspace::new().analyze(m)
}

/// Which samples are kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constraint {
    None,
    /// Exactly one component.
    Connected,
    /// Exactly m components.
    Components(usize),
}

impl Constraint {
    fn accepts(&self, s: &GraphSummary) -> bool {
        match *self {
            Constraint::None => true,
            Constraint::Connected => s.components == 1,
            Constraint::Components(m) => s.components == m,
        }
    }

    /// Asymptotic acceptance probability at size n, capped at 1.
    pub fn expected_acceptance(&self, n: usize) -> f64 {
        let nf = n as f64;
        let base = (std::f64::consts::PI / (2.0 * nf)).sqrt();
        let p = match *self {
            Constraint::None => 1.0,
            Constraint::Connected => base,
            Constraint::Components(m) => {
                let k = m.saturating_sub(1) as i32;
                let fact: f64 = (1..=m.saturating_sub(1)).map(|j| j as f64).product();
                base * nf.ln().powi(k) / (2f64.powi(k) * fact)
            }
        };
        p.clamp(f64::MIN_POSITIVE, 1.0)
    }

    pub fn name(&self) -> String {
        match self {
            Constraint::None => "none".into(),
            Constraint::Connected => "connected".into(),
            Constraint::Components(m) => format!("components={m}"),
        }
    }
}

/// The per-sample quantities aggregated by [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stat {
    /// Λ_r/√n for r = 1..=4.
    Cycle(usize),
    /// N/√n.
    CyclicPoints,
    /// M.
    Components,
    /// Indicator that the largest component holds a longest cycle.
    LargestHoldsLongest,
    /// Cycle length of the largest component, over √n.
    DeepestCycle,
    /// Size of the component with a longest cycle, over n.
    RichestComponent,
    /// Largest component size over n.
    LargestComponent,
}

/// Number of tracked statistics.
pub const STAT_COUNT: usize = 10;

impl Stat {
    pub const ALL: [Stat; STAT_COUNT] = [
        Stat::Cycle(1),
        Stat::Cycle(2),
        Stat::Cycle(3),
        Stat::Cycle(4),
        Stat::CyclicPoints,
        Stat::Components,
        Stat::LargestHoldsLongest,
        Stat::DeepestCycle,
        Stat::RichestComponent,
        Stat::LargestComponent,
    ];

    pub fn index(&self) -> usize {
        match *self {
            Stat::Cycle(r) => {
                assert!((1..=4).contains(&r), "tracked cycle ranks are 1..=4");
                r - 1
            }
            Stat::CyclicPoints => 4,
            Stat::Components => 5,
            Stat::LargestHoldsLongest => 6,
            Stat::DeepestCycle => 7,
            Stat::RichestComponent => 8,
            Stat::LargestComponent => 9,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Stat::Cycle(r) => format!("lambda{r}"),
            Stat::CyclicPoints => "cyclic_points".into(),
            Stat::Components => "components".into(),
            Stat::LargestHoldsLongest => "largest_holds_longest".into(),
            Stat::DeepestCycle => "deepest_cycle".into(),
            Stat::RichestComponent => "richest_component".into(),
            Stat::LargestComponent => "largest_component".into(),
        }
    }

    fn values(s: &GraphSummary) -> [f64; STAT_COUNT] {
        let n = s.n as f64;
        let root = n.sqrt();
        [
            s.cycle(1) as f64 / root,
            s.cycle(2) as f64 / root,
            s.cycle(3) as f64 / root,
            s.cycle(4) as f64 / root,
            s.cyclic_points as f64 / root,
            s.components as f64,
            if s.largest_component_contains_longest_cycle { 1.0 } else { 0.0 },
            s.deepest_cycle as f64 / root,
            s.richest_component as f64 / n,
            s.component_sizes[0] as f64 / n,
        ]
    }
}

/// Mergeable count, sums and cross products. Values are shifted by the first
/// observation to keep the second moments well conditioned.
#[derive(Debug, Clone, PartialEq)]
pub struct Accumulator {
    count: u64,
    shift: Option<[f64; STAT_COUNT]>,
    sum: [f64; STAT_COUNT],
    cross: [[f64; STAT_COUNT]; STAT_COUNT],
}

impl Default for Accumulator {
    fn default() -> Self {
        Self {
            count: 0,
            shift: None,
            sum: [0.0; STAT_COUNT],
            cross: [[0.0; STAT_COUNT]; STAT_COUNT],
        }
    }
}

impl Accumulator {
    pub fn push(&mut self, x: &[f64; STAT_COUNT]) {
        let shift = *self.shift.get_or_insert(*x);
        let mut d = [0.0; STAT_COUNT];
        for i in 0..STAT_COUNT {
            d[i] = x[i] - shift[i];
        }
        self.count += 1;
        for i in 0..STAT_COUNT {
            self.sum[i] += d[i];
            for j in i..STAT_COUNT {
                self.cross[i][j] += d[i] * d[j];
            }
        }
    }

    pub fn push_summary(&mut self, s: &GraphSummary) {
        self.push(&Stat::values(s));
    }

    /// Combines two accumulators; the result does not depend on how samples
    /// were split, up to rounding.
    pub fn merge(&mut self, other: &Accumulator) {
        let Some(os) = other.shift else { return };
        let Some(s) = self.shift else {
            *self = other.clone();
            return;
        };
        // re-express other's sums around our shift
        let c = other.count as f64;
        let mut delta = [0.0; STAT_COUNT];
        for i in 0..STAT_COUNT {
            delta[i] = os[i] - s[i];
        }
        for i in 0..STAT_COUNT {
            for j in i..STAT_COUNT {
                self.cross[i][j] += other.cross[i][j]
                    + delta[i] * other.sum[j]
                    + delta[j] * other.sum[i]
                    + c * delta[i] * delta[j];
            }
        }
        for i in 0..STAT_COUNT {
            self.sum[i] += other.sum[i] + c * delta[i];
        }
        self.count += other.count;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn mean(&self, s: Stat) -> f64 {
        let i = s.index();
        let shift = self.shift.map(|v| v[i]).unwrap_or(0.0);
        shift + self.sum[i] / self.count.max(1) as f64
    }

    fn covariance_idx(&self, i: usize, j: usize) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        let n = self.count as f64;
        (self.cross[i][j] - self.sum[i] * self.sum[j] / n) / (n - 1.0)
    }

    /// Unbiased sample variance.
    pub fn variance(&self, s: Stat) -> f64 {
        self.covariance_idx(s.index(), s.index()).max(0.0)
    }

    pub fn std_error(&self, s: Stat) -> f64 {
        (self.variance(s) / self.count.max(1) as f64).sqrt()
    }

    pub fn correlation(&self, a: Stat, b: Stat) -> f64 {
        let (i, j) = (a.index(), b.index());
        let den = (self.covariance_idx(i, i) * self.covariance_idx(j, j)).sqrt();
        if den > 0.0 {
            (self.covariance_idx(i, j) / den).clamp(-1.0, 1.0)
        } else {
            0.0
        }
    }
}

/// Settings for [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub n: usize,
    /// Accepted samples wanted.
    pub trials: u64,
    pub constraint: Constraint,
    pub seed: u64,
    pub workers: usize,
    /// Cap on total attempts; by default (4·trials + 10⁴) over the
    /// asymptotic acceptance probability.
    pub max_attempts: Option<u64>,
}

impl SimOptions {
    pub fn new(n: usize, trials: u64, seed: u64) -> Self {
        Self {
            n,
            trials,
            constraint: Constraint::None,
            seed,
            workers: 1,
            max_attempts: None,
        }
    }

    pub fn with_constraint(mut self, c: Constraint) -> Self {
        self.constraint = c;
        self
    }

    pub fn with_workers(mut self, w: usize) -> Self {
        self.workers = w;
        self
    }

    pub fn with_max_attempts(mut self, cap: u64) -> Self {
        self.max_attempts = Some(cap);
        self
    }

    pub fn attempt_cap(&self) -> u64 {
        self.max_attempts.unwrap_or_else(|| {
            let p = self.constraint.expected_acceptance(self.n);
            let cap = (4.0 * self.trials as f64 + 1e4) / p;
            if cap >= u64::MAX as f64 {
                u64::MAX
            } else {
                cap.ceil() as u64
            }
        })
    }
}

/// Aggregated Monte Carlo output.
#[derive(Debug, Clone, PartialEq)]
pub struct SimStats {
    pub options: SimOptions,
    pub attempts: u64,
    pub acc: Accumulator,
}

impl SimStats {
    pub fn accepted(&self) -> u64 {
        self.acc.count()
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted() as f64 / self.attempts.max(1) as f64
    }

    /// Standard error of the acceptance rate.
    pub fn acceptance_std_error(&self) -> f64 {
        let p = self.acceptance_rate();
        (p * (1.0 - p) / self.attempts.max(1) as f64).sqrt()
    }

    pub fn mean(&self, s: Stat) -> f64 {
        self.acc.mean(s)
    }

    pub fn variance(&self, s: Stat) -> f64 {
        self.acc.variance(s)
    }

    pub fn std_error(&self, s: Stat) -> f64 {
        self.acc.std_error(s)
    }

    pub fn correlation(&self, a: Stat, b: Stat) -> f64 {
        self.acc.correlation(a, b)
    }
}

fn worker_rng(seed: u64, worker: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(worker as u64);
    rng
}

// trials t with t mod workers == w
fn quota(trials: u64, workers: usize, w: usize) -> u64 {
    let w = w as u64;
    let k = workers as u64;
    trials / k + u64::from(w < trials % k)
}

fn split_cap(cap: u64, trials: u64, q: u64) -> u64 {
    if trials == 0 {
        return 0;
    }
    ((cap as u128 * q as u128).div_ceil(trials as u128)).min(u64::MAX as u128) as u64
}

/// Runs `trials` accepted samples. Worker w draws the trials t ≡ w (mod
/// workers) from its own ChaCha8 stream, so the result depends only on
/// (seed, workers).
pub fn simulate(opts: &SimOptions) -> Result<SimStats> {
    if opts.n < 2 || opts.n > u32::MAX as usize {
        return Err(Error::Size(format!("n = {} outside 2..=2^32-1", opts.n)));
    }
    if opts.trials == 0 {
        return Err(Error::domain("simulate", "trials must be >= 1"));
    }
    if opts.workers == 0 {
        return Err(Error::domain("simulate", "workers must be >= 1"));
    }
    if let Constraint::Components(0) = opts.constraint {
        return Err(Error::domain("simulate", "component count must be >= 1"));
    }
    let cap = opts.attempt_cap();
    let parts: Vec<(Accumulator, u64, u64)> = (0..opts.workers)
        .into_par_iter()
        .map(|w| {
            let q = quota(opts.trials, opts.workers, w);
            let my_cap = split_cap(cap, opts.trials, q);
            let mut rng = worker_rng(opts.seed, w);
            let mut ws = Workspace::new();
            let mut m = Mapping {
                image: vec![0; opts.n],
            };
            let mut acc = Accumulator::default();
            let mut attempts = 0u64;
            while acc.count() < q && attempts < my_cap {
                fill_uniform(&mut m.image, &mut rng);
                attempts += 1;
                let s = ws.analyze(&m);
                if opts.constraint.accepts(&s) {
                    acc.push_summary(&s);
                }
            }
            (acc, attempts, q)
        })
        .collect();
    let mut acc = Accumulator::default();
    let mut attempts = 0u64;
    let mut short = false;
    for (a, t, q) in &parts {
        acc.merge(a);
        attempts += t;
        short |= a.count() < *q;
    }
    if short {
        return Err(Error::BudgetExhausted {
            accepted: acc.count(),
            wanted: opts.trials,
            attempts,
        });
    }
    Ok(SimStats {
        options: *opts,
        attempts,
        acc,
    })
}

/// Probability estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Proportion {
    pub p: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Fraction of unconstrained mappings whose largest component holds a
/// longest cycle.
pub fn interplay_estimate(n: usize, trials: u64, seed: u64, workers: usize) -> Result<Proportion> {
    let stats = simulate(&SimOptions::new(n, trials, seed).with_workers(workers))?;
    let p = stats.mean(Stat::LargestHoldsLongest);
    Ok(Proportion {
        p,
        std_error: (p * (1.0 - p) / trials as f64).sqrt(),
        samples: trials,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(img: &[u32]) -> GraphSummary {
        analyze(&Mapping::from_one_based(img).unwrap())
    }

    #[test]
    fn small_graphs() {
        let s = summary(&[2, 3, 1]);
        assert_eq!((s.components, s.cyclic_points, s.cycle_lengths.clone()), (1, 3, vec![3]));
        let s = summary(&[1, 1, 1]);
        assert_eq!((s.components, s.cyclic_points), (1, 1));
        assert_eq!(s.component_sizes, vec![3]);
        let s = summary(&[2, 1, 4, 3]);
        assert_eq!((s.components, s.cyclic_points, s.cycle(2)), (2, 4, 2));
        assert_eq!(s.cycle(3), 0);
    }

    #[test]
    fn tie_rules() {
        // components {1,2,3} with a 1-cycle and {4,5,6} with a 2-cycle: the
        // size tie goes to the longer cycle
        let s = summary(&[1, 1, 1, 5, 4, 4]);
        assert!(s.largest_component_contains_longest_cycle);
        assert_eq!(s.deepest_cycle, 2);
        // a bigger component with a shorter cycle
        let s = summary(&[1, 1, 1, 1, 6, 5]);
        assert!(!s.largest_component_contains_longest_cycle);
        assert_eq!((s.deepest_cycle, s.richest_component), (1, 2));
    }

    #[test]
    fn rejects_bad_images() {
        assert!(Mapping::new(vec![0, 2]).is_err());
        assert!(Mapping::new(vec![]).is_err());
        assert!(Mapping::from_one_based(&[0, 1]).is_err());
    }

    #[test]
    fn merge_matches_single_pass() {
        let mut rng = worker_rng(7, 0);
        let mut ws = Workspace::new();
        let (mut all, mut a, mut b) = (Accumulator::default(), Accumulator::default(), Accumulator::default());
        for i in 0..500 {
            let s = ws.analyze(&sample_mapping(50, &mut rng).unwrap());
            all.push_summary(&s);
            if i % 3 == 0 { a.push_summary(&s) } else { b.push_summary(&s) }
        }
        a.merge(&b);
        for st in Stat::ALL {
            assert!((a.mean(st) - all.mean(st)).abs() < 1e-12);
            assert!((a.variance(st) - all.variance(st)).abs() < 1e-10);
        }
        assert!((a.correlation(Stat::Cycle(1), Stat::CyclicPoints) - all.correlation(Stat::Cycle(1), Stat::CyclicPoints)).abs() < 1e-10);
    }

    #[test]
    fn quotas_cover_trials() {
        for (t, w) in [(10u64, 3usize), (2, 5), (7, 1)] {
            assert_eq!((0..w).map(|i| quota(t, w, i)).sum::<u64>(), t);
        }
    }

    #[test]
    fn budget_exhaustion() {
        let opts = SimOptions::new(50, 10, 1).with_constraint(Constraint::Components(40)).with_max_attempts(100);
        assert!(matches!(simulate(&opts), Err(Error::BudgetExhausted { accepted: 0, .. })));
    }
}
