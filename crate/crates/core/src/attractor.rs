//! Deterministic materialization of the attractor: breadth-first images of the
//! knot triples under the lifted IFS maps.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fif::{FifModel, Sample};

/// Default ceiling on materialized points (depth 12 for four knots, depth 10
/// for five).
pub const DEFAULT_MAX_SAMPLES: usize = 4_500_000;

/// Sorted attractor samples at a fixed generation depth.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    samples: Vec<Sample>,
    depth: usize,
}

impl SampleSet {
    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Samples sit on the graph itself, so the only error is floating-point
    /// roundoff along the map chain.
    pub fn error_bound(&self) -> f64 {
        0.0
    }

    /// Sample with the abscissa closest to `x`.
    pub fn nearest(&self, x: f64) -> &Sample {
        let idx = self.samples.partition_point(|s| s.x < x);
        match idx {
            0 => &self.samples[0],
            i if i == self.samples.len() => &self.samples[i - 1],
            i => {
                let (a, b) = (&self.samples[i - 1], &self.samples[i]);
                if x - a.x <= b.x - x {
                    a
                } else {
                    b
                }
            }
        }
    }

    pub fn into_samples(self) -> Vec<Sample> {
        self.samples
    }
}

/// Number of distinct abscissae at `depth`: `(N-1)^(depth+1) + 1`.
pub fn sample_count(knots: usize, depth: usize) -> Option<usize> {
    let mut count: usize = knots - 1;
    for _ in 0..depth {
        count = count.checked_mul(knots - 1)?;
    }
    count.checked_add(1)
}

/// Deepest level whose sample count stays within `max_samples`.
pub fn max_depth(knots: usize, max_samples: usize) -> usize {
    let mut depth = 0;
    while sample_count(knots, depth + 1).is_some_and(|c| c <= max_samples) {
        depth += 1;
    }
    depth
}

fn check_depth(model: &FifModel, depth: usize, max_samples: usize) -> Result<()> {
    let n = model.data().len();
    match sample_count(n, depth) {
        Some(c) if c <= max_samples => Ok(()),
        _ => Err(Error::DepthTooLarge { depth, max_depth: max_depth(n, max_samples) }),
    }
}

impl FifModel {
    pub fn sample_attractor(&self, depth: usize) -> Result<SampleSet> {
        self.sample_attractor_capped(depth, DEFAULT_MAX_SAMPLES)
    }

    pub fn sample_attractor_capped(&self, depth: usize, max_samples: usize) -> Result<SampleSet> {
        check_depth(self, depth, max_samples)?;
        let n = self.data().len();
        let mut current: Vec<Sample> = (0..n).map(|j| self.knot_sample(j)).collect();
        for _ in 0..depth {
            let mut next = Vec::with_capacity((n - 1) * (current.len() - 1) + 1);
            next.push(current[0]);
            for i in 0..n - 1 {
                // L_i is increasing and L_i(x_1) = L_{i-1}(x_N), so each block
                // continues where the previous one stopped.
                next.extend(current[1..].iter().map(|s| self.apply_map(i, s)));
            }
            current = next;
        }
        debug_assert!(current.windows(2).all(|w| w[0].x < w[1].x));
        Ok(SampleSet { samples: current, depth })
    }
}

/// Visits every depth-`depth` attractor point without materializing them.
///
/// Points are produced depth-first, so shared endpoints may be visited more
/// than once and the order is not sorted by abscissa.
pub fn visit_attractor<F>(model: &FifModel, depth: usize, max_samples: usize, mut f: F) -> Result<()>
where
    F: FnMut(&Sample),
{
    check_depth(model, depth, max_samples)?;
    fn descend<F: FnMut(&Sample)>(model: &FifModel, s: &Sample, left: usize, f: &mut F) {
        if left == 0 {
            f(s);
            return;
        }
        for i in 0..model.intervals() {
            descend(model, &model.apply_map(i, s), left - 1, f);
        }
    }
    for j in 0..model.data().len() {
        descend(model, &model.knot_sample(j), depth, &mut f);
    }
    Ok(())
}
