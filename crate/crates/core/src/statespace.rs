//! Canonical encoding of binary product state spaces and the elementary
//! information-theoretic primitives built on them.
//!
//! A system of N nodes, each with state in {-1, +1}, has 2^N joint states.
//! State index `i` encodes node `v` in bit `v`: bit set means +1, bit clear
//! means -1, node 0 at the least-significant bit. Everything downstream
//! (kernels, joints, marginals) indexes states this way.
//!
//! Conventions fixed here and inherited by every other module:
//! * logarithms are base 2; public values are bits,
//! * 0 log 0 = 0 and 0 log (0/0) = 0,
//! * probability mass is validated to 1e-12 and renormalized on construction.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Validation tolerance for probability mass.
pub const PROB_TOL: f64 = 1e-12;

const LN_2: f64 = std::f64::consts::LN_2;

/// x log2(x) with the 0 log 0 = 0 convention.
#[inline]
pub(crate) fn xlog2(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln() / LN_2
    } else {
        0.0
    }
}

/// Shannon entropy in bits of a nonnegative table (need not be normalized;
/// callers pass probability tables).
pub(crate) fn entropy_of(values: &[f64]) -> f64 {
    -values.iter().copied().map(xlog2).sum::<f64>()
}

/// The number of binary nodes, with the state-index convention attached.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SystemShape {
    num_nodes: usize,
}

impl SystemShape {
    /// Hard cap so 2^N state vectors stay allocatable.
    pub const MAX_NODES: usize = 20;

    pub fn new(num_nodes: usize) -> Result<Self> {
        if num_nodes == 0 || num_nodes > Self::MAX_NODES {
            return Err(Error::InvalidArgument(format!(
                "num_nodes must be in 1..={}, got {num_nodes}",
                Self::MAX_NODES
            )));
        }
        Ok(SystemShape { num_nodes })
    }

    pub fn num_nodes(&self) -> usize {
        self.num_nodes
    }

    pub fn num_states(&self) -> usize {
        1 << self.num_nodes
    }

    /// Spin (+1 or -1) of `node` in the state with this index.
    #[inline]
    pub fn spin(&self, index: usize, node: usize) -> i8 {
        debug_assert!(node < self.num_nodes);
        if (index >> node) & 1 == 1 {
            1
        } else {
            -1
        }
    }

    /// Index of a state given its spins, node 0 at the least-significant bit.
    pub fn encode_state(&self, spins: &[i8]) -> Result<usize> {
        if spins.len() != self.num_nodes {
            return Err(Error::InvalidState(format!(
                "expected {} spins, got {}",
                self.num_nodes,
                spins.len()
            )));
        }
        let mut index = 0usize;
        for (v, &s) in spins.iter().enumerate() {
            match s {
                1 => index |= 1 << v,
                -1 => {}
                other => {
                    return Err(Error::InvalidState(format!(
                        "spin at node {v} must be +1 or -1, got {other}"
                    )))
                }
            }
        }
        Ok(index)
    }

    /// Spins of the state with this index; inverse of [`encode_state`].
    ///
    /// [`encode_state`]: SystemShape::encode_state
    pub fn decode_state(&self, index: usize) -> Vec<i8> {
        assert!(index < self.num_states(), "state index out of range");
        (0..self.num_nodes).map(|v| self.spin(index, v)).collect()
    }

    /// Compact index of a state restricted to `nodes` (ascending), bit k of
    /// the result taken from node `nodes[k]`.
    #[inline]
    pub fn subset_index(&self, state: usize, nodes: &[usize]) -> usize {
        let mut out = 0usize;
        for (k, &v) in nodes.iter().enumerate() {
            out |= ((state >> v) & 1) << k;
        }
        out
    }
}

fn check_node_subset(shape: SystemShape, nodes: &[usize], what: &str) -> Result<()> {
    for window in nodes.windows(2) {
        if window[0] >= window[1] {
            return Err(Error::InvalidArgument(format!(
                "{what} nodes must be strictly ascending"
            )));
        }
    }
    if let Some(&last) = nodes.last() {
        if last >= shape.num_nodes() {
            return Err(Error::InvalidArgument(format!(
                "{what} node {last} out of range for {} nodes",
                shape.num_nodes()
            )));
        }
    }
    Ok(())
}

/// Validate a probability table: nonnegative, finite, total mass within
/// `PROB_TOL` of 1. Returns the renormalizing sum.
fn validated_mass(values: &[f64]) -> Result<f64> {
    for (i, &x) in values.iter().enumerate() {
        if !x.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "non-finite probability {x} at index {i}"
            )));
        }
        if x < 0.0 {
            return Err(Error::NegativeProbability { index: i, value: x });
        }
    }
    let sum: f64 = values.iter().sum();
    if (sum - 1.0).abs() > PROB_TOL {
        return Err(Error::NotNormalized {
            sum,
            tolerance: PROB_TOL,
        });
    }
    Ok(sum)
}

/// A distribution over the 2^N joint states.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbVector {
    shape: SystemShape,
    probs: Vec<f64>,
}

impl ProbVector {
    /// Validates and renormalizes (the mass must already be within 1e-12
    /// of 1; anything further off is rejected rather than silently scaled).
    pub fn new(shape: SystemShape, probs: Vec<f64>) -> Result<Self> {
        if probs.len() != shape.num_states() {
            return Err(Error::InvalidArgument(format!(
                "expected {} probabilities, got {}",
                shape.num_states(),
                probs.len()
            )));
        }
        let sum = validated_mass(&probs)?;
        let mut probs = probs;
        if sum != 1.0 {
            for x in &mut probs {
                *x /= sum;
            }
        }
        Ok(ProbVector { shape, probs })
    }

    pub fn uniform(shape: SystemShape) -> Self {
        let n = shape.num_states();
        ProbVector {
            shape,
            probs: vec![1.0 / n as f64; n],
        }
    }

    /// Point mass on one state.
    pub fn dirac(shape: SystemShape, index: usize) -> Self {
        assert!(index < shape.num_states(), "state index out of range");
        let mut probs = vec![0.0; shape.num_states()];
        probs[index] = 1.0;
        ProbVector { shape, probs }
    }

    /// Convex combination sum_k lambda_k p_k. Weights must be a probability
    /// vector over `points`; tiny negative results of float cancellation are
    /// clamped to 0.
    pub fn mix(points: &[ProbVector], weights: &[f64]) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "mix needs matching, non-empty points and weights".into(),
            ));
        }
        let shape = points[0].shape;
        let mut probs = vec![0.0; shape.num_states()];
        for (pt, &w) in points.iter().zip(weights) {
            if w < -PROB_TOL {
                return Err(Error::InvalidArgument(format!("negative mix weight {w}")));
            }
            for (acc, &x) in probs.iter_mut().zip(&pt.probs) {
                *acc += w.max(0.0) * x;
            }
        }
        ProbVector::new(shape, probs)
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    #[inline]
    pub fn get(&self, index: usize) -> f64 {
        self.probs[index]
    }

    /// Shannon entropy H(X) in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of(&self.probs)
    }

    /// Marginal distribution of p on a node subset (ascending), indexed by
    /// [`SystemShape::subset_index`].
    pub fn marginal_onto(&self, nodes: &[usize]) -> Result<Vec<f64>> {
        check_node_subset(self.shape, nodes, "marginal")?;
        let mut out = vec![0.0; 1 << nodes.len()];
        for (x, &px) in self.probs.iter().enumerate() {
            out[self.shape.subset_index(x, nodes)] += px;
        }
        Ok(out)
    }

    /// CSV text: `# shape N=<n>` then one probability per state index.
    pub fn to_csv_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# shape N={}", self.shape.num_nodes());
        for &x in &self.probs {
            let _ = writeln!(out, "{x}");
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let (shape, rows) = parse_csv_rows(text, 1)?;
        let probs = rows.into_iter().map(|mut r| r.pop().unwrap()).collect();
        ProbVector::new(shape, probs)
    }
}

/// A row-stochastic 2^N x 2^N transition kernel, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct StochMatrix {
    shape: SystemShape,
    data: Vec<f64>,
}

impl StochMatrix {
    /// Validates each row (nonnegative, mass within 1e-12 of 1) and
    /// renormalizes rows on construction.
    pub fn from_rows(shape: SystemShape, data: Vec<f64>) -> Result<Self> {
        let n = shape.num_states();
        if data.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        let mut data = data;
        for x in 0..n {
            let row = &mut data[x * n..(x + 1) * n];
            let sum = validated_mass(row).map_err(|e| match e {
                Error::NegativeProbability { index, value } => Error::NegativeProbability {
                    index: x * n + index,
                    value,
                },
                other => other,
            })?;
            if sum != 1.0 {
                for v in row {
                    *v /= sum;
                }
            }
        }
        Ok(StochMatrix { shape, data })
    }

    /// The infinite-temperature kernel: every row uniform.
    pub fn uniform(shape: SystemShape) -> Self {
        let n = shape.num_states();
        StochMatrix {
            shape,
            data: vec![1.0 / n as f64; n * n],
        }
    }

    pub fn identity(shape: SystemShape) -> Self {
        let n = shape.num_states();
        let mut data = vec![0.0; n * n];
        for x in 0..n {
            data[x * n + x] = 1.0;
        }
        StochMatrix { shape, data }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[f64] {
        let n = self.shape.num_states();
        &self.data[x * n..(x + 1) * n]
    }

    #[inline]
    pub fn get(&self, x: usize, x_next: usize) -> f64 {
        self.data[x * self.shape.num_states() + x_next]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.data.iter().all(|&v| v > 0.0)
    }

    /// CSV text: `# shape N=<n>` then one comma-separated row per state index.
    pub fn to_csv_string(&self) -> String {
        let n = self.shape.num_states();
        let mut out = String::new();
        let _ = writeln!(out, "# shape N={}", self.shape.num_nodes());
        for x in 0..n {
            let row: Vec<String> = self.row(x).iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        let (shape, rows) = parse_csv_rows(text, usize::MAX)?;
        let data = rows.into_iter().flatten().collect();
        StochMatrix::from_rows(shape, data)
    }
}

/// Parse the `# shape N=<n>` header plus 2^N numeric rows. `width` is the
/// required cell count per row (`usize::MAX` means "one per state").
fn parse_csv_rows(text: &str, width: usize) -> Result<(SystemShape, Vec<Vec<f64>>)> {
    let mut shape: Option<SystemShape> = None;
    let mut rows = Vec::new();
    for (line_no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let rest = rest.trim();
            if let Some(n) = rest.strip_prefix("shape N=") {
                let n: usize = n.trim().parse().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    message: format!("bad shape header {line:?}"),
                })?;
                shape = Some(SystemShape::new(n)?);
            }
            continue;
        }
        let cells: Result<Vec<f64>> = line
            .split(',')
            .map(|c| {
                c.trim().parse::<f64>().map_err(|_| Error::Parse {
                    line: line_no + 1,
                    message: format!("bad number {:?}", c.trim()),
                })
            })
            .collect();
        rows.push(cells?);
    }
    let shape = shape.ok_or(Error::Parse {
        line: 1,
        message: "missing `# shape N=<n>` header".into(),
    })?;
    let want = if width == usize::MAX {
        shape.num_states()
    } else {
        width
    };
    if rows.len() != shape.num_states() {
        return Err(Error::Parse {
            line: rows.len() + 1,
            message: format!("expected {} rows, found {}", shape.num_states(), rows.len()),
        });
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != want {
            return Err(Error::Parse {
                line: i + 2,
                message: format!("expected {want} cells, found {}", row.len()),
            });
        }
    }
    Ok((shape, rows))
}

/// The joint distribution of one transition, joint(x, x') = p(x) P(x, x').
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist {
    shape: SystemShape,
    data: Vec<f64>,
}

impl JointDist {
    pub fn from_pair(p: &ProbVector, kernel: &StochMatrix) -> Self {
        assert_eq!(p.shape(), kernel.shape(), "shape mismatch");
        let n = p.shape().num_states();
        let mut data = vec![0.0; n * n];
        for x in 0..n {
            let px = p.get(x);
            if px == 0.0 {
                continue;
            }
            let row = kernel.row(x);
            for (cell, &k) in data[x * n..(x + 1) * n].iter_mut().zip(row) {
                *cell = px * k;
            }
        }
        JointDist { shape: p.shape(), data }
    }

    pub fn shape(&self) -> SystemShape {
        self.shape
    }

    #[inline]
    pub fn get(&self, x: usize, x_next: usize) -> f64 {
        self.data[x * self.shape.num_states() + x_next]
    }

    #[inline]
    pub fn row(&self, x: usize) -> &[f64] {
        let n = self.shape.num_states();
        &self.data[x * n..(x + 1) * n]
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Marginal over x; recovers p by construction.
    pub fn input_marginal(&self) -> ProbVector {
        let n = self.shape.num_states();
        let probs = (0..n).map(|x| self.row(x).iter().sum()).collect();
        ProbVector::new(self.shape, probs).expect("joint rows form a distribution")
    }

    /// Marginal over x'.
    pub fn output_marginal(&self) -> ProbVector {
        let n = self.shape.num_states();
        let mut probs = vec![0.0; n];
        for x in 0..n {
            for (acc, &v) in probs.iter_mut().zip(self.row(x)) {
                *acc += v;
            }
        }
        ProbVector::new(self.shape, probs).expect("joint columns form a distribution")
    }

    /// Joint entropy H(X, X') in bits.
    pub fn entropy(&self) -> f64 {
        entropy_of(&self.data)
    }

    /// Marginal table over X_A x X'_B, summing out all other coordinates.
    /// `input_nodes` and `output_nodes` are ascending subsets of the node set;
    /// at least one must be non-empty.
    pub fn marginal(&self, input_nodes: &[usize], output_nodes: &[usize]) -> Result<MarginalTable> {
        if input_nodes.is_empty() && output_nodes.is_empty() {
            return Err(Error::InvalidArgument(
                "marginal needs at least one input or output node".into(),
            ));
        }
        check_node_subset(self.shape, input_nodes, "input")?;
        check_node_subset(self.shape, output_nodes, "output")?;
        let a_states = 1usize << input_nodes.len();
        let b_states = 1usize << output_nodes.len();
        let mut probs = vec![0.0; a_states * b_states];
        let n = self.shape.num_states();
        for x in 0..n {
            let a = self.shape.subset_index(x, input_nodes);
            let row = self.row(x);
            for (y, &v) in row.iter().enumerate() {
                if v != 0.0 {
                    let b = self.shape.subset_index(y, output_nodes);
                    probs[a * b_states + b] += v;
                }
            }
        }
        Ok(MarginalTable {
            input_nodes: input_nodes.to_vec(),
            output_nodes: output_nodes.to_vec(),
            probs,
        })
    }
}

/// A marginal of a [`JointDist`] over X_A x X'_B, row index over X_A.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalTable {
    input_nodes: Vec<usize>,
    output_nodes: Vec<usize>,
    probs: Vec<f64>,
}

impl MarginalTable {
    pub fn input_nodes(&self) -> &[usize] {
        &self.input_nodes
    }

    pub fn output_nodes(&self) -> &[usize] {
        &self.output_nodes
    }

    pub fn num_input_states(&self) -> usize {
        1 << self.input_nodes.len()
    }

    pub fn num_output_states(&self) -> usize {
        1 << self.output_nodes.len()
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.probs[a * self.num_output_states() + b]
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn entropy(&self) -> f64 {
        entropy_of(&self.probs)
    }

    /// Marginal of the table over its input axis.
    pub fn input_sums(&self) -> Vec<f64> {
        let b = self.num_output_states();
        self.probs.chunks(b).map(|row| row.iter().sum()).collect()
    }

    /// Marginal of the table over its output axis.
    pub fn output_sums(&self) -> Vec<f64> {
        let b = self.num_output_states();
        let mut out = vec![0.0; b];
        for row in self.probs.chunks(b) {
            for (acc, &v) in out.iter_mut().zip(row) {
                *acc += v;
            }
        }
        out
    }
}

/// KL divergence D^p(P || Q) in bits between two kernels with respect to an
/// input distribution:
///
///   sum_x p(x) sum_x' P(x,x') log2( P(x,x') / Q(x,x') )
///
/// Zero-mass rows of p are ignored, 0 log(0/q) = 0, and a zero of Q under a
/// positive p(x) P(x,x') is an absolute-continuity error (the divergence
/// would be +inf), reported with the offending transition.
pub fn kl_matrices(p: &ProbVector, kernel: &StochMatrix, other: &StochMatrix) -> Result<f64> {
    assert_eq!(p.shape(), kernel.shape(), "shape mismatch");
    assert_eq!(p.shape(), other.shape(), "shape mismatch");
    let n = p.shape().num_states();
    let mut total = 0.0;
    for x in 0..n {
        let px = p.get(x);
        if px == 0.0 {
            continue;
        }
        let prow = kernel.row(x);
        let qrow = other.row(x);
        let mut inner = 0.0;
        for y in 0..n {
            let pv = prow[y];
            if pv == 0.0 {
                continue;
            }
            let qv = qrow[y];
            if qv == 0.0 {
                return Err(Error::DivergenceInfinite { x, x_next: y });
            }
            inner += pv * (pv / qv).ln();
        }
        total += px * inner;
    }
    Ok(total / LN_2)
}
