//! Transfer matrices for sofic chains.
//!
//! For every level-2 symbol `v` the count matrix `A_v` has entry `(i, j)`
//! equal to the number of edges `j -> i` whose label projects onto `v`. When
//! all nonzero `A_v` share a positive eigenvector, word counts over a level-2
//! word grow like the product of the per-symbol eigenvalues, and the weighted
//! entropy becomes a nested sum of eigenvalue powers.

use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::symbolic::{Chain, LabeledGraph, LevelStructure, Word};
use crate::weights::{exponents_from_bases, Exponents};

const PERRON_TOLERANCE: f64 = 1e-13;
const PERRON_MAX_ITERS: usize = 100_000;
const ALIGNMENT_TOLERANCE: f64 = 1e-10;

/// Square matrix of nonnegative integers, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<u64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows<R: AsRef<[u64]>>(rows: &[R]) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            assert_eq!(r.as_ref().len(), n, "matrix must be square");
            data.extend_from_slice(r.as_ref());
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }

    fn bump(&mut self, i: usize, j: usize) {
        self.data[i * self.n + j] += 1;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn sum(&self) -> u64 {
        self.data.iter().sum()
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.data.chunks(self.n).map(<[u64]>::to_vec).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.get(k, j);
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.n)
            .map(|row| row.iter().zip(v).map(|(&a, &x)| a as f64 * x).sum())
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.chunks(self.n)).finish()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountMatrix {
    pub label: Vec<u32>,
    pub matrix: IntMatrix,
}

/// One matrix per tuple of the coordinate box `{0..m_1-1} x ... x {0..m_k-1}`
/// with `k = prefix_len`, zero matrices included, in lexicographic order.
pub fn build_count_matrices(graph: &LabeledGraph, bases: &[u32], prefix_len: usize) -> Vec<CountMatrix> {
    let n = graph.vertex_count();
    let mut labels: Vec<Vec<u32>> = vec![vec![]];
    for &m in &bases[..prefix_len] {
        labels = labels
            .into_iter()
            .flat_map(|p| {
                (0..m).map(move |c| {
                    let mut q = p.clone();
                    q.push(c);
                    q
                })
            })
            .collect();
    }
    let mut out: Vec<CountMatrix> = labels
        .into_iter()
        .map(|label| CountMatrix {
            label,
            matrix: IntMatrix::zeros(n),
        })
        .collect();
    for e in graph.edges() {
        let prefix = &e.label[..prefix_len];
        let k = out
            .binary_search_by(|c| c.label.as_slice().cmp(prefix))
            .expect("edge label inside the coordinate box");
        out[k].matrix.bump(e.target, e.source);
    }
    out
}

/// Label-agnostic adjacency counts, same orientation as the count matrices.
pub fn adjacency_matrix(graph: &LabeledGraph) -> IntMatrix {
    let mut m = IntMatrix::zeros(graph.vertex_count());
    for e in graph.edges() {
        m.bump(e.target, e.source);
    }
    m
}

/// A positive vector shared as eigenvector by every nonzero count matrix.
#[derive(Debug, Clone)]
pub struct SpectralAlignment {
    /// Normalized to max entry 1.
    pub eigenvector: Vec<f64>,
    /// `(label, eigenvalue)`; `None` for zero matrices.
    pub eigenvalues: Vec<(Vec<u32>, Option<f64>)>,
}

impl SpectralAlignment {
    pub fn eigenvalue(&self, label: &[u32]) -> Option<f64> {
        self.eigenvalues
            .iter()
            .find(|(l, _)| l.as_slice() == label)
            .and_then(|(_, v)| *v)
    }

    /// `max v / min v`.
    pub fn spread(&self) -> f64 {
        let min = self.eigenvector.iter().copied().fold(f64::INFINITY, f64::min);
        1.0 / min
    }
}

/// Perron vector of `S + I` (same eigenvectors as `S`, no periodicity) by
/// power iteration; `None` when it does not settle.
fn perron_vector(sum: &IntMatrix) -> Option<Vec<f64>> {
    let shifted = sum.add(&IntMatrix::identity(sum.dim()));
    let mut v = vec![1.0; sum.dim()];
    for _ in 0..PERRON_MAX_ITERS {
        let mut next = shifted.mul_vec(&v);
        let max = next.iter().copied().fold(0.0, f64::max);
        if max <= 0.0 || !max.is_finite() {
            return None;
        }
        next.iter_mut().for_each(|x| *x /= max);
        let delta = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        v = next;
        if delta < PERRON_TOLERANCE {
            return Some(v);
        }
    }
    None
}

/// Finds the common positive eigenvector of the nonzero matrices, if any.
pub fn detect_alignment(matrices: &[CountMatrix]) -> Option<SpectralAlignment> {
    let first = matrices.iter().find(|c| !c.matrix.is_zero())?;
    let n = first.matrix.dim();
    let sum = matrices
        .iter()
        .fold(IntMatrix::zeros(n), |acc, c| acc.add(&c.matrix));
    let v = perron_vector(&sum)?;
    // strictly positive, not a vector whose small entries are still decaying
    if v.iter().any(|&x| x < 1e-9) {
        return None;
    }
    let argmax = (0..n).max_by(|&i, &j| v[i].total_cmp(&v[j]))?;
    let mut eigenvalues = Vec::with_capacity(matrices.len());
    for c in matrices {
        if c.matrix.is_zero() {
            eigenvalues.push((c.label.clone(), None));
            continue;
        }
        let av = c.matrix.mul_vec(&v);
        let lambda = av[argmax] / v[argmax];
        if lambda <= 0.0 {
            return None;
        }
        let scale = v.iter().map(|x| (lambda * x).abs()).fold(0.0, f64::max);
        let residual = av
            .iter()
            .zip(&v)
            .map(|(a, x)| (a - lambda * x).abs())
            .fold(0.0, f64::max);
        if residual > ALIGNMENT_TOLERANCE * scale {
            return None;
        }
        eigenvalues.push((c.label.clone(), Some(lambda)));
    }
    Some(SpectralAlignment {
        eigenvector: v,
        eigenvalues,
    })
}

fn chain_graph(chain: &Chain) -> LabeledGraph {
    chain
        .graph()
        .cloned()
        .unwrap_or_else(|| LabeledGraph::single_vertex(chain.system().digits()))
}

/// Count matrices of `chain` indexed by level-2 symbols (first `r - 1` coordinates).
pub fn level2_count_matrices(chain: &Chain) -> Vec<CountMatrix> {
    build_count_matrices(&chain_graph(chain), chain.system().bases(), chain.rank() - 1)
}

/// Alignment of the chain's level-2 count matrices.
pub fn chain_alignment(chain: &Chain) -> Result<SpectralAlignment> {
    if !chain.upper_levels_full_shift() {
        return Err(Error::UpperLevelsNotFullShift);
    }
    detect_alignment(&level2_count_matrices(chain)).ok_or(Error::NotAligned)
}

fn nest_upward(levels: &LevelStructure, level2: Vec<f64>, a: &Exponents) -> f64 {
    let r = levels.rank();
    let mut current = level2;
    for level in 3..=r {
        let exponent = a.get(level - 2);
        current = (0..levels.size(level))
            .map(|y| {
                levels
                    .children(level, y)
                    .iter()
                    .map(|&x| current[x].powf(exponent))
                    .sum()
            })
            .collect();
    }
    current.iter().map(|&z| z.powf(a.get(r - 1))).sum()
}

/// The nested eigenvalue sum whose logarithm is the weighted entropy; for a
/// sponge it coincides with `Z_0`.
pub fn sofic_bracket(chain: &Chain, a: &Exponents) -> Result<f64> {
    a.check_rank(chain.rank())?;
    let alignment = chain_alignment(chain)?;
    let levels = chain.levels();
    let level2 = levels
        .alphabet(2)
        .symbols()
        .iter()
        .map(|s| alignment.eigenvalue(s).expect("every level-2 symbol carries edges"))
        .collect();
    Ok(nest_upward(levels, level2, a))
}

/// `h^a` for a spectrally aligned chain whose upper levels are full shifts.
pub fn sofic_weighted_entropy_closed_form(chain: &Chain, a: &Exponents) -> Result<f64> {
    Ok(sofic_bracket(chain, a)?.ln())
}

pub const DIMENSION_AMBIGUITY_WARNING: &str = "dimension ambiguity: the nested logarithm h_a_nats and the \
     normalized value h_a/log(m_1) are both candidates for the Hausdorff dimension of this sofic set; \
     both are reported and neither is selected";

pub const NOT_RIGHT_RESOLVING_WARNING: &str = "graph is not right-resolving: eigenvalue products count \
     paths, distinct label words may grow more slowly, so the closed form can exceed the word-count limit";

#[derive(Debug, Clone, PartialEq)]
pub struct SoficDimensionReport {
    pub h_a_nats: f64,
    pub h_over_log_m1: f64,
    pub bracket_value: f64,
    pub warnings: Vec<String>,
}

/// Closed form at base-derived exponents, reported both raw and divided by `log m_1`.
pub fn sofic_dimension_report(chain: &Chain) -> Result<SoficDimensionReport> {
    let a = exponents_from_bases(chain.system().bases())?;
    let bracket = sofic_bracket(chain, &a)?;
    let h = bracket.ln();
    let mut warnings = vec![DIMENSION_AMBIGUITY_WARNING.to_string()];
    if chain.graph().is_some_and(|g| !g.is_right_resolving()) {
        warnings.push(NOT_RIGHT_RESOLVING_WARNING.to_string());
    }
    Ok(SoficDimensionReport {
        h_a_nats: h,
        h_over_log_m1: h / (chain.system().bases()[0] as f64).ln(),
        bracket_value: bracket,
        warnings,
    })
}

/// Number of `(start vertex, path)` pairs whose labels project onto the
/// level-2 word `v`.
pub fn path_count(chain: &Chain, v: &Word) -> BigUint {
    assert_eq!(v.level, 2, "path counts are taken over level-2 words");
    let matrices = level2_count_matrices(chain);
    let alphabet = chain.levels().alphabet(2);
    let n = chain.graph().map_or(1, LabeledGraph::vertex_count);
    let mut x = vec![BigUint::from(1u32); n];
    for &letter in &v.letters {
        let symbol = &alphabet.symbols()[letter];
        let m = &matrices
            .iter()
            .find(|c| &c.label == symbol)
            .expect("symbol in box")
            .matrix;
        x = (0..n)
            .map(|i| (0..n).map(|j| &x[j] * m.get(i, j)).sum())
            .collect();
    }
    x.into_iter().sum()
}
