use std::collections::BTreeSet;

use crate::error::{Error, Result};

/// One digit of a sponge: an r-tuple with coordinate `i` in `0..bases[i]`.
pub type Digit = Vec<u32>;

/// Bases `m_1 <= ... <= m_r` together with a digit set `D`.
///
/// Digits are kept sorted and deduplicated, so a digit's position in
/// [`DigitSystem::digits`] is a stable letter index for the level-1 alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitSystem {
    bases: Vec<u32>,
    digits: Vec<Digit>,
}

impl DigitSystem {
    pub fn new(bases: Vec<u32>, digits: Vec<Digit>) -> Result<Self> {
        if bases.len() < 2 {
            return Err(Error::RankTooSmall { rank: bases.len() });
        }
        if let Some((index, &base)) = bases.iter().enumerate().find(|(_, &b)| b < 2) {
            return Err(Error::BaseTooSmall { index, base });
        }
        if bases.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::BasesNotSorted);
        }
        if digits.is_empty() {
            return Err(Error::EmptyDigits);
        }
        for (index, d) in digits.iter().enumerate() {
            if d.len() != bases.len() {
                return Err(Error::DigitArity {
                    index,
                    expected: bases.len(),
                    found: d.len(),
                });
            }
            if d.iter().zip(&bases).any(|(&c, &m)| c >= m) {
                return Err(Error::DigitOutOfRange { index });
            }
        }
        let digits: BTreeSet<Digit> = digits.into_iter().collect();
        Ok(Self {
            bases,
            digits: digits.into_iter().collect(),
        })
    }

    /// The full product digit set `{0..m_1-1} x ... x {0..m_r-1}`.
    pub fn full_product(bases: Vec<u32>) -> Result<Self> {
        let mut digits: Vec<Digit> = vec![vec![]];
        for &m in &bases {
            digits = digits
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
        Self::new(bases, digits)
    }

    pub fn rank(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[u32] {
        &self.bases
    }

    pub fn digits(&self) -> &[Digit] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn index_of(&self, digit: &[u32]) -> Option<usize> {
        self.digits
            .binary_search_by(|d| d.as_slice().cmp(digit))
            .ok()
    }

    /// `D_j`: the distinct prefixes of length `j` (`1 <= j <= r`).
    pub fn project_alphabet(&self, prefix_len: usize) -> Result<ProjectedAlphabet> {
        if prefix_len == 0 || prefix_len > self.rank() {
            return Err(Error::LevelOutOfRange {
                level: prefix_len,
                max: self.rank(),
            });
        }
        let symbols: BTreeSet<Vec<u32>> = self
            .digits
            .iter()
            .map(|d| d[..prefix_len].to_vec())
            .collect();
        Ok(ProjectedAlphabet {
            prefix_len,
            symbols: symbols.into_iter().collect(),
        })
    }

    /// Alphabet of chain level `level` (1-based). Level `i` keeps the first
    /// `r - i + 1` coordinates, so level 1 is `D` itself and level `r` is `D_1`.
    pub fn level_alphabet(&self, level: usize) -> Result<ProjectedAlphabet> {
        let r = self.rank();
        if level == 0 || level > r {
            return Err(Error::LevelOutOfRange { level, max: r });
        }
        self.project_alphabet(r - level + 1)
    }

    pub fn levels(&self) -> LevelStructure {
        LevelStructure::new(self)
    }

    /// The digit system of the `m`-th iterate: blocks of `m` digits merged into
    /// one digit over bases `m_i^m`, most significant digit first.
    pub fn power(&self, m: u32) -> Result<Self> {
        assert!(m >= 1, "power of a digit system needs m >= 1");
        let bases: Vec<u32> = self.bases.iter().map(|b| b.pow(m)).collect();
        let mut blocks: Vec<Digit> = vec![vec![0; self.rank()]];
        for _ in 0..m {
            blocks = blocks
                .into_iter()
                .flat_map(|acc| {
                    self.digits.iter().map(move |d| {
                        acc.iter()
                            .zip(d)
                            .zip(&self.bases)
                            .map(|((&a, &c), &b)| a * b + c)
                            .collect()
                    })
                })
                .collect();
        }
        Self::new(bases, blocks)
    }
}

/// `D_j` as a sorted symbol list; positions are letter indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectedAlphabet {
    prefix_len: usize,
    symbols: Vec<Vec<u32>>,
}

impl ProjectedAlphabet {
    pub fn prefix_len(&self) -> usize {
        self.prefix_len
    }

    pub fn symbols(&self) -> &[Vec<u32>] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn index_of(&self, symbol: &[u32]) -> Option<usize> {
        self.symbols
            .binary_search_by(|s| s.as_slice().cmp(symbol))
            .ok()
    }
}

/// Letter tables for every chain level plus the projection maps between them.
///
/// Levels are numbered `1..=r` as in the chain `X_1 -> X_2 -> ... -> X_r`.
#[derive(Debug, Clone)]
pub struct LevelStructure {
    alphabets: Vec<ProjectedAlphabet>,
    // parents[i - 1][x]: image at level i + 1 of letter x of level i
    parents: Vec<Vec<usize>>,
    // children[i - 1][y]: letters of level i - 1 mapping onto letter y of level i
    children: Vec<Vec<Vec<usize>>>,
}

impl LevelStructure {
    fn new(sys: &DigitSystem) -> Self {
        let r = sys.rank();
        let alphabets: Vec<ProjectedAlphabet> = (1..=r)
            .map(|level| sys.level_alphabet(level).expect("level in range"))
            .collect();
        let mut parents = Vec::with_capacity(r);
        let mut children = vec![Vec::new(); r];
        children[0] = vec![Vec::new(); alphabets[0].len()];
        for level in 1..=r {
            let here = &alphabets[level - 1];
            if level == r {
                parents.push(Vec::new());
                break;
            }
            let up = &alphabets[level];
            let map: Vec<usize> = here
                .symbols()
                .iter()
                .map(|s| up.index_of(&s[..up.prefix_len()]).expect("prefix present"))
                .collect();
            let mut kids = vec![Vec::new(); up.len()];
            for (x, &y) in map.iter().enumerate() {
                kids[y].push(x);
            }
            children[level] = kids;
            parents.push(map);
        }
        Self {
            alphabets,
            parents,
            children,
        }
    }

    pub fn rank(&self) -> usize {
        self.alphabets.len()
    }

    pub fn alphabet(&self, level: usize) -> &ProjectedAlphabet {
        &self.alphabets[level - 1]
    }

    pub fn size(&self, level: usize) -> usize {
        self.alphabets[level - 1].len()
    }

    /// Image of `letter` (at `level`) in level `level + 1`.
    pub fn parent(&self, level: usize, letter: usize) -> usize {
        self.parents[level - 1][letter]
    }

    /// Letters of level `level - 1` that project onto `letter` (needs `level >= 2`).
    pub fn children(&self, level: usize, letter: usize) -> &[usize] {
        &self.children[level - 1][letter]
    }

    /// Image of a level-1 letter at an arbitrary level.
    pub fn project_from_bottom(&self, letter: usize, level: usize) -> usize {
        (1..level).fold(letter, |x, l| self.parent(l, x))
    }
}
