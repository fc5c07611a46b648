//! Dense bit-packed linear algebra over GF(2).
//!
//! Everything the spectral-sequence engine and the cobar oracle need reduces
//! to three primitives over GF(2):
//!
//! * an incremental echelonized subspace ([`Span`]) supporting membership,
//!   insertion, reduction, and exact solves (expressing a vector in the
//!   inserted generators),
//! * kernels of row-listed matrices ([`kernel`]),
//! * ranks ([`rank`]).
//!
//! Vectors are packed 64 columns per word.  Pivots are always chosen at the
//! *lowest* set column, so given a deterministic column ordering all outputs
//! are deterministic.

/// A packed GF(2) row vector.
///
/// The number of columns is managed by the caller; all vectors participating
/// in one computation must be created with the same width.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    words: Vec<u64>,
}

impl BitVec {
    /// The zero vector with room for `nbits` columns.
    #[must_use]
    pub fn zeros(nbits: usize) -> Self {
        BitVec { words: vec![0; nbits.div_ceil(64)] }
    }

    /// A vector with exactly the given bits set.
    #[must_use]
    pub fn from_indices(nbits: usize, idx: &[usize]) -> Self {
        let mut v = BitVec::zeros(nbits);
        for &i in idx {
            v.set(i, true);
        }
        v
    }

    /// Reads one bit.
    #[must_use]
    pub fn get(&self, i: usize) -> bool {
        let (w, b) = (i / 64, i % 64);
        w < self.words.len() && (self.words[w] >> b) & 1 == 1
    }

    /// Writes one bit.
    pub fn set(&mut self, i: usize, value: bool) {
        let (w, b) = (i / 64, i % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        if value {
            self.words[w] |= 1 << b;
        } else {
            self.words[w] &= !(1 << b);
        }
    }

    /// Flips one bit.
    pub fn flip(&mut self, i: usize) {
        let (w, b) = (i / 64, i % 64);
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] ^= 1 << b;
    }

    /// `self ^= other`.
    pub fn xor_assign(&mut self, other: &BitVec) {
        if other.words.len() > self.words.len() {
            self.words.resize(other.words.len(), 0);
        }
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= *b;
        }
    }

    /// True when no bit is set.
    #[must_use]
    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Index of the lowest set bit, if any.
    #[must_use]
    pub fn lowest_set(&self) -> Option<usize> {
        for (w, &word) in self.words.iter().enumerate() {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Number of set bits.
    #[must_use]
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Indices of all set bits, ascending.
    #[must_use]
    pub fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (w, &word) in self.words.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                out.push(w * 64 + b);
                rest &= rest - 1;
            }
        }
        out
    }
}

/// An echelonized subspace of GF(2)^n with solve support.
///
/// Successful [`Span::insert`] calls define the *generators* of the span, in
/// insertion order; [`Span::solve`] expresses a member vector as a sum of
/// those generators.
#[derive(Debug, Clone, Default)]
pub struct Span {
    /// Echelon rows, each paired with its expression in the generators.
    rows: Vec<(BitVec, BitVec)>,
    /// Pivot column of each echelon row.
    pivots: Vec<usize>,
    /// Number of generators inserted so far.
    ngens: usize,
}

impl Span {
    /// An empty span.
    #[must_use]
    pub fn new() -> Self {
        Span::default()
    }

    /// Dimension of the span.
    #[must_use]
    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Number of generators inserted (successful `insert` calls).
    #[must_use]
    pub fn generator_count(&self) -> usize {
        self.ngens
    }

    fn reduce_tracking(&self, v: &BitVec) -> (BitVec, BitVec) {
        let mut vec = v.clone();
        let mut combo = BitVec::zeros(self.ngens.max(1));
        loop {
            let Some(p) = vec.lowest_set() else { break };
            match self.pivots.iter().position(|&piv| piv == p) {
                Some(i) => {
                    vec.xor_assign(&self.rows[i].0);
                    combo.xor_assign(&self.rows[i].1);
                }
                None => break,
            }
        }
        (vec, combo)
    }

    /// Reduces `v` modulo the span (pivot elimination).
    #[must_use]
    pub fn reduce(&self, v: &BitVec) -> BitVec {
        self.reduce_tracking(v).0
    }

    /// True when `v` lies in the span.
    #[must_use]
    pub fn contains(&self, v: &BitVec) -> bool {
        self.reduce(v).is_zero()
    }

    /// Expresses `v` in the inserted generators, or `None` if `v` is outside.
    ///
    /// The result has bit `i` set when generator `i` (in insertion order)
    /// participates.
    #[must_use]
    pub fn solve(&self, v: &BitVec) -> Option<BitVec> {
        let (rest, combo) = self.reduce_tracking(v);
        rest.is_zero().then_some(combo)
    }

    /// Adjoins `v` as a new generator.  Returns `false` (and inserts nothing)
    /// if `v` already lies in the span.
    pub fn insert(&mut self, v: &BitVec) -> bool {
        let (vec, mut combo) = self.reduce_tracking(v);
        if vec.is_zero() {
            return false;
        }
        combo.set(self.ngens, true);
        self.ngens += 1;
        let pivot = vec.lowest_set().expect("nonzero vector has a pivot");
        // Keep the basis fully reduced: clear this pivot from existing rows.
        for (row, rc) in &mut self.rows {
            if row.get(pivot) {
                row.xor_assign(&vec);
                rc.xor_assign(&combo);
            }
        }
        self.rows.push((vec, combo));
        self.pivots.push(pivot);
        true
    }

    /// The echelonized basis rows (fully reduced, deterministic order of
    /// insertion-time pivots).
    #[must_use]
    pub fn basis(&self) -> Vec<&BitVec> {
        self.rows.iter().map(|(r, _)| r).collect()
    }
}

/// Rank of the row space of `rows`.
#[must_use]
pub fn rank(rows: &[BitVec]) -> usize {
    let mut span = Span::new();
    for r in rows {
        span.insert(r);
    }
    span.dim()
}

/// Kernel of the linear map `x ↦ Σ xᵢ·rowsᵢ`.
///
/// Returns a basis of combination vectors over the row indices: bit `i` of a
/// result is set when row `i` enters the combination.  The basis is reduced
/// and deterministic.
#[must_use]
pub fn kernel(rows: &[BitVec]) -> Vec<BitVec> {
    let n = rows.len();
    let mut span: Vec<(BitVec, BitVec)> = Vec::new(); // (image echelon row, combo)
    let mut pivots: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut vec = r.clone();
        let mut combo = BitVec::from_indices(n, &[i]);
        loop {
            let Some(p) = vec.lowest_set() else { break };
            match pivots.iter().position(|&piv| piv == p) {
                Some(k) => {
                    vec.xor_assign(&span[k].0);
                    combo.xor_assign(&span[k].1);
                }
                None => break,
            }
        }
        if vec.is_zero() {
            out.push(combo);
        } else {
            pivots.push(vec.lowest_set().expect("nonzero"));
            span.push((vec, combo));
        }
    }
    out
}
