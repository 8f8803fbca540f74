//! Fixed-width bit vector over vertex indices `0..n`.

/// Set of vertex indices below a fixed bound. The bound is not stored;
/// callers pass vertex counts explicitly where iteration needs one.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct VertexSet {
    blocks: Vec<u64>,
}

impl VertexSet {
    pub fn empty(n: usize) -> Self {
        VertexSet {
            blocks: vec![0; n.div_ceil(64).max(1)],
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::empty(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn insert(&mut self, v: usize) {
        self.blocks[v / 64] |= 1 << (v % 64);
    }

    pub fn remove(&mut self, v: usize) {
        self.blocks[v / 64] &= !(1 << (v % 64));
    }

    pub fn contains(&self, v: usize) -> bool {
        match self.blocks.get(v / 64) {
            Some(b) => b >> (v % 64) & 1 == 1,
            None => false,
        }
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.iter().all(|&b| b == 0)
    }

    pub fn with(&self, v: usize) -> Self {
        let mut s = self.clone();
        s.insert(v);
        s
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (a, b) in s.blocks.iter_mut().zip(&other.blocks) {
            *a |= b;
        }
        s
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(i, &b)| {
            (0..64).filter(move |j| b >> j & 1 == 1).map(move |j| i * 64 + j)
        })
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }
}

impl std::fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
