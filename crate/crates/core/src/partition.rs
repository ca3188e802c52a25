//! 1-D block partitioning.
//!
//! Vertex ids are split into `p` contiguous blocks of `chunk = ceil(n / p)`
//! vertices. Rank `r` owns `[r * chunk, min((r + 1) * chunk, n))`; trailing
//! ranks may own fewer vertices or none at all when `p > n`.

use std::ops::Range;

use crate::{Error, Result, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionMap {
    n: u64,
    p: usize,
    chunk: u64,
}

impl PartitionMap {
    pub fn new(n: u64, p: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::InvalidParameter(
                "rank count must be at least 1".into(),
            ));
        }
        Ok(Self {
            n,
            p,
            chunk: n.div_ceil(p as u64),
        })
    }

    pub fn vertex_count(&self) -> u64 {
        self.n
    }

    pub fn ranks(&self) -> usize {
        self.p
    }

    /// Block width, `ceil(n / p)`.
    pub fn chunk(&self) -> u64 {
        self.chunk
    }

    /// Owner without range checking. `v` must be below `n`.
    #[inline]
    pub fn owner_unchecked(&self, v: VertexId) -> usize {
        (v / self.chunk) as usize
    }

    pub fn owner(&self, v: VertexId) -> Result<usize> {
        if v >= self.n {
            return Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            });
        }
        Ok(self.owner_unchecked(v))
    }

    pub fn local_range(&self, rank: usize) -> Result<Range<VertexId>> {
        if rank >= self.p {
            return Err(Error::InvalidRank { rank, size: self.p });
        }
        let start = (rank as u64 * self.chunk).min(self.n);
        let end = ((rank as u64 + 1) * self.chunk).min(self.n);
        Ok(start..end)
    }

    pub fn local_len(&self, rank: usize) -> Result<usize> {
        self.local_range(rank).map(|r| (r.end - r.start) as usize)
    }

    pub fn to_local(&self, v: VertexId, rank: usize) -> Result<usize> {
        let range = self.local_range(rank)?;
        if !range.contains(&v) {
            return Err(Error::NotOwned { vertex: v, rank });
        }
        Ok((v - range.start) as usize)
    }

    pub fn to_global(&self, index: usize, rank: usize) -> Result<VertexId> {
        let range = self.local_range(rank)?;
        let v = range.start + index as u64;
        if v >= range.end {
            return Err(Error::InvalidVertex {
                vertex: v,
                n: self.n,
            });
        }
        Ok(v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eight_ranks_of_a_thousand() {
        let m = PartitionMap::new(8000, 8).unwrap();
        assert_eq!(m.chunk(), 1000);
        assert_eq!(m.owner(0).unwrap(), 0);
        assert_eq!(m.owner(999).unwrap(), 0);
        assert_eq!(m.owner(1000).unwrap(), 1);
        assert_eq!(m.owner(7999).unwrap(), 7);
        assert_eq!(m.local_range(0).unwrap(), 0..1000);
        assert_eq!(m.to_local(1000, 1).unwrap(), 0);
        assert!(matches!(m.owner(8000), Err(Error::InvalidVertex { .. })));
    }

    #[test]
    fn single_rank_owns_everything() {
        let m = PartitionMap::new(37, 1).unwrap();
        assert!((0..37).all(|v| m.owner(v).unwrap() == 0));
        assert_eq!(m.local_range(0).unwrap(), 0..37);
    }

    #[test]
    fn uneven_split() {
        let m = PartitionMap::new(10, 4).unwrap();
        assert_eq!(m.chunk(), 3);
        let owners: Vec<_> = (0..10).map(|v| m.owner(v).unwrap()).collect();
        assert_eq!(owners, [0, 0, 0, 1, 1, 1, 2, 2, 2, 3]);
        assert_eq!(m.local_range(3).unwrap(), 9..10);
        assert_eq!(m.local_len(3).unwrap(), 1);
        assert_eq!(m.to_local(9, 3).unwrap(), 0);
    }

    #[test]
    fn empty_graph_and_empty_ranks() {
        let m = PartitionMap::new(0, 2).unwrap();
        assert_eq!(m.local_range(1).unwrap(), 0..0);

        let m = PartitionMap::new(3, 8).unwrap();
        assert_eq!(m.local_len(2).unwrap(), 1);
        assert!((3..8).all(|r| m.local_len(r).unwrap() == 0));
        // n = 5, p = 4: chunk 2 leaves the last rank empty
        let m = PartitionMap::new(5, 4).unwrap();
        assert_eq!(m.local_range(2).unwrap(), 4..5);
        assert_eq!(m.local_range(3).unwrap(), 5..5);
    }

    #[test]
    fn errors() {
        assert!(PartitionMap::new(10, 0).is_err());
        let m = PartitionMap::new(10, 4).unwrap();
        assert!(matches!(
            m.local_range(4),
            Err(Error::InvalidRank { rank: 4, size: 4 })
        ));
        assert!(matches!(
            m.to_local(2, 1),
            Err(Error::NotOwned { vertex: 2, rank: 1 })
        ));
        assert!(m.to_global(1, 3).is_err());
        assert_eq!(m.to_global(2, 2).unwrap(), 8);
    }

    #[test]
    fn exhaustive_small_partitions() {
        for n in 0..=40u64 {
            for p in 1..=12usize {
                let m = PartitionMap::new(n, p).unwrap();
                let mut covered = 0;
                let mut next = 0;
                for r in 0..p {
                    let range = m.local_range(r).unwrap();
                    assert_eq!(range.start, next.min(n));
                    next = range.end;
                    covered += range.end - range.start;
                    for v in range {
                        assert_eq!(m.owner(v).unwrap(), r);
                    }
                }
                assert_eq!(covered, n);
            }
        }
    }

    proptest! {
        #[test]
        fn ranges_partition_vertex_set(p in 1usize..=200, extra in 0u64..10_000) {
            let n = (p as u64 + extra).min(10_000);
            let m = PartitionMap::new(n, p).unwrap();
            let total: u64 = (0..p).map(|r| m.local_len(r).unwrap() as u64).sum();
            prop_assert_eq!(total, n);
            prop_assert!(m.chunk() * p as u64 >= n);
        }

        #[test]
        fn owner_monotone_and_consistent(n in 1u64..5_000, p in 1usize..64, a in 0u64..5_000, b in 0u64..5_000) {
            let m = PartitionMap::new(n, p).unwrap();
            let (a, b) = (a % n, b % n);
            let (lo, hi) = (a.min(b), a.max(b));
            prop_assert!(m.owner(lo).unwrap() <= m.owner(hi).unwrap());
            let r = m.owner(a).unwrap();
            prop_assert!(m.local_range(r).unwrap().contains(&a));
            prop_assert_eq!(m.to_global(m.to_local(a, r).unwrap(), r).unwrap(), a);
        }
    }
}
