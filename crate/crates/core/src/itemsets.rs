//! Top-k closed frequent node sets over a weighted transaction database.
//!
//! Closed sets are enumerated by prefix-preserving closure extension: each
//! closed set is reached exactly once from its parent by adding one item and
//! taking the closure. The k-th best support found so far is a rising
//! threshold below which whole branches are cut, since support only shrinks
//! down the search tree.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::nodeset::{NodeId, NodeSet};

/// Default cap on closed sets explored in one mining call.
pub const DEFAULT_MINING_CAP: usize = 1_000_000;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransactionDb {
    distinct: BTreeMap<NodeSet, u64>,
    total: u64,
}

impl TransactionDb {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, set: NodeSet, multiplicity: u64) {
        if multiplicity > 0 {
            *self.distinct.entry(set).or_default() += multiplicity;
            self.total += multiplicity;
        }
    }

    pub fn merge(&mut self, other: TransactionDb) {
        for (s, m) in other.distinct {
            self.add(s, m);
        }
    }

    /// Distinct transactions with their multiplicities.
    pub fn distinct(&self) -> &BTreeMap<NodeSet, u64> {
        &self.distinct
    }

    /// Sum of multiplicities.
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Weighted number of transactions containing `set`.
    pub fn support(&self, set: &NodeSet) -> u64 {
        self.distinct.iter().filter(|(t, _)| set.is_subset(t)).map(|(_, &m)| m).sum()
    }
}

impl FromIterator<NodeSet> for TransactionDb {
    fn from_iter<I: IntoIterator<Item = NodeSet>>(iter: I) -> Self {
        let mut db = TransactionDb::new();
        for s in iter {
            db.add(s, 1);
        }
        db
    }
}

/// Result order: support descending, then larger sets, then lexicographic.
pub fn rank_order(a: &(NodeSet, u64), b: &(NodeSet, u64)) -> Ordering {
    b.1.cmp(&a.1).then(b.0.len().cmp(&a.0.len())).then_with(|| a.0.cmp(&b.0))
}

pub fn mine_topk_closed(db: &TransactionDb, k: usize, l_m: usize) -> Result<Vec<(NodeSet, u64)>> {
    mine_topk_closed_capped(db, k, l_m, DEFAULT_MINING_CAP)
}

struct Miner<'a> {
    transactions: Vec<(&'a [NodeId], u64)>,
    k: usize,
    l_m: usize,
    cap: usize,
    explored: usize,
    best: Vec<(NodeSet, u64)>,
}

impl Miner<'_> {
    fn threshold(&self) -> u64 {
        if self.best.len() < self.k {
            1
        } else {
            self.best[self.k - 1].1
        }
    }

    fn record(&mut self, set: &[NodeId], support: u64) -> Result<()> {
        self.explored += 1;
        if self.explored > self.cap {
            return Err(Error::MiningCap { cap: self.cap });
        }
        if set.len() >= self.l_m && support >= self.threshold() {
            let entry = (NodeSet::from_sorted(set.to_vec()), support);
            let pos = self.best.binary_search_by(|probe| rank_order(probe, &entry)).unwrap_or_else(|p| p);
            self.best.insert(pos, entry);
            self.best.truncate(self.k);
        }
        Ok(())
    }

    /// Intersection of the transactions in `tids`.
    fn closure(&self, tids: &[usize]) -> Vec<NodeId> {
        let mut acc: Vec<NodeId> = self.transactions[tids[0]].0.to_vec();
        for &t in &tids[1..] {
            let other = self.transactions[t].0;
            acc.retain(|v| other.binary_search(v).is_ok());
        }
        acc
    }

    fn extend(&mut self, closed: &[NodeId], tids: &[usize], core: Option<NodeId>) -> Result<()> {
        let items: BTreeSet<NodeId> = tids
            .iter()
            .flat_map(|&t| self.transactions[t].0.iter().copied())
            .filter(|&e| core.is_none_or(|c| e > c) && closed.binary_search(&e).is_err())
            .collect();
        for e in items {
            let sub: Vec<usize> =
                tids.iter().copied().filter(|&t| self.transactions[t].0.binary_search(&e).is_ok()).collect();
            let support: u64 = sub.iter().map(|&t| self.transactions[t].1).sum();
            if support < self.threshold() {
                continue;
            }
            let next = self.closure(&sub);
            // Prefix-preserving: the closure adds no item smaller than e.
            let prefix_kept = next.iter().take_while(|&&v| v < e).eq(closed.iter().take_while(|&&v| v < e));
            if !prefix_kept {
                continue;
            }
            self.record(&next, support)?;
            self.extend(&next, &sub, Some(e))?;
        }
        Ok(())
    }
}

pub fn mine_topk_closed_capped(db: &TransactionDb, k: usize, l_m: usize, cap: usize) -> Result<Vec<(NodeSet, u64)>> {
    if k == 0 || l_m == 0 {
        return Err(Error::InvalidArgument("k and l_m must be at least 1".into()));
    }
    if db.is_empty() {
        return Ok(Vec::new());
    }
    let transactions: Vec<(&[NodeId], u64)> = db.distinct.iter().map(|(s, &m)| (s.as_slice(), m)).collect();
    let mut miner = Miner { transactions, k, l_m, cap, explored: 0, best: Vec::new() };
    let all: Vec<usize> = (0..miner.transactions.len()).collect();
    let root = miner.closure(&all);
    if !root.is_empty() {
        miner.record(&root, db.total)?;
    }
    miner.extend(&root, &all, None)?;
    Ok(miner.best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn db(sets: &[(&[NodeId], u64)]) -> TransactionDb {
        let mut db = TransactionDb::new();
        for &(s, m) in sets {
            db.add(NodeSet::new(s.to_vec()), m);
        }
        db
    }

    #[test]
    fn hand_examples() {
        let d = db(&[(&[1, 2, 3], 2), (&[1, 2], 1)]);
        assert_eq!(
            mine_topk_closed(&d, 2, 2).unwrap(),
            vec![(NodeSet::from([1, 2]), 3), (NodeSet::from([1, 2, 3]), 2)]
        );
        assert_eq!(mine_topk_closed(&d, 1, 2).unwrap(), vec![(NodeSet::from([1, 2]), 3)]);

        let same = db(&[(&[4, 5, 6], 9)]);
        assert_eq!(mine_topk_closed(&same, 3, 2).unwrap(), vec![(NodeSet::from([4, 5, 6]), 9)]);

        let disjoint = db(&[(&[1, 2], 3), (&[3], 1), (&[4, 5, 6], 2)]);
        assert_eq!(
            mine_topk_closed(&disjoint, 5, 1).unwrap(),
            vec![(NodeSet::from([1, 2]), 3), (NodeSet::from([4, 5, 6]), 2), (NodeSet::from([3]), 1)]
        );
    }

    #[test]
    fn cap_is_enforced() {
        let d = db(&[(&[1, 2, 3], 1), (&[1, 2, 4], 1), (&[1, 3, 4], 1), (&[2, 3, 4], 1)]);
        assert!(matches!(mine_topk_closed_capped(&d, 100, 1, 3), Err(Error::MiningCap { cap: 3 })));
    }

    /// All closed sets as intersections of every sub-collection.
    fn brute(db: &TransactionDb, k: usize, l_m: usize) -> Vec<(NodeSet, u64)> {
        let ts: Vec<&NodeSet> = db.distinct().keys().collect();
        let mut closed = BTreeSet::new();
        for mask in 1u32..1 << ts.len() {
            let mut acc: Option<NodeSet> = None;
            for (i, t) in ts.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = Some(match acc {
                        None => (*t).clone(),
                        Some(a) => a.intersection(t),
                    });
                }
            }
            closed.insert(acc.unwrap());
        }
        let mut out: Vec<(NodeSet, u64)> = closed
            .into_iter()
            .filter(|s| !s.is_empty() && s.len() >= l_m)
            .map(|s| {
                let sup = db.support(&s);
                (s, sup)
            })
            .collect();
        out.sort_by(rank_order);
        out.truncate(k);
        out
    }

    proptest! {
        #[test]
        fn matches_brute_force(
            raw in proptest::collection::vec((proptest::collection::btree_set(0u32..8, 1..6), 1u64..4), 1..10),
            k in 1usize..8,
            l_m in 1usize..4,
        ) {
            let mut d = TransactionDb::new();
            for (s, m) in raw {
                d.add(s.into_iter().collect(), m);
            }
            let mined = mine_topk_closed(&d, k, l_m).unwrap();
            prop_assert_eq!(&mined, &brute(&d, k, l_m));
            for (s, sup) in &mined {
                // Closed: equals the intersection of the transactions containing it.
                let containing: Vec<&NodeSet> = d.distinct().keys().filter(|t| s.is_subset(t)).collect();
                let inter = containing.iter().skip(1).fold(containing[0].clone(), |a, t| a.intersection(t));
                prop_assert_eq!(&inter, s);
                prop_assert_eq!(d.support(s), *sup);
            }
            for w in mined.windows(2) {
                prop_assert!(w[0].1 >= w[1].1);
            }
        }
    }
}
