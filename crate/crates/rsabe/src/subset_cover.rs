//! Complete-subset (CS) revocation over a perfect binary user tree.
//!
//! Nodes are indexed breadth-first from the root (index 0); the children of
//! node i are 2i+1 and 2i+2. User u_j (1-based) owns the leaf
//! (2^d − 1) + (j − 1). Each node stands for the set of users below it.

use crate::error::{Error, Result};
use crate::serial::{Reader, Writer};
use std::collections::BTreeSet;

/// Perfect binary tree of depth d with 2^d user leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UserTree {
    depth: u32,
}

impl UserTree {
    /// `n_max` must be a power of two, at least 2.
    pub fn new(n_max: u64) -> Result<UserTree> {
        if n_max < 2 || !n_max.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "user capacity {n_max} is not a power of two ≥ 2"
            )));
        }
        let depth = n_max.trailing_zeros();
        if depth > 24 {
            return Err(Error::InvalidParameter("user tree too deep".into()));
        }
        Ok(UserTree { depth })
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn n_max(&self) -> u64 {
        1u64 << self.depth
    }

    pub fn node_count(&self) -> u64 {
        (1u64 << (self.depth + 1)) - 1
    }

    fn first_leaf(&self) -> u64 {
        (1u64 << self.depth) - 1
    }

    pub fn leaf_of_user(&self, user: u64) -> Result<u64> {
        if user == 0 || user > self.n_max() {
            return Err(Error::UserOutOfRange(user));
        }
        Ok(self.first_leaf() + (user - 1))
    }

    pub fn is_leaf(&self, node: u64) -> bool {
        node >= self.first_leaf() && node < self.node_count()
    }

    /// Users whose leaves hang below `node`, as an inclusive range.
    pub fn users_below(&self, node: u64) -> (u64, u64) {
        let mut lo = node;
        let mut hi = node;
        while !self.is_leaf(lo) {
            lo = 2 * lo + 1;
            hi = 2 * hi + 2;
        }
        (lo - self.first_leaf() + 1, hi - self.first_leaf() + 1)
    }

    /// CS.Assign: the leaf-to-root path of the user, inclusive of both ends.
    /// Every node on it stands for a user set containing `user`.
    pub fn assign(&self, user: u64) -> Result<PrivateSet> {
        let mut node = self.leaf_of_user(user)?;
        let mut nodes = vec![node];
        while node != 0 {
            node = (node - 1) / 2;
            nodes.push(node);
        }
        Ok(PrivateSet { user, nodes })
    }

    /// CS.Cover: children of Steiner-tree nodes that are not themselves in
    /// the Steiner tree. The resulting sets partition the non-revoked users.
    pub fn cover(&self, revoked: &BTreeSet<u64>) -> Result<CoverSet> {
        let mut steiner = BTreeSet::new();
        steiner.insert(0u64);
        for &user in revoked {
            let mut node = self.leaf_of_user(user)?;
            while steiner.insert(node) && node != 0 {
                node = (node - 1) / 2;
            }
        }
        let mut nodes = Vec::new();
        for &node in &steiner {
            if self.is_leaf(node) {
                continue;
            }
            for child in [2 * node + 1, 2 * node + 2] {
                if !steiner.contains(&child) {
                    nodes.push(child);
                }
            }
        }
        nodes.sort_unstable();
        Ok(CoverSet {
            revoked: revoked.clone(),
            nodes,
        })
    }
}

/// PV_u: the nodes on a user's leaf-to-root path (length depth + 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateSet {
    user: u64,
    /// Leaf first, root last; consecutive entries are child → parent.
    nodes: Vec<u64>,
}

impl PrivateSet {
    pub fn user(&self) -> u64 {
        self.user
    }

    pub fn nodes(&self) -> &[u64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        let mut sorted = self.nodes.clone();
        sorted.sort_unstable();
        w.u32(sorted.len() as u32);
        for n in sorted {
            w.u32(n as u32);
        }
    }

    pub(crate) fn decode(r: &mut Reader<'_>, user: u64) -> Result<PrivateSet> {
        let count = r.u32()? as usize;
        let mut sorted = Vec::with_capacity(count);
        for _ in 0..count {
            sorted.push(r.u32()? as u64);
        }
        // the path has strictly decreasing indices leaf → root, so the
        // sorted list reversed is exactly the path
        let nodes: Vec<u64> = sorted.into_iter().rev().collect();
        if nodes.is_empty() || *nodes.last().unwrap() != 0 {
            return Err(Error::Codec("private set does not reach the root".into()));
        }
        for w in nodes.windows(2) {
            if (w[0] - 1) / 2 != w[1] {
                return Err(Error::Codec("private set is not a leaf-root path".into()));
            }
        }
        Ok(PrivateSet { user, nodes })
    }
}

/// CV_R: disjoint subtree roots covering exactly the non-revoked users.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverSet {
    revoked: BTreeSet<u64>,
    nodes: Vec<u64>,
}

impl CoverSet {
    pub fn revoked(&self) -> &BTreeSet<u64> {
        &self.revoked
    }

    pub fn nodes(&self) -> &[u64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// CS.Match: the unique common node, present iff the user is unrevoked.
    pub fn find_match(&self, pv: &PrivateSet) -> Option<u64> {
        let mut hits = pv.nodes().iter().filter(|n| self.nodes.contains(n));
        let hit = hits.next().copied();
        debug_assert!(hits.next().is_none(), "cover sets must be disjoint");
        hit
    }

    pub(crate) fn encode(&self, w: &mut Writer) {
        w.u32(self.nodes.len() as u32);
        for &n in &self.nodes {
            w.u32(n as u32);
        }
        w.u32(self.revoked.len() as u32);
        for &u in &self.revoked {
            w.u32(u as u32);
        }
    }

    pub(crate) fn decode(r: &mut Reader<'_>) -> Result<CoverSet> {
        let count = r.u32()? as usize;
        let mut nodes = Vec::with_capacity(count);
        for _ in 0..count {
            nodes.push(r.u32()? as u64);
        }
        if nodes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Codec("cover nodes not sorted".into()));
        }
        let count = r.u32()? as usize;
        let mut revoked = BTreeSet::new();
        for _ in 0..count {
            revoked.insert(r.u32()? as u64);
        }
        Ok(CoverSet { revoked, nodes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn set(users: &[u64]) -> BTreeSet<u64> {
        users.iter().copied().collect()
    }

    #[test]
    fn setup_indexing() {
        let t = UserTree::new(8).unwrap();
        assert_eq!(t.depth(), 3);
        assert_eq!(t.leaf_of_user(1).unwrap(), 7);
        assert_eq!(t.leaf_of_user(8).unwrap(), 14);
        let t = UserTree::new(2).unwrap();
        assert_eq!(t.depth(), 1);
        assert_eq!(t.leaf_of_user(1).unwrap(), 1);
        assert_eq!(t.leaf_of_user(2).unwrap(), 2);
        assert!(UserTree::new(6).is_err());
        assert!(UserTree::new(0).is_err());
        assert!(UserTree::new(1).is_err());
    }

    #[test]
    fn assign_paths() {
        let t = UserTree::new(8).unwrap();
        let pv = t.assign(3).unwrap();
        assert_eq!(pv.nodes(), &[9, 4, 1, 0]);
        assert_eq!(pv.len() as u32, t.depth() + 1);
        // the node sets along the path are {u3}, {u3,u4}, {u1..u4}, all users
        let ranges: Vec<(u64, u64)> = pv.nodes().iter().map(|&n| t.users_below(n)).collect();
        assert_eq!(ranges, vec![(3, 3), (3, 4), (1, 4), (1, 8)]);

        let t1 = UserTree::new(2).unwrap();
        assert_eq!(t1.assign(1).unwrap().nodes(), &[1, 0]);
        assert!(t.assign(0).is_err());
        assert!(t.assign(9).is_err());
    }

    #[test]
    fn assign_membership_scan() {
        let t = UserTree::new(16).unwrap();
        for u in 1..=16 {
            for &node in t.assign(u).unwrap().nodes() {
                let (lo, hi) = t.users_below(node);
                assert!(lo <= u && u <= hi, "node {node} must contain user {u}");
            }
        }
    }

    #[test]
    fn cover_figure_example() {
        let t = UserTree::new(8).unwrap();
        let cv = t.cover(&set(&[2, 5, 7, 8])).unwrap();
        // U_{k} sets {u1}, {u3,u4}, {u6} are nodes 7, 4, 12
        assert_eq!(cv.nodes(), &[4, 7, 12]);
        let sets: Vec<(u64, u64)> = cv.nodes().iter().map(|&n| t.users_below(n)).collect();
        assert!(sets.contains(&(1, 1)));
        assert!(sets.contains(&(3, 4)));
        assert!(sets.contains(&(6, 6)));
    }

    #[test]
    fn cover_everyone_revoked_is_empty() {
        let t = UserTree::new(8).unwrap();
        let cv = t.cover(&set(&[1, 2, 3, 4, 5, 6, 7, 8])).unwrap();
        assert!(cv.is_empty());
    }

    #[test]
    fn cover_nobody_revoked_is_root_children() {
        let t = UserTree::new(8).unwrap();
        let cv = t.cover(&BTreeSet::new()).unwrap();
        assert_eq!(cv.nodes(), &[1, 2]);
        check_partition(&t, &cv);
    }

    #[test]
    fn cover_rejects_bad_users() {
        let t = UserTree::new(4).unwrap();
        assert!(t.cover(&set(&[5])).is_err());
        assert!(t.cover(&set(&[0])).is_err());
    }

    #[test]
    fn match_figure_example() {
        let t = UserTree::new(8).unwrap();
        let cv = t.cover(&set(&[2, 5, 7, 8])).unwrap();
        let hit = cv.find_match(&t.assign(3).unwrap());
        assert_eq!(hit, Some(4)); // the {u3,u4} box
        assert_eq!(cv.find_match(&t.assign(5).unwrap()), None);
    }

    #[test]
    fn match_with_empty_revocation() {
        let t = UserTree::new(8).unwrap();
        let cv = t.cover(&BTreeSet::new()).unwrap();
        for u in 1..=8 {
            let pv = t.assign(u).unwrap();
            // depth-1 ancestor of the user's leaf
            let expected = pv.nodes()[pv.len() - 2];
            assert_eq!(cv.find_match(&pv), Some(expected));
        }
    }

    fn check_partition(t: &UserTree, cv: &CoverSet) {
        let mut covered = BTreeSet::new();
        for &node in cv.nodes() {
            let (lo, hi) = t.users_below(node);
            for u in lo..=hi {
                assert!(covered.insert(u), "cover sets overlap at user {u}");
            }
        }
        let all: BTreeSet<u64> = (1..=t.n_max()).collect();
        let expect: BTreeSet<u64> = all.difference(cv.revoked()).copied().collect();
        assert_eq!(covered, expect, "cover must partition exactly U \\ R");
    }

    #[test]
    fn exhaustive_small_trees() {
        for depth in 1..=3u32 {
            let n = 1u64 << depth;
            let t = UserTree::new(n).unwrap();
            for mask in 0..(1u64 << n) {
                let revoked: BTreeSet<u64> = (1..=n).filter(|u| mask >> (u - 1) & 1 == 1).collect();
                let cv = t.cover(&revoked).unwrap();
                check_partition(&t, &cv);
                if !revoked.is_empty() {
                    let r = revoked.len() as f64;
                    let bound = r * (depth as f64 - r.log2());
                    assert!(
                        (cv.len() as f64) <= bound + 1e-9,
                        "cover size {} beats the r*log2(N/r) bound {bound}",
                        cv.len()
                    );
                }
                for u in 1..=n {
                    let hit = cv.find_match(&t.assign(u).unwrap());
                    assert_eq!(hit.is_some(), !revoked.contains(&u));
                }
            }
        }
    }

    #[test]
    fn randomized_depth_four() {
        let t = UserTree::new(16).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(123);
        for _ in 0..1000 {
            let mask: u16 = rng.random();
            let revoked: BTreeSet<u64> = (1..=16).filter(|u| mask >> (u - 1) & 1 == 1).collect();
            let cv = t.cover(&revoked).unwrap();
            check_partition(&t, &cv);
            for u in 1..=16 {
                let hit = cv.find_match(&t.assign(u).unwrap());
                assert_eq!(hit.is_some(), !revoked.contains(&u));
            }
        }
    }

    #[test]
    fn codec_round_trip() {
        let t = UserTree::new(8).unwrap();
        let pv = t.assign(5).unwrap();
        let mut w = Writer::new();
        pv.encode(&mut w);
        let bytes = w.into_bytes();
        let back = PrivateSet::decode(&mut Reader::new(&bytes), 5).unwrap();
        assert_eq!(back, pv);

        let cv = t.cover(&set(&[2, 5])).unwrap();
        let mut w = Writer::new();
        cv.encode(&mut w);
        let bytes = w.into_bytes();
        let back = CoverSet::decode(&mut Reader::new(&bytes)).unwrap();
        assert_eq!(back, cv);
    }
}
