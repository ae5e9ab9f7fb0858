//! Incremental row-echelon spans over `Q`.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::rational::Q;

/// A linear span kept in reduced row-echelon form.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<(usize, Vec<Q>)>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    pub fn basis(&self) -> impl Iterator<Item = &[Q]> {
        self.rows.iter().map(|(_, r)| r.as_slice())
    }

    fn reduce(&self, v: &mut [Q]) {
        for (piv, row) in &self.rows {
            if v[*piv].is_zero() {
                continue;
            }
            let f = v[*piv].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
    }

    pub fn contains(&self, v: &[Q]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Q]) -> bool {
        assert_eq!(v.len(), self.dim, "vector length");
        let mut w = v.to_vec();
        self.reduce(&mut w);
        let Some(piv) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let p = w[piv].clone();
        for x in w.iter_mut() {
            *x = &*x / &p;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[piv].is_zero() {
                continue;
            }
            let f = row[piv].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        }
        self.rows.push((piv, w));
        true
    }
}

/// Sparse vector keyed by an ordered index type.
pub type SparseVec<K> = BTreeMap<K, Q>;

/// Echelon span of sparse vectors; each stored row has leading coefficient 1
/// at its pivot, which is its smallest key.
#[derive(Clone, Debug)]
pub struct SparseEchelon<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Default for SparseEchelon<K> {
    fn default() -> Self {
        SparseEchelon {
            rows: BTreeMap::new(),
        }
    }
}

impl<K: Ord + Clone> SparseEchelon<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` modulo the span; the remainder is zero iff `v` lies in it.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut v = v.clone();
        let mut cursor: Option<K> = None;
        loop {
            let next = match &cursor {
                None => v.keys().find(|k| self.rows.contains_key(*k)).cloned(),
                Some(c) => v
                    .range((
                        std::ops::Bound::Excluded(c.clone()),
                        std::ops::Bound::Unbounded,
                    ))
                    .map(|(k, _)| k)
                    .find(|k| self.rows.contains_key(*k))
                    .cloned(),
            };
            let Some(k) = next else { break };
            let c = v[&k].clone();
            for (key, x) in &self.rows[&k] {
                let e = v.entry(key.clone()).or_insert_with(Q::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(key);
                }
            }
            cursor = Some(k);
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the span; returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVec<K>) -> bool {
        let r = self.reduce(v);
        let Some((pivot, lead)) = r.iter().next().map(|(k, c)| (k.clone(), c.clone())) else {
            return false;
        };
        let inv = Q::one() / lead;
        let row = r.into_iter().map(|(k, c)| (k, c * &inv)).collect();
        self.rows.insert(pivot, row);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    #[test]
    fn insert_and_membership() {
        let mut e = EchelonBasis::new(3);
        assert!(e.insert(&[q(1), q(2), q(0)]));
        assert!(e.insert(&[q(0), q(1), q(1)]));
        assert!(!e.insert(&[q(1), q(3), q(1)]));
        assert!(e.contains(&[q(2), q(5), q(1)]));
        assert!(!e.contains(&[q(0), q(0), q(1)]));
        assert_eq!(e.rank(), 2);
    }

    #[test]
    fn sparse_membership() {
        let v =
            |xs: &[(u32, i64)]| -> SparseVec<u32> { xs.iter().map(|(k, c)| (*k, q(*c))).collect() };
        let mut e = SparseEchelon::new();
        assert!(e.insert(&v(&[(1, 2), (3, 1)])));
        assert!(e.insert(&v(&[(1, 1), (2, 1)])));
        assert!(!e.insert(&v(&[(2, 2), (3, -1)])));
        assert!(e.contains(&v(&[(1, 3), (2, 1), (3, 1)])));
        assert!(!e.contains(&v(&[(3, 1)])));
        assert_eq!(e.rank(), 2);
    }
}
