//! The orbit polynomials `p_n` of the critical point under `z^2 + c` and the
//! Misiurewicz-Thurston differences `q_{ell,n} = p_{ell+n} - p_ell`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, RwLock};

use thiserror::Error;

use crate::poly::{Degree, IntPoly};

pub const DEFAULT_CAP: u32 = 28;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("order {order} exceeds the cap {cap} (raise it with --cap)")]
    CapExceeded { order: u32, cap: u32 },
    #[error("invalid index: {0}")]
    InvalidIndex(String),
}

/// Preperiod `ell >= 0` and period `n >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyIndex {
    pub ell: u32,
    pub n: u32,
}

impl FamilyIndex {
    pub fn new(ell: u32, n: u32) -> Result<Self, FamilyError> {
        if n == 0 {
            return Err(FamilyError::InvalidIndex("period n must be at least 1".into()));
        }
        Ok(FamilyIndex { ell, n })
    }

    /// `ell + n`; `deg q_{ell,n} = 2^(order-1)`.
    pub fn order(self) -> u32 {
        self.ell + self.n
    }

    /// All indices with `order <= max_order`, by order then preperiod.
    pub fn up_to_order(max_order: u32) -> Vec<FamilyIndex> {
        let mut out = Vec::new();
        for order in 1..=max_order {
            for ell in 0..order {
                out.push(FamilyIndex { ell, n: order - ell });
            }
        }
        out
    }
}

impl fmt::Display for FamilyIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.ell, self.n)
    }
}

/// Memoizing constructor for `p_n`. Shared across threads; each `p_n` is built
/// at most once per winner of the insert race, and later readers get the same
/// `Arc`.
#[derive(Debug)]
pub struct Family {
    cap: u32,
    orbit: RwLock<HashMap<u32, Arc<IntPoly>>>,
}

impl Default for Family {
    fn default() -> Self {
        Family::new(DEFAULT_CAP)
    }
}

impl Family {
    pub fn new(cap: u32) -> Self {
        Family { cap, orbit: RwLock::new(HashMap::new()) }
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    fn check(&self, order: u32) -> Result<(), FamilyError> {
        if order > self.cap {
            Err(FamilyError::CapExceeded { order, cap: self.cap })
        } else {
            Ok(())
        }
    }

    fn cached(&self, n: u32) -> Option<Arc<IntPoly>> {
        self.orbit.read().expect("orbit cache poisoned").get(&n).cloned()
    }

    /// `p_n`: `p_0 = 0`, `p_{n+1} = p_n^2 + z`.
    pub fn orbit_poly(&self, n: u32) -> Result<Arc<IntPoly>, FamilyError> {
        self.check(n)?;
        if let Some(p) = self.cached(n) {
            return Ok(p);
        }
        // walk down to the nearest cached iterate, then build upwards
        let mut start = n;
        let mut current = loop {
            if start == 0 {
                break Arc::new(IntPoly::zero());
            }
            start -= 1;
            if let Some(p) = self.cached(start) {
                break p;
            }
        };
        for k in start + 1..=n {
            let next = current.square() + IntPoly::z();
            debug_assert_eq!(next.degree(), Degree::Finite(1 << (k - 1)));
            current = self.insert(k, next);
        }
        Ok(current)
    }

    fn insert(&self, n: u32, p: IntPoly) -> Arc<IntPoly> {
        let mut map = self.orbit.write().expect("orbit cache poisoned");
        map.entry(n).or_insert_with(|| Arc::new(p)).clone()
    }

    /// `q_{ell,n} = p_{ell+n} - p_ell`, of degree `2^(ell+n-1)`.
    pub fn mt_poly(&self, idx: FamilyIndex) -> Result<IntPoly, FamilyError> {
        FamilyIndex::new(idx.ell, idx.n)?;
        self.check(idx.order())?;
        let high = self.orbit_poly(idx.order())?;
        let low = self.orbit_poly(idx.ell)?;
        let q = &*high - &*low;
        debug_assert_eq!(q.degree(), Degree::Finite(1 << (idx.order() - 1)));
        if idx.ell == 1 {
            debug_assert_eq!(q, self.orbit_poly(idx.n)?.square());
        }
        Ok(q)
    }

    /// `s_{ell,n} = p_{ell+n-1} + p_{ell-1}`, the quotient `q_{ell,n} / q_{ell-1,n}`.
    pub fn simple_part(&self, idx: FamilyIndex) -> Result<IntPoly, FamilyError> {
        FamilyIndex::new(idx.ell, idx.n)?;
        if idx.ell == 0 {
            return Err(FamilyError::InvalidIndex("simple part needs ell >= 1".into()));
        }
        self.check(idx.order())?;
        let a = self.orbit_poly(idx.order() - 1)?;
        let b = self.orbit_poly(idx.ell - 1)?;
        Ok(&*a + &*b)
    }

    /// `(q_{ell-1,n}, s_{ell,n})`, whose product is `q_{ell,n}`.
    pub fn diff_squares_step(&self, idx: FamilyIndex) -> Result<(IntPoly, IntPoly), FamilyError> {
        let s = self.simple_part(idx)?;
        let q = self.mt_poly(FamilyIndex { ell: idx.ell - 1, n: idx.n })?;
        Ok((q, s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn first_orbit_polys() {
        let f = Family::default();
        assert!(f.orbit_poly(0).unwrap().is_zero());
        assert_eq!(*f.orbit_poly(1).unwrap(), p(&[0, 1]));
        assert_eq!(*f.orbit_poly(3).unwrap(), p(&[0, 1, 1, 2, 1]));
        assert_eq!(*f.orbit_poly(4).unwrap(), p(&[0, 1, 1, 2, 5, 6, 6, 4, 1]));
    }

    #[test]
    fn cache_shares_values() {
        let f = Family::default();
        let a = f.orbit_poly(6).unwrap();
        let b = f.orbit_poly(6).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        // built from the cached p_6
        assert_eq!(*f.orbit_poly(7).unwrap(), a.square() + IntPoly::z());
    }

    #[test]
    fn mt_examples() {
        let f = Family::default();
        let idx = |l, n| FamilyIndex::new(l, n).unwrap();
        assert_eq!(f.mt_poly(idx(0, 3)).unwrap(), *f.orbit_poly(3).unwrap());
        assert_eq!(f.mt_poly(idx(2, 1)).unwrap(), p(&[0, 0, 0, 2, 1]));
        let p4 = f.orbit_poly(4).unwrap();
        let p4sq = p4.square();
        let s = &p4sq + &p(&[0, 2]);
        assert_eq!(f.mt_poly(idx(2, 4)).unwrap(), &p4sq * &s);
    }

    #[test]
    fn simple_part_examples() {
        let f = Family::default();
        let idx = |l, n| FamilyIndex::new(l, n).unwrap();
        assert_eq!(f.simple_part(idx(1, 5)).unwrap(), *f.orbit_poly(5).unwrap());
        assert_eq!(f.simple_part(idx(2, 2)).unwrap(), p(&[0, 2, 1, 2, 1]));
        assert_eq!(f.simple_part(idx(0, 2)), Err(FamilyError::InvalidIndex("simple part needs ell >= 1".into())));
        let (q, s) = f.diff_squares_step(idx(2, 1)).unwrap();
        assert_eq!(q, p(&[0, 0, 1]));
        assert_eq!(s, p(&[0, 2, 1]));
    }

    #[test]
    fn cap_is_enforced() {
        let f = Family::new(5);
        assert_eq!(f.orbit_poly(6).unwrap_err(), FamilyError::CapExceeded { order: 6, cap: 5 });
        assert!(f.mt_poly(FamilyIndex { ell: 3, n: 3 }).is_err());
        assert!(f.mt_poly(FamilyIndex { ell: 2, n: 3 }).is_ok());
        assert!(FamilyIndex::new(1, 0).is_err());
    }

    #[test]
    fn index_enumeration() {
        let all = FamilyIndex::up_to_order(3);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], FamilyIndex { ell: 0, n: 1 });
        assert_eq!(all[5], FamilyIndex { ell: 2, n: 1 });
    }
}
