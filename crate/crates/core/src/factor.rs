//! Gleason polynomials `h_n`, Misiurewicz factors `m_{ell,n}`, and the complete
//! factorization of `q_{ell,n}` into them.
//!
//! Every factor is obtained by exact division of a family polynomial by
//! previously computed factors, so the only arithmetic is multiplication and
//! division with zero remainder. A nonzero remainder anywhere means the
//! factorization structure is wrong and is reported as an internal error.

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::hash::Hash;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use rug::Integer;
use thiserror::Error;

use crate::arith::{self, divisors, strict_divisors, CountError};
use crate::family::{Family, FamilyError, FamilyIndex};
use crate::par::Exec;
use crate::poly::{self, Degree, IntPoly, PolyError};

#[derive(Debug, Error)]
pub enum FactorError {
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("extracting {factor}: {source}")]
    Division { factor: String, source: PolyError },
    #[error("{factor} has degree {found}, expected {expected}")]
    DegreeMismatch { factor: String, found: Degree, expected: Integer },
    #[error("{0} is not monic")]
    NotMonic(String),
    #[error("cache file {path}: {source}")]
    Cache { path: PathBuf, source: io::Error },
}

/// The factorization of one `q_{ell,n}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorTable {
    pub index: FamilyIndex,
    /// divisor `k` of `n` -> (`h_k`, exponent)
    pub hyp_factors: BTreeMap<u32, (Arc<IntPoly>, u32)>,
    /// `(j, k)` with `2 <= j <= ell`, `k | n` -> `m_{j,k}`
    pub mis_factors: BTreeMap<(u32, u32), Arc<IntPoly>>,
}

impl FactorTable {
    /// Sum of factor degrees counted with multiplicity.
    pub fn total_degree(&self) -> usize {
        let hyp: usize = self.hyp_factors.values().map(|(h, e)| deg(h) * *e as usize).sum();
        let mis: usize = self.mis_factors.values().map(|m| deg(m)).sum();
        hyp + mis
    }

    /// Every factor repeated by its exponent.
    pub fn factors_with_multiplicity(&self) -> Vec<&IntPoly> {
        let mut out = Vec::new();
        for (h, e) in self.hyp_factors.values() {
            for _ in 0..*e {
                out.push(&**h);
            }
        }
        out.extend(self.mis_factors.values().map(|m| &**m));
        out
    }

    /// Product of all factors, built as a size-balanced tree.
    pub fn reassemble(&self) -> IntPoly {
        poly::product(self.factors_with_multiplicity())
    }
}

fn deg(p: &IntPoly) -> usize {
    p.degree().finite().unwrap_or(0)
}

type Memo<K> = RwLock<HashMap<K, Arc<IntPoly>>>;

/// Computes and memoizes factors. Safe to share between threads: caches are
/// insert-once, values are computed outside the locks, and a duplicated
/// computation yields the identical polynomial.
#[derive(Debug)]
pub struct FactorEngine {
    family: Family,
    gleason: Memo<u32>,
    mis: Memo<(u32, u32)>,
    cache_dir: Option<PathBuf>,
}

impl Default for FactorEngine {
    fn default() -> Self {
        FactorEngine::new(Family::default())
    }
}

fn lookup<K: Eq + Hash>(memo: &Memo<K>, key: &K) -> Option<Arc<IntPoly>> {
    memo.read().expect("factor cache poisoned").get(key).cloned()
}

fn store<K: Eq + Hash>(memo: &Memo<K>, key: K, p: IntPoly) -> Arc<IntPoly> {
    memo.write().expect("factor cache poisoned").entry(key).or_insert_with(|| Arc::new(p)).clone()
}

impl FactorEngine {
    pub fn new(family: Family) -> Self {
        FactorEngine { family, gleason: RwLock::default(), mis: RwLock::default(), cache_dir: None }
    }

    /// Persists factors under `dir` in the `poly v1` format and reuses them on
    /// later runs.
    pub fn with_cache_dir(mut self, dir: impl Into<PathBuf>) -> Self {
        self.cache_dir = Some(dir.into());
        self
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Gleason polynomial `h_n`: `p_n` with `h_k` divided out for every strict
    /// divisor `k` of `n`.
    pub fn gleason(&self, n: u32) -> Result<Arc<IntPoly>, FactorError> {
        FamilyIndex::new(0, n)?;
        if let Some(h) = lookup(&self.gleason, &n) {
            return Ok(h);
        }
        let name = format!("h_{n}");
        let expected = arith::hyp_count(n);
        let file = format!("h_{n}.poly");
        if let Some(h) = self.load(&file, &expected)? {
            return Ok(store(&self.gleason, n, h));
        }
        let p = self.family.orbit_poly(n)?;
        let mut divisors = Vec::new();
        for k in strict_divisors(n) {
            divisors.push(self.gleason(k)?);
        }
        let h = divide_out(&p, divisors, &name)?;
        check_factor(&h, &expected, &name)?;
        self.save(&file, &h)?;
        Ok(store(&self.gleason, n, h))
    }

    /// Misiurewicz factor `m_{ell,n}` for `ell >= 2`: `s_{ell,n}` with `h_k`
    /// (`k | gcd(n, ell-1)`) and `m_{ell,k}` (`k` a strict divisor of `n`)
    /// divided out.
    pub fn misiurewicz_factor(&self, ell: u32, n: u32) -> Result<Arc<IntPoly>, FactorError> {
        let idx = FamilyIndex::new(ell, n)?;
        if ell < 2 {
            return Err(FamilyError::InvalidIndex(format!("Misiurewicz factors need ell >= 2, got {ell}")).into());
        }
        if let Some(m) = lookup(&self.mis, &(ell, n)) {
            return Ok(m);
        }
        let name = format!("m_{ell},{n}");
        let expected = arith::mis_count(ell, n);
        let file = format!("m_{ell}_{n}.poly");
        if let Some(m) = self.load(&file, &expected)? {
            return Ok(store(&self.mis, (ell, n), m));
        }
        let s = self.family.simple_part(idx)?;
        let mut divisors = Vec::new();
        for k in arith::divisors(gcd(n, ell - 1)) {
            divisors.push(self.gleason(k)?);
        }
        for k in strict_divisors(n) {
            divisors.push(self.misiurewicz_factor(ell, k)?);
        }
        let m = divide_out(&s, divisors, &name)?;
        check_factor(&m, &expected, &name)?;
        self.save(&file, &m)?;
        Ok(store(&self.mis, (ell, n), m))
    }

    /// Factor table of `q_{ell,n}`; degrees are checked against the predicted
    /// counts before anything is multiplied.
    pub fn factorize(&self, idx: FamilyIndex) -> Result<FactorTable, FactorError> {
        FamilyIndex::new(idx.ell, idx.n)?;
        if idx.order() > self.family.cap() {
            return Err(FamilyError::CapExceeded { order: idx.order(), cap: self.family.cap() }.into());
        }
        let record = arith::degree_budget(idx.ell, idx.n)?;
        let mut hyp_factors = BTreeMap::new();
        let mut mis_factors = BTreeMap::new();
        for k in divisors(idx.n) {
            hyp_factors.insert(k, (self.gleason(k)?, arith::eta(idx.ell, k)));
            for j in 2..=idx.ell {
                mis_factors.insert((j, k), self.misiurewicz_factor(j, k)?);
            }
        }
        let table = FactorTable { index: idx, hyp_factors, mis_factors };
        let total = table.total_degree();
        if record.degree_budget != total {
            return Err(FactorError::DegreeMismatch {
                factor: format!("q_{},{}", idx.ell, idx.n),
                found: Degree::Finite(total),
                expected: record.degree_budget,
            });
        }
        Ok(table)
    }

    /// True iff the factors multiply back to `q_{ell,n}` exactly and the
    /// difference-of-squares step `q_{ell,n} = q_{ell-1,n} (q_{ell-1,n} + 2 p_{ell-1})`
    /// holds (checked modulo a word prime at a few points).
    pub fn verify(&self, table: &FactorTable) -> Result<bool, FactorError> {
        let idx = table.index;
        let q = self.family.mt_poly(idx)?;
        if q.degree() != Degree::Finite(table.total_degree()) {
            return Ok(false);
        }
        if idx.ell >= 1 && !self.diff_squares_holds(idx, &q)? {
            return Ok(false);
        }
        Ok(table.reassemble() == q)
    }

    fn diff_squares_holds(&self, idx: FamilyIndex, q: &IntPoly) -> Result<bool, FactorError> {
        use crate::poly::modp::{large_primes, Field};
        let f = Field::new(large_primes()[7]);
        let q = f.reduce_poly(q.coeffs());
        let top = f.reduce_poly(self.family.orbit_poly(idx.order() - 1)?.coeffs());
        let p = f.reduce_poly(self.family.orbit_poly(idx.ell - 1)?.coeffs());
        let two = f.to_mont(2);
        for x in [3u64, 1 << 20, 987_654_321_987] {
            let x = f.to_mont(x);
            let (qx, px) = (f.eval(&q, x), f.eval(&p, x));
            // q_{ell-1,n} = p_{ell+n-1} - p_{ell-1}
            let prevx = f.sub(f.eval(&top, x), px);
            let rhs = f.mul(prevx, f.add(prevx, f.mul(two, px)));
            if qx != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Factorizes and verifies every `(ell, n)` with `ell + n <= max_order`.
    /// Results come back in [`FamilyIndex::up_to_order`] order.
    pub fn verify_sweep(&self, max_order: u32, exec: Exec) -> Vec<(FamilyIndex, Result<bool, FactorError>)> {
        let indices = FamilyIndex::up_to_order(max_order);
        // build factors order by order so concurrent tasks mostly hit the caches
        let mut out = Vec::with_capacity(indices.len());
        for order in 1..=max_order {
            let batch: Vec<FamilyIndex> = indices.iter().copied().filter(|i| i.order() == order).collect();
            let results = exec.map(&batch, |&idx| (idx, self.factorize(idx).and_then(|t| self.verify(&t))));
            out.extend(results);
        }
        out
    }

    fn load(&self, file: &str, expected: &Integer) -> Result<Option<IntPoly>, FactorError> {
        let Some(dir) = &self.cache_dir else {
            return Ok(None);
        };
        let path = dir.join(file);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(FactorError::Cache { path, source }),
        };
        // a damaged or stale entry is recomputed rather than trusted
        match IntPoly::parse_text(&text) {
            Ok(p) if p.is_monic() && *expected == deg(&p) => Ok(Some(p)),
            _ => Ok(None),
        }
    }

    fn save(&self, file: &str, p: &IntPoly) -> Result<(), FactorError> {
        let Some(dir) = &self.cache_dir else {
            return Ok(());
        };
        let wrap = |path: &Path, source| FactorError::Cache { path: path.to_path_buf(), source };
        fs::create_dir_all(dir).map_err(|e| wrap(dir, e))?;
        let path = dir.join(file);
        let tmp = dir.join(format!("{file}.{}.tmp", std::process::id()));
        fs::write(&tmp, p.to_text()).map_err(|e| wrap(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| wrap(&path, e))
    }
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Divides `p` by each divisor in turn, smallest degree first.
fn divide_out(p: &IntPoly, mut divisors: Vec<Arc<IntPoly>>, name: &str) -> Result<IntPoly, FactorError> {
    divisors.sort_by_key(|d| deg(d));
    let mut acc = p.clone();
    for d in &divisors {
        acc = acc.exact_div(d).map_err(|source| FactorError::Division { factor: name.to_string(), source })?;
    }
    Ok(acc)
}

fn check_factor(p: &IntPoly, expected: &Integer, name: &str) -> Result<(), FactorError> {
    if *expected != deg(p) || p.is_zero() {
        return Err(FactorError::DegreeMismatch { factor: name.to_string(), found: p.degree(), expected: expected.clone() });
    }
    if !p.is_monic() {
        return Err(FactorError::NotMonic(name.to_string()));
    }
    Ok(())
}
