//! Divisors, the Möbius function, and the closed-form counts of hyperbolic
//! centers and Misiurewicz points.

use std::collections::BTreeMap;
use std::fmt;

use rug::Integer;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("period must be positive")]
    ZeroPeriod,
    #[error("degree budget for (ell={ell}, n={n}) sums to {found}, expected {expected}")]
    BudgetMismatch { ell: u32, n: u32, found: Integer, expected: Integer },
    #[error("Möbius inversion check failed for n={0}")]
    Inversion(u32),
}

/// All positive divisors of `n`, ascending. `divisors(0)` is empty.
pub fn divisors(n: u32) -> Vec<u32> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Divisors of `n` other than `n` itself.
pub fn strict_divisors(n: u32) -> Vec<u32> {
    let mut d = divisors(n);
    d.pop();
    d
}

pub fn mobius(n: u32) -> i32 {
    assert!(n >= 1, "mobius(0) is undefined");
    let mut n = n;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

fn pow2(e: u32) -> Integer {
    Integer::from(1) << e
}

/// Number of parameters whose critical orbit has exact period `n`:
/// `sum_{k | n} mu(n/k) 2^(k-1)`.
pub fn hyp_count(n: u32) -> Integer {
    assert!(n >= 1, "period must be positive");
    let mut total = Integer::new();
    for k in divisors(n) {
        match mobius(n / k) {
            1 => total += pow2(k - 1),
            -1 => total -= pow2(k - 1),
            _ => {}
        }
    }
    total
}

/// `1` for `ell = 0`, `2^(ell-1) - 1` when `n | ell - 1`, `2^(ell-1)` otherwise.
/// In particular `phi(1, n) = 0`.
pub fn phi(ell: u32, n: u32) -> Integer {
    assert!(n >= 1, "period must be positive");
    if ell == 0 {
        return Integer::from(1);
    }
    let base = pow2(ell - 1);
    if (ell - 1).is_multiple_of(n) {
        base - 1
    } else {
        base
    }
}

/// Number of Misiurewicz parameters of exact preperiod `ell` and period `n`.
pub fn mis_count(ell: u32, n: u32) -> Integer {
    phi(ell, n) * hyp_count(n)
}

/// Multiplicity `floor((ell-1)/k) + 2` of `h_k` in `q_{ell,n}`, with the
/// mathematical floor so that `eta(0, k) = 1`.
pub fn eta(ell: u32, k: u32) -> u32 {
    assert!(k >= 1, "divisor must be positive");
    let q = (i64::from(ell) - 1).div_euclid(i64::from(k));
    (q + 2) as u32
}

/// One summand of the degree identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BudgetTerm {
    /// `eta * |hyp(k)|`
    Hyp { k: u32, eta: u32, degree: Integer },
    /// `|mis(j, k)|`
    Mis { j: u32, k: u32, degree: Integer },
}

impl BudgetTerm {
    pub fn degree(&self) -> &Integer {
        match self {
            BudgetTerm::Hyp { degree, .. } | BudgetTerm::Mis { degree, .. } => degree,
        }
    }
}

/// Predicted counts and multiplicities for one `(ell, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountRecord {
    pub ell: u32,
    pub n: u32,
    pub hyp_count: Integer,
    pub phi: Integer,
    pub mis_count: Integer,
    pub eta_by_divisor: BTreeMap<u32, u32>,
    pub degree_budget: Integer,
    /// Hyperbolic terms by divisor, then Misiurewicz terms by `(k, j)`.
    pub breakdown: Vec<BudgetTerm>,
}

/// Assembles the [`CountRecord`] for `(ell, n)` and checks that the per-factor
/// degrees add up to `deg q_{ell,n} = 2^(ell+n-1)`.
pub fn degree_budget(ell: u32, n: u32) -> Result<CountRecord, CountError> {
    if n == 0 {
        return Err(CountError::ZeroPeriod);
    }
    check_inversion(n)?;
    let divs = divisors(n);
    let mut breakdown = Vec::new();
    let mut eta_by_divisor = BTreeMap::new();
    for &k in &divs {
        let e = eta(ell, k);
        eta_by_divisor.insert(k, e);
        breakdown.push(BudgetTerm::Hyp { k, eta: e, degree: hyp_count(k) * e });
    }
    for &k in &divs {
        for j in 2..=ell {
            breakdown.push(BudgetTerm::Mis { j, k, degree: mis_count(j, k) });
        }
    }
    let total: Integer = breakdown.iter().map(BudgetTerm::degree).sum();
    let expected = pow2(ell + n - 1);
    if total != expected {
        return Err(CountError::BudgetMismatch { ell, n, found: total, expected });
    }
    Ok(CountRecord {
        ell,
        n,
        hyp_count: hyp_count(n),
        phi: phi(ell, n),
        mis_count: mis_count(ell, n),
        eta_by_divisor,
        degree_budget: total,
        breakdown,
    })
}

/// `sum_{k | n} sum_{m | k} mu(k/m) 2^m = 2^n`.
fn check_inversion(n: u32) -> Result<(), CountError> {
    let mut total = Integer::new();
    for k in divisors(n) {
        for m in divisors(k) {
            match mobius(k / m) {
                1 => total += pow2(m),
                -1 => total -= pow2(m),
                _ => {}
            }
        }
    }
    if total == pow2(n) {
        Ok(())
    } else {
        Err(CountError::Inversion(n))
    }
}

impl CountRecord {
    /// `key=value` lines, one field per line.
    pub fn to_kv(&self) -> String {
        let eta: Vec<String> = self.eta_by_divisor.iter().map(|(k, e)| format!("{k}:{e}")).collect();
        format!(
            "ell={}\nn={}\nhyp_count={}\nphi={}\nmis_count={}\neta={}\nbudget={}\n",
            self.ell,
            self.n,
            self.hyp_count,
            self.phi,
            self.mis_count,
            eta.join(","),
            self.degree_budget
        )
    }
}

impl fmt::Display for CountRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "hyp_count={} phi={} mis_count={} budget={}",
            self.hyp_count, self.phi, self.mis_count, self.degree_budget
        )?;
        for term in &self.breakdown {
            match term {
                BudgetTerm::Hyp { k, eta, degree } => writeln!(f, "  h_{k:<4} exp={eta:<4} deg={degree}")?,
                BudgetTerm::Mis { j, k, degree } => writeln!(f, "  m_{j},{k:<3} exp=1    deg={degree}")?,
            }
        }
        Ok(())
    }
}
