use rug::Integer;

use super::{kronecker, IntPoly, PolyError};

/// Quotient length times divisor length above which exact division goes through
/// a single big-integer division instead of the coefficient recurrence.
const KRONECKER_DIV_WORK: usize = 1 << 12;

/// Short divisors always use the recurrence: its cost is linear in the divisor
/// length while the big-integer division pays for the full packed dividend.
const KRONECKER_DIV_MIN_DIVISOR: usize = 128;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivAlgorithm {
    /// Descending coefficient recurrence with a remainder check.
    Recurrence,
    /// Evaluation at a power of two and one exact big-integer division.
    Kronecker,
    Auto,
}

pub(crate) fn exact_div(a: &IntPoly, b: &IntPoly) -> Result<IntPoly, PolyError> {
    exact_div_with(a, b, DivAlgorithm::Auto)
}

/// Exact quotient `a / b`. `b` need not be monic, but every step of the division
/// must stay in the integers; any nonzero remainder is an error.
pub fn exact_div_with(a: &IntPoly, b: &IntPoly, algorithm: DivAlgorithm) -> Result<IntPoly, PolyError> {
    let remainder_err = || PolyError::NonzeroRemainder {
        dividend: a.degree(),
        divisor: b.degree(),
    };
    if b.is_zero() {
        return Err(PolyError::DivisionByZero);
    }
    if a.is_zero() {
        return Ok(IntPoly::zero());
    }
    let (ac, bc) = (a.coeffs(), b.coeffs());
    if ac.len() < bc.len() {
        return Err(remainder_err());
    }
    if b.is_monomial() {
        return div_monomial(ac, bc).map(IntPoly::from_coeffs).ok_or_else(remainder_err);
    }
    let quotient_len = ac.len() - bc.len() + 1;
    let use_kronecker = match algorithm {
        DivAlgorithm::Recurrence => false,
        DivAlgorithm::Kronecker => true,
        DivAlgorithm::Auto => {
            bc.len() >= KRONECKER_DIV_MIN_DIVISOR && quotient_len.saturating_mul(bc.len()) >= KRONECKER_DIV_WORK
        }
    };
    if use_kronecker {
        match div_kronecker(ac, bc) {
            KroneckerOutcome::Quotient(q) => return Ok(IntPoly::from_coeffs(q)),
            KroneckerOutcome::NotDivisible => return Err(remainder_err()),
            KroneckerOutcome::Inconclusive => {}
        }
    }
    div_recurrence(ac, bc).map(IntPoly::from_coeffs).ok_or_else(remainder_err)
}

fn div_monomial(a: &[Integer], b: &[Integer]) -> Option<Vec<Integer>> {
    let k = b.len() - 1;
    let lead = &b[k];
    if a[..k].iter().any(|c| !c.is_zero()) {
        return None;
    }
    if *lead == 1 {
        return Some(a[k..].to_vec());
    }
    a[k..]
        .iter()
        .map(|c| c.is_divisible(lead).then(|| Integer::from(c.div_exact_ref(lead))))
        .collect()
}

/// Classical top-down recurrence: each quotient coefficient is the current top
/// coefficient of the running remainder divided by the leading coefficient of `b`.
fn div_recurrence(a: &[Integer], b: &[Integer]) -> Option<Vec<Integer>> {
    let e = b.len() - 1;
    let lead = &b[e];
    let monic = *lead == 1;
    let mut rem = a.to_vec();
    let qlen = a.len() - e;
    let mut q = vec![Integer::new(); qlen];
    for k in (0..qlen).rev() {
        let top = std::mem::take(&mut rem[k + e]);
        if top.is_zero() {
            continue;
        }
        let c = if monic {
            top
        } else {
            if !top.is_divisible(lead) {
                return None;
            }
            top.div_exact(lead)
        };
        for (r, bj) in rem[k..k + e].iter_mut().zip(&b[..e]) {
            *r -= &c * bj;
        }
        q[k] = c;
    }
    rem[..e].iter().all(|r| r.is_zero()).then_some(q)
}

enum KroneckerOutcome {
    Quotient(Vec<Integer>),
    NotDivisible,
    Inconclusive,
}

/// Exact division through `a(2^s) / b(2^s)`.
///
/// If `b | a` in `Z[z]` then `b(2^s) | a(2^s)` for every `s`, so a nonzero integer
/// remainder proves non-divisibility. Conversely, once the balanced digits `c`
/// of the integer quotient satisfy `|b|_1 * |c|_inf < 2^(s-1)` and
/// `|a|_inf < 2^(s-1)`, both `b*c` and `a` are the unique balanced expansion of
/// the same integer, hence `b*c = a` coefficientwise.
fn div_kronecker(a: &[Integer], b: &[Integer]) -> KroneckerOutcome {
    let a_bits = kronecker::max_bits(a);
    let b_l1_bits = l1_norm(b).significant_bits() as usize;
    let qlen = a.len() - b.len() + 1;
    // quotient coefficients are usually no wider than the dividend's
    let mut slot = a_bits + b_l1_bits + 2;
    let slot_cap = 8 * (a_bits + b_l1_bits + 64);
    while slot <= slot_cap {
        let x = kronecker::pack(a, slot);
        let y = kronecker::pack(b, slot);
        let (quot, rem) = x.div_rem(y);
        if !rem.is_zero() {
            return KroneckerOutcome::NotDivisible;
        }
        let c = kronecker::unpack(&quot, slot);
        let c_bits = kronecker::max_bits(&c);
        if c.len() <= qlen && b_l1_bits + c_bits < slot && a_bits < slot {
            if c.len() != qlen {
                // leading quotient coefficient vanished: impossible for a true
                // exact quotient of matching degree
                return KroneckerOutcome::NotDivisible;
            }
            return KroneckerOutcome::Quotient(c);
        }
        slot = (b_l1_bits + c_bits + 2).max(slot * 2);
    }
    KroneckerOutcome::Inconclusive
}

fn l1_norm(c: &[Integer]) -> Integer {
    let mut s = Integer::new();
    for x in c {
        if *x < 0 {
            s -= x;
        } else {
            s += x;
        }
    }
    s
}
