use rug::Integer;

use super::{kronecker, IntPoly};

/// Karatsuba recursion hands operands shorter than this to schoolbook.
pub const KARATSUBA_THRESHOLD: usize = 64;

/// At or above this many coefficients in the shorter operand, the product is
/// done as one big-integer multiplication (Kronecker substitution). Tuned with
/// `benches/poly_mul.rs`: on orbit polynomials Kronecker already wins at 33
/// coefficients, and Karatsuba never beats it, so `Auto` skips Karatsuba.
pub const KRONECKER_THRESHOLD: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MulAlgorithm {
    Schoolbook,
    Karatsuba,
    Kronecker,
    /// Size-based choice between schoolbook and Kronecker.
    Auto,
}

pub fn mul_with(a: &IntPoly, b: &IntPoly, algorithm: MulAlgorithm) -> IntPoly {
    let (a, b) = (a.coeffs(), b.coeffs());
    let coeffs = match algorithm {
        MulAlgorithm::Schoolbook => schoolbook(a, b),
        MulAlgorithm::Karatsuba => karatsuba(a, b),
        MulAlgorithm::Kronecker => kronecker::mul(a, b),
        MulAlgorithm::Auto => mul_slices(a, b),
    };
    IntPoly::from_coeffs(coeffs)
}

pub(crate) fn mul_slices(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let short = a.len().min(b.len());
    if short == 0 {
        Vec::new()
    } else if short < KRONECKER_THRESHOLD {
        if a.len().max(b.len()) >= KRONECKER_THRESHOLD && short > 4 {
            kronecker::mul(a, b)
        } else {
            schoolbook(a, b)
        }
    } else {
        kronecker::mul(a, b)
    }
}

pub(crate) fn square_slice(a: &[Integer]) -> Vec<Integer> {
    if a.len() < KRONECKER_THRESHOLD {
        schoolbook(a, a)
    } else {
        kronecker::square(a)
    }
}

fn schoolbook(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Integer::new(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (o, y) in out[i..].iter_mut().zip(b) {
            *o += x * y;
        }
    }
    out
}

fn add_into(dst: &mut [Integer], src: &[Integer]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d += s;
    }
}

fn sub_into(dst: &mut [Integer], src: &[Integer]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d -= s;
    }
}

fn sum(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    add_into(&mut out, short);
    out
}

/// Karatsuba over coefficient slices; result has length `a.len() + b.len() - 1`
/// (not normalized).
fn karatsuba(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let (a, b) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let (n, m) = (a.len(), b.len());
    if m == 0 {
        return Vec::new();
    }
    if m < KARATSUBA_THRESHOLD {
        return schoolbook(a, b);
    }
    let half = n.div_ceil(2);
    if m <= half {
        // Unbalanced: cut the long operand into blocks of the short one's length.
        let mut out = vec![Integer::new(); n + m - 1];
        for (k, block) in a.chunks(m).enumerate() {
            let part = karatsuba(block, b);
            add_into(&mut out[k * m..], &part);
        }
        return out;
    }
    let (a0, a1) = a.split_at(half);
    let (b0, b1) = b.split_at(half);
    let z0 = karatsuba(a0, b0);
    let z2 = karatsuba(a1, b1);
    let mut z1 = karatsuba(&sum(a0, a1), &sum(b0, b1));
    sub_into(&mut z1, &z0);
    sub_into(&mut z1, &z2);

    let mut out = vec![Integer::new(); n + m - 1];
    add_into(&mut out, &z0);
    add_into(&mut out[half..], &z1);
    add_into(&mut out[2 * half..], &z2);
    out
}
