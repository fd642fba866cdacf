//! Kronecker substitution: a polynomial with integer coefficients is packed into
//! one big integer by evaluating it at `2^slot`, so that a single GMP
//! multiplication or division does the work of the whole coefficient loop.
//!
//! Unpacking uses balanced digits in `(-2^(slot-1), 2^(slot-1))`, which makes the
//! representation unique as long as every coefficient of interest fits that range.

use rug::integer::Order;
use rug::Integer;

fn bit_len(x: usize) -> usize {
    (usize::BITS - x.leading_zeros()) as usize
}

pub(crate) fn max_bits(coeffs: &[Integer]) -> usize {
    coeffs.iter().map(|c| c.significant_bits() as usize).max().unwrap_or(0)
}

/// Slot width that holds every coefficient of `a * b` with room for the sign.
pub(crate) fn product_slot(a: &[Integer], b: &[Integer]) -> usize {
    max_bits(a) + max_bits(b) + bit_len(a.len().min(b.len())) + 1
}

/// Evaluates `coeffs` at `2^slot`. Every coefficient must satisfy
/// `|c| < 2^slot`.
pub(crate) fn pack(coeffs: &[Integer], slot: usize) -> Integer {
    let words = (coeffs.len() * slot).div_ceil(64) + 1;
    let mut pos: Vec<u64> = vec![0; words];
    let mut neg: Option<Vec<u64>> = None;
    for (i, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        debug_assert!((c.significant_bits() as usize) <= slot);
        let buf = if *c < 0 {
            neg.get_or_insert_with(|| vec![0; words])
        } else {
            &mut pos
        };
        write_limbs(buf, i * slot, c.as_limbs());
    }
    let mut x = Integer::from_digits(&pos, Order::Lsf);
    if let Some(neg) = neg {
        x -= Integer::from_digits(&neg, Order::Lsf);
    }
    x
}

fn write_limbs(buf: &mut [u64], bit: usize, limbs: &[u64]) {
    let word = bit / 64;
    let shift = bit % 64;
    for (j, &l) in limbs.iter().enumerate() {
        buf[word + j] |= l << shift;
        if shift != 0 && l >> (64 - shift) != 0 {
            buf[word + j + 1] |= l >> (64 - shift);
        }
    }
}

fn read_word(src: &[u64], bit: usize) -> u64 {
    let w = bit / 64;
    let s = bit % 64;
    let lo = src.get(w).copied().unwrap_or(0) >> s;
    if s == 0 {
        lo
    } else {
        lo | src.get(w + 1).copied().unwrap_or(0) << (64 - s)
    }
}

/// Balanced base-`2^slot` digits of `x`, least significant first. The result
/// has no trailing zeros.
pub(crate) fn unpack(x: &Integer, slot: usize) -> Vec<Integer> {
    if x.is_zero() {
        return Vec::new();
    }
    let negative = *x < 0;
    let digits = x.as_limbs();
    let total_bits = x.significant_bits() as usize;
    let slots = total_bits.div_ceil(slot);
    let slot_words = slot.div_ceil(64);
    let top_mask = if slot.is_multiple_of(64) { u64::MAX } else { (1u64 << (slot % 64)) - 1 };
    let modulus = Integer::from(1) << slot as u32;

    let mut out = Vec::with_capacity(slots + 1);
    let mut tmp = vec![0u64; slot_words];
    let mut carry = false;
    for i in 0..slots {
        let base = i * slot;
        for (w, t) in tmp.iter_mut().enumerate() {
            *t = read_word(digits, base + 64 * w);
        }
        tmp[slot_words - 1] &= top_mask;
        let mut v = Integer::from_digits(&tmp, Order::Lsf);
        if carry {
            v += 1;
        }
        // v >= 2^(slot-1) maps to the negative digit v - 2^slot
        if v.significant_bits() as usize >= slot {
            v -= &modulus;
            carry = true;
        } else {
            carry = false;
        }
        out.push(v);
    }
    if carry {
        out.push(Integer::from(1));
    }
    if negative {
        for c in &mut out {
            c.neg_assign_mut();
        }
    }
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

trait NegAssign {
    fn neg_assign_mut(&mut self);
}

impl NegAssign for Integer {
    fn neg_assign_mut(&mut self) {
        let v = std::mem::take(self);
        *self = -v;
    }
}

pub(crate) fn mul(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let slot = product_slot(a, b);
    let x = pack(a, slot);
    let y = pack(b, slot);
    unpack(&Integer::from(&x * &y), slot)
}

pub(crate) fn square(a: &[Integer]) -> Vec<Integer> {
    if a.is_empty() {
        return Vec::new();
    }
    let slot = product_slot(a, a);
    let x = pack(a, slot);
    unpack(&Integer::from(x.square_ref()), slot)
}
