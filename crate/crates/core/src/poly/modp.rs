//! Polynomial arithmetic over `F_p` for word-size primes just below `2^62`,
//! in Montgomery form.

use std::sync::OnceLock;

use rug::Integer;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Field {
    p: u64,
    /// `-p^{-1} mod 2^64`
    neg_inv: u64,
    /// `2^128 mod p`, converts into Montgomery form
    r2: u64,
}

impl Field {
    pub(crate) fn new(p: u64) -> Field {
        assert!(p % 2 == 1 && p < 1 << 62);
        let mut inv: u64 = 1;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Field { p, neg_inv: inv.wrapping_neg(), r2 }
    }

    #[inline]
    fn reduce(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.neg_inv);
        let s = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn mul(&self, a: u64, b: u64) -> u64 {
        self.reduce(a as u128 * b as u128)
    }

    #[inline]
    pub(crate) fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub(crate) fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub(crate) fn to_mont(&self, x: u64) -> u64 {
        self.mul(x % self.p, self.r2)
    }

    pub(crate) fn from_mont(&self, x: u64) -> u64 {
        self.reduce(x as u128)
    }

    fn pow(&self, mut base: u64, mut e: u64) -> u64 {
        let mut acc = self.to_mont(1);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub(crate) fn inv(&self, a: u64) -> u64 {
        debug_assert!(a != 0);
        self.pow(a, self.p - 2)
    }

    /// Residue of an arbitrary integer, in Montgomery form.
    pub(crate) fn reduce_integer(&self, x: &Integer) -> u64 {
        // Horner in base 2^64: mont(v * 2^64 + l) = mul(mont(v), r2) + mul(l, r2),
        // and mul(l, r2) is a valid reduction for any 64-bit l since r2 < p.
        let mut r = 0;
        for &limb in x.as_limbs().iter().rev() {
            r = self.add(self.mul(r, self.r2), self.mul(limb, self.r2));
        }
        if *x < 0 && r != 0 {
            self.p - r
        } else {
            r
        }
    }

    /// Horner evaluation; `x` and the result are in Montgomery form.
    pub(crate) fn eval(&self, coeffs: &[u64], x: u64) -> u64 {
        coeffs.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    pub(crate) fn reduce_poly(&self, coeffs: &[Integer]) -> Vec<u64> {
        let mut v: Vec<u64> = coeffs.iter().map(|c| self.reduce_integer(c)).collect();
        trim(&mut v);
        v
    }

    /// Monic gcd of two polynomials (Montgomery form, ascending). Returns an
    /// empty vector only when both inputs are zero.
    pub(crate) fn poly_gcd(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        if a.len() < b.len() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_empty() {
            self.make_monic(&mut b);
            self.rem_monic(&mut a, &b);
            std::mem::swap(&mut a, &mut b);
        }
        if !a.is_empty() {
            self.make_monic(&mut a);
        }
        a
    }

    fn make_monic(&self, a: &mut [u64]) {
        let lead = *a.last().expect("nonzero");
        let inv = self.inv(lead);
        for c in a.iter_mut() {
            *c = self.mul(*c, inv);
        }
    }

    /// `a <- a mod b` for monic `b`.
    fn rem_monic(&self, a: &mut Vec<u64>, b: &[u64]) {
        let e = b.len() - 1;
        while a.len() > e {
            let k = a.len() - 1;
            let top = a[k];
            if top != 0 {
                let base = k - e;
                for (x, &y) in a[base..k].iter_mut().zip(&b[..e]) {
                    *x = self.sub(*x, self.mul(top, y));
                }
            }
            a.pop();
        }
        trim(a);
    }
}

pub(crate) fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Primes below `2^62`, descending, found by scanning odd candidates.
pub(crate) fn large_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let mut out = Vec::with_capacity(256);
        let mut candidate: u64 = (1 << 62) - 1;
        while out.len() < 256 {
            if Integer::from(candidate).is_probably_prime(30) != rug::integer::IsPrime::No {
                out.push(candidate);
            }
            candidate -= 2;
        }
        out
    })
}
