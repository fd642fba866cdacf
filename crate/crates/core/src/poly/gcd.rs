//! Polynomial gcd over the integers and the squarefreeness test built on it.

use rug::ops::Pow;
use rug::Integer;

use super::modp::{large_primes, Field};
use super::{Degree, IntPoly};

/// Inputs up to this degree go straight to the subresultant PRS.
const SUBRESULTANT_MAX_DEGREE: usize = 24;

/// Number of primes tried before the squarefree test falls back to an exact gcd.
const SQUAREFREE_PRIMES: usize = 3;

/// True iff `gcd(a, a')` is constant. The zero polynomial is not squarefree.
///
/// A constant gcd modulo a prime that does not divide the leading coefficient
/// already proves squarefreeness over the integers (the discriminant is nonzero
/// modulo that prime). Only when every tried prime reports a common factor is
/// the exact gcd computed.
pub fn is_squarefree(a: &IntPoly) -> bool {
    match a.degree() {
        Degree::NegInfinity => return false,
        Degree::Finite(0) => return true,
        Degree::Finite(_) => {}
    }
    let da = a.derivative();
    let lead = a.leading().expect("nonzero");
    for &p in large_primes().iter().take(SQUAREFREE_PRIMES) {
        let f = Field::new(p);
        if f.reduce_integer(lead) == 0 {
            continue;
        }
        let g = f.poly_gcd(&f.reduce_poly(a.coeffs()), &f.reduce_poly(da.coeffs()));
        if g.len() == 1 {
            return true;
        }
    }
    gcd(a, &da).degree() == Degree::Finite(0)
}

fn with_positive_lead(p: IntPoly) -> IntPoly {
    match p.leading() {
        Some(l) if *l < 0 => -p,
        _ => p,
    }
}

fn primitive_part(p: &IntPoly) -> IntPoly {
    let c = p.content();
    if c == 0 || c == 1 {
        return with_positive_lead(p.clone());
    }
    let q = IntPoly::from_coeffs(p.coeffs().iter().map(|x| Integer::from(x.div_exact_ref(&c))).collect());
    with_positive_lead(q)
}

/// Greatest common divisor over the integers, normalized to a positive leading
/// coefficient. `gcd(0, 0) = 0`.
///
/// Small inputs use the subresultant PRS; larger ones use a multi-prime modular
/// gcd whose candidate is accepted only after exact trial division of both
/// inputs, so the result is exact either way.
pub fn gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() {
        return with_positive_lead(b.clone());
    }
    if b.is_zero() {
        return with_positive_lead(a.clone());
    }
    let content = Integer::from(a.content().gcd_ref(&b.content()));
    let pa = primitive_part(a);
    let pb = primitive_part(b);
    let g = if pa.coeffs().len() == 1 || pb.coeffs().len() == 1 {
        IntPoly::one()
    } else if pa.coeffs().len().max(pb.coeffs().len()) <= SUBRESULTANT_MAX_DEGREE + 1 {
        subresultant_primitive(&pa, &pb)
    } else {
        modular_gcd(&pa, &pb).unwrap_or_else(|| subresultant_primitive(&pa, &pb))
    };
    g.scale(&content)
}

/// Brown-style modular gcd of two primitive polynomials.
fn modular_gcd(a: &IntPoly, b: &IntPoly) -> Option<IntPoly> {
    let la = a.leading().expect("nonzero");
    let lb = b.leading().expect("nonzero");
    let gamma = Integer::from(la.gcd_ref(lb));
    let mut best_deg = usize::MAX;
    let mut modulus = Integer::from(1);
    let mut accum: Vec<Integer> = Vec::new();
    let mut previous: Option<Vec<Integer>> = None;

    for &p in large_primes() {
        let f = Field::new(p);
        if f.reduce_integer(la) == 0 || f.reduce_integer(lb) == 0 {
            continue;
        }
        let g = f.poly_gcd(&f.reduce_poly(a.coeffs()), &f.reduce_poly(b.coeffs()));
        let d = g.len() - 1;
        if d == 0 {
            return Some(IntPoly::one());
        }
        if d > best_deg {
            // unlucky prime
            continue;
        }
        let gm = f.reduce_integer(&gamma);
        let image: Vec<u64> = g.iter().map(|&c| f.from_mont(f.mul(c, gm))).collect();
        if d < best_deg {
            best_deg = d;
            modulus = Integer::from(p);
            accum = image.iter().map(|&c| Integer::from(c)).collect();
            previous = None;
        } else {
            crt_combine(&mut accum, &modulus, &image, p);
            modulus *= p;
        }
        let half = Integer::from(&modulus >> 1u32);
        let candidate: Vec<Integer> = accum
            .iter()
            .map(|c| if *c > half { Integer::from(c - &modulus) } else { c.clone() })
            .collect();
        if previous.as_ref() == Some(&candidate) {
            let g = primitive_part(&IntPoly::from_coeffs(candidate.clone()));
            if g.divides(a) && g.divides(b) {
                return Some(g);
            }
        }
        previous = Some(candidate);
    }
    None
}

/// `accum` (residues mod `modulus`, in `[0, modulus)`) absorbs `image` mod `p`.
fn crt_combine(accum: &mut [Integer], modulus: &Integer, image: &[u64], p: u64) {
    let pz = Integer::from(p);
    let m_mod_p = Integer::from(modulus % &pz);
    let inv = m_mod_p.invert(&pz).expect("distinct primes");
    for (h, &r) in accum.iter_mut().zip(image) {
        let h_mod_p = Integer::from(&*h % &pz);
        let mut t = Integer::from(r) - h_mod_p;
        t *= &inv;
        t = t.modulo(&pz);
        *h += t * modulus;
    }
}

/// Subresultant PRS gcd, normalized to a positive leading coefficient.
pub fn subresultant_gcd(a: &IntPoly, b: &IntPoly) -> IntPoly {
    if a.is_zero() || b.is_zero() {
        return gcd(a, b);
    }
    let content = Integer::from(a.content().gcd_ref(&b.content()));
    subresultant_primitive(&primitive_part(a), &primitive_part(b)).scale(&content)
}

fn subresultant_primitive(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let (mut a, mut b) = if a.degree() >= b.degree() { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
    let mut g = Integer::from(1);
    let mut h = Integer::from(1);
    loop {
        let delta = a.coeffs().len() - b.coeffs().len();
        let r = pseudo_rem(&a, &b);
        if r.is_zero() {
            return primitive_part(&b);
        }
        if r.coeffs().len() == 1 {
            return IntPoly::one();
        }
        let divisor = &g * Integer::from((&h).pow(delta as u32));
        let next = IntPoly::from_coeffs(r.coeffs().iter().map(|c| Integer::from(c.div_exact_ref(&divisor))).collect());
        a = b;
        b = next;
        g = a.leading().expect("nonzero").clone();
        // h <- g^delta / h^(delta - 1)
        h = if delta == 0 {
            h
        } else {
            let num = Integer::from((&g).pow(delta as u32));
            let den = Integer::from((&h).pow(delta as u32 - 1));
            num.div_exact(&den)
        };
    }
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_rem(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let lb = b.leading().expect("nonzero").clone();
    let db = b.coeffs().len() - 1;
    let mut r = a.clone();
    let mut e = a.coeffs().len() as i64 - db as i64 + 1;
    while !r.is_zero() && r.coeffs().len() > db {
        let shift = r.coeffs().len() - 1 - db;
        let t = IntPoly::monomial(r.leading().expect("nonzero").clone(), shift);
        r = &r.scale(&lb) - &(&t * b);
        e -= 1;
    }
    if e > 0 {
        r = r.scale(&Integer::from((&lb).pow(e as u32)));
    }
    r
}
