//! Logarithmic derivatives `p'/p` of the polynomials whose roots are sought.
//!
//! The Gleason and Misiurewicz factors have coefficients of a thousand bits and
//! more, so evaluating them from coefficients in double precision is hopeless.
//! Their log-derivatives, however, are Möbius sums of log-derivatives of orbit
//! polynomials, and those come from iterating `z -> z^2 + c` directly, which is
//! well conditioned. Generic polynomials fall back to Horner's rule with an
//! extended exponent range.

use std::sync::Arc;

use num_complex::Complex64;
use rug::{Complex, Float, Integer};

use super::Kind;
use crate::arith::{divisors, mobius};
use crate::poly::IntPoly;

/// A squarefree polynomial together with evaluators for `p'/p`.
pub trait RootTarget: Sync {
    fn poly(&self) -> &IntPoly;

    /// Name used in error messages, e.g. `h_5`.
    fn label(&self) -> String;

    /// `p'(z)/p(z)` in double precision. May be non-finite at roots or when the
    /// evaluation overflows; callers treat that as "no update".
    fn log_derivative_f64(&self, z: Complex64) -> Complex64;

    /// `p'(z)/p(z)` with about `prec` correct bits.
    fn log_derivative_mp(&self, z: &Complex, prec: u32) -> Complex;

    /// Classification implied by where the polynomial came from.
    fn kind(&self) -> Kind {
        Kind::Unclassified
    }
}

/// Any integer polynomial, evaluated from its coefficients.
#[derive(Debug, Clone)]
pub struct PolyTarget {
    poly: IntPoly,
    /// ascending, each as `mantissa * 2^exp`
    scaled: Vec<(f64, i64)>,
    /// bits of `sum |a_i| 2^i`, bounding the terms met on `|z| <= 2`
    term_bits: u32,
}

impl PolyTarget {
    pub fn new(poly: IntPoly) -> Self {
        let scaled = poly
            .coeffs()
            .iter()
            .map(|c| {
                if c.is_zero() {
                    (0.0, 0)
                } else {
                    let (m, e) = c.to_f64_exp();
                    (m, i64::from(e))
                }
            })
            .collect();
        let term_bits = term_bits(&poly);
        PolyTarget { poly, scaled, term_bits }
    }
}

/// Bit length of `sum |a_i| 2^i`.
pub(crate) fn term_bits(p: &IntPoly) -> u32 {
    let mut s = Integer::new();
    for (i, c) in p.coeffs().iter().enumerate() {
        s += Integer::from(c.abs_ref()) << i as u32;
    }
    s.significant_bits()
}

fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k as i32)
}

/// `(p'/p)(z)` for coefficients given as `(mantissa, exponent)`, ascending,
/// by Horner's rule with a shared running exponent so nothing overflows.
fn scaled_horner_ratio(coeffs: &[(f64, i64)], z: Complex64) -> Complex64 {
    const BIG: f64 = 1e150;
    let mut p = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    let mut e: i64 = coeffs.iter().filter(|c| c.0 != 0.0).map(|c| c.1).max().unwrap_or(0);
    for &(m, k) in coeffs.iter().rev() {
        d = d * z + p;
        p *= z;
        if m != 0.0 {
            let shift = k - e;
            if shift > 400 {
                // the coefficient dwarfs the accumulators: move the exponent up
                p = p.scale(ldexp(1.0, -shift));
                d = d.scale(ldexp(1.0, -shift));
                e = k;
                p += m;
            } else {
                p += ldexp(m, shift);
            }
        }
        let size = p.norm_sqr().max(d.norm_sqr());
        if size > BIG * BIG {
            p = p.scale(ldexp(1.0, -500));
            d = d.scale(ldexp(1.0, -500));
            e += 500;
        } else if size != 0.0 && size < 1.0 / (BIG * BIG) {
            p = p.scale(ldexp(1.0, 500));
            d = d.scale(ldexp(1.0, 500));
            e -= 500;
        }
    }
    d / p
}

impl RootTarget for PolyTarget {
    fn poly(&self) -> &IntPoly {
        &self.poly
    }

    fn label(&self) -> String {
        format!("polynomial of degree {}", self.poly.degree())
    }

    fn log_derivative_f64(&self, z: Complex64) -> Complex64 {
        if z.norm() <= 1.0 {
            return scaled_horner_ratio(&self.scaled, z);
        }
        // p(z) = z^m R(1/z), so p'/p = m/z - R'(w) / (R(w) z^2) with w = 1/z
        let m = (self.scaled.len() - 1) as f64;
        let rev: Vec<(f64, i64)> = self.scaled.iter().rev().copied().collect();
        let w = z.inv();
        m * w - scaled_horner_ratio(&rev, w) * w * w
    }

    fn log_derivative_mp(&self, z: &Complex, prec: u32) -> Complex {
        let work = prec + self.term_bits + 32;
        let z = Complex::with_val(work, z);
        let mut p = Complex::new(work);
        let mut d = Complex::new(work);
        for c in self.poly.coeffs().iter().rev() {
            d *= &z;
            d += &p;
            p *= &z;
            *p.mut_real() += c;
        }
        Complex::with_val(prec, d / p)
    }
}

/// Orbit of 0 under `z^2 + c` in double precision, with `dz/dc`.
struct Orbit64 {
    z: Vec<Complex64>,
    dz: Vec<Complex64>,
    /// `p_j'/p_j`, kept meaningful after the orbit escapes
    ratio: Vec<Complex64>,
    /// first index whose value was too large to keep
    escape: usize,
}

// small enough that complex division, which squares the divisor, cannot overflow
const ESCAPE_NORM: f64 = 1e30;

impl Orbit64 {
    fn new(c: Complex64, len: usize) -> Orbit64 {
        let zero = Complex64::new(0.0, 0.0);
        let mut z = vec![zero; len + 1];
        let mut dz = vec![zero; len + 1];
        let mut ratio = vec![Complex64::new(f64::NAN, 0.0); len + 1];
        let mut escape = len + 1;
        for j in 1..=len {
            if j < escape {
                dz[j] = 2.0 * z[j - 1] * dz[j - 1] + 1.0;
                z[j] = z[j - 1] * z[j - 1] + c;
                ratio[j] = dz[j] / z[j];
                if z[j].norm() > ESCAPE_NORM {
                    escape = j + 1;
                }
            } else {
                // z_j ~ z_{j-1}^2 once |z| is huge, so the ratio doubles
                ratio[j] = 2.0 * ratio[j - 1];
            }
        }
        Orbit64 { z, dz, ratio, escape }
    }

    /// `(p_a + p_b)'/(p_a + p_b)` for `a > b`.
    fn sum_ratio(&self, a: usize, b: usize) -> Complex64 {
        if a < self.escape {
            (self.dz[a] + self.dz[b]) / (self.z[a] + self.z[b])
        } else {
            self.ratio[a]
        }
    }
}

struct OrbitMp {
    z: Vec<Complex>,
    dz: Vec<Complex>,
}

impl OrbitMp {
    fn new(c: &Complex, len: usize, prec: u32) -> OrbitMp {
        let c = Complex::with_val(prec, c);
        let mut z = Vec::with_capacity(len + 1);
        let mut dz = Vec::with_capacity(len + 1);
        z.push(Complex::new(prec));
        dz.push(Complex::new(prec));
        for j in 1..=len {
            let mut d = Complex::with_val(prec, &z[j - 1] * &dz[j - 1]);
            d *= 2;
            d += 1;
            let mut v = Complex::with_val(prec, z[j - 1].square_ref());
            v += &c;
            z.push(v);
            dz.push(d);
        }
        OrbitMp { z, dz }
    }

    fn ratio(&self, j: usize) -> Complex {
        Complex::with_val(self.z[j].prec(), &self.dz[j] / &self.z[j])
    }

    fn sum_ratio(&self, a: usize, b: usize) -> Complex {
        let num = Complex::with_val(self.z[a].prec(), &self.dz[a] + &self.dz[b]);
        let den = Complex::with_val(self.z[a].prec(), &self.z[a] + &self.z[b]);
        num / den
    }
}

#[derive(Debug, Clone, Copy)]
enum Family {
    /// `h_n = prod_{k|n} p_k^mu(n/k)`
    Gleason { n: u32 },
    /// `m_{ell,n} = prod_{k|n} (s_{ell,k} / p_gcd(k,ell-1))^mu(n/k)`
    Misiurewicz { ell: u32, n: u32 },
}

/// A Gleason or Misiurewicz factor, evaluated through the critical orbit.
#[derive(Debug, Clone)]
pub struct FamilyTarget {
    family: Family,
    poly: Arc<IntPoly>,
    /// divisors `k` of `n` with `mu(n/k) != 0`
    terms: Vec<(u32, i32)>,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FamilyTarget {
    /// `poly` must be `h_n`.
    pub fn gleason(n: u32, poly: Arc<IntPoly>) -> Self {
        FamilyTarget { family: Family::Gleason { n }, poly, terms: mobius_terms(n) }
    }

    /// `poly` must be `m_{ell,n}` with `ell >= 2`.
    pub fn misiurewicz(ell: u32, n: u32, poly: Arc<IntPoly>) -> Self {
        assert!(ell >= 2);
        FamilyTarget { family: Family::Misiurewicz { ell, n }, poly, terms: mobius_terms(n) }
    }

    fn orbit_len(&self) -> usize {
        match self.family {
            Family::Gleason { n } => n as usize,
            Family::Misiurewicz { ell, n } => (ell + n - 1) as usize,
        }
    }
}

fn mobius_terms(n: u32) -> Vec<(u32, i32)> {
    divisors(n).into_iter().map(|k| (k, mobius(n / k))).filter(|t| t.1 != 0).collect()
}

impl RootTarget for FamilyTarget {
    fn poly(&self) -> &IntPoly {
        &self.poly
    }

    fn label(&self) -> String {
        match self.family {
            Family::Gleason { n } => format!("h_{n}"),
            Family::Misiurewicz { ell, n } => format!("m_{ell},{n}"),
        }
    }

    fn kind(&self) -> Kind {
        match self.family {
            Family::Gleason { n } => Kind::Hyperbolic { period: n },
            Family::Misiurewicz { ell, n } => Kind::Misiurewicz { preperiod: ell, period: n },
        }
    }

    fn log_derivative_f64(&self, c: Complex64) -> Complex64 {
        let orbit = Orbit64::new(c, self.orbit_len());
        let mut acc = Complex64::new(0.0, 0.0);
        for &(k, mu) in &self.terms {
            let t = match self.family {
                Family::Gleason { .. } => orbit.ratio[k as usize],
                Family::Misiurewicz { ell, .. } => {
                    let g = gcd(k, ell - 1) as usize;
                    orbit.sum_ratio((ell + k - 1) as usize, (ell - 1) as usize) - orbit.ratio[g]
                }
            };
            acc += f64::from(mu) * t;
        }
        acc
    }

    fn log_derivative_mp(&self, c: &Complex, prec: u32) -> Complex {
        // a few guard bits per iteration for the growth of rounding errors
        let work = prec + 2 * self.orbit_len() as u32 + 32;
        let orbit = OrbitMp::new(c, self.orbit_len(), work);
        let mut acc = Complex::new(work);
        for &(k, mu) in &self.terms {
            let t = match self.family {
                Family::Gleason { .. } => orbit.ratio(k as usize),
                Family::Misiurewicz { ell, .. } => {
                    let g = gcd(k, ell - 1) as usize;
                    orbit.sum_ratio((ell + k - 1) as usize, (ell - 1) as usize) - orbit.ratio(g)
                }
            };
            if mu > 0 {
                acc += t;
            } else {
                acc -= t;
            }
        }
        Complex::with_val(prec, acc)
    }
}

/// `|p(z)|` by Horner's rule at a precision high enough that rounding stays
/// below `2^-(prec+32)` for `|z| <= 2`.
pub(crate) fn residual(poly: &IntPoly, term_bits: u32, z: &Complex, prec: u32) -> Float {
    let work = prec + term_bits + 32;
    let z = Complex::with_val(work, z);
    let mut p = Complex::new(work);
    for c in poly.coeffs().iter().rev() {
        p *= &z;
        *p.mut_real() += c;
    }
    Float::with_val(64, p.abs_ref())
}
