//! Dense univariate polynomials with arbitrary-precision integer coefficients.
//!
//! Every polynomial family in this crate (orbit polynomials, their differences,
//! Gleason and Misiurewicz factors) lives in [`IntPoly`]. Coefficients are stored
//! ascending and always in canonical form: no trailing zero coefficients, so the
//! zero polynomial is the empty vector.

mod div;
mod gcd;
mod kronecker;
pub(crate) mod modp;
mod mul;
mod text;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use rug::ops::Pow;
use rug::Integer;
use thiserror::Error;

pub use div::{exact_div_with, DivAlgorithm};
pub use gcd::{gcd, is_squarefree, subresultant_gcd};
pub use mul::{mul_with, MulAlgorithm, KARATSUBA_THRESHOLD, KRONECKER_THRESHOLD};
pub use text::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("divisor of degree {divisor} leaves a nonzero remainder on dividend of degree {dividend}")]
    NonzeroRemainder { dividend: Degree, divisor: Degree },
}

/// Degree of a polynomial, with `NegInfinity` for the zero polynomial so that
/// `deg(a*b) = deg(a) + deg(b)` holds without exceptions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Degree {
    NegInfinity,
    Finite(usize),
}

impl Degree {
    pub fn finite(self) -> Option<usize> {
        match self {
            Degree::NegInfinity => None,
            Degree::Finite(d) => Some(d),
        }
    }
}

impl Ord for Degree {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Degree::NegInfinity, Degree::NegInfinity) => Ordering::Equal,
            (Degree::NegInfinity, _) => Ordering::Less,
            (_, Degree::NegInfinity) => Ordering::Greater,
            (Degree::Finite(a), Degree::Finite(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Degree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Degree {
    type Output = Degree;

    fn add(self, rhs: Degree) -> Degree {
        match (self, rhs) {
            (Degree::Finite(a), Degree::Finite(b)) => Degree::Finite(a + b),
            _ => Degree::NegInfinity,
        }
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInfinity => f.write_str("-inf"),
            Degree::Finite(d) => write!(f, "{d}"),
        }
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<Integer>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Integer::from(1))
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::monomial(Integer::from(1), 1)
    }

    pub fn constant(c: Integer) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `c * z^k`.
    pub fn monomial(c: Integer, k: usize) -> Self {
        if c == 0 {
            return Self::zero();
        }
        let mut coeffs = vec![Integer::new(); k + 1];
        coeffs[k] = c;
        IntPoly { coeffs }
    }

    /// Builds a polynomial from ascending coefficients, stripping trailing zeros.
    pub fn from_coeffs(coeffs: Vec<Integer>) -> Self {
        let mut p = IntPoly { coeffs };
        p.normalize();
        p
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Integer::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Integer> {
        self.coeffs
    }

    /// Coefficient of `z^i`; zero past the degree.
    pub fn coeff(&self, i: usize) -> &Integer {
        static ZERO: Integer = Integer::ZERO;
        self.coeffs.get(i).unwrap_or(&ZERO)
    }

    pub fn degree(&self) -> Degree {
        match self.coeffs.len() {
            0 => Degree::NegInfinity,
            n => Degree::Finite(n - 1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<&Integer> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| *c == 1)
    }

    /// True for `c * z^k`.
    pub fn is_monomial(&self) -> bool {
        match self.coeffs.split_last() {
            Some((_, rest)) => rest.iter().all(|c| c.is_zero()),
            None => false,
        }
    }

    pub fn derivative(&self) -> IntPoly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| Integer::from(c * i as u64))
            .collect();
        IntPoly::from_coeffs(coeffs)
    }

    /// `self mod z^k`: keeps the coefficients of `z^0 .. z^(k-1)`.
    pub fn truncate(&self, k: usize) -> IntPoly {
        let k = k.min(self.coeffs.len());
        IntPoly::from_coeffs(self.coeffs[..k].to_vec())
    }

    /// Multiplication by `z^k`.
    pub fn shift(&self, k: usize) -> IntPoly {
        if self.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + k);
        coeffs.resize(k, Integer::new());
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn scale(&self, c: &Integer) -> IntPoly {
        IntPoly::from_coeffs(self.coeffs.iter().map(|a| Integer::from(a * c)).collect())
    }

    pub fn square(&self) -> IntPoly {
        IntPoly::from_coeffs(mul::square_slice(&self.coeffs))
    }

    /// `self^e` by repeated squaring; `pow(0)` is `1`.
    pub fn pow(&self, e: u32) -> IntPoly {
        if e == 0 {
            return IntPoly::one();
        }
        if self.is_monomial() {
            let k = self.coeffs.len() - 1;
            let c = Integer::from((&self.coeffs[k]).pow(e));
            return IntPoly::monomial(c, k * e as usize);
        }
        let mut result: Option<IntPoly> = None;
        let mut base = self.clone();
        let mut e = e;
        loop {
            if e & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => &r * &base,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.square();
        }
        result.expect("e > 0")
    }

    /// Exact quotient `self / divisor`; fails unless the remainder is zero.
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly, PolyError> {
        div::exact_div(self, divisor)
    }

    pub fn divides(&self, dividend: &IntPoly) -> bool {
        dividend.exact_div(self).is_ok()
    }

    pub fn eval(&self, x: &Integer) -> Integer {
        let mut acc = Integer::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    /// Bit length of the largest coefficient magnitude.
    pub fn max_coeff_bits(&self) -> u32 {
        self.coeffs.iter().map(|c| c.significant_bits()).max().unwrap_or(0)
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> Integer {
        let mut g = Integer::new();
        for c in &self.coeffs {
            g.gcd_mut(c);
            if g == 1 {
                break;
            }
        }
        g
    }

    pub fn is_squarefree(&self) -> bool {
        gcd::is_squarefree(self)
    }

    /// Writes the `poly v1` text form.
    pub fn to_text(&self) -> String {
        text::to_text(self)
    }

    pub fn parse_text(s: &str) -> Result<IntPoly, ParseError> {
        text::parse_text(s)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }
}

/// Product of all factors, multiplied smallest-degree-first so that operand
/// sizes stay balanced.
pub fn product<'a, I>(factors: I) -> IntPoly
where
    I: IntoIterator<Item = &'a IntPoly>,
{
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    // Heap of (Reverse(len), seq, poly); seq keeps ties deterministic.
    let mut heap: BinaryHeap<(Reverse<usize>, Reverse<usize>, HeapPoly)> = BinaryHeap::new();
    let mut seq = 0;
    for f in factors {
        heap.push((Reverse(f.coeffs.len()), Reverse(seq), HeapPoly(f.clone())));
        seq += 1;
    }
    loop {
        let Some((_, _, HeapPoly(a))) = heap.pop() else {
            return IntPoly::one();
        };
        let Some((_, _, HeapPoly(b))) = heap.pop() else {
            return a;
        };
        let c = &a * &b;
        heap.push((Reverse(c.coeffs.len()), Reverse(seq), HeapPoly(c)));
        seq += 1;
    }
}

// Heap payload that never participates in ordering.
struct HeapPoly(IntPoly);

impl PartialEq for HeapPoly {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}
impl Eq for HeapPoly {}
impl PartialOrd for HeapPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapPoly {
    fn cmp(&self, _: &Self) -> Ordering {
        Ordering::Equal
    }
}

fn add_slices(a: &[Integer], b: &[Integer]) -> Vec<Integer> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut out = long.to_vec();
    for (o, s) in out.iter_mut().zip(short) {
        *o += s;
    }
    out
}

impl Add<&IntPoly> for &IntPoly {
    type Output = IntPoly;

    fn add(self, rhs: &IntPoly) -> IntPoly {
        IntPoly::from_coeffs(add_slices(&self.coeffs, &rhs.coeffs))
    }
}

impl Sub<&IntPoly> for &IntPoly {
    type Output = IntPoly;

    fn sub(self, rhs: &IntPoly) -> IntPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl AddAssign<&IntPoly> for IntPoly {
    fn add_assign(&mut self, rhs: &IntPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Integer::new());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.normalize();
    }
}

impl SubAssign<&IntPoly> for IntPoly {
    fn sub_assign(&mut self, rhs: &IntPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), Integer::new());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        self.normalize();
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;

    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| Integer::from(-c)).collect(),
        }
    }
}

impl Mul<&IntPoly> for &IntPoly {
    type Output = IntPoly;

    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if std::ptr::eq(self, rhs) {
            return self.square();
        }
        IntPoly::from_coeffs(mul::mul_slices(&self.coeffs, &rhs.coeffs))
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for IntPoly {
    type Output = IntPoly;

    fn neg(mut self) -> IntPoly {
        for c in &mut self.coeffs {
            *c = Integer::from(-&*c);
        }
        self
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = *c < 0;
            let abs = Integer::from(c.abs_ref());
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            match (i, abs == 1) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("z")?,
                (1, false) => write!(f, "{abs}*z")?,
                (_, true) => write!(f, "z^{i}")?,
                (_, false) => write!(f, "{abs}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() > 24 {
            write!(f, "IntPoly(deg={}, max_bits={})", self.degree(), self.max_coeff_bits())
        } else {
            write!(f, "IntPoly({self})")
        }
    }
}
