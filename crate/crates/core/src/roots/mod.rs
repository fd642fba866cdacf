//! Numerical roots of the squarefree factors, and classification of the
//! resulting parameters by their critical orbits.

mod aberth;
mod classify;
mod polish;
pub mod target;

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use rug::float::Round;
use rug::{Complex, Float};
use thiserror::Error;

pub use classify::{default_tolerance, orbit_classify};
pub use target::{FamilyTarget, PolyTarget, RootTarget};

use crate::factor::{FactorEngine, FactorError};
use crate::par::Exec;
use crate::poly::IntPoly;

/// Escalation stops once the working precision reaches this multiple of the
/// request.
pub const ESCALATION_CAP: u32 = 8;

/// Smallest accepted working precision.
pub const MIN_PRECISION: u32 = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Kind {
    Hyperbolic { period: u32 },
    Misiurewicz { preperiod: u32, period: u32 },
    Unclassified,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Hyperbolic { .. } => "hyperbolic",
            Kind::Misiurewicz { .. } => "misiurewicz",
            Kind::Unclassified => "unclassified",
        }
    }

    /// `(preperiod, period)`; hyperbolic points have preperiod 0.
    pub fn orbit_type(self) -> Option<(u32, u32)> {
        match self {
            Kind::Hyperbolic { period } => Some((0, period)),
            Kind::Misiurewicz { preperiod, period } => Some((preperiod, period)),
            Kind::Unclassified => None,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kind::Hyperbolic { period } => write!(f, "Hyperbolic({period})"),
            Kind::Misiurewicz { preperiod, period } => write!(f, "Misiurewicz({preperiod},{period})"),
            Kind::Unclassified => f.write_str("Unclassified"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ParamPoint {
    pub value: Complex,
    pub kind: Kind,
    /// `|a(value)|` for the source polynomial `a`
    pub residual: Float,
    pub precision_bits: u32,
    /// orbit classification, filled in by [`points_of_order`]
    pub classified: Option<Kind>,
}

impl ParamPoint {
    /// `log2` of the residual; `-inf` for an exact root.
    pub fn residual_log2(&self) -> f64 {
        if self.residual.is_zero() {
            return f64::NEG_INFINITY;
        }
        Float::with_val(64, self.residual.log2_ref()).to_f64()
    }

    /// True when the orbit classification disagrees with the source factor.
    pub fn mismatch(&self) -> bool {
        self.classified.is_some_and(|k| k != self.kind)
    }

    pub fn to_c64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.value.real().to_f64(), self.value.imag().to_f64())
    }
}

#[derive(Debug, Error)]
pub enum RootError {
    #[error("precision exhausted for {target} at {bits} bits")]
    PrecisionExhausted { target: String, bits: u32 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Factor(#[from] FactorError),
}

fn cmp_points(a: &ParamPoint, b: &ParamPoint) -> Ordering {
    let re = a.value.real().partial_cmp(b.value.real()).unwrap_or(Ordering::Equal);
    re.then_with(|| a.value.imag().partial_cmp(b.value.imag()).unwrap_or(Ordering::Equal))
}

/// All roots of a squarefree `a`, sorted by real then imaginary part.
pub fn find_roots(a: &IntPoly, precision_bits: u32) -> Result<Vec<ParamPoint>, RootError> {
    find_roots_with(&PolyTarget::new(a.clone()), precision_bits, Exec::default())
}

/// Aberth iteration in double precision, then Newton polishing at
/// `precision_bits`. A level that fails the checks is retried once with Aberth
/// run at full precision. The precision then doubles, up to [`ESCALATION_CAP`]
/// times the request, until every residual is below `2^(-P/2)` and the
/// inclusion disks are well separated.
pub fn find_roots_with(target: &dyn RootTarget, precision_bits: u32, exec: Exec) -> Result<Vec<ParamPoint>, RootError> {
    let poly = target.poly();
    if !matches!(poly.degree(), crate::poly::Degree::Finite(d) if d >= 1) {
        return Err(RootError::InvalidInput(format!("{} has no roots", target.label())));
    }
    if precision_bits < MIN_PRECISION {
        return Err(RootError::InvalidInput(format!("precision must be at least {MIN_PRECISION} bits")));
    }
    let start = aberth::initial_guesses(poly);
    let approx = aberth::solve(target, start, exec);
    let fast: Vec<Complex> = approx.iter().map(|z| Complex::with_val(53, (z.re, z.im))).collect();
    let cap = precision_bits.saturating_mul(ESCALATION_CAP);
    let mut prec = precision_bits;
    loop {
        let found = polish::refine(target, &fast, prec, exec).or_else(|_| {
            let slow = polish::aberth_mp(target, &approx, prec, exec);
            polish::refine(target, &slow, prec, exec)
        });
        if let Ok(found) = found {
            let kind = target.kind();
            let mut points: Vec<ParamPoint> = found
                .into_iter()
                .map(|r| ParamPoint {
                    value: r.value,
                    kind,
                    residual: r.residual,
                    precision_bits: prec,
                    classified: None,
                })
                .collect();
            points.sort_by(cmp_points);
            return Ok(points);
        }
        if prec >= cap {
            return Err(RootError::PrecisionExhausted { target: target.label(), bits: prec });
        }
        prec = (prec * 2).min(cap);
    }
}

/// Roots of `h_n` for `n <= max_order` and of `m_{ell,n}` for `ell >= 2`,
/// `ell + n <= max_order`, each tagged with its kind and checked against
/// [`orbit_classify`] with the default tolerance.
pub fn points_of_order(engine: &FactorEngine, max_order: u32, precision_bits: u32, exec: Exec) -> Result<Vec<ParamPoint>, RootError> {
    let mut targets = Vec::new();
    for n in 1..=max_order {
        targets.push(FamilyTarget::gleason(n, engine.gleason(n)?));
    }
    for ell in 2..max_order {
        for n in 1..=max_order - ell {
            targets.push(FamilyTarget::misiurewicz(ell, n, engine.misiurewicz_factor(ell, n)?));
        }
    }
    let results = exec.map(&targets, |t| find_roots_with(t, precision_bits, exec));
    let mut points = Vec::new();
    for r in results {
        points.extend(r?);
    }
    let classified = exec.map(&points, |p| {
        orbit_classify(&p.value, max_order, max_order, &default_tolerance(p.precision_bits))
    });
    for (p, k) in points.iter_mut().zip(classified) {
        p.classified = Some(k);
    }
    points.sort_by(cmp_points);
    Ok(points)
}

pub const CSV_HEADER: &str = "re,im,kind,preperiod,period,residual_log2,precision_bits";

/// Fixed-point decimal with enough digits for `prec` bits; never `-0`.
fn decimal(x: &Float, prec: u32) -> String {
    let digits = (f64::from(prec) * std::f64::consts::LOG10_2).ceil() as usize;
    let s = x.to_string_radix_round(10, None, Round::Nearest);
    let out = fixed(&s, digits);
    if out.trim_start_matches('-').bytes().all(|b| b == b'0' || b == b'.') {
        out.trim_start_matches('-').to_string()
    } else {
        out
    }
}

/// Rewrites rug's scientific output `[-]d.ddde[+-]x` as fixed point with
/// `digits` fraction digits, rounding half away from zero.
fn fixed(s: &str, digits: usize) -> String {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (mant, exp) = match body.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().expect("exponent")),
        None => (body, 0),
    };
    let (int_part, frac_part) = mant.split_once('.').unwrap_or((mant, ""));
    let all: Vec<u8> = int_part.bytes().chain(frac_part.bytes()).map(|b| b - b'0').collect();
    // value = 0.all * 10^point
    let point = int_part.len() as i64 + exp;
    let keep = point + digits as i64;
    let mut kept: Vec<u8> = if keep <= 0 {
        Vec::new()
    } else {
        let mut v: Vec<u8> = all.iter().copied().take(keep as usize).collect();
        v.resize(keep as usize, 0);
        v
    };
    let next = if keep < 0 { 0 } else { all.get(keep as usize).copied().unwrap_or(0) };
    if next >= 5 {
        let mut i = kept.len();
        loop {
            if i == 0 {
                kept.insert(0, 1);
                break;
            }
            i -= 1;
            if kept[i] == 9 {
                kept[i] = 0;
            } else {
                kept[i] += 1;
                break;
            }
        }
    }
    // pad to at least one integer digit
    while kept.len() < digits + 1 {
        kept.insert(0, 0);
    }
    let split = kept.len() - digits;
    let mut out = String::with_capacity(kept.len() + 2);
    if neg {
        out.push('-');
    }
    let int_digits = &kept[..split];
    let first = int_digits.iter().position(|&d| d != 0).unwrap_or(int_digits.len() - 1);
    out.extend(int_digits[first..].iter().map(|&d| char::from(b'0' + d)));
    if digits > 0 {
        out.push('.');
        out.extend(kept[split..].iter().map(|&d| char::from(b'0' + d)));
    }
    out
}

/// One CSV row per point, in the given order, after [`CSV_HEADER`].
pub fn to_csv(points: &[ParamPoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        let (pre, per) = match p.kind.orbit_type() {
            Some((a, b)) => (a.to_string(), b.to_string()),
            None => (String::new(), String::new()),
        };
        let r = p.residual_log2();
        let r = if r == f64::NEG_INFINITY { "-inf".to_string() } else { format!("{r:.2}") };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            decimal(p.value.real(), p.precision_bits),
            decimal(p.value.imag(), p.precision_bits),
            p.kind.name(),
            pre,
            per,
            r,
            p.precision_bits
        );
    }
    out
}
