//! Multiprecision Newton refinement of double-precision approximations, and
//! the checks that decide whether a precision level is good enough.

use num_complex::Complex64;
use rug::{Complex, Float};

use super::target::{residual, term_bits, RootTarget};
use crate::par::Exec;

const MAX_NEWTON: usize = 200;

#[derive(Debug, Clone)]
pub(crate) struct Refined {
    pub value: Complex,
    pub residual: Float,
    /// a disk of this radius around `value` contains a root
    pub radius: Float,
}

/// Why a precision level was rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Rejection {
    NoConvergence,
    Residual,
    Overlap,
    Asymmetric,
}

fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

fn is_finite(z: &Complex) -> bool {
    z.real().is_finite() && z.imag().is_finite()
}

/// Newton's method from `start` until the step drops to the rounding level.
/// Returns the point and an inclusion radius.
fn newton(target: &dyn RootTarget, start: &Complex, prec: u32, degree: u32) -> Option<(Complex, Float)> {
    let mut c = Complex::with_val(prec, start);
    for _ in 0..MAX_NEWTON {
        let n = target.log_derivative_mp(&c, prec);
        if n.real().is_infinite() || n.imag().is_infinite() {
            // p(c) == 0 exactly
            return Some((c, Float::new(64)));
        }
        if !is_finite(&n) || n.is_zero() {
            return None;
        }
        let step = Complex::with_val(prec, n.recip_ref());
        c -= &step;
        let size = abs(&step);
        let scale = abs(&c).max(&Float::with_val(prec, 1));
        if size <= Float::with_val(prec, &scale >> (prec - 8)) {
            // D(c_old, deg |step|) holds a root and c moved by |step|
            let radius = Float::with_val(64, &size * (degree + 1));
            return Some((c, radius));
        }
    }
    None
}

/// Inclusion radius `deg |p/p'|` at `c`; zero at an exact root.
fn inclusion_radius(target: &dyn RootTarget, c: &Complex, prec: u32, degree: u32) -> Float {
    let n = target.log_derivative_mp(c, prec);
    if n.real().is_infinite() || n.imag().is_infinite() {
        return Float::new(64);
    }
    if !is_finite(&n) {
        // 0/0 at a multiple root
        return Float::with_val(64, rug::float::Special::Infinity);
    }
    let size = abs(&n);
    Float::with_val(64, Float::with_val(64, degree) / size)
}

/// Refines all approximations at `prec` bits and checks the result: residuals
/// below `2^(-prec/2)` and inclusion disks with `|z_i - z_j| > 2 (r_i + r_j)`.
pub(crate) fn refine(target: &dyn RootTarget, approx: &[Complex], prec: u32, exec: Exec) -> Result<Vec<Refined>, Rejection> {
    let degree = approx.len() as u32;
    let polished: Vec<Option<(Complex, Float)>> = exec.map(approx, |z| newton(target, z, prec, degree));
    let mut points = Vec::with_capacity(polished.len());
    for p in polished {
        points.push(p.ok_or(Rejection::NoConvergence)?);
    }
    symmetrize(&mut points)?;

    let bits = term_bits(target.poly());
    let threshold = Float::with_val(64, 1) >> (prec / 2);
    let refined: Vec<Refined> = exec.map(&points, |(value, _)| Refined {
        value: value.clone(),
        residual: residual(target.poly(), bits, value, prec),
        radius: inclusion_radius(target, value, prec, degree),
    });
    if refined.iter().any(|r| r.residual >= threshold) {
        return Err(Rejection::Residual);
    }
    if !separated(&refined) {
        return Err(Rejection::Overlap);
    }
    Ok(refined)
}

const MAX_MP_SWEEPS: usize = 500;

/// Aberth iteration at `prec` bits. Slower than the double-precision pass but
/// immune to its evaluation noise, which can let two approximations settle on
/// the same root. Starting points are nudged apart first.
pub(crate) fn aberth_mp(target: &dyn RootTarget, start: &[Complex64], prec: u32, exec: Exec) -> Vec<Complex> {
    let m = start.len();
    let mut roots: Vec<Complex> = start
        .iter()
        .enumerate()
        .map(|(i, z)| {
            let nudge = Complex64::from_polar(1e-9 * z.norm().max(1.0), 0.4 + i as f64);
            Complex::with_val(prec, (z.re + nudge.re, z.im + nudge.im))
        })
        .collect();
    let mut done = vec![false; m];
    for _ in 0..MAX_MP_SWEEPS {
        if done.iter().all(|&d| d) {
            break;
        }
        let (current, flags) = (&roots, &done);
        let updates: Vec<Option<(Complex, bool)>> = exec.map_range(m, |i| {
            if flags[i] {
                return None;
            }
            let z = &current[i];
            let n = target.log_derivative_mp(z, prec);
            if !is_finite(&n) {
                // exact root, or 0/0 at a multiple root
                return Some((z.clone(), true));
            }
            let mut s = Complex::new(prec);
            for (j, w) in current.iter().enumerate() {
                if j != i {
                    let d = Complex::with_val(prec, z - w);
                    s += Complex::with_val(prec, d.recip_ref());
                }
            }
            let step = Complex::with_val(prec, Complex::with_val(prec, &n - &s).recip_ref());
            if !is_finite(&step) {
                return Some((z.clone(), true));
            }
            let next = Complex::with_val(prec, z - &step);
            let scale = abs(&next).max(&Float::with_val(prec, 1));
            let still = abs(&step) <= Float::with_val(prec, &scale >> (prec - 8));
            Some((next, still))
        });
        for (i, u) in updates.into_iter().enumerate() {
            if let Some((z, fin)) = u {
                roots[i] = z;
                done[i] = fin;
            }
        }
    }
    roots
}

/// Makes the root set exactly closed under conjugation, as it is for any real
/// polynomial. A point within half its radius of the real axis shares its disk
/// with the mirror image, so the root it encloses is real and the imaginary
/// part is set to zero. Other points are paired with the conjugate whose disk
/// meets the mirrored disk, and the pair is replaced by its average.
fn symmetrize(points: &mut [(Complex, Float)]) -> Result<(), Rejection> {
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for (i, (c, r)) in points.iter_mut().enumerate() {
        let im = Float::with_val(64, c.imag().abs_ref());
        if im < Float::with_val(64, &*r >> 1) || c.imag().is_zero() {
            let p = c.imag().prec();
            *c.mut_imag() = Float::new(p);
        } else if c.imag().is_sign_positive() {
            upper.push(i);
        } else {
            lower.push(i);
        }
    }
    if upper.len() != lower.len() {
        return Err(Rejection::Asymmetric);
    }
    let res: Vec<f64> = points.iter().map(|p| p.0.real().to_f64()).collect();
    let re = |i: usize| res[i];
    lower.sort_by(|&a, &b| re(a).total_cmp(&re(b)));
    let mut taken = vec![false; lower.len()];
    for &u in &upper {
        let (cu, ru) = (&points[u].0, &points[u].1);
        let target = Complex::with_val(cu.prec(), cu.conj_ref());
        let ru64 = ru.to_f64();
        // candidates are close in real part; scan a window around re(u)
        let start = lower.partition_point(|&l| re(l) < re(u) - 1e-6 - 4.0 * ru64);
        let mut best: Option<(usize, Float)> = None;
        for (pos, &l) in lower.iter().enumerate().skip(start) {
            if re(l) > re(u) + 1e-6 + 4.0 * ru64 {
                break;
            }
            if taken[pos] {
                continue;
            }
            let d = abs(&Complex::with_val(cu.prec(), &points[l].0 - &target));
            let limit = Float::with_val(64, ru + &points[l].1);
            if d <= limit && best.as_ref().is_none_or(|b| d < b.1) {
                best = Some((pos, d));
            }
        }
        let Some((pos, _)) = best else {
            return Err(Rejection::Asymmetric);
        };
        taken[pos] = true;
        let l = lower[pos];
        let prec = points[u].0.prec();
        let lc = Complex::with_val(prec, points[l].0.conj_ref());
        let mut avg = Complex::with_val(prec, &points[u].0 + &lc);
        avg >>= 1;
        points[l].0 = Complex::with_val(prec, avg.conj_ref());
        points[u].0 = avg;
    }
    Ok(())
}

/// `|z_i - z_j| > 2 (r_i + r_j)` for all pairs, by a sweep over real parts.
fn separated(points: &[Refined]) -> bool {
    let max_r = points.iter().map(|p| p.radius.to_f64()).fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..points.len()).collect();
    let re = |i: usize| points[i].value.real().to_f64();
    order.sort_by(|&a, &b| re(a).total_cmp(&re(b)));
    for (a, &i) in order.iter().enumerate() {
        for &j in &order[a + 1..] {
            // f64 rounding of the real parts is far below this slack
            if re(j) - re(i) > 4.0 * max_r + 1e-12 * re(i).abs().max(1.0) {
                break;
            }
            let (p, q) = (&points[i], &points[j]);
            let d = abs(&Complex::with_val(p.value.prec(), &p.value - &q.value));
            let need = Float::with_val(64, &p.radius + &q.radius) * 2u32;
            if !(d > need) {
                return false;
            }
        }
    }
    true
}
