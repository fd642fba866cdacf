//! Ehrlich-Aberth simultaneous iteration in double precision.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::target::RootTarget;
use crate::par::Exec;
use crate::poly::IntPoly;

/// Fixed angular offset of the starting points, in radians.
const ANGLE_OFFSET: f64 = 0.4;

pub(crate) const MAX_SWEEPS: usize = 5000;

/// Starting points on circles whose radii come from the upper convex hull of
/// `(i, log2 |a_i|)`: each hull edge from `u` to `v` contributes `v - u` points
/// on the circle of radius `(|a_u| / |a_v|)^(1/(v-u))`. Low-order zero
/// coefficients become starting points at the origin.
pub(crate) fn initial_guesses(p: &IntPoly) -> Vec<Complex64> {
    let coeffs = p.coeffs();
    let m = coeffs.len() - 1;
    let mut out = Vec::with_capacity(m);
    let low = coeffs.iter().position(|c| !c.is_zero()).expect("nonzero polynomial");
    out.extend(std::iter::repeat_n(Complex64::new(0.0, 0.0), low));

    let pts: Vec<(usize, f64)> = coeffs
        .iter()
        .enumerate()
        .skip(low)
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let (mant, exp) = c.to_f64_exp();
            (i, mant.abs().log2() + f64::from(exp))
        })
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or below the segment a..pt
            let cross = (b.0 as f64 - a.0 as f64) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    for w in hull.windows(2) {
        let (u, lu) = w[0];
        let (v, lv) = w[1];
        let count = v - u;
        let radius = ((lu - lv) / count as f64).exp2();
        for j in 0..count {
            let angle = 2.0 * PI * j as f64 / count as f64 + 2.0 * PI * u as f64 / m as f64 + ANGLE_OFFSET;
            out.push(Complex64::from_polar(radius, angle));
        }
    }
    out
}

/// Runs Aberth sweeps until every approximation has stopped moving.
///
/// Each sweep computes all corrections from the previous sweep's values before
/// applying any of them, so the result does not depend on the execution order.
pub(crate) fn solve(target: &dyn RootTarget, start: Vec<Complex64>, exec: Exec) -> Vec<Complex64> {
    let m = start.len();
    let mut roots = start;
    // roots started at the origin are exact zeros of a polynomial with no
    // constant term
    let mut done: Vec<bool> = roots.iter().map(|z| *z == Complex64::new(0.0, 0.0)).collect();
    for _ in 0..MAX_SWEEPS {
        if done.iter().all(|&d| d) {
            break;
        }
        let current = &roots;
        let flags = &done;
        let updates: Vec<Option<(Complex64, bool)>> = exec.map_range(m, |i| {
            if flags[i] {
                return None;
            }
            let z = current[i];
            let n = target.log_derivative_f64(z);
            let mut s = Complex64::new(0.0, 0.0);
            for (j, &w) in current.iter().enumerate() {
                if j != i {
                    s += (z - w).inv();
                }
            }
            let step = (n - s).inv();
            if !step.re.is_finite() || !step.im.is_finite() {
                return Some((z, false));
            }
            let next = z - step;
            let still = step.norm() <= 4.0 * f64::EPSILON * next.norm() || step.norm() < 1e-300;
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
