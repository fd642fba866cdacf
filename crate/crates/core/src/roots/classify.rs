//! Dynamical classification of a parameter by the recurrence of its critical
//! orbit.

use rug::{Complex, Float};

use super::Kind;

/// Smallest `(ell, n)` (by `ell`, then `n`) with `|z_{ell+n} - z_ell| < tol` for
/// the orbit `z_0 = 0`, `z_{i+1} = z_i^2 + c`. Preperiods 0 and 1 both mean
/// the critical point itself is periodic: `z_{1+n} = z_1` forces `z_n = 0`.
///
/// The orbit is computed at the precision of `c`.
pub fn orbit_classify(c: &Complex, max_preperiod: u32, max_period: u32, tol: &Float) -> Kind {
    let prec = c.prec().0.max(c.prec().1);
    let len = (max_preperiod + max_period) as usize;
    let mut orbit = Vec::with_capacity(len + 1);
    orbit.push(Complex::new(prec));
    for i in 0..len {
        let mut z = Complex::with_val(prec, orbit[i].square_ref());
        z += c;
        orbit.push(z);
    }
    for ell in 0..=max_preperiod {
        for n in 1..=max_period {
            let d = Complex::with_val(prec, &orbit[(ell + n) as usize] - &orbit[ell as usize]);
            if Float::with_val(prec, d.abs_ref()) < *tol {
                return if ell <= 1 {
                    Kind::Hyperbolic { period: n }
                } else {
                    Kind::Misiurewicz { preperiod: ell, period: n }
                };
            }
        }
    }
    Kind::Unclassified
}

/// Default tolerance `2^(-prec/4)`.
pub fn default_tolerance(prec: u32) -> Float {
    Float::with_val(64, 1) >> (prec / 4)
}
