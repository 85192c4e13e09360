//! Bracketing root finding (Brent's method).

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Termination settings for [`brent`].
#[derive(Debug, Clone, Copy)]
pub struct RootOptions<T> {
    /// Absolute tolerance on the abscissa.
    pub xtol: T,
    /// Relative tolerance on the abscissa.
    pub rtol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for RootOptions<T> {
    fn default() -> Self {
        Self {
            xtol: T::lit(1e-12),
            rtol: T::epsilon() * T::lit(4.0),
            max_iter: 200,
        }
    }
}

/// Finds a root of `f` in `[a, b]`, which must bracket a sign change.
///
/// Inverse quadratic interpolation and secant steps are taken when they
/// land safely inside the bracket, bisection otherwise.
pub fn brent<T: Real, F: FnMut(T) -> T>(mut f: F, a: T, b: T, opts: RootOptions<T>) -> Result<T> {
    let fa = f(a);
    let fb = f(b);
    brent_with_values(&mut f, a, fa, b, fb, opts)
}

/// As [`brent`] but with `f(a)`, `f(b)` already evaluated.
pub fn brent_with_values<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    a: T,
    fa: T,
    b: T,
    fb: T,
    opts: RootOptions<T>,
) -> Result<T> {
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::NonFinite("root bracket endpoint"));
    }
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoBracket {
            lo: a.to_f64_lossy(),
            hi: b.to_f64_lossy(),
            f_lo: fa.to_f64_lossy(),
            f_hi: fb.to_f64_lossy(),
        });
    }

    let two = T::lit(2.0);
    let three = T::lit(3.0);
    let (mut xpre, mut fpre) = (a, fa);
    let (mut xcur, mut fcur) = (b, fb);
    let (mut xblk, mut fblk) = (T::zero(), T::zero());
    let (mut spre, mut scur) = (T::zero(), T::zero());

    // Follows the structure of scipy's brentq (Brent 1973, ch. 4).
    for _ in 0..opts.max_iter {
        if fpre != T::zero() && fcur != T::zero() && fpre.signum() != fcur.signum() {
            xblk = xpre;
            fblk = fpre;
            spre = xcur - xpre;
            scur = spre;
        }
        if fblk.abs() < fcur.abs() {
            xpre = xcur;
            xcur = xblk;
            xblk = xpre;
            fpre = fcur;
            fcur = fblk;
            fblk = fpre;
        }

        let delta = (opts.xtol + opts.rtol * xcur.abs()) / two;
        let sbis = (xblk - xcur) / two;
        if fcur == T::zero() || sbis.abs() < delta {
            return Ok(xcur);
        }

        if spre.abs() > delta && fcur.abs() < fpre.abs() {
            let stry = if xpre == xblk {
                // secant
                -fcur * (xcur - xpre) / (fcur - fpre)
            } else {
                // inverse quadratic interpolation
                let dpre = (fpre - fcur) / (xpre - xcur);
                let dblk = (fblk - fcur) / (xblk - xcur);
                -fcur * (fblk * dblk - fpre * dpre) / (dblk * dpre * (fblk - fpre))
            };
            if two * stry.abs() < spre.abs().min(three * sbis.abs() - delta) {
                spre = scur;
                scur = stry;
            } else {
                spre = sbis;
                scur = sbis;
            }
        } else {
            spre = sbis;
            scur = sbis;
        }

        xpre = xcur;
        fpre = fcur;
        if scur.abs() > delta {
            xcur += scur;
        } else {
            xcur += if sbis > T::zero() { delta } else { -delta };
        }
        fcur = f(xcur);
        if !fcur.is_finite() {
            return Err(Error::NonFinite("root finder objective"));
        }
    }
    Err(Error::RootNoConvergence {
        iterations: opts.max_iter,
    })
}

/// Widens `[lo, hi]` geometrically (lo halves, hi doubles) until `f` changes
/// sign or the limits `[min_lo, max_hi]` are reached. Returns the bracket and
/// the endpoint values.
pub fn widen_bracket<T: Real, F: FnMut(T) -> T>(
    f: &mut F,
    mut lo: T,
    mut hi: T,
    min_lo: T,
    max_hi: T,
) -> Result<(T, T, T, T)> {
    let two = T::lit(2.0);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    loop {
        if f_lo.signum() != f_hi.signum() || f_lo == T::zero() || f_hi == T::zero() {
            return Ok((lo, f_lo, hi, f_hi));
        }
        if lo <= min_lo && hi >= max_hi {
            return Err(Error::NoBracket {
                lo: lo.to_f64_lossy(),
                hi: hi.to_f64_lossy(),
                f_lo: f_lo.to_f64_lossy(),
                f_hi: f_hi.to_f64_lossy(),
            });
        }
        if lo > min_lo {
            lo = (lo / two).max(min_lo);
            f_lo = f(lo);
        }
        if hi < max_hi {
            hi = (hi * two).min(max_hi);
            f_hi = f(hi);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_square_root_of_two() {
        let r = brent(|x: f64| x * x - 2.0, 0.0, 2.0, RootOptions::default()).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn handles_flat_and_steep_functions() {
        let r = brent(
            |x: f64| (x - 1.0).powi(3),
            -3.0,
            4.0,
            RootOptions::default(),
        )
        .unwrap();
        assert!((r - 1.0).abs() < 1e-4);
        let r = brent(
            |x: f64| (20.0 * (x - 0.3)).tanh(),
            0.0,
            1.0,
            RootOptions::default(),
        )
        .unwrap();
        assert!((r - 0.3).abs() < 1e-12);
    }

    #[test]
    fn reports_missing_sign_change() {
        let err = brent(|x: f64| x * x + 1.0, -1.0, 1.0, RootOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoBracket { .. }));
    }

    #[test]
    fn widening_reaches_root_outside_initial_bracket() {
        let mut f = |x: f64| x - 0.9;
        let (lo, _, hi, _) = widen_bracket(&mut f, 0.2, 0.5, 0.05, 2.0).unwrap();
        assert!(lo <= 0.9 && hi >= 0.9);
        let mut g = |x: f64| x - 5.0;
        assert!(widen_bracket(&mut g, 0.2, 0.5, 0.05, 2.0).is_err());
    }

    #[test]
    fn endpoint_root_returned_directly() {
        let r = brent(|x: f64| x, 0.0, 1.0, RootOptions::default()).unwrap();
        assert_eq!(r, 0.0);
    }
}
