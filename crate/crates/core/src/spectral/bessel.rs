/// Bessel function of the first kind of order zero for `x >= 0`.
///
/// Power series up to `x = 8`; beyond that Miller's backward recurrence
/// normalised by `J0 + 2 Σ J_2k = 1`, which keeps the absolute error near
/// machine precision where the series would cancel catastrophically.
pub fn bessel_j0(x: f64) -> f64 {
    bessel_j01(x.abs()).0
}

/// Order-one companion of [`bessel_j0`] (`J0' = -J1`), for `x >= 0`.
pub fn bessel_j1(x: f64) -> f64 {
    let j1 = bessel_j01(x.abs()).1;
    if x < 0.0 {
        -j1
    } else {
        j1
    }
}

fn bessel_j01(x: f64) -> (f64, f64) {
    if x <= 8.0 {
        series(x)
    } else {
        miller(x)
    }
}

fn series(x: f64) -> (f64, f64) {
    let q = -0.25 * x * x;
    let (mut t0, mut s0) = (1.0, 1.0);
    let (mut t1, mut s1) = (0.5 * x, 0.5 * x);
    for k in 1..200 {
        let kf = k as f64;
        t0 *= q / (kf * kf);
        t1 *= q / (kf * (kf + 1.0));
        s0 += t0;
        s1 += t1;
        if t0.abs() < 1e-18 * s0.abs().max(1e-300) && t1.abs() < 1e-18 {
            break;
        }
    }
    (s0, s1)
}

fn miller(x: f64) -> (f64, f64) {
    let start = 2 * ((x + 12.0 * x.cbrt() + 30.0) as usize / 2);
    let (mut above, mut cur) = (0.0f64, 1e-30f64);
    let mut norm = 0.0;
    let mut j1 = 0.0;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / x * cur - above;
        above = cur;
        cur = below;
        // `cur` now holds J_{k-1}
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * cur;
        }
        if k == 2 {
            j1 = cur;
        }
        if cur.abs() > 1e200 {
            above *= 1e-200;
            cur *= 1e-200;
            norm *= 1e-200;
            j1 *= 1e-200;
        }
    }
    norm += cur;
    (cur / norm, j1 / norm)
}

/// Smallest positive zero of `J0`, by bisection on `[2, 3]` polished with a
/// Newton step.
pub fn j0_first_zero() -> f64 {
    let (mut lo, mut hi) = (2.0f64, 3.0f64);
    debug_assert!(bessel_j0(lo) > 0.0 && bessel_j0(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if bessel_j0(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let polished = x + bessel_j0(x) / bessel_j1(x);
    if bessel_j0(polished).abs() <= bessel_j0(x).abs() {
        polished
    } else {
        x
    }
}
