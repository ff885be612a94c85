//! Fixed textual formatting for machine-readable outputs.

/// 17 significant digits in scientific notation, enough to round-trip any
/// `f64` and independent of the value's magnitude.
pub fn sci17(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".to_string()
    } else if x > 0.0 {
        "inf".to_string()
    } else {
        "-inf".to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        for x in [0.1, 1.0 / 3.0, 19.739208802178716, -2.5e-300, 0.0] {
            assert_eq!(sci17(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(sci17(1.0), "1.0000000000000000e0");
        assert_eq!(sci17(f64::INFINITY), "inf");
    }
}
