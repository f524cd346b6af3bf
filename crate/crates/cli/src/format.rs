//! Number formatting for CSV and text output.

/// 17 significant digits; parses back to the identical `f64`.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn opt_f64(x: Option<f64>) -> String {
    x.map(sig17).unwrap_or_default()
}

pub fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    // deterministic spread of awkward doubles
    fn samples() -> Vec<f64> {
        let mut v = vec![0.1, 1.9, 3.61, 25.0 / 9.0, 1e-300, f64::MAX, -0.0];
        let mut x = 0.123_456_789_f64;
        for _ in 0..1000 {
            x = x * 3.999_999 * (1.0 - x);
            v.push(x * 1e3);
        }
        v
    }

    #[test]
    fn round_trips_exactly() {
        for x in samples() {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn blanks() {
        assert_eq!(opt_f64(None), "");
        assert_eq!(opt_bool(Some(true)), "true");
        assert_eq!(opt_bool(None), "");
    }
}
