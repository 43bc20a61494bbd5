use alloc::format;

/// Rounds `value` to `decimals` places by going through the decimal text
/// form, so the result is exactly what a reader parsing `{:.decimals}`
/// output would get back.
pub fn round_decimals(value: f64, decimals: usize) -> f64 {
    if !value.is_finite() {
        return value;
    }
    let rounded: f64 = format!("{:.*}", decimals, value).parse().unwrap_or(value);
    // "-0.000000" parses to -0.0
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

#[cfg(feature = "serde")]
pub(crate) fn serialize_6dp<S: serde::Serializer>(value: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_decimals(*value, 6))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_half_away_and_drops_negative_zero() {
        assert_eq!(round_decimals(1.23456789, 4), 1.2346);
        assert_eq!(round_decimals(-0.00001, 4), 0.0);
        assert!(round_decimals(-0.00001, 4).is_sign_positive());
        assert_eq!(round_decimals(9.81, 6), 9.81);
    }

    #[test]
    fn idempotent() {
        for v in [0.1, 1.0 / 3.0, 123.456789123, -7.77777] {
            let once = round_decimals(v, 6);
            assert_eq!(round_decimals(once, 6).to_bits(), once.to_bits());
        }
    }
}
