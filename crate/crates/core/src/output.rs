//! CSV number formatting shared by every writer in the crate.

/// Twelve significant digits in scientific notation. Negative zero prints as zero.
pub fn fmt_f64(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

#[cfg(test)]
mod tests {
    use super::fmt_f64;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt_f64(0.5), "5.00000000000e-1");
        assert_eq!(fmt_f64(-0.0), "0.00000000000e0");
        assert_eq!(fmt_f64(std::f64::consts::PI), "3.14159265359e0");
    }
}
