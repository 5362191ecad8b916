//! Number formatting for machine-readable output.

/// Formats `x` with 17 significant digits, which round-trips every f64.
/// Plain decimal notation is used for moderate exponents, scientific
/// notation otherwise.
pub fn sig17(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.16e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..17).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, x)
    } else {
        sci
    }
}

/// Six decimals, the precision used in the human-readable tables.
pub fn fixed6(x: f64) -> String {
    format!("{x:.6}")
}
