//! Fixed-precision number formatting shared by every report writer.

/// Formats `x` with 12 significant digits and trailing zeros removed.
///
/// Plain notation is used for decimal exponents in `-5..12`, scientific
/// notation otherwise.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim(mantissa))
    }
}

/// Rounds `x` to the value printed by [`sig12`].
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        sig12(x).parse().expect("sig12 output parses")
    } else {
        x
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
