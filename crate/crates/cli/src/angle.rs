//! Angles given as decimals or as rational multiples of π.

use std::f64::consts::PI;

/// Parses `0.9`, `pi`, `pi/3`, `2pi/3`, `2*pi/3`, `-pi/4`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .to_ascii_lowercase();
    let s = s.replace('π', "pi");
    if s.is_empty() {
        return Err("empty angle".into());
    }
    let Some(at) = s.find("pi") else {
        return finite(s.parse::<f64>().map_err(|_| format!("invalid angle `{text}`"))?, text);
    };

    let (head, tail) = (&s[..at], &s[at + 2..]);
    let coefficient = match head.trim_end_matches('*') {
        "" | "+" => 1.0,
        "-" => -1.0,
        num => num
            .parse::<f64>()
            .map_err(|_| format!("invalid multiplier in `{text}`"))?,
    };
    let denominator = match tail {
        "" => 1.0,
        rest => {
            let d = rest
                .strip_prefix('/')
                .and_then(|d| d.parse::<f64>().ok())
                .ok_or_else(|| format!("invalid angle `{text}`"))?;
            if d == 0.0 {
                return Err(format!("zero denominator in `{text}`"));
            }
            d
        }
    };
    finite(pi_fraction(coefficient, denominator), text)
}

/// `c·π/d` carried through with π's low-order part, so that `pi/3` lands
/// on the correctly rounded value rather than one ulp off.
fn pi_fraction(c: f64, d: f64) -> f64 {
    const PI_LO: f64 = 1.2246467991473532e-16;
    let q = c * PI / d;
    let p = c * PI;
    let p_err = c.mul_add(PI, -p);
    let t = q * d;
    let t_err = q.mul_add(d, -t);
    let residual = (p - t) + p_err - t_err + c * PI_LO;
    q + residual / d
}

fn finite(value: f64, text: &str) -> Result<f64, String> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("angle `{text}` is not finite"))
    }
}

#[cfg(test)]
mod tests {
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, TAU};

    use super::*;

    #[test]
    fn symbolic_forms_are_exact() {
        assert_eq!(parse_angle("pi/3").unwrap(), FRAC_PI_3);
        assert_eq!(parse_angle("PI/4").unwrap(), FRAC_PI_4);
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("-pi/4").unwrap(), -FRAC_PI_4);
        assert_eq!(parse_angle("pi/6").unwrap(), FRAC_PI_6);
        assert_eq!(parse_angle("pi/2").unwrap(), FRAC_PI_2);
        assert_eq!(parse_angle("2pi").unwrap(), TAU);
        assert_eq!(parse_angle("2pi/3").unwrap(), parse_angle("2*pi/3").unwrap());
        assert!((parse_angle("2pi/3").unwrap() - 2.0 * FRAC_PI_3).abs() <= f64::EPSILON);
        assert_eq!(parse_angle("π/3").unwrap(), FRAC_PI_3);
    }

    #[test]
    fn decimals() {
        assert_eq!(parse_angle("0.9").unwrap(), 0.9);
        assert_eq!(parse_angle("0").unwrap(), 0.0);
        assert_eq!(parse_angle("-1e-3").unwrap(), -1e-3);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "pi/", "pi/0", "x", "pi/3/2", "pie", "inf", "NaN", "3pi4"] {
            assert!(parse_angle(bad).is_err(), "{bad}");
        }
    }
}
