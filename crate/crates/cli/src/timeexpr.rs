//! Times given as decimals or multiples of π: `1.5`, `pi`, `-pi/4`,
//! `3pi/4`, `2*pi/3`.

use std::f64::consts::PI;

pub fn parse_time(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.replace('π', "pi");
    let err = || format!("invalid time '{text}': expected a number or an expression like 3pi/4");
    let Some(at) = s.find("pi") else {
        let v: f64 = s.parse().map_err(|_| err())?;
        return if v.is_finite() { Ok(v) } else { Err(err()) };
    };
    let (head, tail) = (&s[..at], &s[at + 2..]);
    let head = head.strip_suffix('*').unwrap_or(head);
    let k = match head {
        "" | "+" => 1.0,
        "-" => -1.0,
        h => h.parse::<f64>().map_err(|_| err())?,
    };
    let m = match tail {
        "" => 1.0,
        t => t.strip_prefix('/').ok_or_else(err)?.parse::<f64>().map_err(|_| err())?,
    };
    if m == 0.0 || !k.is_finite() || !m.is_finite() {
        return Err(err());
    }
    Ok(k * PI / m)
}

/// Writes `t` as a simple multiple of π when it is one to within 1e-6.
pub fn format_time(t: f64) -> String {
    if t == 0.0 {
        return "0".into();
    }
    for m in 1..=12i64 {
        let k = (t * m as f64 / PI).round();
        if k != 0.0 && (t - k * PI / m as f64).abs() < 1e-6 {
            let k = k as i64;
            let num = match k {
                1 => "π".to_string(),
                -1 => "-π".to_string(),
                k => format!("{k}π"),
            };
            return if m == 1 { num } else { format!("{num}/{m}") };
        }
    }
    format!("{t}")
}

/// `a:b:n` with times for the bounds and an integer count.
pub fn parse_time_range(text: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("invalid range '{text}': expected start:end:count"));
    }
    let n = parts[2]
        .trim()
        .parse()
        .map_err(|_| format!("invalid sample count '{}'", parts[2]))?;
    Ok((parse_time(parts[0])?, parse_time(parts[1])?, n))
}
