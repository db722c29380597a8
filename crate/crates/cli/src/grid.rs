//! Grid descriptions accepted on the command line.

use ppm_holevo::DiffusionStrength;

/// Points in the default κ grid between the two sentinels.
pub const DEFAULT_LOG_POINTS: usize = 13;

/// Parses `inf`, a single value, a comma list, or `log:a:b:count`
/// (inclusive, logarithmically spaced). Lists may mix all three.
pub fn parse_kappas(text: &str) -> Result<Vec<DiffusionStrength>, String> {
    let mut out = Vec::new();
    for part in split_list(text)? {
        if let Some(rest) = part.strip_prefix("log:") {
            let fields: Vec<&str> = rest.split(':').collect();
            let [a, b, n] = fields.as_slice() else {
                return Err(format!("expected log:start:stop:count, got {part:?}"));
            };
            let a = parse_f64(a)?;
            let b = parse_f64(b)?;
            let n = parse_count(n)?;
            if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(format!(
                    "log range needs finite positive endpoints, got {part:?}"
                ));
            }
            for v in log_space(a, b, n) {
                out.push(DiffusionStrength::new(v).map_err(|e| e.to_string())?);
            }
        } else {
            out.push(
                part.parse::<DiffusionStrength>()
                    .map_err(|e| e.to_string())?,
            );
        }
    }
    Ok(out)
}

/// `0`, then `DEFAULT_LOG_POINTS` values spaced logarithmically over
/// `[0.01, 10]`, then `inf`.
pub fn default_kappas() -> Vec<DiffusionStrength> {
    let mut out = vec![DiffusionStrength::ZERO];
    out.extend(finite_default_kappas());
    out.push(DiffusionStrength::INFINITE);
    out
}

/// The default grid without `κ = 0`.
pub fn default_kappas_nonzero() -> Vec<DiffusionStrength> {
    let mut out = finite_default_kappas();
    out.push(DiffusionStrength::INFINITE);
    out
}

fn finite_default_kappas() -> Vec<DiffusionStrength> {
    log_space(1e-2, 10.0, DEFAULT_LOG_POINTS)
        .into_iter()
        .map(|v| DiffusionStrength::new(v).expect("positive grid value"))
        .collect()
}

fn log_space(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![a];
    }
    let (la, lb) = (a.log10(), b.log10());
    (0..n)
        .map(|i| {
            if i == 0 {
                a
            } else if i == n - 1 {
                b
            } else {
                10f64.powf(la + (lb - la) * i as f64 / (n - 1) as f64)
            }
        })
        .collect()
}

/// Parses a value, a comma list, or `start:stop:step` (inclusive).
pub fn parse_reals(text: &str) -> Result<Vec<f64>, String> {
    let mut out = Vec::new();
    for part in split_list(text)? {
        let fields: Vec<&str> = part.split(':').collect();
        match fields.as_slice() {
            [v] => out.push(parse_f64(v)?),
            [a, b, s] => {
                let (a, b, s) = (parse_f64(a)?, parse_f64(b)?, parse_f64(s)?);
                if !(s > 0.0) || b < a {
                    return Err(format!("range {part:?} needs stop >= start and step > 0"));
                }
                let n = ((b - a) / s * (1.0 + 1e-12)).floor() as usize + 1;
                out.extend((0..n).map(|i| a + i as f64 * s));
            }
            _ => return Err(format!("expected a value or start:stop:step, got {part:?}")),
        }
    }
    Ok(out)
}

/// Parses an integer, a comma list, or an inclusive range `a:b`.
pub fn parse_ints(text: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in split_list(text)? {
        match part.split_once(':') {
            None => out.push(parse_u64(part)?),
            Some((a, b)) => {
                let (a, b) = (parse_u64(a)?, parse_u64(b)?);
                if b < a {
                    return Err(format!("empty range {part:?}"));
                }
                out.extend(a..=b);
            }
        }
    }
    Ok(out)
}

fn split_list(text: &str) -> Result<Vec<&str>, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(format!("empty entry in {text:?}"));
    }
    Ok(parts)
}

fn parse_f64(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if !v.is_finite() {
        return Err(format!("not a finite number: {s:?}"));
    }
    Ok(v)
}

fn parse_u64(s: &str) -> Result<u64, String> {
    s.trim()
        .parse()
        .map_err(|_| format!("not a nonnegative integer: {s:?}"))
}

fn parse_count(s: &str) -> Result<usize, String> {
    match parse_u64(s)? {
        0 => Err("a range needs at least one point".to_string()),
        n => usize::try_from(n).map_err(|_| format!("count too large: {s:?}")),
    }
}
