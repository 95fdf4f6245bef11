//! Value lists on the command line: `0,0.5,1`, `1:1024:x2` (geometric) or
//! `0:1:+0.25` (arithmetic, `-d` to count down).

use crate::error::{CliError, CliResult};

const MAX_STEPS: usize = 1_000_000;

pub fn parse_steps(spec: &str) -> CliResult<Vec<f64>> {
    let spec = spec.trim();
    let bad = |why: &str| CliError::Usage(format!("invalid step list '{spec}': {why}"));
    let num = |s: &str| {
        s.trim()
            .parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| bad("not a number"))
    };
    if spec.is_empty() {
        return Err(bad("empty"));
    }
    if !spec.contains(':') {
        return spec.split(',').map(num).collect();
    }
    let parts: Vec<&str> = spec.split(':').collect();
    let [start, end, step] = parts[..] else {
        return Err(bad("expected start:end:xF or start:end:+d"));
    };
    let (start, end) = (num(start)?, num(end)?);
    let step = step.trim();
    // tolerance so that e.g. 0:1:+0.1 reaches 1
    let tol = 1e-9 * start.abs().max(end.abs()).max(1e-300);
    let mut out = Vec::new();
    if let Some(f) = step.strip_prefix('x') {
        let f = num(f)?;
        let up = end >= start;
        if start == 0.0 || start.signum() != end.signum() || f <= 0.0 || f == 1.0 || (f > 1.0) != up
        {
            return Err(bad(
                "geometric steps need same-sign bounds and a factor moving toward the end",
            ));
        }
        let mut v = start;
        while if up { v <= end + tol } else { v >= end - tol } {
            out.push(v);
            v *= f;
            if out.len() > MAX_STEPS {
                return Err(bad("too many steps"));
            }
        }
    } else if step.starts_with('+') || step.starts_with('-') {
        let d = num(step)?;
        if d == 0.0 || (d > 0.0) != (end >= start) {
            return Err(bad("increment must move toward the end"));
        }
        let n = ((end - start) / d + 1e-9).floor() as usize;
        if n > MAX_STEPS {
            return Err(bad("too many steps"));
        }
        // index-based to avoid accumulating rounding
        out.extend((0..=n).map(|i| start + d * i as f64));
    } else {
        return Err(bad("step must start with x, + or -"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forms() {
        assert_eq!(parse_steps("0,0.5,1").unwrap(), [0.0, 0.5, 1.0]);
        assert_eq!(parse_steps("1:1024:x2").unwrap().len(), 11);
        assert_eq!(parse_steps("8:1:x0.5").unwrap(), [8.0, 4.0, 2.0, 1.0]);
        assert_eq!(
            parse_steps("0:1:+0.25").unwrap(),
            [0.0, 0.25, 0.5, 0.75, 1.0]
        );
        assert_eq!(parse_steps("3:1:-1").unwrap(), [3.0, 2.0, 1.0]);
        assert_eq!(parse_steps("2.5").unwrap(), [2.5]);
    }

    #[test]
    fn rejects_nonsense() {
        for s in [
            "", "a,b", "1:2", "1:8:x0.5", "0:8:x2", "1:2:+0", "1:2:*2", "1:2:-1",
        ] {
            assert!(parse_steps(s).is_err(), "{s}");
        }
    }
}
