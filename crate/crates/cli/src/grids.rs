//! Parsers for the range flags: `--delta <v|a:b:n>`, `--L <v|a:b:step>`,
//! `--N <v|a:b>`.

use crate::CliError;

/// A delta spec is either a single value or `a:b:n`, n points linearly
/// spaced from a to b inclusive.
pub fn parse_delta_grid(spec: &str) -> Result<Vec<f64>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [one] => Ok(vec![parse_f64(one)?]),
        [a, b, n] => {
            let a = parse_f64(a)?;
            let b = parse_f64(b)?;
            let n: usize = n
                .parse()
                .map_err(|_| CliError::usage(format!("bad point count in delta spec {spec:?}")))?;
            if n == 0 {
                return Err(CliError::usage("delta grid needs at least one point"));
            }
            if n == 1 {
                return Ok(vec![a]);
            }
            let step = (b - a) / (n - 1) as f64;
            Ok((0..n)
                .map(|k| {
                    // keep endpoints exact
                    if k == n - 1 {
                        b
                    } else {
                        a + step * k as f64
                    }
                })
                .collect())
        }
        _ => Err(CliError::usage(format!(
            "delta spec {spec:?} is neither a value nor a:b:n"
        ))),
    }
}

fn parse_f64(s: &str) -> Result<f64, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad number {s:?}")))
}

/// An L spec is a single size or `a:b:step`, inclusive.
pub fn parse_l_list(spec: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let list: Vec<usize> = match parts.as_slice() {
        [one] => vec![parse_usize(one)?],
        [a, b, step] => {
            let a = parse_usize(a)?;
            let b = parse_usize(b)?;
            let step = parse_usize(step)?;
            if step == 0 {
                return Err(CliError::usage("L step must be positive"));
            }
            (a..=b).step_by(step).collect()
        }
        _ => {
            return Err(CliError::usage(format!(
                "L spec {spec:?} is neither a value nor a:b:step"
            )))
        }
    };
    if list.is_empty() {
        return Err(CliError::usage(format!("L spec {spec:?} produces no sizes")));
    }
    Ok(list)
}

/// An N spec is a single count or `a:b` inclusive; every N must be >= 1.
pub fn parse_n_range(spec: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let list: Vec<usize> = match parts.as_slice() {
        [one] => vec![parse_usize(one)?],
        [a, b] => (parse_usize(a)?..=parse_usize(b)?).collect(),
        _ => {
            return Err(CliError::usage(format!(
                "N spec {spec:?} is neither a value nor a:b"
            )))
        }
    };
    if list.is_empty() {
        return Err(CliError::usage(format!("N spec {spec:?} produces no values")));
    }
    if list.iter().any(|&n| n == 0) {
        return Err(CliError::usage("N must be at least 1"));
    }
    Ok(list)
}

fn parse_usize(s: &str) -> Result<usize, CliError> {
    s.trim()
        .parse()
        .map_err(|_| CliError::usage(format!("bad integer {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_grid_default_form() {
        let g = parse_delta_grid("-0.9:1:20").unwrap();
        assert_eq!(g.len(), 20);
        assert!((g[0] + 0.9).abs() < 1e-15);
        assert_eq!(*g.last().unwrap(), 1.0);
        assert!((g[1] - (-0.8)).abs() < 1e-12);
    }

    #[test]
    fn single_values() {
        assert_eq!(parse_delta_grid("0.5").unwrap(), vec![0.5]);
        assert_eq!(parse_l_list("9").unwrap(), vec![9]);
        assert_eq!(parse_n_range("4").unwrap(), vec![4]);
    }

    #[test]
    fn l_range() {
        assert_eq!(parse_l_list("5:21:2").unwrap().len(), 9);
        assert!(parse_l_list("9:5:2").is_err()); // empty
        assert!(parse_l_list("5:9:0").is_err());
    }

    #[test]
    fn n_range_rejects_zero() {
        assert!(parse_n_range("0").is_err());
        assert!(parse_n_range("0:5").is_err());
        assert_eq!(parse_n_range("2:4").unwrap(), vec![2, 3, 4]);
    }
}
