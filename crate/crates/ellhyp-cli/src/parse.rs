//! Complex literals of the form `re+imi`.

use std::fmt;

use ellhyp::C64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseComplexError(pub String);

impl fmt::Display for ParseComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "malformed complex literal '{}': expected re, imi or re+imi", self.0)
    }
}

impl std::error::Error for ParseComplexError {}

fn num(s: &str, whole: &str) -> Result<f64, ParseComplexError> {
    let v = match s {
        "" | "+" => 1.0,
        "-" => -1.0,
        _ => s.parse::<f64>().map_err(|_| ParseComplexError(whole.to_string()))?,
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParseComplexError(whole.to_string()))
    }
}

/// Parses `0.3`, `0.1i`, `-i`, `0.3+0.1i`, `1e-3-2.5e-1i`.
pub fn parse_complex(s: &str) -> Result<C64, ParseComplexError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || ParseComplexError(s.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("nan") {
            return Err(bad());
        }
        return Ok(C64::new(num(&t, s)?, 0.0));
    };
    let bytes = body.as_bytes();
    // the sign that separates the parts, skipping exponent signs
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    match split {
        Some(k) => {
            let re = &body[..k];
            if re.is_empty() || re == "+" || re == "-" {
                return Err(bad());
            }
            Ok(C64::new(num(re, s)?, num(&body[k..], s)?))
        }
        None => Ok(C64::new(0.0, num(body, s)?)),
    }
}

/// Renders a complex number in the same syntax, round-trip exact.
pub fn format_complex(z: C64) -> String {
    if z.im.is_sign_negative() {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

/// Moves `flags` (each taking one value, as `--f v` or `--f=v`) in front
/// of the other arguments after `args[..start]`, so that a positional list
/// that accepts leading hyphens does not swallow them.
pub fn hoist_flags(args: Vec<String>, start: usize, flags: &[&str]) -> Vec<String> {
    if args.len() <= start {
        return args;
    }
    let mut head = args[..start].to_vec();
    let mut rest = Vec::new();
    let mut it = args.into_iter().skip(start);
    while let Some(a) = it.next() {
        let name = a.split_once('=').map_or(a.as_str(), |(n, _)| n);
        if !flags.contains(&name) {
            rest.push(a);
        } else if a.contains('=') {
            head.push(a);
        } else {
            head.push(a);
            head.extend(it.next());
        }
    }
    head.extend(rest);
    head
}
