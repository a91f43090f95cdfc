//! Single function evaluations for `ellhyp eval`.

use std::fmt;

use ellhyp::gamma_funcs::{elliptic_gamma, modified_gamma_g};
use ellhyp::integral_identities::{v_eval, BalancedParams, QuadCtx};
use ellhyp::numeric::ONE;
use ellhyp::sci_index::{compute_index, parse_theory, FlavorPoint};
use ellhyp::series_engine::{biorth_r, biorth_t, series_terms_v, EheqParams, Termination, VSeriesSpec};
use ellhyp::special_core::{theta, GMethod, OmegaTriple};
use ellhyp::{BasePair, C64};
use serde::Serialize;

use crate::parse::{format_complex, parse_complex};

pub const FUNCTIONS: [&str; 8] = ["theta", "gamma", "gammaG", "V", "12V11", "Rn", "Tn", "index"];

#[derive(Clone, Debug, PartialEq)]
pub enum EvalError {
    Usage(String),
    Eval(String),
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::Usage(s) => write!(f, "usage: {s}"),
            EvalError::Eval(s) => write!(f, "{s}"),
        }
    }
}

impl From<ellhyp::Error> for EvalError {
    fn from(e: ellhyp::Error) -> Self {
        EvalError::Eval(e.to_string())
    }
}

/// A value with how it was obtained.
#[derive(Clone, Debug, Serialize)]
pub struct Evaluation {
    pub function: String,
    pub value: [f64; 2],
    /// Torus nodes of the final quadrature level, or 0.
    pub nodes: u64,
    pub evaluations: u64,
    /// Series terms summed, for terminating series.
    pub terms: Option<usize>,
    pub method: String,
}

impl Evaluation {
    fn new(function: &str, value: C64, method: &str) -> Self {
        Evaluation {
            function: function.to_string(),
            value: [value.re, value.im],
            nodes: 0,
            evaluations: 0,
            terms: None,
            method: method.to_string(),
        }
    }

    pub fn value(&self) -> C64 {
        C64::new(self.value[0], self.value[1])
    }
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} = {}", self.function, format_complex(self.value()))?;
        write!(f, "method: {}", self.method)?;
        if self.nodes > 0 {
            write!(f, ", {} nodes, {} evaluations", self.nodes, self.evaluations)?;
        }
        if let Some(n) = self.terms {
            write!(f, ", {n} terms")?;
        }
        Ok(())
    }
}

fn usage(name: &str) -> &'static str {
    match name {
        "theta" => "eval theta <z> [--p P]",
        "gamma" => "eval gamma <z> [--p P --q Q]",
        "gammaG" => "eval gammaG <u> <w1> <w2> <w3> [--method product|bernoulli]",
        "V" => "eval V <t1> ... <t8> [--p P --q Q], with t1 ... t8 = (pq)^2",
        "12V11" => "eval 12V11 <N> <t0> <t2> <t3> <t4> <t5> <t6> [--p P --q Q]; t1 = q^-N, t7 solved",
        "Rn" => "eval Rn <n> <x> <e1> <e2> <e3> <e6> <e8> [--p P --q Q]",
        "Tn" => "eval Tn <n> <x> <e1> <e2> <e3> <e6> <e8> [--p P --q Q]",
        "index" => "eval index <theory-file> [--y 'a,b;c,d;u'] [--p P --q Q]",
        _ => "eval <theta|gamma|gammaG|V|12V11|Rn|Tn|index> <args...>",
    }
}

fn complexes(name: &str, args: &[String], n: usize) -> Result<Vec<C64>, EvalError> {
    if args.len() != n {
        return Err(EvalError::Usage(format!("{} (expected {n} arguments, got {})", usage(name), args.len())));
    }
    args.iter().map(|a| parse_complex(a).map_err(|e| EvalError::Usage(format!("{}: {e}", usage(name))))).collect()
}

fn degree(name: &str, s: &str) -> Result<u32, EvalError> {
    s.parse().map_err(|_| EvalError::Usage(format!("{}: degree '{s}' is not a non-negative integer", usage(name))))
}

/// Parses `a,b;c,d;u`: flavor blocks separated by `;`.
pub fn parse_flavor_point(s: &str) -> Result<FlavorPoint, EvalError> {
    let blocks = s
        .split(';')
        .map(|blk| blk.split(',').map(|v| parse_complex(v).map_err(|e| EvalError::Usage(e.to_string()))).collect())
        .collect::<Result<Vec<Vec<C64>>, _>>()?;
    Ok(FlavorPoint(blocks))
}

pub struct EvalOptions<'a> {
    pub bases: BasePair,
    pub method: Option<GMethod>,
    pub flavor: Option<&'a str>,
    pub ctx: QuadCtx<'a>,
}

pub fn run_eval(name: &str, args: &[String], o: &EvalOptions) -> Result<Evaluation, EvalError> {
    let b = &o.bases;
    match name {
        "theta" => {
            let z = complexes(name, args, 1)?;
            Ok(Evaluation::new(name, theta(z[0], b.p())?, "product"))
        }
        "gamma" => {
            let z = complexes(name, args, 1)?;
            Ok(Evaluation::new(name, elliptic_gamma(z[0], b)?, "double product"))
        }
        "gammaG" => {
            let v = complexes(name, args, 4)?;
            let w = OmegaTriple::new(v[1], v[2], v[3])?;
            let m = match o.method {
                Some(m) => m,
                None if w.available(GMethod::ProductForm) => GMethod::ProductForm,
                None => GMethod::BernoulliForm,
            };
            let label = match m {
                GMethod::ProductForm => "product form",
                _ => "bernoulli form",
            };
            Ok(Evaluation::new(name, modified_gamma_g(v[0], &w, m)?, label))
        }
        "V" => {
            let t = complexes(name, args, 8)?;
            let p = BalancedParams::new(t, 2, b)?;
            let r = v_eval(&p, &o.ctx)?;
            Ok(Evaluation { nodes: r.nodes, evaluations: r.evaluations, ..Evaluation::new(name, r.value, "torus quadrature") })
        }
        "12V11" => {
            let Some((n, rest)) = args.split_first() else {
                return Err(EvalError::Usage(usage(name).into()));
            };
            let n = degree(name, n)?;
            let v = complexes(name, rest, 6)?;
            let head = vec![ONE, v[1], v[2], v[3], v[4], v[5]];
            let spec = VSeriesSpec::solve_last(v[0], head, ONE, b, Termination::new(1, n))?;
            let terms = series_terms_v(&spec)?;
            let value = ellhyp::numeric::comp_sum(terms.iter().copied());
            Ok(Evaluation { terms: Some(terms.len()), ..Evaluation::new(name, value, "terminating series") })
        }
        "Rn" | "Tn" => {
            let Some((n, rest)) = args.split_first() else {
                return Err(EvalError::Usage(usage(name).into()));
            };
            let n = degree(name, n)?;
            let v = complexes(name, rest, 6)?;
            let prm = EheqParams::family(n, v[1], v[2], v[3], v[4], v[5], b);
            let value = if name == "Rn" { biorth_r(v[0], n, &prm)? } else { biorth_t(v[0], n, &prm)? };
            Ok(Evaluation { terms: Some(n as usize + 1), ..Evaluation::new(name, value, "terminating series") })
        }
        "index" => {
            let [path] = args else {
                return Err(EvalError::Usage(usage(name).into()));
            };
            let text = std::fs::read_to_string(path).map_err(|e| EvalError::Eval(format!("{path}: {e}")))?;
            let spec = parse_theory(&text)?;
            let y = match o.flavor {
                Some(s) => parse_flavor_point(s)?,
                None => FlavorPoint(
                    spec.flavor_groups
                        .iter()
                        .map(|g| match g {
                            ellhyp::sci_index::FlavorGroup::SU(k) => vec![ONE; *k],
                            ellhyp::sci_index::FlavorGroup::U1 => vec![ONE],
                        })
                        .collect(),
                ),
            };
            let r = compute_index(&spec, b, &y, &o.ctx)?;
            let nodes = r.nodes(spec.rank());
            let method = if spec.rank() == 0 { "closed product" } else { "torus quadrature" };
            Ok(Evaluation { nodes: if spec.rank() == 0 { 0 } else { nodes }, evaluations: r.evaluations, ..Evaluation::new(name, r.value, method) })
        }
        _ => Err(EvalError::Usage(format!("unknown function '{name}'; expected one of {}", FUNCTIONS.join(", ")))),
    }
}
