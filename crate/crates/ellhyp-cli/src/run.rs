//! Seeded, parallel execution of registry entries.

use std::time::Instant;

use ellhyp::contour_quad::Executor;
use ellhyp::integral_identities::QuadCtx;
use ellhyp::numeric::polar;
use ellhyp::{BasePair, Error, IdentityReport, Result, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::registry::{resolve, Entry, Trial};

/// Resampling budget per draw for parameters that miss a precondition.
pub const MAX_ATTEMPTS: u32 = 200;

/// Evaluates quadrature nodes on the rayon pool. The result vector is in
/// index order, so sums over it do not depend on the thread count.
pub struct RayonExec;

impl Executor for RayonExec {
    fn map(&self, n: usize, f: &(dyn Fn(usize) -> C64 + Sync)) -> Vec<C64> {
        (0..n).into_par_iter().map(f).collect()
    }
}

/// A report plus the error that prevented a comparison, if any.
#[derive(Clone, Debug, PartialEq)]
pub struct Record {
    pub report: IdentityReport,
    pub error: Option<String>,
}

impl Record {
    pub fn pass(&self) -> bool {
        self.report.pass && self.error.is_none()
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// The stream of one draw depends only on the seed, the id and the draw
/// index, never on scheduling.
pub fn draw_rng(seed: u64, id: &str, draw: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&fnv1a(id).to_le_bytes());
    key[16..24].copy_from_slice(&draw.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn retryable(e: &Error) -> bool {
    matches!(e, Error::Precondition(_) | Error::Domain(_) | Error::Singularity { .. } | Error::MethodUnavailable(_))
}

fn bases_for(entry: &Entry, cfg: &RunConfig, fixed: &BasePair, rng: &mut ChaCha8Rng) -> BasePair {
    if let Some((p, q)) = entry.bases {
        return BasePair::real(p, q).expect("registry bases");
    }
    if cfg.random_bases {
        let mut z = || polar(rng.random_range(0.05..0.4), rng.random_range(-3.1..3.1));
        let (p, q) = (z(), z());
        return BasePair::new(p, q).expect("moduli below 1");
    }
    fixed.clone()
}

/// Runs one draw: resamples on precondition misses, records other errors
/// as failed reports.
pub fn run_draw(entry: &Entry, draw: u64, cfg: &RunConfig, b: &BasePair, ctx: &QuadCtx) -> Record {
    let tol = cfg.tol.unwrap_or(entry.tol);
    let start = Instant::now();
    let mut rng = draw_rng(cfg.seed, entry.id, draw);
    let mut last = String::new();
    let mut outcome = None;
    for _ in 0..MAX_ATTEMPTS {
        let bases = bases_for(entry, cfg, b, &mut rng);
        let mut trial = Trial { rng: &mut rng, b: bases, tol, draw, ctx };
        match (entry.check)(&mut trial) {
            Ok(r) => {
                outcome = Some(Ok(r));
                break;
            }
            Err(e) if retryable(&e) => last = e.to_string(),
            Err(e) => {
                outcome = Some(Err(e.to_string()));
                break;
            }
        }
    }
    let outcome = outcome.unwrap_or_else(|| Err(format!("no admissible draw in {MAX_ATTEMPTS} attempts: {last}")));
    let (mut report, error) = match outcome {
        Ok(r) => (r, None),
        Err(e) => (IdentityReport::failed(entry.id, tol), Some(e)),
    };
    report.identity_id = entry.id.to_string();
    report.seed = cfg.seed;
    report.draw = draw;
    report.runtime_ms = start.elapsed().as_millis() as u64;
    Record { report, error }
}

/// Runs every draw of every entry named by `target`, sorted by id and draw.
pub fn run_verify(target: &str, cfg: &RunConfig) -> Result<Vec<Record>> {
    let entries = resolve(target, cfg.quick)?;
    let b = cfg.validate().map_err(Error::Domain)?;
    let exec = RayonExec;
    let ctx = QuadCtx { max_nodes: cfg.node_caps(), ..QuadCtx::with_exec(&exec) };
    let jobs: Vec<(&Entry, u64)> =
        entries.iter().flat_map(|e| (0..cfg.draws.unwrap_or(e.draws)).map(move |d| (*e, d))).collect();
    let work = || jobs.par_iter().map(|&(e, d)| run_draw(e, d, cfg, &b, &ctx)).collect::<Vec<_>>();
    let mut out = if cfg.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build()
            .map_err(|e| Error::Domain(e.to_string()))?
            .install(work)
    } else {
        work()
    };
    out.sort_by(|a, b| (&a.report.identity_id, a.report.draw).cmp(&(&b.report.identity_id, b.report.draw)));
    Ok(out)
}

/// True when every record passed; an empty run passes.
pub fn all_pass(records: &[Record]) -> bool {
    records.iter().all(Record::pass)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::RngCore;

    #[test]
    fn streams_differ_by_id_and_draw() {
        let a = draw_rng(1, "res", 0).next_u64();
        assert_eq!(a, draw_rng(1, "res", 0).next_u64());
        assert_ne!(a, draw_rng(1, "res", 1).next_u64());
        assert_ne!(a, draw_rng(1, "ell-int", 0).next_u64());
        assert_ne!(a, draw_rng(2, "res", 0).next_u64());
    }
}
