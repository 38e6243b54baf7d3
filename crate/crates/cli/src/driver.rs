//! Worker fan-out for the brute-force search and wall-clock timing for
//! verification reports. Shard outputs are merged by a deterministic sort,
//! so results do not depend on the worker count.

use std::thread;
use std::time::Instant;

use crosscap_core::classify::{
    brute_force_mnon_shard, merge_member_shards, verify_theorem_with, ClassifyConfig,
    VerificationReport,
};
use crosscap_core::DeltaBar;

/// Worker count: `--workers` flag, else `CROSSCAP_WORKERS`, else available
/// parallelism.
pub fn worker_default(flag: Option<usize>) -> usize {
    flag.or_else(|| {
        std::env::var("CROSSCAP_WORKERS")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or_else(|| {
        thread::available_parallelism()
            .map(|p| p.get())
            .unwrap_or(1)
    })
    .max(1)
}

/// Full member search at `n`, sharded over `workers` threads.
pub fn parallel_brute_force(n: usize, closure_cap: Option<usize>, workers: usize) -> Vec<DeltaBar> {
    let workers = workers.max(1);
    if workers == 1 {
        return merge_member_shards(vec![brute_force_mnon_shard(n, closure_cap, 0, 1)]);
    }
    let shards = thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| scope.spawn(move || brute_force_mnon_shard(n, closure_cap, w, workers)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("brute-force worker panicked"))
            .collect::<Vec<_>>()
    });
    merge_member_shards(shards)
}

/// Per-n verification with wall-clock timing and threaded brute force.
pub fn run_verification(
    n_low: usize,
    n_high: usize,
    cfg: &ClassifyConfig,
    workers: usize,
) -> Vec<VerificationReport> {
    (n_low..=n_high)
        .map(|n| {
            let start = Instant::now();
            let mut report = verify_theorem_with(n, n, cfg, |m| {
                parallel_brute_force(m, cfg.closure_cap, workers)
            })
            .pop()
            .expect("single-n sweep yields one report");
            report.wall_time_ms = start.elapsed().as_millis() as u64;
            report
        })
        .collect()
}
