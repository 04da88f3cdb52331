//! Worker pool shared by classification and verification sweeps.
//!
//! SYMLIFT_THREADS pins the pool width (default: all cores). Results are
//! always collected in input order, so thread count never changes output.

use std::sync::OnceLock;

use rayon::{ThreadPool, ThreadPoolBuilder};

static POOL: OnceLock<ThreadPool> = OnceLock::new();

pub fn pool() -> &'static ThreadPool {
    POOL.get_or_init(|| {
        let threads = std::env::var("SYMLIFT_THREADS")
            .ok()
            .and_then(|s| s.parse::<usize>().ok())
            .filter(|&n| n >= 1)
            .unwrap_or(0); // 0 lets the builder pick the core count
        ThreadPoolBuilder::new()
            .num_threads(threads)
            .thread_name(|i| format!("symlift-{i}"))
            .build()
            .expect("worker pool")
    })
}

/// Runs `f` inside the shared pool.
pub fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    pool().install(f)
}
