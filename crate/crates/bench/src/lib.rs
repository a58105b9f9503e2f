//! Fixtures shared by the benchmarks.

use maxcorr_core::montecarlo::{gen_process, DgpSpec, ErrorKind, ProcessKind};
use maxcorr_core::{rng, Series};

/// Simulated series from the simple or GARCH design.
pub fn fixture(process: ProcessKind, n: usize, seed: u64) -> Series {
    let mut r = rng::stream(seed, &[n as u64]);
    let y = gen_process(&DgpSpec::new(process, ErrorKind::Iid, n), &mut r).values;
    Series::unlabeled(y).expect("simulated series is finite")
}

pub fn white_noise(n: usize) -> Series {
    fixture(ProcessKind::Simple, n, 11)
}

pub fn garch(n: usize) -> Series {
    fixture(ProcessKind::Garch11, n, 12)
}
