//! Fixed-block work splitting shared by every data-parallel loop.
//!
//! Work over an index range is always cut into blocks of [`BLOCK_LEN`]
//! consecutive indices starting at zero, and block results are combined
//! strictly in block order. The parallel and sequential paths therefore
//! perform the same floating-point operations in the same order and give
//! bit-identical results.

use std::ops::Range;

/// Number of consecutive indices handled by one block.
pub const BLOCK_LEN: usize = 1024;

/// How block work is scheduled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    /// Blocks are evaluated on the rayon pool. Falls back to sequential when
    /// the crate is built without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run blocks concurrently.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Splits `0..len` into fixed blocks and maps each block, returning the block
/// results in block order.
pub fn map_blocks<T, F>(len: usize, exec: Execution, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(Range<usize>) -> T + Sync + Send,
{
    let blocks = len.div_ceil(BLOCK_LEN);
    let block = |b: usize| {
        let start = b * BLOCK_LEN;
        f(start..(start + BLOCK_LEN).min(len))
    };
    #[cfg(feature = "parallel")]
    if exec == Execution::Parallel {
        use rayon::prelude::*;
        return (0..blocks).into_par_iter().map(block).collect();
    }
    let _ = exec;
    (0..blocks).map(block).collect()
}

/// Maps every item of a slice, preserving order. Items are processed in
/// [`BLOCK_LEN`] blocks.
pub fn map_slice<S, T, F>(items: &[S], exec: Execution, f: F) -> Vec<T>
where
    S: Sync,
    T: Send,
    F: Fn(&S) -> T + Sync + Send,
{
    map_blocks(items.len(), exec, |r| items[r].iter().map(&f).collect::<Vec<_>>())
        .into_iter()
        .flatten()
        .collect()
}
