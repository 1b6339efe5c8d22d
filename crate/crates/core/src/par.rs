//! Data-parallel vector kernels.
//!
//! With the `parallel` feature the kernels run on the rayon pool; without it
//! they fall back to plain loops. Reductions are always split into fixed
//! chunks whose partial sums are combined in index order, so results are
//! bit-for-bit identical between the two builds and between runs.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Chunk length used for reductions and chunked element-wise loops.
pub const CHUNK: usize = 8192;

/// How a kernel should execute. `Parallel` silently degrades to
/// `Sequential` when the crate is built without the `parallel` feature.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// True when this mode will actually use worker threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

fn partial_sums<F>(len: usize, exec: Execution, f: F) -> Vec<f64>
where
    F: Fn(std::ops::Range<usize>) -> f64 + Sync + Send,
{
    let chunks = len.div_ceil(CHUNK);
    let range = move |c: usize| c * CHUNK..((c + 1) * CHUNK).min(len);
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        return (0..chunks).into_par_iter().map(|c| f(range(c))).collect();
    }
    let _ = exec;
    (0..chunks).map(|c| f(range(c))).collect()
}

pub fn dot_with(a: &[f64], b: &[f64], exec: Execution) -> f64 {
    assert_eq!(a.len(), b.len());
    partial_sums(a.len(), exec, |r| {
        a[r.clone()].iter().zip(&b[r]).map(|(x, y)| x * y).sum()
    })
    .into_iter()
    .sum()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    dot_with(a, b, Execution::Parallel)
}

pub fn norm_with(a: &[f64], exec: Execution) -> f64 {
    dot_with(a, a, exec).sqrt()
}

pub fn norm(a: &[f64]) -> f64 {
    norm_with(a, Execution::Parallel)
}

/// `y += alpha * x`
pub fn axpy_with(alpha: f64, x: &[f64], y: &mut [f64], exec: Execution) {
    assert_eq!(x.len(), y.len());
    for_each_chunk_mut(y, exec, |offset, chunk| {
        for (yi, xi) in chunk.iter_mut().zip(&x[offset..]) {
            *yi += alpha * xi;
        }
    });
}

pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    axpy_with(alpha, x, y, Execution::Parallel)
}

pub fn scale_with(alpha: f64, x: &mut [f64], exec: Execution) {
    for_each_chunk_mut(x, exec, |_, chunk| {
        chunk.iter_mut().for_each(|v| *v *= alpha);
    });
}

pub fn scale(alpha: f64, x: &mut [f64]) {
    scale_with(alpha, x, Execution::Parallel)
}

/// Runs `f(offset, chunk)` over consecutive `CHUNK`-sized pieces of `y`.
pub fn for_each_chunk_mut<F>(y: &mut [f64], exec: Execution, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    for_each_block_mut(y, CHUNK, exec, f)
}

/// Runs `f(offset, block)` over consecutive pieces of length `block` (the
/// last one may be shorter).
pub fn for_each_block_mut<F>(y: &mut [f64], block: usize, exec: Execution, f: F)
where
    F: Fn(usize, &mut [f64]) + Sync + Send,
{
    assert!(block > 0);
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        y.par_chunks_mut(block)
            .enumerate()
            .for_each(|(c, chunk)| f(c * block, chunk));
        return;
    }
    let _ = exec;
    y.chunks_mut(block)
        .enumerate()
        .for_each(|(c, chunk)| f(c * block, chunk));
}

/// Maps `f` over `items`, keeping input order in the output.
pub fn map_ordered<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        items.par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.iter().map(f).collect()
    }
}
