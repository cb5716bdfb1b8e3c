//! Order-stable chunked map/reduce. Chunk results are folded left to right in
//! chunk order, so the outcome does not depend on the worker count.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

pub(crate) const CHUNK: usize = 2048;

pub(crate) fn chunked_fold<T, A, M, R>(items: &[T], init: A, map: M, reduce: R) -> A
where
    T: Sync,
    A: Send,
    M: Fn(&[T]) -> A + Sync + Send,
    R: Fn(A, A) -> A,
{
    #[cfg(feature = "parallel")]
    let parts: Vec<A> = items.par_chunks(CHUNK).map(&map).collect();
    #[cfg(not(feature = "parallel"))]
    let parts: Vec<A> = items.chunks(CHUNK).map(&map).collect();
    parts.into_iter().fold(init, reduce)
}

pub(crate) fn map_collect<T, U, M>(items: &[T], map: M) -> Vec<U>
where
    T: Sync,
    U: Send,
    M: Fn(&T) -> U + Sync + Send,
{
    #[cfg(feature = "parallel")]
    return items.par_iter().map(map).collect();
    #[cfg(not(feature = "parallel"))]
    return items.iter().map(map).collect();
}
