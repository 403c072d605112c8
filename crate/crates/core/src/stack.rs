//! Multithreaded OpenBLAS LAPACK drivers (getrf and friends) put
//! O(MAX_CPU_NUMBER)-sized job arrays on the calling thread's stack, which
//! overflows the 2 MiB default of spawned threads once matrices reach a few
//! hundred rows. Every LAPACK driver call in this crate goes through this
//! shim, which runs it on a dedicated thread with plenty of stack.

const LAPACK_STACK_BYTES: usize = 32 * 1024 * 1024;

pub(crate) fn with_lapack_stack<T, F>(f: F) -> T
where
    F: FnOnce() -> T + Send,
    T: Send,
{
    std::thread::scope(|scope| {
        std::thread::Builder::new()
            .name("lapack".into())
            .stack_size(LAPACK_STACK_BYTES)
            .spawn_scoped(scope, f)
            .expect("failed to spawn LAPACK thread")
            .join()
            .expect("LAPACK thread panicked")
    })
}
