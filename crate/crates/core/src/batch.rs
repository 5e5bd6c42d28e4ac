//! Evaluation of independent cases, in parallel when the `parallel`
//! feature is on.

/// How a batch is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Mode {
    /// Parallel when compiled in, sequential otherwise.
    pub fn default_mode() -> Mode {
        #[cfg(feature = "parallel")]
        {
            Mode::Parallel
        }
        #[cfg(not(feature = "parallel"))]
        {
            Mode::Sequential
        }
    }
}

pub fn map_seq<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    F: Fn(&T) -> R,
{
    items.iter().map(f).collect()
}

#[cfg(feature = "parallel")]
pub fn map_par<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

/// Maps `f` over `items` in the given mode. Output order matches input
/// order in both modes.
pub fn map_with<T, R, F>(mode: Mode, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    match mode {
        Mode::Sequential => map_seq(items, f),
        #[cfg(feature = "parallel")]
        Mode::Parallel => map_par(items, f),
    }
}

pub fn map_cases<T, R, F>(items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    map_with(Mode::default_mode(), items, f)
}
