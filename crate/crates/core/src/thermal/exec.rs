//! Workers for the Matsubara blocks.
//!
//! Blocks are handed out in index order and collected in index order, so the
//! reduction that follows never sees completion order.

#[cfg(feature = "parallel")]
use crate::error::Error;
use crate::error::Result;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Executor {
    Sequential,
    /// `threads = 0` uses the global pool. Without the `parallel` feature
    /// this runs sequentially.
    Parallel {
        threads: usize,
    },
}

impl Default for Executor {
    fn default() -> Self {
        Executor::Parallel { threads: 0 }
    }
}

pub(crate) struct Runner {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
    parallel: bool,
}

impl Runner {
    pub(crate) fn new(executor: Executor) -> Result<Self> {
        match executor {
            Executor::Sequential => Ok(Runner {
                #[cfg(feature = "parallel")]
                pool: None,
                parallel: false,
            }),
            #[cfg(feature = "parallel")]
            Executor::Parallel { threads } => {
                let pool = if threads == 0 {
                    None
                } else {
                    Some(
                        rayon::ThreadPoolBuilder::new()
                            .num_threads(threads)
                            .build()
                            .map_err(|e| Error::Capacity(format!("thread pool: {e}")))?,
                    )
                };
                Ok(Runner {
                    pool,
                    parallel: true,
                })
            }
            #[cfg(not(feature = "parallel"))]
            Executor::Parallel { .. } => Ok(Runner { parallel: false }),
        }
    }

    /// `f(i)` for every `i` in `range`, returned in index order.
    pub(crate) fn map<T, F>(&self, range: std::ops::Range<u64>, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.parallel {
            use rayon::prelude::*;
            let run = || range.clone().into_par_iter().map(&f).collect();
            return match &self.pool {
                Some(pool) => pool.install(run),
                None => run(),
            };
        }
        let _ = self.parallel;
        range.map(f).collect()
    }
}
