//! Global size caps for constructed objects.
//!
//! Every construction that materializes a category, a functor list or a
//! simplicial level checks against these caps and reports
//! [`Error::SizeBoundExceeded`] instead of running away.  The environment
//! variable `WORKBENCH_MAX_CELLS` raises (or lowers) all of them at once.

use std::sync::OnceLock;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub max_objects: usize,
    pub max_morphisms: usize,
    /// Enumerations (functor lists, simplicial levels, families).
    pub max_enumeration: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 64,
            max_morphisms: 512,
            max_enumeration: 400_000,
        }
    }
}

static CAPS: OnceLock<Caps> = OnceLock::new();

pub fn caps() -> Caps {
    *CAPS.get_or_init(|| {
        let mut c = Caps::default();
        if let Some(n) = std::env::var("WORKBENCH_MAX_CELLS")
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            c.max_objects = n;
            c.max_morphisms = n;
            c.max_enumeration = c.max_enumeration.max(n);
        }
        c
    })
}

pub(crate) fn check(what: &str, size: usize, cap: usize) -> Result<()> {
    if size > cap {
        Err(Error::SizeBoundExceeded {
            what: what.to_string(),
            size,
            cap,
        })
    } else {
        Ok(())
    }
}
