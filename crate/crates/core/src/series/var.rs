//! Interned variable identifiers.

use std::collections::HashMap;
use std::fmt;
use std::sync::{OnceLock, RwLock};

#[derive(Default)]
struct Registry {
    names: Vec<String>,
    index: HashMap<String, u16>,
}

fn registry() -> &'static RwLock<Registry> {
    static REG: OnceLock<RwLock<Registry>> = OnceLock::new();
    REG.get_or_init(|| RwLock::new(Registry::default()))
}

/// A named formal variable. Identical names give identical ids process-wide.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(pub(crate) u16);

impl Var {
    pub fn named(name: &str) -> Var {
        if let Some(id) = registry().read().unwrap().index.get(name) {
            return Var(*id);
        }
        let mut reg = registry().write().unwrap();
        if let Some(id) = reg.index.get(name) {
            return Var(*id);
        }
        let id = u16::try_from(reg.names.len()).expect("too many variables");
        reg.names.push(name.to_string());
        reg.index.insert(name.to_string(), id);
        Var(id)
    }

    pub fn name(&self) -> String {
        registry().read().unwrap().names[self.0 as usize].clone()
    }

    pub fn id(&self) -> usize {
        self.0 as usize
    }

    /// Descendent time `t^alpha_a` (alpha is 1 or 2).
    pub fn t(alpha: usize, a: usize) -> Var {
        Var::named(&format!("t{alpha}_{a}"))
    }

    /// Canonical-frame time `T^i_a`.
    pub fn canon(i: usize, a: usize) -> Var {
        Var::named(&format!("T{i}_{a}"))
    }

    pub fn eps() -> Var {
        Var::named("eps")
    }

    pub fn lambda() -> Var {
        Var::named("lambda")
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}
