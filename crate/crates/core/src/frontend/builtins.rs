use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::term::PredKey;

/// Groundness that holds whenever a builtin call succeeds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuiltinSuccess {
    /// Every variable in every argument is ground (arithmetic).
    AllGround,
    /// Every variable in the listed argument positions is ground.
    ArgsGround(Vec<usize>),
    /// The two arguments are ground together or not at all (`==/2`).
    SameGroundness,
    /// Success says nothing about groundness.
    Unconstrained,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltinInfo {
    pub success: BuiltinSuccess,
    pub deterministic: bool,
}

pub fn builtin_table() -> &'static BTreeMap<PredKey, BuiltinInfo> {
    static TABLE: OnceLock<BTreeMap<PredKey, BuiltinInfo>> = OnceLock::new();
    TABLE.get_or_init(|| {
        use BuiltinSuccess::*;
        let mut t = BTreeMap::new();
        let mut add = |name: &str, arity: usize, success: BuiltinSuccess| {
            t.insert(
                PredKey::new(name, arity),
                BuiltinInfo {
                    success,
                    deterministic: true,
                },
            );
        };
        for op in ["=<", "<", ">=", ">", "=:=", "=\\=", "is"] {
            add(op, 2, AllGround);
        }
        add("==", 2, SameGroundness);
        add("\\==", 2, Unconstrained);
        add("\\=", 2, Unconstrained);
        for test in ["atom", "atomic", "integer", "number"] {
            add(test, 1, ArgsGround(vec![0]));
        }
        add("var", 1, Unconstrained);
        add("nonvar", 1, Unconstrained);
        add("functor", 3, ArgsGround(vec![1, 2]));
        t
    })
}

pub fn is_builtin(key: &PredKey) -> bool {
    builtin_table().contains_key(key)
}
