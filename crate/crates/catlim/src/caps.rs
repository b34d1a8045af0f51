//! Size caps and search budgets.
//!
//! Every brute-force routine in the crate is bounded: categories by object
//! and morphism counts, function enumerations by table count, and
//! backtracking searches by a node budget counting partial assignments.
//! Exceeding a cap is a hard error (`Error::Capacity` /
//! `Error::BudgetExhausted`), never a silent truncation.

/// Bounds applied by constructors and search routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Maximum number of objects in a finite category.
    pub max_objects: usize,
    /// Maximum number of morphisms (identities included).
    pub max_morphisms: usize,
    /// Maximum number of functions enumerated between two finite sets.
    pub max_functions: u64,
    /// Node budget for backtracking searches (partial assignments).
    pub search_budget: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            max_objects: 32,
            max_morphisms: 256,
            max_functions: 1_000_000,
            search_budget: 100_000,
        }
    }
}

impl Caps {
    /// Default caps with the search budget replaced.
    pub fn with_budget(budget: u64) -> Self {
        Caps {
            search_budget: budget,
            ..Caps::default()
        }
    }
}
