//! Generic backtracking engine for component families.
//!
//! Many operations in this crate reduce to the same search: choose, for
//! every slot `o`, a function `F(o) → G(o)` such that a list of square
//! constraints commutes. Natural-transformation enumeration, cone and
//! cocone enumeration, and natural-isomorphism search are all instances.
//!
//! The engine assigns entries `(slot, source element)` in canonical order
//! and propagates every forced value through the squares immediately, so
//! a Yoneda-style search (where one entry determines everything) visits
//! only as many branches as there are genuinely free choices. Work is
//! bounded by a node budget counting assignments; exhausting it is a hard
//! error so that an empty result always means "proven empty".

use crate::error::{Error, Result};

/// One commuting-square constraint between two slots.
///
/// Requires `comp[to](src_map[x]) = dst_map[comp[from](x)]` for every
/// source element `x` of the `from` slot.
pub(crate) struct Square {
    pub from: usize,
    pub to: usize,
    /// Index map from `from`-slot source elements to `to`-slot source elements.
    pub src_map: Vec<usize>,
    /// Index map from `from`-slot target elements to `to`-slot target elements.
    pub dst_map: Vec<usize>,
}

pub(crate) struct ComponentSearch {
    pub src_sizes: Vec<usize>,
    pub dst_sizes: Vec<usize>,
    pub squares: Vec<Square>,
    /// When set, components must be injective per slot (callers also check
    /// that sizes match, making every solution a family of bijections).
    pub bijective: bool,
}

/// A solution: for each slot, the target index chosen for each source index.
pub(crate) type Components = Vec<Vec<usize>>;

struct State<'p> {
    problem: &'p ComponentSearch,
    squares_from: Vec<Vec<usize>>,
    assign: Vec<Vec<Option<usize>>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    nodes: u64,
    budget: u64,
    results: Vec<Components>,
    max_results: Option<usize>,
}

impl ComponentSearch {
    /// Enumerates all solutions in lexicographic order of the flattened
    /// assignment, stopping early once `max_results` have been found.
    pub(crate) fn enumerate(
        &self,
        budget: u64,
        max_results: Option<usize>,
    ) -> Result<Vec<Components>> {
        if self.bijective {
            for (s, d) in self.src_sizes.iter().zip(&self.dst_sizes) {
                if s != d {
                    return Ok(Vec::new());
                }
            }
        }
        let mut squares_from = vec![Vec::new(); self.src_sizes.len()];
        for (i, sq) in self.squares.iter().enumerate() {
            squares_from[sq.from].push(i);
        }
        let mut state = State {
            problem: self,
            squares_from,
            assign: self.src_sizes.iter().map(|&n| vec![None; n]).collect(),
            used: self.dst_sizes.iter().map(|&n| vec![false; n]).collect(),
            trail: Vec::new(),
            nodes: 0,
            budget,
            results: Vec::new(),
            max_results,
        };
        let entries: Vec<(usize, usize)> = (0..self.src_sizes.len())
            .flat_map(|s| (0..self.src_sizes[s]).map(move |x| (s, x)))
            .collect();
        state.solve(&entries, 0)?;
        Ok(state.results)
    }
}

impl<'p> State<'p> {
    fn done(&self) -> bool {
        self.max_results
            .map(|m| self.results.len() >= m)
            .unwrap_or(false)
    }

    /// Assigns (or checks) one entry and propagates forced values.
    /// Returns false on conflict.
    fn set(&mut self, slot: usize, x: usize, v: usize) -> Result<bool> {
        if let Some(w) = self.assign[slot][x] {
            return Ok(w == v);
        }
        if self.problem.bijective && self.used[slot][v] {
            return Ok(false);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::budget(format!(
                "component search exceeded {} assignments",
                self.budget
            )));
        }
        self.assign[slot][x] = Some(v);
        if self.problem.bijective {
            self.used[slot][v] = true;
        }
        self.trail.push((slot, x));
        // The index list is immutable during search; clone it so the
        // recursive propagation below can borrow `self` mutably.
        let outgoing = self.squares_from[slot].clone();
        for qi in outgoing {
            let (to, tx, tv) = {
                let sq = &self.problem.squares[qi];
                (sq.to, sq.src_map[x], sq.dst_map[v])
            };
            if !self.set(to, tx, tv)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (slot, x) = self.trail.pop().expect("trail nonempty");
            if let Some(v) = self.assign[slot][x].take() {
                if self.problem.bijective {
                    self.used[slot][v] = false;
                }
            }
        }
    }

    fn solve(&mut self, entries: &[(usize, usize)], i: usize) -> Result<()> {
        if self.done() {
            return Ok(());
        }
        if i == entries.len() {
            let solution = self
                .assign
                .iter()
                .map(|slot| slot.iter().map(|v| v.expect("complete")).collect())
                .collect();
            self.results.push(solution);
            return Ok(());
        }
        let (slot, x) = entries[i];
        if self.assign[slot][x].is_some() {
            return self.solve(entries, i + 1);
        }
        for v in 0..self.problem.dst_sizes[slot] {
            let mark = self.trail.len();
            if self.set(slot, x, v)? {
                self.solve(entries, i + 1)?;
            }
            self.undo_to(mark);
            if self.done() {
                return Ok(());
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unconstrained_enumeration_counts_functions() {
        let p = ComponentSearch {
            src_sizes: vec![2],
            dst_sizes: vec![3],
            squares: vec![],
            bijective: false,
        };
        let sols = p.enumerate(10_000, None).unwrap();
        assert_eq!(sols.len(), 9);
        // Lexicographic: first solution all-zero, last all-max.
        assert_eq!(sols[0], vec![vec![0, 0]]);
        assert_eq!(sols[8], vec![vec![2, 2]]);
    }

    #[test]
    fn square_propagation_prunes() {
        // Two slots; square forces slot1 to copy slot0 through identity maps.
        let p = ComponentSearch {
            src_sizes: vec![1, 1],
            dst_sizes: vec![2, 2],
            squares: vec![Square {
                from: 0,
                to: 1,
                src_map: vec![0],
                dst_map: vec![0, 1],
            }],
            bijective: false,
        };
        let sols = p.enumerate(10_000, None).unwrap();
        assert_eq!(sols.len(), 2);
        for s in sols {
            assert_eq!(s[0], s[1]);
        }
    }

    #[test]
    fn bijective_mode_yields_permutations() {
        let p = ComponentSearch {
            src_sizes: vec![3],
            dst_sizes: vec![3],
            squares: vec![],
            bijective: true,
        };
        let sols = p.enumerate(10_000, None).unwrap();
        assert_eq!(sols.len(), 6);
    }

    #[test]
    fn endo_square_constrains_its_own_slot() {
        // One slot, source {0,1}, square sending source 0 to source 1 and
        // fixing targets: comp(1) must equal comp(0) mapped through swap.
        let p = ComponentSearch {
            src_sizes: vec![2],
            dst_sizes: vec![2],
            squares: vec![Square {
                from: 0,
                to: 0,
                src_map: vec![1, 0],
                dst_map: vec![1, 0],
            }],
            bijective: false,
        };
        let sols = p.enumerate(10_000, None).unwrap();
        // comp(1) = swap(comp(0)) leaves two free choices for comp(0).
        assert_eq!(sols.len(), 2);
        for s in &sols {
            assert_eq!(s[0][1], 1 - s[0][0]);
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let p = ComponentSearch {
            src_sizes: vec![4],
            dst_sizes: vec![4],
            squares: vec![],
            bijective: false,
        };
        assert!(p.enumerate(3, None).is_err());
    }
}
