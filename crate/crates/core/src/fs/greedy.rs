use serde::{Deserialize, Serialize};

use crate::sets::SortedSet;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GreedyRepresentation {
    /// Selected elements, decreasing.
    pub parts: Vec<u64>,
    /// `n − Σ parts`.
    pub slack: u64,
}

/// Repeatedly takes the largest unused element that keeps the running sum `≤ n`.
///
/// Since the remaining budget only shrinks, a single descending pass over the
/// elements makes exactly the same choices.
pub fn greedy_representation(b: &SortedSet, n: u64) -> GreedyRepresentation {
    let mut remaining = n;
    let mut parts = Vec::new();
    let start = b.elements().partition_point(|&x| x <= n);
    for &x in b.elements()[..start].iter().rev() {
        if x <= remaining {
            parts.push(x);
            remaining -= x;
            if remaining == 0 {
                break;
            }
        }
    }
    GreedyRepresentation {
        parts,
        slack: remaining,
    }
}
