//! Classical extremal constructions, each paired with the target it lacks.

use std::fmt;
use std::str::FromStr;

use transversal_core::{Graph, GraphCollection};

use crate::error::{spec_err, HarnessError, Result};
use crate::target::{Family, TargetSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtremalKind {
    /// Identical layers `K_{⌈n/2⌉-1, ⌊n/2⌋+1}`: the union has no Hamilton
    /// cycle.
    DiracHamilton,
    /// Identical complete k-partite layers with one part of size n/k + 1,
    /// which no K_k-factor can cover.
    KPartiteFactor(usize),
    /// Three layers on three vertices with the pair {0, 2} in none of them.
    SpaceBarrierTriangle,
}

impl fmt::Display for ExtremalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtremalKind::DiracHamilton => write!(f, "dirac-hamilton"),
            ExtremalKind::KPartiteFactor(k) => write!(f, "kpartite-factor:{k}"),
            ExtremalKind::SpaceBarrierTriangle => write!(f, "space-barrier-triangle"),
        }
    }
}

impl FromStr for ExtremalKind {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "dirac-hamilton" => Ok(ExtremalKind::DiracHamilton),
            "space-barrier-triangle" => Ok(ExtremalKind::SpaceBarrierTriangle),
            _ => match s.strip_prefix("kpartite-factor:").map(str::parse) {
                Some(Ok(k)) => Ok(ExtremalKind::KPartiteFactor(k)),
                _ => spec_err(format!("unknown extremal kind {s:?}")),
            },
        }
    }
}

/// The collection for `kind` on `n` vertices together with the target it
/// provably does not contain transversally. `h` always equals `e(H)`.
pub fn extremal_instance(kind: ExtremalKind, n: usize) -> Result<(GraphCollection, TargetSpec)> {
    let (layer, target) = match kind {
        ExtremalKind::DiracHamilton => {
            if n < 3 {
                return spec_err("dirac-hamilton needs n >= 3");
            }
            let small = n.div_ceil(2) - 1;
            let g = Graph::complete_multipartite(&[small, n - small])?;
            (
                g,
                TargetSpec {
                    family: Family::HamiltonCycle,
                    n,
                    seed: 0,
                },
            )
        }
        ExtremalKind::KPartiteFactor(k) => {
            if k < 2 || !n.is_multiple_of(k) || n / k < 2 {
                return spec_err(format!(
                    "kpartite-factor:{k} needs k >= 2 and n a multiple of k with n/k >= 2"
                ));
            }
            let mut parts = vec![n / k; k];
            parts[0] += 1;
            parts[k - 1] -= 1;
            let g = Graph::complete_multipartite(&parts)?;
            (
                g,
                TargetSpec {
                    family: Family::KkFactor(k),
                    n,
                    seed: 0,
                },
            )
        }
        ExtremalKind::SpaceBarrierTriangle => {
            if n != 3 {
                return spec_err("space-barrier-triangle is defined for n = 3 only");
            }
            let layers = vec![
                Graph::from_edges(3, &[(0, 1)])?,
                Graph::from_edges(3, &[(1, 2)])?,
                Graph::from_edges(3, &[(0, 1), (1, 2)])?,
            ];
            let target = TargetSpec {
                family: Family::HamiltonCycle,
                n: 3,
                seed: 0,
            };
            return Ok((GraphCollection::new(layers)?, target));
        }
    };
    let h = crate::target::gen_target(&target)?.graph.edge_count();
    Ok((GraphCollection::identical(&layer, h)?, target))
}
