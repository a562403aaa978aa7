use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transversal_core::bandwidth::{
    compute_ordering, proper_coloring, BandwidthOrdering, OrderingMode, ProperColoring,
    EXACT_BANDWIDTH_CAP,
};
use transversal_core::Graph;

use crate::error::{spec_err, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    HamiltonCycle,
    PowerOfCycle(usize),
    KkFactor(usize),
    /// Random graph with maximum degree Δ and bandwidth at most b under
    /// the identity order.
    RandomBounded {
        max_degree: usize,
        bandwidth: usize,
    },
    Path,
    /// Random tree with maximum degree Δ.
    Tree(usize),
}

impl Family {
    /// Short name used in CSV output.
    pub fn name(&self) -> &'static str {
        match self {
            Family::HamiltonCycle => "hamilton",
            Family::PowerOfCycle(_) => "power_of_cycle",
            Family::KkFactor(_) => "kk_factor",
            Family::RandomBounded { .. } => "random_bounded",
            Family::Path => "path",
            Family::Tree(_) => "tree",
        }
    }

    /// The family's chromatic parameter k as reported in sweeps.
    pub fn k(&self) -> usize {
        match self {
            Family::HamiltonCycle | Family::Path | Family::Tree(_) => 2,
            Family::PowerOfCycle(k) => k + 1,
            Family::KkFactor(k) => *k,
            Family::RandomBounded { max_degree, .. } => max_degree + 1,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::HamiltonCycle => write!(f, "hamilton"),
            Family::PowerOfCycle(k) => write!(f, "power_of_cycle:{k}"),
            Family::KkFactor(k) => write!(f, "kk_factor:{k}"),
            Family::RandomBounded {
                max_degree,
                bandwidth,
            } => write!(f, "random_bounded:{max_degree}:{bandwidth}"),
            Family::Path => write!(f, "path"),
            Family::Tree(d) => write!(f, "tree:{d}"),
        }
    }
}

impl FromStr for Family {
    type Err = HarnessError;

    /// `hamilton`, `path`, `power_of_cycle:k`, `kk_factor:k`, `tree:Δ`,
    /// `random_bounded:Δ:b`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(':').collect();
        let num = |i: usize| -> Result<usize> {
            parts.get(i).and_then(|p| p.parse().ok()).ok_or_else(|| {
                HarnessError::Spec(format!("family {s:?} needs a numeric parameter"))
            })
        };
        Ok(match parts[0] {
            "hamilton" | "hamilton_cycle" => Family::HamiltonCycle,
            "path" => Family::Path,
            "power_of_cycle" => Family::PowerOfCycle(num(1)?),
            "kk_factor" => Family::KkFactor(num(1)?),
            "tree" => Family::Tree(num(1)?),
            "random_bounded" => Family::RandomBounded {
                max_degree: num(1)?,
                bandwidth: num(2)?,
            },
            other => return spec_err(format!("unknown family {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TargetSpec {
    pub family: Family,
    pub n: usize,
    /// Used by the random families only.
    pub seed: u64,
}

/// A target graph with a witness ordering and a proper coloring with the
/// fewest colors.
#[derive(Debug, Clone)]
pub struct GeneratedTarget {
    pub graph: Graph,
    pub ordering: BandwidthOrdering,
    pub coloring: ProperColoring,
}

impl GeneratedTarget {
    pub fn bandwidth(&self) -> usize {
        self.ordering.bandwidth()
    }

    pub fn chromatic_number(&self) -> usize {
        self.coloring.k()
    }
}

fn best_ordering(g: &Graph, seed: u64) -> Result<BandwidthOrdering> {
    let heuristic = compute_ordering(g, OrderingMode::Heuristic { seed }, 0)?;
    if g.n() <= EXACT_BANDWIDTH_CAP {
        if let Ok(exact) = compute_ordering(g, OrderingMode::Exact, 5_000_000) {
            return Ok(exact);
        }
    }
    let identity = BandwidthOrdering::identity(g);
    Ok(if identity.bandwidth() < heuristic.bandwidth() {
        identity
    } else {
        heuristic
    })
}

fn minimum_coloring(g: &Graph) -> Result<ProperColoring> {
    for k in 1..=g.n().max(1) {
        if let Some(c) = proper_coloring(g, k)? {
            return Ok(c);
        }
    }
    unreachable!("n colors always suffice")
}

pub fn gen_target(spec: &TargetSpec) -> Result<GeneratedTarget> {
    let n = spec.n;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let graph = match spec.family {
        Family::HamiltonCycle => {
            if n < 3 {
                return spec_err("a Hamilton cycle needs n >= 3");
            }
            Graph::cycle(n)?
        }
        Family::Path => Graph::path(n)?,
        Family::PowerOfCycle(k) => {
            if k == 0 || n < 3 {
                return spec_err("power_of_cycle needs k >= 1 and n >= 3");
            }
            Graph::cycle(n)?.power(k)
        }
        Family::KkFactor(k) => {
            if k == 0 || !n.is_multiple_of(k) {
                return spec_err(format!("kk_factor:{k} needs k to divide n = {n}"));
            }
            let mut g = Graph::empty(n)?;
            for block in 0..n / k {
                for i in 0..k {
                    for j in i + 1..k {
                        g.add_edge(block * k + i, block * k + j)?;
                    }
                }
            }
            g
        }
        Family::RandomBounded {
            max_degree,
            bandwidth,
        } => {
            let mut g = Graph::empty(n)?;
            for _ in 0..4 * n * max_degree {
                let u = rng.gen_range(0..n);
                let v = u + rng.gen_range(1..=bandwidth.max(1));
                if v < n
                    && !g.has_edge(u, v)
                    && g.degree(u) < max_degree
                    && g.degree(v) < max_degree
                {
                    g.add_edge(u, v)?;
                }
            }
            g
        }
        Family::Tree(max_degree) => {
            if n > 2 && max_degree < 2 {
                return spec_err("trees on more than two vertices need Δ >= 2");
            }
            let mut g = Graph::empty(n)?;
            for v in 1..n {
                let open: Vec<usize> = (0..v).filter(|&u| g.degree(u) < max_degree).collect();
                let u = open[rng.gen_range(0..open.len())];
                g.add_edge(u, v)?;
            }
            g
        }
    };
    let ordering = match spec.family {
        Family::KkFactor(_) | Family::RandomBounded { .. } | Family::Path => {
            let identity = BandwidthOrdering::identity(&graph);
            let best = best_ordering(&graph, spec.seed)?;
            if best.bandwidth() < identity.bandwidth() {
                best
            } else {
                identity
            }
        }
        _ => best_ordering(&graph, spec.seed)?,
    };
    let coloring = minimum_coloring(&graph)?;
    let t = GeneratedTarget {
        graph,
        ordering,
        coloring,
    };
    check_declared(spec, &t)?;
    Ok(t)
}

/// The family's declared bounds on Δ, χ and bandwidth.
fn check_declared(spec: &TargetSpec, t: &GeneratedTarget) -> Result<()> {
    let g = &t.graph;
    let n = spec.n;
    let ok = match spec.family {
        Family::HamiltonCycle => g.max_degree() == 2 && t.chromatic_number() <= 3,
        Family::Path => g.max_degree() <= 2 && t.bandwidth() <= 1,
        Family::PowerOfCycle(k) => {
            g.max_degree() <= 2 * k && (n < 2 * k + 2 || t.chromatic_number() <= k + 2)
        }
        Family::KkFactor(k) => t.bandwidth() <= k.saturating_sub(1) && t.chromatic_number() <= k,
        Family::RandomBounded {
            max_degree,
            bandwidth,
        } => {
            g.max_degree() <= max_degree
                && t.bandwidth() <= bandwidth
                && t.chromatic_number() <= max_degree + 1
        }
        Family::Tree(d) => {
            g.max_degree() <= d && g.edge_count() + 1 == n.max(1) && t.chromatic_number() <= 2
        }
    };
    if !ok {
        return spec_err(format!(
            "generated {} on {n} vertices violates its declared bounds",
            spec.family
        ));
    }
    Ok(())
}
