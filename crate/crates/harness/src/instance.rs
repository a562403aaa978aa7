use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use transversal_core::{Graph, GraphCollection, Rational};

use crate::error::{spec_err, Result};
use crate::extremal::{extremal_instance, ExtremalKind};

#[derive(Debug, Clone, PartialEq)]
pub enum LayerModel {
    /// Every layer G(n, p), independently.
    Iid {
        p: f64,
    },
    /// Every layer G(n, δ + margin), then repaired until its minimum degree
    /// is at least ⌈δn⌉.
    MinDegree {
        delta_frac: Rational,
        margin: f64,
    },
    Identical(Graph),
    Extremal(ExtremalKind),
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceSpec {
    pub n: usize,
    pub h: usize,
    pub model: LayerModel,
    pub seed: u64,
}

impl InstanceSpec {
    pub fn min_degree(n: usize, h: usize, delta_frac: Rational, seed: u64) -> Self {
        InstanceSpec {
            n,
            h,
            model: LayerModel::MinDegree {
                delta_frac,
                margin: 0.05,
            },
            seed,
        }
    }
}

fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Graph> {
    let mut g = Graph::empty(n)?;
    let p = p.clamp(0.0, 1.0);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v)?;
            }
        }
    }
    Ok(g)
}

/// `⌈δn⌉` for rational δ.
pub fn degree_target(delta_frac: &Rational, n: usize) -> usize {
    (*delta_frac * Rational::from_integer(n as i128))
        .ceil()
        .to_integer()
        .max(0) as usize
}

/// Adds random edges at deficient vertices until every degree reaches
/// `target`. Deficient vertices are handled in increasing order; each one
/// prefers partners that are themselves deficient.
fn repair<R: Rng>(g: &mut Graph, target: usize, rng: &mut R) -> Result<()> {
    let n = g.n();
    for v in 0..n {
        while g.degree(v) < target {
            let mut free: Vec<usize> = (0..n).filter(|&u| u != v && !g.has_edge(u, v)).collect();
            free.shuffle(rng);
            let u = free
                .iter()
                .copied()
                .find(|&u| g.degree(u) < target)
                .or_else(|| free.first().copied())
                .expect("target below n leaves a free partner");
            g.add_edge(u, v)?;
        }
    }
    Ok(())
}

/// Builds the collection described by `spec`; the same spec always yields
/// the same collection.
pub fn gen_collection(spec: &InstanceSpec) -> Result<GraphCollection> {
    let (n, h) = (spec.n, spec.h);
    if n == 0 || h == 0 {
        return spec_err("instances need n >= 1 and h >= 1");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let coll = match &spec.model {
        LayerModel::Iid { p } => GraphCollection::new(
            (0..h)
                .map(|_| gnp(n, *p, &mut rng))
                .collect::<Result<_>>()?,
        )?,
        LayerModel::MinDegree { delta_frac, margin } => {
            let (num, den) = (*delta_frac.numer(), *delta_frac.denom());
            if num < 0 || num * (n as i128) > (n as i128 - 1) * den {
                return spec_err(format!(
                    "δ = {delta_frac} is infeasible for n = {n}: at most (n-1)/n"
                ));
            }
            let target = degree_target(delta_frac, n);
            let p = num as f64 / den as f64 + margin;
            let mut layers = Vec::with_capacity(h);
            for _ in 0..h {
                let mut g = gnp(n, p, &mut rng)?;
                repair(&mut g, target, &mut rng)?;
                layers.push(g);
            }
            let coll = GraphCollection::new(layers)?;
            debug_assert!(coll.min_degree() >= target);
            coll
        }
        LayerModel::Identical(g) => {
            if g.n() != n {
                return spec_err(format!(
                    "identical layer has {} vertices, expected {n}",
                    g.n()
                ));
            }
            GraphCollection::identical(g, h)?
        }
        LayerModel::Extremal(kind) => {
            let (coll, _) = extremal_instance(*kind, n)?;
            if coll.h() != h {
                return spec_err(format!(
                    "extremal instance has {} layers, expected {h}",
                    coll.h()
                ));
            }
            coll
        }
    };
    Ok(coll)
}
