//! Regularity diagnostics for bipartite pairs of vertex sets.
//!
//! A pair (A, B) is (ε, d)-regular when every A' ⊆ A, B' ⊆ B with
//! |A'| ≥ ε|A| and |B'| ≥ ε|B| has density within ε of d. Deciding this is
//! exponential; [`test_regular_exact`] does it for sides of at most
//! [`EXACT_REGULARITY_CAP`] vertices. Larger pairs are judged by the local
//! quasi-randomness conditions on degrees and codegrees instead.

use std::fmt::{self, Write as _};

use num_traits::Signed;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::ratio::{at_least_shifted, within, Rational, Root};

pub const EXACT_REGULARITY_CAP: usize = 16;

fn check_pair(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<()> {
    g.check_set(a)?;
    g.check_set(b)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySet);
    }
    if !a.is_disjoint(b) {
        return Err(Error::Overlap);
    }
    Ok(())
}

fn cross_edges(g: &Graph, a: &VertexSet, b: &VertexSet) -> usize {
    a.iter().map(|u| g.degree_into(u, b)).sum()
}

/// `e(A, B) / (|A||B|)`.
pub fn pair_density(g: &Graph, a: &VertexSet, b: &VertexSet) -> Result<Rational> {
    check_pair(g, a, b)?;
    Ok(Rational::new(
        cross_edges(g, a, b) as i128,
        (a.len() * b.len()) as i128,
    ))
}

/// A subpair whose density deviates from the target by more than ε.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub density: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    Irregular(Witness),
    /// A side exceeds the exhaustive-search cap.
    Untested,
}

impl Regularity {
    pub fn is_regular(&self) -> bool {
        matches!(self, Regularity::Regular)
    }
}

/// Exhaustive ε-regularity test against the pair's own density.
pub fn test_regular_exact(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: &Root,
) -> Result<Regularity> {
    let d = pair_density(g, a, b)?;
    test_regular_exact_at(g, a, b, eps, &d)
}

/// Exhaustive test of (ε, d)-regularity for a given target density `d`.
///
/// For a fixed A' and a fixed size s, the densest and sparsest B' of size
/// s consist of the s vertices of B with the most (fewest) neighbors in
/// A', so only 2^|A| subsets are enumerated. Subsets of A are visited in
/// decreasing bitmask order (A itself first); the witness reported is the
/// most deviating B' for the first A' that admits one.
pub fn test_regular_exact_at(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: &Root,
    d: &Rational,
) -> Result<Regularity> {
    check_pair(g, a, b)?;
    let (av, bv) = (a.to_vec(), b.to_vec());
    if av.len() > EXACT_REGULARITY_CAP || bv.len() > EXACT_REGULARITY_CAP {
        return Ok(Regularity::Untested);
    }
    let (na, nb) = (av.len(), bv.len());
    // for each vertex of B, its neighbors in A as a bitmask over A's indices
    let b_rows: Vec<u32> = bv
        .iter()
        .map(|&y| {
            av.iter().enumerate().fold(
                0u32,
                |m, (i, &x)| if g.has_edge(x, y) { m | 1 << i } else { m },
            )
        })
        .collect();
    let min_a = (1..=na).find(|&s| eps.le(&Rational::new(s as i128, na as i128)));
    let min_b = (1..=nb).find(|&s| eps.le(&Rational::new(s as i128, nb as i128)));
    let (Some(min_a), Some(min_b)) = (min_a, min_b) else {
        // ε > 1: no subpair qualifies
        return Ok(Regularity::Regular);
    };
    let eps_f = eps.approx();
    let d_f = *d.numer() as f64 / *d.denom() as f64;
    let total: u32 = 1 << na;

    let check = |mask: u32| -> Option<Witness> {
        let size_a = mask.count_ones() as usize;
        if size_a < min_a {
            return None;
        }
        let mut degs: Vec<(usize, usize)> = b_rows
            .iter()
            .enumerate()
            .map(|(j, row)| ((row & mask).count_ones() as usize, j))
            .collect();
        // most neighbors first, index breaks ties
        degs.sort_by(|x, y| y.0.cmp(&x.0).then(x.1.cmp(&y.1)));
        let mut best: Option<(Rational, usize, bool)> = None;
        for s in (min_b..=nb).rev() {
            let top: usize = degs[..s].iter().map(|x| x.0).sum();
            let bottom: usize = degs[nb - s..].iter().map(|x| x.0).sum();
            for (sum, is_top) in [(top, true), (bottom, false)] {
                let area = size_a * s;
                let dev_f = (sum as f64 / area as f64 - d_f).abs();
                if dev_f < eps_f * (1.0 - 1e-9) {
                    continue;
                }
                let dev = (Rational::new(sum as i128, area as i128) - d).abs();
                if !eps.lt(&dev) {
                    continue;
                }
                if best.as_ref().is_none_or(|(bd, _, _)| dev > *bd) {
                    best = Some((dev, s, is_top));
                }
            }
        }
        let (_, s, is_top) = best?;
        let picked: Vec<usize> = if is_top {
            degs[..s].to_vec()
        } else {
            degs[nb - s..].to_vec()
        }
        .into_iter()
        .map(|x| x.1)
        .collect();
        let mut wb: Vec<usize> = picked.iter().map(|&j| bv[j]).collect();
        wb.sort_unstable();
        let wa: Vec<usize> = (0..na)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| av[i])
            .collect();
        let edges: usize = picked
            .iter()
            .map(|&j| (b_rows[j] & mask).count_ones() as usize)
            .sum();
        Some(Witness {
            a: wa,
            b: wb,
            density: Rational::new(edges as i128, (size_a * s) as i128),
        })
    };

    let found = (0..total)
        .into_par_iter()
        .map(|i| total - 1 - i)
        .find_map_first(check);
    Ok(match found {
        Some(w) => Regularity::Irregular(w),
        None => Regularity::Regular,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::A => "A",
            Side::B => "B",
        })
    }
}

/// A failed quasi-randomness condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QrViolation {
    Degree {
        side: Side,
        vertex: usize,
        degree: usize,
        expected: Rational,
    },
    Codegree {
        side: Side,
        u: usize,
        v: usize,
        codegree: usize,
        expected: Rational,
    },
}

/// Outcome of the (ε, p)-quasi-randomness test: the first violation of
/// each of the four conditions (degrees in A, codegrees in A, degrees in
/// B, codegrees in B), in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuasiRandom {
    pub violations: Vec<QrViolation>,
}

impl QuasiRandom {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&QrViolation> {
        self.violations.first()
    }

    pub fn codegree_witness(&self, side: Side) -> Option<&QrViolation> {
        self.violations
            .iter()
            .find(|v| matches!(v, QrViolation::Codegree { side: s, .. } if *s == side))
    }
}

/// Checks `d(u) = (1 ± ε)p|B|` and `d(u, v) = (1 ± ε)p²|B|` for all
/// distinct `u, v ∈ A`, and symmetrically for B.
pub fn test_quasi_random(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: &Root,
    p: &Rational,
) -> Result<QuasiRandom> {
    check_pair(g, a, b)?;
    if p.is_negative() {
        return Err(Error::InvalidParameter(format!("p = {p} is negative")));
    }
    let mut violations = Vec::new();
    for (side, this, other) in [(Side::A, a, b), (Side::B, b, a)] {
        let m = Rational::from_integer(other.len() as i128);
        let exp_deg = *p * m;
        let exp_codeg = *p * *p * m;
        let members = this.to_vec();
        if let Some(&x) = members.iter().find(|&&x| {
            !within(
                &Rational::from_integer(g.degree_into(x, other) as i128),
                &exp_deg,
                eps,
                &exp_deg,
            )
        }) {
            violations.push(QrViolation::Degree {
                side,
                vertex: x,
                degree: g.degree_into(x, other),
                expected: exp_deg,
            });
        }
        'pairs: for (i, &u) in members.iter().enumerate() {
            let mut nu = g.neighbors(u);
            nu.intersect_with(other);
            for &v in &members[i + 1..] {
                let c = g.degree_into(v, &nu);
                if !within(
                    &Rational::from_integer(c as i128),
                    &exp_codeg,
                    eps,
                    &exp_codeg,
                ) {
                    violations.push(QrViolation::Codegree {
                        side,
                        u,
                        v,
                        codegree: c,
                        expected: exp_codeg,
                    });
                    break 'pairs;
                }
            }
        }
    }
    Ok(QuasiRandom { violations })
}

/// Trims (A, B) to a pair where every vertex has at least `(d - ε)` times
/// the current opposite side in cross-neighbors. Each round removes all
/// deficient vertices of A, then all deficient vertices of B, until
/// nothing changes. `Ok(None)` when a side empties.
pub fn super_regular_core(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: &Root,
    d: &Rational,
) -> Result<Option<(VertexSet, VertexSet)>> {
    check_pair(g, a, b)?;
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let mut changed = false;
        for side in [Side::A, Side::B] {
            let (this, other) = match side {
                Side::A => (&mut a, &b),
                Side::B => (&mut b, &a),
            };
            let size = other.len();
            let drop: Vec<usize> = this
                .iter()
                .filter(|&x| !at_least_shifted(g.degree_into(x, other), d, eps, size))
                .collect();
            for x in &drop {
                this.remove(*x);
            }
            changed |= !drop.is_empty();
            if this.is_empty() {
                return Ok(None);
            }
        }
        if !changed {
            return Ok(Some((a, b)));
        }
    }
}

/// Pairs `(u, v) ∈ V_1 × V_2` with `|N(u) ∩ N(v) ∩ V_j| ≥ (d² − 4ε^{1/2})|V_j|`
/// for every `j ≥ 3`, `|N(u) ∩ V_2| ≥ (d − 4ε^{1/2})|V_2|` and
/// `|N(v) ∩ V_1| ≥ (d − 4ε^{1/2})|V_1|`.
pub fn typical_pairs(
    g: &Graph,
    parts: &[VertexSet],
    eps: &Root,
    d: &Rational,
) -> Result<Vec<(usize, usize)>> {
    if parts.len() < 2 {
        return Err(Error::InvalidParameter(
            "typical pairs need at least two parts".into(),
        ));
    }
    for (i, p) in parts.iter().enumerate() {
        g.check_set(p)?;
        for q in &parts[i + 1..] {
            if !p.is_disjoint(q) {
                return Err(Error::Overlap);
            }
        }
    }
    let slack = eps.nth_root(2).times(4);
    let d2 = *d * *d;
    let (v1, v2) = (&parts[0], &parts[1]);
    let good_u: Vec<usize> = v1
        .iter()
        .filter(|&u| at_least_shifted(g.degree_into(u, v2), d, &slack, v2.len()))
        .collect();
    let good_v: Vec<usize> = v2
        .iter()
        .filter(|&v| at_least_shifted(g.degree_into(v, v1), d, &slack, v1.len()))
        .collect();
    let mut out = Vec::new();
    for &u in &good_u {
        for &v in &good_v {
            let mut common = g.neighbors(u);
            common.intersect_with(&g.neighbors(v));
            if parts[2..]
                .iter()
                .all(|vj| at_least_shifted(common.intersection_len(vj), &d2, &slack, vj.len()))
            {
                out.push((u, v));
            }
        }
    }
    Ok(out)
}

/// Density, degree and codegree statistics of a pair, with verdicts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairReport {
    pub size_a: usize,
    pub size_b: usize,
    pub density: Rational,
    /// `degrees_a[t]` counts vertices of A with exactly t neighbors in B.
    pub degrees_a: Vec<usize>,
    pub degrees_b: Vec<usize>,
    /// Sum of squared codegrees over unordered pairs within A (into B).
    pub codegree_moment_a: u64,
    pub codegree_moment_b: u64,
    pub eps: Root,
    pub d: Rational,
    pub p: Rational,
    pub exact_regular: Regularity,
    pub quasi_random: QuasiRandom,
    /// `None` when the exact test was skipped for size.
    pub super_regular: Option<bool>,
}

fn histogram(g: &Graph, this: &VertexSet, other: &VertexSet) -> Vec<usize> {
    let mut h = vec![0; other.len() + 1];
    for x in this.iter() {
        h[g.degree_into(x, other)] += 1;
    }
    h
}

fn codegree_moment(g: &Graph, this: &VertexSet, other: &VertexSet) -> u64 {
    let members = this.to_vec();
    let mut total = 0u64;
    for (i, &u) in members.iter().enumerate() {
        let mut nu = g.neighbors(u);
        nu.intersect_with(other);
        for &v in &members[i + 1..] {
            let c = g.degree_into(v, &nu) as u64;
            total += c * c;
        }
    }
    total
}

/// Builds a full report for the pair. Super-regularity at (ε, d) means
/// (ε, d')-regular for the pair density d' ≥ d plus the minimum
/// cross-degree bound `(d − ε)` on both sides.
pub fn pair_report(
    g: &Graph,
    a: &VertexSet,
    b: &VertexSet,
    eps: &Root,
    d: &Rational,
    p: &Rational,
) -> Result<PairReport> {
    let density = pair_density(g, a, b)?;
    let exact_regular = test_regular_exact(g, a, b, eps)?;
    let quasi_random = test_quasi_random(g, a, b, eps, p)?;
    let degrees_ok = a
        .iter()
        .all(|x| at_least_shifted(g.degree_into(x, b), d, eps, b.len()))
        && b.iter()
            .all(|y| at_least_shifted(g.degree_into(y, a), d, eps, a.len()));
    let super_regular = match &exact_regular {
        Regularity::Untested => None,
        r => Some(r.is_regular() && density >= *d && degrees_ok),
    };
    Ok(PairReport {
        size_a: a.len(),
        size_b: b.len(),
        density,
        degrees_a: histogram(g, a, b),
        degrees_b: histogram(g, b, a),
        codegree_moment_a: codegree_moment(g, a, b),
        codegree_moment_b: codegree_moment(g, b, a),
        eps: *eps,
        d: *d,
        p: *p,
        exact_regular,
        quasi_random,
        super_regular,
    })
}

fn list(xs: &[usize]) -> String {
    xs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

impl PairReport {
    /// Flat `key: value` text block.
    pub fn to_kv(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "size_a: {}", self.size_a);
        let _ = writeln!(s, "size_b: {}", self.size_b);
        let _ = writeln!(s, "density: {}", self.density);
        let _ = writeln!(s, "degree_hist_a: {}", list(&self.degrees_a));
        let _ = writeln!(s, "degree_hist_b: {}", list(&self.degrees_b));
        let _ = writeln!(s, "codegree_moment_a: {}", self.codegree_moment_a);
        let _ = writeln!(s, "codegree_moment_b: {}", self.codegree_moment_b);
        let _ = writeln!(s, "eps: {}", self.eps);
        let _ = writeln!(s, "d: {}", self.d);
        let _ = writeln!(s, "p: {}", self.p);
        let (verdict, witness) = match &self.exact_regular {
            Regularity::Regular => ("yes", None),
            Regularity::Irregular(w) => ("no", Some(w)),
            Regularity::Untested => ("untested", None),
        };
        let _ = writeln!(s, "exact_regular: {verdict}");
        if let Some(w) = witness {
            let _ = writeln!(s, "witness_a: {}", list(&w.a));
            let _ = writeln!(s, "witness_b: {}", list(&w.b));
            let _ = writeln!(s, "witness_density: {}", w.density);
        }
        let _ = writeln!(
            s,
            "quasi_random: {}",
            if self.quasi_random.passed() {
                "yes"
            } else {
                "no"
            }
        );
        for v in &self.quasi_random.violations {
            let _ = match v {
                QrViolation::Degree {
                    side,
                    vertex,
                    degree,
                    expected,
                } => {
                    writeln!(s, "qr_violation: degree side={side} vertex={vertex} value={degree} expected={expected}")
                }
                QrViolation::Codegree {
                    side,
                    u,
                    v,
                    codegree,
                    expected,
                } => {
                    writeln!(s, "qr_violation: codegree side={side} pair={u},{v} value={codegree} expected={expected}")
                }
            };
        }
        let sr = match self.super_regular {
            Some(true) => "yes",
            Some(false) => "no",
            None => "untested",
        };
        let _ = writeln!(s, "super_regular: {sr}");
        s
    }
}
