//! Color absorbers.
//!
//! An absorber is a set F of host edges together with color sets A and C
//! (disjoint, |A| = e(F) − ℓ) such that for every C' ⊆ C with |C'| = ℓ the
//! edges of F can be colored bijectively with A ∪ C', each edge receiving a
//! color whose layer contains it. The template is built greedily from a
//! maximum matching and then certified by checking the matching condition
//! on every C' (or on a seeded sample when there are too many).

use std::fmt::Write as _;

use itertools::Itertools;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fraction::{color_availability, ColorSet};
use crate::graph::GraphCollection;
use crate::matching::{hall_certificate, max_matching};

/// How the resilience of a template was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verification {
    /// Every C' ⊆ C of size ℓ was checked.
    Exhaustive,
    /// `samples` subsets drawn with the given seed were checked.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorberConfig {
    /// Minimum number of edges of F a C-color must be able to reach via an
    /// alternating path from a released edge. `None` means ℓ + 1.
    pub tau: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    /// Largest number of subsets checked exhaustively.
    pub exhaustive_limit: u64,
}

impl Default for AbsorberConfig {
    fn default() -> Self {
        AbsorberConfig {
            tau: None,
            samples: 50,
            seed: 0,
            exhaustive_limit: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsorberTemplate {
    edges: Vec<(usize, usize)>,
    availability: Vec<ColorSet>,
    a: ColorSet,
    c: ColorSet,
    ell: usize,
    verification: Verification,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Perfect matching of `edges` into `allowed`, as a color per edge.
fn complete(availability: &[ColorSet], allowed: &ColorSet) -> Option<Vec<usize>> {
    let adj: Vec<Vec<usize>> = availability
        .iter()
        .map(|s| s.intersection(allowed).to_vec())
        .collect();
    let m = max_matching(&adj, allowed.universe());
    m.is_perfect()
        .then(|| m.item_color.into_iter().map(Option::unwrap).collect())
}

fn with_leftover(a: &ColorSet, leftover: &[usize]) -> ColorSet {
    let mut s = a.clone();
    for &c in leftover {
        s.insert(c);
    }
    s
}

impl AbsorberTemplate {
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn availability(&self) -> &[ColorSet] {
        &self.availability
    }

    pub fn a(&self) -> &ColorSet {
        &self.a
    }

    pub fn c(&self) -> &ColorSet {
        &self.c
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn verification(&self) -> Verification {
        self.verification
    }

    /// Every admissible leftover set, in lexicographic order.
    pub fn leftovers(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        self.c.iter().combinations(self.ell)
    }

    /// Text form: edge list, A, C, ℓ and how the template was verified.
    pub fn to_text(&self) -> String {
        let join = |s: &ColorSet| s.iter().map(|c| c.to_string()).join(" ");
        let mut out = String::new();
        let _ = writeln!(
            out,
            "edges: {}",
            self.edges.iter().map(|(u, v)| format!("{u}-{v}")).join(" ")
        );
        let _ = writeln!(out, "A: {}", join(&self.a));
        let _ = writeln!(out, "C: {}", join(&self.c));
        let _ = writeln!(out, "ell: {}", self.ell);
        let _ = match self.verification {
            Verification::Exhaustive => writeln!(out, "verified: exhaustive"),
            Verification::Sampled { samples, seed } => {
                writeln!(out, "verified: sampled({samples}, {seed})")
            }
        };
        out
    }

    /// Reads [`to_text`](Self::to_text) output back, recomputing the
    /// availability relation from `coll`. The verification mode is taken
    /// from the text, not re-established.
    pub fn from_text(text: &str, coll: &GraphCollection) -> Result<Self> {
        let mut edges = None;
        let mut a = None;
        let mut c = None;
        let mut ell = None;
        let mut verification = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let (key, val) = line
                .split_once(':')
                .ok_or_else(|| err(format!("expected `key: value`, got {line:?}")))?;
            let val = val.trim();
            let nums = |v: &str| -> Result<Vec<usize>> {
                v.split_whitespace()
                    .map(|t| t.parse().map_err(|_| err(format!("bad number {t:?}"))))
                    .collect()
            };
            match key.trim() {
                "edges" => {
                    let mut es = Vec::new();
                    for tok in val.split_whitespace() {
                        let (u, v) = tok
                            .split_once('-')
                            .ok_or_else(|| err(format!("bad edge {tok:?}")))?;
                        let parse = |x: &str| {
                            x.parse::<usize>()
                                .map_err(|_| err(format!("bad edge {tok:?}")))
                        };
                        es.push((parse(u)?, parse(v)?));
                    }
                    edges = Some(es);
                }
                "A" => a = Some(ColorSet::from_iter(coll.h(), nums(val)?)?),
                "C" => c = Some(ColorSet::from_iter(coll.h(), nums(val)?)?),
                "ell" => ell = Some(val.parse().map_err(|_| err(format!("bad ell {val:?}")))?),
                "verified" => {
                    verification = Some(if val == "exhaustive" {
                        Verification::Exhaustive
                    } else {
                        let inner = val
                            .strip_prefix("sampled(")
                            .and_then(|s| s.strip_suffix(')'))
                            .ok_or_else(|| err(format!("bad verification mode {val:?}")))?;
                        let (s, seed) = inner
                            .split_once(',')
                            .ok_or_else(|| err(format!("bad verification mode {val:?}")))?;
                        Verification::Sampled {
                            samples: s
                                .trim()
                                .parse()
                                .map_err(|_| err("bad sample count".into()))?,
                            seed: seed.trim().parse().map_err(|_| err("bad seed".into()))?,
                        }
                    })
                }
                other => return Err(err(format!("unknown key {other:?}"))),
            }
        }
        let missing = |k: &str| Error::Parse {
            line: 0,
            msg: format!("missing `{k}`"),
        };
        let edges = edges.ok_or_else(|| missing("edges"))?;
        let availability = edges
            .iter()
            .map(|&(u, v)| color_availability(coll, u, v))
            .collect::<Result<Vec<_>>>()?;
        let tpl = AbsorberTemplate {
            edges,
            availability,
            a: a.ok_or_else(|| missing("A"))?,
            c: c.ok_or_else(|| missing("C"))?,
            ell: ell.ok_or_else(|| missing("ell"))?,
            verification: verification.ok_or_else(|| missing("verified"))?,
        };
        if !tpl.a.is_disjoint(&tpl.c) || tpl.a.len() + tpl.ell != tpl.edges.len() {
            return Err(Error::InvalidParameter(
                "template sets are inconsistent".into(),
            ));
        }
        Ok(tpl)
    }
}

/// [`build_absorber_with`] under the default configuration.
pub fn build_absorber(
    coll: &GraphCollection,
    edges: &[(usize, usize)],
    ell: usize,
    c_size: usize,
    min_avail: usize,
) -> Result<AbsorberTemplate> {
    build_absorber_with(
        coll,
        edges,
        ell,
        c_size,
        min_avail,
        &AbsorberConfig::default(),
    )
}

/// Builds and certifies an absorber for the host edges `edges`.
///
/// 1. Match F perfectly into the colors; release the ℓ edges with the most
///    available colors (lowest index on ties). The colors of the other
///    matched edges form A.
/// 2. Colors outside A are scanned in increasing order. A color joins C if
///    it is available to at least τ edges reachable from a released edge by
///    an alternating path, and every new leftover set containing it can be
///    absorbed. τ is capped by the number of reachable edges.
/// 3. All leftover sets are checked, or a seeded sample when there are more
///    than `exhaustive_limit` of them.
pub fn build_absorber_with(
    coll: &GraphCollection,
    edges: &[(usize, usize)],
    ell: usize,
    c_size: usize,
    min_avail: usize,
    cfg: &AbsorberConfig,
) -> Result<AbsorberTemplate> {
    let (m, h) = (edges.len(), coll.h());
    if m > h {
        return Err(Error::InvalidParameter(format!(
            "{m} edges but only {h} colors"
        )));
    }
    if ell > m {
        return Err(Error::InvalidParameter(format!(
            "ℓ = {ell} exceeds the {m} edges"
        )));
    }
    if c_size < ell {
        return Err(Error::InvalidParameter(format!(
            "|C| = {c_size} is smaller than ℓ = {ell}"
        )));
    }
    if m - ell + c_size > h {
        return Err(Error::InvalidParameter(format!(
            "|A| + |C| = {} exceeds h = {h}",
            m - ell + c_size
        )));
    }
    let mut seen = std::collections::HashSet::new();
    for &(u, v) in edges {
        if !seen.insert((u.min(v), u.max(v))) {
            return Err(Error::InvalidParameter(format!("edge {u}-{v} repeated")));
        }
    }
    let availability = edges
        .iter()
        .map(|&(u, v)| color_availability(coll, u, v))
        .collect::<Result<Vec<_>>>()?;
    if let Some(i) = availability.iter().position(|s| s.len() < min_avail) {
        return Err(Error::InvalidParameter(format!(
            "edge {}-{} has {} available colors, fewer than {min_avail}",
            edges[i].0,
            edges[i].1,
            availability[i].len()
        )));
    }

    let adj: Vec<Vec<usize>> = availability.iter().map(ColorSet::to_vec).collect();
    let matching = max_matching(&adj, h);
    if !matching.is_perfect() {
        let cert =
            hall_certificate(&adj, h, &matching).expect("imperfect matching has a certificate");
        return Err(Error::HallViolation {
            edges: cert.items,
            colors: cert.colors,
        });
    }
    let matched: Vec<usize> = matching.item_color.iter().map(|c| c.unwrap()).collect();

    let mut by_avail: Vec<usize> = (0..m).collect();
    by_avail.sort_by(|&x, &y| {
        availability[y]
            .len()
            .cmp(&availability[x].len())
            .then(x.cmp(&y))
    });
    let released: Vec<usize> = by_avail[..ell].to_vec();
    let mut a = ColorSet::empty(h);
    for e in 0..m {
        if !released.contains(&e) {
            a.insert(matched[e]);
        }
    }

    // edges reachable from released ones: e -> (color in A available to e) -> edge holding it
    let mut reach = vec![false; m];
    let mut stack = released.clone();
    for &e in &released {
        reach[e] = true;
    }
    while let Some(e) = stack.pop() {
        for c in availability[e].intersection(&a).iter() {
            let holder = matched
                .iter()
                .position(|&x| x == c)
                .expect("colors of A are matched");
            if !reach[holder] {
                reach[holder] = true;
                stack.push(holder);
            }
        }
    }
    let reachable: Vec<usize> = (0..m).filter(|&e| reach[e]).collect();
    let tau = cfg.tau.unwrap_or(ell + 1).min(reachable.len());
    let ways = |c: usize| {
        reachable
            .iter()
            .filter(|&&e| availability[e].contains(c))
            .count()
    };

    let mut c_set: Vec<usize> = Vec::new();
    for color in (0..h).filter(|&c| !a.contains(c)) {
        if c_set.len() == c_size {
            break;
        }
        if ways(color) < tau || !availability.iter().any(|s| s.contains(color)) {
            continue;
        }
        let fresh = ell == 0 || binomial(c_set.len(), ell - 1) > cfg.exhaustive_limit || {
            c_set.iter().copied().combinations(ell - 1).all(|mut rest| {
                rest.push(color);
                complete(&availability, &with_leftover(&a, &rest)).is_some()
            })
        };
        if fresh {
            c_set.push(color);
        }
    }
    if c_set.len() < c_size {
        return Err(Error::InvalidParameter(format!(
            "only {} colors qualify for C, {c_size} requested",
            c_set.len()
        )));
    }
    let c = ColorSet::from_iter(h, c_set.iter().copied())?;

    let total = binomial(c_size, ell);
    let (leftovers, verification): (Vec<Vec<usize>>, _) = if total <= cfg.exhaustive_limit {
        (
            c.iter().combinations(ell).collect(),
            Verification::Exhaustive,
        )
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let picks = (0..cfg.samples)
            .map(|_| {
                let mut s: Vec<usize> = sample(&mut rng, c_size, ell)
                    .into_iter()
                    .map(|i| c_set[i])
                    .collect();
                s.sort_unstable();
                s
            })
            .collect();
        (
            picks,
            Verification::Sampled {
                samples: cfg.samples,
                seed: cfg.seed,
            },
        )
    };
    if let Some(bad) = leftovers
        .par_iter()
        .find_first(|rest| complete(&availability, &with_leftover(&a, rest)).is_none())
    {
        return Err(Error::NotResilient(bad.clone()));
    }
    Ok(AbsorberTemplate {
        edges: edges.to_vec(),
        availability,
        a,
        c,
        ell,
        verification,
    })
}

/// Colors the template's edges bijectively with A ∪ C'. Returns the color
/// of each edge, in the template's edge order.
pub fn absorb_colors(tpl: &AbsorberTemplate, leftover: &ColorSet) -> Result<Vec<usize>> {
    if leftover.universe() != tpl.a.universe() || !leftover.is_subset(&tpl.c) {
        return Err(Error::InvalidParameter(format!(
            "{leftover:?} is not a subset of C = {:?}",
            tpl.c
        )));
    }
    if leftover.len() != tpl.ell {
        return Err(Error::InvalidParameter(format!(
            "|C'| = {} but ℓ = {}",
            leftover.len(),
            tpl.ell
        )));
    }
    complete(&tpl.availability, &tpl.a.union(leftover))
        .ok_or_else(|| Error::NotResilient(leftover.to_vec()))
}
