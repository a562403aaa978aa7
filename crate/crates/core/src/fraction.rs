//! Color availability and η-fraction graphs.
//!
//! For a collection 𝒢 and a color set C, the η-fraction graph keeps the
//! vertex pairs lying in at least η|C| of the layers indexed by C. Note
//! that shrinking C does not shrink the fraction graph in general.

use std::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphCollection};
use crate::ratio::Rational;

/// A subset of the colors `0..h`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ColorSet {
    h: usize,
    words: Vec<u64>,
}

impl ColorSet {
    pub fn empty(h: usize) -> Self {
        ColorSet {
            h,
            words: vec![0; h.div_ceil(64)],
        }
    }

    pub fn full(h: usize) -> Self {
        let mut s = Self::empty(h);
        for c in 0..h {
            s.insert(c);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(h: usize, it: I) -> Result<Self> {
        let mut s = Self::empty(h);
        for c in it {
            if c >= h {
                return Err(Error::ColorOutOfRange { c, h });
            }
            s.insert(c);
        }
        Ok(s)
    }

    pub fn universe(&self) -> usize {
        self.h
    }

    #[inline]
    pub fn contains(&self, c: usize) -> bool {
        c < self.h && self.words[c / 64] >> (c % 64) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, c: usize) {
        self.words[c / 64] |= 1 << (c % 64);
    }

    #[inline]
    pub fn remove(&mut self, c: usize) {
        self.words[c / 64] &= !(1 << (c % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn intersection_len(&self, other: &ColorSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &ColorSet) -> ColorSet {
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
        out
    }

    pub fn is_subset(&self, other: &ColorSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &ColorSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.h).filter(move |&c| self.contains(c))
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Λ_𝒢(uv): the colors whose layer contains `uv`.
pub fn color_availability(coll: &GraphCollection, u: usize, v: usize) -> Result<ColorSet> {
    for x in [u, v] {
        if x >= coll.n() {
            return Err(Error::VertexOutOfRange { v: x, n: coll.n() });
        }
    }
    if u == v {
        return Err(Error::SelfLoop(u));
    }
    let mut out = ColorSet::empty(coll.h());
    for (c, g) in coll.layers().iter().enumerate() {
        if g.has_edge(u, v) {
            out.insert(c);
        }
    }
    Ok(out)
}

fn check_eta(eta: &Rational) -> Result<()> {
    if !eta.is_positive() || *eta > Rational::one() {
        return Err(Error::InvalidParameter(format!(
            "η = {eta} is outside (0, 1]"
        )));
    }
    Ok(())
}

/// The η-fraction graph 𝒢^η_C. The threshold `|Λ(uv) ∩ C| ≥ η|C|` is
/// evaluated in integers.
pub fn fraction_graph(coll: &GraphCollection, colors: &ColorSet, eta: &Rational) -> Result<Graph> {
    if colors.universe() != coll.h() {
        return Err(Error::InvalidParameter(format!(
            "color set over {} colors used with a collection of {} colors",
            colors.universe(),
            coll.h()
        )));
    }
    if colors.is_empty() {
        return Err(Error::InvalidParameter(
            "fraction graph needs a nonempty color set".into(),
        ));
    }
    check_eta(eta)?;
    let n = coll.n();
    let size = colors.len() as i128;
    let (num, den) = (*eta.numer(), *eta.denom());
    let threshold = |count: usize| count as i128 * den >= num * size;
    let selected: Vec<&Graph> = colors.iter().map(|c| coll.layer(c)).collect();
    let mut out = Graph::empty(n)?;
    for u in 0..n {
        for v in u + 1..n {
            let count = selected.iter().filter(|g| g.has_edge(u, v)).count();
            if threshold(count) {
                out.add_edge(u, v)?;
            }
        }
    }
    Ok(out)
}
