//! Plain-text file formats.
//!
//! Collections: first line `n h`, then one `c u v` line per colored edge
//! with `u < v`. Targets: first line `n`, then `u v` lines, optionally
//! followed by `order: v0 v1 ...`. Embeddings: a `phi:` line of `x→u`
//! entries and a `lambda:` line of `x-y→c` entries (`->` is accepted for
//! `→`). `#` starts a comment everywhere.

use std::collections::HashSet;
use std::fmt::Write as _;

use crate::bandwidth::BandwidthOrdering;
use crate::error::{Error, Result};
use crate::graph::{Graph, GraphCollection};
use crate::solver::TransversalEmbedding;

/// Non-blank lines with comments stripped, paired with 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn numbers(line: usize, s: &str) -> Result<Vec<usize>> {
    s.split_whitespace()
        .map(|t| {
            t.parse()
                .map_err(|_| parse_err(line, format!("expected a nonnegative integer, got {t:?}")))
        })
        .collect()
}

pub fn parse_collection(text: &str) -> Result<GraphCollection> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty collection file"))?;
    let [n, h] = numbers(hl, header)?[..] else {
        return Err(parse_err(hl, "header must be `n h`"));
    };
    if h == 0 {
        return Err(parse_err(hl, "a collection needs at least one color"));
    }
    let mut layers = vec![Graph::empty(n)?; h];
    let mut seen = HashSet::new();
    for (ln, line) in lines {
        let [c, u, v] = numbers(ln, line)?[..] else {
            return Err(parse_err(ln, "expected `c u v`"));
        };
        if c >= h {
            return Err(parse_err(ln, format!("color {c} out of range 0..{h}")));
        }
        if u >= v || v >= n {
            return Err(parse_err(ln, format!("need 0 <= u < v < {n}, got {u} {v}")));
        }
        if !seen.insert((c, u, v)) {
            return Err(parse_err(ln, format!("duplicate edge {c} {u} {v}")));
        }
        layers[c].add_edge(u, v)?;
    }
    GraphCollection::new(layers)
}

pub fn write_collection(coll: &GraphCollection) -> String {
    let mut out = format!("{} {}\n", coll.n(), coll.h());
    for (c, g) in coll.layers().iter().enumerate() {
        for (u, v) in g.edges() {
            let _ = writeln!(out, "{c} {u} {v}");
        }
    }
    out
}

/// A target graph with an optional declared vertex ordering.
#[derive(Debug, Clone)]
pub struct Target {
    pub graph: Graph,
    pub order: Option<BandwidthOrdering>,
}

pub fn parse_target(text: &str) -> Result<Target> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty target file"))?;
    let [n] = numbers(hl, header)?[..] else {
        return Err(parse_err(hl, "header must be `n`"));
    };
    let mut g = Graph::empty(n)?;
    let mut order = None;
    for (ln, line) in lines {
        if order.is_some() {
            return Err(parse_err(ln, "`order:` must be the last line"));
        }
        if let Some(rest) = line.strip_prefix("order:") {
            let o = numbers(ln, rest)?;
            order = Some(BandwidthOrdering::new(&g, o).map_err(|e| parse_err(ln, e.to_string()))?);
            continue;
        }
        let [u, v] = numbers(ln, line)?[..] else {
            return Err(parse_err(ln, "expected `u v`"));
        };
        if u == v || u >= n || v >= n {
            return Err(parse_err(ln, format!("bad edge {u} {v} for {n} vertices")));
        }
        if g.has_edge(u, v) {
            return Err(parse_err(ln, format!("duplicate edge {u} {v}")));
        }
        g.add_edge(u, v)?;
    }
    Ok(Target { graph: g, order })
}

pub fn write_target(g: &Graph, order: Option<&BandwidthOrdering>) -> String {
    let mut out = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    if let Some(o) = order {
        let vs: Vec<String> = o.order().iter().map(usize::to_string).collect();
        let _ = writeln!(out, "order: {}", vs.join(" "));
    }
    out
}

pub fn write_embedding(emb: &TransversalEmbedding) -> String {
    let phi: Vec<String> = emb
        .phi
        .iter()
        .enumerate()
        .map(|(x, u)| format!("{x}→{u}"))
        .collect();
    let lambda: Vec<String> = emb
        .lambda
        .iter()
        .map(|(x, y, c)| format!("{x}-{y}→{c}"))
        .collect();
    format!("phi: {}\nlambda: {}\n", phi.join(", "), lambda.join(", "))
}

pub fn parse_embedding(text: &str) -> Result<TransversalEmbedding> {
    let mut phi: Option<Vec<usize>> = None;
    let mut lambda = None;
    for (ln, line) in content_lines(text) {
        let (key, rest) = line
            .split_once(':')
            .ok_or_else(|| parse_err(ln, "expected `phi:` or `lambda:`"))?;
        let entries: Vec<(&str, &str)> = rest
            .split(',')
            .map(str::trim)
            .filter(|e| !e.is_empty())
            .map(|e| {
                e.split_once('→')
                    .or_else(|| e.split_once("->"))
                    .map(|(a, b)| (a.trim(), b.trim()))
                    .ok_or_else(|| parse_err(ln, format!("bad entry {e:?}")))
            })
            .collect::<Result<_>>()?;
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| parse_err(ln, format!("bad number {s:?}")))
        };
        match key.trim() {
            "phi" => {
                let mut map = vec![None; entries.len()];
                for (x, u) in entries {
                    let x = num(x)?;
                    let slot = map.get_mut(x).ok_or_else(|| {
                        parse_err(ln, format!("phi is missing vertices below {x}"))
                    })?;
                    if slot.replace(num(u)?).is_some() {
                        return Err(parse_err(ln, format!("vertex {x} mapped twice")));
                    }
                }
                phi = Some(
                    map.into_iter()
                        .map(|v| v.expect("all slots filled"))
                        .collect(),
                );
            }
            "lambda" => {
                let mut out = Vec::new();
                for (e, c) in entries {
                    let (x, y) = e
                        .split_once('-')
                        .ok_or_else(|| parse_err(ln, format!("bad edge {e:?}")))?;
                    out.push((num(x)?, num(y)?, num(c)?));
                }
                lambda = Some(out);
            }
            other => return Err(parse_err(ln, format!("unknown key {other:?}"))),
        }
    }
    Ok(TransversalEmbedding {
        phi: phi.ok_or_else(|| parse_err(0, "missing `phi:` line"))?,
        lambda: lambda.ok_or_else(|| parse_err(0, "missing `lambda:` line"))?,
    })
}
