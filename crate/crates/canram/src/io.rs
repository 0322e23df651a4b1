//! Text formats: edge lists (`k n` header then one edge per line), list
//! assignments and colourings (`v1 ... vk : ...`), and exact rational parsing.

use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::graph::{Colouring, KGraph, ListAssignment};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Content lines with 1-based line numbers; blanks and `#` comments skipped.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(tok: &str, line: usize, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} {tok:?}")))
}

/// Parse the `k n` edge-list format.
pub fn parse_graph(text: &str) -> Result<KGraph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty graph file"))?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(parse_err(hline, "expected header `k n`"));
    }
    let k = parse_usize(parts[0], hline, "uniformity")?;
    let n = parse_usize(parts[1], hline, "vertex count")?;
    let mut edges = Vec::new();
    for (lno, line) in lines {
        let edge: Vec<usize> = line
            .split_whitespace()
            .map(|t| parse_usize(t, lno, "vertex"))
            .collect::<Result<_>>()?;
        if edge.len() != k {
            return Err(parse_err(
                lno,
                format!("expected {k} vertices, got {}", edge.len()),
            ));
        }
        edges.push(edge);
    }
    KGraph::new(k, n, edges)
}

pub fn parse_graph_file(path: &Path) -> Result<KGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

/// Canonical rendering; `parse_graph(serialise_graph(g)) == g`.
pub fn serialise_graph(g: &KGraph) -> String {
    let mut out = format!("{} {}\n", g.uniformity(), g.vertex_count());
    for e in g.edges() {
        let toks: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{}", toks.join(" "));
    }
    out
}

/// Split a `v1 ... vk : rest` line into the edge and the remainder tokens.
fn split_edge_line<'a>(
    line: &'a str,
    lno: usize,
    k: usize,
) -> Result<(Vec<usize>, Vec<&'a str>)> {
    let (left, right) = line
        .split_once(':')
        .ok_or_else(|| parse_err(lno, "expected `v1 ... vk : ...`"))?;
    let edge: Vec<usize> = left
        .split_whitespace()
        .map(|t| parse_usize(t, lno, "vertex"))
        .collect::<Result<_>>()?;
    if edge.len() != k {
        return Err(parse_err(
            lno,
            format!("expected {k} vertices before `:`, got {}", edge.len()),
        ));
    }
    Ok((edge, right.split_whitespace().collect()))
}

fn edge_index(g: &KGraph, mut edge: Vec<usize>, lno: usize) -> Result<usize> {
    edge.sort_unstable();
    g.edge_index(&edge)
        .ok_or_else(|| parse_err(lno, format!("{edge:?} is not an edge of the graph")))
}

/// Parse `v1 ... vk : c1 ... cr` lines into a list assignment on `g`; every
/// edge must appear exactly once.
pub fn parse_lists(text: &str, g: &KGraph) -> Result<ListAssignment> {
    let k = g.uniformity();
    let mut lists: Vec<Option<Vec<u64>>> = vec![None; g.edge_count()];
    let mut r: Option<usize> = None;
    for (lno, line) in content_lines(text) {
        let (edge, toks) = split_edge_line(line, lno, k)?;
        let idx = edge_index(g, edge, lno)?;
        let list: Vec<u64> = toks
            .iter()
            .map(|t| {
                t.parse()
                    .map_err(|_| parse_err(lno, format!("invalid colour {t:?}")))
            })
            .collect::<Result<_>>()?;
        if list.is_empty() {
            return Err(parse_err(lno, "empty colour list"));
        }
        match r {
            None => r = Some(list.len()),
            Some(r) if r != list.len() => {
                return Err(parse_err(
                    lno,
                    format!("list length {} differs from earlier length {r}", list.len()),
                ));
            }
            _ => {}
        }
        if lists[idx].is_some() {
            return Err(parse_err(lno, "edge listed twice"));
        }
        lists[idx] = Some(list);
    }
    let r = r.ok_or_else(|| parse_err(1, "empty list file"))?;
    let lists: Vec<Vec<u64>> = lists
        .into_iter()
        .enumerate()
        .map(|(i, l)| {
            l.ok_or_else(|| parse_err(0, format!("no list for edge {:?}", g.edge(i))))
        })
        .collect::<Result<_>>()?;
    ListAssignment::new(r, lists)
}

pub fn serialise_lists(g: &KGraph, lists: &ListAssignment) -> String {
    let mut out = String::new();
    for (i, e) in g.edges().enumerate() {
        let vs: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        let cs: Vec<String> = lists.list(i).iter().map(|c| c.to_string()).collect();
        let _ = writeln!(out, "{} : {}", vs.join(" "), cs.join(" "));
    }
    out
}

/// Parse `v1 ... vk : c` lines into a total colouring of `g`.
pub fn parse_colouring(text: &str, g: &KGraph) -> Result<Colouring> {
    let k = g.uniformity();
    let mut colours: Vec<Option<u64>> = vec![None; g.edge_count()];
    for (lno, line) in content_lines(text) {
        let (edge, toks) = split_edge_line(line, lno, k)?;
        let idx = edge_index(g, edge, lno)?;
        if toks.len() != 1 {
            return Err(parse_err(lno, "expected exactly one colour after `:`"));
        }
        let c: u64 = toks[0]
            .parse()
            .map_err(|_| parse_err(lno, format!("invalid colour {:?}", toks[0])))?;
        if colours[idx].is_some() {
            return Err(parse_err(lno, "edge coloured twice"));
        }
        colours[idx] = Some(c);
    }
    let colours: Vec<u64> = colours
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            c.ok_or_else(|| parse_err(0, format!("no colour for edge {:?}", g.edge(i))))
        })
        .collect::<Result<_>>()?;
    Ok(Colouring::new(colours))
}

pub fn serialise_colouring(g: &KGraph, chi: &Colouring) -> String {
    let mut out = String::new();
    for (i, e) in g.edges().enumerate() {
        let vs: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{} : {}", vs.join(" "), chi.of(i));
    }
    out
}

/// Exact rational from `p/q`, a decimal, or an integer.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || parse_err(1, format!("invalid rational {s:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(parse_err(1, "zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac_part)) = s.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let int: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let frac: BigInt = frac_part.parse().map_err(|_| bad())?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut value = BigRational::new(int.abs() * &scale + frac, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    let int: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(int))
}
