//! Text formats for designs, Latin squares and permutation lists.
//!
//! A design file starts with `v b` and the `b` block lines, followed by any
//! of the sections `#resolution`, `#groups`, `#labels` and `#aut`. Line
//! numbers in errors are 1-based.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::canon::Certificate;
use crate::error::{Error, Result};
use crate::incidence::{IncidenceStructure, Resolution, TransversalGrouping};
use crate::latin::LatinSquare;
use crate::perms::Permutation;

#[derive(Debug, Clone, PartialEq)]
pub struct DesignFile {
    pub design: IncidenceStructure,
    pub resolution: Option<Resolution>,
    pub groups: Option<TransversalGrouping>,
    /// `(β, γ)` for each block line.
    pub labels: Option<Vec<(usize, usize)>>,
    pub aut: Option<(BigUint, Vec<Permutation>)>,
}

impl DesignFile {
    pub fn plain(design: IncidenceStructure) -> Self {
        Self {
            design,
            resolution: None,
            groups: None,
            labels: None,
            aut: None,
        }
    }
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn numbers(line: usize, text: &str) -> Result<Vec<usize>> {
    text.split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(line, format!("bad integer `{t}`"))))
        .collect()
}

/// Non-empty lines with their 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn join(xs: &[usize]) -> String {
    let mut s = String::new();
    for (i, x) in xs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{x}").unwrap();
    }
    s
}

pub fn parse_design(text: &str) -> Result<DesignFile> {
    let mut it = lines(text).peekable();
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let vb = numbers(hl, header)?;
    let [v, b] = vb[..] else {
        return Err(parse_err(hl, "expected `v b`"));
    };
    let mut blocks = Vec::with_capacity(b);
    for _ in 0..b {
        match it.next() {
            Some((ln, l)) if !l.starts_with('#') => {
                let blk = numbers(ln, l)?;
                if let Some(&x) = blk.iter().find(|&&x| x >= v) {
                    return Err(parse_err(ln, format!("point {x} out of range 0..{v}")));
                }
                if blk.is_empty() {
                    return Err(parse_err(ln, "empty block"));
                }
                blocks.push(blk);
            }
            Some((ln, _)) => return Err(parse_err(ln, format!("expected {b} blocks, found {}", blocks.len()))),
            None => return Err(parse_err(text.lines().count() + 1, format!("expected {b} blocks, found {}", blocks.len()))),
        }
    }
    let design = IncidenceStructure::new(v, blocks).map_err(|e| parse_err(hl, e.to_string()))?;
    let mut out = DesignFile::plain(design);
    while let Some((ln, l)) = it.next() {
        let mut body = Vec::new();
        while let Some(&(bl, t)) = it.peek() {
            if t.starts_with('#') {
                break;
            }
            body.push((bl, t));
            it.next();
        }
        match l {
            "#resolution" => {
                let classes = body.iter().map(|&(n, t)| numbers(n, t)).collect::<Result<Vec<_>>>()?;
                out.resolution = Some(Resolution::new(classes));
            }
            "#groups" => {
                let groups = body.iter().map(|&(n, t)| numbers(n, t)).collect::<Result<Vec<_>>>()?;
                out.groups = Some(TransversalGrouping::new(groups));
            }
            "#labels" => {
                if body.len() != b {
                    return Err(parse_err(ln, format!("{} labels for {b} blocks", body.len())));
                }
                let labels = body
                    .iter()
                    .map(|&(n, t)| match numbers(n, t)?[..] {
                        [beta, gamma] => Ok((beta, gamma)),
                        _ => Err(parse_err(n, "expected `beta gamma`")),
                    })
                    .collect::<Result<Vec<_>>>()?;
                out.labels = Some(labels);
            }
            "#aut" => {
                let Some(&(on, first)) = body.first() else {
                    return Err(parse_err(ln, "missing `order N`"));
                };
                let order = first
                    .strip_prefix("order")
                    .and_then(|s| s.trim().parse::<BigUint>().ok())
                    .ok_or_else(|| parse_err(on, "expected `order N`"))?;
                let gens = body[1..]
                    .iter()
                    .map(|&(n, t)| Permutation::new(numbers(n, t)?).map_err(|e| parse_err(n, e.to_string())))
                    .collect::<Result<Vec<_>>>()?;
                out.aut = Some((order, gens));
            }
            other => return Err(parse_err(ln, format!("unknown section `{other}`"))),
        }
    }
    Ok(out)
}

pub fn write_design(f: &DesignFile) -> String {
    let d = &f.design;
    let mut s = format!("{} {}\n", d.v(), d.b());
    for blk in d.blocks() {
        s.push_str(&join(blk));
        s.push('\n');
    }
    if let Some(r) = &f.resolution {
        s.push_str("#resolution\n");
        for c in r.classes() {
            s.push_str(&join(c));
            s.push('\n');
        }
    }
    if let Some(g) = &f.groups {
        s.push_str("#groups\n");
        for c in g.groups() {
            s.push_str(&join(c));
            s.push('\n');
        }
    }
    if let Some(labels) = &f.labels {
        s.push_str("#labels\n");
        for (beta, gamma) in labels {
            writeln!(s, "{beta} {gamma}").unwrap();
        }
    }
    if let Some((order, gens)) = &f.aut {
        s.push_str("#aut\n");
        writeln!(s, "order {order}").unwrap();
        s.push_str(&write_permutations(gens));
    }
    s
}

/// The canonical design with its automorphism group.
pub fn write_certificate(c: &Certificate) -> Result<String> {
    let mut f = DesignFile::plain(c.design()?);
    f.aut = Some((c.order.clone(), c.generators.clone()));
    Ok(write_design(&f))
}

pub fn parse_latin(text: &str) -> Result<LatinSquare> {
    let mut it = lines(text);
    let (hl, header) = it.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let n = match numbers(hl, header)?[..] {
        [n] => n,
        _ => return Err(parse_err(hl, "expected the order `n`")),
    };
    let mut rows = Vec::with_capacity(n);
    for (ln, l) in it {
        let row = numbers(ln, l)?;
        if row.len() != n {
            return Err(parse_err(ln, format!("row of length {} in a square of order {n}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(parse_err(hl, format!("{} rows in a square of order {n}", rows.len())));
    }
    LatinSquare::from_rows(rows).map_err(|e| parse_err(hl, e.to_string()))
}

pub fn write_latin(sq: &LatinSquare) -> String {
    let mut s = format!("{}\n", sq.order());
    for r in 0..sq.order() {
        s.push_str(&join(sq.row(r)));
        s.push('\n');
    }
    s
}

pub fn parse_permutations(text: &str) -> Result<Vec<Permutation>> {
    let mut degree = None;
    lines(text)
        .map(|(ln, l)| {
            let images = numbers(ln, l)?;
            if *degree.get_or_insert(images.len()) != images.len() {
                return Err(parse_err(ln, "permutations of different degrees"));
            }
            Permutation::new(images).map_err(|e| parse_err(ln, e.to_string()))
        })
        .collect()
}

pub fn write_permutations(gens: &[Permutation]) -> String {
    let mut s = String::new();
    for g in gens {
        s.push_str(&join(g.images()));
        s.push('\n');
    }
    s
}
