//! PACE `.td` text format: an `s td <bags> <max bag size> <vertices>` line,
//! `b <bag> <vertex>...` lines and one line per tree edge, all 1-indexed.
//! Lines starting with `c` are comments.

use super::TreeDecomposition;
use crate::error::{Error, Result};

/// Returns the decomposition and the declared vertex count.
pub fn parse_pace(text: &str) -> Result<(TreeDecomposition, usize)> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<Vec<usize>>> = Vec::new();
    let mut edges = Vec::new();
    let num = |tok: &str, line: usize| -> Result<usize> {
        tok.parse().map_err(|_| Error::parse(format!("line {line}: expected a number, got {tok:?}")))
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.first().copied() {
            None | Some("c") => continue,
            Some("s") => {
                if toks.len() != 5 || toks[1] != "td" {
                    return Err(Error::parse(format!("line {line}: malformed solution line")));
                }
                let h = (num(toks[2], line)?, num(toks[3], line)?, num(toks[4], line)?);
                bags = vec![None; h.0];
                header = Some(h);
            }
            Some("b") => {
                let (count, _, n) = header.ok_or_else(|| Error::parse(format!("line {line}: bag before s line")))?;
                if toks.len() < 2 {
                    return Err(Error::parse(format!("line {line}: bag line without id")));
                }
                let id = num(toks[1], line)?;
                if id == 0 || id > count {
                    return Err(Error::parse(format!("line {line}: bag id {id} out of range")));
                }
                let mut bag = Vec::new();
                for t in &toks[2..] {
                    let v = num(t, line)?;
                    if v == 0 || v > n {
                        return Err(Error::parse(format!("line {line}: vertex {v} out of range")));
                    }
                    bag.push(v - 1);
                }
                if bags[id - 1].replace(bag).is_some() {
                    return Err(Error::parse(format!("line {line}: bag {id} given twice")));
                }
            }
            Some(_) => {
                let (count, _, _) = header.ok_or_else(|| Error::parse(format!("line {line}: edge before s line")))?;
                if toks.len() != 2 {
                    return Err(Error::parse(format!("line {line}: expected a tree edge")));
                }
                let (a, b) = (num(toks[0], line)?, num(toks[1], line)?);
                if a == 0 || b == 0 || a > count || b > count {
                    return Err(Error::parse(format!("line {line}: tree edge names an unknown bag")));
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    let (_, max_size, n) = header.ok_or_else(|| Error::parse("missing s line"))?;
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| Error::parse(format!("bag {} missing", i + 1))))
        .collect::<Result<Vec<_>>>()?;
    let td = TreeDecomposition::new(bags, edges);
    if td.bags.iter().any(|b| b.len() > max_size) {
        return Err(Error::parse("a bag exceeds the declared maximum size"));
    }
    Ok((td, n))
}

pub fn write_pace(td: &TreeDecomposition, n: usize) -> String {
    let max = td.bags.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("s td {} {} {}\n", td.bags.len(), max, n);
    for (i, bag) in td.bags.iter().enumerate() {
        out.push_str(&format!("b {}", i + 1));
        for v in bag {
            out.push_str(&format!(" {}", v + 1));
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        out.push_str(&format!("{} {}\n", a + 1, b + 1));
    }
    out
}
