//! Plain-text digraph files.
//!
//! ```text
//! # comment
//! n e
//! tail head      (e lines, 0-indexed)
//! ```
//!
//! The writer is canonical (arcs in lexicographic order, single spaces, `\n`
//! line ends), so `write(parse(write(g))) == write(g)` byte for byte.

use crate::digraph::Digraph;
use crate::error::{Error, Result};

pub fn write_digraph(g: &Digraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.arc_count());
    for (t, h) in g.arcs() {
        out.push_str(&format!("{t} {h}\n"));
    }
    out
}

pub fn parse_digraph(input: &str) -> Result<Digraph> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n e` header".into(),
    })?;
    let [n, e] = parse_pair(header_line, header, "header `n e`")?;

    let mut arcs = Vec::with_capacity(e);
    let mut last_line = header_line;
    for (line, text) in lines {
        if arcs.len() == e {
            return Err(Error::Parse {
                line,
                message: format!("more than the declared {e} arcs"),
            });
        }
        let [t, h] = parse_pair(line, text, "arc `tail head`")?;
        if t >= n || h >= n {
            return Err(Error::Parse {
                line,
                message: format!("arc ({t}, {h}) out of range for {n} vertices"),
            });
        }
        arcs.push((line, t, h));
        last_line = line;
    }
    if arcs.len() != e {
        return Err(Error::Parse {
            line: last_line,
            message: format!("header declares {e} arcs, found {}", arcs.len()),
        });
    }
    // Report digraph-level violations against the offending line.
    let mut seen = std::collections::HashSet::new();
    for &(line, t, h) in &arcs {
        if t == h {
            return Err(Error::Parse {
                line,
                message: format!("loop at vertex {t}"),
            });
        }
        if !seen.insert((t, h)) {
            return Err(Error::Parse {
                line,
                message: format!("duplicate arc ({t}, {h})"),
            });
        }
    }
    Digraph::new(n, arcs.into_iter().map(|(_, t, h)| (t, h)))
}

fn parse_pair(line: usize, text: &str, what: &str) -> Result<[usize; 2]> {
    let fields: Vec<&str> = text.split_whitespace().collect();
    let bad = || Error::Parse {
        line,
        message: format!("expected {what}, got `{text}`"),
    };
    if fields.len() != 2 {
        return Err(bad());
    }
    let a = fields[0].parse().map_err(|_| bad())?;
    let b = fields[1].parse().map_err(|_| bad())?;
    Ok([a, b])
}
