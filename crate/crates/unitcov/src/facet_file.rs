//! Plain-text facet listings and hull checkpoints.
//!
//! A listing has `#` header lines followed by one facet per line:
//!
//! ```text
//! # unitcov facets
//! # version 0.1.0
//! # n 3
//! # count 4
//! # body-sha256 <hex digest of the facet lines>
//! 1 : -1 -1 1
//! ```
//!
//! Each line `o : m_12 m_13 ... m_(n-1)n` is the inequality `<x, m> <= o`
//! with coordinates in row-major pair order. Anything after a second `#` on
//! a facet line is a comment.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use sha2::{Digest, Sha256};
use unitcov_core::hull::{HullFacet, HullState};
use unitcov_core::model::pair_count;
use unitcov_core::{Facet, Rat};

use crate::error::{CliError, Result};

pub const LISTING_MAGIC: &str = "# unitcov facets";
pub const CHECKPOINT_MAGIC: &str = "# unitcov facet checkpoint";

pub fn facet_line(f: &Facet) -> String {
    let mut line = f.offset.to_string();
    line.push_str(" :");
    for v in &f.normal {
        let _ = write!(line, " {v}");
    }
    line
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Renders a full listing. `comments` supplies an optional per-facet
/// trailing comment.
pub fn render_listing(
    n: usize,
    facets: &[Facet],
    comments: Option<&dyn Fn(&Facet) -> String>,
) -> String {
    let mut body = String::new();
    for f in facets {
        body.push_str(&facet_line(f));
        if let Some(c) = comments {
            body.push_str("  # ");
            body.push_str(&c(f));
        }
        body.push('\n');
    }
    let mut out = String::new();
    out.push_str(LISTING_MAGIC);
    out.push('\n');
    let _ = writeln!(out, "# version {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "# n {n}");
    let _ = writeln!(out, "# count {}", facets.len());
    let _ = writeln!(out, "# body-sha256 {}", sha256_hex(body.as_bytes()));
    out.push_str(&body);
    out
}

/// Parses a listing back into facets; checks the pair count against the
/// `# n` header when present.
pub fn parse_listing(text: &str) -> Result<(Option<usize>, Vec<Facet>)> {
    let mut n = None;
    let mut facets = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(header) = line.strip_prefix('#') {
            if let Some(v) = header.trim().strip_prefix("n ") {
                n = Some(v.trim().parse::<usize>().map_err(|_| {
                    CliError::input(format!("line {}: bad `# n` header", lineno + 1))
                })?);
            }
            continue;
        }
        if line.is_empty() {
            continue;
        }
        let content = line.split('#').next().unwrap_or("").trim();
        let (offset, normal) = content
            .split_once(':')
            .ok_or_else(|| CliError::input(format!("line {}: missing `:`", lineno + 1)))?;
        let offset: i64 = offset
            .trim()
            .parse()
            .map_err(|_| CliError::input(format!("line {}: bad offset", lineno + 1)))?;
        let normal = normal
            .split_whitespace()
            .map(str::parse::<i64>)
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|_| CliError::input(format!("line {}: bad coefficient", lineno + 1)))?;
        if let Some(n) = n {
            if normal.len() != pair_count(n) {
                return Err(CliError::input(format!(
                    "line {}: {} coefficients, expected {}",
                    lineno + 1,
                    normal.len(),
                    pair_count(n)
                )));
            }
        }
        facets.push(Facet {
            normal,
            offset: Rat::from_integer(offset.into()),
        });
    }
    Ok((n, facets))
}

/// Snapshot of an interrupted hull run. The trailing `end` line guards
/// against truncated files.
pub fn render_checkpoint(n: usize, points: usize, state: &HullState) -> String {
    let mut out = String::new();
    out.push_str(CHECKPOINT_MAGIC);
    out.push('\n');
    let _ = writeln!(out, "version {}", env!("CARGO_PKG_VERSION"));
    let _ = writeln!(out, "n {n}");
    let _ = writeln!(out, "points {points}");
    let _ = writeln!(out, "inserted {}", state.inserted);
    out.push_str("order");
    for k in &state.order {
        let _ = write!(out, " {k}");
    }
    out.push('\n');
    for f in &state.facets {
        let _ = write!(out, "f {} {:x} :", f.offset, f.incidence);
        for v in &f.normal {
            let _ = write!(out, " {v}");
        }
        out.push('\n');
    }
    let _ = writeln!(out, "end {}", state.facets.len());
    out
}

pub fn parse_checkpoint(text: &str) -> Result<(usize, HullState)> {
    let bad = |what: &str| CliError::input(format!("checkpoint: {what}"));
    let mut lines = text.lines();
    if lines.next() != Some(CHECKPOINT_MAGIC) {
        return Err(bad("missing header"));
    }
    let mut n = None;
    let mut inserted = None;
    let mut order = None;
    let mut facets = Vec::new();
    let mut finished = false;
    for line in lines {
        let (key, rest) = line.split_once(' ').unwrap_or((line, ""));
        match key {
            "version" | "points" => {}
            "n" => n = Some(rest.trim().parse::<usize>().map_err(|_| bad("bad n"))?),
            "inserted" => {
                inserted = Some(
                    rest.trim()
                        .parse::<usize>()
                        .map_err(|_| bad("bad inserted"))?,
                )
            }
            "order" => {
                order = Some(
                    rest.split_whitespace()
                        .map(str::parse::<usize>)
                        .collect::<std::result::Result<Vec<_>, _>>()
                        .map_err(|_| bad("bad order"))?,
                )
            }
            "f" => {
                let (head, normal) = rest.split_once(':').ok_or_else(|| bad("bad facet"))?;
                let mut head = head.split_whitespace();
                let offset = head
                    .next()
                    .and_then(|s| s.parse::<i64>().ok())
                    .ok_or_else(|| bad("bad facet offset"))?;
                let incidence = head
                    .next()
                    .and_then(|s| u64::from_str_radix(s, 16).ok())
                    .ok_or_else(|| bad("bad facet incidence"))?;
                let normal = normal
                    .split_whitespace()
                    .map(str::parse::<i64>)
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| bad("bad facet normal"))?;
                facets.push(HullFacet {
                    normal,
                    offset,
                    incidence,
                });
            }
            "end" => {
                let count: usize = rest.trim().parse().map_err(|_| bad("bad end"))?;
                if count != facets.len() {
                    return Err(bad("facet count does not match `end`"));
                }
                finished = true;
                break;
            }
            _ => return Err(bad("unknown line")),
        }
    }
    if !finished {
        return Err(bad("truncated (no `end` line)"));
    }
    let n = n.ok_or_else(|| bad("missing n"))?;
    let state = HullState {
        order: order.ok_or_else(|| bad("missing order"))?,
        inserted: inserted.ok_or_else(|| bad("missing inserted"))?,
        facets,
    };
    Ok((n, state))
}

/// Writes via a sibling temporary file and a rename, so a crash leaves
/// either the old or the new contents.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let display = path.display().to_string();
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    let mut file = fs::File::create(&tmp).map_err(|e| CliError::io(&display, e))?;
    file.write_all(contents)
        .and_then(|_| file.sync_all())
        .map_err(|e| CliError::io(&display, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(&display, e))
}
