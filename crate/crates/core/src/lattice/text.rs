//! Text syntax for lattice labels.
//!
//! Partitions print blocks joined by `|`; labels are juxtaposed digits for
//! n <= 9 and comma-separated inside braces for n >= 10, e.g. `"{1,10}|{2}"`.
//! Down-set labels print as `↓{α1,α2,...}` over their maximal antichain;
//! class labels as `↑{ᾱ1,...}` over their minimal elements.

use crate::error::{Error, Result};
use crate::lattice::class::ClassLabel;
use crate::lattice::downset::{DownSetLabel, PartitionLattice};
use crate::lattice::partition::Partition;

pub fn format_partition(p: &Partition) -> String {
    let block_str = |b: &Vec<usize>| {
        if p.n() <= 9 {
            b.iter().map(ToString::to_string).collect::<String>()
        } else {
            format!(
                "{{{}}}",
                b.iter()
                    .map(ToString::to_string)
                    .collect::<Vec<_>>()
                    .join(",")
            )
        }
    };
    p.blocks().iter().map(block_str).collect::<Vec<_>>().join("|")
}

pub fn parse_partition(n: usize, s: &str) -> Result<Partition> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty partition text".into()));
    }
    let mut blocks = Vec::new();
    for part in s.split('|') {
        let part = part.trim();
        let block: Vec<usize> = if let Some(inner) = part
            .strip_prefix('{')
            .and_then(|r| r.strip_suffix('}'))
        {
            inner
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Parse(format!("bad label '{t}' in '{s}'")))
                })
                .collect::<Result<_>>()?
        } else {
            part.chars()
                .map(|c| {
                    c.to_digit(10)
                        .map(|d| d as usize)
                        .ok_or_else(|| Error::Parse(format!("bad label '{c}' in '{s}'")))
                })
                .collect::<Result<_>>()?
        };
        blocks.push(block);
    }
    Partition::from_blocks(n, blocks)
}

pub fn format_downset(label: &DownSetLabel, lattice: &PartitionLattice) -> String {
    let parts: Vec<String> = label
        .max_elements(lattice)
        .iter()
        .map(format_partition)
        .collect();
    format!("↓{{{}}}", parts.join(","))
}

/// Parses `↓{α1,α2,...}` (also accepts an ASCII `down{...}` or `v{...}`
/// prefix) as the down-closure of the listed partitions.
pub fn parse_downset(lattice: &PartitionLattice, s: &str) -> Result<DownSetLabel> {
    let s = s.trim();
    let inner = ["↓", "down", "v"]
        .iter()
        .find_map(|prefix| s.strip_prefix(prefix))
        .unwrap_or(s)
        .trim();
    let inner = inner
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected ↓{{...}} syntax, got '{s}'")))?;
    // split on commas at brace depth 0 (labels may contain braces for n >= 10)
    let mut parts = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (i, c) in inner.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth = depth.saturating_sub(1),
            ',' if depth == 0 => {
                parts.push(&inner[start..i]);
                start = i + c.len_utf8();
            }
            _ => {}
        }
    }
    parts.push(&inner[start..]);
    let partitions: Vec<Partition> = parts
        .iter()
        .map(|t| parse_partition(lattice.n(), t))
        .collect::<Result<_>>()?;
    lattice.down_closure(&partitions)
}

pub fn format_class(label: &ClassLabel, lattice: &PartitionLattice) -> String {
    let mins: Vec<String> = label
        .min_indices()
        .into_iter()
        .map(|i| format_downset(label.sublattice().label(i), lattice))
        .collect();
    format!("↑{{{}}}", mins.join(","))
}
