//! State-source syntax: inline factories (`ghz:3`, `w:3`, `dicke:4,2`,
//! `bell`, `product:2,2,2`, `werner:p=0.5`, `ghzw-mix:p=0.3`,
//! `haar:2,2,2`) or `@file.json` in the state wire format.

use psep::qstate::{self, DimProfile, QuantumState};
use psep::{Error, Result};

pub fn parse_state(src: &str, seed: u64) -> Result<QuantumState> {
    if let Some(path) = src.strip_prefix('@') {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("cannot read {path}: {e}")))?;
        return QuantumState::from_json(&text);
    }
    if src == "bell" {
        return qstate::bell();
    }
    let (name, rest) = src
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("unknown state source '{src}'")))?;
    match name {
        "ghz" => {
            let nums = parse_usizes(rest)?;
            match nums.as_slice() {
                [n] => qstate::ghz(*n, 2),
                [n, d] => qstate::ghz(*n, *d),
                _ => Err(Error::Parse("ghz takes n or n,d".into())),
            }
        }
        "w" => {
            let nums = parse_usizes(rest)?;
            match nums.as_slice() {
                [n] => qstate::w_state(*n),
                _ => Err(Error::Parse("w takes n".into())),
            }
        }
        "dicke" => {
            let nums = parse_usizes(rest)?;
            match nums.as_slice() {
                [n, k] => qstate::dicke(*n, *k),
                _ => Err(Error::Parse("dicke takes n,k".into())),
            }
        }
        "product" => {
            let dims = parse_usizes(rest)?;
            let profile = DimProfile::new(dims)?;
            let zeros = vec![0; profile.n()];
            qstate::basis_product(&profile, &zeros)
        }
        "haar" => {
            let dims = parse_usizes(rest)?;
            qstate::haar_random_pure(&DimProfile::new(dims)?, seed)
        }
        "werner" => qstate::werner(parse_p(rest)?),
        "ghzw-mix" => qstate::ghzw_mix(parse_p(rest)?),
        _ => Err(Error::Parse(format!("unknown state source '{src}'"))),
    }
}

fn parse_usizes(s: &str) -> Result<Vec<usize>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer '{t}'")))
        })
        .collect()
}

fn parse_p(s: &str) -> Result<f64> {
    let s = s.strip_prefix("p=").unwrap_or(s);
    s.parse()
        .map_err(|_| Error::Parse(format!("bad probability '{s}'")))
}
