//! Text formats: `.mpx` (premaniplex), `.vpx` (voltage premaniplex).
//!
//! `.mpx` is line-oriented ASCII:
//! ```text
//! maniplex <rank> <flag_count>
//! color 0: f0 f1 f2 ...
//! color 1: ...
//! ```
//! Round-trip guarantee: `parse(serialize(M)) == M` bit-exactly.
//!
//! `.vpx` embeds an `.mpx` block for the base, then:
//! ```text
//! group: <degree>
//! <name>: <images...>        (one generator per line)
//! voltages:
//! <vertex> <color> <word>    (omitted darts are trivial; one dart per edge)
//! ```
//! Words use generator names with optional `^-1`, whitespace separated.

use crate::group::{Elem, FreeActionGroup, Perm};
use crate::premaniplex::{validate, Flag, Premaniplex, Validated};
use crate::voltage::VoltagePremaniplex;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IoError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("validation failed: {0}")]
    FlagGraph(#[from] crate::premaniplex::FlagGraphError),
    #[error("voltage validation failed: {0}")]
    Voltage(#[from] crate::voltage::VoltageError),
    #[error("group error: {0}")]
    Group(#[from] crate::group::GroupError),
}

fn perr<T>(line: usize, msg: impl Into<String>) -> Result<T, IoError> {
    Err(IoError::Parse {
        line,
        msg: msg.into(),
    })
}

pub fn serialize_premaniplex(p: &Premaniplex) -> String {
    let mut out = format!("maniplex {} {}\n", p.rank(), p.flag_count());
    for i in 0..p.rank() {
        out.push_str(&format!("color {i}:"));
        for &img in p.perm(i) {
            out.push_str(&format!(" {img}"));
        }
        out.push('\n');
    }
    out
}

/// Parses the `.mpx` body starting at `lines[*pos]`; advances `pos`.
fn parse_mpx_block(
    lines: &[&str],
    pos: &mut usize,
    validate_result: bool,
) -> Result<Validated, IoError> {
    while *pos < lines.len() && lines[*pos].trim().is_empty() {
        *pos += 1;
    }
    if *pos >= lines.len() {
        return perr(*pos + 1, "expected `maniplex <rank> <flags>` header");
    }
    let header_line = *pos + 1;
    let header: Vec<&str> = lines[*pos].split_whitespace().collect();
    if header.len() != 3 || header[0] != "maniplex" {
        return perr(header_line, "expected `maniplex <rank> <flags>` header");
    }
    let rank: usize = header[1]
        .parse()
        .map_err(|_| IoError::Parse {
            line: header_line,
            msg: "bad rank".into(),
        })?;
    let flags: usize = header[2]
        .parse()
        .map_err(|_| IoError::Parse {
            line: header_line,
            msg: "bad flag count".into(),
        })?;
    *pos += 1;
    let mut perms = Vec::with_capacity(rank);
    for i in 0..rank {
        let line_no = *pos + 1;
        if *pos >= lines.len() {
            return perr(line_no, format!("missing `color {i}:` line"));
        }
        let line = lines[*pos];
        *pos += 1;
        let Some(rest) = line
            .trim()
            .strip_prefix(&format!("color {i}:"))
        else {
            return perr(line_no, format!("expected `color {i}:` line"));
        };
        let mut images = Vec::with_capacity(flags);
        for tok in rest.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| IoError::Parse {
                line: line_no,
                msg: format!("bad flag id `{tok}`"),
            })?;
            images.push(v);
        }
        if images.len() != flags {
            return perr(
                line_no,
                format!("expected {flags} images, got {}", images.len()),
            );
        }
        perms.push(images);
    }
    let _ = validate_result;
    Ok(validate(rank, perms)?)
}

pub fn parse_premaniplex(text: &str) -> Result<Validated, IoError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut pos = 0;
    let v = parse_mpx_block(&lines, &mut pos, true)?;
    while pos < lines.len() {
        if !lines[pos].trim().is_empty() {
            return perr(pos + 1, "unexpected trailing content");
        }
        pos += 1;
    }
    Ok(v)
}

pub fn serialize_voltage(v: &VoltagePremaniplex) -> String {
    let mut out = serialize_premaniplex(v.base());
    let g = v.group();
    out.push_str(&format!("group: {}\n", g.degree()));
    for i in 0..g.generator_count() {
        out.push_str(&format!("{}:", g.generator_names()[i]));
        for &img in g.generator_perm(i).images() {
            out.push_str(&format!(" {img}"));
        }
        out.push('\n');
    }
    out.push_str("voltages:\n");
    // One dart per edge: the dart (x, c) with x ≤ endpoint.
    for x in 0..v.base().flag_count() as Flag {
        for c in 0..v.base().rank() {
            let y = v.base().adj(c, x);
            if x > y {
                continue;
            }
            let e = v.voltage(x, c);
            if g.is_identity(e) {
                continue;
            }
            let word = g.word_string(e).expect("element of own group");
            out.push_str(&format!("{x} {c} {word}\n"));
        }
    }
    out
}

pub fn parse_voltage(text: &str) -> Result<VoltagePremaniplex, IoError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut pos = 0;
    let base = parse_mpx_block(&lines, &mut pos, false)?.premaniplex();
    while pos < lines.len() && lines[pos].trim().is_empty() {
        pos += 1;
    }
    let line_no = pos + 1;
    if pos >= lines.len() {
        return perr(line_no, "expected `group: <degree>`");
    }
    let Some(deg_str) = lines[pos].trim().strip_prefix("group:") else {
        return perr(line_no, "expected `group: <degree>`");
    };
    let degree: usize = deg_str.trim().parse().map_err(|_| IoError::Parse {
        line: line_no,
        msg: "bad group degree".into(),
    })?;
    pos += 1;
    let mut names = Vec::new();
    let mut gens = Vec::new();
    while pos < lines.len() && lines[pos].trim() != "voltages:" {
        let line_no = pos + 1;
        let line = lines[pos].trim();
        pos += 1;
        if line.is_empty() {
            continue;
        }
        let Some((name, rest)) = line.split_once(':') else {
            return perr(line_no, "expected `<name>: <images...>` or `voltages:`");
        };
        let mut images = Vec::with_capacity(degree);
        for tok in rest.split_whitespace() {
            let v: u32 = tok.parse().map_err(|_| IoError::Parse {
                line: line_no,
                msg: format!("bad image `{tok}`"),
            })?;
            images.push(v);
        }
        if images.len() != degree {
            return perr(
                line_no,
                format!("expected {degree} images, got {}", images.len()),
            );
        }
        let perm = Perm::new(images)
            .ok_or_else(|| IoError::Parse {
                line: line_no,
                msg: format!("generator `{name}` is not a permutation"),
            })?;
        names.push(name.trim().to_string());
        gens.push(perm);
    }
    if pos >= lines.len() {
        return perr(pos + 1, "expected `voltages:` section");
    }
    pos += 1; // skip `voltages:`
    // Base point 0 by convention.
    let group = FreeActionGroup::close(names.clone(), gens, 0)?;
    let rank = base.rank();
    let flags = base.flag_count();
    let mut assigned: Vec<Vec<Option<Elem>>> = vec![vec![None; flags]; rank];
    while pos < lines.len() {
        let line_no = pos + 1;
        let line = lines[pos].trim();
        pos += 1;
        if line.is_empty() {
            continue;
        }
        let mut toks = line.split_whitespace();
        let vertex: Flag = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| IoError::Parse {
                line: line_no,
                msg: "expected `<vertex> <color> <word>`".into(),
            })?;
        let color: usize = toks
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| IoError::Parse {
                line: line_no,
                msg: "expected `<vertex> <color> <word>`".into(),
            })?;
        if vertex as usize >= flags || color >= rank {
            return perr(line_no, "dart out of range");
        }
        let mut elem = group.identity();
        for tok in toks {
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let gi = names.iter().position(|n| n == name).ok_or_else(|| {
                IoError::Parse {
                    line: line_no,
                    msg: format!("unknown generator `{name}`"),
                }
            })?;
            let mut g = group.generator(gi);
            if inverse {
                g = group.inverse(g)?;
            }
            elem = group.compose(elem, g)?;
        }
        if assigned[color][vertex as usize].is_some() {
            return perr(line_no, "duplicate voltage for dart");
        }
        assigned[color][vertex as usize] = Some(elem);
    }
    // Imply inverse voltages on darts that were not explicitly listed.
    let mut xi: Vec<Vec<Elem>> = vec![vec![group.identity(); flags]; rank];
    for c in 0..rank {
        for x in 0..flags as Flag {
            match assigned[c][x as usize] {
                Some(e) => xi[c][x as usize] = e,
                None => {
                    let y = base.adj(c, x);
                    if let Some(e) = assigned[c][y as usize] {
                        xi[c][x as usize] = group.inverse(e)?;
                    }
                }
            }
        }
    }
    Ok(VoltagePremaniplex::new(base, group, xi)?)
}
