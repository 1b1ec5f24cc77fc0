//! Text grid: one row per `h` (top row highest), one column per even `e`.

use crate::error::{Error, Result};
use crate::geography::{LatticePoint, QueryBox, Status};

use super::Classification;

pub const ASCII_MAX_COLUMNS: i64 = 200;
pub const ASCII_MAX_ROWS: i64 = 60;

pub fn glyph(s: &Status) -> char {
    match s {
        Status::Realizable(_) => '#',
        Status::Unknown => '?',
        Status::NotRealizable(c) if c.is_special_obstruction() => 'x',
        Status::NotRealizable(_) => '.',
    }
}

const LEFT: usize = 6;

pub fn emit_ascii(points: &Classification, qbox: &QueryBox) -> Result<String> {
    let first = qbox.e_min + qbox.e_min.rem_euclid(2);
    let columns: Vec<i64> = (first..=qbox.e_max).step_by(2).collect();
    if columns.len() as i64 > ASCII_MAX_COLUMNS || qbox.h_max > ASCII_MAX_ROWS {
        return Err(Error::BoxTooLarge {
            points: (columns.len() as u128) * qbox.h_max as u128,
            cap: (ASCII_MAX_COLUMNS * ASCII_MAX_ROWS) as u128,
        });
    }
    if columns.is_empty() {
        return Ok(String::new());
    }
    let mut out = String::new();
    for h in (1..=qbox.h_max).rev() {
        out.push_str(&format!("{h:>4} |"));
        for &e in &columns {
            out.push(' ');
            out.push(points.get(&LatticePoint::new(e, h)).map_or('.', glyph));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:>4} +{}\n", "", "-".repeat(2 * columns.len())));
    let mut labels = vec![b' '; LEFT + 2 * columns.len() + 8];
    for (i, e) in columns.iter().enumerate().step_by(4) {
        let at = LEFT + 2 * i + 1;
        for (k, b) in e.to_string().bytes().enumerate() {
            labels[at + k] = b;
        }
    }
    out.push_str(String::from_utf8(labels).expect("ascii").trim_end());
    out.push_str("   e\n");
    out.push_str("# realizable  ? unknown  x obstructed (Klein/delta/propagation/registry)  . outside wedges\n");
    Ok(out)
}
