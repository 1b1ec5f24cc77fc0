//! SVG plot in the `(e,h)`-plane: wedge boundaries, one marker per lattice
//! point, and the delta line dashed with `x` markers.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geography::{Arm, GeographyReport, LatticePoint, QueryBox, Status, Wedge};
use crate::rational::{self, Rational};

use super::Classification;

pub const SVG_MAX_POINTS: u128 = 10_000;

const MARGIN: i64 = 40;
const PX_PER_E: i64 = 6;
const PX_PER_H: i64 = 12;
const LEGEND: i64 = 90;

struct Frame {
    qbox: QueryBox,
}

impl Frame {
    fn x(&self, e: Rational) -> Rational {
        (e - rational::int(self.qbox.e_min)) * PX_PER_E + MARGIN
    }

    fn y(&self, h: Rational) -> Rational {
        (rational::int(self.qbox.h_max) - h) * PX_PER_H + MARGIN
    }

    fn width(&self) -> i64 {
        2 * MARGIN + (self.qbox.e_max - self.qbox.e_min) * PX_PER_E
    }

    fn plot_height(&self) -> i64 {
        2 * MARGIN + self.qbox.h_max * PX_PER_H
    }

    fn xy(&self, e: i64, h: i64) -> (String, String) {
        (num(self.x(rational::int(e))), num(self.y(rational::int(h))))
    }
}

fn num(r: Rational) -> String {
    if rational::is_int(&r) {
        r.numer().to_string()
    } else {
        format!("{:.2}", *r.numer() as f64 / *r.denom() as f64)
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn wedge_polyline(f: &Frame, w: &Wedge, class: &str, stroke: &str) -> String {
    let top = rational::int(f.qbox.h_max);
    let reach = (top - w.base) * 2;
    let pts = [(w.center - reach, top), (w.center, w.base), (w.center + reach, top)];
    let list: Vec<String> = pts.iter().map(|(e, h)| format!("{},{}", num(f.x(*e)), num(f.y(*h)))).collect();
    format!(
        "<polyline class=\"{class}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        list.join(" ")
    )
}

fn x_mark(f: &Frame, p: LatticePoint, class: &str, stroke: &str) -> String {
    let (x, y) = (f.x(rational::int(p.e)), f.y(rational::int(p.h)));
    let d = rational::int(3);
    format!(
        "<path class=\"{class}\" stroke=\"{stroke}\" stroke-width=\"1.5\" d=\"M{} {} L{} {} M{} {} L{} {}\"/>\n",
        num(x - d),
        num(y - d),
        num(x + d),
        num(y + d),
        num(x - d),
        num(y + d),
        num(x + d),
        num(y - d)
    )
}

pub fn emit_svg(report: &GeographyReport, points: &Classification, qbox: &QueryBox) -> Result<String> {
    let count = qbox.point_count();
    if count > SVG_MAX_POINTS {
        return Err(Error::BoxTooLarge { points: count, cap: SVG_MAX_POINTS });
    }
    let f = Frame { qbox: *qbox };
    let (w, h) = (f.width(), f.plot_height() + LEGEND);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\" \
         font-family=\"monospace\" font-size=\"10\">"
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&report.knot.to_text()));
    let (x0, y0) = f.xy(qbox.e_min, qbox.h_max);
    let (x1, y1) = f.xy(qbox.e_max, 0);
    let _ = writeln!(
        s,
        "<defs><clipPath id=\"plot\"><rect x=\"{x0}\" y=\"{y0}\" width=\"{}\" height=\"{}\"/></clipPath></defs>",
        (qbox.e_max - qbox.e_min) * PX_PER_E,
        qbox.h_max * PX_PER_H
    );
    let _ = writeln!(s, "<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"white\"/>");

    s.push_str("<g class=\"axes\" stroke=\"#999\">\n");
    let _ = writeln!(s, "<line x1=\"{x0}\" y1=\"{y1}\" x2=\"{x1}\" y2=\"{y1}\"/>");
    let _ = writeln!(s, "<line x1=\"{x0}\" y1=\"{y1}\" x2=\"{x0}\" y2=\"{y0}\"/>");
    s.push_str("</g>\n<g class=\"labels\" fill=\"#333\">\n");
    let first = qbox.e_min + qbox.e_min.rem_euclid(2);
    for e in (first..=qbox.e_max).step_by(2).step_by(4) {
        let (x, y) = f.xy(e, 0);
        let _ = writeln!(s, "<text x=\"{x}\" y=\"{y}\" dy=\"14\" text-anchor=\"middle\">{e}</text>");
    }
    for hh in 1..=qbox.h_max {
        let (x, y) = f.xy(qbox.e_min, hh);
        let _ = writeln!(s, "<text x=\"{x}\" y=\"{y}\" dx=\"-6\" dy=\"3\" text-anchor=\"end\">{hh}</text>");
    }
    s.push_str("</g>\n<g class=\"wedges\" clip-path=\"url(#plot)\">\n");
    s.push_str(&wedge_polyline(&f, &report.r1, "r1", "#1f5fbf"));
    s.push_str(&wedge_polyline(&f, &report.r2, "r2", "#2a9d3f"));
    for a in &report.realizable_wedges {
        s.push_str(&wedge_polyline(&f, &a.wedge(), "apex-wedge", "#000000"));
    }
    if let Some(line) = report.delta_line() {
        let end = |hh: i64| match line.arm {
            Arm::Right => f.xy(2 * (line.offset + hh), hh),
            Arm::Left => f.xy(2 * (line.offset - hh), hh),
        };
        let ((xa, ya), (xb, yb)) = (end(0), end(qbox.h_max));
        let _ = writeln!(
            s,
            "<line class=\"delta-line\" stroke=\"#c0392b\" stroke-width=\"1.5\" stroke-dasharray=\"6 4\" \
             x1=\"{xa}\" y1=\"{ya}\" x2=\"{xb}\" y2=\"{yb}\"/>"
        );
    }
    s.push_str("</g>\n<g class=\"points\">\n");
    let mut ordered: Vec<_> = points.iter().filter(|(p, _)| qbox.contains(**p)).collect();
    ordered.sort_by_key(|(p, _)| (p.h, p.e));
    for (p, status) in ordered {
        let (x, y) = f.xy(p.e, p.h);
        match status {
            Status::Realizable(_) => {
                let _ = writeln!(s, "<circle class=\"realizable\" cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"#000000\"/>");
            }
            Status::Unknown => {
                let _ = writeln!(
                    s,
                    "<circle class=\"unknown\" cx=\"{x}\" cy=\"{y}\" r=\"3\" fill=\"#ffffff\" stroke=\"#e67e22\" stroke-width=\"1.5\"/>"
                );
            }
            Status::NotRealizable(c) if c.kind() == "delta_line" => {
                s.push_str(&x_mark(&f, *p, "x delta", "#c0392b"));
            }
            Status::NotRealizable(c) if c.is_special_obstruction() => {
                s.push_str(&x_mark(&f, *p, "x obstructed", "#7f1d1d"));
            }
            Status::NotRealizable(_) => {
                let _ = writeln!(s, "<circle class=\"excluded\" cx=\"{x}\" cy=\"{y}\" r=\"1.5\" fill=\"#bbbbbb\"/>");
            }
        }
    }
    s.push_str("</g>\n<g class=\"legend\">\n");
    let ly = f.plot_height() + 10;
    let entries = [
        ("realizable", "#000000"),
        ("unknown", "#e67e22"),
        ("obstructed (Klein/delta/propagation/registry)", "#7f1d1d"),
        ("outside wedges", "#bbbbbb"),
        ("R1 signature wedge", "#1f5fbf"),
        ("R2 Upsilon wedge", "#2a9d3f"),
    ];
    for (i, (label, color)) in entries.iter().enumerate() {
        let y = ly + 12 * i as i64;
        let _ = writeln!(
            s,
            "<rect x=\"{MARGIN}\" y=\"{}\" width=\"8\" height=\"8\" fill=\"{color}\"/><text x=\"{}\" y=\"{}\">{}</text>",
            y,
            MARGIN + 14,
            y + 8,
            escape(label)
        );
    }
    s.push_str("</g>\n</svg>\n");
    Ok(s)
}
