//! Rendering of classifications: canonical JSON, ASCII grids and SVG plots.

mod ascii;
mod json;
mod svg;

pub use ascii::{emit_ascii, glyph, ASCII_MAX_COLUMNS, ASCII_MAX_ROWS};
pub use json::{
    build_document, emit_json, parse_json, ApexDoc, BoxDoc, Coord, Gamma4Doc, InvariantsDoc, LineDoc, MetaDoc,
    ObstructionDoc, PointDoc, RayDoc, ReportDocument, Scalar, SummaryDoc,
};
pub use svg::{emit_svg, SVG_MAX_POINTS};

use std::collections::BTreeMap;

use crate::geography::{LatticePoint, Status};

/// Classified points of one query box.
pub type Classification = BTreeMap<LatticePoint, Status>;
