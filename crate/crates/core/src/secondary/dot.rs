use std::fmt::Write;

use super::{SecondaryPolytope, Web};
use crate::exactla::format_rational;
use crate::geometry::Config;

fn cells_label(c: &Config, cells: &[crate::geometry::PointSet]) -> String {
    cells.iter().map(|&s| c.describe(s)).collect::<Vec<_>>().join(" ")
}

/// Hasse diagram of the face lattice; nodes are labeled by their cell lists.
pub fn face_lattice_dot(c: &Config, sp: &SecondaryPolytope) -> String {
    let mut out = String::from("digraph secondary {\n  rankdir=BT;\n");
    for (i, f) in sp.faces.iter().enumerate() {
        let shape = if f.geometric { "box" } else { "ellipse" };
        let _ = writeln!(
            out,
            "  f{i} [label=\"dim {}: {}\", shape={shape}];",
            f.dim,
            cells_label(c, f.subdivision.cells())
        );
    }
    for (i, f) in sp.faces.iter().enumerate() {
        for p in &f.parents {
            let _ = writeln!(out, "  f{i} -> f{p};");
        }
    }
    out.push_str("}\n");
    out
}

/// Dual web with exact vertex positions and ray directions as attributes.
pub fn web_dot(c: &Config, web: &Web) -> String {
    let mut out = String::from("graph web {\n");
    for (i, v) in web.vertices.iter().enumerate() {
        let _ = writeln!(
            out,
            "  v{i} [label=\"{}\", x=\"{}\", y=\"{}\"];",
            c.describe(v.cell),
            format_rational(&v.position[0]),
            format_rational(&v.position[1])
        );
    }
    for e in &web.edges {
        let _ = writeln!(out, "  v{} -- v{} [wall=\"{}\"];", e.from, e.to, c.describe(e.wall));
    }
    for (k, r) in web.rays.iter().enumerate() {
        let _ = writeln!(out, "  r{k} [shape=point];");
        let _ = writeln!(
            out,
            "  v{} -- r{k} [wall=\"{}\", dx=\"{}\", dy=\"{}\"];",
            r.vertex,
            c.describe(r.wall),
            format_rational(&r.direction[0]),
            format_rational(&r.direction[1])
        );
    }
    out.push_str("}\n");
    out
}
