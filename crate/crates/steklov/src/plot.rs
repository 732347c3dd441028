//! Static SVG emitters: eigenvalue ladders, pair overlays, mesh
//! wireframes. Pure string construction, no display server.

use crate::spectral::Spectrum;
use crate::tiling::Mesh;

fn svg_header(width: f64, height: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">\n"
    )
}

/// Vertical tick ladder of one spectrum.
pub fn eigenvalue_ladder(spectrum: &Spectrum, title: &str) -> String {
    let evs = &spectrum.eigenvalues;
    let (w, h) = (220.0, 420.0);
    let mut out = svg_header(w, h);
    out.push_str(&format!(
        "<text x=\"10\" y=\"20\" font-size=\"12\" font-family=\"monospace\">{title}</text>\n"
    ));
    if evs.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let lo = evs.first().copied().unwrap().min(0.0);
    let hi = evs.last().copied().unwrap().max(lo + 1e-9);
    let y = |v: f64| 400.0 - 360.0 * (v - lo) / (hi - lo);
    out.push_str("<line x1=\"60\" y1=\"40\" x2=\"60\" y2=\"400\" stroke=\"black\"/>\n");
    for &ev in evs {
        let yy = y(ev);
        out.push_str(&format!(
            "<line x1=\"50\" y1=\"{yy:.2}\" x2=\"110\" y2=\"{yy:.2}\" stroke=\"steelblue\"/>\n"
        ));
        out.push_str(&format!(
            "<text x=\"115\" y=\"{:.2}\" font-size=\"9\" font-family=\"monospace\">{ev:.6}</text>\n",
            yy + 3.0
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Two spectra side by side with connecting segments; visually flat
/// connectors mean agreement.
pub fn pair_overlay(s1: &Spectrum, s2: &Spectrum, title: &str) -> String {
    let (w, h) = (320.0, 420.0);
    let mut out = svg_header(w, h);
    out.push_str(&format!(
        "<text x=\"10\" y=\"20\" font-size=\"12\" font-family=\"monospace\">{title}</text>\n"
    ));
    let all: Vec<f64> = s1
        .eigenvalues
        .iter()
        .chain(s2.eigenvalues.iter())
        .copied()
        .collect();
    if all.is_empty() {
        out.push_str("</svg>\n");
        return out;
    }
    let lo = all.iter().copied().fold(f64::INFINITY, f64::min).min(0.0);
    let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max).max(lo + 1e-9);
    let y = |v: f64| 400.0 - 360.0 * (v - lo) / (hi - lo);
    for (x0, evs, color) in [(80.0, &s1.eigenvalues, "steelblue"), (220.0, &s2.eigenvalues, "darkorange")] {
        for &ev in evs {
            let yy = y(ev);
            out.push_str(&format!(
                "<line x1=\"{:.1}\" y1=\"{yy:.2}\" x2=\"{:.1}\" y2=\"{yy:.2}\" stroke=\"{color}\"/>\n",
                x0 - 25.0,
                x0 + 25.0
            ));
        }
    }
    for (a, b) in s1.eigenvalues.iter().zip(&s2.eigenvalues) {
        out.push_str(&format!(
            "<line x1=\"105\" y1=\"{:.2}\" x2=\"195\" y2=\"{:.2}\" stroke=\"gray\" stroke-width=\"0.5\"/>\n",
            y(*a),
            y(*b)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// Wireframe of a mesh, one panel per tile chart laid out on a grid.
pub fn mesh_wireframe(mesh: &Mesh, title: &str) -> String {
    let nodes = &mesh.ref_mesh.nodes;
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in nodes {
        for d in 0..2 {
            lo[d] = lo[d].min(p[d]);
            hi[d] = hi[d].max(p[d]);
        }
    }
    let span = [(hi[0] - lo[0]).max(1e-9), (hi[1] - lo[1]).max(1e-9)];
    let scale = 120.0 / span[0].max(span[1]);
    let cols = (mesh.tile_count as f64).sqrt().ceil() as usize;
    let cell = 140.0;
    let rows = mesh.tile_count.div_ceil(cols);
    let (w, h) = (cols as f64 * cell + 20.0, rows as f64 * cell + 40.0);
    let mut out = svg_header(w, h);
    out.push_str(&format!(
        "<text x=\"10\" y=\"20\" font-size=\"12\" font-family=\"monospace\">{title}</text>\n"
    ));
    let place = |tile: usize, p: [f64; 2]| {
        let (cx, cy) = ((tile % cols) as f64 * cell + 10.0, (tile / cols) as f64 * cell + 30.0);
        (
            cx + (p[0] - lo[0]) * scale,
            cy + (hi[1] - p[1]) * scale,
        )
    };
    for idx in 0..mesh.triangles.len() {
        let (tile, rt) = mesh.triangles[idx];
        let tri = mesh.ref_mesh.tris[rt];
        let pts: Vec<(f64, f64)> = tri.iter().map(|&n| place(tile, nodes[n])).collect();
        out.push_str(&format!(
            "<path d=\"M{:.1},{:.1} L{:.1},{:.1} L{:.1},{:.1} Z\" fill=\"none\" stroke=\"#888\" stroke-width=\"0.4\"/>\n",
            pts[0].0, pts[0].1, pts[1].0, pts[1].1, pts[2].0, pts[2].1
        ));
    }
    // Boundary edges emphasized, mirror edges dashed.
    for e in &mesh.boundary_edges {
        let (t0, n0) = mesh.vertex_rep[e.v[0]];
        let (_, n1) = mesh.vertex_rep[e.v[1]];
        let a = place(t0, nodes[n0]);
        let b = place(t0, nodes[n1]);
        let style = if mesh.classes[e.class] == "mirror" {
            "stroke=\"crimson\" stroke-width=\"1.2\" stroke-dasharray=\"3,2\""
        } else {
            "stroke=\"black\" stroke-width=\"1.0\""
        };
        out.push_str(&format!(
            "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\" {style}/>\n",
            a.0, a.1, b.0, b.1
        ));
    }
    out.push_str("</svg>\n");
    out
}
