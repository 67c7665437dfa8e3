use std::cmp::Ordering;
use std::fmt::Write;

use quiver_stability::rational::{q, qi, to_decimal, Q};
use quiver_stability::universe::ModuleUniverse;
use quiver_stability::wallchamber::{angle_cmp, Chamber, PathReport, RedPath, Wall};
use quiver_stability::{Error, Result};

const HALF_WIDTH: i64 = 2;
const CORNERS: [[i64; 2]; 4] = [[1, 1], [-1, 1], [-1, -1], [1, -1]];

fn num(x: &Q) -> String {
    to_decimal(x, 6)
}

/// SVG coordinates of a plane point: the y axis points up.
fn xy(p: &[Q]) -> (String, String) {
    (num(&p[0]), num(&-p[1]))
}

/// Where the ray through `d` leaves the square `[-2,2]^2`.
fn to_edge(d: &[i64]) -> Vec<Q> {
    let scale = q(HALF_WIDTH, d[0].abs().max(d[1].abs()));
    d.iter().map(|&x| qi(x) * scale).collect()
}

fn cross(a: &[i64], b: &[i64]) -> i64 {
    a[0] * b[1] - a[1] * b[0]
}

/// `c` lies strictly inside the counterclockwise sweep from `a` to `b`.
fn strictly_between(a: &[i64], c: &[i64], b: &[i64]) -> bool {
    let same = |x: &[i64], y: &[i64]| cross(x, y) == 0 && x[0] * y[0] + x[1] * y[1] > 0;
    if same(c, a) || same(c, b) {
        return false;
    }
    if same(a, b) {
        return true;
    }
    match cross(a, b).cmp(&0) {
        Ordering::Greater => cross(a, c) > 0 && cross(c, b) > 0,
        Ordering::Equal => cross(a, c) > 0,
        Ordering::Less => !(cross(b, c) >= 0 && cross(c, a) >= 0),
    }
}

/// Corners of the square inside a sector, in counterclockwise order from `a`.
fn sector_corners(a: &[i64], b: &[i64]) -> Vec<[i64; 2]> {
    let mut corners: Vec<[i64; 2]> = CORNERS.into_iter().filter(|c| strictly_between(a, c, b)).collect();
    corners.sort_by(|x, y| {
        let after = |c: &[i64]| angle_cmp(c, a) != Ordering::Greater;
        after(x).cmp(&after(y)).then_with(|| angle_cmp(x, y))
    });
    corners
}

fn polygon_points(a: &[i64], b: &[i64]) -> String {
    let mut pts = vec![vec![qi(0), qi(0)], to_edge(a)];
    pts.extend(sector_corners(a, b).iter().map(|c| to_edge(c)));
    pts.push(to_edge(b));
    pts.iter()
        .map(|p| {
            let (x, y) = xy(p);
            format!("{x},{y}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Rank-two picture on `[-2,2]^2`: shaded chambers, walls, and an optional path with its crossings.
pub fn render(
    walls: &[Wall],
    chambers: &[Chamber],
    path: Option<(&RedPath, &PathReport)>,
    u: &ModuleUniverse,
) -> Result<String> {
    let rank = u.algebra().vertex_count();
    if rank != 2 {
        return Err(Error::RankUnsupported { rank, max: 2 });
    }
    let mut out = String::new();
    let w = 2 * HALF_WIDTH;
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {w} {w}" width="400" height="400">"#,
        -HALF_WIDTH, -HALF_WIDTH
    );
    let _ = writeln!(
        out,
        "<style>.chamber{{fill:#4a90d9;fill-opacity:0.12;stroke:none}} .axis{{stroke:#999;stroke-width:0.01}} \
         .wall{{stroke:#c0392b;stroke-width:0.03}} .path{{fill:none;stroke:#222;stroke-width:0.02}} \
         .crossing{{fill:#222}}</style>"
    );
    for c in chambers {
        if let Some((a, b)) = &c.bounds {
            let _ = writeln!(out, r#"<polygon class="chamber" points="{}"/>"#, polygon_points(a, b));
        }
    }
    let _ = writeln!(out, r#"<line class="axis" x1="-2" y1="0" x2="2" y2="0"/>"#);
    let _ = writeln!(out, r#"<line class="axis" x1="0" y1="-2" x2="0" y2="2"/>"#);
    for wall in walls {
        let gens = wall.cone.generators()?;
        let label = escape(&wall.modules.iter().map(|m| m.name.as_str()).collect::<Vec<_>>().join(", "));
        let (start, end) = match gens.as_slice() {
            [g] => (vec![qi(0), qi(0)], to_edge(g)),
            [g, h] if wall.is_full_line()? => (to_edge(g), to_edge(h)),
            _ => return Err(Error::InternalAssertion(format!("wall of {label} is not a ray or a line"))),
        };
        let ((x1, y1), (x2, y2)) = (xy(&start), xy(&end));
        let _ = writeln!(
            out,
            r#"<line class="wall" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"><title>{label}</title></line>"#
        );
    }
    if let Some((path, report)) = path {
        let points: Vec<String> = path
            .breakpoints()
            .iter()
            .map(|(_, p)| {
                let (x, y) = xy(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(out, r#"<polyline class="path" points="{}"/>"#, points.join(" "));
        for c in &report.crossings {
            let (x, y) = xy(&path.gamma(c.t));
            let names: Vec<&str> = c.modules.iter().map(|&i| u.indecomposables()[i].name.as_str()).collect();
            let _ = writeln!(
                out,
                r#"<circle class="crossing" cx="{x}" cy="{y}" r="0.05"><title>t = {}: {}</title></circle>"#,
                c.t,
                escape(&names.join(", "))
            );
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use quiver_stability::catalog::builtin;
    use quiver_stability::wallchamber::chambers_rank2;

    use super::*;

    #[test]
    fn no_walls_draws_axes_only() {
        let u = ModuleUniverse::new(Arc::new(builtin("A2", None).unwrap()), &[1, 1]).unwrap();
        let svg = render(&[], &chambers_rank2(&[]).unwrap(), None, &u).unwrap();
        assert_eq!(svg.matches(r#"class="axis""#).count(), 2);
        assert!(!svg.contains("<polygon") && !svg.contains(r#"class="wall""#));
    }

    #[test]
    fn corners_follow_the_sector() {
        assert_eq!(sector_corners(&[1, 0], &[0, 1]), vec![[1, 1]]);
        assert_eq!(sector_corners(&[0, 1], &[1, 0]), vec![[-1, 1], [-1, -1], [1, -1]]);
        assert_eq!(sector_corners(&[1, 0], &[-1, 0]), vec![[1, 1], [-1, 1]]);
        assert_eq!(sector_corners(&[1, 1], &[-1, 1]), Vec::<[i64; 2]>::new());
        assert_eq!(sector_corners(&[0, -1], &[0, -1]), vec![[1, -1], [1, 1], [-1, 1], [-1, -1]]);
    }

    #[test]
    fn edge_points_lie_on_the_square() {
        assert_eq!(to_edge(&[1, -1]), vec![qi(2), qi(-2)]);
        assert_eq!(to_edge(&[1, 2]), vec![qi(1), qi(2)]);
        assert_eq!(xy(&[q(1, 3), qi(1)]), ("0.333333".to_string(), "-1.000000".to_string()));
    }
}
