//! SVG pictures of a torus dimer's fundamental domain and its matching
//! polygon. The layout is best effort: given vertex positions are used,
//! otherwise a barycentric relaxation on the torus.

use std::fmt::Write as _;

use num_traits::ToPrimitive;

use crate::dimer::{DimerModel, Sign, TopologyError};
use crate::lattice::Point;
use crate::matching::{MatchingLattice, PerfectMatching};

const SIZE: f64 = 400.0;
const MARGIN: f64 = 20.0;

/// Vertex positions in the unit square and arrow offsets matching them.
/// Without given positions the offsets are changed by an `SL(2, Z)` shear
/// that keeps the drawn arrows short.
pub fn layout(d: &DimerModel) -> Result<(Vec<[f64; 2]>, Vec<Point>), TopologyError> {
    let d = d.with_offsets()?;
    let off = d.offsets().expect("with_offsets sets offsets");
    let n = d.num_vertices();
    let given: Vec<Option<[f64; 2]>> = (0..n)
        .map(|v| {
            d.position(v)
                .map(|[x, y]| [x.to_f64().unwrap_or(0.0), y.to_f64().unwrap_or(0.0)])
        })
        .collect();
    let mut pos: Vec<[f64; 2]> = (0..n)
        .map(|v| {
            given[v].unwrap_or_else(|| {
                let t = v as f64 / n as f64;
                [t, (t * 0.618_033_988_75).fract()]
            })
        })
        .collect();
    let pinned: Vec<bool> = (0..n).map(|v| given[v].is_some() || v == 0).collect();
    for _ in 0..500 {
        for v in 0..n {
            if pinned[v] {
                continue;
            }
            let (mut sx, mut sy, mut w) = (0.0, 0.0, 0.0);
            for a in 0..d.num_arrows() {
                let o = [off[a][0] as f64, off[a][1] as f64];
                if d.tail(a) == v {
                    let h = pos[d.head(a)];
                    sx += h[0] + o[0];
                    sy += h[1] + o[1];
                    w += 1.0;
                }
                if d.head(a) == v {
                    let t = pos[d.tail(a)];
                    sx += t[0] - o[0];
                    sy += t[1] - o[1];
                    w += 1.0;
                }
            }
            if w > 0.0 {
                pos[v] = [sx / w, sy / w];
            }
        }
    }
    let disp: Vec<[f64; 2]> = (0..d.num_arrows())
        .map(|a| {
            let (t, h) = (pos[d.tail(a)], pos[d.head(a)]);
            [h[0] + off[a][0] as f64 - t[0], h[1] + off[a][1] as f64 - t[1]]
        })
        .collect();
    let m = if given.iter().any(Option::is_some) {
        [[1, 0], [0, 1]]
    } else {
        shortening_shear(&disp)
    };
    let apply = |p: [f64; 2]| {
        [
            m[0][0] as f64 * p[0] + m[0][1] as f64 * p[1],
            m[1][0] as f64 * p[0] + m[1][1] as f64 * p[1],
        ]
    };
    // Keep the pinned vertex off the corner of the square.
    let margin = if given.iter().any(Option::is_some) { 0.0 } else { 0.5 / (n as f64).sqrt() };
    let pos: Vec<[f64; 2]> = pos
        .into_iter()
        .map(|p| {
            let [x, y] = apply(p);
            [(x + margin).rem_euclid(1.0), (y + margin).rem_euclid(1.0)]
        })
        .collect();
    let offsets = (0..d.num_arrows())
        .map(|a| {
            let v = apply(disp[a]);
            let (t, h) = (pos[d.tail(a)], pos[d.head(a)]);
            [(v[0] - h[0] + t[0]).round() as i64, (v[1] - h[1] + t[1]).round() as i64]
        })
        .collect();
    Ok((pos, offsets))
}

/// Greedy search for an `SL(2, Z)` matrix reducing the total squared length
/// of the given vectors.
fn shortening_shear(vs: &[[f64; 2]]) -> [[i64; 2]; 2] {
    let cost = |m: &[[i64; 2]; 2]| -> f64 {
        vs.iter()
            .map(|v| {
                let x = m[0][0] as f64 * v[0] + m[0][1] as f64 * v[1];
                let y = m[1][0] as f64 * v[0] + m[1][1] as f64 * v[1];
                x * x + y * y
            })
            .sum()
    };
    let steps: [[[i64; 2]; 2]; 4] = [[[1, 1], [0, 1]], [[1, -1], [0, 1]], [[1, 0], [1, 1]], [[1, 0], [-1, 1]]];
    let mul = |a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]| -> [[i64; 2]; 2] {
        [
            [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
            [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
        ]
    };
    let mut m = [[1, 0], [0, 1]];
    let mut best = cost(&m);
    loop {
        let next = steps
            .iter()
            .map(|s| mul(s, &m))
            .map(|c| (cost(&c), c))
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .expect("four candidates");
        if next.0 >= best - 1e-9 {
            return m;
        }
        best = next.0;
        m = next.1;
    }
}

fn screen(p: [f64; 2]) -> (f64, f64) {
    (MARGIN + p[0] * SIZE, MARGIN + (1.0 - p[1]) * SIZE)
}

/// SVG of the fundamental domain, optionally highlighting a matching, with
/// the matching polygon drawn to the right when given.
pub fn render_svg(
    d: &DimerModel,
    highlight: Option<&PerfectMatching>,
    lattice: Option<&MatchingLattice>,
) -> Result<String, TopologyError> {
    let (pos, off) = layout(d)?;
    let width = 2.0 * MARGIN + SIZE + if lattice.is_some() { SIZE * 0.75 } else { 0.0 };
    let height = 2.0 * MARGIN + SIZE;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(s, "<title>{}</title>", escape(d.name())).unwrap();
    writeln!(
        s,
        r##"<defs><marker id="tip" viewBox="0 0 10 10" refX="9" refY="5" markerUnits="userSpaceOnUse" markerWidth="9" markerHeight="9" orient="auto"><path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker><clipPath id="domain"><rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}"/></clipPath></defs>"##
    )
    .unwrap();
    writeln!(s, r#"<g clip-path="url(#domain)">"#).unwrap();
    // Faces, unrolled from the tail of their first arrow.
    for f in d.faces() {
        let fill = match f.sign {
            Sign::Positive => "#f4c7c3",
            Sign::Negative => "#c6dafc",
        };
        let start = pos[d.tail(f.arrows[0])];
        let mut pts = vec![start];
        let mut cur = start;
        for &a in &f.arrows {
            let t = pos[d.tail(a)];
            let h = pos[d.head(a)];
            cur = [cur[0] + h[0] + off[a][0] as f64 - t[0], cur[1] + h[1] + off[a][1] as f64 - t[1]];
            pts.push(cur);
        }
        for dx in -1..=1 {
            for dy in -1..=1 {
                let path: Vec<String> = pts
                    .iter()
                    .map(|p| {
                        let (x, y) = screen([p[0] + dx as f64, p[1] + dy as f64]);
                        format!("{x:.2},{y:.2}")
                    })
                    .collect();
                writeln!(
                    s,
                    r#"<polygon points="{}" fill="{fill}" fill-opacity="0.6" stroke="none"/>"#,
                    path.join(" ")
                )
                .unwrap();
            }
        }
    }
    for a in 0..d.num_arrows() {
        let t = pos[d.tail(a)];
        let h = pos[d.head(a)];
        let end = [h[0] + off[a][0] as f64, h[1] + off[a][1] as f64];
        let matched = highlight.is_some_and(|m| m.contains(a));
        let (stroke, w) = if matched { ("#d93025", 3.5) } else { ("#333", 1.2) };
        for dx in -1..=1 {
            for dy in -1..=1 {
                let (x1, y1) = screen([t[0] + dx as f64, t[1] + dy as f64]);
                let (x2, y2) = screen([end[0] + dx as f64, end[1] + dy as f64]);
                let len = (x2 - x1).hypot(y2 - y1).max(1e-9);
                let cut = 10.0_f64.min(len / 2.0);
                let (x2, y2) = (x2 - (x2 - x1) * cut / len, y2 - (y2 - y1) * cut / len);
                writeln!(
                    s,
                    r#"<line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="{w}" marker-end="url(#tip)"/>"#
                )
                .unwrap();
            }
        }
    }
    for (v, p) in pos.iter().enumerate() {
        let (x, y) = screen(*p);
        writeln!(
            s,
            r##"<circle cx="{x:.2}" cy="{y:.2}" r="9" fill="white" stroke="#333"/><text x="{x:.2}" y="{:.2}" font-size="10" text-anchor="middle">{}</text>"##,
            y + 3.5,
            escape(d.vertex_label(v))
        )
        .unwrap();
    }
    writeln!(s, "</g>").unwrap();
    writeln!(
        s,
        r##"<rect x="{MARGIN}" y="{MARGIN}" width="{SIZE}" height="{SIZE}" fill="none" stroke="#999" stroke-dasharray="4 3"/>"##
    )
    .unwrap();
    if let Some(lat) = lattice {
        draw_polygon(&mut s, lat, 2.0 * MARGIN + SIZE, MARGIN);
    }
    writeln!(s, "</svg>").unwrap();
    Ok(s)
}

fn draw_polygon(s: &mut String, lat: &MatchingLattice, x0: f64, y0: f64) {
    let xs = lat.points.keys().map(|p| p[0]);
    let ys = lat.points.keys().map(|p| p[1]);
    let (minx, maxx) = (xs.clone().min().unwrap_or(0), xs.max().unwrap_or(0));
    let (miny, maxy) = (ys.clone().min().unwrap_or(0), ys.max().unwrap_or(0));
    let span = ((maxx - minx).max(maxy - miny).max(1)) as f64;
    let unit = SIZE * 0.6 / span;
    let at = |p: Point| -> (f64, f64) {
        (
            x0 + (p[0] - minx) as f64 * unit + 10.0,
            y0 + (maxy - p[1]) as f64 * unit + 10.0,
        )
    };
    let hull: Vec<String> = lat
        .hull
        .iter()
        .map(|&p| {
            let (x, y) = at(p);
            format!("{x:.2},{y:.2}")
        })
        .collect();
    writeln!(
        s,
        r##"<polygon points="{}" fill="#eeeeee" stroke="#333"/>"##,
        hull.join(" ")
    )
    .unwrap();
    for (p, data) in &lat.points {
        let (x, y) = at(*p);
        let fill = if data.stable.len() == 1 { "#333" } else { "#bbb" };
        writeln!(
            s,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="4" fill="{fill}"/><text x="{:.2}" y="{:.2}" font-size="9">{}</text>"#,
            x + 5.0,
            y - 5.0,
            data.matchings.len()
        )
        .unwrap();
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn svg_has_every_arrow_and_vertex() {
        let d = catalog::dimer("p1xp1").unwrap();
        let svg = render_svg(&d, None, None).unwrap();
        assert!(svg.starts_with("<svg"));
        assert_eq!(svg.matches("<line").count(), 9 * d.num_arrows());
        assert_eq!(svg.matches("<circle").count(), d.num_vertices());
    }
}
