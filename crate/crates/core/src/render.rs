//! SVG drawings of partitions and GIET graphs, 1000 units per unit length.

use std::fmt::Write;

use crate::giet::Giet;
use crate::io::AtomRecord;

pub const SCALE: f64 = 1000.0;
const MARGIN: f64 = 40.0;

const PALETTE: [&str; 8] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
];

fn color(letter: usize) -> &'static str {
    PALETTE[letter % PALETTE.len()]
}

/// One row of cells, left to right, each labeled `(α,i)`.
///
/// `letters` fixes the color of each letter name.
pub fn partition_svg(atoms: &[AtomRecord], letters: &[String]) -> String {
    let total = atoms.iter().map(|a| a.hi).fold(0.0, f64::max);
    let width = total * SCALE + 2.0 * MARGIN;
    let height = 120.0 + 2.0 * MARGIN;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width:.3}" height="{height:.3}" viewBox="0 0 {width:.3} {height:.3}">"#
    )
    .unwrap();
    writeln!(s, r#"<g font-family="sans-serif" font-size="14" text-anchor="middle">"#).unwrap();
    for atom in atoms {
        let (l, i) = match &atom.tower {
            Some((l, i)) => (l.as_str(), *i),
            None => (atom.letter.as_str(), atom.index as i64),
        };
        let x = MARGIN + atom.lo * SCALE;
        let w = (atom.hi - atom.lo) * SCALE;
        let c = color(letters.iter().position(|l| *l == atom.letter).unwrap_or(0));
        writeln!(
            s,
            r#"<rect class="atom" data-label="{l}{i}" x="{x:.3}" y="{y:.3}" width="{w:.3}" height="60" fill="{c}" fill-opacity="0.35" stroke="black"/>"#,
            y = MARGIN + 30.0,
        )
        .unwrap();
        writeln!(
            s,
            r#"<text x="{tx:.3}" y="{ty:.3}">({l},{i})</text>"#,
            tx = x + w / 2.0,
            ty = MARGIN + 65.0,
        )
        .unwrap();
    }
    s.push_str("</g>\n</svg>\n");
    s
}

/// The graph of `f` in `[0, L]²`: one arc per branch, with dashed lines at
/// the top and bottom breakpoints.
pub fn giet_svg(f: &Giet, samples: usize) -> String {
    let l = f.length();
    let side = l * SCALE;
    let size = side + 2.0 * MARGIN;
    let px = |x: f64| MARGIN + x * SCALE;
    let py = |y: f64| MARGIN + side - y * SCALE;
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size:.3}" height="{size:.3}" viewBox="0 0 {size:.3} {size:.3}">"#
    )
    .unwrap();
    writeln!(
        s,
        r#"<rect x="{m:.3}" y="{m:.3}" width="{side:.3}" height="{side:.3}" fill="none" stroke="black"/>"#,
        m = MARGIN
    )
    .unwrap();
    for x in f.top_breaks().iter().filter(|&&x| x > 0.0 && x < l) {
        writeln!(
            s,
            r#"<line x1="{x:.3}" y1="{a:.3}" x2="{x:.3}" y2="{b:.3}" stroke="gray" stroke-dasharray="4 4"/>"#,
            x = px(*x),
            a = py(0.0),
            b = py(l)
        )
        .unwrap();
    }
    for y in f.bottom_breaks().iter().filter(|&&y| y > 0.0 && y < l) {
        writeln!(
            s,
            r#"<line x1="{a:.3}" y1="{y:.3}" x2="{b:.3}" y2="{y:.3}" stroke="gray" stroke-dasharray="4 4"/>"#,
            y = py(*y),
            a = px(0.0),
            b = px(l)
        )
        .unwrap();
    }
    for (letter, arc) in f.graph_samples(samples).iter().enumerate() {
        let points: Vec<String> = arc
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", px(x), py(y)))
            .collect();
        writeln!(
            s,
            r#"<polyline class="branch" data-letter="{name}" points="{pts}" fill="none" stroke="{c}" stroke-width="2"/>"#,
            name = f.datum().letter(letter),
            pts = points.join(" "),
            c = color(letter)
        )
        .unwrap();
        let mid = arc[arc.len() / 2];
        writeln!(
            s,
            r#"<text x="{x:.3}" y="{y:.3}" font-family="sans-serif" font-size="16">{name}</text>"#,
            x = px(mid.0) + 6.0,
            y = py(mid.1) - 6.0,
            name = f.datum().letter(letter)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::CombinatorialDatum;
    use crate::exact_iet::{ratio, ExactIet};
    use crate::combinatorics::RauzyPath;
    use crate::io::Document;
    use crate::thurston::RefConfig;

    fn t_gamma() -> ExactIet {
        let p = CombinatorialDatum::parse("A B C D", "D C B A").unwrap();
        ExactIet::new(p, vec![ratio(6, 11), ratio(2, 11), ratio(1, 11), ratio(2, 11)]).unwrap()
    }

    #[test]
    fn partition_cells_in_order() {
        let t = t_gamma();
        let p = t.dynamical_partition(5).unwrap();
        let reference = RefConfig::build(&RauzyPath::from_kinds(t.datum().clone(), "bbbtb").unwrap()).unwrap();
        let doc = Document::from_exact_partition(t.datum(), &p)
            .with_tower_labels(&reference)
            .unwrap();
        let Document::Partition { atoms, .. } = doc else { unreachable!() };
        let svg = partition_svg(&atoms, t.datum().alphabet());
        let labels: Vec<&str> = svg
            .match_indices("data-label=\"")
            .map(|(i, m)| {
                let rest = &svg[i + m.len()..];
                &rest[..rest.find('"').unwrap()]
            })
            .collect();
        assert_eq!(labels, ["A0", "A3", "C1", "B1", "C3", "A1", "B0", "C2", "C0", "D0", "A2"]);
        assert!(svg.contains("(A,3)"));
        assert!(svg.contains(r#"width="1080.000""#));
    }

    #[test]
    fn order_zero_cells() {
        let t = t_gamma();
        let p = t.dynamical_partition(0).unwrap();
        let Document::Partition { atoms, .. } = Document::from_exact_partition(t.datum(), &p) else {
            unreachable!()
        };
        let svg = partition_svg(&atoms, t.datum().alphabet());
        assert_eq!(svg.matches("<rect").count(), 4);
        for l in ["(A,0)", "(B,0)", "(C,0)", "(D,0)"] {
            assert!(svg.contains(l));
        }
    }

    #[test]
    fn one_arc_per_letter() {
        let svg = giet_svg(&Giet::from_iet(&t_gamma()), 16);
        assert_eq!(svg.matches("<polyline").count(), 4);
    }
}
