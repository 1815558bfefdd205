//! Deterministic SVG rendering of linear and circular palette diagrams.
//!
//! Output is byte-stable: identical inputs produce identical documents.
//! Coordinates are emitted with three decimal places and element order is
//! fixed, so documents can be golden-tested.

use std::f64::consts::PI;

use crate::data::DataMatrix;
use crate::embedding::{AngularEmbedding, LinearOrdering};
use crate::error::{PaletteError, Result};

/// Geometry and colors for a diagram.
#[derive(Debug, Clone)]
pub struct DiagramStyle {
    pub width: f64,
    pub height: f64,
    /// Radius of the central MAP disc (circular diagram).
    pub map_radius: f64,
    /// Inner radius of the category ring annulus.
    pub inner_radius: f64,
    /// Outer radius of the category ring annulus.
    pub outer_radius: f64,
    /// One fill color per category.
    pub palette: Vec<String>,
    pub background: String,
}

impl DiagramStyle {
    /// Default 1000x1000 canvas with an evenly spaced hue palette for `k`
    /// categories.
    pub fn for_categories(k: usize) -> Self {
        DiagramStyle {
            width: 1000.0,
            height: 1000.0,
            map_radius: 120.0,
            inner_radius: 150.0,
            outer_radius: 480.0,
            palette: assign_colors(k),
            background: "#ffffff".to_string(),
        }
    }

    fn validate(&self, k: usize) -> Result<()> {
        let dims_ok = self.width.is_finite()
            && self.height.is_finite()
            && self.width > 0.0
            && self.height > 0.0;
        if !dims_ok {
            return Err(PaletteError::InvalidStyle(format!(
                "canvas {}x{} is not positive",
                self.width, self.height
            )));
        }
        let limit = self.width.min(self.height) / 2.0;
        let radii_ok = self.map_radius > 0.0
            && self.map_radius < self.inner_radius
            && self.inner_radius < self.outer_radius
            && self.outer_radius <= limit;
        if !radii_ok {
            return Err(PaletteError::InvalidStyle(format!(
                "radii must satisfy 0 < map ({}) < inner ({}) < outer ({}) <= {limit}",
                self.map_radius, self.inner_radius, self.outer_radius
            )));
        }
        if self.palette.len() != k {
            return Err(PaletteError::InvalidStyle(format!(
                "palette has {} colors for {} categories",
                self.palette.len(),
                k
            )));
        }
        Ok(())
    }
}

/// A rendered SVG document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SvgDocument {
    xml_text: String,
}

impl SvgDocument {
    pub fn as_str(&self) -> &str {
        &self.xml_text
    }

    pub fn into_string(self) -> String {
        self.xml_text
    }

    #[cfg(test)]
    pub(crate) fn default_for_tests() -> Self {
        SvgDocument {
            xml_text: String::new(),
        }
    }
}

/// Category indices ordered outermost-to-innermost: ascending column sum,
/// ties by lower category index. Categories with small totals go to the
/// outer rings, where area amplification would otherwise exaggerate them.
pub fn layer_order(m: &DataMatrix) -> Vec<usize> {
    let k = m.n_cols();
    let sums: Vec<f64> = (0..k).map(|c| m.column_sum(c)).collect();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| sums[a].total_cmp(&sums[b]).then(a.cmp(&b)));
    order
}

/// Dominant category per dataset (argmax, ties to the lowest index).
pub fn map_categories(m: &DataMatrix) -> Vec<usize> {
    m.rows()
        .iter()
        .map(|row| {
            let mut best = 0;
            for (k, &v) in row.iter().enumerate() {
                if v > row[best] {
                    best = k;
                }
            }
            best
        })
        .collect()
}

/// `k` evenly spaced hues (saturation 65%, lightness 50%) as hex colors.
pub fn assign_colors(k: usize) -> Vec<String> {
    (0..k)
        .map(|i| {
            let hue = 360.0 * i as f64 / k as f64;
            let (r, g, b) = hsl_to_rgb(hue, 0.65, 0.5);
            format!("#{r:02x}{g:02x}{b:02x}")
        })
        .collect()
}

fn hsl_to_rgb(h: f64, s: f64, l: f64) -> (u8, u8, u8) {
    let c = (1.0 - (2.0 * l - 1.0).abs()) * s;
    let hp = h / 60.0;
    let x = c * (1.0 - (hp.rem_euclid(2.0) - 1.0).abs());
    let (r1, g1, b1) = match hp as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    let m = l - c / 2.0;
    let to_byte = |v: f64| ((v + m) * 255.0).round() as u8;
    (to_byte(r1), to_byte(g1), to_byte(b1))
}

fn fmt3(x: f64) -> String {
    let s = format!("{x:.3}");
    if s == "-0.000" {
        "0.000".to_string()
    } else {
        s
    }
}

fn xml_escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

fn document(style: &DiagramStyle, body: &str) -> SvgDocument {
    let xml_text = format!(
        concat!(
            "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n",
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" ",
            "viewBox=\"0 0 {w} {h}\">\n",
            "<rect width=\"{w}\" height=\"{h}\" fill=\"{bg}\"/>\n",
            "{body}</svg>\n"
        ),
        w = fmt3(style.width),
        h = fmt3(style.height),
        bg = style.background,
        body = body,
    );
    SvgDocument { xml_text }
}

fn layer_title(m: &DataMatrix, category: usize) -> String {
    match m.category_names() {
        Some(names) => format!("<title>{}</title>", xml_escape(&names[category])),
        None => String::new(),
    }
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(PaletteError::DimensionMismatch {
            got: perm.len(),
            expected: n,
        });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(PaletteError::InvalidParams(
                "ordering is not a permutation".into(),
            ));
        }
        seen[p] = true;
    }
    Ok(())
}

/// Render the linear palette diagram: one stacked band per category over
/// the datasets placed left-to-right in `ordering` order, stacked around a
/// silhouette baseline at minus half the stacked total.
pub fn render_linear(
    m: &DataMatrix,
    ordering: &LinearOrdering,
    style: &DiagramStyle,
) -> Result<SvgDocument> {
    let n = m.n_rows();
    let k = m.n_cols();
    if n < 2 {
        return Err(PaletteError::TooFewPoints { n, min: 2 });
    }
    style.validate(k)?;
    check_permutation(&ordering.permutation, n)?;

    let totals: Vec<f64> = ordering
        .permutation
        .iter()
        .map(|&i| m.row(i).iter().sum())
        .collect();
    let max_total = totals.iter().copied().fold(0.0, f64::max);
    let scale = if max_total > 0.0 {
        style.height / max_total
    } else {
        0.0
    };
    let xs: Vec<f64> = (0..n)
        .map(|slot| style.width * slot as f64 / (n - 1) as f64)
        .collect();
    let y_of = |v: f64| style.height / 2.0 - v * scale;

    // Cumulative stack bottom per slot, starting at the silhouette
    // baseline -total/2.
    let mut bottoms: Vec<f64> = totals.iter().map(|t| -t / 2.0).collect();
    let mut body = String::new();
    for c in 0..k {
        let tops: Vec<f64> = (0..n)
            .map(|slot| bottoms[slot] + m.row(ordering.permutation[slot])[c])
            .collect();
        let mut path = String::new();
        for (slot, &x) in xs.iter().enumerate() {
            let cmd = if slot == 0 { 'M' } else { 'L' };
            path.push_str(&format!("{cmd} {} {} ", fmt3(x), fmt3(y_of(tops[slot]))));
        }
        for slot in (0..n).rev() {
            path.push_str(&format!(
                "L {} {} ",
                fmt3(xs[slot]),
                fmt3(y_of(bottoms[slot]))
            ));
        }
        path.push('Z');
        body.push_str(&format!(
            "<g id=\"layer-{c}\">{}<path d=\"{path}\" fill=\"{}\"/></g>\n",
            layer_title(m, c),
            style.palette[c],
        ));
        bottoms = tops;
    }
    Ok(document(style, &body))
}

/// Render the circular palette diagram: per-category rings (outermost ring
/// holds the smallest-sum category, each ring scaled to its own maximum)
/// plus a central disc of sectors colored by each dataset's dominant
/// category.
pub fn render_circular(
    m: &DataMatrix,
    embedding: &AngularEmbedding,
    style: &DiagramStyle,
) -> Result<SvgDocument> {
    let n = m.n_rows();
    let k = m.n_cols();
    if n < 3 {
        return Err(PaletteError::TooFewPoints { n, min: 3 });
    }
    if embedding.theta().len() != n {
        return Err(PaletteError::DimensionMismatch {
            got: embedding.theta().len(),
            expected: n,
        });
    }
    style.validate(k)?;

    let cx = style.width / 2.0;
    let cy = style.height / 2.0;
    let point = |angle: f64, radius: f64| -> (f64, f64) {
        (cx + radius * angle.cos(), cy - radius * angle.sin())
    };

    // Datasets sorted by angle; all curves and sectors follow this order.
    let theta = embedding.theta();
    let mut seq: Vec<usize> = (0..n).collect();
    seq.sort_by(|&a, &b| theta[a].total_cmp(&theta[b]).then(a.cmp(&b)));

    let ring_thickness = (style.outer_radius - style.inner_radius) / k as f64;
    let mut body = String::new();
    for (slot, &category) in layer_order(m).iter().enumerate() {
        let r_out = style.outer_radius - slot as f64 * ring_thickness;
        let r_in = r_out - ring_thickness;
        let col_max = m.rows().iter().map(|r| r[category]).fold(0.0, f64::max);

        // Value curve, then the ring's inner edge reversed; evenodd leaves
        // the area between them filled.
        let mut path = String::new();
        for (pos, &i) in seq.iter().enumerate() {
            let fraction = if col_max > 0.0 {
                m.row(i)[category] / col_max
            } else {
                0.0
            };
            let (x, y) = point(theta[i], r_in + fraction * ring_thickness);
            let cmd = if pos == 0 { 'M' } else { 'L' };
            path.push_str(&format!("{cmd} {} {} ", fmt3(x), fmt3(y)));
        }
        path.push_str("Z ");
        for (pos, &i) in seq.iter().rev().enumerate() {
            let (x, y) = point(theta[i], r_in);
            let cmd = if pos == 0 { 'M' } else { 'L' };
            path.push_str(&format!("{cmd} {} {} ", fmt3(x), fmt3(y)));
        }
        path.push('Z');
        body.push_str(&format!(
            "<g id=\"layer-{category}\">{}<path d=\"{path}\" fill=\"{}\" fill-rule=\"evenodd\"/></g>\n",
            layer_title(m, category),
            style.palette[category],
        ));
    }

    // Central MAP disc: one sector per dataset, boundaries at midpoints
    // between neighboring angles.
    let map = map_categories(m);
    let sorted_angles: Vec<f64> = seq.iter().map(|&i| theta[i]).collect();
    let mut boundaries = Vec::with_capacity(n);
    for p in 0..n - 1 {
        boundaries.push((sorted_angles[p] + sorted_angles[p + 1]) / 2.0);
    }
    boundaries.push((sorted_angles[n - 1] + sorted_angles[0] + 2.0 * PI) / 2.0);

    body.push_str("<g id=\"map-disc\">");
    for (pos, &i) in seq.iter().enumerate() {
        let start = if pos == 0 {
            boundaries[n - 1] - 2.0 * PI
        } else {
            boundaries[pos - 1]
        };
        let end = boundaries[pos];
        let (sx, sy) = point(start, style.map_radius);
        let (ex, ey) = point(end, style.map_radius);
        let large_arc = if end - start > PI { 1 } else { 0 };
        // Angles increase counterclockwise on screen, which is sweep=0 in
        // SVG's y-down frame.
        body.push_str(&format!(
            "<path d=\"M {cx} {cy} L {sx} {sy} A {r} {r} 0 {large_arc} 0 {ex} {ey} Z\" fill=\"{color}\"/>",
            cx = fmt3(cx),
            cy = fmt3(cy),
            sx = fmt3(sx),
            sy = fmt3(sy),
            r = fmt3(style.map_radius),
            ex = fmt3(ex),
            ey = fmt3(ey),
            color = style.palette[map[i]],
        ));
    }
    body.push_str("</g>\n");
    Ok(document(style, &body))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::{optimize_angles, SgdParams};
    use crate::geodesic::DistanceMatrix;

    fn matrix(rows: &[&[f64]]) -> DataMatrix {
        DataMatrix::new(rows.iter().map(|r| r.to_vec()).collect(), None).unwrap()
    }

    #[test]
    fn layer_order_by_column_sum() {
        let m = matrix(&[&[1.0, 2.0, 1.0], &[1.0, 3.0, 0.0]]);
        // Column sums [2, 5, 1].
        assert_eq!(layer_order(&m), vec![2, 0, 1]);
    }

    #[test]
    fn layer_order_tie_break_and_single() {
        let m = matrix(&[&[1.0, 1.0]]);
        assert_eq!(layer_order(&m), vec![0, 1]);
        let m = matrix(&[&[4.0]]);
        assert_eq!(layer_order(&m), vec![0]);
    }

    #[test]
    fn map_categories_argmax() {
        let m = matrix(&[&[0.1, 0.7, 0.2]]);
        assert_eq!(map_categories(&m), vec![1]);
        let m = matrix(&[&[0.5, 0.5]]);
        assert_eq!(map_categories(&m), vec![0]);
        let m = matrix(&[&[1.0, 0.0], &[0.0, 1.0]]);
        assert_eq!(map_categories(&m), vec![0, 1]);
    }

    #[test]
    fn colors_evenly_spaced_hues() {
        assert_eq!(assign_colors(2), vec!["#d22d2d", "#2dd2d2"]);
        assert_eq!(assign_colors(1), vec!["#d22d2d"]);
        assert_eq!(assign_colors(3), assign_colors(3));
    }

    #[test]
    fn linear_band_count() {
        let m = matrix(&[&[1.0, 2.0], &[2.0, 1.0], &[1.0, 1.0]]);
        let ordering = LinearOrdering {
            permutation: vec![0, 1, 2],
            coordinate: vec![0.0, 1.0, 2.0],
        };
        let svg = render_linear(&m, &ordering, &DiagramStyle::for_categories(2)).unwrap();
        assert_eq!(svg.as_str().matches("<path").count(), 2);
        assert_eq!(svg.as_str().matches("<g id=\"layer-").count(), 2);
    }

    #[test]
    fn linear_too_few_points() {
        let m = matrix(&[&[1.0, 2.0]]);
        let ordering = LinearOrdering {
            permutation: vec![0],
            coordinate: vec![0.0],
        };
        assert!(matches!(
            render_linear(&m, &ordering, &DiagramStyle::for_categories(2)).unwrap_err(),
            PaletteError::TooFewPoints { n: 1, min: 2 }
        ));
    }

    #[test]
    fn linear_rejects_bad_permutation() {
        let m = matrix(&[&[1.0], &[2.0], &[3.0]]);
        let style = DiagramStyle::for_categories(1);
        let short = LinearOrdering {
            permutation: vec![0, 1],
            coordinate: vec![0.0; 3],
        };
        assert!(matches!(
            render_linear(&m, &short, &style).unwrap_err(),
            PaletteError::DimensionMismatch { .. }
        ));
        let dup = LinearOrdering {
            permutation: vec![0, 0, 1],
            coordinate: vec![0.0; 3],
        };
        assert!(matches!(
            render_linear(&m, &dup, &style).unwrap_err(),
            PaletteError::InvalidParams(_)
        ));
    }

    #[test]
    fn circular_structure_counts() {
        let m = matrix(&[
            &[1.0, 0.0, 2.0],
            &[0.0, 1.0, 2.0],
            &[2.0, 1.0, 0.0],
            &[1.0, 1.0, 1.0],
        ]);
        let d = crate::geodesic::pairwise_distances(&m);
        let e = optimize_angles(&d, &SgdParams::default()).unwrap();
        let svg = render_circular(&m, &e, &DiagramStyle::for_categories(3)).unwrap();
        let text = svg.as_str();
        assert_eq!(text.matches("<g id=\"layer-").count(), 3);
        assert_eq!(text.matches("<g id=\"map-disc\">").count(), 1);
        let disc = &text[text.find("map-disc").unwrap()..];
        assert_eq!(disc[..disc.find("</g>").unwrap()].matches("<path").count(), 4);
    }

    #[test]
    fn circular_too_few_points() {
        let m = matrix(&[&[1.0], &[2.0]]);
        let e = optimize_angles(&DistanceMatrix::zeros(2), &SgdParams::default());
        // Build a 2-angle embedding through the optimizer, then reject at
        // render time.
        let e = e.unwrap();
        assert!(matches!(
            render_circular(&m, &e, &DiagramStyle::for_categories(1)).unwrap_err(),
            PaletteError::TooFewPoints { n: 2, min: 3 }
        ));
    }

    #[test]
    fn circular_byte_identical() {
        let m = matrix(&[&[1.0, 3.0], &[2.0, 1.0], &[0.5, 0.5], &[4.0, 0.1]]);
        let d = crate::geodesic::pairwise_distances(&m);
        let e = optimize_angles(&d, &SgdParams::default()).unwrap();
        let style = DiagramStyle::for_categories(2);
        let a = render_circular(&m, &e, &style).unwrap();
        let b = render_circular(&m, &e, &style).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn style_validation() {
        let m = matrix(&[&[1.0], &[2.0], &[3.0]]);
        let mut style = DiagramStyle::for_categories(1);
        style.inner_radius = 100.0; // below map_radius
        let d = crate::geodesic::pairwise_distances(&m);
        let e = optimize_angles(&d, &SgdParams::default()).unwrap();
        assert!(matches!(
            render_circular(&m, &e, &style).unwrap_err(),
            PaletteError::InvalidStyle(_)
        ));
        let style = DiagramStyle::for_categories(2); // wrong palette length
        assert!(matches!(
            render_circular(&m, &e, &style).unwrap_err(),
            PaletteError::InvalidStyle(_)
        ));
    }

    #[test]
    fn fmt3_negative_zero() {
        assert_eq!(fmt3(-0.00004), "0.000");
        assert_eq!(fmt3(-0.0006), "-0.001");
        assert_eq!(fmt3(12.3), "12.300");
    }
}
