//! Report emission: canonical JSON (sorted keys, full float precision),
//! aligned text tables at six decimals, CSV matrices, and minimal SVG
//! confusion heatmaps. File writes are atomic (temp file + rename) so
//! repeated runs with the same inputs are byte-identical on disk.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::channel::ChannelMatrix;
use crate::error::Result;
use crate::labelbits::LabelBitsReport;

/// Serializes any value to pretty JSON with keys in sorted order and a
/// trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // Round-tripping through Value sorts object keys (BTreeMap ordering).
    let v = serde_json::to_value(value)?;
    let mut s = serde_json::to_string_pretty(&v)?;
    s.push('\n');
    Ok(s)
}

/// Writes `content` to `path` atomically: a temp file in the same directory
/// is renamed over the target.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = std::path::PathBuf::from(tmp);
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Aligned text table of label-bits rows, one per task: channel parameters
/// (null/alternative class accuracies and within-class subclass
/// accuracies), then the derived quantities.
pub fn label_bits_table(rows: &[(String, &LabelBitsReport)]) -> String {
    let headers = [
        "task",
        "P_H0",
        "P_H1",
        "P_H00",
        "P_H11",
        "K",
        "alpha*",
        "class bits",
        "subclass bits",
        "total bits",
        "tight",
    ];
    let fmt_opt = |v: Option<f64>| match v {
        Some(x) => format!("{x:.6}"),
        None => "-".to_string(),
    };
    let mut table: Vec<Vec<String>> = vec![headers.iter().map(|s| s.to_string()).collect()];
    for (name, r) in rows {
        let params = r.binary_params.as_ref();
        table.push(vec![
            name.clone(),
            fmt_opt(params.map(|p| p.p0)),
            fmt_opt(params.map(|p| p.p1)),
            fmt_opt(params.and_then(|p| p.null_subclass_accuracy)),
            fmt_opt(params.and_then(|p| p.alt_subclass_accuracy)),
            fmt_opt(r.k_factor),
            fmt_opt(r.alpha_star),
            format!("{:.6}", r.class_bits),
            format!("{:.6}", r.subclass_bits),
            format!("{:.6}", r.total_bits),
            if r.bound_tight { "yes" } else { "no" }.to_string(),
        ]);
    }
    render_table(&table)
}

fn render_table(rows: &[Vec<String>]) -> String {
    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for (i, row) in rows.iter().enumerate() {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        let _ = writeln!(out, "{}", line.join("  "));
        if i == 0 {
            let total: usize = widths.iter().sum::<usize>() + 2 * (cols - 1);
            let _ = writeln!(out, "{}", "-".repeat(total));
        }
    }
    out
}

/// Minimal SVG heatmap of a row-normalized confusion matrix: shaded cells
/// with six-decimal values, row labels for true classes, column labels for
/// predictions.
pub fn confusion_heatmap_svg(
    matrix: &ChannelMatrix,
    row_labels: &[String],
    col_labels: &[String],
    title: &str,
) -> String {
    const CELL: f64 = 86.0;
    const LEFT: f64 = 110.0;
    const TOP: f64 = 58.0;
    let n = matrix.n_inputs();
    let m = matrix.n_outputs();
    let width = LEFT + m as f64 * CELL + 18.0;
    let height = TOP + n as f64 * CELL + 20.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width:.0}\" height=\"{height:.0}\" viewBox=\"0 0 {width:.0} {height:.0}\">"
    );
    let _ = writeln!(
        svg,
        "  <text x=\"{:.1}\" y=\"20\" font-family=\"monospace\" font-size=\"15\" text-anchor=\"middle\">{}</text>",
        LEFT + m as f64 * CELL / 2.0,
        escape(title)
    );
    for (j, label) in col_labels.iter().enumerate() {
        let _ = writeln!(
            svg,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\">{}</text>",
            LEFT + (j as f64 + 0.5) * CELL,
            TOP - 8.0,
            escape(label)
        );
    }
    for (i, row_label) in row_labels.iter().enumerate().take(n) {
        let _ = writeln!(
            svg,
            "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"end\">{}</text>",
            LEFT - 8.0,
            TOP + (i as f64 + 0.56) * CELL,
            escape(row_label)
        );
        for j in 0..m {
            let v = matrix.get(i, j);
            // White at 0 through a dark blue at 1; text flips for contrast.
            let shade = (255.0 - 185.0 * v) as u8;
            let blue = (255.0 - 90.0 * v) as u8;
            let x = LEFT + j as f64 * CELL;
            let y = TOP + i as f64 * CELL;
            let _ = writeln!(
                svg,
                "  <rect x=\"{x:.1}\" y=\"{y:.1}\" width=\"{CELL:.1}\" height=\"{CELL:.1}\" fill=\"rgb({shade},{shade},{blue})\" stroke=\"#777\"/>"
            );
            let text_color = if v > 0.55 { "#ffffff" } else { "#111111" };
            let _ = writeln!(
                svg,
                "  <text x=\"{:.1}\" y=\"{:.1}\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" fill=\"{text_color}\">{v:.6}</text>",
                x + CELL / 2.0,
                y + CELL / 2.0 + 4.0
            );
        }
    }
    let _ = writeln!(svg, "</svg>");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    #[test]
    fn canonical_json_sorts_keys() {
        #[derive(Serialize)]
        struct Sample {
            zeta: f64,
            alpha: f64,
        }
        let json = to_canonical_json(&Sample { zeta: 1.0, alpha: 2.0 }).unwrap();
        let a = json.find("\"alpha\"").unwrap();
        let z = json.find("\"zeta\"").unwrap();
        assert!(a < z, "keys not sorted: {json}");
        assert!(json.ends_with('\n'));
    }

    #[test]
    fn canonical_json_is_stable() {
        let mut map = BTreeMap::new();
        map.insert("x", vec![0.1, 0.2, 1.0 / 3.0]);
        let a = to_canonical_json(&map).unwrap();
        let b = to_canonical_json(&map).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn atomic_write_round_trip() {
        let dir = std::env::temp_dir().join(format!("skd-report-test-{}", std::process::id()));
        let path = dir.join("nested/out.json");
        write_atomic(&path, "{}\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "{}\n");
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn heatmap_contains_cells_and_labels() {
        let m = ChannelMatrix::bac(0.9, 0.8).unwrap();
        let svg = confusion_heatmap_svg(
            &m,
            &["hp".into(), "ssa".into()],
            &["hp".into(), "ssa".into()],
            "test matrix",
        );
        assert!(svg.contains("<svg"));
        assert_eq!(svg.matches("<rect").count(), 4);
        assert!(svg.contains("0.900000"));
        assert!(svg.contains("ssa"));
    }

    #[test]
    fn table_renders_aligned() {
        let report = crate::labelbits::label_bits_balanced(2, 2, 1.0, 1.0).unwrap();
        let table = label_bits_table(&[("demo".into(), &report)]);
        assert!(table.contains("total bits"));
        assert!(table.contains("2.000000"));
    }
}
