//! Emitters: JSON with 17 significant digits, CSV, and SVG projections.

use std::fmt::Write as _;
use std::io;

use serde::Serialize;
use serde_json::ser::Formatter;

/// Writes every finite `f64` as `d.ddddddddddddddddde±x`, which round-trips
/// exactly. Non-finite values never reach the formatter; `serde_json` writes
/// them as `null`.
struct RoundTrip;

impl Formatter for RoundTrip {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(fmt_f64(value).as_bytes())
    }
}

pub fn fmt_f64(v: f64) -> String {
    format!("{:.16e}", v)
}

/// Pretty-free JSON with round-trip floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, RoundTrip);
    value.serialize(&mut ser).expect("in-memory serialization cannot fail");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

/// A CSV cell: numbers at full precision, `null` for undefined values.
pub fn cell(v: Option<f64>) -> String {
    match v {
        Some(x) if x.is_finite() => fmt_f64(x),
        _ => "null".to_string(),
    }
}

pub fn to_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("write to memory");
    for r in rows {
        w.write_record(r).expect("write to memory");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv writes UTF-8")
}

const SIZE: f64 = 800.0;
const MARGIN: f64 = 0.05;
const MARKER_RADIUS: f64 = 4.0;

/// Orthographic projection of polylines onto a fixed 800×800 canvas, fitted
/// to the data bounds with a 5% margin. `y` grows upwards.
pub fn svg(segments: &[Vec<[f64; 2]>], markers: &[[f64; 2]]) -> String {
    let all = segments.iter().flatten().chain(markers);
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for p in all {
        for k in 0..2 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    if !lo[0].is_finite() {
        lo = [-1.0, -1.0];
        hi = [1.0, 1.0];
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-12);
    let usable = SIZE * (1.0 - 2.0 * MARGIN);
    let k = usable / span;
    let off = [
        SIZE * MARGIN + (usable - k * (hi[0] - lo[0])) / 2.0,
        SIZE * MARGIN + (usable - k * (hi[1] - lo[1])) / 2.0,
    ];
    let map = |p: &[f64; 2]| (off[0] + k * (p[0] - lo[0]), SIZE - (off[1] + k * (p[1] - lo[1])));

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {0} {0}" width="{0}" height="{0}">"#,
        SIZE
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for seg in segments.iter().filter(|s| !s.is_empty()) {
        let pts: Vec<String> = seg
            .iter()
            .map(|p| {
                let (x, y) = map(p);
                format!("{:.3},{:.3}", x, y)
            })
            .collect();
        let _ = writeln!(
            out,
            r#"<polyline fill="none" stroke="black" stroke-width="1.5" points="{}"/>"#,
            pts.join(" ")
        );
    }
    for m in markers {
        let (x, y) = map(m);
        let _ = writeln!(
            out,
            r#"<circle cx="{:.3}" cy="{:.3}" r="{}" fill="red"/>"#,
            x, y, MARKER_RADIUS
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for v in [0.1f64, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 0.0] {
            let s = to_json(&v);
            let back: f64 = serde_json::from_str(s.trim()).unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{}", s);
        }
        assert_eq!(to_json(&1.0), "1.0000000000000000e0\n");
        assert_eq!(to_json(&f64::NAN), "null\n");
        assert_eq!(cell(None), "null");
    }

    #[test]
    fn svg_has_fixed_canvas_and_markers() {
        let s = svg(&[vec![[0.0, 0.0], [1.0, 2.0]]], &[[0.5, 1.0]]);
        assert!(s.contains(r#"viewBox="0 0 800 800""#));
        assert!(s.contains(r#"r="4""#));
        assert!(s.contains("<polyline"));
        // bounds map onto the 5% margin
        assert!(s.contains("220.000,760.000 580.000,40.000"), "{}", s);
    }
}
