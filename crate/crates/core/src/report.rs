//! HTML result montage and SVG polygon dumps.

use std::fmt::Write as _;

use base64::engine::general_purpose::STANDARD;
use base64::Engine as _;

use crate::cover::{IsoPolygon, PolygonKind};
use crate::error::Result;
use crate::matcher::RankedResult;
use crate::raster::BinaryRaster;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn img_tag(r: &BinaryRaster) -> Result<String> {
    let png = STANDARD.encode(r.encode_png()?);
    Ok(format!(
        "<img width=\"{}\" height=\"{}\" src=\"data:image/png;base64,{png}\">",
        r.width(),
        r.height()
    ))
}

/// Self-contained HTML page showing the query next to its ranked results.
/// Results whose image is unavailable get a placeholder.
pub fn html_report(
    query_name: &str,
    query: &BinaryRaster,
    results: &[(RankedResult, Option<BinaryRaster>)],
) -> Result<String> {
    let mut s = String::new();
    s.push_str("<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\n");
    writeln!(s, "<title>Results for {}</title>", escape(query_name)).unwrap();
    s.push_str(
        "<style>body{font-family:sans-serif}figure{display:inline-block;margin:8px;\
         text-align:center;vertical-align:top}img{border:1px solid #999;\
         image-rendering:pixelated}.query img{border:2px solid #c00}</style>\n",
    );
    s.push_str("</head><body>\n");
    writeln!(
        s,
        "<figure class=\"query\">{}<figcaption>query<br>{}</figcaption></figure>",
        img_tag(query)?,
        escape(query_name)
    )
    .unwrap();
    for (rank, (r, img)) in results.iter().enumerate() {
        let pic = match img {
            Some(img) => img_tag(img)?,
            None => "<div>(image not found)</div>".to_string(),
        };
        writeln!(
            s,
            "<figure>{pic}<figcaption>#{} {}<br>votes {} distance {:.3}</figcaption></figure>",
            rank + 1,
            escape(&r.image_id),
            r.votes,
            r.tiebreak_distance
        )
        .unwrap();
    }
    s.push_str("</body></html>\n");
    Ok(s)
}

/// One closed path per polygon over a faint copy of the raster. Primaries
/// are solid, holes dashed.
pub fn polygons_svg(raster: &BinaryRaster, polys: &[IsoPolygon]) -> String {
    let (w, h) = (raster.width(), raster.height());
    let mut s = String::new();
    writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">"
    )
    .unwrap();
    writeln!(s, "<rect width=\"{w}\" height=\"{h}\" fill=\"white\"/>").unwrap();
    s.push_str("<g fill=\"#ccc\">");
    for y in 0..h {
        let mut x = 0;
        while x < w {
            if raster.get(x, y) {
                let start = x;
                while x < w && raster.get(x, y) {
                    x += 1;
                }
                write!(
                    s,
                    "<rect x=\"{start}\" y=\"{y}\" width=\"{}\" height=\"1\"/>",
                    x - start
                )
                .unwrap();
            } else {
                x += 1;
            }
        }
    }
    s.push_str("</g>\n");
    for p in polys {
        let mut d = String::new();
        for (i, (x, y)) in p.vertices.iter().enumerate() {
            write!(d, "{}{x} {y} ", if i == 0 { 'M' } else { 'L' }).unwrap();
        }
        d.push('Z');
        let (color, dash) = match p.kind {
            PolygonKind::Primary => ("#0050c8", ""),
            PolygonKind::Hole => ("#c80000", " stroke-dasharray=\"4 2\""),
        };
        writeln!(
            s,
            "<path id=\"poly{}\" d=\"{d}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"1\"{dash}/>",
            p.id
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    s
}
