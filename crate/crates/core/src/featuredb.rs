//! The information table, persisted as CSV.
//!
//! Layout (UTF-8, LF line endings, no quoting):
//!
//! ```text
//! # roughlogo-features v1: image_id,tp,mp,holes,parents,bw / poly_no,kind,en,hc,pc,vdc,hdc,er,poh,concavity
//! logo_7,3,3,1,2,0.5
//! 1,P,0,0,0,2,2,1,0,
//! 2,H,inv,1,0,2,2,1,2,DLUR
//! 3,P,1,0,0,4,2,1/2,0,U
//! ```
//!
//! Each image row (6 fields) is followed by exactly `tp` polygon rows (10
//! fields). `kind` is `P` or `H`, `en` is `inv` for holes, `er` is one of
//! `1/2`, `1`, `2` and `bw` one of `0.25`, `0.5`, `1`, `2`, `4`.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::cover::PolygonKind;
use crate::error::{Error, Result};
use crate::reduct::{ImageFeature, PolygonAttributes};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "# roughlogo-features v";
const SCHEMA: &str = "image_id,tp,mp,holes,parents,bw / poly_no,kind,en,hc,pc,vdc,hdc,er,poh,concavity";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeatureTable {
    pub version: u32,
    pub entries: Vec<ImageFeature>,
}

impl Default for FeatureTable {
    fn default() -> Self {
        FeatureTable {
            version: FORMAT_VERSION,
            entries: Vec::new(),
        }
    }
}

impl FeatureTable {
    pub fn new(entries: Vec<ImageFeature>) -> Self {
        FeatureTable {
            version: FORMAT_VERSION,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, image_id: &str) -> Option<&ImageFeature> {
        self.entries.iter().find(|e| e.image_id == image_id)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = format!("{MAGIC}{}: {SCHEMA}\n", self.version);
        for f in &self.entries {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                f.image_id, f.tp, f.mp, f.holes, f.parents, f.bw
            )
            .unwrap();
            for p in &f.polys {
                let kind = match p.kind {
                    PolygonKind::Primary => "P",
                    PolygonKind::Hole => "H",
                };
                let en = p.en.map_or_else(|| "inv".to_string(), |e| e.to_string());
                writeln!(
                    out,
                    "{},{kind},{en},{},{},{},{},{},{},{}",
                    p.id, p.hc, p.pc, p.vdc, p.hdc, p.er, p.poh, p.concavity
                )
                .unwrap();
            }
        }
        out
    }

    pub fn serialize(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }

    pub fn parse(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_str(&text, path)
    }

    /// Parses table text; `origin` only labels errors.
    pub fn from_csv_str(text: &str, origin: impl Into<PathBuf>) -> Result<Self> {
        let origin = origin.into();
        let err = |line: usize, reason: String| Error::Parse {
            path: origin.clone(),
            line,
            reason,
        };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| err(1, "missing header line".into()))?;
        let version = header
            .strip_prefix(MAGIC)
            .and_then(|rest| rest.split(':').next())
            .and_then(|v| v.trim().parse::<u32>().ok())
            .ok_or_else(|| err(1, format!("unrecognised header {header:?}")))?;
        if version != FORMAT_VERSION {
            return Err(err(1, format!("unsupported format version {version}")));
        }

        let mut entries = Vec::new();
        let mut seen = HashSet::new();
        while let Some((lineno, line)) = lines.next() {
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 6 {
                return Err(err(
                    lineno,
                    format!("expected an image row with 6 fields, found {}", fields.len()),
                ));
            }
            let num = |i: usize, name: &str| -> Result<u32> {
                fields[i]
                    .parse()
                    .map_err(|_| err(lineno, format!("{name} {:?} is not a count", fields[i])))
            };
            let mut feature = ImageFeature {
                image_id: fields[0].to_string(),
                tp: num(1, "tp")?,
                mp: num(2, "mp")?,
                holes: num(3, "holes")?,
                parents: num(4, "parents")?,
                bw: fields[5].parse().map_err(|e| err(lineno, e))?,
                polys: Vec::new(),
            };
            if !seen.insert(feature.image_id.clone()) {
                return Err(err(lineno, format!("duplicate image_id {:?}", feature.image_id)));
            }
            for _ in 0..feature.tp {
                let (pl, pline) = lines.next().ok_or_else(|| {
                    err(
                        lineno,
                        format!(
                            "image {:?} ends before its {} polygon rows",
                            feature.image_id, feature.tp
                        ),
                    )
                })?;
                feature.polys.push(parse_polygon(pline).map_err(|r| err(pl, r))?);
            }
            feature.validate().map_err(|r| err(lineno, r))?;
            entries.push(feature);
        }
        Ok(FeatureTable { version, entries })
    }
}

fn parse_polygon(line: &str) -> std::result::Result<PolygonAttributes, String> {
    let f: Vec<&str> = line.split(',').collect();
    if f.len() != 10 {
        return Err(format!("expected a polygon row with 10 fields, found {}", f.len()));
    }
    let count = |i: usize, name: &str| -> std::result::Result<u32, String> {
        f[i].parse().map_err(|_| format!("{name} {:?} is not a count", f[i]))
    };
    let kind = match f[1] {
        "P" => PolygonKind::Primary,
        "H" => PolygonKind::Hole,
        k => return Err(format!("unknown polygon kind {k:?}")),
    };
    let en = match f[2] {
        "inv" => None,
        v => Some(
            v.parse::<i32>()
                .map_err(|_| format!("en {v:?} is neither an integer nor inv"))?,
        ),
    };
    Ok(PolygonAttributes {
        id: count(0, "poly_no")?,
        kind,
        en,
        hc: count(3, "hc")?,
        pc: count(4, "pc")?,
        vdc: count(5, "vdc")?,
        hdc: count(6, "hdc")?,
        er: f[7].parse()?,
        poh: f[8]
            .parse()
            .map_err(|_| format!("poh {:?} is not a position code", f[8]))?,
        concavity: f[9].to_string(),
        nesting: 0,
    })
}
