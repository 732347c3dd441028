//! Plain-text tile files.
//!
//! ```text
//! tile
//! vertices n
//! x y            (n lines)
//! sides n
//! i j glue NAME +|-      or      i j free CLASS
//! symmetries k
//! m00 m01 m02 m10 m11 m12        (k lines, affine rows)
//! ```

use super::{SideLabel, TileSpec};
use crate::error::{Error, Result};

pub fn render_tile(tile: &TileSpec) -> String {
    let mut out = String::from("tile\n");
    out.push_str(&format!("vertices {}\n", tile.vertices.len()));
    for v in &tile.vertices {
        out.push_str(&format!("{:.17e} {:.17e}\n", v[0], v[1]));
    }
    out.push_str(&format!("sides {}\n", tile.labels.len()));
    let n = tile.vertices.len();
    for (k, l) in tile.labels.iter().enumerate() {
        let j = (k + 1) % n;
        match l {
            SideLabel::Glue { color, sign } => {
                out.push_str(&format!("{k} {j} glue {color} {}\n", if *sign > 0 { "+" } else { "-" }));
            }
            SideLabel::Free { class } => out.push_str(&format!("{k} {j} free {class}\n")),
        }
    }
    out.push_str(&format!("symmetries {}\n", tile.symmetries.len()));
    for s in &tile.symmetries {
        out.push_str(&format!(
            "{:.17e} {:.17e} {:.17e} {:.17e} {:.17e} {:.17e}\n",
            s.map[0][0], s.map[0][1], s.map[0][2], s.map[1][0], s.map[1][1], s.map[1][2]
        ));
    }
    out
}

pub fn parse_tile(text: &str) -> Result<TileSpec> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
    let head = lines.next().ok_or_else(|| Error::Parse("empty tile file".into()))?;
    if head != "tile" {
        return Err(Error::Parse("tile file must start with `tile`".into()));
    }
    let n: usize = expect_count(lines.next(), "vertices")?;
    let mut vertices = Vec::with_capacity(n);
    for _ in 0..n {
        let line = lines.next().ok_or_else(|| Error::Parse("truncated vertex list".into()))?;
        let mut it = line.split_whitespace();
        let x: f64 = parse_num(it.next())?;
        let y: f64 = parse_num(it.next())?;
        vertices.push([x, y]);
    }
    let ns: usize = expect_count(lines.next(), "sides")?;
    if ns != n {
        return Err(Error::Parse("side count must equal vertex count".into()));
    }
    let mut labels = vec![None; n];
    for _ in 0..ns {
        let line = lines.next().ok_or_else(|| Error::Parse("truncated side list".into()))?;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 4 {
            return Err(Error::Parse(format!("bad side line: {line}")));
        }
        let i: usize = toks[0].parse().map_err(|e| Error::Parse(format!("bad side index: {e}")))?;
        let j: usize = toks[1].parse().map_err(|e| Error::Parse(format!("bad side index: {e}")))?;
        if i >= n || j != (i + 1) % n {
            return Err(Error::Parse(format!("side ({i}, {j}) is not a boundary edge in order")));
        }
        let label = match toks[2] {
            "glue" => {
                if toks.len() != 5 {
                    return Err(Error::Parse(format!("bad glue side: {line}")));
                }
                let sign = match toks[4] {
                    "+" => 1,
                    "-" => -1,
                    other => return Err(Error::Parse(format!("bad glue sign `{other}`"))),
                };
                SideLabel::glue(toks[3], sign)
            }
            "free" => SideLabel::free(toks[3]),
            other => return Err(Error::Parse(format!("unknown side kind `{other}`"))),
        };
        if labels[i].is_some() {
            return Err(Error::Parse(format!("duplicate side {i}")));
        }
        labels[i] = Some(label);
    }
    let labels: Vec<SideLabel> = labels
        .into_iter()
        .collect::<Option<_>>()
        .ok_or_else(|| Error::Parse("missing side".into()))?;
    let k: usize = expect_count(lines.next(), "symmetries")?;
    let mut maps = Vec::with_capacity(k);
    for _ in 0..k {
        let line = lines.next().ok_or_else(|| Error::Parse("truncated symmetry list".into()))?;
        let vals: Vec<f64> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|e| Error::Parse(format!("bad symmetry entry: {e}"))))
            .collect::<Result<_>>()?;
        if vals.len() != 6 {
            return Err(Error::Parse("symmetry rows need 6 entries".into()));
        }
        maps.push([[vals[0], vals[1], vals[2]], [vals[3], vals[4], vals[5]]]);
    }
    TileSpec::new(vertices, labels, maps)
}

fn expect_count(line: Option<&str>, key: &str) -> Result<usize> {
    let line = line.ok_or_else(|| Error::Parse(format!("missing `{key}` line")))?;
    line.strip_prefix(key)
        .ok_or_else(|| Error::Parse(format!("expected `{key} n`, got `{line}`")))?
        .trim()
        .parse()
        .map_err(|e| Error::Parse(format!("bad {key} count: {e}")))
}

fn parse_num(tok: Option<&str>) -> Result<f64> {
    tok.ok_or_else(|| Error::Parse("missing number".into()))?
        .parse()
        .map_err(|e| Error::Parse(format!("bad number: {e}")))
}
