//! Line-oriented text formats for configurations, triangulations, flip
//! paths, height functions and KEY=VALUE reports.
//!
//! ```text
//! # name cube4                       configuration
//! dim 4 points 16
//! a 0/1 0/1 0/1 0/1
//!
//! # config cube4                     triangulation
//! a b c e i
//!
//! # config cube4                     flip path
//! start
//! a b c e i
//! ...
//! moves 1
//! flip a d m p remove a p
//!
//! a 0/1                              heights
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::complex::Triangulation;
use crate::driver::FlipPath;
use crate::error::{Error, Result};
use crate::flips::{apply_flip, is_flippable};
use crate::kernel::{Config, Face, Rational};
use crate::presets;
use crate::regularity::HeightFunction;

/// `num/den`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Accepts `n`, `-n`, `n/d`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.parse::<BigInt>().ok()?, d.parse::<BigInt>().ok()?),
        None => (s.parse::<BigInt>().ok()?, BigInt::one()),
    };
    if d == BigInt::from(0) {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Non-empty lines with comments stripped, numbered from 1. Comment lines
/// of the form `# key value` are reported separately.
fn content_lines(text: &str) -> (Vec<(usize, &str)>, Vec<(&str, &str)>) {
    let mut lines = Vec::new();
    let mut tags = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let trimmed = raw.trim();
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some((k, v)) = comment.trim().split_once(char::is_whitespace) {
                tags.push((k, v.trim()));
            }
            continue;
        }
        let line = trimmed.split('#').next().unwrap_or("").trim();
        if !line.is_empty() {
            lines.push((i + 1, line));
        }
    }
    (lines, tags)
}

fn tag<'a>(tags: &[(&'a str, &'a str)], key: &str) -> Option<&'a str> {
    tags.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

pub fn format_config(cfg: &Config) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# name {}", cfg.name());
    let _ = writeln!(out, "dim {} points {}", cfg.ambient_dim(), cfg.len());
    for i in 0..cfg.len() {
        let coords: Vec<String> = cfg.coords(i).iter().map(format_rational).collect();
        let _ = writeln!(out, "{} {}", cfg.label(i), coords.join(" "));
    }
    out
}

pub fn parse_config(text: &str) -> Result<Config> {
    let (lines, tags) = content_lines(text);
    let name = tag(&tags, "name").unwrap_or("config");
    let Some(&(hline, header)) = lines.first() else {
        return Err(Error::parse(1, "empty configuration file"));
    };
    let h: Vec<&str> = header.split_whitespace().collect();
    let (dim, n) = match h.as_slice() {
        ["dim", d, "points", n] => match (d.parse::<usize>(), n.parse::<usize>()) {
            (Ok(d), Ok(n)) => (d, n),
            _ => return Err(Error::parse(hline, "bad header numbers")),
        },
        _ => return Err(Error::parse(hline, "expected `dim <d> points <n>`")),
    };
    if lines.len() - 1 != n {
        return Err(Error::parse(hline, format!("header promises {n} points, found {}", lines.len() - 1)));
    }
    let mut points = Vec::with_capacity(n);
    for &(ln, line) in &lines[1..] {
        let mut parts = line.split_whitespace();
        let label = parts.next().expect("non-empty line").to_string();
        let coords = parts
            .map(|p| parse_rational(p).ok_or_else(|| Error::parse(ln, format!("bad coordinate `{p}`"))))
            .collect::<Result<Vec<_>>>()?;
        if coords.len() != dim {
            return Err(Error::parse(ln, format!("expected {dim} coordinates, found {}", coords.len())));
        }
        points.push((label, coords));
    }
    Config::new(name, dim, points)
}

/// A configuration given either as a preset name or as a file path.
pub fn load_config(spec: &str) -> Result<Arc<Config>> {
    if let Some(cfg) = presets::by_name(spec) {
        return Ok(cfg);
    }
    let text = std::fs::read_to_string(spec)?;
    Ok(Arc::new(parse_config(&text)?))
}

fn face_lines(t: &Triangulation) -> String {
    let mut out = String::new();
    for &c in t.cells() {
        let _ = writeln!(out, "{}", t.cfg().format_face(c));
    }
    out
}

pub fn format_triangulation(t: &Triangulation) -> String {
    format!("# config {}\n{}", t.cfg().name(), face_lines(t))
}

fn parse_face(cfg: &Config, ln: usize, line: &str) -> Result<Face> {
    let labels: Vec<&str> = line.split_whitespace().collect();
    cfg.face(&labels).map_err(|e| Error::parse(ln, e.to_string()))
}

/// Parses a triangulation. The configuration comes from `cfg` or, when
/// absent, from a `# config NAME` line naming a preset.
pub fn parse_triangulation(text: &str, cfg: Option<&Arc<Config>>) -> Result<Triangulation> {
    let (lines, tags) = content_lines(text);
    let cfg = resolve_config(cfg, &tags)?;
    let cells = lines
        .iter()
        .map(|&(ln, line)| parse_face(&cfg, ln, line))
        .collect::<Result<Vec<_>>>()?;
    Triangulation::new(cfg, cells)
}

fn resolve_config(cfg: Option<&Arc<Config>>, tags: &[(&str, &str)]) -> Result<Arc<Config>> {
    if let Some(cfg) = cfg {
        return Ok(cfg.clone());
    }
    let name = tag(tags, "config").ok_or_else(|| Error::parse(1, "no `# config NAME` line and no configuration given"))?;
    presets::by_name(name).ok_or_else(|| Error::parse(1, format!("unknown preset `{name}`")))
}

pub fn format_path(p: &FlipPath) -> String {
    let cfg = p.start.cfg();
    let mut out = format!("# config {}\nstart\n", cfg.name());
    out.push_str(&face_lines(&p.start));
    let _ = writeln!(out, "moves {}", p.moves.len());
    for m in &p.moves {
        let _ = writeln!(
            out,
            "flip {} remove {}",
            cfg.format_face(m.circuit.support),
            cfg.format_face(m.removed)
        );
    }
    out
}

/// Parses and replays a path; each move is re-derived from the current
/// triangulation, so an unflippable move is reported with its line.
pub fn parse_path(text: &str, cfg: Option<&Arc<Config>>) -> Result<FlipPath> {
    let (lines, tags) = content_lines(text);
    let cfg = resolve_config(cfg, &tags)?;
    let mut it = lines.into_iter().peekable();
    match it.next() {
        Some((_, "start")) => {}
        Some((ln, _)) => return Err(Error::parse(ln, "expected `start`")),
        None => return Err(Error::parse(1, "empty path file")),
    }
    let mut cells = Vec::new();
    let mut count_line = None;
    for (ln, line) in it.by_ref() {
        if let Some(n) = line.strip_prefix("moves ") {
            let n: usize = n.trim().parse().map_err(|_| Error::parse(ln, "bad move count"))?;
            count_line = Some((ln, n));
            break;
        }
        cells.push(parse_face(&cfg, ln, line)?);
    }
    let (cln, count) = count_line.ok_or_else(|| Error::parse(1, "missing `moves <n>` line"))?;
    let start = Triangulation::new(cfg.clone(), cells)?;
    let mut path = FlipPath::empty(&start);
    for (ln, line) in it {
        let (z, side) = line
            .strip_prefix("flip ")
            .and_then(|r| r.split_once(" remove "))
            .ok_or_else(|| Error::parse(ln, "expected `flip <labels> remove <labels>`"))?;
        let support = parse_face(&cfg, ln, z)?;
        let removed = parse_face(&cfg, ln, side)?;
        let table = cfg.circuits();
        let circuit = table
            .index_of_support(support)
            .map(|i| table.get(i))
            .ok_or_else(|| Error::parse(ln, format!("{} is not a circuit", cfg.face_set(support))))?;
        let m = is_flippable(&path.end, &circuit, removed)
            .ok_or_else(|| Error::parse(ln, format!("{} is not flippable here", cfg.face_set(support))))?;
        path.end = apply_flip(&path.end, &m)?;
        path.moves.push(m);
    }
    if path.moves.len() != count {
        return Err(Error::parse(cln, format!("expected {count} moves, found {}", path.moves.len())));
    }
    Ok(path)
}

pub fn format_heights(cfg: &Config, w: &HeightFunction) -> String {
    let mut out = String::new();
    for (i, h) in w.0.iter().enumerate() {
        let _ = writeln!(out, "{} {}", cfg.label(i), format_rational(h));
    }
    out
}

/// Parses `label value` lines; every point must receive exactly one height.
pub fn parse_heights(text: &str, cfg: &Config) -> Result<HeightFunction> {
    let (lines, _) = content_lines(text);
    let mut heights: Vec<Option<Rational>> = vec![None; cfg.len()];
    for (ln, line) in lines {
        let parts: Vec<&str> = line.split_whitespace().collect();
        let [label, value] = parts.as_slice() else {
            return Err(Error::parse(ln, "expected `<label> <value>`"));
        };
        let i = cfg.index_of(label).map_err(|e| Error::parse(ln, e.to_string()))?;
        let v = parse_rational(value).ok_or_else(|| Error::parse(ln, format!("bad value `{value}`")))?;
        if heights[i].replace(v).is_some() {
            return Err(Error::parse(ln, format!("duplicate height for `{label}`")));
        }
    }
    let missing: Vec<&str> = (0..cfg.len()).filter(|&i| heights[i].is_none()).map(|i| cfg.label(i)).collect();
    if !missing.is_empty() {
        return Err(Error::parse(0, format!("no height for {}", missing.join(" "))));
    }
    Ok(HeightFunction(heights.into_iter().map(|h| h.expect("checked")).collect()))
}

/// Ordered KEY=VALUE pairs closing every command's output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report(pub Vec<(String, String)>);

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn set(&mut self, key: &str, value: impl ToString) -> &mut Report {
        let value = value.to_string();
        match self.0.iter_mut().find(|(k, _)| k == key) {
            Some(slot) => slot.1 = value,
            None => self.0.push((key.to_string(), value)),
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn parse(text: &str) -> Result<Report> {
        let mut r = Report::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::parse(i + 1, "expected KEY=VALUE"))?;
            r.set(k, v);
        }
        Ok(r)
    }
}

impl std::fmt::Display for Report {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (k, v) in &self.0 {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::corner_cuts;
    use crate::presets::{cube4, s_config};
    use crate::regularity::corner_cut_heights;
    use crate::walk::random_walk;

    #[test]
    fn config_round_trip() {
        for cfg in [cube4(), s_config(2)] {
            let text = format_config(&cfg);
            let back = parse_config(&text).unwrap();
            assert_eq!(format_config(&back), text);
            assert_eq!(back.name(), cfg.name());
        }
        assert!(matches!(parse_config("dim 2 points 1\na 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_config("dims 2\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn triangulation_and_path_round_trip() {
        let (class, diag, t) = &corner_cuts()[0];
        let text = format_triangulation(t);
        assert_eq!(&parse_triangulation(&text, None).unwrap(), t);
        let p = random_walk(t, 25, 3);
        let text = format_path(&p);
        let back = parse_path(&text, None).unwrap();
        assert_eq!(back, p);
        assert_eq!(format_path(&back), text);
        let w = corner_cut_heights(*class, *diag);
        let text = format_heights(&cube4(), &w);
        assert_eq!(parse_heights(&text, &cube4()).unwrap(), w);
    }

    #[test]
    fn report_round_trip() {
        let mut r = Report::new();
        r.set("classes", 6).set("total", 74);
        let back = Report::parse(&r.to_string()).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.get("total"), Some("74"));
    }
}
