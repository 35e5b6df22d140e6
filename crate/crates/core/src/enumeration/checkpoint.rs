//! Plain-text checkpoints written after every completed BFS level.
//!
//! ```text
//! cubeflip-checkpoint 1
//! config <hash>
//! group <hash>
//! mode symmetry|plain
//! level <n>
//! total <n>
//! flips <n>
//! max_frontier <n>
//! visited <count>
//! <hex key>            (sorted)
//! frontier <count>
//! <hex key>            (sorted)
//! ```

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub config_hash: String,
    pub group_hash: String,
    pub mod_symmetry: bool,
    pub level: u64,
    pub total: u64,
    pub flips: u64,
    pub max_frontier: u64,
    pub visited: Vec<Vec<u8>>,
    pub frontier: Vec<Vec<u8>>,
}

const MAGIC: &str = "cubeflip-checkpoint 1";

impl Checkpoint {
    /// Writes to a temporary sibling, then renames over `path`.
    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = tmp_path(path);
        {
            let mut w = BufWriter::new(File::create(&tmp)?);
            writeln!(w, "{MAGIC}")?;
            writeln!(w, "config {}", self.config_hash)?;
            writeln!(w, "group {}", self.group_hash)?;
            writeln!(w, "mode {}", if self.mod_symmetry { "symmetry" } else { "plain" })?;
            writeln!(w, "level {}", self.level)?;
            writeln!(w, "total {}", self.total)?;
            writeln!(w, "flips {}", self.flips)?;
            writeln!(w, "max_frontier {}", self.max_frontier)?;
            writeln!(w, "visited {}", self.visited.len())?;
            for k in &self.visited {
                writeln!(w, "{}", hex::encode(k))?;
            }
            writeln!(w, "frontier {}", self.frontier.len())?;
            for k in &self.frontier {
                writeln!(w, "{}", hex::encode(k))?;
            }
            w.flush()?;
        }
        std::fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Checkpoint> {
        let mut r = LineReader {
            lines: BufReader::new(File::open(path)?).lines(),
            line: 0,
        };
        let magic = r.next("header")?;
        if magic.trim() != MAGIC {
            return Err(Error::parse(r.line, "not a cubeflip checkpoint"));
        }
        let config_hash = r.field("config")?;
        let group_hash = r.field("group")?;
        let mod_symmetry = match r.field("mode")?.as_str() {
            "symmetry" => true,
            "plain" => false,
            other => return Err(Error::parse(r.line, format!("unknown mode `{other}`"))),
        };
        let level = r.number("level")?;
        let total = r.number("total")?;
        let flips = r.number("flips")?;
        let max_frontier = r.number("max_frontier")?;
        let visited = r.keys("visited")?;
        let frontier = r.keys("frontier")?;
        Ok(Checkpoint {
            config_hash,
            group_hash,
            mod_symmetry,
            level,
            total,
            flips,
            max_frontier,
            visited,
            frontier,
        })
    }
}

struct LineReader<B> {
    lines: std::io::Lines<B>,
    line: usize,
}

impl<B: BufRead> LineReader<B> {
    fn next(&mut self, what: &str) -> Result<String> {
        self.line += 1;
        match self.lines.next() {
            Some(l) => Ok(l?),
            None => Err(Error::parse(self.line, format!("checkpoint ends before {what}"))),
        }
    }

    fn field(&mut self, name: &str) -> Result<String> {
        let line = self.next(name)?;
        match line.split_once(' ') {
            Some((k, v)) if k == name => Ok(v.trim().to_string()),
            _ => Err(Error::parse(self.line, format!("expected `{name} <value>`"))),
        }
    }

    fn number(&mut self, name: &str) -> Result<u64> {
        let v = self.field(name)?;
        v.parse().map_err(|_| Error::parse(self.line, format!("`{v}` is not a count")))
    }

    fn keys(&mut self, name: &str) -> Result<Vec<Vec<u8>>> {
        let count = self.number(name)?;
        (0..count)
            .map(|_| {
                let l = self.next(name)?;
                hex::decode(l.trim()).map_err(|e| Error::parse(self.line, e.to_string()))
            })
            .collect()
    }
}

fn tmp_path(path: &Path) -> PathBuf {
    let mut name = path.file_name().map(|s| s.to_os_string()).unwrap_or_default();
    name.push(".tmp");
    path.with_file_name(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cp");
        let cp = Checkpoint {
            config_hash: "abc".into(),
            group_hash: "def".into(),
            mod_symmetry: true,
            level: 3,
            total: 10,
            flips: 20,
            max_frontier: 4,
            visited: vec![vec![0, 1], vec![0, 2, 255]],
            frontier: vec![vec![0, 2, 255]],
        };
        cp.write(&path).unwrap();
        assert_eq!(Checkpoint::read(&path).unwrap(), cp);
        std::fs::write(&path, "garbage\n").unwrap();
        assert!(matches!(Checkpoint::read(&path), Err(Error::Parse { line: 1, .. })));
    }
}
