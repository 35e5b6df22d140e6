//! Set of visited keys kept as sorted runs; runs move to disk once the
//! in-memory part exceeds a byte budget.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use tempfile::TempDir;

pub(crate) struct RunStore {
    budget: usize,
    mem: Vec<Vec<Vec<u8>>>,
    mem_bytes: usize,
    disk: Vec<PathBuf>,
    dir: Option<TempDir>,
    next_file: usize,
    len: u64,
}

const MAX_DISK_RUNS: usize = 8;

impl RunStore {
    pub(crate) fn new(budget: usize) -> RunStore {
        RunStore {
            budget,
            mem: Vec::new(),
            mem_bytes: 0,
            disk: Vec::new(),
            dir: None,
            next_file: 0,
            len: 0,
        }
    }

    pub(crate) fn len(&self) -> u64 {
        self.len
    }

    #[cfg(test)]
    pub(crate) fn disk_runs(&self) -> usize {
        self.disk.len()
    }

    /// Removes from `cands` (sorted, deduplicated by key) every key already
    /// stored.
    pub(crate) fn retain_new<T>(&self, cands: &mut Vec<(Vec<u8>, T)>) -> io::Result<()> {
        for run in &self.mem {
            cands.retain(|(k, _)| run.binary_search(k).is_err());
        }
        for path in &self.disk {
            let mut seen = vec![false; cands.len()];
            let mut reader = RunReader::open(path)?;
            let mut i = 0;
            while let Some(key) = reader.next_key()? {
                while i < cands.len() && cands[i].0 < key {
                    i += 1;
                }
                if i == cands.len() {
                    break;
                }
                if cands[i].0 == key {
                    seen[i] = true;
                }
            }
            let mut it = seen.into_iter();
            cands.retain(|_| !it.next().unwrap_or(false));
        }
        Ok(())
    }

    /// Adds a sorted run of keys not yet present.
    pub(crate) fn add_run(&mut self, run: Vec<Vec<u8>>) -> io::Result<()> {
        if run.is_empty() {
            return Ok(());
        }
        self.len += run.len() as u64;
        self.mem_bytes += run.iter().map(|k| k.len() + 24).sum::<usize>();
        self.mem.push(run);
        if self.mem.len() > 1 && self.mem_bytes <= self.budget {
            let merged = merge_sorted(std::mem::take(&mut self.mem));
            self.mem.push(merged);
        }
        if self.mem_bytes > self.budget {
            self.spill()?;
        }
        Ok(())
    }

    fn spill(&mut self) -> io::Result<()> {
        let merged = merge_sorted(std::mem::take(&mut self.mem));
        self.mem_bytes = 0;
        let path = self.new_path()?;
        write_run(&path, merged.iter().map(Vec::as_slice))?;
        self.disk.push(path);
        if self.disk.len() > MAX_DISK_RUNS {
            let all = self.all_keys()?;
            for p in self.disk.drain(..) {
                std::fs::remove_file(p)?;
            }
            let path = self.new_path()?;
            write_run(&path, all.iter().map(Vec::as_slice))?;
            self.disk.push(path);
        }
        Ok(())
    }

    fn new_path(&mut self) -> io::Result<PathBuf> {
        if self.dir.is_none() {
            let dir = match std::env::var_os("CUBEFLIP_TMPDIR") {
                Some(base) => tempfile::Builder::new().prefix("cubeflip-").tempdir_in(base)?,
                None => tempfile::Builder::new().prefix("cubeflip-").tempdir()?,
            };
            self.dir = Some(dir);
        }
        let dir = self.dir.as_ref().expect("created above").path();
        self.next_file += 1;
        Ok(dir.join(format!("run-{:05}.bin", self.next_file)))
    }

    /// Every stored key, sorted.
    pub(crate) fn all_keys(&self) -> io::Result<Vec<Vec<u8>>> {
        let mut runs: Vec<Vec<Vec<u8>>> = self.mem.clone();
        for path in &self.disk {
            let mut reader = RunReader::open(path)?;
            let mut run = Vec::new();
            while let Some(k) = reader.next_key()? {
                run.push(k);
            }
            runs.push(run);
        }
        Ok(merge_sorted(runs))
    }
}

fn merge_sorted(runs: Vec<Vec<Vec<u8>>>) -> Vec<Vec<u8>> {
    let mut all: Vec<Vec<u8>> = runs.into_iter().flatten().collect();
    all.sort_unstable();
    all.dedup();
    all
}

fn write_run<'a>(path: &Path, keys: impl Iterator<Item = &'a [u8]>) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for k in keys {
        w.write_all(&(k.len() as u16).to_le_bytes())?;
        w.write_all(k)?;
    }
    w.flush()
}

struct RunReader {
    inner: BufReader<File>,
}

impl RunReader {
    fn open(path: &Path) -> io::Result<RunReader> {
        Ok(RunReader {
            inner: BufReader::new(File::open(path)?),
        })
    }

    fn next_key(&mut self) -> io::Result<Option<Vec<u8>>> {
        let mut len = [0u8; 2];
        match self.inner.read_exact(&mut len) {
            Ok(()) => {}
            Err(e) if e.kind() == io::ErrorKind::UnexpectedEof => return Ok(None),
            Err(e) => return Err(e),
        }
        let mut key = vec![0u8; u16::from_le_bytes(len) as usize];
        self.inner.read_exact(&mut key)?;
        Ok(Some(key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn keys(v: &[u32]) -> Vec<Vec<u8>> {
        v.iter().map(|x| x.to_be_bytes().to_vec()).collect()
    }

    #[test]
    fn spills_and_filters() {
        let mut store = RunStore::new(64);
        for chunk in (0..200u32).collect::<Vec<_>>().chunks(7) {
            let evens: Vec<u32> = chunk.iter().map(|x| x * 2).collect();
            store.add_run(keys(&evens)).unwrap();
        }
        assert!(store.disk_runs() >= 1);
        assert_eq!(store.len(), 200);
        let mut cands: Vec<(Vec<u8>, ())> = keys(&(0..50).collect::<Vec<_>>()).into_iter().map(|k| (k, ())).collect();
        store.retain_new(&mut cands).unwrap();
        assert_eq!(cands.len(), 25);
        assert!(cands.iter().all(|(k, _)| k[3] % 2 == 1));
        let all = store.all_keys().unwrap();
        assert_eq!(all.len(), 200);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }
}
