//! Level-synchronous breadth-first exploration of the flip graph.

use std::collections::HashSet;
use std::path::PathBuf;
use std::sync::Arc;

use rayon::prelude::*;

use super::checkpoint::Checkpoint;
use super::store::RunStore;
use crate::complex::{same_config, Triangulation};
use crate::error::{Error, Result};
use crate::flips::{flip_cells, moves_in_cells};
use crate::kernel::{Config, Face};
use crate::symmetry::Canonicalizer;

/// Counters of a flip-graph exploration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationReport {
    /// Triangulations in the explored component.
    pub total: u64,
    /// Symmetry classes among them.
    pub classes: u64,
    /// Flips examined from expanded triangulations (or class
    /// representatives, when reducing by symmetry).
    pub flips: u64,
    pub max_frontier: u64,
    /// BFS levels completed.
    pub levels: u64,
    pub checkpoint: Option<PathBuf>,
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct ExploreOptions {
    pub mod_symmetry: bool,
    /// Resumed from if present, rewritten after every level.
    pub checkpoint: Option<PathBuf>,
    /// Worker threads; 0 lets rayon decide.
    pub workers: usize,
    /// Stops (incomplete) once this many levels are done.
    pub stop_after_level: Option<u64>,
    /// Bytes of visited keys held in memory before spilling to disk.
    pub memory_budget: usize,
}

impl Default for ExploreOptions {
    fn default() -> Self {
        ExploreOptions {
            mod_symmetry: false,
            checkpoint: None,
            workers: 0,
            stop_after_level: None,
            memory_budget: 1 << 30,
        }
    }
}

/// Explores the flip-graph component of `seed`, deduplicating by canonical
/// form under the isometry group of `cfg` when `mod_symmetry` is set and by
/// identity otherwise.
pub fn explore_flip_graph(cfg: &Arc<Config>, seed: &Triangulation, opts: &ExploreOptions) -> Result<EnumerationReport> {
    Ok(run(cfg, seed, opts, false)?.0)
}

/// Like [`explore_flip_graph`], returning every visited triangulation (one
/// representative per class when reducing by symmetry), sorted.
pub fn explore_collect(
    cfg: &Arc<Config>,
    seed: &Triangulation,
    mod_symmetry: bool,
) -> Result<(EnumerationReport, Vec<Triangulation>)> {
    let opts = ExploreOptions {
        mod_symmetry,
        ..ExploreOptions::default()
    };
    let (report, keys) = run(cfg, seed, &opts, true)?;
    let canon = Canonicalizer::trivial(cfg.len());
    let trias = keys
        .into_iter()
        .map(|k| Triangulation::from_cells(cfg.clone(), canon.decode(&k)))
        .collect();
    Ok((report, trias))
}

struct State {
    store: RunStore,
    frontier: Vec<Vec<u8>>,
    level: u64,
    total: u64,
    flips: u64,
    max_frontier: u64,
}

fn run(cfg: &Arc<Config>, seed: &Triangulation, opts: &ExploreOptions, collect: bool) -> Result<(EnumerationReport, Vec<Vec<u8>>)> {
    if !same_config(seed.cfg(), cfg) {
        return Err(Error::PreconditionFailed("seed belongs to another configuration".into()));
    }
    seed.validate()?;
    let sym = Canonicalizer::for_config(cfg);
    let plain = Canonicalizer::trivial(cfg.len());
    let canon = if opts.mod_symmetry { &sym } else { &plain };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.workers)
        .build()
        .map_err(|e| Error::PreconditionFailed(format!("thread pool: {e}")))?;

    let mut st = match opts.checkpoint.as_deref().filter(|p| p.exists()) {
        Some(path) => resume(path, cfg, canon, opts)?,
        None => {
            let (key, stab) = canon.canonical_key(seed.cells());
            let mut store = RunStore::new(opts.memory_budget);
            store.add_run(vec![key.clone()])?;
            State {
                store,
                frontier: vec![key],
                level: 0,
                total: (canon.order() / stab) as u64,
                flips: 0,
                max_frontier: 1,
            }
        }
    };

    while !st.frontier.is_empty() {
        if opts.stop_after_level.is_some_and(|l| st.level >= l) {
            break;
        }
        let expanded: Vec<(u64, Vec<(Vec<u8>, usize)>)> = pool.install(|| {
            st.frontier
                .par_iter()
                .map(|key| expand(cfg, canon, key))
                .collect()
        });
        let mut cands: Vec<(Vec<u8>, usize)> = Vec::new();
        for (n, found) in expanded {
            st.flips += n;
            cands.extend(found);
        }
        cands.sort_unstable();
        cands.dedup_by(|a, b| a.0 == b.0);
        st.store.retain_new(&mut cands)?;
        st.total += cands
            .iter()
            .map(|(_, stab)| (canon.order() / stab) as u64)
            .sum::<u64>();
        let fresh: Vec<Vec<u8>> = cands.into_iter().map(|(k, _)| k).collect();
        st.store.add_run(fresh.clone())?;
        st.max_frontier = st.max_frontier.max(fresh.len() as u64);
        st.frontier = fresh;
        st.level += 1;
        if let Some(path) = &opts.checkpoint {
            write_checkpoint(path, cfg, canon, opts, &st)?;
        }
    }

    let complete = st.frontier.is_empty();
    let keys = st.store.all_keys()?;
    let classes = if opts.mod_symmetry {
        st.store.len()
    } else {
        let forms: HashSet<Vec<u8>> = pool.install(|| {
            keys.par_iter()
                .map(|k| sym.canonical_key(&plain.decode(k)).0)
                .collect()
        });
        forms.len() as u64
    };
    let report = EnumerationReport {
        total: st.total,
        classes,
        flips: st.flips,
        max_frontier: st.max_frontier,
        levels: st.level,
        checkpoint: opts.checkpoint.clone(),
        complete,
    };
    Ok((report, if collect { keys } else { Vec::new() }))
}

fn expand(cfg: &Config, canon: &Canonicalizer, key: &[u8]) -> (u64, Vec<(Vec<u8>, usize)>) {
    let cells: Vec<Face> = canon.decode(key);
    let moves = moves_in_cells(cfg, &cells);
    let out = moves
        .iter()
        .map(|m| canon.canonical_key(&flip_cells(&cells, m)))
        .collect();
    (moves.len() as u64, out)
}

fn resume(path: &std::path::Path, cfg: &Config, canon: &Canonicalizer, opts: &ExploreOptions) -> Result<State> {
    let cp = Checkpoint::read(path)?;
    let mismatch = |what| Error::CheckpointMismatch {
        path: path.to_path_buf(),
        what,
    };
    if cp.config_hash != cfg.identity_hash() {
        return Err(mismatch("configuration"));
    }
    if cp.group_hash != canon.identity_hash() || cp.mod_symmetry != opts.mod_symmetry {
        return Err(mismatch("symmetry group"));
    }
    let mut store = RunStore::new(opts.memory_budget);
    store.add_run(cp.visited)?;
    Ok(State {
        store,
        frontier: cp.frontier,
        level: cp.level,
        total: cp.total,
        flips: cp.flips,
        max_frontier: cp.max_frontier,
    })
}

fn write_checkpoint(
    path: &std::path::Path,
    cfg: &Config,
    canon: &Canonicalizer,
    opts: &ExploreOptions,
    st: &State,
) -> Result<()> {
    Checkpoint {
        config_hash: cfg.identity_hash(),
        group_hash: canon.identity_hash().to_string(),
        mod_symmetry: opts.mod_symmetry,
        level: st.level,
        total: st.total,
        flips: st.flips,
        max_frontier: st.max_frontier,
        visited: st.store.all_keys()?,
        frontier: st.frontier.clone(),
    }
    .write(path)
}
