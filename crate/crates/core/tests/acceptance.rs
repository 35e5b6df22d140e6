//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use cubeflip::complex::{corner_cuts, corner_simplex, is_corner_cut, placing_triangulation, CubeClass, Triangulation};
use cubeflip::contraction::{contract_circuit, contract_point, full_context, star_volume_d, vertex_set_v};
use cubeflip::driver::flip_to_corner_cut;
use cubeflip::enumeration::{algorithm1_lx, enumerate_all_triangulations, explore_collect, explore_flip_graph, ExploreOptions};
use cubeflip::flips::{apply_flip, flippable_moves};
use cubeflip::kernel::{k_subsets, radon_partition};
use cubeflip::presets::{cube3, cube4, s_config, s_context, u0, u1_minus, u1_plus};
use cubeflip::regularity::{corner_cut_heights, decide_regularity, is_regular, verify_certificate, Regularity};
use cubeflip::symmetry::{cube_group, Canonicalizer};
use cubeflip::walk::walk_visit;
use cubeflip::{Config, Error, Face, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CUBE3_TRIANGULATIONS: usize = 74;
const CUBE3_CLASSES: usize = 6;
/// (q, total, classes) for S1, S2, S3.
const S_COUNTS: [(usize, u64, u64); 3] = [(1, 4494, 842), (2, 3214, 628), (3, 596, 118)];
/// The nine tetrahedra of U1-.
const U1_MINUS_CELLS: [&str; 9] = ["bcfl", "bflm", "bilm", "cfgl", "cgil", "efgl", "eflm", "eglm", "gilm"];
const CORNER_CUTS: usize = 8;
const MIN_SAMPLED_FLIPS: usize = 10_000;
const DRIVER_WALKS: u64 = 1000;
const DRIVER_WALK_STEPS: usize = 200;
const CUBE4_CLASSES: u64 = 247_451;
const CUBE4_TOTAL: u64 = 92_487_256;
const CUBE4_REGULAR_REPORTED: u64 = 87_959_448;

/// Set in a child process that runs the cube4 enumeration until it is killed.
const CHILD_ENV: &str = "CUBEFLIP_ACCEPTANCE_CHECKPOINT";

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cube3_enumeration() -> Outcome {
    let cfg = cube3();
    let seed = placing_triangulation(&cfg).map_err(|e| e.to_string())?;
    let (_, by_flips) = explore_collect(&cfg, &seed, false).map_err(|e| e.to_string())?;
    let oracle = enumerate_all_triangulations(&cfg, false).map_err(|e| e.to_string())?;
    let cells = |ts: &[Triangulation]| -> BTreeSet<Vec<Face>> { ts.iter().map(|t| t.cells().to_vec()).collect() };
    ensure(by_flips.len() == CUBE3_TRIANGULATIONS, || format!("{} triangulations by flips", by_flips.len()))?;
    ensure(cells(&by_flips) == cells(&oracle) && oracle.len() == by_flips.len(), || {
        format!("oracle found {} triangulations, not the same set", oracle.len())
    })?;
    let canon = Canonicalizer::for_config(&cfg);
    let classes: BTreeSet<Vec<u8>> = by_flips.iter().map(|t| canon.canonical_form(t)).collect();
    ensure(classes.len() == CUBE3_CLASSES, || format!("{} classes", classes.len()))?;
    let regular = by_flips.iter().filter(|t| is_regular(t).is_some()).count();
    ensure(regular == CUBE3_TRIANGULATIONS, || format!("{regular} regular"))?;
    Ok(format!("{} triangulations, {} classes, oracle identical, all regular", by_flips.len(), classes.len()))
}

fn s_enumeration() -> Outcome {
    let mut parts = Vec::new();
    for (q, total, classes) in S_COUNTS {
        let cfg = s_config(q);
        let seed = placing_triangulation(&cfg).map_err(|e| e.to_string())?;
        let opts = ExploreOptions {
            mod_symmetry: true,
            ..ExploreOptions::default()
        };
        let rep = explore_flip_graph(&cfg, &seed, &opts).map_err(|e| e.to_string())?;
        let plain = explore_flip_graph(&cfg, &seed, &ExploreOptions::default()).map_err(|e| e.to_string())?;
        ensure(rep.complete && rep.total == total && rep.classes == classes && plain.total == total, || {
            format!(
                "S{q}: {} / {} by symmetry, {} without, expected {total} / {classes}",
                rep.total, rep.classes, plain.total
            )
        })?;
        parts.push(format!("S{q} {}/{}", rep.total, rep.classes));
    }
    Ok(parts.join(", "))
}

fn lx_names(q: usize) -> Result<(BTreeSet<String>, Vec<Triangulation>), String> {
    let ctx = s_context(q);
    let cfg = &ctx.target;
    let seed = placing_triangulation(cfg).map_err(|e| e.to_string())?;
    let (_, trias) = explore_collect(cfg, &seed, false).map_err(|e| e.to_string())?;
    let lx = algorithm1_lx(ctx, &trias);
    let known: Vec<(&str, Triangulation)> = [("U0", u0(cfg)), ("U1-", u1_minus(cfg)), ("U1+", u1_plus(cfg))]
        .into_iter()
        .filter_map(|(n, t)| t.ok().map(|t| (n, t)))
        .collect();
    let names = lx
        .iter()
        .enumerate()
        .map(|(i, t)| match known.iter().find(|(_, k)| k == t) {
            Some((n, _)) => n.to_string(),
            None => format!("unnamed#{i}"),
        })
        .collect();
    Ok((names, lx))
}

fn apex_flip_free_sets() -> Outcome {
    let want = |s: &str| -> BTreeSet<String> { s.split(' ').map(String::from).collect() };
    for (q, expected) in [(1, want("U0 U1- U1+")), (2, want("U0 U1- U1+")), (3, want("U0"))] {
        let (got, lx) = lx_names(q)?;
        ensure(got == expected, || format!("L_a(S{q}) = {got:?}, expected {expected:?}"))?;
        if q < 3 {
            let cfg = &s_context(q).target;
            let listed: BTreeSet<Face> = U1_MINUS_CELLS
                .iter()
                .map(|c| cfg.face_str(c))
                .collect::<cubeflip::Result<_>>()
                .map_err(|e| e.to_string())?;
            let matched = lx.iter().any(|t| t.cells().iter().copied().collect::<BTreeSet<Face>>() == listed);
            ensure(matched, || format!("no element of L_a(S{q}) has the nine listed tetrahedra"))?;
        }
    }
    Ok("L_a(S1) = L_a(S2) = {U0, U1-, U1+}, L_a(S3) = {U0}, U1- matches face-for-face".into())
}

fn corner_cut_suite() -> Outcome {
    let cuts = corner_cuts();
    ensure(cuts.len() == CORNER_CUTS, || format!("{} corner cuts", cuts.len()))?;
    let cube = cube4();
    for (class, diagonal, t) in cuts {
        t.validate().map_err(|e| e.to_string())?;
        ensure(is_corner_cut(t) == Some((*class, *diagonal)), || "corner cut not recognised".into())?;
        for x in class.other().members().iter() {
            let k = corner_simplex(&cube, x).map_err(|e| e.to_string())?;
            ensure(t.has_cell(k), || format!("missing corner at {}", cube.label(x)))?;
        }
        let w = corner_cut_heights(*class, *diagonal);
        ensure(verify_certificate(t, &w).map_err(|e| e.to_string())?, || "height certificate rejected".into())?;
        ensure(is_regular(t).is_some(), || "LP finds no heights".into())?;
    }
    // The orbit of one corner cut under the cube group is exactly the list.
    let orbit: BTreeSet<Vec<Face>> = cube_group().iter().map(|g| g.map_triangulation(&cuts[0].2).cells().to_vec()).collect();
    let listed: BTreeSet<Vec<Face>> = cuts.iter().map(|(_, _, t)| t.cells().to_vec()).collect();
    ensure(orbit == listed, || format!("orbit has {} elements, list {}", orbit.len(), listed.len()))?;
    let classes: BTreeSet<CubeClass> = cuts.iter().map(|(c, _, _)| *c).collect();
    Ok(format!("{} corner cuts, one orbit, {} parity classes, certified regular", cuts.len(), classes.len()))
}

fn contraction_oracle() -> Outcome {
    let cube = cube4();
    let a = 0;
    let ctx = full_context(a);
    let mut checked = 0;
    for k in 3..=cube.affine_dim() + 2 {
        for s in k_subsets(cube.len(), k) {
            let is_circuit = s.contains(a)
                && cube.affine_rank(s) == k - 1
                && s.iter().all(|i| cube.affine_rank(s.without(i)) == k - 1);
            if !is_circuit {
                continue;
            }
            let z = radon_partition(s, &cube).map_err(|e| e.to_string())?;
            let cz = contract_circuit(ctx, &z).map_err(|e| e.to_string())?;
            let pts = s
                .without(a)
                .iter()
                .map(|y| contract_point(&cube, a, y).map(|p| (cube.label(y).to_string(), p)))
                .collect::<cubeflip::Result<Vec<(String, Vec<Rational>)>>>()
                .map_err(|e| e.to_string())?;
            let local = Config::new("local", cube.ambient_dim(), pts).map_err(|e| e.to_string())?;
            let fresh = radon_partition(local.all(), &local).map_err(|e| e.to_string())?;
            let names = |cfg: &Config, f: Face| -> BTreeSet<String> { f.iter().map(|i| cfg.label(i).to_string()).collect() };
            let got: BTreeSet<_> = [names(&ctx.target, cz.neg), names(&ctx.target, cz.pos)].into();
            let want: BTreeSet<_> = [names(&local, fresh.neg), names(&local, fresh.pos)].into();
            ensure(got == want, || format!("{} contracts to a different partition", z.display(&cube)))?;
            checked += 1;
        }
    }
    ensure(checked > 0, || "no circuits through a".into())?;
    Ok(format!("{checked} circuits through a"))
}

fn sampled_flips() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut sampled = 0;
    let mut star_checks = 0;
    let mut walk = 0u64;
    while sampled < MIN_SAMPLED_FLIPS {
        let start = corner_cuts()[(walk % 8) as usize].2.clone();
        let mut t = start;
        for _ in 0..100 {
            let moves = flippable_moves(&t);
            if moves.is_empty() {
                break;
            }
            let m = &moves[rng.gen_range(0..moves.len())];
            let next = apply_flip(&t, m).map_err(|e| e.to_string())?;
            next.validate().map_err(|e| format!("walk {walk}: {e}"))?;
            let back = apply_flip(&next, &m.reversed()).map_err(|e| e.to_string())?;
            ensure(back == t, || format!("walk {walk}: flip is not an involution"))?;
            for x in m.removed.iter() {
                if !next.vertices().contains(x) {
                    continue;
                }
                let d0 = star_volume_d(&t, x).map_err(|e| e.to_string())?;
                let d1 = star_volume_d(&next, x).map_err(|e| e.to_string())?;
                let v0 = vertex_set_v(&t, x).map_err(|e| e.to_string())?;
                let v1 = vertex_set_v(&next, x).map_err(|e| e.to_string())?;
                ensure(d1 < d0 && v1.is_subset_of(v0), || format!("walk {walk}: star of {} grew", t.cfg().label(x)))?;
                star_checks += 1;
            }
            sampled += 1;
            t = next;
        }
        walk += 1;
    }
    Ok(format!("{sampled} flips over {walk} walks, {star_checks} star checks"))
}

fn driver_walks() -> Outcome {
    let mut paradoxes = 0;
    let mut failures = Vec::new();
    let mut moves = 0;
    for seed in 0..DRIVER_WALKS {
        let t = cubeflip::walk::random_walk(&corner_cuts()[(seed % 8) as usize].2, DRIVER_WALK_STEPS, seed).end;
        match flip_to_corner_cut(&t) {
            Ok(path) => {
                let ok = path.replay().map(|end| is_corner_cut(&end).is_some()).unwrap_or(false);
                if !ok {
                    failures.push(seed);
                }
                moves += path.len();
            }
            Err(Error::Paradox(_)) => paradoxes += 1,
            Err(_) => failures.push(seed),
        }
    }
    ensure(paradoxes == 0 && failures.is_empty(), || {
        format!("{paradoxes} paradoxes, failing seeds {failures:?}")
    })?;
    Ok(format!("{DRIVER_WALKS} walks of {DRIVER_WALK_STEPS} steps, {moves} moves, 0 paradoxes"))
}

#[cfg(feature = "full-cube4")]
fn full_cube4() -> Outcome {
    use cubeflip::enumeration::Checkpoint;
    use std::process::Command;
    use std::time::Duration;

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let cp = dir.path().join("cube4.cp");
    let mut child = Command::new(std::env::current_exe().map_err(|e| e.to_string())?)
        .env(CHILD_ENV, &cp)
        .spawn()
        .map_err(|e| e.to_string())?;
    let killed_at = loop {
        std::thread::sleep(Duration::from_millis(500));
        if let Some(status) = child.try_wait().map_err(|e| e.to_string())? {
            return Err(format!("child exited before it was killed: {status}"));
        }
        if let Ok(c) = Checkpoint::read(&cp) {
            if c.level >= 12 {
                child.kill().map_err(|e| e.to_string())?;
                child.wait().map_err(|e| e.to_string())?;
                break c.level;
            }
        }
    };
    let cube = cube4();
    let seed = placing_triangulation(&cube).map_err(|e| e.to_string())?;
    let opts = ExploreOptions {
        mod_symmetry: true,
        checkpoint: Some(cp),
        ..ExploreOptions::default()
    };
    let rep = explore_flip_graph(&cube, &seed, &opts).map_err(|e| e.to_string())?;
    ensure(rep.complete && rep.classes == CUBE4_CLASSES && rep.total == CUBE4_TOTAL, || {
        format!("{} classes, {} total", rep.classes, rep.total)
    })?;
    Ok(format!(
        "{} classes, {} total, killed after level {killed_at} and resumed",
        rep.classes, rep.total
    ))
}

fn non_regular_scan() -> Outcome {
    for seed in 0..200u64 {
        let mut found = None;
        walk_visit(&corner_cuts()[(seed % 8) as usize].2, 200, seed, |t| {
            if is_regular(t).is_none() {
                found = Some(t.clone());
                false
            } else {
                true
            }
        });
        if let Some(t) = found {
            t.validate().map_err(|e| e.to_string())?;
            let support = match decide_regularity(&t).map_err(|e| e.to_string())? {
                Regularity::NonRegular(y) => y.iter().filter(|v| **v != Rational::from_integer(0.into())).count(),
                Regularity::Regular(_) => return Err("regularity answers disagree".into()),
            };
            return Ok(format!(
                "non-regular cube4 triangulation found on walk {seed} (Farkas support {support}); \
                 the count of {CUBE4_REGULAR_REPORTED} regular triangulations is not reproduced"
            ));
        }
    }
    Err("no non-regular triangulation in 200 walks".into())
}

fn child_enumeration(cp: &str) {
    let cube = cube4();
    let seed = placing_triangulation(&cube).expect("placing triangulation");
    let opts = ExploreOptions {
        mod_symmetry: true,
        checkpoint: Some(cp.into()),
        ..ExploreOptions::default()
    };
    explore_flip_graph(&cube, &seed, &opts).expect("enumeration");
}

fn main() {
    if let Ok(cp) = std::env::var(CHILD_ENV) {
        child_enumeration(&cp);
        return;
    }
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let criteria: [(&str, Option<fn() -> Outcome>); 9] = [
        ("cube3 enumeration", Some(cube3_enumeration)),
        ("S1/S2/S3 enumeration", Some(s_enumeration)),
        ("L_a sets", Some(apex_flip_free_sets)),
        ("corner cuts", Some(corner_cut_suite)),
        ("contracted Radon partitions", Some(contraction_oracle)),
        ("sampled flips", Some(sampled_flips)),
        ("driver from random walks", Some(driver_walks)),
        #[cfg(feature = "full-cube4")]
        ("full cube4 enumeration", Some(full_cube4)),
        #[cfg(not(feature = "full-cube4"))]
        ("full cube4 enumeration", None),
        ("regularity scan", Some(non_regular_scan)),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let n = i + 1;
        if !filter.is_empty() && !filter.iter().any(|f| *f == n.to_string()) {
            continue;
        }
        let Some(check) = check else {
            println!("criterion {n} SKIP {name}: needs --features full-cube4 ({CUBE4_CLASSES} classes, {CUBE4_TOTAL} total)");
            continue;
        };
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {n} PASS {name}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("criterion {n} FAIL {name}: {detail} ({secs:.1}s)");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
