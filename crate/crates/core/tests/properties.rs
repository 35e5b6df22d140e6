use std::collections::BTreeSet;
use std::sync::Arc;

use num_traits::{Signed, Zero};
use proptest::prelude::*;

use cubeflip::complex::{corner_cuts, corner_count, cube_corner, placing_triangulation, CubeClass, Triangulation};
use cubeflip::contraction::{contract_circuit, contract_point, full_context, star_volume_d, vertex_set_v};
use cubeflip::enumeration::{enumerate_all_triangulations, explore_collect};
use cubeflip::flips::{apply_flip, flippable_moves};
use cubeflip::kernel::{k_subsets, linalg, radon_partition, radon_point, Config, Face, Rational};
use cubeflip::presets::{cube3, cube4, s_config};
use cubeflip::regularity::is_regular;
use cubeflip::symmetry::cube_group;
use cubeflip::walk::{random_walk, walk_visit};

/// Circuits by definition: dependent sets all of whose one-point deletions
/// are independent.
fn brute_force_supports(cfg: &Config) -> BTreeSet<Face> {
    let n = cfg.len();
    let mut out = BTreeSet::new();
    for k in 2..=cfg.affine_dim() + 2 {
        for s in k_subsets(n, k) {
            if cfg.affine_rank(s) == k - 1 && s.iter().all(|i| cfg.affine_rank(s.without(i)) == k - 1) {
                out.insert(s);
            }
        }
    }
    out
}

fn lift(p: &[Rational]) -> Vec<Rational> {
    std::iter::once(Rational::from_integer(1.into())).chain(p.iter().cloned()).collect()
}

/// Whether `p` is a convex combination of the points `side`, found by solving
/// over affinely independent subsets.
fn in_hull(cfg: &Config, side: Face, p: &[Rational]) -> bool {
    let target = lift(p);
    side.subsets().filter(|s| !s.is_empty() && cfg.is_independent(*s)).any(|s| {
        let lifted: Vec<Vec<Rational>> = s.iter().map(|i| lift(cfg.coords(i))).collect();
        let cols: Vec<&[Rational]> = lifted.iter().map(|c| c.as_slice()).collect();
        linalg::solve_columns(&cols, &target).is_some_and(|b| b.iter().all(|x| !x.is_negative()))
    })
}

#[test]
fn circuit_table_matches_brute_force() {
    for cfg in [cube3(), cube4(), s_config(3)] {
        let table: BTreeSet<Face> = cfg.circuits().all().iter().map(|z| z.support).collect();
        assert_eq!(table, brute_force_supports(&cfg), "{}", cfg.name());
        for z in cfg.circuits().all() {
            let p = radon_point(&cfg, z);
            assert!(in_hull(&cfg, z.neg, &p) && in_hull(&cfg, z.pos, &p), "{}", z.display(&cfg));
        }
    }
}

/// Contracting a circuit through the apex and re-deriving the Radon
/// partition of the contracted points from scratch agree.
#[test]
fn contraction_preserves_radon_partitions() {
    let cube = cube4();
    for x in [0usize, 6, 13] {
        let ctx = full_context(x);
        let supports: Vec<Face> = brute_force_supports(&cube).into_iter().filter(|s| s.contains(x)).collect();
        assert!(!supports.is_empty());
        for s in supports {
            let z = radon_partition(s, &cube).unwrap();
            let cz = contract_circuit(ctx, &z).unwrap();
            let pts: Vec<(String, Vec<Rational>)> = s
                .without(x)
                .iter()
                .map(|y| (cube.label(y).to_string(), contract_point(&cube, x, y).unwrap()))
                .collect();
            let local = Config::new("local", 4, pts).unwrap();
            let fresh = radon_partition(local.all(), &local).unwrap();
            let relabel = |f: Face| -> BTreeSet<String> { f.iter().map(|i| local.label(i).to_string()).collect() };
            let target = |f: Face| -> BTreeSet<String> { f.iter().map(|i| ctx.target.label(i).to_string()).collect() };
            let got: BTreeSet<BTreeSet<String>> = [target(cz.neg), target(cz.pos)].into();
            let want: BTreeSet<BTreeSet<String>> = [relabel(fresh.neg), relabel(fresh.pos)].into();
            assert_eq!(got, want, "{}", z.display(&cube));
            let apex_side = target(cz.neg);
            let expected: BTreeSet<String> = z.through(x).unwrap().neg.without(x).iter().map(|i| cube.label(i).to_string()).collect();
            assert_eq!(apex_side, expected);
        }
    }
}

#[test]
fn oracle_agrees_with_flip_exploration() {
    for cfg in [cube3(), s_config(3)] {
        let seed = placing_triangulation(&cfg).unwrap();
        let (_, by_flips) = explore_collect(&cfg, &seed, false).unwrap();
        let oracle = enumerate_all_triangulations(&cfg, false).unwrap();
        let cells = |ts: &[Triangulation]| -> BTreeSet<Vec<Face>> { ts.iter().map(|t| t.cells().to_vec()).collect() };
        assert_eq!(by_flips.len(), oracle.len());
        assert_eq!(cells(&by_flips), cells(&oracle), "{}", cfg.name());
        for t in &oracle {
            t.validate().unwrap();
        }
    }
}

fn sigma_degree(t: &Triangulation, q: i64, x: usize) -> usize {
    t.sigma_graph(q).degree(x)
}

fn check_graph_bounds(t: &Triangulation) {
    assert!(t.sigma_graph(2).len() <= 24);
    assert!(t.sigma_graph(3).len() <= 8);
    assert!(t.sigma_graph(4).len() <= 1);
    for x in 0..16 {
        let isolated = (2..=4).all(|q| t.sigma_graph(q).is_isolated(x));
        assert_eq!(t.has_cell(cube_corner(x)), isolated);
    }
    for s in [CubeClass::E, CubeClass::O] {
        let low = s.members().iter().filter(|&x| sigma_degree(t, 3, x) <= 1).count();
        assert!(low >= 4);
        if corner_count(t, s) >= 4 {
            assert!(s.members().iter().all(|x| sigma_degree(t, 2, x) <= 3));
        }
    }
}

#[test]
fn edge_graph_bounds_along_walks() {
    let mut seen = 0;
    for seed in 0..12u64 {
        walk_visit(&corner_cuts()[(seed % 8) as usize].2, 150, seed, |t| {
            check_graph_bounds(t);
            seen += 1;
            true
        });
    }
    assert!(seen > 1000);
}

#[test]
fn regularity_is_invariant_under_the_cube_group() {
    let g = cube_group();
    let mut regular = 0;
    let mut non_regular = 0;
    for seed in 0..6u64 {
        let t = random_walk(&corner_cuts()[0].2, 120, seed).end;
        let r = is_regular(&t).is_some();
        for h in g.iter().step_by(37) {
            assert_eq!(is_regular(&h.map_triangulation(&t)).is_some(), r);
        }
        if r {
            regular += 1;
        } else {
            non_regular += 1;
        }
    }
    assert_eq!(regular + non_regular, 6);
}

/// For a flip removing a face that contains `x`, the star of `x` shrinks and
/// gains no link vertex.
fn check_star_shrinks(before: &Triangulation, after: &Triangulation, removed: Face) {
    for x in removed.iter() {
        let z = after.cells();
        if z.iter().all(|c| !c.contains(x)) {
            continue;
        }
        let v0 = star_volume_d(before, x).unwrap();
        let v1 = star_volume_d(after, x).unwrap();
        assert!(v1 < v0);
        assert!(vertex_set_v(after, x).unwrap().is_subset_of(vertex_set_v(before, x).unwrap()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn flips_are_involutions(seed in 0u64..10_000, steps in 0usize..60, pick in 0usize..1000) {
        let start = &corner_cuts()[(seed % 8) as usize].2;
        let t = random_walk(start, steps, seed).end;
        let moves = flippable_moves(&t);
        prop_assume!(!moves.is_empty());
        let m = &moves[pick % moves.len()];
        let t1 = apply_flip(&t, m).unwrap();
        t1.validate().unwrap();
        prop_assert_eq!(t1.total_volume(), t.total_volume());
        check_star_shrinks(&t, &t1, m.removed);
        let back = apply_flip(&t1, &m.reversed()).unwrap();
        prop_assert_eq!(back, t);
    }

    #[test]
    fn placing_triangulations_validate(mask in 1u32..(1 << 16)) {
        let cube = cube4();
        let sub = Face::from_bits(mask);
        prop_assume!(sub.len() >= 2);
        let pts = sub.iter().map(|i| (cube.label(i).to_string(), cube.coords(i).to_vec())).collect();
        let cfg = Arc::new(Config::new("sub", 4, pts).unwrap());
        let t = placing_triangulation(&cfg).unwrap();
        t.validate().unwrap();
        prop_assert!(t.total_volume() > Rational::zero());
    }
}
