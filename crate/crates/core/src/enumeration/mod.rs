//! Flip-graph exploration, the exhaustive oracle, and the scan for
//! triangulations of a contraction without apex flips.

mod algorithm1;
mod bfs;
mod checkpoint;
mod oracle;
mod store;

pub use algorithm1::{
    algorithm1_lx, algorithm1_lx_native, cube_circuit_orientations, has_apex_flip, native_circuit_orientations,
    OrientedCircuit,
};
pub use bfs::{explore_collect, explore_flip_graph, EnumerationReport, ExploreOptions};
pub use checkpoint::Checkpoint;
pub use oracle::{complete_triangulation, enumerate_all_triangulations, oracle_limit};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::placing_triangulation;
    use crate::presets::{cube3, s_config, s_context, u0, u1_minus, u1_plus};

    #[test]
    fn cube3_flip_graph() {
        let cfg = cube3();
        let seed = placing_triangulation(&cfg).unwrap();
        let plain = explore_flip_graph(&cfg, &seed, &ExploreOptions::default()).unwrap();
        assert_eq!((plain.total, plain.classes, plain.complete), (74, 6, true));
        let sym = ExploreOptions {
            mod_symmetry: true,
            ..ExploreOptions::default()
        };
        let reduced = explore_flip_graph(&cfg, &seed, &sym).unwrap();
        assert_eq!((reduced.total, reduced.classes), (74, 6));
    }

    #[test]
    fn s_configs() {
        for (q, total, classes) in [(1, 4494, 842), (2, 3214, 628), (3, 596, 118)] {
            let cfg = s_config(q);
            let seed = placing_triangulation(&cfg).unwrap();
            let sym = ExploreOptions {
                mod_symmetry: true,
                ..ExploreOptions::default()
            };
            let r = explore_flip_graph(&cfg, &seed, &sym).unwrap();
            eprintln!("S{q}: {r:?} group {}", crate::symmetry::automorphisms(&cfg).len());
            assert_eq!((r.total, r.classes), (total, classes), "S{q}");
        }
    }

    #[test]
    fn lx_of_s_configs() {
        for q in 1..=3 {
            let ctx = s_context(q);
            let cfg = &ctx.target;
            let seed = placing_triangulation(cfg).unwrap();
            let (_, all) = explore_collect(cfg, &seed, false).unwrap();
            let l = algorithm1_lx(ctx, &all);
            let native = algorithm1_lx_native(ctx, &all);
            eprintln!("S{q}: |L| = {}, native {}", l.len(), native.len());
            let mut expected = vec![u0(cfg).unwrap()];
            if q < 3 {
                expected.push(u1_minus(cfg).unwrap());
                expected.push(u1_plus(cfg).unwrap());
            }
            for e in &expected {
                assert!(l.contains(e), "S{q} misses {e:?}");
            }
            assert_eq!(l.len(), expected.len(), "S{q}: {l:?}");
        }
    }
}
