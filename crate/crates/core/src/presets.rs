//! Built-in configurations: the 3- and 4-cube and the three contracted
//! configurations S1, S2, S3 used for the corner analysis at vertex `a`.

use std::sync::{Arc, OnceLock};

use crate::complex::Triangulation;
use crate::contraction::{contract_config, ContractionContext};
use crate::flips::{apply_flip, is_flippable};
use crate::kernel::{radon_partition, rat, Config, Face};

/// Names accepted by [`by_name`].
pub const PRESET_NAMES: [&str; 5] = ["cube3", "cube4", "S1", "S2", "S3"];

fn cube(dim: usize, name: &str) -> Config {
    let points = (0..1usize << dim)
        .map(|i| {
            let label = ((b'a' + i as u8) as char).to_string();
            let coords = (0..dim).map(|j| rat((i >> j & 1) as i64)).collect();
            (label, coords)
        })
        .collect();
    Config::new(name, dim, points).expect("cube vertices are distinct")
}

/// The 16 vertices of the 4-cube, labeled `a..p`; bit `j` of a label's
/// offset from `a` is its `u_{j+1}` coordinate.
pub fn cube4() -> Arc<Config> {
    static CUBE4: OnceLock<Arc<Config>> = OnceLock::new();
    CUBE4.get_or_init(|| Arc::new(cube(4, "cube4"))).clone()
}

/// The 8 vertices of the 3-cube, labeled `a..h` like the `u_4 = 0` facet of
/// the 4-cube.
pub fn cube3() -> Arc<Config> {
    static CUBE3: OnceLock<Arc<Config>> = OnceLock::new();
    CUBE3.get_or_init(|| Arc::new(cube(3, "cube3"))).clone()
}

/// Cube vertices removed (besides the apex `a`) to form S1, S2, S3.
pub fn s_removed(q: usize) -> &'static str {
    match q {
        1 => "hnop",
        2 => "djkp",
        3 => "fgjkp",
        _ => panic!("S_q is defined for q in 1..=3"),
    }
}

/// Contraction context at `a` whose target is S_q.
pub fn s_context(q: usize) -> &'static ContractionContext {
    static CTX: OnceLock<Vec<ContractionContext>> = OnceLock::new();
    let all = CTX.get_or_init(|| {
        (1..=3)
            .map(|q| {
                let cube = cube4();
                let removed = cube.face_str(s_removed(q)).expect("cube labels");
                let a = cube.index_of("a").expect("cube label");
                let keep = cube.all().difference(removed).without(a);
                contract_config(&cube, a, keep, &format!("S{q}")).expect("S_q contains the corner base")
            })
            .collect()
    });
    &all[q - 1]
}

pub fn s_config(q: usize) -> Arc<Config> {
    s_context(q).target.clone()
}

/// Looks up a preset by name (case-insensitive).
pub fn by_name(name: &str) -> Option<Arc<Config>> {
    match name.to_ascii_lowercase().as_str() {
        "cube3" => Some(cube3()),
        "cube4" => Some(cube4()),
        "s1" => Some(s_config(1)),
        "s2" => Some(s_config(2)),
        "s3" => Some(s_config(3)),
        _ => None,
    }
}

/// Labels of `cube4` as a face, for terse tests: `cube4_face("abce")`.
pub fn cube4_face(labels: &str) -> Face {
    cube4().face_str(labels).expect("cube4 labels")
}

/// Cells of `U1-` at `a`, by cube labels.
pub const U1_MINUS: [&str; 9] = [
    "bcfl", "bflm", "bilm", "cfgl", "cgil", "efgl", "eflm", "eglm", "gilm",
];

/// Circuits flipped to pass from `U1-` to `U1+`.
pub const U1_FLIPS: [&str; 3] = ["bcfg", "bfim", "cgim"];

/// The single-tetrahedron triangulation `U0` of a contraction at `a`.
pub fn u0(target: &Arc<Config>) -> crate::Result<Triangulation> {
    Triangulation::new(target.clone(), [target.face_str("bcei")?])
}

/// `U1-` as a triangulation of a contraction at `a` containing its vertices.
pub fn u1_minus(target: &Arc<Config>) -> crate::Result<Triangulation> {
    let cells = U1_MINUS
        .iter()
        .map(|c| target.face_str(c))
        .collect::<crate::Result<Vec<_>>>()?;
    Triangulation::new(target.clone(), cells)
}

/// `U1+`: `U1-` with its three independent flips applied.
pub fn u1_plus(target: &Arc<Config>) -> crate::Result<Triangulation> {
    let mut t = u1_minus(target)?;
    for z in U1_FLIPS {
        let z = radon_partition(target.face_str(z)?, target)?;
        let m = is_flippable(&t, &z, z.neg)
            .or_else(|| is_flippable(&t, &z, z.pos))
            .ok_or_else(|| crate::Error::NotFlippable(z.display(target)))?;
        t = apply_flip(&t, &m)?;
    }
    Ok(t)
}
