//! Flipping any triangulation of the 4-cube to a corner-cut triangulation:
//! greedy corner reduction, the escape from the exceptional links, corner
//! insertion, and the outer loop over a parity class.

use std::sync::OnceLock;

use crate::complex::{cube_corner, is_corner_cut, same_config, CubeClass, Triangulation};
use crate::contraction::{contract_circuit, contract_link, full_context, star_volume_d, vertex_set_v};
use crate::error::{Error, Result};
use crate::flips::{apply_unchecked, is_flippable, FlipMove};
use crate::kernel::{Circuit, Face};
use crate::presets::{cube4, s_removed, u1_minus};
use crate::symmetry::{cube_group, SymMap};

/// A start triangulation, a sequence of flips, and the result of applying
/// them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipPath {
    pub start: Triangulation,
    pub moves: Vec<FlipMove>,
    pub end: Triangulation,
}

impl FlipPath {
    pub fn empty(t: &Triangulation) -> FlipPath {
        FlipPath {
            start: t.clone(),
            moves: Vec::new(),
            end: t.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    /// Replays the moves from `start`, re-checking each flip and validating
    /// every intermediate triangulation; returns the final one.
    pub fn replay(&self) -> Result<Triangulation> {
        let mut t = self.start.clone();
        t.validate()?;
        for m in &self.moves {
            t = crate::flips::apply_flip(&t, m)?;
            t.validate()?;
        }
        if t != self.end {
            return Err(Error::Paradox("replayed path does not reach its recorded end".into()));
        }
        Ok(t)
    }

    /// Appends `other`, which must start where `self` ends.
    pub fn extend(&mut self, other: FlipPath) {
        debug_assert_eq!(self.end, other.start);
        self.moves.extend(other.moves);
        self.end = other.end;
    }
}

/// Mutable walk state accumulating a path.
struct Tracker {
    path: FlipPath,
}

impl Tracker {
    fn new(t: &Triangulation) -> Tracker {
        Tracker { path: FlipPath::empty(t) }
    }

    fn t(&self) -> &Triangulation {
        &self.path.end
    }

    fn push(&mut self, m: FlipMove) {
        self.path.end = apply_unchecked(&self.path.end, &m);
        self.path.moves.push(m);
    }

    fn extend(&mut self, p: FlipPath) {
        self.path.extend(p);
    }
}

fn require_cube4(t: &Triangulation) -> Result<()> {
    if same_config(t.cfg(), &cube4()) {
        Ok(())
    } else {
        Err(Error::PreconditionFailed(format!(
            "expected a triangulation of cube4, got one of {}",
            t.cfg().name()
        )))
    }
}

/// Cube circuits through `x` (oriented with `x` negative) paired with their
/// contractions at `x`, in canonical circuit order.
fn apex_circuits(x: usize) -> &'static [(Circuit, Circuit)] {
    static ALL: OnceLock<Vec<Vec<(Circuit, Circuit)>>> = OnceLock::new();
    &ALL.get_or_init(|| {
        let cube = cube4();
        (0..16)
            .map(|x| {
                let ctx = full_context(x);
                cube.circuits()
                    .all()
                    .iter()
                    .filter_map(|z| z.through(x))
                    .map(|z| (z, contract_circuit(ctx, &z).expect("cube circuit through the apex")))
                    .collect()
            })
            .collect()
    })[x]
}

/// Flips circuits through `x` whose contraction is flippable in the
/// contracted link with the apex side present, smallest circuit first,
/// until none is left. Faces of `t` not containing `x` survive.
pub fn greedy_corner_reduce(t: &Triangulation, x: usize) -> Result<FlipPath> {
    require_cube4(t)?;
    let mut tr = Tracker::new(t);
    let mut volume = star_volume_d(t, x)?;
    let mut vertices = vertex_set_v(t, x)?;
    loop {
        if tr.t().has_cell(cube_corner(x)) {
            break;
        }
        let link = contract_link(tr.t(), x)?;
        let step = apex_circuits(x).iter().find(|(_, cz)| {
            link.has_face(cz.neg) && is_flippable(&link, cz, cz.neg).is_some()
        });
        let Some((z, _)) = step else { break };
        let cube = tr.t().cfg().clone();
        let m = is_flippable(tr.t(), z, z.neg).ok_or_else(|| {
            Error::Paradox(format!(
                "{} is flippable in the contracted link of {} but not in the triangulation",
                z.display(&cube),
                cube.label(x)
            ))
        })?;
        let m = canonical_move(&cube, m);
        tr.push(m);
        let next_volume = star_volume_d(tr.t(), x)?;
        let next_vertices = vertex_set_v(tr.t(), x)?;
        if next_volume >= volume {
            return Err(Error::Paradox(format!(
                "star volume of {} did not decrease ({} -> {})",
                cube.label(x),
                volume,
                next_volume
            )));
        }
        if !next_vertices.is_subset_of(vertices) {
            return Err(Error::Paradox(format!(
                "flip added {} to the link of {}",
                cube.face_set(next_vertices.difference(vertices)),
                cube.label(x)
            )));
        }
        volume = next_volume;
        vertices = next_vertices;
    }
    Ok(tr.path)
}

/// Rewrites a move so its circuit carries the table's orientation.
fn canonical_move(cfg: &crate::Config, m: FlipMove) -> FlipMove {
    let table = cfg.circuits();
    match table.index_of_support(m.circuit.support) {
        Some(i) => FlipMove {
            circuit: table.get(i),
            ..m
        },
        None => m,
    }
}

/// Maps a move through a cube symmetry.
fn map_move(g: &SymMap, m: &FlipMove) -> FlipMove {
    let cube = cube4();
    let support = g.apply_face(m.circuit.support);
    let circuit = cube
        .circuits()
        .index_of_support(support)
        .map(|i| cube.circuits().get(i))
        .expect("symmetries map circuits to circuits");
    let mut link: Vec<Face> = m.link.iter().map(|&l| g.apply_face(l)).collect();
    link.sort_unstable();
    FlipMove {
        circuit,
        removed: g.apply_face(m.removed),
        link,
    }
}

fn map_path(g: &SymMap, p: &FlipPath) -> FlipPath {
    FlipPath {
        start: g.map_triangulation(&p.start),
        moves: p.moves.iter().map(|m| map_move(g, m)).collect(),
        end: g.map_triangulation(&p.end),
    }
}

/// The canonical frame for the exceptional link: the smallest cube symmetry
/// taking `x` to `a` and the contracted link of `x` to `U1-`.
fn u1_frame(t: &Triangulation, x: usize) -> Option<&'static SymMap> {
    let target = full_context(0).target.clone();
    let u1 = u1_minus(&target).expect("U1- lies in the contraction at a");
    cube_group()
        .iter()
        .filter(|g| g.apply(x) == 0)
        .find(|g| contract_link(&g.map_triangulation(t), 0).is_ok_and(|l| l == u1))
}

/// Leaves the exceptional link at `x`: inserts the corner at the vertex
/// opposite to `x` in the frame, then flips `{b,c,f,g}` and `{a,b,e,f}`
/// (frame labels), which drops one vertex from the link of `x`.
pub fn escape_u1(t: &Triangulation, x: usize) -> Result<FlipPath> {
    require_cube4(t)?;
    let cube = t.cfg().clone();
    let g = u1_frame(t, x).ok_or_else(|| Error::NotU1(cube.label(x).to_string()))?;
    let f = |s: &str| cube.face_str(s).expect("cube labels");
    let d = cube.index_of("d").expect("cube label");
    let framed = g.map_triangulation(t);
    let vertices_before = vertex_set_v(&framed, 0)?;

    let mut tr = Tracker::new(&framed);
    tr.extend(greedy_corner_reduce(&framed, d)?);
    if !tr.t().has_cell(cube_corner(d)) {
        return Err(Error::Paradox("greedy reduction at d did not reach the corner".into()));
    }
    for (z, removed) in [("bcfg", "cf"), ("abef", "af")] {
        let z = cube
            .circuits()
            .index_of_support(f(z))
            .map(|i| cube.circuits().get(i))
            .expect("cube circuit");
        let m = is_flippable(tr.t(), &z, f(removed)).ok_or_else(|| {
            Error::Paradox(format!("{} is not flippable in the exceptional frame", z.display(&cube)))
        })?;
        tr.push(m);
    }
    let vertices_after = vertex_set_v(tr.t(), 0)?;
    if vertices_after != vertices_before.without(cube.index_of("f").expect("cube label")) {
        return Err(Error::Paradox("escape did not remove exactly f from the link of a".into()));
    }
    Ok(map_path(&g.inverse(), &tr.path))
}

fn sigma_isolated(t: &Triangulation, x: usize) -> bool {
    (2..=4).all(|q| t.sigma_graph(q).is_isolated(x))
}

/// Whether the link vertices of `x` fit, up to a cube symmetry taking `x`
/// to `a`, into the points kept by `S_q`.
pub fn embeds_in_s(t: &Triangulation, x: usize, q: usize) -> Result<bool> {
    let v = vertex_set_v(t, x)?;
    let cube = cube4();
    let kept = cube
        .all()
        .difference(cube.face_str(s_removed(q)).expect("cube labels"))
        .without(0);
    Ok(cube_group()
        .iter()
        .any(|g| g.apply(x) == 0 && g.apply_face(v).is_subset_of(kept)))
}

/// Inserts the corner simplex at `x`, leaving every face disjoint from the
/// parity class of `x` in place.
pub fn insert_corner(t: &Triangulation, x: usize) -> Result<FlipPath> {
    require_cube4(t)?;
    let cube = t.cfg().clone();
    if t.has_cell(cube_corner(x)) {
        return Ok(FlipPath::empty(t));
    }
    let mut fits = false;
    for q in 1..=3 {
        fits |= embeds_in_s(t, x, q)?;
    }
    if !fits {
        return Err(Error::PreconditionFailed(format!(
            "link vertices of {} embed in none of S1, S2, S3",
            cube.label(x)
        )));
    }
    let class = CubeClass::of(x);
    let corners_before: Vec<usize> = class
        .members()
        .iter()
        .filter(|&y| t.has_cell(cube_corner(y)))
        .collect();

    let mut tr = Tracker::new(t);
    tr.extend(greedy_corner_reduce(t, x)?);
    if !tr.t().has_cell(cube_corner(x)) {
        let escape = escape_u1(tr.t(), x).map_err(|e| match e {
            Error::NotU1(l) => Error::Paradox(format!("reduced link of {l} is neither U0 nor U1-/U1+")),
            e => e,
        })?;
        tr.extend(escape);
        tr.extend(greedy_corner_reduce(tr.t(), x)?);
        if !tr.t().has_cell(cube_corner(x)) {
            return Err(Error::Paradox(format!(
                "greedy reduction after the escape left no corner at {}",
                cube.label(x)
            )));
        }
    }
    let end = tr.t();
    if !sigma_isolated(end, x) {
        return Err(Error::Paradox(format!("corner at {} present but not isolated", cube.label(x))));
    }
    if let Some(&lost) = t
        .cells()
        .iter()
        .find(|c| c.is_disjoint(class.members()) && !end.has_face(**c))
    {
        return Err(Error::Paradox(format!("lost face {} disjoint from the class", cube.face_set(lost))));
    }
    if let Some(&y) = corners_before.iter().find(|&&y| !end.has_cell(cube_corner(y))) {
        return Err(Error::Paradox(format!("corner at {} was removed", cube.label(y))));
    }
    Ok(tr.path)
}

/// The class whose corners are inserted: the class not containing the ends
/// of a squared-length-4 edge if there is one, else `E`.
pub fn working_class(t: &Triangulation) -> CubeClass {
    match t.sigma_graph(4).edges.first() {
        Some(e) => CubeClass::of(e.first().expect("edge")).other(),
        None => CubeClass::E,
    }
}

/// Flips `t` to a corner-cut triangulation.
pub fn flip_to_corner_cut(t: &Triangulation) -> Result<FlipPath> {
    require_cube4(t)?;
    let mut tr = Tracker::new(t);
    let mut last: Option<(CubeClass, usize)> = None;
    while is_corner_cut(tr.t()).is_none() {
        let class = working_class(tr.t());
        let count = crate::complex::corner_count(tr.t(), class);
        if let Some((c, n)) = last {
            if c == class && count <= n {
                return Err(Error::Paradox(format!("corner count in {} did not increase", class.name())));
            }
        }
        last = Some((class, count));
        let mut pick = None;
        for x in class.members().iter() {
            if tr.t().has_cell(cube_corner(x)) {
                continue;
            }
            let mut fits = false;
            for q in 1..=3 {
                fits |= embeds_in_s(tr.t(), x, q)?;
            }
            if fits {
                pick = Some(x);
                break;
            }
        }
        let Some(x) = pick else {
            return Err(Error::Paradox(format!(
                "no vertex of {} admits a corner insertion in a non-corner-cut triangulation",
                class.name()
            )));
        };
        let step = insert_corner(tr.t(), x)?;
        tr.extend(step);
    }
    Ok(tr.path)
}
