//! Homogeneous contraction of the 4-cube at a vertex `x`: every other vertex
//! `y` is projected from `x` onto the hyperplane `(y - x)·(p - 2x) = 4`,
//! where `p` is the all-ones vertex.

use std::sync::{Arc, OnceLock};

use num_traits::Zero;

use crate::complex::{cube_corner, Triangulation};
use crate::error::{Error, Result};
use crate::kernel::{rat, Circuit, Config, Face, Rational};
use crate::presets;

/// A contracted configuration together with its label correspondence.
///
/// Target points keep the labels of the cube vertices they come from.
#[derive(Debug)]
pub struct ContractionContext {
    pub apex: usize,
    pub source: Arc<Config>,
    pub target: Arc<Config>,
    /// Source index to target index.
    pub forward: Vec<Option<usize>>,
    /// Target index to source index.
    pub inverse: Vec<usize>,
}

impl ContractionContext {
    /// Source points present in the target.
    pub fn kept(&self) -> Face {
        self.inverse.iter().copied().collect()
    }

    /// Maps a face of the source avoiding the apex into the target.
    pub fn contract_face(&self, f: Face) -> Option<Face> {
        f.iter()
            .map(|i| self.forward.get(i).copied().flatten())
            .collect::<Option<Face>>()
    }

    /// Maps a face of the target back to source labels.
    pub fn lift(&self, f: Face) -> Face {
        f.iter().map(|i| self.inverse[i]).collect()
    }
}

/// `y/x`, computed exactly.
pub fn contract_point(cfg: &Config, x: usize, y: usize) -> Result<Vec<Rational>> {
    if x == y {
        return Err(Error::SameLabel(cfg.label(x).to_string()));
    }
    let px = cfg.coords(x);
    let py = cfg.coords(y);
    let dot = py
        .iter()
        .zip(px)
        .map(|(b, a)| (b - a) * (rat(1) - rat(2) * a))
        .fold(Rational::zero(), |s, t| s + t);
    if dot.is_zero() {
        return Err(Error::DegenerateConfig(format!(
            "`{}` is parallel to the contraction hyperplane at `{}`",
            cfg.label(y),
            cfg.label(x)
        )));
    }
    let scale = rat(4) / dot;
    Ok(px.iter().zip(py).map(|(a, b)| a + &scale * (b - a)).collect())
}

/// Contracts the points of `keep` at `x`. `keep` must contain the corner
/// base `κ(x) \ {x}`.
pub fn contract_config(cfg: &Arc<Config>, x: usize, keep: Face, name: &str) -> Result<ContractionContext> {
    if keep.contains(x) {
        return Err(Error::SameLabel(cfg.label(x).to_string()));
    }
    let base = crate::complex::corner_simplex(cfg, x)?.without(x);
    if !base.is_subset_of(keep) {
        return Err(Error::MissingCornerBase(cfg.face_set(base)));
    }
    let mut points = Vec::with_capacity(keep.len());
    let mut forward = vec![None; cfg.len()];
    let mut inverse = Vec::with_capacity(keep.len());
    for y in keep.iter() {
        forward[y] = Some(inverse.len());
        inverse.push(y);
        points.push((cfg.label(y).to_string(), contract_point(cfg, x, y)?));
    }
    let target = Arc::new(Config::new(name, cfg.ambient_dim(), points)?);
    Ok(ContractionContext {
        apex: x,
        source: cfg.clone(),
        target,
        forward,
        inverse,
    })
}

/// The contraction of all fifteen other cube vertices at `x`.
pub fn full_context(x: usize) -> &'static ContractionContext {
    static ALL: OnceLock<Vec<OnceLock<ContractionContext>>> = OnceLock::new();
    let slots = ALL.get_or_init(|| (0..16).map(|_| OnceLock::new()).collect());
    slots[x].get_or_init(|| {
        let cube = presets::cube4();
        let keep = cube.all().without(x);
        contract_config(&cube, x, keep, &format!("cube4/{}", cube.label(x))).expect("cube contraction")
    })
}

/// Contracts a circuit through the apex; the side containing the apex
/// becomes the negative side.
pub fn contract_circuit(ctx: &ContractionContext, z: &Circuit) -> Result<Circuit> {
    let x = ctx.apex;
    let src = &ctx.source;
    let z = z
        .through(x)
        .ok_or_else(|| Error::NotThroughApex(z.display(src), src.label(x).to_string()))?;
    let neg = z.neg.without(x);
    if neg.is_empty() {
        return Err(Error::NotACircuit(src.face_set(z.support)));
    }
    let map = |f: Face| ctx.contract_face(f).ok_or_else(|| Error::OutOfScope(src.face_set(z.support)));
    let neg = map(neg)?;
    let pos = map(z.pos)?;
    Ok(Circuit {
        support: neg.union(pos),
        neg,
        pos,
    })
}

/// Cube circuits through `x` supported in the context, contracted, in the
/// canonical order of the source circuits.
pub fn contracted_circuits(ctx: &ContractionContext) -> Vec<Circuit> {
    let keep = ctx.kept().with(ctx.apex);
    ctx.source
        .circuits()
        .all()
        .iter()
        .filter(|z| z.support.contains(ctx.apex) && z.support.is_subset_of(keep))
        .map(|z| contract_circuit(ctx, z).expect("circuit through the apex within the kept set"))
        .collect()
}

fn require_vertex(t: &Triangulation, x: usize) -> Result<()> {
    if x >= t.cfg().len() || !t.has_face(Face::singleton(x)) {
        let label = if x < t.cfg().len() { t.cfg().label(x).to_string() } else { format!("#{x}") };
        return Err(Error::NotAVertex(label));
    }
    Ok(())
}

/// `link_T({x})/x` as a triangulation of the full contraction at `x`.
pub fn contract_link(t: &Triangulation, x: usize) -> Result<Triangulation> {
    require_vertex(t, x)?;
    let ctx = full_context(x);
    let cells = t
        .link(Face::singleton(x))?
        .into_iter()
        .map(|l| ctx.contract_face(l).expect("link avoids the apex"))
        .collect();
    Ok(Triangulation::from_cells(ctx.target.clone(), cells))
}

/// `V_x(T)`: the vertices of the link of `x`, as cube labels.
pub fn vertex_set_v(t: &Triangulation, x: usize) -> Result<Face> {
    require_vertex(t, x)?;
    Ok(t.link(Face::singleton(x))?
        .into_iter()
        .fold(Face::EMPTY, |a, l| a.union(l)))
}

/// Volume of the domain of the star of `x`.
pub fn star_volume_d(t: &Triangulation, x: usize) -> Result<Rational> {
    require_vertex(t, x)?;
    Ok(t.star_volume(Face::singleton(x)))
}

/// `κ(x)` is a cell exactly when the contracted link is the single
/// tetrahedron `(κ(x) \ {x})/x`.
pub fn link_is_corner(t: &Triangulation, x: usize) -> bool {
    t.has_cell(cube_corner(x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use crate::complex::{make_corner_cut, CubeClass};
    use crate::kernel::{radon_partition, ratio};
    use crate::presets::{cube4, cube4_face as f, s_config};

    fn idx(s: &str) -> usize {
        cube4().index_of(s).unwrap()
    }

    fn r(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn contracted_points() {
        let cube = cube4();
        assert_eq!(contract_point(&cube, idx("a"), idx("p")).unwrap(), r(&[1, 1, 1, 1]));
        assert_eq!(contract_point(&cube, idx("a"), idx("b")).unwrap(), r(&[4, 0, 0, 0]));
        assert_eq!(contract_point(&cube, idx("b"), idx("e")).unwrap(), r(&[-1, 0, 2, 0]));
        assert!(matches!(contract_point(&cube, 3, 3), Err(Error::SameLabel(_))));
    }

    #[test]
    fn contracted_configs() {
        let ctx = full_context(0);
        assert_eq!(ctx.target.len(), 15);
        assert_eq!(ctx.target.affine_dim(), 3);
        assert_eq!(s_config(1).len(), 11);
        assert_eq!(s_config(2).len(), 11);
        assert_eq!(s_config(3).len(), 10);
        let cube = cube4();
        let keep = cube.all().without(0).without(idx("b"));
        assert!(matches!(
            contract_config(&cube, 0, keep, "bad"),
            Err(Error::MissingCornerBase(_))
        ));
        // every contracted point lies in the tetrahedron spanned by 4b,4c,4e,4i
        let tgt = &ctx.target;
        let base = ctx.contract_face(f("bcei")).unwrap();
        for q in 0..tgt.len() {
            let bary = tgt.barycentric(base, q).unwrap();
            assert!(bary.iter().all(|c| *c >= rat(0)), "{}", tgt.label(q));
        }
        assert_eq!(tgt.hull_volume(), &tgt.signed_volume(base).unwrap().abs());
    }

    #[test]
    fn escape_circuit_contracts() {
        let ctx = full_context(0);
        let z = radon_partition(f("abef"), &cube4()).unwrap();
        let c = contract_circuit(ctx, &z).unwrap();
        let tgt = &ctx.target;
        assert_eq!(tgt.format_face(c.support), "b e f");
        assert_eq!(tgt.format_face(c.neg), "f");
        assert_eq!(tgt.format_face(c.pos), "b e");
        let other = radon_partition(f("bcfg"), &cube4()).unwrap();
        assert!(matches!(contract_circuit(ctx, &other), Err(Error::NotThroughApex(..))));
    }

    #[test]
    fn corner_link_is_a_single_tetrahedron() {
        let t = make_corner_cut(CubeClass::O, f("el")).unwrap();
        let a = idx("a");
        let link = contract_link(&t, a).unwrap();
        assert_eq!(link.len(), 1);
        assert_eq!(link.cfg().format_face(link.cells()[0]), "b c e i");
        link.validate().unwrap();
        assert_eq!(vertex_set_v(&t, a).unwrap(), f("bcei"));
        assert_eq!(star_volume_d(&t, a).unwrap(), ratio(1, 24));
        assert!(link_is_corner(&t, a));
        let e = make_corner_cut(CubeClass::E, f("ap")).unwrap();
        assert!(star_volume_d(&e, a).unwrap() <= rat(1));
        assert!(!vertex_set_v(&e, a).unwrap().contains(a));
    }
}
