//! Filtering the triangulations of a contracted configuration down to those
//! in which no circuit through the apex can be flipped with its apex side
//! present.

use crate::complex::Triangulation;
use crate::contraction::{contracted_circuits, ContractionContext};
use crate::kernel::{Circuit, Face};

/// An oriented circuit of the target: `neg` must be present before the flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedCircuit {
    pub support: Face,
    pub neg: Face,
    pub pos: Face,
}

impl From<Circuit> for OrientedCircuit {
    fn from(z: Circuit) -> Self {
        OrientedCircuit {
            support: z.support,
            neg: z.neg,
            pos: z.pos,
        }
    }
}

/// Contracted cube circuits through the apex, oriented with the apex side
/// negative.
pub fn cube_circuit_orientations(ctx: &ContractionContext) -> Vec<OrientedCircuit> {
    contracted_circuits(ctx).into_iter().map(OrientedCircuit::from).collect()
}

/// Circuits of the target configuration itself. A circuit whose lift
/// together with the apex is a cube circuit takes that circuit's
/// orientation; any other circuit is tried in both orientations.
pub fn native_circuit_orientations(ctx: &ContractionContext) -> Vec<OrientedCircuit> {
    let cube_circuits = ctx.source.circuits();
    let mut out = Vec::new();
    for z in ctx.target.circuits().all() {
        let lifted = ctx.lift(z.support).with(ctx.apex);
        match cube_circuits.index_of_support(lifted) {
            Some(i) => {
                let c = cube_circuits.get(i).through(ctx.apex).expect("lift contains the apex");
                let neg = ctx.contract_face(c.neg.without(ctx.apex)).expect("kept");
                let pos = ctx.contract_face(c.pos).expect("kept");
                out.push(OrientedCircuit {
                    support: z.support,
                    neg,
                    pos,
                });
            }
            None => {
                out.push(OrientedCircuit::from(*z));
                out.push(OrientedCircuit::from(z.flipped()));
            }
        }
    }
    out
}

/// Whether some circuit can be flipped in `t` with its negative side
/// present (the flags `f1`/`f2` of the scan).
pub fn has_apex_flip(t: &Triangulation, circuits: &[OrientedCircuit]) -> bool {
    let cells = t.cells();
    let link_of = |m: Face| -> Vec<Face> {
        let mut l: Vec<Face> = cells
            .iter()
            .filter(|&&c| m.is_subset_of(c))
            .map(|&c| c.difference(m))
            .collect();
        l.sort_unstable();
        l
    };
    let mut f1 = false;
    for z in circuits {
        let mut lambda: Option<Vec<Face>> = None;
        let mut f2 = true;
        for y in z.pos.iter() {
            let l = link_of(z.support.without(y));
            if l.is_empty() {
                f2 = false;
                break;
            }
            match &lambda {
                None => lambda = Some(l),
                Some(prev) if *prev != l => {
                    f2 = false;
                    break;
                }
                Some(_) => {}
            }
        }
        if f2 {
            f1 = true;
            break;
        }
    }
    f1
}

/// `L_x(S)`: the triangulations among `trias` with no flippable contracted
/// cube circuit through the apex whose apex side is present.
pub fn algorithm1_lx(ctx: &ContractionContext, trias: &[Triangulation]) -> Vec<Triangulation> {
    filter(trias, &cube_circuit_orientations(ctx))
}

/// The same scan over the native circuits of the target configuration.
pub fn algorithm1_lx_native(ctx: &ContractionContext, trias: &[Triangulation]) -> Vec<Triangulation> {
    filter(trias, &native_circuit_orientations(ctx))
}

fn filter(trias: &[Triangulation], circuits: &[OrientedCircuit]) -> Vec<Triangulation> {
    trias
        .iter()
        .filter(|t| !has_apex_flip(t, circuits))
        .cloned()
        .collect()
}
