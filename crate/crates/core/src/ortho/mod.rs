//! Ortholattices, sections, frames and the orthogonal semiframe construction.

mod frame;
mod semiframe;

pub use frame::{
    enumerate_frames, search_frame, search_orthogonal_semiframe, verify_frame, verify_ortho_frame, FrameJson,
    FrameKind, FrameWitness, FRAME_SEARCH_GUARD,
};
pub use semiframe::{build_orthogonal_semiframe, perp_partner_step, PerspectivePair};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lattice::{Congruence, FiniteLattice, Lattice, LatticeJson, Orthocomplemented};

/// A finite lattice with a validated orthocomplementation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrthoLattice {
    base: FiniteLattice,
    perp: Vec<usize>,
}

/// JSON wire format: a lattice plus `"perp": [..]`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrthoLatticeJson {
    #[serde(flatten)]
    pub lattice: LatticeJson,
    pub perp: Vec<usize>,
}

/// A section `[0,u]` materialized as an ortholattice, with the embedding of
/// its elements into the parent.
#[derive(Clone, Debug)]
pub struct Section {
    pub lattice: OrthoLattice,
    pub embed: Vec<usize>,
}

/// Whether a lattice congruence also respects the orthocomplement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PerpCompatibility {
    Compatible,
    /// `a θ b` but not `a^⊥ θ b^⊥`. When the base is modular this contradicts
    /// the known theorem and signals a bug in the library.
    Incompatible {
        a: usize,
        b: usize,
        library_inconsistency: bool,
    },
}

impl OrthoLattice {
    /// Check involution, order reversal and complementation exhaustively.
    pub fn new(base: FiniteLattice, perp: Vec<usize>) -> Result<Self> {
        let n = base.size();
        if perp.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "perp has {} entries for {n} elements",
                perp.len()
            )));
        }
        if let Some(&bad) = perp.iter().find(|&&p| p >= n) {
            return Err(Error::Parse(format!("perp value {bad} out of range")));
        }
        if let Some(a) = (0..n).find(|&a| perp[perp[a]] != a) {
            return Err(Error::NotInvolution(a));
        }
        for a in 0..n {
            for b in 0..n {
                if base.leq(a, b) && !base.leq(perp[b], perp[a]) {
                    return Err(Error::NotOrderReversing(a, b));
                }
            }
        }
        if let Some(a) = (0..n).find(|&a| base.join(a, perp[a]) != base.top() || base.meet(a, perp[a]) != base.bot()) {
            return Err(Error::NotComplement(a));
        }
        Ok(OrthoLattice { base, perp })
    }

    pub fn from_json(raw: &OrthoLatticeJson) -> Result<Self> {
        Self::new(FiniteLattice::from_json(&raw.lattice)?, raw.perp.clone())
    }

    pub fn from_json_value(v: &Value) -> Result<Self> {
        let raw: OrthoLatticeJson = serde_json::from_value(v.clone())?;
        Self::from_json(&raw)
    }

    pub fn to_json(&self) -> OrthoLatticeJson {
        OrthoLatticeJson {
            lattice: self.base.to_json(),
            perp: self.perp.clone(),
        }
    }

    pub fn base(&self) -> &FiniteLattice {
        &self.base
    }

    pub fn size(&self) -> usize {
        self.base.size()
    }

    pub fn perp_of(&self, a: usize) -> usize {
        self.perp[a]
    }

    pub fn perp_map(&self) -> &[usize] {
        &self.perp
    }

    pub fn orthogonal(&self, a: usize, b: usize) -> bool {
        self.base.leq(b, self.perp[a])
    }

    pub fn is_modular(&self) -> bool {
        self.base.is_modular()
    }

    /// The section `[0,u]` with relative complement `a ↦ u ∩ a^⊥`.
    pub fn section(&self, u: usize) -> Result<Section> {
        let embed: Vec<usize> = self.base.elements().filter(|&x| self.base.leq(x, u)).collect();
        let lattice = self.base.restrict(&embed)?;
        let index = |x: usize| embed.iter().position(|&y| y == x);
        let perp = embed
            .iter()
            .map(|&x| {
                let rel = self.base.meet(u, self.perp[x]);
                index(rel).ok_or(Error::InternalProofViolation(format!("relative complement of {x} escapes [0,{u}]")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Section {
            lattice: OrthoLattice::new(lattice, perp)?,
            embed,
        })
    }

    /// Semiframe construction, refused for non-modular lattices.
    pub fn orthogonal_semiframe(&self, frame: &FrameWitness<usize>) -> Result<FrameWitness<usize>> {
        if let Some((x, y, z)) = self.base.modularity_violation() {
            return Err(Error::PreconditionFailed(format!(
                "lattice is not modular: witness ({x}, {y}, {z})"
            )));
        }
        build_orthogonal_semiframe(self, frame)
    }

    pub fn check_congruence_perp(&self, theta: &Congruence) -> PerpCompatibility {
        let n = self.size();
        for a in 0..n {
            for b in a + 1..n {
                if theta.related(a, b) && !theta.related(self.perp[a], self.perp[b]) {
                    return PerpCompatibility::Incompatible {
                        a,
                        b,
                        library_inconsistency: self.is_modular(),
                    };
                }
            }
        }
        PerpCompatibility::Compatible
    }
}

impl Lattice for OrthoLattice {
    type Elem = usize;

    fn bot(&self) -> usize {
        self.base.bot()
    }
    fn top(&self) -> usize {
        self.base.top()
    }
    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.base.meet(*a, *b)
    }
    fn join(&self, a: &usize, b: &usize) -> usize {
        self.base.join(*a, *b)
    }
    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.base.leq(*a, *b)
    }
    fn sub_perspective(&self, a_sub: &usize, _a: &usize, b: &usize, _axis: &usize) -> Option<(usize, usize)> {
        self.base.sub_perspective(*a_sub, *b)
    }
    fn perspective_partner_within(&self, x: &usize, bound: &usize) -> Option<(usize, usize)> {
        self.base.sub_perspective(*x, *bound)
    }
}

impl Orthocomplemented for OrthoLattice {
    fn perp(&self, a: &usize) -> usize {
        self.perp[*a]
    }
}
