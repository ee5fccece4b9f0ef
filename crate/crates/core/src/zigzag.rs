//! The zigzag algebra of a Dynkin diagram, seen as a category with objects the
//! indecomposable projectives `P_i`.
//!
//! `Hom(P_i, P_i)` has basis `{id_i, ℓ_i}`, `Hom(P_i, P_j)` for adjacent `i, j`
//! is spanned by the arrow `γ_{i,j}`, and all other Hom spaces vanish. The only
//! nonzero composite of two non-identity basis morphisms is
//! `γ_{j,i} ∘ γ_{i,j} = ℓ_i`.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::diagram::{DynkinDiagram, Vertex};
use crate::error::{Error, Result};
use crate::field::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MorphKind {
    Identity,
    Loop,
    Arrow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorphBasisElement {
    pub src: Vertex,
    pub tgt: Vertex,
    pub kind: MorphKind,
}

impl MorphBasisElement {
    pub fn new(d: &DynkinDiagram, src: Vertex, tgt: Vertex, kind: MorphKind) -> Result<Self> {
        d.check_vertex(src)?;
        d.check_vertex(tgt)?;
        let ok = match kind {
            MorphKind::Identity | MorphKind::Loop => src == tgt,
            MorphKind::Arrow => d.adjacent(src, tgt),
        };
        if !ok {
            return Err(Error::Shape(format!("no {kind:?} from P{src} to P{tgt}")));
        }
        Ok(MorphBasisElement { src, tgt, kind })
    }
}

impl fmt::Display for MorphBasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MorphKind::Identity => write!(f, "id{}", self.src),
            MorphKind::Loop => write!(f, "l{}", self.src),
            MorphKind::Arrow => write!(f, "g{},{}", self.src, self.tgt),
        }
    }
}

/// A morphism `P_src → P_tgt`.
///
/// Coefficients are stored compactly: `c0` is the identity coefficient for an
/// endomorphism and the arrow coefficient between adjacent vertices; `c1` is
/// the loop coefficient (always zero off the diagonal).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MorphElement<F> {
    src: Vertex,
    tgt: Vertex,
    c0: F,
    c1: F,
}

impl<F: Field> MorphElement<F> {
    pub fn zero(src: Vertex, tgt: Vertex) -> Self {
        MorphElement { src, tgt, c0: F::zero(), c1: F::zero() }
    }

    pub fn identity(i: Vertex) -> Self {
        MorphElement { src: i, tgt: i, c0: F::one(), c1: F::zero() }
    }

    pub fn loop_at(i: Vertex) -> Self {
        MorphElement { src: i, tgt: i, c0: F::zero(), c1: F::one() }
    }

    /// `γ_{i,j}`; callers must ensure adjacency (see [`MorphElement::arrow_checked`]).
    pub fn arrow(i: Vertex, j: Vertex) -> Self {
        MorphElement { src: i, tgt: j, c0: F::one(), c1: F::zero() }
    }

    pub fn arrow_checked(d: &DynkinDiagram, i: Vertex, j: Vertex) -> Result<Self> {
        MorphBasisElement::new(d, i, j, MorphKind::Arrow)?;
        Ok(Self::arrow(i, j))
    }

    /// `a·id + b·ℓ` on `P_i`.
    pub fn endo(i: Vertex, a: F, b: F) -> Self {
        MorphElement { src: i, tgt: i, c0: a, c1: b }
    }

    pub fn scaled_arrow(i: Vertex, j: Vertex, c: F) -> Self {
        MorphElement { src: i, tgt: j, c0: c, c1: F::zero() }
    }

    pub fn basis(b: MorphBasisElement) -> Self {
        match b.kind {
            MorphKind::Identity => Self::identity(b.src),
            MorphKind::Loop => Self::loop_at(b.src),
            MorphKind::Arrow => Self::arrow(b.src, b.tgt),
        }
    }

    pub fn src(&self) -> Vertex {
        self.src
    }

    pub fn tgt(&self) -> Vertex {
        self.tgt
    }

    pub fn is_zero(&self) -> bool {
        self.c0.is_zero() && self.c1.is_zero()
    }

    pub fn is_endo(&self) -> bool {
        self.src == self.tgt
    }

    /// Identity coefficient (zero unless this is an endomorphism).
    pub fn identity_coeff(&self) -> F {
        if self.is_endo() {
            self.c0.clone()
        } else {
            F::zero()
        }
    }

    pub fn loop_coeff(&self) -> F {
        self.c1.clone()
    }

    pub fn arrow_coeff(&self) -> F {
        if self.is_endo() {
            F::zero()
        } else {
            self.c0.clone()
        }
    }

    /// Coordinates in the distinguished basis [`hom_basis`].
    pub fn coords(&self, d: &DynkinDiagram) -> Vec<F> {
        if self.is_endo() {
            vec![self.c0.clone(), self.c1.clone()]
        } else if d.adjacent(self.src, self.tgt) {
            vec![self.c0.clone()]
        } else {
            Vec::new()
        }
    }

    pub fn from_coords(d: &DynkinDiagram, src: Vertex, tgt: Vertex, coords: &[F]) -> Result<Self> {
        let expected = hom_dim(d, src, tgt);
        if coords.len() != expected {
            return Err(Error::Shape(format!("Hom(P{src}, P{tgt}) has dimension {expected}, got {} coordinates", coords.len())));
        }
        Ok(match expected {
            2 => Self::endo(src, coords[0].clone(), coords[1].clone()),
            1 => Self::scaled_arrow(src, tgt, coords[0].clone()),
            _ => Self::zero(src, tgt),
        })
    }

    pub fn scale(&self, s: &F) -> Self {
        MorphElement { src: self.src, tgt: self.tgt, c0: self.c0.clone() * s.clone(), c1: self.c1.clone() * s.clone() }
    }

    /// Sum of two parallel morphisms.
    pub fn add(&self, o: &Self) -> Self {
        debug_assert!(self.src == o.src && self.tgt == o.tgt);
        MorphElement { src: self.src, tgt: self.tgt, c0: self.c0.clone() + o.c0.clone(), c1: self.c1.clone() + o.c1.clone() }
    }

    pub fn neg(&self) -> Self {
        MorphElement { src: self.src, tgt: self.tgt, c0: -self.c0.clone(), c1: -self.c1.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Inverse of an endomorphism with unit identity coefficient:
    /// `(a + bℓ)^{-1} = a^{-1} − a^{-2} b ℓ`.
    pub fn inverse(&self) -> Option<Self> {
        if !self.is_endo() {
            return None;
        }
        let ai = self.c0.inv()?;
        let b = -(ai.clone() * ai.clone() * self.c1.clone());
        Some(Self::endo(self.src, ai, b))
    }

    pub fn terms(&self, d: &DynkinDiagram) -> Vec<(MorphBasisElement, F)> {
        hom_basis(d, self.src, self.tgt).into_iter().zip(self.coords(d)).filter(|(_, c)| !c.is_zero()).collect()
    }

    /// `{"src":1,"tgt":2,"terms":[{"kind":"arrow","coef":"1"}]}`
    pub fn to_json(&self, d: &DynkinDiagram) -> Value {
        let terms: Vec<Value> = self.terms(d).into_iter().map(|(b, c)| json!({"kind": b.kind, "coef": c.to_string()})).collect();
        json!({"src": self.src, "tgt": self.tgt, "terms": terms})
    }

    pub fn from_json(d: &DynkinDiagram, v: &Value) -> Result<Self> {
        let wire: MorphWire = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        d.check_vertex(wire.src)?;
        d.check_vertex(wire.tgt)?;
        let mut m = Self::zero(wire.src, wire.tgt);
        for t in wire.terms {
            let b = MorphBasisElement::new(d, wire.src, wire.tgt, t.kind)?;
            let c = F::parse_scalar(&t.coef)?;
            m = m.add(&Self::basis(b).scale(&c));
        }
        Ok(m)
    }
}

impl<F: Field> fmt::Display for MorphElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.is_endo() {
            if !self.c0.is_zero() {
                parts.push(format!("{}*id{}", self.c0, self.src));
            }
            if !self.c1.is_zero() {
                parts.push(format!("{}*l{}", self.c1, self.src));
            }
        } else if !self.c0.is_zero() {
            parts.push(format!("{}*g{},{}", self.c0, self.src, self.tgt));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Deserialize)]
struct MorphWire {
    src: Vertex,
    tgt: Vertex,
    #[serde(default)]
    terms: Vec<TermWire>,
}

#[derive(Deserialize)]
struct TermWire {
    kind: MorphKind,
    coef: String,
}

/// Which multiplication rule to use. Only [`CompositionTable::Zigzag`] is the
/// algebra; the corrupted table exists so self-tests can prove they notice a
/// broken model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CompositionTable {
    #[default]
    Zigzag,
    /// Pretends `γ_{j,i} ∘ γ_{i,j} = 0`.
    CorruptedLoops,
}

/// `g ∘ f` for `f: P_i → P_j`, `g: P_j → P_l`.
pub fn compose<F: Field>(g: &MorphElement<F>, f: &MorphElement<F>) -> Result<MorphElement<F>> {
    compose_with(CompositionTable::Zigzag, g, f)
}

pub fn compose_with<F: Field>(table: CompositionTable, g: &MorphElement<F>, f: &MorphElement<F>) -> Result<MorphElement<F>> {
    if g.src != f.tgt {
        return Err(Error::Shape(format!("cannot compose P{}→P{} after P{}→P{}", g.src, g.tgt, f.src, f.tgt)));
    }
    let mut out = compose_unchecked(g, f);
    if table == CompositionTable::CorruptedLoops && f.src == g.tgt && f.src != f.tgt {
        out = MorphElement::zero(f.src, g.tgt);
    }
    Ok(out)
}

pub(crate) fn compose_unchecked<F: Field>(g: &MorphElement<F>, f: &MorphElement<F>) -> MorphElement<F> {
    let (i, j, l) = (f.src, f.tgt, g.tgt);
    if f.is_zero() || g.is_zero() {
        return MorphElement::zero(i, l);
    }
    match (i == j, j == l) {
        (true, true) => MorphElement::endo(i, g.c0.clone() * f.c0.clone(), g.c0.clone() * f.c1.clone() + g.c1.clone() * f.c0.clone()),
        (true, false) => MorphElement::scaled_arrow(i, l, g.c0.clone() * f.c0.clone()),
        (false, true) => MorphElement::scaled_arrow(i, l, g.c0.clone() * f.c0.clone()),
        (false, false) => {
            if i == l {
                MorphElement::endo(i, F::zero(), g.c0.clone() * f.c0.clone())
            } else {
                MorphElement::zero(i, l)
            }
        }
    }
}

pub fn hom_dim(d: &DynkinDiagram, i: Vertex, j: Vertex) -> usize {
    if i == j {
        2
    } else if d.adjacent(i, j) {
        1
    } else {
        0
    }
}

/// `[id_i, ℓ_i]`, `[γ_{i,j}]` or `[]`.
pub fn hom_basis(d: &DynkinDiagram, i: Vertex, j: Vertex) -> Vec<MorphBasisElement> {
    if i == j {
        vec![MorphBasisElement { src: i, tgt: i, kind: MorphKind::Identity }, MorphBasisElement { src: i, tgt: i, kind: MorphKind::Loop }]
    } else if d.adjacent(i, j) {
        vec![MorphBasisElement { src: i, tgt: j, kind: MorphKind::Arrow }]
    } else {
        Vec::new()
    }
}

/// The `ℓ`-coefficient of an endomorphism.
pub fn trace<F: Field>(f: &MorphElement<F>) -> Result<F> {
    if !f.is_endo() {
        return Err(Error::Shape(format!("trace of a non-endomorphism P{}→P{}", f.src, f.tgt)));
    }
    Ok(f.c1.clone())
}

/// `(f, g) ↦ trace(g ∘ f)` for `f: P_i → P_j`, `g: P_j → P_i`.
pub fn pairing<F: Field>(f: &MorphElement<F>, g: &MorphElement<F>) -> Result<F> {
    pairing_with(CompositionTable::Zigzag, f, g)
}

pub fn pairing_with<F: Field>(table: CompositionTable, f: &MorphElement<F>, g: &MorphElement<F>) -> Result<F> {
    trace(&compose_with(table, g, f)?)
}

/// For the basis `e_1, ..., e_m` of `Hom(P_i, P_j)`, the basis `e^1, ..., e^m`
/// of `Hom(P_j, P_i)` with `pairing(e_a, e^b) = δ_{ab}`.
pub fn dual_basis<F: Field>(d: &DynkinDiagram, i: Vertex, j: Vertex) -> Vec<MorphElement<F>> {
    if i == j {
        vec![MorphElement::loop_at(i), MorphElement::identity(i)]
    } else if d.adjacent(i, j) {
        vec![MorphElement::arrow(j, i)]
    } else {
        Vec::new()
    }
}
