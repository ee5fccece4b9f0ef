//! Words as finite vertex sets of the translation quiver `ZΓ`, integer
//! decorations satisfying mesh relations, and the commutation / braiding moves
//! used to exhibit a left divisor.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::braid::{BraidWord, LayeredWord};
use crate::diagram::{DynkinDiagram, Vertex};
use crate::error::{Error, Result};

/// A vertex `(n, j)` of `ZΓ`; `j` has colour `n mod 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(i64, Vertex)", into = "(i64, Vertex)")]
pub struct ZGammaVertex {
    pub slice: i64,
    pub vertex: Vertex,
}

impl From<(i64, Vertex)> for ZGammaVertex {
    fn from((slice, vertex): (i64, Vertex)) -> Self {
        ZGammaVertex { slice, vertex }
    }
}

impl From<ZGammaVertex> for (i64, Vertex) {
    fn from(v: ZGammaVertex) -> Self {
        (v.slice, v.vertex)
    }
}

impl ZGammaVertex {
    pub fn new(d: &DynkinDiagram, slice: i64, vertex: Vertex) -> Result<Self> {
        let v = ZGammaVertex { slice, vertex };
        v.check(d)?;
        Ok(v)
    }

    fn check(&self, d: &DynkinDiagram) -> Result<()> {
        d.check_vertex(self.vertex)?;
        if self.slice.rem_euclid(2) != d.color(self.vertex) as i64 {
            return Err(Error::Precondition(format!("{self} has the wrong parity for {d}")));
        }
        Ok(())
    }

    fn shifted(self, by: i64) -> Self {
        ZGammaVertex { slice: self.slice + by, vertex: self.vertex }
    }
}

impl fmt::Display for ZGammaVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.slice, self.vertex)
    }
}

/// Nearest same-label predecessor of a vertex, possibly the imaginary
/// vertex `(-inf, j)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tau {
    Real(ZGammaVertex),
    Imaginary(Vertex),
}

impl Tau {
    pub fn real(self) -> Option<ZGammaVertex> {
        match self {
            Tau::Real(v) => Some(v),
            Tau::Imaginary(_) => None,
        }
    }

    pub fn is_imaginary(&self) -> bool {
        matches!(self, Tau::Imaginary(_))
    }
}

impl fmt::Display for Tau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tau::Real(v) => write!(f, "{v}"),
            Tau::Imaginary(j) => write!(f, "(-inf,{j})"),
        }
    }
}

/// A finite vertex set `Λ` of `ZΓ` with `θ` on `Λ` and on the imaginary
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedSet {
    diagram: DynkinDiagram,
    theta: BTreeMap<ZGammaVertex, i64>,
    boundary: BTreeMap<Vertex, i64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "lowercase")]
pub enum Move {
    Commutation { vertex: ZGammaVertex, slice: i64 },
    Braiding { a: ZGammaVertex, b: ZGammaVertex, c: ZGammaVertex, d: ZGammaVertex },
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Move::Commutation { vertex, slice } => write!(f, "commute {vertex} -> slice {slice}"),
            Move::Braiding { a, b, c, d } => write!(f, "braid {a} {b} {c} -> {d}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MoveCertificate {
    pub moves: Vec<Move>,
}

impl MoveCertificate {
    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn braidings(&self) -> usize {
        self.moves.iter().filter(|m| matches!(m, Move::Braiding { .. })).count()
    }

    pub fn commutations(&self) -> usize {
        self.len() - self.braidings()
    }

    /// Applies every move in order, checking each precondition against the
    /// state it is applied to.
    pub fn replay(&self, s: &DecoratedSet) -> Result<DecoratedSet> {
        self.moves.iter().try_fold(s.clone(), |cur, m| cur.apply(m))
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(&self.moves).expect("moves serialise")
    }
}

impl DecoratedSet {
    pub fn new(diagram: DynkinDiagram, theta: BTreeMap<ZGammaVertex, i64>, boundary: BTreeMap<Vertex, i64>) -> Result<Self> {
        for v in theta.keys() {
            v.check(&diagram)?;
        }
        for &j in boundary.keys() {
            diagram.check_vertex(j)?;
        }
        if boundary.len() != diagram.rank() {
            return Err(Error::Precondition("boundary must assign theta(-inf, j) for every vertex j".into()));
        }
        Ok(DecoratedSet { diagram, theta, boundary })
    }

    pub fn diagram(&self) -> DynkinDiagram {
        self.diagram
    }

    pub fn vertices(&self) -> impl Iterator<Item = ZGammaVertex> + '_ {
        self.theta.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn contains(&self, v: ZGammaVertex) -> bool {
        self.theta.contains_key(&v)
    }

    pub fn theta(&self) -> &BTreeMap<ZGammaVertex, i64> {
        &self.theta
    }

    pub fn boundary(&self) -> &BTreeMap<Vertex, i64> {
        &self.boundary
    }

    pub fn theta_at(&self, t: Tau) -> i64 {
        match t {
            Tau::Real(v) => self.theta[&v],
            Tau::Imaginary(j) => self.boundary[&j],
        }
    }

    pub fn min_slice(&self) -> Option<i64> {
        self.theta.keys().next().map(|v| v.slice)
    }

    pub fn max_slice(&self) -> Option<i64> {
        self.theta.keys().next_back().map(|v| v.slice)
    }

    /// Labels in slice `n`, ascending.
    pub fn slice(&self, n: i64) -> Vec<Vertex> {
        self.slice_range(n).map(|v| v.vertex).collect()
    }

    fn slice_range(&self, n: i64) -> impl Iterator<Item = ZGammaVertex> + '_ {
        let lo = ZGammaVertex { slice: n, vertex: 0 };
        let hi = ZGammaVertex { slice: n + 1, vertex: 0 };
        self.theta.range(lo..hi).map(|(v, _)| *v)
    }

    fn require(&self, b: ZGammaVertex) -> Result<()> {
        if self.contains(b) {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{b} is not in the set")))
        }
    }

    pub fn tau(&self, b: ZGammaVertex) -> Result<Tau> {
        self.require(b)?;
        Ok(tau_in(&self.theta, b))
    }

    /// The generalized mesh from `a` to `b`; `a` must be `tau(b)`.
    pub fn mesh(&self, a: Tau, b: ZGammaVertex) -> Result<Vec<ZGammaVertex>> {
        let t = self.tau(b)?;
        if t != a {
            return Err(Error::Precondition(format!("no generalized mesh from {a} to {b}")));
        }
        Ok(mesh_in(&self.diagram, &self.theta, t, b))
    }

    /// `tau(b)` together with the mesh ending at `b`.
    pub fn mesh_ending_at(&self, b: ZGammaVertex) -> Result<(Tau, Vec<ZGammaVertex>)> {
        let t = self.tau(b)?;
        Ok((t, mesh_in(&self.diagram, &self.theta, t, b)))
    }

    /// Vertices at which `θ(b) + θ(τ(b)) = Σ θ(mesh)` fails.
    pub fn mesh_violations(&self) -> Vec<ZGammaVertex> {
        self.theta
            .iter()
            .filter(|&(&b, &tb)| {
                let t = tau_in(&self.theta, b);
                let sum: i64 = mesh_in(&self.diagram, &self.theta, t, b).iter().map(|c| self.theta[c]).sum();
                tb + self.theta_at(t) != sum
            })
            .map(|(b, _)| *b)
            .collect()
    }

    pub fn check_mesh_relations(&self) -> bool {
        self.mesh_violations().is_empty()
    }

    /// The word read off slice by slice, each slice ascending.
    pub fn word_of(&self) -> BraidWord {
        BraidWord::new(self.diagram, self.theta.keys().map(|v| v.vertex).collect()).expect("labels are vertices")
    }

    /// Sorted θ values on the vertices.
    pub fn theta_multiset(&self) -> Vec<i64> {
        let mut vals: Vec<i64> = self.theta.values().copied().collect();
        vals.sort_unstable();
        vals
    }

    /// Moves `a = (n, j)` to `(n ± 2, j)`.
    pub fn commute_move(&self, a: ZGammaVertex, direction: i64) -> Result<DecoratedSet> {
        if direction != 1 && direction != -1 {
            return Err(Error::IllegalMove(format!("direction must be +1 or -1, got {direction}")));
        }
        self.require(a)?;
        let target = a.shifted(2 * direction);
        if self.contains(target) {
            return Err(Error::IllegalMove(format!("{target} is already occupied")));
        }
        let mid = a.slice + direction;
        if let Some(k) = self.slice_range(mid).find(|c| self.diagram.adjacent(c.vertex, a.vertex)) {
            return Err(Error::IllegalMove(format!("{k} is a neighbour of {a} in slice {mid}")));
        }
        let mut out = self.clone();
        let th = out.theta.remove(&a).expect("checked");
        out.theta.insert(target, th);
        Ok(out)
    }

    /// Braiding on `a = (n, j)`, `b = (n+1, k)`, `c = (n+2, j)`: `a` leaves,
    /// `d = (n+3, k)` enters, and θ is permuted.
    pub fn braid_move(&self, a: ZGammaVertex, b: ZGammaVertex, c: ZGammaVertex) -> Result<DecoratedSet> {
        for v in [a, b, c] {
            self.require(v)?;
        }
        let (n, j, k) = (a.slice, a.vertex, b.vertex);
        if b.slice != n + 1 || c.slice != n + 2 || c.vertex != j || !self.diagram.adjacent(j, k) {
            return Err(Error::IllegalMove(format!("{a}, {b}, {c} do not form a braid")));
        }
        if let Some(x) = self.slice_range(n + 1).find(|x| x.vertex != k && self.diagram.adjacent(x.vertex, j)) {
            return Err(Error::IllegalMove(format!("{x} is a second neighbour of {j} in slice {}", n + 1)));
        }
        if let Some(x) = self.slice_range(n + 2).find(|x| x.vertex != j && self.diagram.adjacent(x.vertex, k)) {
            return Err(Error::IllegalMove(format!("{x} is a second neighbour of {k} in slice {}", n + 2)));
        }
        let d = ZGammaVertex { slice: n + 3, vertex: k };
        if self.contains(d) {
            return Err(Error::IllegalMove(format!("{d} is already occupied")));
        }
        let mut out = self.clone();
        let (ta, tb, tc) = (self.theta[&a], self.theta[&b], self.theta[&c]);
        out.theta.remove(&a);
        out.theta.insert(b, tc);
        out.theta.insert(c, tb);
        out.theta.insert(d, ta);
        Ok(out)
    }

    pub fn apply(&self, m: &Move) -> Result<DecoratedSet> {
        match *m {
            Move::Commutation { vertex, slice } => {
                let dir = (slice - vertex.slice) / 2;
                if (slice - vertex.slice).abs() != 2 {
                    return Err(Error::IllegalMove(format!("commutation must move by two slices: {m}")));
                }
                self.commute_move(vertex, dir)
            }
            Move::Braiding { a, b, c, d } => {
                let out = self.braid_move(a, b, c)?;
                if d != (ZGammaVertex { slice: c.slice + 1, vertex: b.vertex }) {
                    return Err(Error::IllegalMove(format!("braiding records the wrong new vertex: {m}")));
                }
                Ok(out)
            }
        }
    }

    /// Every commutation whose preconditions hold.
    pub fn legal_commutations(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for a in self.vertices() {
            for dir in [-1, 1] {
                if self.commute_move(a, dir).is_ok() {
                    out.push(Move::Commutation { vertex: a, slice: a.slice + 2 * dir });
                }
            }
        }
        out
    }

    /// Every braiding whose preconditions hold.
    pub fn legal_braidings(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for a in self.vertices() {
            let c = a.shifted(2);
            if !self.contains(c) {
                continue;
            }
            for b in self.slice_range(a.slice + 1) {
                if self.diagram.adjacent(a.vertex, b.vertex) && self.braid_move(a, b, c).is_ok() {
                    out.push(Move::Braiding { a, b, c, d: ZGammaVertex { slice: a.slice + 3, vertex: b.vertex } });
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let vertices: Vec<Value> = self.vertices().map(|v| json!([v.slice, v.vertex])).collect();
        let theta: Map<String, Value> = self.theta.iter().map(|(v, t)| (format!("{},{}", v.slice, v.vertex), json!(t))).collect();
        let boundary: Map<String, Value> = self.boundary.iter().map(|(j, t)| (j.to_string(), json!(t))).collect();
        json!({ "vertices": vertices, "theta": theta, "boundary": boundary })
    }

    /// Reads the JSON form; `theta` must be defined on exactly `vertices`.
    pub fn from_json(diagram: DynkinDiagram, v: &Value) -> Result<Self> {
        let bad = |m: &str| Error::Parse(format!("decorated set: {m}"));
        if let Some(dv) = v.get("diagram") {
            let d: DynkinDiagram = serde_json::from_value(dv.clone()).map_err(|e| bad(&e.to_string()))?;
            if d != diagram {
                return Err(Error::DiagramMismatch(d.to_string(), diagram.to_string()));
            }
        }
        let verts: Vec<(i64, Vertex)> =
            serde_json::from_value(v.get("vertices").cloned().ok_or_else(|| bad("missing vertices"))?).map_err(|e| bad(&e.to_string()))?;
        let theta_obj = v.get("theta").and_then(Value::as_object).ok_or_else(|| bad("missing theta"))?;
        let boundary_obj = v.get("boundary").and_then(Value::as_object).ok_or_else(|| bad("missing boundary"))?;
        let mut theta = BTreeMap::new();
        for (key, val) in theta_obj {
            let (n, j) = key.split_once(',').ok_or_else(|| bad(&format!("theta key {key:?}")))?;
            let n: i64 = n.trim().parse().map_err(|_| bad(&format!("theta key {key:?}")))?;
            let j: Vertex = j.trim().parse().map_err(|_| bad(&format!("theta key {key:?}")))?;
            let t = val.as_i64().ok_or_else(|| bad(&format!("theta value at {key:?}")))?;
            theta.insert(ZGammaVertex { slice: n, vertex: j }, t);
        }
        let listed: std::collections::BTreeSet<ZGammaVertex> = verts.into_iter().map(ZGammaVertex::from).collect();
        if !listed.iter().eq(theta.keys()) {
            return Err(bad("theta must be defined on exactly the listed vertices"));
        }
        let mut boundary = BTreeMap::new();
        for (key, val) in boundary_obj {
            let j: Vertex = key.trim().parse().map_err(|_| bad(&format!("boundary key {key:?}")))?;
            boundary.insert(j, val.as_i64().ok_or_else(|| bad(&format!("boundary value at {key:?}")))?);
        }
        DecoratedSet::new(diagram, theta, boundary)
    }

    /// Graphviz rendering of the window of `ZΓ` around the set, one column per
    /// slice, occupied vertices labelled by θ.
    pub fn to_dot(&self) -> String {
        let d = &self.diagram;
        let lo = self.min_slice().unwrap_or(0) - 1;
        let hi = self.max_slice().unwrap_or(0) + 1;
        let id = |n: i64, j: Vertex| format!("v{}_{}", if n < 0 { format!("m{}", -n) } else { n.to_string() }, j);
        let mut out = String::new();
        let _ = writeln!(out, "digraph ZGamma {{");
        let _ = writeln!(out, "  rankdir=LR;");
        let _ = writeln!(out, "  node [shape=circle, fontsize=10];");
        let bnd: Vec<String> = self.boundary.iter().map(|(j, t)| format!("{j}:{t}")).collect();
        let _ = writeln!(out, "  label=\"{d}  boundary {}\";", bnd.join(" "));
        for n in lo..=hi {
            for j in d.vertices().filter(|&j| d.color(j) as i64 == n.rem_euclid(2)) {
                let v = ZGammaVertex { slice: n, vertex: j };
                let pos = format!("pos=\"{},{}!\"", n, -(j as i64));
                match self.theta.get(&v) {
                    Some(t) => {
                        let _ = writeln!(out, "  {} [label=\"{j}\\n{t}\", style=filled, fillcolor=lightgray, {pos}];", id(n, j));
                    }
                    None => {
                        let _ = writeln!(out, "  {} [label=\"\", shape=point, {pos}];", id(n, j));
                    }
                }
            }
        }
        for n in lo..hi {
            for j in d.vertices().filter(|&j| d.color(j) as i64 == n.rem_euclid(2)) {
                for k in d.neighbor_iter(j) {
                    let _ = writeln!(out, "  {} -> {} [color=gray];", id(n, j), id(n + 1, k));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for DecoratedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.theta.iter().map(|(v, t)| format!("{v}:{t}")).collect();
        write!(f, "{{{}}}", parts.join(" "))
    }
}

fn tau_in(theta: &BTreeMap<ZGammaVertex, i64>, b: ZGammaVertex) -> Tau {
    theta.range(..b).rev().map(|(v, _)| *v).find(|v| v.vertex == b.vertex).map_or(Tau::Imaginary(b.vertex), Tau::Real)
}

fn mesh_in(d: &DynkinDiagram, theta: &BTreeMap<ZGammaVertex, i64>, t: Tau, b: ZGammaVertex) -> Vec<ZGammaVertex> {
    let hi = ZGammaVertex { slice: b.slice, vertex: 0 };
    let keys: Box<dyn Iterator<Item = &ZGammaVertex>> = match t {
        Tau::Real(a) => Box::new(theta.range(ZGammaVertex { slice: a.slice + 1, vertex: 0 }..hi).map(|(v, _)| v)),
        Tau::Imaginary(_) => Box::new(theta.range(..hi).map(|(v, _)| v)),
    };
    keys.filter(|c| d.adjacent(c.vertex, b.vertex)).copied().collect()
}

/// `θ(-inf, i) = -1` and `0` elsewhere.
pub fn divisor_boundary(d: &DynkinDiagram, i: Vertex) -> BTreeMap<Vertex, i64> {
    d.vertices().map(|j| (j, if j == i { -1 } else { 0 })).collect()
}

/// The set `{(k, j) : j ∈ Σ_k}` with θ filled in slice order by the mesh
/// recurrence, so the result satisfies mesh relations.
pub fn to_decorated(lw: &LayeredWord, boundary: &BTreeMap<Vertex, i64>) -> Result<DecoratedSet> {
    let d = lw.diagram();
    let mut theta: BTreeMap<ZGammaVertex, i64> = BTreeMap::new();
    for (k, slice) in lw.slices().iter().enumerate() {
        for &j in slice {
            theta.insert(ZGammaVertex { slice: k as i64, vertex: j }, 0);
        }
    }
    let mut s = DecoratedSet::new(d, theta, boundary.clone())?;
    let order: Vec<ZGammaVertex> = s.vertices().collect();
    for b in order {
        let t = tau_in(&s.theta, b);
        let sum: i64 = mesh_in(&d, &s.theta, t, b).iter().map(|c| s.theta[c]).sum();
        let val = sum - s.theta_at(t);
        s.theta.insert(b, val);
    }
    Ok(s)
}

/// The consecutive-slice recurrence `χ_u(k) = Σ_{t∈N(k)} χ_{u-1}(t) - χ_{u-2}(k)`
/// on the vertices of a layered word with `Σ_0 = {i}`, `χ_0(i) = 1`, and χ of
/// an absent vertex taken to be 0.
pub fn chi_of_layered(lw: &LayeredWord) -> Result<BTreeMap<ZGammaVertex, i64>> {
    let slices = lw.slices();
    if slices.first().map(Vec::len) != Some(1) {
        return Err(Error::Precondition("chi needs a singleton first slice".into()));
    }
    let d = lw.diagram();
    let mut chi: BTreeMap<ZGammaVertex, i64> = BTreeMap::new();
    chi.insert(ZGammaVertex { slice: 0, vertex: slices[0][0] }, 1);
    let get = |chi: &BTreeMap<ZGammaVertex, i64>, n: i64, j: Vertex| chi.get(&ZGammaVertex { slice: n, vertex: j }).copied().unwrap_or(0);
    for (u, slice) in slices.iter().enumerate().skip(1) {
        let u = u as i64;
        for &k in slice {
            let val = d.neighbor_iter(k).map(|t| get(&chi, u - 1, t)).sum::<i64>() - get(&chi, u - 2, k);
            chi.insert(ZGammaVertex { slice: u, vertex: k }, val);
        }
    }
    Ok(chi)
}

/// All chains `Δ_0 = {i}, Δ_1, ..., Δ_p` with `p ≤ depth`, `i` of colour 0,
/// `Δ_{u-2} ⊆ Δ_u ⊆ N(Δ_{u-1})`, every `Δ_u` nonempty and χ positive on each.
pub fn factorization_chains(d: &DynkinDiagram, depth: usize) -> Vec<LayeredWord> {
    let mut out = Vec::new();
    for i in d.color_class(0) {
        grow_chain(d, vec![vec![i]], depth, &mut out);
    }
    out
}

fn grow_chain(d: &DynkinDiagram, slices: Vec<Vec<Vertex>>, depth: usize, out: &mut Vec<LayeredWord>) {
    let lw = LayeredWord::new(*d, slices.clone()).expect("chain slices have the right colours");
    out.push(lw);
    let u = slices.len();
    if u > depth {
        return;
    }
    let prev2: Vec<Vertex> = if u >= 2 { slices[u - 2].clone() } else { Vec::new() };
    let cands: Vec<Vertex> = d.vertices().filter(|&k| !prev2.contains(&k) && slices[u - 1].iter().any(|&t| d.adjacent(t, k))).collect();
    if prev2.iter().any(|&k| !slices[u - 1].iter().any(|&t| d.adjacent(t, k))) {
        return;
    }
    for mask in 0u32..(1 << cands.len()) {
        let mut next = prev2.clone();
        next.extend(cands.iter().enumerate().filter(|(b, _)| mask & (1 << b) != 0).map(|(_, &k)| k));
        if next.is_empty() {
            continue;
        }
        next.sort_unstable();
        let mut grown = slices.clone();
        grown.push(next);
        let chi = chi_of_layered(&LayeredWord::new(*d, grown.clone()).expect("colours")).expect("singleton start");
        if chi.values().all(|&c| c > 0) {
            grow_chain(d, grown, depth, out);
        }
    }
}

/// Words `s_{Δ_0} ... s_{Δ_p} s_l` closing a chain of [`factorization_chains`]
/// with a letter `l ∈ N(Δ_p)` on which χ vanishes.
pub fn factorization_words(d: &DynkinDiagram, depth: usize) -> Vec<LayeredWord> {
    let mut out = Vec::new();
    for chain in factorization_chains(d, depth) {
        let slices = chain.slices();
        let p = slices.len() - 1;
        let prev: &[Vertex] = if p >= 1 { &slices[p - 1] } else { &[] };
        let reach = |k: Vertex| slices[p].iter().any(|&t| d.adjacent(t, k));
        if !prev.iter().all(|&k| reach(k)) {
            continue;
        }
        for l in d.vertices().filter(|&l| reach(l)) {
            let mut grown = slices.to_vec();
            grown.push(vec![l]);
            let lw = LayeredWord::new(*d, grown).expect("colours");
            let chi = chi_of_layered(&lw).expect("singleton start");
            if chi[&ZGammaVertex { slice: p as i64 + 1, vertex: l }] == 0 {
                out.push(lw);
            }
        }
    }
    out
}

/// True when every generalized mesh of the set is an ordinary one: each `τ(b)`
/// is two slices back (or imaginary with no earlier neighbours) and the mesh
/// lies in the slice just before `b`. On such sets θ from [`to_decorated`]
/// coincides with [`chi_of_layered`].
pub fn meshes_are_local(s: &DecoratedSet) -> bool {
    s.vertices().all(|b| {
        let (t, mesh) = s.mesh_ending_at(b).expect("b in s");
        let tau_ok = match t {
            Tau::Real(a) => a.slice == b.slice - 2,
            Tau::Imaginary(_) => true,
        };
        tau_ok && mesh.iter().all(|c| c.slice == b.slice - 1)
    })
}

/// Checks the hypotheses of [`find_left_divisor`] and returns the vertex `i`
/// with `θ(-inf, i) = -1`.
pub fn divisor_hypotheses(s: &DecoratedSet) -> Result<Vertex> {
    let bad = |m: String| Err(Error::Hypotheses(m));
    if !s.check_mesh_relations() {
        let v: Vec<String> = s.mesh_violations().iter().map(ToString::to_string).collect();
        return bad(format!("mesh relations fail at {}", v.join(", ")));
    }
    if let Some((v, t)) = s.theta.iter().find(|(_, &t)| t < 0) {
        return bad(format!("theta({v}) = {t} is negative"));
    }
    let zeros = s.theta.values().filter(|&&t| t == 0).count();
    if zeros != 1 {
        return bad(format!("theta must vanish on exactly one vertex, found {zeros}"));
    }
    let minus: Vec<Vertex> = s.boundary.iter().filter(|(_, &t)| t == -1).map(|(j, _)| *j).collect();
    let rest_zero = s.boundary.values().all(|&t| t == 0 || t == -1);
    if minus.len() != 1 || !rest_zero {
        return bad("boundary must be -1 at exactly one vertex and 0 elsewhere".into());
    }
    Ok(minus[0])
}

/// Finds `j ≠ i` such that `s_j` left-divides the word of `s`, together with
/// the moves that bring the unique θ-zero vertex to the leftmost occupied
/// slice at label `j`.
pub fn find_left_divisor(s: &DecoratedSet) -> Result<(Vertex, MoveCertificate)> {
    let i = divisor_hypotheses(s)?;
    let mut solver = Solver { state: s.clone(), moves: Vec::new() };
    // each vertex crosses every other one at most a bounded number of times
    let bound = 64 + 16 * s.len().pow(3);
    let mut last: Option<(usize, Vec<usize>)> = None;
    for _ in 0..bound {
        let z = solver.zero();
        let min = solver.state.min_slice().expect("nonempty");
        if z.slice == min {
            if z.vertex == i {
                return Err(Error::Internal(format!("descent ended at the excluded vertex {i}")));
            }
            return Ok((z.vertex, MoveCertificate { moves: solver.moves }));
        }
        match solver.state.tau(z)? {
            Tau::Imaginary(_) => solver.slide_zero_left(z)?,
            Tau::Real(_) => {
                let chain = best_chain(&solver.state, z)?;
                let measure = (solver.state.vertices().filter(|v| v.slice <= z.slice).count(), chain.seq.clone());
                if let Some(prev) = &last {
                    if measure >= *prev {
                        return Err(Error::Internal(format!("descent measure did not decrease: {prev:?} -> {measure:?}")));
                    }
                }
                last = Some(measure);
                solver.descend(chain)?;
            }
        }
    }
    Err(Error::Internal("descent exceeded its bound".into()))
}

struct Solver {
    state: DecoratedSet,
    moves: Vec<Move>,
}

/// A maximal chain `a_0, ..., a_k` with the commutations that align it.
#[derive(Clone, Debug)]
struct Chain {
    seq: Vec<usize>,
    last: ZGammaVertex,
    state: DecoratedSet,
    moves: Vec<Move>,
}

impl Solver {
    fn zero(&self) -> ZGammaVertex {
        *self.state.theta.iter().find(|(_, &t)| t == 0).expect("one zero").0
    }

    fn push(&mut self, m: Move) -> Result<()> {
        self.state = self.state.apply(&m).map_err(|e| Error::Internal(format!("{m}: {e}")))?;
        self.moves.push(m);
        Ok(())
    }

    fn slide_zero_left(&mut self, mut z: ZGammaVertex) -> Result<()> {
        let others_min = |s: &DecoratedSet, z: ZGammaVertex| s.vertices().filter(|&v| v != z).map(|v| v.slice).min();
        while let Some(m) = others_min(&self.state, z) {
            if z.slice <= m {
                break;
            }
            self.push(Move::Commutation { vertex: z, slice: z.slice - 2 })?;
            z = z.shifted(-2);
        }
        Ok(())
    }

    /// One step of the descent: align the best chain, clear room to the
    /// right, braid at its terminal triple.
    fn descend(&mut self, chain: Chain) -> Result<()> {
        self.state = chain.state;
        self.moves.extend(chain.moves);
        let ak = chain.last;
        let (t, mesh) = self.state.mesh_ending_at(ak)?;
        let (Some(mut a), [b]) = (t.real(), mesh.as_slice()) else {
            return Err(Error::Internal(format!("terminal mesh at {ak} is not a singleton")));
        };
        let b = *b;
        while a.slice < b.slice - 1 {
            self.push(Move::Commutation { vertex: a, slice: a.slice + 2 })?;
            a = a.shifted(2);
        }
        let mut c = ak;
        while c.slice > b.slice + 1 {
            self.push(Move::Commutation { vertex: c, slice: c.slice - 2 })?;
            c = c.shifted(-2);
        }
        let n = a.slice;
        let mut right: Vec<ZGammaVertex> = self.state.vertices().filter(|&x| x.slice >= n + 2 && x != c).collect();
        right.sort_by(|x, y| y.cmp(x));
        for x in right {
            self.push(Move::Commutation { vertex: x, slice: x.slice + 2 })?;
        }
        let d = ZGammaVertex { slice: n + 3, vertex: b.vertex };
        self.push(Move::Braiding { a, b, c, d })
    }
}

/// Explores the chains from the zero vertex, taking at each step a mesh
/// vertex of least slice (ties in label order), and keeps the one with the
/// lexicographically least sequence of mesh sizes.
fn best_chain(s: &DecoratedSet, a0: ZGammaVertex) -> Result<Chain> {
    let mut best: Option<Chain> = None;
    let start = Chain { seq: Vec::new(), last: a0, state: s.clone(), moves: Vec::new() };
    extend_chain(start, None, &mut best)?;
    best.ok_or_else(|| Error::Internal("no chain from the zero vertex".into()))
}

fn extend_chain(mut ch: Chain, prev_tau: Option<ZGammaVertex>, best: &mut Option<Chain>) -> Result<()> {
    let am = ch.last;
    let (t, mesh) = ch.state.mesh_ending_at(am)?;
    let Some(tm) = t.real() else {
        return Err(Error::Internal(format!("chain reached {am} with imaginary tau")));
    };
    ch.seq.push(mesh.len());
    if mesh.is_empty() {
        return Err(Error::Internal(format!("empty mesh ending at {am}")));
    }
    if let Some(b) = best {
        // sequences only grow from here, so a larger prefix can never win
        let k = ch.seq.len().min(b.seq.len());
        if ch.seq[..k] > b.seq[..k] {
            return Ok(());
        }
    }
    if mesh.len() == 1 {
        if best.as_ref().is_none_or(|b| ch.seq < b.seq) {
            *best = Some(ch);
        }
        return Ok(());
    }
    let cands: Vec<ZGammaVertex> = mesh.into_iter().filter(|&c| Some(c) != prev_tau).collect();
    let lo = cands.iter().map(|c| c.slice).min().expect("q > 1 leaves a candidate");
    for c in cands.into_iter().filter(|c| c.slice == lo) {
        if ch.state.tau(c)?.is_imaginary() {
            return Err(Error::Internal(format!("chain cannot continue past {am}: {c} has imaginary tau")));
        }
        let mut next = ch.clone();
        let mut a = tm;
        while a.slice < c.slice - 1 {
            let m = Move::Commutation { vertex: a, slice: a.slice + 2 };
            next.state = next.state.apply(&m).map_err(|e| Error::Internal(format!("{m}: {e}")))?;
            next.moves.push(m);
            a = a.shifted(2);
        }
        next.last = c;
        extend_chain(next, Some(a), best)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{equivalent, layer, left_divisible_by};

    fn a2() -> DynkinDiagram {
        "A2".parse().unwrap()
    }

    fn d4f() -> DynkinDiagram {
        "D4'".parse().unwrap()
    }

    fn z(n: i64, j: Vertex) -> ZGammaVertex {
        ZGammaVertex { slice: n, vertex: j }
    }

    fn s121() -> DecoratedSet {
        let w = BraidWord::parse(a2(), "s1s2s1").unwrap();
        to_decorated(&layer(&w), &divisor_boundary(&a2(), 1)).unwrap()
    }

    fn d4_example() -> DecoratedSet {
        let w = BraidWord::parse(d4f(), "2 1 3 4 2 1 3 4 2 4").unwrap();
        to_decorated(&layer(&w), &divisor_boundary(&d4f(), 2)).unwrap()
    }

    #[test]
    fn a2_decoration() {
        let s = s121();
        let got: Vec<(ZGammaVertex, i64)> = s.theta().iter().map(|(v, t)| (*v, *t)).collect();
        assert_eq!(got, vec![(z(0, 1), 1), (z(1, 2), 1), (z(2, 1), 0)]);
        assert!(s.check_mesh_relations());
        assert_eq!(s.tau(z(2, 1)).unwrap(), Tau::Real(z(0, 1)));
        assert_eq!(s.mesh(Tau::Real(z(0, 1)), z(2, 1)).unwrap(), vec![z(1, 2)]);
        assert_eq!(s.tau(z(0, 1)).unwrap(), Tau::Imaginary(1));
        assert!(s.mesh(Tau::Imaginary(1), z(0, 1)).unwrap().is_empty());
        assert!(s.tau(z(4, 1)).is_err());
    }

    #[test]
    fn bad_theta_breaks_mesh_relations() {
        let mut theta = s121().theta().clone();
        theta.insert(z(2, 1), 1);
        let s = DecoratedSet::new(a2(), theta, divisor_boundary(&a2(), 1)).unwrap();
        assert_eq!(s.mesh_violations(), vec![z(2, 1)]);
    }

    #[test]
    fn d4_example_values() {
        let s = d4_example();
        assert_eq!(s.tau(z(5, 4)).unwrap(), Tau::Real(z(3, 4)));
        assert_eq!(s.mesh(Tau::Real(z(3, 4)), z(5, 4)).unwrap(), vec![z(4, 2)]);
        assert_eq!(s.theta()[&z(5, 4)], 0);
        assert_eq!(s.theta()[&z(2, 2)], 2);
        assert!(s.theta().iter().all(|(v, &t)| *v == z(5, 4) || t == 1 || t == 2));
        let w = BraidWord::parse(d4f(), "2 1 3 4 2 1 3 4 2 4").unwrap();
        let chi = chi_of_layered(&layer(&w)).unwrap();
        assert_eq!(&chi, s.theta());
        assert!(meshes_are_local(&s));
    }

    #[test]
    fn empty_word() {
        let s = to_decorated(&layer(&BraidWord::identity(a2())), &divisor_boundary(&a2(), 2)).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.boundary().len(), 2);
        assert!(s.word_of().is_empty());
    }

    #[test]
    fn chi_singleton() {
        let lw = LayeredWord::new(a2(), vec![vec![1]]).unwrap();
        assert_eq!(chi_of_layered(&lw).unwrap(), BTreeMap::from([(z(0, 1), 1)]));
        let lw = LayeredWord::new(a2(), vec![vec![], vec![2]]).unwrap();
        assert!(chi_of_layered(&lw).is_err());
    }

    #[test]
    fn commutations() {
        let b = divisor_boundary(&a2(), 1);
        let s = DecoratedSet::new(a2(), BTreeMap::from([(z(0, 1), 1), (z(3, 2), 1)]), b.clone()).unwrap();
        let t = s.commute_move(z(3, 2), -1).unwrap();
        assert_eq!(t.vertices().collect::<Vec<_>>(), vec![z(0, 1), z(1, 2)]);
        assert_eq!(t.word_of().letters(), s.word_of().letters());
        assert!(matches!(t.commute_move(z(0, 1), 1), Err(Error::IllegalMove(_))));
        assert!(t.commute_move(z(0, 1), 2).is_err());
    }

    #[test]
    fn braiding() {
        let s = s121();
        let t = s.braid_move(z(0, 1), z(1, 2), z(2, 1)).unwrap();
        let got: Vec<(ZGammaVertex, i64)> = t.theta().iter().map(|(v, t)| (*v, *t)).collect();
        assert_eq!(got, vec![(z(1, 2), 0), (z(2, 1), 1), (z(3, 2), 1)]);
        assert!(t.check_mesh_relations());
        assert_eq!(t.word_of().to_string(), "s2s1s2");
        assert!(equivalent(&t.word_of(), &s.word_of()).unwrap());
        assert_eq!(t.theta_multiset(), s.theta_multiset());
        let mut theta = s.theta().clone();
        theta.insert(z(3, 2), 1);
        let blocked = DecoratedSet::new(a2(), theta, s.boundary().clone()).unwrap();
        assert!(matches!(blocked.braid_move(z(0, 1), z(1, 2), z(2, 1)), Err(Error::IllegalMove(_))));
    }

    #[test]
    fn divisor_on_a2() {
        let s = s121();
        let (j, cert) = find_left_divisor(&s).unwrap();
        assert_eq!(j, 2);
        assert_eq!(cert.braidings(), 1);
        assert_eq!(cert.commutations(), 0);
        let end = cert.replay(&s).unwrap();
        assert_eq!(end.min_slice(), Some(1));
        assert!(end.check_mesh_relations());
    }

    #[test]
    fn divisor_on_d4_example() {
        let s = d4_example();
        let (j, cert) = find_left_divisor(&s).unwrap();
        assert_ne!(j, 2);
        let end = cert.replay(&s).unwrap();
        assert!(end.check_mesh_relations());
        assert!(equivalent(&end.word_of(), &s.word_of()).unwrap());
        assert!(left_divisible_by(&s.word_of(), j).unwrap().is_some());
        let zero = end.theta().iter().find(|(_, &t)| t == 0).unwrap().0;
        assert_eq!(zero.slice, end.min_slice().unwrap());
        assert_eq!(zero.vertex, j);
    }

    #[test]
    fn divisor_with_nothing_to_move() {
        let b = divisor_boundary(&a2(), 1);
        let s = DecoratedSet::new(a2(), BTreeMap::from([(z(1, 2), 0)]), b).unwrap();
        let (j, cert) = find_left_divisor(&s).unwrap();
        assert_eq!(j, 2);
        assert!(cert.is_empty());
    }

    #[test]
    fn hypotheses_are_checked() {
        let w = BraidWord::parse(a2(), "s1s2").unwrap();
        let s = to_decorated(&layer(&w), &divisor_boundary(&a2(), 1)).unwrap();
        assert!(matches!(find_left_divisor(&s), Err(Error::Hypotheses(_))));
    }

    #[test]
    fn factorization_words_satisfy_the_divisor_hypotheses() {
        for name in ["A2", "A3", "A4", "D4", "D4'", "D5"] {
            let d: DynkinDiagram = name.parse().unwrap();
            let words = factorization_words(&d, 4);
            assert!(!words.is_empty());
            for lw in words {
                let i = lw.slices()[0][0];
                let s = to_decorated(&lw, &divisor_boundary(&d, i)).unwrap();
                assert_eq!(&chi_of_layered(&lw).unwrap(), s.theta(), "{name} {lw}");
                let (j, cert) = find_left_divisor(&s).unwrap();
                assert_ne!(j, i);
                assert!(left_divisible_by(&s.word_of(), j).unwrap().is_some(), "{name} {lw}");
                assert!(cert.replay(&s).is_ok());
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let s = s121();
        let v = s.to_json();
        assert_eq!(
            serde_json::to_string(&v).unwrap(),
            r#"{"vertices":[[0,1],[1,2],[2,1]],"theta":{"0,1":1,"1,2":1,"2,1":0},"boundary":{"1":-1,"2":0}}"#
        );
        assert_eq!(DecoratedSet::from_json(a2(), &v).unwrap(), s);
        let cert = find_left_divisor(&s).unwrap().1;
        let back: Vec<Move> = serde_json::from_value(cert.to_json()).unwrap();
        assert_eq!(back, cert.moves);
    }

    #[test]
    fn dot_mentions_every_vertex() {
        let dot = d4_example().to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("v5_4 [label=\"4\\n0\""));
    }
}
