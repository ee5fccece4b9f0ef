//! Bounded complexes of finite direct sums of the `P_i`, chain maps, cones,
//! minimal models and derived Hom dimensions out of a projective.
//!
//! Grading is cohomological: `D_d` runs from degree `d` to `d + 1`, and
//! `X[n]^d = X^{d+n}` with differential `(-1)^n D`.

use std::collections::BTreeMap;
use std::fmt;

use serde_json::{json, Map, Value};

use crate::braid::same_diagram;
use crate::diagram::{DynkinDiagram, Vertex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::Matrix;
use crate::zigzag::{compose_unchecked, hom_basis, MorphBasisElement, MorphElement};

/// A matrix of morphisms between two ordered lists of projectives.
/// Entry `(r, c)` runs from the `c`-th source summand to the `r`-th target summand.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MorphMatrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<MorphElement<F>>,
}

impl<F: Field> MorphMatrix<F> {
    pub fn zero(targets: &[Vertex], sources: &[Vertex]) -> Self {
        let mut data = Vec::with_capacity(targets.len() * sources.len());
        for &t in targets {
            for &s in sources {
                data.push(MorphElement::zero(s, t));
            }
        }
        MorphMatrix { rows: targets.len(), cols: sources.len(), data }
    }

    pub fn from_fn(targets: &[Vertex], sources: &[Vertex], mut f: impl FnMut(usize, usize) -> MorphElement<F>) -> Self {
        let mut data = Vec::with_capacity(targets.len() * sources.len());
        for r in 0..targets.len() {
            for c in 0..sources.len() {
                data.push(f(r, c));
            }
        }
        MorphMatrix { rows: targets.len(), cols: sources.len(), data }
    }

    /// Checks that every entry runs between the stated labels.
    pub fn from_rows(targets: &[Vertex], sources: &[Vertex], rows: Vec<Vec<MorphElement<F>>>) -> Result<Self> {
        if rows.len() != targets.len() || rows.iter().any(|r| r.len() != sources.len()) {
            return Err(Error::Shape(format!("expected a {}x{} matrix of morphisms", targets.len(), sources.len())));
        }
        for (r, row) in rows.iter().enumerate() {
            for (c, e) in row.iter().enumerate() {
                if e.src() != sources[c] || e.tgt() != targets[r] {
                    return Err(Error::Shape(format!(
                        "entry ({r},{c}) runs P{}→P{}, expected P{}→P{}",
                        e.src(),
                        e.tgt(),
                        sources[c],
                        targets[r]
                    )));
                }
            }
        }
        Ok(MorphMatrix { rows: targets.len(), cols: sources.len(), data: rows.into_iter().flatten().collect() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &MorphElement<F> {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: MorphElement<F>) {
        self.data[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(MorphElement::is_zero)
    }

    pub fn neg(&self) -> Self {
        MorphMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(MorphElement::neg).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        MorphMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|e| e.scale(s)).collect() }
    }

    /// `self · other` (apply `other` first). Labels are read off the entries, so
    /// empty inner dimensions need the outer labels.
    pub fn mul(&self, other: &Self, targets: &[Vertex], sources: &[Vertex]) -> Self {
        assert_eq!(self.cols, other.rows, "morphism matrix dimension mismatch");
        let mut out = MorphMatrix::zero(targets, sources);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(r, c).add(&compose_unchecked(a, b));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        MorphMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a.sub(b)).collect() }
    }

    fn without(&self, row: Option<usize>, col: Option<usize>) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for r in 0..self.rows {
            if Some(r) == row {
                continue;
            }
            for c in 0..self.cols {
                if Some(c) != col {
                    data.push(self.get(r, c).clone());
                }
            }
        }
        MorphMatrix { rows: self.rows - row.is_some() as usize, cols: self.cols - col.is_some() as usize, data }
    }

    /// Block matrix `[[a, b], [c, d]]`.
    fn blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let rows = a.rows + c.rows;
        let cols = a.cols + b.cols;
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for col in 0..cols {
                let e = match (r < a.rows, col < a.cols) {
                    (true, true) => a.get(r, col),
                    (true, false) => b.get(r, col - a.cols),
                    (false, true) => c.get(r - a.rows, col),
                    (false, false) => d.get(r - a.rows, col - a.cols),
                };
                data.push(e.clone());
            }
        }
        MorphMatrix { rows, cols, data }
    }

    pub fn to_json(&self, d: &DynkinDiagram) -> Value {
        Value::Array((0..self.rows).map(|r| Value::Array((0..self.cols).map(|c| self.get(r, c).to_json(d)).collect())).collect())
    }
}

/// A bounded complex `... → X^d → X^{d+1} → ...` of sums of projectives.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjComplex<F> {
    diagram: DynkinDiagram,
    // degree of terms[0]
    lo: i64,
    terms: Vec<Vec<Vertex>>,
    // diffs[k]: terms[k] → terms[k+1] (the last one has no rows)
    diffs: Vec<MorphMatrix<F>>,
}

impl<F: Field> ProjComplex<F> {
    pub fn zero(diagram: DynkinDiagram) -> Self {
        ProjComplex { diagram, lo: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// The stalk complex `P_i` in degree 0.
    pub fn projective(diagram: DynkinDiagram, i: Vertex) -> Result<Self> {
        diagram.check_vertex(i)?;
        Ok(ProjComplex { diagram, lo: 0, terms: vec![vec![i]], diffs: vec![MorphMatrix::zero(&[], &[i])] })
    }

    /// `Λ = P_1 ⊕ ... ⊕ P_n` in degree 0.
    pub fn sum_of_projectives(diagram: DynkinDiagram) -> Self {
        let labels: Vec<Vertex> = diagram.vertices().collect();
        ProjComplex { diagram, lo: 0, diffs: vec![MorphMatrix::zero(&[], &labels)], terms: vec![labels] }
    }

    /// Builds a complex from summand lists and differentials, checking labels,
    /// shapes and `D² = 0`. Missing differentials are zero.
    pub fn new(diagram: DynkinDiagram, degrees: BTreeMap<i64, Vec<Vertex>>, diffs: BTreeMap<i64, MorphMatrix<F>>) -> Result<Self> {
        for labels in degrees.values() {
            for &v in labels {
                diagram.check_vertex(v)?;
            }
        }
        let x = Self::assemble(diagram, &degrees, |d, tgt, src| match diffs.get(&d) {
            Some(m) => Ok(m.clone()),
            None => Ok(MorphMatrix::zero(tgt, src)),
        });
        let x = x?;
        for (&d, m) in &diffs {
            let (src, tgt) = (x.summands(d), x.summands(d + 1));
            if m.rows() != tgt.len() || m.cols() != src.len() {
                return Err(Error::Shape(format!("differential in degree {d} has the wrong shape")));
            }
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let e = m.get(r, c);
                    if e.src() != src[c] || e.tgt() != tgt[r] {
                        return Err(Error::Shape(format!("differential entry ({r},{c}) in degree {d} has wrong labels")));
                    }
                    if !e.is_endo() && !diagram.adjacent(e.src(), e.tgt()) && !e.is_zero() {
                        return Err(Error::Shape(format!("nonzero entry between non-adjacent P{} and P{}", e.src(), e.tgt())));
                    }
                }
            }
        }
        x.check_d_squared()?;
        Ok(x)
    }

    /// Assembles without validation; for internal constructions whose
    /// correctness follows from how they are built.
    pub(crate) fn new_trusted(diagram: DynkinDiagram, degrees: &BTreeMap<i64, Vec<Vertex>>, diffs: &BTreeMap<i64, MorphMatrix<F>>) -> Self {
        Self::assemble(diagram, degrees, |d, tgt, src| {
            Ok(match diffs.get(&d) {
                Some(m) if m.rows() == tgt.len() && m.cols() == src.len() => m.clone(),
                _ => MorphMatrix::zero(tgt, src),
            })
        })
        .expect("trusted assembly")
    }

    fn assemble(
        diagram: DynkinDiagram,
        degrees: &BTreeMap<i64, Vec<Vertex>>,
        mut diff: impl FnMut(i64, &[Vertex], &[Vertex]) -> Result<MorphMatrix<F>>,
    ) -> Result<Self> {
        let support: Vec<i64> = degrees.iter().filter(|(_, v)| !v.is_empty()).map(|(&d, _)| d).collect();
        let (Some(&lo), Some(&hi)) = (support.first(), support.last()) else {
            return Ok(Self::zero(diagram));
        };
        let empty = Vec::new();
        let terms: Vec<Vec<Vertex>> = (lo..=hi).map(|d| degrees.get(&d).unwrap_or(&empty).clone()).collect();
        let mut diffs = Vec::with_capacity(terms.len());
        for (k, src) in terms.iter().enumerate() {
            let tgt = terms.get(k + 1).unwrap_or(&empty);
            diffs.push(diff(lo + k as i64, tgt, src)?);
        }
        Ok(ProjComplex { diagram, lo, terms, diffs })
    }

    pub fn diagram(&self) -> DynkinDiagram {
        self.diagram
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(Vec::is_empty)
    }

    /// Lowest and highest degree carrying a summand.
    pub fn degree_range(&self) -> Option<(i64, i64)> {
        if self.is_zero() {
            None
        } else {
            Some((self.lo, self.lo + self.terms.len() as i64 - 1))
        }
    }

    /// Degrees in the (possibly gappy) support window.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.terms.len()).map(move |k| self.lo + k as i64)
    }

    pub fn summands(&self, d: i64) -> &[Vertex] {
        self.index(d).map(|k| self.terms[k].as_slice()).unwrap_or(&[])
    }

    /// Number of indecomposable summands over all degrees.
    pub fn total_rank(&self) -> usize {
        self.terms.iter().map(Vec::len).sum()
    }

    /// The differential `X^d → X^{d+1}`.
    pub fn diff(&self, d: i64) -> MorphMatrix<F> {
        match self.index(d) {
            Some(k) if self.diffs[k].rows() == self.summands(d + 1).len() => self.diffs[k].clone(),
            _ => MorphMatrix::zero(self.summands(d + 1), self.summands(d)),
        }
    }

    fn index(&self, d: i64) -> Option<usize> {
        let k = d - self.lo;
        (k >= 0 && (k as usize) < self.terms.len()).then_some(k as usize)
    }

    /// Sorted summand labels per degree.
    pub fn summand_multisets(&self) -> BTreeMap<i64, Vec<Vertex>> {
        self.degrees()
            .filter_map(|d| {
                let mut v = self.summands(d).to_vec();
                v.sort_unstable();
                (!v.is_empty()).then_some((d, v))
            })
            .collect()
    }

    pub fn check_d_squared(&self) -> Result<()> {
        for d in self.degrees() {
            let sq = self.diff(d + 1).mul(&self.diff(d), self.summands(d + 2), self.summands(d));
            if !sq.is_zero() {
                return Err(Error::InvalidComplex(format!("D∘D ≠ 0 from degree {d}")));
            }
        }
        Ok(())
    }

    /// `X[n]`: degree `d` of the result is degree `d + n` of `X`.
    pub fn shift(&self, n: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let diffs = if n.rem_euclid(2) == 1 { self.diffs.iter().map(MorphMatrix::neg).collect() } else { self.diffs.clone() };
        ProjComplex { diagram: self.diagram, lo: self.lo - n, terms: self.terms.clone(), diffs }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        same_diagram(self.diagram, other.diagram)?;
        let mut degrees = BTreeMap::new();
        for d in self.degrees().chain(other.degrees()) {
            let mut v = self.summands(d).to_vec();
            v.extend_from_slice(other.summands(d));
            degrees.insert(d, v);
        }
        Self::assemble(self.diagram, &degrees, |d, tgt, src| {
            let (a, b) = (self.diff(d), other.diff(d));
            let (ns, nt) = (self.summands(d).len(), self.summands(d + 1).len());
            let off_tr = MorphMatrix::zero(&tgt[..nt], &src[ns..]);
            let off_bl = MorphMatrix::zero(&tgt[nt..], &src[..ns]);
            Ok(MorphMatrix::blocks(&a, &off_tr, &off_bl, &b))
        })
    }

    /// Removes contractible pieces `P_i --unit--> P_i` by Gaussian elimination
    /// until no differential entry has an invertible identity coefficient.
    pub fn minimize(&self) -> Self {
        let mut x = self.clone();
        let mut start = 0usize;
        while let Some((k, r, c)) = x.find_pivot(start) {
            x.eliminate(k, r, c);
            start = k.saturating_sub(1);
        }
        x.trim();
        x
    }

    pub fn is_minimal(&self) -> bool {
        self.find_pivot(0).is_none()
    }

    fn find_pivot(&self, start: usize) -> Option<(usize, usize, usize)> {
        for k in start..self.diffs.len() {
            let m = &self.diffs[k];
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let e = m.get(r, c);
                    if e.is_endo() && !e.identity_coeff().is_zero() {
                        return Some((k, r, c));
                    }
                }
            }
        }
        None
    }

    fn eliminate(&mut self, k: usize, r0: usize, c0: usize) {
        let d = &self.diffs[k];
        let phi_inv = d.get(r0, c0).inverse().expect("pivot has a unit identity coefficient");
        // u[c] = φ⁻¹ ∘ δ[c]
        let u: Vec<Option<MorphElement<F>>> = (0..d.cols())
            .map(|c| {
                let e = d.get(r0, c);
                (c != c0 && !e.is_zero()).then(|| compose_unchecked(&phi_inv, e))
            })
            .collect();
        let mut data = Vec::with_capacity((d.rows() - 1) * (d.cols() - 1));
        for r in 0..d.rows() {
            if r == r0 {
                continue;
            }
            let g = d.get(r, c0);
            for c in 0..d.cols() {
                if c == c0 {
                    continue;
                }
                let e = d.get(r, c);
                match (&u[c], g.is_zero()) {
                    (Some(uc), false) => data.push(e.sub(&compose_unchecked(g, uc))),
                    _ => data.push(e.clone()),
                }
            }
        }
        self.diffs[k] = MorphMatrix { rows: d.rows() - 1, cols: d.cols() - 1, data };
        if k > 0 {
            self.diffs[k - 1] = self.diffs[k - 1].without(Some(c0), None);
        }
        if k + 1 < self.diffs.len() {
            self.diffs[k + 1] = self.diffs[k + 1].without(None, Some(r0));
        }
        self.terms[k].remove(c0);
        self.terms[k + 1].remove(r0);
    }

    fn trim(&mut self) {
        let first = self.terms.iter().position(|t| !t.is_empty());
        let Some(first) = first else {
            *self = Self::zero(self.diagram);
            return;
        };
        let last = self.terms.iter().rposition(|t| !t.is_empty()).unwrap_or(first);
        self.terms.truncate(last + 1);
        self.diffs.truncate(last + 1);
        if let Some(m) = self.diffs.last_mut() {
            *m = MorphMatrix::zero(&[], &self.terms[last]);
        }
        self.terms.drain(..first);
        self.diffs.drain(..first);
        self.lo += first as i64;
    }

    /// The cochain complex `Hom(P_j, X)` in distinguished bases.
    pub fn hom_complex(&self, j: Vertex) -> HomComplex<F> {
        let d = self.diagram;
        let basis: Vec<Vec<(usize, MorphBasisElement)>> = self
            .terms
            .iter()
            .map(|labels| labels.iter().enumerate().flat_map(|(s, &m)| hom_basis(&d, j, m).into_iter().map(move |b| (s, b))).collect())
            .collect();
        let offsets: Vec<Vec<usize>> = self
            .terms
            .iter()
            .map(|labels| {
                let mut acc = 0;
                labels
                    .iter()
                    .map(|&m| {
                        let o = acc;
                        acc += crate::zigzag::hom_dim(&d, j, m);
                        o
                    })
                    .collect()
            })
            .collect();
        let diffs = (0..self.terms.len())
            .map(|k| {
                let cols = basis[k].len();
                let Some(next) = basis.get(k + 1) else {
                    return Matrix::zeros(0, cols);
                };
                let mut m = Matrix::zeros(next.len(), cols);
                let dk = &self.diffs[k];
                for (col, &(s, b)) in basis[k].iter().enumerate() {
                    let f = MorphElement::basis(b);
                    for r in 0..dk.rows() {
                        let e = dk.get(r, s);
                        if e.is_zero() {
                            continue;
                        }
                        let img = compose_unchecked(e, &f);
                        for (q, v) in img.coords(&d).into_iter().enumerate() {
                            if !v.is_zero() {
                                m.set(offsets[k + 1][r] + q, col, v);
                            }
                        }
                    }
                }
                m
            })
            .collect();
        HomComplex { vertex: j, lo: self.lo, basis, diffs }
    }

    /// `k ↦ dim Hom^k(P_j, X)`, nonzero entries only.
    pub fn hom_dims(&self, j: Vertex) -> BTreeMap<i64, usize> {
        self.hom_complex(j).homology_dims()
    }

    pub fn profile(&self) -> HomProfile {
        let mut entries = BTreeMap::new();
        for j in self.diagram.vertices() {
            for (k, v) in self.hom_dims(j) {
                entries.insert((j, k), v);
            }
        }
        HomProfile { entries }
    }

    /// The invariant compared by [`profiles_equal`]: minimal summand lists and
    /// the Hom profile. `self` should already be minimal.
    pub fn fingerprint(&self) -> Fingerprint {
        Fingerprint { summands: self.summand_multisets(), profile: self.profile() }
    }

    pub fn to_json(&self) -> Value {
        let d = &self.diagram;
        let mut degrees = Map::new();
        let mut diffs = Map::new();
        for deg in self.degrees() {
            degrees.insert(deg.to_string(), json!(self.summands(deg)));
            let m = self.diff(deg);
            if m.rows() > 0 && m.cols() > 0 {
                diffs.insert(deg.to_string(), m.to_json(d));
            }
        }
        json!({"diagram": self.diagram, "degrees": degrees, "diffs": diffs})
    }

    /// Reads the JSON produced by [`ProjComplex::to_json`]. The `diagram` key is
    /// optional; when present it must agree with `diagram`.
    pub fn from_json(diagram: DynkinDiagram, v: &Value) -> Result<Self> {
        if let Some(dv) = v.get("diagram") {
            let inner: DynkinDiagram = serde_json::from_value(dv.clone()).map_err(|e| Error::Parse(e.to_string()))?;
            same_diagram(diagram, inner)?;
        }
        let bad = |what: &str| Error::Parse(format!("complex JSON: {what}"));
        let degs = v.get("degrees").and_then(Value::as_object).ok_or_else(|| bad("missing \"degrees\""))?;
        let mut degrees = BTreeMap::new();
        for (k, labels) in degs {
            let d: i64 = k.parse().map_err(|_| bad("degree keys must be integers"))?;
            let labels: Vec<Vertex> = serde_json::from_value(labels.clone()).map_err(|_| bad("summands must be vertex lists"))?;
            degrees.insert(d, labels);
        }
        let empty = Map::new();
        let dfs = match v.get("diffs") {
            Some(x) => x.as_object().ok_or_else(|| bad("\"diffs\" must be an object"))?,
            None => &empty,
        };
        let none = Vec::new();
        let mut diffs = BTreeMap::new();
        for (k, rows) in dfs {
            let d: i64 = k.parse().map_err(|_| bad("degree keys must be integers"))?;
            let rows = rows.as_array().ok_or_else(|| bad("matrices are arrays of rows"))?;
            let parsed: Result<Vec<Vec<MorphElement<F>>>> = rows
                .iter()
                .map(|row| {
                    row.as_array()
                        .ok_or_else(|| bad("matrix rows are arrays"))?
                        .iter()
                        .map(|e| MorphElement::from_json(&diagram, e))
                        .collect()
                })
                .collect();
            let src = degrees.get(&d).unwrap_or(&none);
            let tgt = degrees.get(&(d + 1)).unwrap_or(&none);
            diffs.insert(d, MorphMatrix::from_rows(tgt, src, parsed?)?);
        }
        Self::new(diagram, degrees, diffs)
    }
}

impl<F: Field> fmt::Display for ProjComplex<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .degrees()
            .map(|d| {
                let s: Vec<String> = self.summands(d).iter().map(|v| format!("P{v}")).collect();
                let body = if s.is_empty() { "0".to_string() } else { s.join("+") };
                format!("[{d}] {body}")
            })
            .collect();
        write!(f, "{}", parts.join(" -> "))
    }
}

/// A chain map `F: X → Y`, one morphism matrix per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap<F> {
    source: ProjComplex<F>,
    target: ProjComplex<F>,
    maps: BTreeMap<i64, MorphMatrix<F>>,
}

impl<F: Field> ChainMap<F> {
    /// Validates shapes, labels and `F D = D F`. Missing degrees are zero.
    pub fn new(source: ProjComplex<F>, target: ProjComplex<F>, maps: BTreeMap<i64, MorphMatrix<F>>) -> Result<Self> {
        same_diagram(source.diagram, target.diagram)?;
        for (&d, m) in &maps {
            let (s, t) = (source.summands(d), target.summands(d));
            if m.rows() != t.len() || m.cols() != s.len() {
                return Err(Error::InvalidChainMap(format!("component in degree {d} has the wrong shape")));
            }
            for r in 0..m.rows() {
                for c in 0..m.cols() {
                    let e = m.get(r, c);
                    if e.src() != s[c] || e.tgt() != t[r] {
                        return Err(Error::InvalidChainMap(format!("component in degree {d} has wrong labels")));
                    }
                }
            }
        }
        let f = ChainMap { source, target, maps };
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(source: ProjComplex<F>, target: ProjComplex<F>, maps: BTreeMap<i64, MorphMatrix<F>>) -> Self {
        ChainMap { source, target, maps }
    }

    pub fn zero(source: ProjComplex<F>, target: ProjComplex<F>) -> Self {
        ChainMap { source, target, maps: BTreeMap::new() }
    }

    pub fn identity(x: &ProjComplex<F>) -> Self {
        let maps = x
            .degrees()
            .map(|d| {
                let s = x.summands(d);
                let m =
                    MorphMatrix::from_fn(s, s, |r, c| if r == c { MorphElement::identity(s[c]) } else { MorphElement::zero(s[c], s[r]) });
                (d, m)
            })
            .collect();
        ChainMap { source: x.clone(), target: x.clone(), maps }
    }

    pub fn source(&self) -> &ProjComplex<F> {
        &self.source
    }

    pub fn target(&self) -> &ProjComplex<F> {
        &self.target
    }

    pub fn component(&self, d: i64) -> MorphMatrix<F> {
        match self.maps.get(&d) {
            Some(m) => m.clone(),
            None => MorphMatrix::zero(self.target.summands(d), self.source.summands(d)),
        }
    }

    pub fn check(&self) -> Result<()> {
        let (x, y) = (&self.source, &self.target);
        let lo = x.degree_range().map(|r| r.0).unwrap_or(0).min(y.degree_range().map(|r| r.0).unwrap_or(0)) - 1;
        let hi = x.degree_range().map(|r| r.1).unwrap_or(0).max(y.degree_range().map(|r| r.1).unwrap_or(0)) + 1;
        for d in lo..=hi {
            let left = self.component(d + 1).mul(&x.diff(d), y.summands(d + 1), x.summands(d));
            let right = y.diff(d).mul(&self.component(d), y.summands(d + 1), x.summands(d));
            if left != right {
                return Err(Error::InvalidChainMap(format!("square from degree {d} does not commute")));
            }
        }
        Ok(())
    }
}

/// `cone(F)` together with its canonical maps `Y → cone(F) → X[1]`.
#[derive(Clone, Debug)]
pub struct Cone<F> {
    pub object: ProjComplex<F>,
    pub inclusion: ChainMap<F>,
    pub projection: ChainMap<F>,
}

/// Degree `d` carries `X^{d+1} ⊕ Y^d` with differential `[[-D_X, 0], [F, D_Y]]`.
pub fn cone<F: Field>(f: &ChainMap<F>) -> Result<Cone<F>> {
    f.check()?;
    Ok(cone_unchecked(f))
}

pub(crate) fn cone_unchecked<F: Field>(f: &ChainMap<F>) -> Cone<F> {
    let (x, y) = (&f.source, &f.target);
    let diagram = x.diagram;
    let mut degrees = BTreeMap::new();
    for d in x.degrees().map(|d| d - 1).chain(y.degrees()) {
        let mut v = x.summands(d + 1).to_vec();
        v.extend_from_slice(y.summands(d));
        degrees.insert(d, v);
    }
    let object = ProjComplex::assemble(diagram, &degrees, |d, tgt, src| {
        let nxs = x.summands(d + 1).len();
        let nxt = x.summands(d + 2).len();
        let top_right = MorphMatrix::zero(&tgt[..nxt], &src[nxs..]);
        Ok(MorphMatrix::blocks(&x.diff(d + 1).neg(), &top_right, &f.component(d + 1), &y.diff(d)))
    })
    .expect("cone assembly cannot fail");

    let mut inc = BTreeMap::new();
    let mut proj = BTreeMap::new();
    for d in object.degrees() {
        let labels = object.summands(d);
        let nx = x.summands(d + 1).len();
        let ys = y.summands(d);
        inc.insert(
            d,
            MorphMatrix::from_fn(labels, ys, |r, c| {
                if r == nx + c {
                    MorphElement::identity(ys[c])
                } else {
                    MorphElement::zero(ys[c], labels[r])
                }
            }),
        );
        let xs = x.summands(d + 1);
        proj.insert(
            d,
            MorphMatrix::from_fn(
                xs,
                labels,
                |r, c| {
                    if r == c {
                        MorphElement::identity(xs[r])
                    } else {
                        MorphElement::zero(labels[c], xs[r])
                    }
                },
            ),
        );
    }
    let inclusion = ChainMap::new_unchecked(y.clone(), object.clone(), inc);
    let projection = ChainMap::new_unchecked(object.clone(), x.shift(1), proj);
    Cone { object, inclusion, projection }
}

/// `Hom(P_j, X)` as a complex of vector spaces.
#[derive(Clone, Debug)]
pub struct HomComplex<F> {
    vertex: Vertex,
    lo: i64,
    // per degree: (summand index, basis morphism P_j → P_label)
    basis: Vec<Vec<(usize, MorphBasisElement)>>,
    diffs: Vec<Matrix<F>>,
}

impl<F: Field> HomComplex<F> {
    pub fn vertex(&self) -> Vertex {
        self.vertex
    }

    fn index(&self, k: i64) -> Option<usize> {
        let i = k - self.lo;
        (i >= 0 && (i as usize) < self.basis.len()).then_some(i as usize)
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        (0..self.basis.len()).map(move |i| self.lo + i as i64)
    }

    pub fn dim(&self, k: i64) -> usize {
        self.index(k).map(|i| self.basis[i].len()).unwrap_or(0)
    }

    pub fn basis(&self, k: i64) -> &[(usize, MorphBasisElement)] {
        self.index(k).map(|i| self.basis[i].as_slice()).unwrap_or(&[])
    }

    /// The differential `C^k → C^{k+1}`.
    pub fn diff(&self, k: i64) -> Matrix<F> {
        match self.index(k) {
            Some(i) if i + 1 < self.basis.len() => self.diffs[i].clone(),
            _ => Matrix::zeros(self.dim(k + 1), self.dim(k)),
        }
    }

    pub fn homology_dim(&self, k: i64) -> usize {
        let n = self.dim(k);
        if n == 0 {
            return 0;
        }
        n - self.diff(k).rank() - self.diff(k - 1).rank()
    }

    pub fn homology_dims(&self) -> BTreeMap<i64, usize> {
        self.degrees().map(|k| (k, self.homology_dim(k))).filter(|&(_, v)| v > 0).collect()
    }

    /// Basis of the cocycles in degree `k`.
    pub fn cycles(&self, k: i64) -> Vec<Vec<F>> {
        self.diff(k).kernel()
    }

    /// Spanning set of the coboundaries in degree `k` (columns of `d^{k-1}`).
    pub fn boundaries(&self, k: i64) -> Vec<Vec<F>> {
        let m = self.diff(k - 1);
        m.pivot_columns().into_iter().map(|c| m.column(c)).collect()
    }

    /// Alternating sum of chain-group dimensions.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees().map(|k| if k.rem_euclid(2) == 0 { 1 } else { -1 } * self.dim(k) as i64).sum()
    }
}

/// `(j, k) ↦ dim Hom^k(P_j, X)`, nonzero entries only.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct HomProfile {
    entries: BTreeMap<(Vertex, i64), usize>,
}

impl HomProfile {
    pub fn get(&self, j: Vertex, k: i64) -> usize {
        self.entries.get(&(j, k)).copied().unwrap_or(0)
    }

    pub fn entries(&self) -> &BTreeMap<(Vertex, i64), usize> {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of all dimensions.
    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }

    /// `k ↦ dim Hom^k(Λ, X)`.
    pub fn totals_by_degree(&self) -> BTreeMap<i64, usize> {
        let mut out = BTreeMap::new();
        for (&(_, k), &v) in &self.entries {
            *out.entry(k).or_insert(0) += v;
        }
        out
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.entries.keys().map(|&(_, k)| k).min()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.entries.keys().map(|&(_, k)| k).max()
    }

    pub fn to_json(&self) -> Value {
        let mut by_vertex: BTreeMap<Vertex, Map<String, Value>> = BTreeMap::new();
        for (&(j, k), &v) in &self.entries {
            by_vertex.entry(j).or_default().insert(k.to_string(), json!(v));
        }
        let mut out = Map::new();
        for (j, m) in by_vertex {
            out.insert(j.to_string(), Value::Object(m));
        }
        Value::Object(out)
    }
}

impl fmt::Display for HomProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|(&(j, k), v)| format!("P{j}@{k}:{v}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Minimal summand lists plus Hom profile.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint {
    pub summands: BTreeMap<i64, Vec<Vertex>>,
    pub profile: HomProfile,
}

/// Necessary condition for `X ≅ Y`: equal minimal summand multisets and equal
/// Hom profiles.
pub fn profiles_equal<F: Field>(x: &ProjComplex<F>, y: &ProjComplex<F>) -> bool {
    if x.diagram != y.diagram {
        return false;
    }
    x.minimize().fingerprint() == y.minimize().fingerprint()
}

pub fn projective<F: Field>(d: DynkinDiagram, i: Vertex) -> Result<ProjComplex<F>> {
    ProjComplex::projective(d, i)
}

pub fn sum_of_projectives<F: Field>(d: DynkinDiagram) -> ProjComplex<F> {
    ProjComplex::sum_of_projectives(d)
}

/// The chain map between stalk complexes in degree 0 given by one morphism.
pub fn stalk_map<F: Field>(d: DynkinDiagram, f: MorphElement<F>) -> Result<ChainMap<F>> {
    let x = ProjComplex::projective(d, f.src())?;
    let y = ProjComplex::projective(d, f.tgt())?;
    let m = MorphMatrix::from_rows(&[f.tgt()], &[f.src()], vec![vec![f]])?;
    ChainMap::new(x, y, BTreeMap::from([(0, m)]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Rational, F2};

    fn a(n: usize) -> DynkinDiagram {
        format!("A{n}").parse().unwrap()
    }

    fn p<F: Field>(d: DynkinDiagram, i: Vertex) -> ProjComplex<F> {
        ProjComplex::projective(d, i).unwrap()
    }

    fn gamma_cone<F: Field>() -> ProjComplex<F> {
        let d = a(2);
        cone(&stalk_map(d, MorphElement::<F>::arrow(1, 2)).unwrap()).unwrap().object
    }

    #[test]
    fn stalks_and_shifts() {
        let d = a(2);
        let p1 = p::<F2>(d, 1);
        assert_eq!(p1.summands(0), &[1]);
        let s = p1.shift(1);
        assert_eq!(s.summands(-1), &[1]);
        assert_eq!(s.shift(-1), p1);
        assert_eq!(p1.shift(0), p1);
        assert_eq!(p1.hom_dims(1), BTreeMap::from([(0, 2)]));
        assert_eq!(s.hom_dims(1), BTreeMap::from([(-1, 2)]));
    }

    #[test]
    fn sum_of_projectives_profile() {
        let d = a(2);
        let lam = ProjComplex::<F2>::sum_of_projectives(d);
        assert_eq!(lam.summands(0), &[1, 2]);
        assert_eq!(lam.hom_dims(1), BTreeMap::from([(0, 3)]));
        let by_sum = p::<F2>(d, 1).direct_sum(&p(d, 2)).unwrap();
        assert_eq!(by_sum, lam);
        assert_eq!(lam.direct_sum(&ProjComplex::zero(d)).unwrap(), lam);
    }

    #[test]
    fn cone_of_arrow() {
        let c = gamma_cone::<F2>();
        assert_eq!(c.summands(-1), &[1]);
        assert_eq!(c.summands(0), &[2]);
        let hc = c.hom_complex(1);
        assert_eq!((hc.dim(-1), hc.dim(0)), (2, 1));
        assert_eq!(hc.diff(-1).rank(), 1);
        assert_eq!(c.hom_dims(1), BTreeMap::from([(-1, 1)]));
        assert_eq!(c.hom_dims(2), BTreeMap::from([(0, 1)]));
        assert!(c.is_minimal());
    }

    #[test]
    fn cone_examples() {
        let d = a(2);
        let zero_to_p2 = ChainMap::<F2>::zero(ProjComplex::zero(d), p(d, 2));
        assert_eq!(cone(&zero_to_p2).unwrap().object, p(d, 2));

        let id = stalk_map(d, MorphElement::<F2>::identity(1)).unwrap();
        assert!(cone(&id).unwrap().object.minimize().is_zero());

        let l = stalk_map(d, MorphElement::<F2>::loop_at(1)).unwrap();
        let c = cone(&l).unwrap().object;
        assert_eq!(c.minimize(), c);
    }

    #[test]
    fn canonical_cone_maps_are_chain_maps() {
        let d = a(3);
        let f = stalk_map(d, MorphElement::<Rational>::arrow(2, 3)).unwrap();
        let c = cone(&f).unwrap();
        c.inclusion.check().unwrap();
        c.projection.check().unwrap();
        c.object.check_d_squared().unwrap();
    }

    #[test]
    fn invalid_chain_map_rejected() {
        let d = a(2);
        let c = gamma_cone::<F2>();
        // identity on degree 0 only does not commute with the differential
        let m = MorphMatrix::from_rows(&[2], &[2], vec![vec![MorphElement::identity(2)]]).unwrap();
        assert!(ChainMap::new(c.clone(), p(d, 2), BTreeMap::from([(0, m)])).is_err());
    }

    #[test]
    fn non_adjacent_hom_is_zero() {
        let c = p::<F2>(a(3), 1).hom_complex(3);
        assert_eq!(c.dim(0), 0);
        assert!(p::<F2>(a(3), 1).hom_dims(3).is_empty());
    }

    #[test]
    fn d_squared_checked_on_construction() {
        let d = a(2);
        // P1 -g-> P2 -g-> P1 composes to the loop, so D² ≠ 0
        let degrees = BTreeMap::from([(0, vec![1]), (1, vec![2]), (2, vec![1])]);
        let diffs = BTreeMap::from([
            (0, MorphMatrix::from_rows(&[2], &[1], vec![vec![MorphElement::<F2>::arrow(1, 2)]]).unwrap()),
            (1, MorphMatrix::from_rows(&[1], &[2], vec![vec![MorphElement::<F2>::arrow(2, 1)]]).unwrap()),
        ]);
        assert!(ProjComplex::new(d, degrees, diffs).is_err());
    }

    #[test]
    fn minimize_preserves_profile_and_is_idempotent() {
        let d = a(3);
        let lam = ProjComplex::<Rational>::sum_of_projectives(d);
        let big = cone(&ChainMap::identity(&lam)).unwrap().object.direct_sum(&gamma_like(d)).unwrap();
        let m = big.minimize();
        assert_eq!(m.profile(), big.profile());
        assert_eq!(m.minimize(), m);
        for j in d.vertices() {
            assert_eq!(m.hom_complex(j).euler_characteristic(), big.hom_complex(j).euler_characteristic());
        }
    }

    fn gamma_like(d: DynkinDiagram) -> ProjComplex<Rational> {
        cone(&stalk_map(d, MorphElement::arrow(1, 2)).unwrap()).unwrap().object
    }

    #[test]
    fn json_roundtrip() {
        let c = gamma_cone::<Rational>();
        let v = c.to_json();
        assert_eq!(
            v.to_string(),
            r#"{"diagram":{"family":"A","rank":2},"degrees":{"-1":[1],"0":[2]},"diffs":{"-1":[[{"src":1,"tgt":2,"terms":[{"kind":"arrow","coef":"1"}]}]]}}"#
        );
        assert_eq!(ProjComplex::<Rational>::from_json(a(2), &v).unwrap(), c);
        assert!(ProjComplex::<Rational>::from_json(a(3), &v).is_err());
        let bare = serde_json::json!({"degrees": {"0": [1, 2]}});
        assert_eq!(ProjComplex::<F2>::from_json(a(2), &bare).unwrap(), ProjComplex::sum_of_projectives(a(2)));
    }
}
