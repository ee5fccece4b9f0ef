//! Positive braid words, the rewriting oracle for the braid monoid, and
//! layered (slice-by-colour) presentations.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{DynkinDiagram, Vertex};
use crate::error::{Error, Result};

/// A positive braid word `s_{i_1} ... s_{i_k}`. The empty word is the identity.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WordWire")]
pub struct BraidWord {
    diagram: DynkinDiagram,
    letters: Vec<Vertex>,
}

#[derive(Deserialize)]
struct WordWire {
    diagram: DynkinDiagram,
    letters: Vec<Vertex>,
}

impl TryFrom<WordWire> for BraidWord {
    type Error = Error;
    fn try_from(w: WordWire) -> Result<Self> {
        BraidWord::new(w.diagram, w.letters)
    }
}

impl BraidWord {
    pub fn new(diagram: DynkinDiagram, letters: Vec<Vertex>) -> Result<Self> {
        for &l in &letters {
            diagram.check_vertex(l)?;
        }
        Ok(BraidWord { diagram, letters })
    }

    pub fn identity(diagram: DynkinDiagram) -> Self {
        BraidWord { diagram, letters: Vec::new() }
    }

    pub fn generator(diagram: DynkinDiagram, j: Vertex) -> Result<Self> {
        Self::new(diagram, vec![j])
    }

    /// Parses `s1s2s1`, `1 2 1`, `1,2,1`, or `e` / the empty string for the identity.
    pub fn parse(diagram: DynkinDiagram, s: &str) -> Result<Self> {
        let t = s.trim();
        if t.is_empty() || t == "e" || t == "ε" {
            return Ok(Self::identity(diagram));
        }
        let letters: Result<Vec<Vertex>> = if t.contains('s') {
            t.split('s')
                .map(str::trim)
                .enumerate()
                .filter(|(i, p)| !(*i == 0 && p.is_empty()))
                .map(|(_, p)| p.parse().map_err(|_| Error::Parse(format!("bad word {s:?}"))))
                .collect()
        } else {
            t.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|p| !p.is_empty())
                .map(|p| p.parse().map_err(|_| Error::Parse(format!("bad word {s:?}"))))
                .collect()
        };
        Self::new(diagram, letters?)
    }

    pub fn diagram(&self) -> DynkinDiagram {
        self.diagram
    }

    pub fn letters(&self) -> &[Vertex] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// `s_j · self`
    pub fn prepend(&self, j: Vertex) -> Result<Self> {
        self.diagram.check_vertex(j)?;
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(j);
        letters.extend_from_slice(&self.letters);
        Ok(BraidWord { diagram: self.diagram, letters })
    }

    pub fn concat(&self, other: &BraidWord) -> Result<Self> {
        same_diagram(self.diagram, other.diagram)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BraidWord { diagram: self.diagram, letters })
    }

    /// The equivalence class of the word in the braid monoid, as letter sequences.
    pub fn class(&self) -> BTreeSet<Vec<Vertex>> {
        equivalence_class(&self.diagram, &self.letters)
    }

    /// Lexicographically least word of the class.
    pub fn class_representative(&self) -> BraidWord {
        let rep = self.class().into_iter().next().unwrap_or_default();
        BraidWord { diagram: self.diagram, letters: rep }
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        for l in &self.letters {
            write!(f, "s{l}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.diagram, self)
    }
}

pub(crate) fn same_diagram(a: DynkinDiagram, b: DynkinDiagram) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::DiagramMismatch(a.to_string(), b.to_string()))
    }
}

/// All words obtained from `w` by one commutation or one braid relation.
pub fn neighbours_of(d: &DynkinDiagram, w: &[Vertex]) -> Vec<Vec<Vertex>> {
    let mut out = Vec::new();
    for p in 0..w.len().saturating_sub(1) {
        let (a, b) = (w[p], w[p + 1]);
        if a != b && !d.adjacent(a, b) {
            let mut v = w.to_vec();
            v.swap(p, p + 1);
            out.push(v);
        }
        if p + 2 < w.len() && w[p + 2] == a && d.adjacent(a, b) {
            let mut v = w.to_vec();
            v[p] = b;
            v[p + 1] = a;
            v[p + 2] = b;
            out.push(v);
        }
    }
    out
}

/// Breadth-first closure of `w` under the defining relations.
pub fn equivalence_class(d: &DynkinDiagram, w: &[Vertex]) -> BTreeSet<Vec<Vertex>> {
    let mut seen = BTreeSet::new();
    seen.insert(w.to_vec());
    let mut queue = VecDeque::from([w.to_vec()]);
    while let Some(cur) = queue.pop_front() {
        for next in neighbours_of(d, &cur) {
            if seen.insert(next.clone()) {
                queue.push_back(next);
            }
        }
    }
    seen
}

/// Monoid equality, decided by exhaustive rewriting.
pub fn equivalent(w1: &BraidWord, w2: &BraidWord) -> Result<bool> {
    same_diagram(w1.diagram, w2.diagram)?;
    if w1.len() != w2.len() {
        return Ok(false);
    }
    if w1.letters == w2.letters {
        return Ok(true);
    }
    let mut a = w1.letters.clone();
    let mut b = w2.letters.clone();
    a.sort_unstable();
    b.sort_unstable();
    // both relations preserve the set of letters occurring
    a.dedup();
    b.dedup();
    if a != b {
        return Ok(false);
    }
    Ok(w1.class().contains(&w2.letters))
}

/// If `w = s_j · w'` in the monoid, returns the lexicographically least such `w'`.
pub fn left_divisible_by(w: &BraidWord, j: Vertex) -> Result<Option<BraidWord>> {
    w.diagram.check_vertex(j)?;
    if !w.letters.contains(&j) {
        return Ok(None);
    }
    Ok(w.class().into_iter().find(|v| v[0] == j).map(|v| BraidWord { diagram: w.diagram, letters: v[1..].to_vec() }))
}

/// Every word of length exactly `len`, in lexicographic order.
pub fn all_words(d: DynkinDiagram, len: usize) -> Vec<BraidWord> {
    let n = d.rank();
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut letters = vec![0; len];
            for slot in letters.iter_mut().rev() {
                *slot = code % n + 1;
                code /= n;
            }
            BraidWord { diagram: d, letters }
        })
        .collect()
}

/// Every word of length at most `max_len`, shortest first.
pub fn words_up_to(d: DynkinDiagram, max_len: usize) -> Vec<BraidWord> {
    (0..=max_len).flat_map(|l| all_words(d, l)).collect()
}

/// A word presented as `s_{Σ_0} s_{Σ_1} ... s_{Σ_p}` with `Σ_k ⊆ V^k`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "LayeredWire")]
pub struct LayeredWord {
    diagram: DynkinDiagram,
    slices: Vec<Vec<Vertex>>,
}

#[derive(Deserialize)]
struct LayeredWire {
    diagram: DynkinDiagram,
    slices: Vec<Vec<Vertex>>,
}

impl TryFrom<LayeredWire> for LayeredWord {
    type Error = Error;
    fn try_from(w: LayeredWire) -> Result<Self> {
        LayeredWord::new(w.diagram, w.slices)
    }
}

impl LayeredWord {
    /// Slices are sorted; repeated vertices inside a slice are rejected.
    pub fn new(diagram: DynkinDiagram, slices: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut out = Vec::with_capacity(slices.len());
        for (k, mut s) in slices.into_iter().enumerate() {
            s.sort_unstable();
            for (idx, &v) in s.iter().enumerate() {
                diagram.check_vertex(v)?;
                if diagram.color(v) as usize != k % 2 {
                    return Err(Error::InvalidLayering(format!("vertex {v} has colour {} but sits in slice {k}", diagram.color(v))));
                }
                if idx > 0 && s[idx - 1] == v {
                    return Err(Error::InvalidLayering(format!("vertex {v} repeated in slice {k}")));
                }
            }
            out.push(s);
        }
        Ok(LayeredWord { diagram, slices: out })
    }

    pub fn diagram(&self) -> DynkinDiagram {
        self.diagram
    }

    pub fn slices(&self) -> &[Vec<Vertex>] {
        &self.slices
    }

    pub fn len(&self) -> usize {
        self.slices.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl fmt::Display for LayeredWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, s) in self.slices.iter().enumerate() {
            if k > 0 {
                write!(f, " | ")?;
            }
            let parts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join(","))?;
        }
        write!(f, "]")
    }
}

/// Greedy layering: each letter goes to the least slice of its colour that
/// lies strictly after every earlier letter equal or adjacent to it.
pub fn layer(w: &BraidWord) -> LayeredWord {
    let d = w.diagram;
    let mut slices: Vec<Vec<Vertex>> = Vec::new();
    let mut placed: Vec<(Vertex, usize)> = Vec::with_capacity(w.len());
    for &j in &w.letters {
        let lower = placed.iter().filter(|&&(v, _)| v == j || d.adjacent(v, j)).map(|&(_, k)| k + 1).max().unwrap_or(0);
        let color = d.color(j) as usize;
        let k = if lower % 2 == color { lower } else { lower + 1 };
        if slices.len() <= k {
            slices.resize(k + 1, Vec::new());
        }
        slices[k].push(j);
        placed.push((j, k));
    }
    for s in &mut slices {
        s.sort_unstable();
    }
    LayeredWord { diagram: d, slices }
}

/// Concatenation of the slices, each in ascending order.
pub fn flatten(lw: &LayeredWord) -> BraidWord {
    BraidWord { diagram: lw.diagram, letters: lw.slices.concat() }
}

impl BraidWord {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("word serialises")
    }
}
