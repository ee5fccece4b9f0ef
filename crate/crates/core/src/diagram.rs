//! Simply-laced Dynkin diagrams with a fixed bipartition of the vertices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex labels run from 1 to the rank of the diagram.
pub type Vertex = usize;

const MAX_RANK: usize = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    A,
    D,
    E,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Family::A => 'A',
            Family::D => 'D',
            Family::E => 'E',
        };
        write!(f, "{c}")
    }
}

/// An ADE Dynkin diagram together with its proper 2-colouring `V^0 ⊔ V^1`.
///
/// Labelling conventions:
/// * `A_n`: the path `1 - 2 - ... - n`;
/// * `D_n`: vertex 2 is the branch vertex with leaves 1 and 3, and the tail
///   `2 - 4 - 5 - ... - n`;
/// * `E_n`: the branch vertex is 4, with arms `4 - 3 - 1`, `4 - 2` and
///   `4 - 5 - ... - n`.
///
/// By default vertex 1 has colour 0. The opposite bipartition is available
/// through [`DynkinDiagram::flipped`]; it is the same graph with every colour
/// swapped.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiagramWire", into = "DiagramWire")]
pub struct DynkinDiagram {
    family: Family,
    rank: usize,
    flipped: bool,
    // adjacency bitmask, indexed by vertex label (index 0 unused)
    adj: [u16; MAX_RANK + 1],
}

impl DynkinDiagram {
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let legal = match family {
            Family::A => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
        };
        if !legal || rank > MAX_RANK {
            return Err(Error::InvalidDiagram(format!("{family}{rank} is not a supported ADE type")));
        }
        let mut edges: Vec<(usize, usize)> = Vec::new();
        match family {
            Family::A => edges.extend((1..rank).map(|v| (v, v + 1))),
            Family::D => {
                edges.push((1, 2));
                edges.push((2, 3));
                edges.push((2, 4));
                edges.extend((4..rank).map(|v| (v, v + 1)));
            }
            Family::E => {
                edges.push((1, 3));
                edges.push((3, 4));
                edges.push((2, 4));
                edges.extend((4..rank).map(|v| (v, v + 1)));
            }
        }
        let mut adj = [0u16; MAX_RANK + 1];
        for (a, b) in edges {
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Ok(DynkinDiagram { family, rank, flipped: false, adj })
    }

    /// The same diagram with colours 0 and 1 exchanged.
    pub fn flipped(self) -> Self {
        DynkinDiagram { flipped: !self.flipped, ..self }
    }

    pub fn is_flipped(&self) -> bool {
        self.flipped
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + Clone {
        1..=self.rank
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (1..=self.rank).contains(&v)
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::UnknownVertex { vertex: v, diagram: self.to_string() })
        }
    }

    pub fn adjacent(&self, a: Vertex, b: Vertex) -> bool {
        a <= MAX_RANK && b <= MAX_RANK && self.adj[a] & (1 << b) != 0
    }

    /// `N(j)`, in increasing order.
    pub fn neighbors(&self, j: Vertex) -> Result<Vec<Vertex>> {
        self.check_vertex(j)?;
        Ok(self.neighbor_iter(j).collect())
    }

    pub(crate) fn neighbor_iter(&self, j: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        let mask = self.adj[j];
        (1..=self.rank).filter(move |&v| mask & (1 << v) != 0)
    }

    pub fn edges(&self) -> Vec<(Vertex, Vertex)> {
        self.vertices().flat_map(|a| self.neighbor_iter(a).filter(move |&b| a < b).map(move |b| (a, b))).collect()
    }

    /// Colour of `v` in `{0, 1}`.
    pub fn color(&self, v: Vertex) -> u8 {
        // Distance from vertex 1 in a tree decides the colour; all diagrams
        // here are bipartite trees so parity is well defined.
        let mut dist = [usize::MAX; MAX_RANK + 1];
        dist[1] = 0;
        let mut queue = std::collections::VecDeque::from([1usize]);
        while let Some(x) = queue.pop_front() {
            for y in self.neighbor_iter(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        ((dist[v] % 2) as u8) ^ (self.flipped as u8)
    }

    /// The colour class `V^u` (`u` taken mod 2), increasing.
    pub fn color_class(&self, u: i64) -> Vec<Vertex> {
        let u = u.rem_euclid(2) as u8;
        self.vertices().filter(|&v| self.color(v) == u).collect()
    }

    /// Number of positive roots, which is also the length of the Garside
    /// element `Δ`.
    pub fn positive_root_count(&self) -> usize {
        let n = self.rank;
        match (self.family, n) {
            (Family::A, _) => n * (n + 1) / 2,
            (Family::D, _) => n * (n - 1),
            (Family::E, 6) => 36,
            (Family::E, 7) => 63,
            _ => 120,
        }
    }

    /// `2·Id + A`: the dimension matrix of `Hom(P_i, P_j)`; row/column `k`
    /// corresponds to vertex `k + 1`.
    pub fn cartan_matrix(&self) -> Vec<Vec<usize>> {
        self.vertices().map(|i| self.vertices().map(|j| if i == j { 2 } else { self.adjacent(i, j) as usize }).collect()).collect()
    }
}

impl fmt::Display for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family, self.rank)?;
        if self.flipped {
            write!(f, "'")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DynkinDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses `A3`, `D4`, `E6`, ...; a trailing `'` selects the flipped colouring.
impl FromStr for DynkinDiagram {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (body, flipped) = match s.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let mut chars = body.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('D') => Family::D,
            Some('E') => Family::E,
            _ => return Err(Error::Parse(format!("unknown diagram {s:?}"))),
        };
        let rank: usize = chars.as_str().parse().map_err(|_| Error::Parse(format!("unknown diagram {s:?}")))?;
        let d = DynkinDiagram::new(family, rank)?;
        Ok(if flipped { d.flipped() } else { d })
    }
}

#[derive(Serialize, Deserialize)]
struct DiagramWire {
    family: String,
    rank: usize,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    flipped: bool,
}

impl TryFrom<DiagramWire> for DynkinDiagram {
    type Error = Error;

    fn try_from(w: DiagramWire) -> Result<Self> {
        let family = match w.family.as_str() {
            "A" => Family::A,
            "D" => Family::D,
            "E" => Family::E,
            other => return Err(Error::Parse(format!("unknown family {other:?}"))),
        };
        let d = DynkinDiagram::new(family, w.rank)?;
        Ok(if w.flipped { d.flipped() } else { d })
    }
}

impl From<DynkinDiagram> for DiagramWire {
    fn from(d: DynkinDiagram) -> Self {
        DiagramWire { family: d.family.to_string(), rank: d.rank, flipped: d.flipped }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_tree(d: &DynkinDiagram) -> bool {
        let n = d.rank();
        if d.edges().len() != n - 1 {
            return false;
        }
        let mut seen = vec![false; n + 1];
        let mut stack = vec![1];
        seen[1] = true;
        while let Some(x) = stack.pop() {
            for y in d.neighbor_iter(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen[1..].iter().all(|&s| s)
    }

    #[test]
    fn a2_is_an_edge() {
        let d = DynkinDiagram::new(Family::A, 2).unwrap();
        assert_eq!(d.edges(), vec![(1, 2)]);
        assert_eq!((d.color(1), d.color(2)), (0, 1));
    }

    #[test]
    fn d4_is_a_star_centered_at_two() {
        let d: DynkinDiagram = "D4".parse().unwrap();
        assert_eq!(d.neighbors(2).unwrap(), vec![1, 3, 4]);
        for leaf in [1, 3, 4] {
            assert_eq!(d.neighbors(leaf).unwrap(), vec![2]);
        }
    }

    #[test]
    fn illegal_types_are_rejected() {
        assert!(DynkinDiagram::new(Family::E, 5).is_err());
        assert!(DynkinDiagram::new(Family::E, 9).is_err());
        assert!(DynkinDiagram::new(Family::D, 3).is_err());
        assert!(DynkinDiagram::new(Family::A, 1).is_err());
        assert!("B3".parse::<DynkinDiagram>().is_err());
    }

    #[test]
    fn neighbors_in_a3() {
        let d: DynkinDiagram = "A3".parse().unwrap();
        assert_eq!(d.neighbors(2).unwrap(), vec![1, 3]);
        assert_eq!(d.neighbors(1).unwrap(), vec![2]);
        assert!(d.neighbors(4).is_err());
    }

    #[test]
    fn all_types_are_properly_colored_trees() {
        let mut all = Vec::new();
        for n in 2..=9 {
            all.push(DynkinDiagram::new(Family::A, n).unwrap());
        }
        for n in 4..=9 {
            all.push(DynkinDiagram::new(Family::D, n).unwrap());
        }
        for n in 6..=8 {
            all.push(DynkinDiagram::new(Family::E, n).unwrap());
        }
        for d in all {
            assert!(is_tree(&d), "{d} is not a tree");
            assert_eq!(d.color(1), 0);
            for (a, b) in d.edges() {
                assert_ne!(d.color(a), d.color(b), "{d}: edge {a}-{b}");
            }
            let f = d.flipped();
            assert!(d.vertices().all(|v| f.color(v) != d.color(v)));
        }
    }

    #[test]
    fn e_branch_vertex_is_four() {
        for n in 6..=8 {
            let d = DynkinDiagram::new(Family::E, n).unwrap();
            let degree3: Vec<_> = d.vertices().filter(|&v| d.neighbors(v).unwrap().len() == 3).collect();
            assert_eq!(degree3, vec![4]);
        }
    }

    #[test]
    fn json_encoding() {
        let d: DynkinDiagram = "A3".parse().unwrap();
        let s = serde_json::to_string(&d).unwrap();
        assert_eq!(s, r#"{"family":"A","rank":3}"#);
        let back: DynkinDiagram = serde_json::from_str(&s).unwrap();
        assert_eq!(back, d);
        assert!(serde_json::from_str::<DynkinDiagram>(r#"{"family":"E","rank":5}"#).is_err());
        let f: DynkinDiagram = serde_json::from_str(r#"{"family":"D","rank":4,"flipped":true}"#).unwrap();
        assert_eq!(f, "D4'".parse().unwrap());
    }
}
