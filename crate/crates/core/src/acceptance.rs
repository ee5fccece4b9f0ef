//! Exact acceptance sweeps over exhaustive corpora. Each runner returns a
//! [`CriterionReport`]; a criterion passes when it checked something and
//! nothing failed.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::braid::{all_words, flatten, layer, left_divisible_by, BraidWord};
use crate::corpus::{class_ids, class_index, partition_mismatches, Corpus};
use crate::diagram::{DynkinDiagram, Vertex};
use crate::field::{Field, Rational, F2};
use crate::homalg::{profiles_equal, MorphMatrix, ProjComplex};
use crate::linalg::Matrix;
use crate::meshbraid::{
    chi_of_layered, divisor_boundary, divisor_hypotheses, factorization_chains, factorization_words, find_left_divisor, to_decorated,
    DecoratedSet,
};
use crate::reconstruct::{long_morphism_dim, min_degree, recover_word};
use crate::twists::{apply_reflection, t_minus, twist, twist_inv, two_term_of, two_term_reflect, TwoTermShape};
use crate::zigzag::{compose_with, hom_basis, hom_dim, pairing_with, CompositionTable, MorphElement};

const MAX_EXAMPLES: usize = 8;

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: u8,
    pub title: &'static str,
    pub checked: usize,
    pub failures: usize,
    pub examples: Vec<String>,
    pub millis: u128,
    /// One entry per check, comparable across fields.
    #[serde(skip)]
    pub verdicts: Vec<u64>,
}

impl CriterionReport {
    pub fn passed(&self) -> bool {
        self.checked > 0 && self.failures == 0
    }
}

impl fmt::Display for CriterionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{verdict} criterion {}: {} ({} checks, {} failures, {} ms)",
            self.id, self.title, self.checked, self.failures, self.millis
        )?;
        for e in &self.examples {
            write!(f, "\n    {e}")?;
        }
        Ok(())
    }
}

/// One check: its verdict and, on failure, a description.
type Check = (u64, Option<String>);

fn ok(v: bool, what: impl FnOnce() -> String) -> Check {
    (v as u64, (!v).then(what))
}

struct Tally {
    id: u8,
    title: &'static str,
    start: Instant,
    checked: usize,
    failures: usize,
    examples: Vec<String>,
    verdicts: Vec<u64>,
}

impl Tally {
    fn new(id: u8, title: &'static str) -> Self {
        Tally { id, title, start: Instant::now(), checked: 0, failures: 0, examples: Vec::new(), verdicts: Vec::new() }
    }

    fn add(&mut self, checks: impl IntoIterator<Item = Check>) {
        for (v, fail) in checks {
            self.checked += 1;
            self.verdicts.push(v);
            if let Some(msg) = fail {
                self.failures += 1;
                if self.examples.len() < MAX_EXAMPLES {
                    self.examples.push(msg);
                }
            }
        }
    }

    fn finish(self) -> CriterionReport {
        CriterionReport {
            id: self.id,
            title: self.title,
            checked: self.checked,
            failures: self.failures,
            examples: self.examples,
            millis: self.start.elapsed().as_millis(),
            verdicts: self.verdicts,
        }
    }
}

/// Scale of every sweep.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub table: CompositionTable,
    pub sanity: Vec<DynkinDiagram>,
    pub axioms: Vec<(DynkinDiagram, usize)>,
    pub braid: Vec<(DynkinDiagram, usize)>,
    pub corpora: Vec<(DynkinDiagram, usize)>,
    pub two_term: Vec<DynkinDiagram>,
    pub chains: Vec<(DynkinDiagram, usize)>,
    pub mesh: Vec<(DynkinDiagram, usize)>,
    pub independence: Vec<(DynkinDiagram, usize)>,
}

fn dg(s: &str) -> DynkinDiagram {
    s.parse().expect("built-in diagram names parse")
}

impl SuiteConfig {
    /// The full acceptance scale.
    pub fn full() -> Self {
        let corpora = vec![(dg("A2"), 7), (dg("A3"), 6), (dg("D4"), 5)];
        let mut mesh = corpora.clone();
        mesh.push((dg("D4'"), 5));
        SuiteConfig {
            table: CompositionTable::Zigzag,
            sanity: ["A2", "A3", "A4", "D4", "D5", "E6"].into_iter().map(dg).collect(),
            axioms: vec![(dg("A3"), 5)],
            braid: vec![(dg("A3"), 4), (dg("D4"), 4)],
            corpora,
            two_term: vec![dg("A3"), dg("D4"), dg("D4'")],
            chains: vec![(dg("D4"), 4), (dg("D4'"), 4)],
            mesh,
            independence: vec![(dg("A2"), 5)],
        }
    }

    /// Every sweep on one diagram with word length bound `max_len`.
    pub fn single(d: DynkinDiagram, max_len: usize) -> Self {
        SuiteConfig {
            table: CompositionTable::Zigzag,
            sanity: vec![d],
            axioms: vec![(d, max_len)],
            braid: vec![(d, max_len.min(4))],
            corpora: vec![(d, max_len)],
            two_term: vec![d],
            chains: vec![(d, 4)],
            mesh: vec![(d, max_len)],
            independence: vec![(d, max_len.min(5))],
        }
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Vec<CriterionReport> {
    let corpora: Vec<Corpus<F2>> = cfg.corpora.iter().map(|&(d, l)| Corpus::build(d, l)).collect();
    vec![
        criterion_1::<Rational>(cfg.table, &cfg.sanity),
        criterion_2::<F2>(&cfg.axioms),
        criterion_3::<F2>(&cfg.braid),
        criterion_4(&corpora),
        criterion_5(&corpora),
        criterion_6(&corpora),
        criterion_7::<F2>(&cfg.two_term, &cfg.chains),
        criterion_8(&cfg.mesh),
        criterion_9(&cfg.independence),
    ]
}

/// Hom dimensions of the model and perfection of the trace pairing.
pub fn criterion_1<F: Field>(table: CompositionTable, diagrams: &[DynkinDiagram]) -> CriterionReport {
    let mut t = Tally::new(1, "configuration sanity");
    for &d in diagrams {
        for i in d.vertices() {
            let p: ProjComplex<F> = ProjComplex::projective(d, i).expect("vertex");
            let l = MorphElement::<F>::loop_at(i);
            let ll = compose_with(table, &l, &l).expect("endomorphisms compose");
            t.add([ok(ll.is_zero() && !l.is_zero(), || format!("{d}: loop at {i} does not square to zero"))]);
            for j in d.vertices() {
                let dims = p.hom_dims(j);
                let expect = hom_dim(&d, j, i);
                let good = dims.keys().all(|&k| k == 0) && dims.get(&0).copied().unwrap_or(0) == expect;
                t.add([ok(good, || format!("{d}: Hom*(P{j},P{i}) = {dims:?}, expected {expect} in degree 0"))]);
                let fs: Vec<MorphElement<F>> = hom_basis(&d, i, j).into_iter().map(MorphElement::basis).collect();
                let gs: Vec<MorphElement<F>> = hom_basis(&d, j, i).into_iter().map(MorphElement::basis).collect();
                let gram = Matrix::from_fn(fs.len(), gs.len(), |a, b| pairing_with(table, &fs[a], &gs[b]).expect("composable"));
                let rank = gram.rank();
                t.add([ok(rank == fs.len() && fs.len() == gs.len(), || {
                    format!("{d}: trace pairing Hom(P{i},P{j}) x Hom(P{j},P{i}) is degenerate (rank {rank} of {})", fs.len())
                })]);
            }
        }
    }
    t.finish()
}

fn axiom_objects<F: Field>(d: DynkinDiagram, max_len: usize) -> Vec<(String, ProjComplex<F>)> {
    let mut out: Vec<(String, ProjComplex<F>)> =
        Corpus::<F>::build(d, max_len).entries().map(|e| (format!("T_{}", e.word), e.object.clone())).collect();
    for n in -2..=2 {
        for i in d.vertices() {
            out.push((format!("P{i}[{n}]"), ProjComplex::projective(d, i).expect("vertex").shift(n)));
        }
        out.push((format!("Λ[{n}]"), ProjComplex::sum_of_projectives(d).shift(n)));
    }
    out
}

/// Twist of a projective and the quasi-inverse.
pub fn criterion_2<F: Field>(sets: &[(DynkinDiagram, usize)]) -> CriterionReport {
    let mut t = Tally::new(2, "twist axioms");
    for &(d, max_len) in sets {
        for i in d.vertices() {
            let pi: ProjComplex<F> = ProjComplex::projective(d, i).expect("vertex");
            let ti = twist(i, &pi).expect("vertex");
            t.add([ok(profiles_equal(&ti, &pi.shift(1)), || format!("{d}: t_{i}(P{i}) is not P{i}[1]"))]);
            for k in d.vertices().filter(|&k| k != i && !d.adjacent(i, k)) {
                let pk: ProjComplex<F> = ProjComplex::projective(d, k).expect("vertex");
                let tk = twist(i, &pk).expect("vertex");
                t.add([ok(profiles_equal(&tk, &pk), || format!("{d}: t_{i}(P{k}) is not P{k}"))]);
            }
        }
        let objects = axiom_objects::<F>(d, max_len);
        let checks: Vec<Vec<Check>> = objects
            .par_iter()
            .map(|(name, x)| {
                d.vertices()
                    .flat_map(|i| {
                        let a = twist_inv(i, &twist(i, x).expect("vertex")).expect("vertex");
                        let b = twist(i, &twist_inv(i, x).expect("vertex")).expect("vertex");
                        [
                            ok(profiles_equal(&a, x), || format!("{d}: t_{i}^-1 t_{i} {name} differs")),
                            ok(profiles_equal(&b, x), || format!("{d}: t_{i} t_{i}^-1 {name} differs")),
                        ]
                    })
                    .collect()
            })
            .collect();
        t.add(checks.into_iter().flatten());
    }
    t.finish()
}

/// Braid and commutation relations on every corpus object.
pub fn criterion_3<F: Field>(sets: &[(DynkinDiagram, usize)]) -> CriterionReport {
    let mut t = Tally::new(3, "braid relations");
    for &(d, max_len) in sets {
        let corpus = Corpus::<F>::build(d, max_len);
        let entries: Vec<_> = corpus.entries().collect();
        let apply =
            |letters: &[Vertex], x: &ProjComplex<F>| letters.iter().rev().fold(x.clone(), |acc, &l| twist(l, &acc).expect("vertex"));
        let checks: Vec<Vec<Check>> = entries
            .par_iter()
            .map(|e| {
                let mut out = Vec::new();
                for i in d.vertices() {
                    for j in d.vertices().filter(|&j| j > i) {
                        let (lhs, rhs) = if d.adjacent(i, j) { (vec![i, j, i], vec![j, i, j]) } else { (vec![i, j], vec![j, i]) };
                        let eq = profiles_equal(&apply(&lhs, &e.object), &apply(&rhs, &e.object));
                        out.push(ok(eq, || format!("{d}: {lhs:?} vs {rhs:?} applied to T_{}", e.word)));
                    }
                }
                out
            })
            .collect();
        t.add(checks.into_iter().flatten());
    }
    t.finish()
}

fn level_words<F: Field>(c: &Corpus<F>, len: usize) -> Vec<BraidWord> {
    c.level(len).iter().map(|e| e.word.clone()).collect()
}

/// Oracle partition of each length class against the partition by minimal
/// model and Hom profile.
pub fn criterion_4<F: Field>(corpora: &[Corpus<F>]) -> CriterionReport {
    let mut t = Tally::new(4, "faithfulness on the word problem");
    for c in corpora {
        for len in 0..=c.max_len() {
            let words = level_words(c, len);
            let ids = class_ids(&words);
            let prints = c.fingerprints(len);
            let (bad, examples) = partition_mismatches(&words, &ids, &prints, MAX_EXAMPLES);
            let mut first: HashMap<_, u64> = HashMap::new();
            let part: Vec<u64> = prints.iter().enumerate().map(|(k, p)| *first.entry(p).or_insert(k as u64)).collect();
            t.add(part.into_iter().map(|v| (v, None)));
            t.failures += bad;
            for (a, b) in examples {
                if t.examples.len() < MAX_EXAMPLES {
                    let same = crate::braid::equivalent(&a, &b).unwrap_or(false);
                    t.examples.push(format!(
                        "{}: {a} and {b} are {} but their objects {}",
                        c.diagram(),
                        if same { "equal" } else { "different" },
                        if same { "differ" } else { "agree" }
                    ));
                }
            }
        }
    }
    t.finish()
}

fn word_code(letters: &[Vertex], n: usize) -> u64 {
    letters.iter().fold(1u64, |acc, &l| acc.wrapping_mul(n as u64 + 1).wrapping_add(l as u64))
}

/// `recover_word(T_w) ≡ w` with equal length.
pub fn criterion_5<F: Field>(corpora: &[Corpus<F>]) -> CriterionReport {
    let mut t = Tally::new(5, "reconstruction round trip");
    for c in corpora {
        let d = c.diagram();
        for len in 0..=c.max_len() {
            let index = class_index(d, len);
            let checks: Vec<Check> = c
                .level(len)
                .par_iter()
                .map(|e| match recover_word(&e.object) {
                    Ok(rec) => {
                        let same = rec.word.len() == len && index.get(rec.word.letters()) == index.get(e.word.letters());
                        (word_code(rec.word.letters(), d.rank()), (!same).then(|| format!("{d}: T_{} recovered as {}", e.word, rec.word)))
                    }
                    Err(err) => (0, Some(format!("{d}: T_{}: {err}", e.word))),
                })
                .collect();
            t.add(checks);
        }
    }
    t.finish()
}

fn is_summand<F: Field>(k: Vertex, x: &ProjComplex<F>, r: i64) -> bool {
    long_morphism_dim(k, x, r).map(|(dim, _)| dim > 0).unwrap_or(false)
}

/// Minimal-degree drift under a twist, which summands may appear below it,
/// and the bound from a nonzero Hom into an inverse twist.
pub fn criterion_6<F: Field>(corpora: &[Corpus<F>]) -> CriterionReport {
    let mut t = Tally::new(6, "minimal degree invariants");
    for c in corpora {
        let d = c.diagram();
        let entries: Vec<_> = c.entries().collect();
        let checks: Vec<Vec<Check>> = entries
            .par_iter()
            .map(|e| {
                let mut out = Vec::new();
                let Ok(m) = min_degree(&e.object) else {
                    out.push((0, Some(format!("{d}: T_{} is zero", e.word))));
                    return out;
                };
                for i in d.vertices() {
                    let ti = twist(i, &e.object).expect("vertex");
                    let mi = min_degree(&ti).unwrap_or(i64::MIN);
                    out.push(ok(mi == m || mi == m - 1, || format!("{d}: min(t_{i} T_{}) = {mi}, min(T) = {m}", e.word)));
                    if mi < m {
                        for k in d.vertices().filter(|&k| k != i) {
                            let s = is_summand(k, &ti, mi);
                            out.push(ok(!s, || format!("{d}: P{k} is a summand of (t_{i} T_{})_{mi} below {m}", e.word)));
                        }
                    }
                    let inv = twist_inv(i, &e.object).expect("vertex");
                    for (r, _) in inv.hom_dims(i) {
                        out.push(ok(m < r, || format!("{d}: Hom^{r}(P{i}, t_{i}^-1 T_{}) ≠ 0 but min = {m}", e.word)));
                    }
                    let lo = min_degree(&inv).unwrap_or(m).min(m);
                    for k in d.vertices().filter(|&k| k != i) {
                        for r in lo..=m {
                            let a = is_summand(k, &inv, r);
                            let b = is_summand(k, &e.object, r);
                            out.push(ok(a == b, || format!("{d}: P{k} summand of degree {r}: t_{i}^-1 T_{} says {a}, T says {b}", e.word)));
                        }
                    }
                }
                out
            })
            .collect();
        t.add(checks.into_iter().flatten());
    }
    t.finish()
}

fn subsets(v: &[Vertex]) -> Vec<BTreeSet<Vertex>> {
    (1u32..(1 << v.len())).map(|m| v.iter().enumerate().filter(|(b, _)| m & (1 << b) != 0).map(|(_, &x)| x).collect()).collect()
}

fn multisets(v: &[Vertex], max: usize) -> Vec<Vec<Vertex>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for m in &frontier {
            let last: Vertex = m.last().copied().unwrap_or(0);
            for &x in v.iter().filter(|&&x| x >= last) {
                let mut g: Vec<Vertex> = m.clone();
                g.push(x);
                next.push(g);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Two-term complexes `⊕P_left → ⊕P_right` with at most two summands per side
/// and every arrow coefficient in {0, 1}.
pub fn two_term_corpus<F: Field>(d: DynkinDiagram) -> Vec<ProjComplex<F>> {
    let mut out = Vec::new();
    for u in 0..2i64 {
        let lefts = multisets(&d.color_class(u), 2);
        let rights = multisets(&d.color_class(u + 1), 2);
        for l in &lefts {
            for r in &rights {
                if l.is_empty() && r.is_empty() {
                    continue;
                }
                let slots: Vec<(usize, usize)> =
                    (0..r.len()).flat_map(|a| (0..l.len()).map(move |b| (a, b))).filter(|&(a, b)| d.adjacent(r[a], l[b])).collect();
                for mask in 0u32..(1 << slots.len()) {
                    let phi = MorphMatrix::from_fn(r, l, |a, b| match slots.iter().position(|&s| s == (a, b)) {
                        Some(p) if mask & (1 << p) != 0 => MorphElement::arrow(l[b], r[a]),
                        _ => MorphElement::zero(l[b], r[a]),
                    });
                    let degrees = [(-1, l.clone()), (0, r.clone())].into_iter().filter(|(_, v)| !v.is_empty()).collect();
                    let diffs = if l.is_empty() || r.is_empty() { Default::default() } else { [(-1, phi)].into_iter().collect() };
                    out.push(ProjComplex::new(d, degrees, diffs).expect("two-term complexes are valid"));
                }
            }
        }
    }
    out
}

fn chi_shape(chain: &[Vec<Vertex>], chi: &std::collections::BTreeMap<crate::meshbraid::ZGammaVertex, i64>, u: usize) -> TwoTermShape {
    let at = |s: usize| -> std::collections::BTreeMap<Vertex, usize> {
        chain[s].iter().map(|&k| (k, chi[&crate::meshbraid::ZGammaVertex { slice: s as i64, vertex: k }] as usize)).collect()
    };
    TwoTermShape { side: ((u - 1) % 2) as u8, left: at(u - 1), right: at(u) }
}

/// Dimension criteria against direct properness, predicted reflections
/// against computed ones, and the χ multiplicities along factorization chains.
pub fn criterion_7<F: Field>(diagrams: &[DynkinDiagram], chains: &[(DynkinDiagram, usize)]) -> CriterionReport {
    let mut t = Tally::new(7, "two-term calculus");
    for &d in diagrams {
        let objects = two_term_corpus::<F>(d);
        let checks: Vec<Vec<Check>> = objects
            .par_iter()
            .map(|x| {
                let mut out = Vec::new();
                let Some(tt) = two_term_of(x) else {
                    out.push((0, Some(format!("{d}: {x} is not read as two-term"))));
                    return out;
                };
                let (r6, rd) = (tt.is_right_proper(), tt.is_right_proper_direct());
                let (l6, ld) = (tt.is_left_proper(), tt.is_left_proper_direct());
                out.push(ok(r6 == rd, || format!("{d}: {x}: right-proper by dimensions {r6}, directly {rd}")));
                out.push(ok(l6 == ld, || format!("{d}: {x}: left-proper by dimensions {l6}, directly {ld}")));
                for c in 0..2i64 {
                    for delta in subsets(&d.color_class(c)) {
                        let Ok(pred) = two_term_reflect(&tt, &delta) else { continue };
                        let got = apply_reflection(&tt, &delta).expect("independent set");
                        let got_shape = two_term_of(&got).map(|g| g.shape());
                        let matches = match &got_shape {
                            Some(s) => *s == pred,
                            None => got.is_zero() && pred.left.is_empty() && pred.right.is_empty(),
                        };
                        out.push(ok(matches, || format!("{d}: reflecting {x} at {delta:?}: predicted {pred}, got {got}")));
                    }
                }
                out
            })
            .collect();
        t.add(checks.into_iter().flatten());
    }
    for &(d, depth) in chains {
        let all = factorization_chains(&d, depth);
        let checks: Vec<Vec<Check>> = all
            .par_iter()
            .filter(|lw| lw.len() >= 2)
            .map(|lw| {
                let slices = lw.slices();
                let chi = chi_of_layered(lw).expect("singleton start");
                let mut c: ProjComplex<F> = ProjComplex::projective(d, slices[0][0]).expect("vertex");
                let mut out = Vec::new();
                for u in 1..slices.len() {
                    let delta: BTreeSet<Vertex> = slices[u].iter().copied().collect();
                    c = t_minus(&delta, &c).expect("independent").minimize();
                    let want = chi_shape(slices, &chi, u);
                    let got = two_term_of(&c).map(|g| g.shape());
                    out.push(ok(got.as_ref() == Some(&want), || format!("{d}: chain {lw} at depth {u}: want {want}, got {c}")));
                }
                out
            })
            .collect();
        t.add(checks.into_iter().flatten());
    }
    t.finish()
}

fn check_moves(s: &DecoratedSet, class: Option<usize>, index: &HashMap<Vec<Vertex>, usize>, tag: &str) -> Vec<Check> {
    let mut out = Vec::new();
    let multiset = s.theta_multiset();
    for m in s.legal_commutations().into_iter().chain(s.legal_braidings()) {
        match s.apply(&m) {
            Ok(t) => {
                let same = index.get(t.word_of().letters()).copied() == class;
                out.push(ok(same, || format!("{tag}: {m} changes the word to {}", t.word_of())));
                out.push(ok(t.check_mesh_relations(), || format!("{tag}: {m} breaks mesh relations")));
                out.push(ok(t.theta_multiset() == multiset, || format!("{tag}: {m} changes the theta values")));
            }
            Err(e) => out.push((0, Some(format!("{tag}: listed move {m} rejected: {e}")))),
        }
    }
    out
}

fn check_solver(
    s: &DecoratedSet,
    w: &BraidWord,
    i: Vertex,
    class: Option<usize>,
    index: &HashMap<Vec<Vertex>, usize>,
    tag: &str,
) -> Vec<Check> {
    match find_left_divisor(s) {
        Ok((j, cert)) => {
            let mut out = vec![ok(j != i, || format!("{tag}: divisor {j} equals the excluded vertex"))];
            out.push(ok(left_divisible_by(w, j).ok().flatten().is_some(), || format!("{tag}: s{j} does not divide {w}")));
            match cert.replay(s) {
                Ok(end) => {
                    out.push(ok(index.get(end.word_of().letters()).copied() == class, || format!("{tag}: replay changes the word")));
                    let zero = end.theta().iter().find(|(_, &t)| t == 0).map(|(v, _)| *v);
                    let at_front = zero.is_some_and(|z| Some(z.slice) == end.min_slice() && z.vertex == j);
                    out.push(ok(at_front, || format!("{tag}: replayed zero vertex is not s{j} at the front")));
                }
                Err(e) => out.push((0, Some(format!("{tag}: certificate does not replay: {e}")))),
            }
            out
        }
        Err(e) => vec![(0, Some(format!("{tag}: solver failed: {e}")))],
    }
}

/// Moves preserve words, mesh relations and θ values; θ = χ on
/// factorization words; the divisor solver is sound wherever its hypotheses
/// hold.
pub fn criterion_8(sets: &[(DynkinDiagram, usize)]) -> CriterionReport {
    let mut t = Tally::new(8, "mesh braiding soundness");
    let mut diagrams: Vec<DynkinDiagram> = Vec::new();
    for &(d, max_len) in sets {
        if !diagrams.contains(&d) {
            diagrams.push(d);
        }
        for len in 0..=max_len {
            let index = class_index(d, len);
            let words = all_words(d, len);
            let checks: Vec<Vec<Check>> = words
                .par_iter()
                .map(|w| {
                    let lw = layer(w);
                    let class = index.get(w.letters()).copied();
                    let mut out = vec![ok(index.get(flatten(&lw).letters()).copied() == class, || format!("{d}: layering changes {w}"))];
                    for i in d.vertices() {
                        let tag = format!("{d} {w} i={i}");
                        let s = to_decorated(&lw, &divisor_boundary(&d, i)).expect("full boundary");
                        out.push(ok(s.check_mesh_relations(), || format!("{tag}: decoration violates mesh relations")));
                        out.push(ok(index.get(s.word_of().letters()).copied() == class, || format!("{tag}: word_of differs")));
                        out.extend(check_moves(&s, class, &index, &tag));
                        if divisor_hypotheses(&s).is_ok() {
                            out.extend(check_solver(&s, w, i, class, &index, &tag));
                        }
                    }
                    out
                })
                .collect();
            t.add(checks.into_iter().flatten());
        }
    }
    for d in diagrams {
        let words = factorization_words(&d, 4);
        let checks: Vec<Vec<Check>> = words
            .par_iter()
            .map(|lw| {
                let w = flatten(lw);
                let i = lw.slices()[0][0];
                let tag = format!("{d} {lw}");
                let index = class_index(d, w.len());
                let class = index.get(w.letters()).copied();
                let s = to_decorated(lw, &divisor_boundary(&d, i)).expect("full boundary");
                let chi = chi_of_layered(lw).expect("singleton start");
                let mut out = vec![ok(&chi == s.theta(), || format!("{tag}: theta differs from chi"))];
                out.push(ok(divisor_hypotheses(&s).is_ok(), || format!("{tag}: divisor hypotheses fail")));
                out.extend(check_solver(&s, &w, i, class, &index, &tag));
                out
            })
            .collect();
        t.add(checks.into_iter().flatten());
    }
    t.finish()
}

fn verdicts_of<F: Field>(sets: &[(DynkinDiagram, usize)]) -> Vec<(u8, Vec<u64>, bool)> {
    let corpora: Vec<Corpus<F>> = sets.iter().map(|&(d, l)| Corpus::build(d, l)).collect();
    [criterion_2::<F>(sets), criterion_3::<F>(sets), criterion_4(&corpora), criterion_5(&corpora)]
        .into_iter()
        .map(|r| (r.id, r.verdicts.clone(), r.passed()))
        .collect()
}

/// Criteria 2 to 5 give identical verdicts over the 2-element field and over
/// the rationals.
pub fn criterion_9(sets: &[(DynkinDiagram, usize)]) -> CriterionReport {
    let mut t = Tally::new(9, "characteristic independence");
    let a = verdicts_of::<F2>(sets);
    let b = verdicts_of::<Rational>(sets);
    for ((id, va, pa), (_, vb, pb)) in a.into_iter().zip(b) {
        t.add([ok(pa && pb, || format!("criterion {id} fails over {}", if pa { "Q" } else { "F2" }))]);
        t.add([ok(va.len() == vb.len(), || format!("criterion {id}: {} checks over F2, {} over Q", va.len(), vb.len()))]);
        let diff = va.iter().zip(&vb).position(|(x, y)| x != y);
        t.add([ok(diff.is_none(), || format!("criterion {id}: verdicts first differ at check {}", diff.unwrap_or(0)))]);
    }
    t.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corrupted_table_is_caught() {
        let r = criterion_1::<Rational>(CompositionTable::CorruptedLoops, &[dg("A2")]);
        assert!(!r.passed());
        assert!(r.examples.iter().any(|e| e.contains("trace pairing")));
        assert!(criterion_1::<F2>(CompositionTable::Zigzag, &[dg("A2")]).passed());
    }

    #[test]
    fn small_suite_passes() {
        for r in run_suite(&SuiteConfig::single(dg("A2"), 3)) {
            assert!(r.passed(), "{r}");
        }
    }

    #[test]
    fn two_term_corpus_reads_back() {
        let objs = two_term_corpus::<F2>(dg("A2"));
        assert!(objs.iter().all(|x| two_term_of(x).is_some()));
    }
}
