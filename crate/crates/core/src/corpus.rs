//! Exhaustive word corpora: every positive word up to a length bound together
//! with its object `T_w`, and the monoid classes of those words.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::braid::{all_words, equivalence_class, BraidWord};
use crate::diagram::{DynkinDiagram, Vertex};
use crate::field::Field;
use crate::homalg::{Fingerprint, ProjComplex};
use crate::twists::twist;

#[derive(Clone, Debug)]
pub struct CorpusEntry<F> {
    pub word: BraidWord,
    pub object: ProjComplex<F>,
}

/// All words of length `0..=max_len` with their objects, grouped by length.
/// Within a length the words are in lexicographic order; `T_{s_i w}` is
/// computed as `t_i(T_w)` from the previous level.
#[derive(Clone, Debug)]
pub struct Corpus<F> {
    diagram: DynkinDiagram,
    levels: Vec<Vec<CorpusEntry<F>>>,
}

impl<F: Field> Corpus<F> {
    pub fn build(diagram: DynkinDiagram, max_len: usize) -> Self {
        let n = diagram.rank();
        let mut levels: Vec<Vec<CorpusEntry<F>>> = Vec::with_capacity(max_len + 1);
        levels.push(vec![CorpusEntry { word: BraidWord::identity(diagram), object: ProjComplex::sum_of_projectives(diagram) }]);
        for len in 1..=max_len {
            let prev = &levels[len - 1];
            let words = all_words(diagram, len);
            let next: Vec<CorpusEntry<F>> = words
                .into_par_iter()
                .enumerate()
                .map(|(code, word)| {
                    // word = s_i · w with w at index code mod n^(len-1) of the previous level
                    let i = word.letters()[0];
                    let tail = &prev[code % n.pow(len as u32 - 1)];
                    debug_assert_eq!(tail.word.letters(), &word.letters()[1..]);
                    let object = twist(i, &tail.object).expect("letters are vertices");
                    CorpusEntry { word, object }
                })
                .collect();
            levels.push(next);
        }
        Corpus { diagram, levels }
    }

    pub fn diagram(&self) -> DynkinDiagram {
        self.diagram
    }

    pub fn max_len(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, len: usize) -> &[CorpusEntry<F>] {
        &self.levels[len]
    }

    pub fn entries(&self) -> impl Iterator<Item = &CorpusEntry<F>> {
        self.levels.iter().flatten()
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `T_w` for a word of the corpus.
    pub fn object_of(&self, w: &[Vertex]) -> Option<&ProjComplex<F>> {
        let level = self.levels.get(w.len())?;
        let n = self.diagram.rank();
        let code = w.iter().try_fold(0usize, |acc, &l| (1..=n).contains(&l).then_some(acc * n + l - 1))?;
        level.get(code).map(|e| &e.object)
    }

    /// Fingerprints of every entry at one length, in corpus order.
    pub fn fingerprints(&self, len: usize) -> Vec<Fingerprint> {
        self.levels[len].par_iter().map(|e| e.object.fingerprint()).collect()
    }
}

/// Monoid class index of every word of length `len`: equivalent words share
/// an id.
pub fn class_index(d: DynkinDiagram, len: usize) -> HashMap<Vec<Vertex>, usize> {
    let words = all_words(d, len);
    let ids = class_ids(&words);
    words.into_iter().zip(ids).map(|(w, id)| (w.letters().to_vec(), id)).collect()
}

/// For each word, the index of its monoid class (classes numbered in order of
/// first appearance). All words must have the same diagram.
pub fn class_ids(words: &[BraidWord]) -> Vec<usize> {
    let mut ids: HashMap<Vec<Vertex>, usize> = HashMap::new();
    let mut next = 0;
    let mut out = Vec::with_capacity(words.len());
    for w in words {
        if let Some(&id) = ids.get(w.letters()) {
            out.push(id);
            continue;
        }
        for member in equivalence_class(&w.diagram(), w.letters()) {
            ids.insert(member, next);
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Compares the oracle partition of one length class with the partition by
/// fingerprint. Returns the offending pairs (at most `limit`).
pub fn partition_mismatches(
    words: &[BraidWord],
    classes: &[usize],
    prints: &[Fingerprint],
    limit: usize,
) -> (usize, Vec<(BraidWord, BraidWord)>) {
    let mut by_class: HashMap<usize, usize> = HashMap::new();
    let mut by_print: HashMap<&Fingerprint, usize> = HashMap::new();
    let mut count = 0;
    let mut examples = Vec::new();
    for (idx, (c, p)) in classes.iter().zip(prints).enumerate() {
        let rep_c = *by_class.entry(*c).or_insert(idx);
        let rep_p = *by_print.entry(p).or_insert(idx);
        if rep_c != rep_p {
            count += 1;
            if examples.len() < limit {
                let other = if rep_c != idx { rep_c } else { rep_p };
                examples.push((words[other].clone(), words[idx].clone()));
            }
        }
    }
    (count, examples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::F2;
    use crate::twists::twist_of_word;

    #[test]
    fn corpus_objects_match_direct_computation() {
        let d: DynkinDiagram = "A3".parse().unwrap();
        let c = Corpus::<F2>::build(d, 3);
        assert_eq!(c.len(), 1 + 3 + 9 + 27);
        for e in c.entries() {
            assert_eq!(e.object, twist_of_word(&e.word));
            assert_eq!(c.object_of(e.word.letters()), Some(&e.object));
        }
    }

    #[test]
    fn classes_and_partitions_agree_on_a2() {
        let d: DynkinDiagram = "A2".parse().unwrap();
        let c = Corpus::<F2>::build(d, 4);
        for len in 0..=4 {
            let words: Vec<BraidWord> = c.level(len).iter().map(|e| e.word.clone()).collect();
            let ids = class_ids(&words);
            let (n, _) = partition_mismatches(&words, &ids, &c.fingerprints(len), 3);
            assert_eq!(n, 0, "length {len}");
        }
        let words = all_words(d, 3);
        let ids = class_ids(&words);
        let a = words.iter().position(|w| w.letters() == [1, 2, 1]).unwrap();
        let b = words.iter().position(|w| w.letters() == [2, 1, 2]).unwrap();
        assert_eq!(ids[a], ids[b]);
    }
}
