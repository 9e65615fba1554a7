//! The first-occurrence-preserving embedding order on nonempty words.
//!
//! `a <=_E b` holds when there is a strictly increasing `h` from the
//! positions of `a` into the positions of `b` that matches letters, the two
//! words use the same letters, and `h` sends the first occurrence of every
//! letter in `a` to the first occurrence of that letter in `b`. Informally,
//! `b` arises from `a` by inserting letters after their first occurrence.
//!
//! Positions are 0-based throughout the API; [`Witness::one_based`] and the
//! `Display` impls give the 1-based rendering.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::algebra::Domain;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::Element;

/// A nonempty word over a domain.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    domain: Domain,
    letters: Vec<Element>,
}

impl Word {
    pub fn new(domain: Domain, letters: Vec<Element>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::InvalidInput("words must be nonempty".into()));
        }
        domain.check_all(&letters)?;
        Ok(Word { domain, letters })
    }

    /// Parses the 1-based rendering `"[1,2,2]"`.
    pub fn parse_one_based(domain: Domain, text: &str) -> Result<Self> {
        let inner = text
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::InvalidInput(format!("word must look like [1,2,..], got {text:?}")))?;
        let letters = inner
            .split(',')
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(|s| {
                let v = usize::from_str(s).map_err(|_| Error::InvalidInput(format!("bad letter {s:?} in {text:?}")))?;
                if v == 0 || v > domain.size() {
                    return Err(Error::DomainViolation {
                        value: v,
                        size: domain.size(),
                    });
                }
                Ok((v - 1) as Element)
            })
            .collect::<Result<Vec<_>>>()?;
        Word::new(domain, letters)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn letters(&self) -> &[Element] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn symbols(&self) -> BTreeSet<Element> {
        self.letters.iter().copied().collect()
    }

    pub fn last(&self) -> Element {
        *self.letters.last().expect("nonempty")
    }

    /// All but the final letter; `None` for one-letter words.
    pub fn start(&self) -> Option<Word> {
        (self.letters.len() >= 2).then(|| Word {
            domain: self.domain,
            letters: self.letters[..self.letters.len() - 1].to_vec(),
        })
    }

    /// Least position holding `b`.
    pub fn first_occ(&self, b: Element) -> Result<Option<usize>> {
        self.domain.check(b)?;
        Ok(self.letters.iter().position(|&x| x == b))
    }

    fn is_first_occurrence(&self, pos: usize) -> bool {
        let c = self.letters[pos];
        self.letters[..pos].iter().all(|&x| x != c)
    }

    /// Letters in order of first appearance.
    fn appearance_order(&self) -> Vec<Element> {
        let mut seen = Vec::new();
        for &c in &self.letters {
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        seen
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, &c) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", c as usize + 1)?;
        }
        write!(f, "]")
    }
}

/// A strictly increasing map from positions of `a` to positions of `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    map: Vec<usize>,
}

impl Witness {
    pub fn new(map: Vec<usize>) -> Self {
        Witness { map }
    }

    pub fn positions(&self) -> &[usize] {
        &self.map
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.map.iter().map(|p| p + 1).collect()
    }

    /// Checks every defining condition of a witness for `a <=_E b`.
    pub fn validate(&self, a: &Word, b: &Word) -> Result<()> {
        a.domain.same_as(&b.domain)?;
        let h = &self.map;
        if h.len() != a.len() {
            return Err(Error::InvalidWitness(format!(
                "map has {} entries for a word of length {}",
                h.len(),
                a.len()
            )));
        }
        if h.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidWitness("map is not strictly increasing".into()));
        }
        if h.iter().any(|&j| j >= b.len()) {
            return Err(Error::InvalidWitness("map leaves the target word".into()));
        }
        if let Some(i) = (0..a.len()).find(|&i| a.letters[i] != b.letters[h[i]]) {
            return Err(Error::InvalidWitness(format!("letter mismatch at position {}", i + 1)));
        }
        if a.symbols() != b.symbols() {
            return Err(Error::InvalidWitness("words use different letters".into()));
        }
        for c in a.symbols() {
            let fa = a.letters.iter().position(|&x| x == c).expect("symbol of a");
            let fb = b.letters.iter().position(|&x| x == c).expect("symbol of b");
            if h[fa] != fb {
                return Err(Error::InvalidWitness(format!(
                    "first occurrence of letter {} not preserved",
                    c as usize + 1
                )));
            }
        }
        Ok(())
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Searches a witness for `a <=_E b`.
///
/// First occurrences are pinned to first occurrences; every other position
/// is matched to the leftmost fitting letter before the next pinned
/// position. Leftmost matching inside each gap is optimal, so this finds a
/// witness whenever one exists.
pub fn embeds(a: &Word, b: &Word) -> Result<Option<Witness>> {
    a.domain.same_as(&b.domain)?;
    if a.len() > b.len() || a.appearance_order() != b.appearance_order() {
        return Ok(None);
    }
    let m = a.len();
    let first_in_b: HashMap<Element, usize> = {
        let mut map = HashMap::new();
        for (j, &c) in b.letters.iter().enumerate() {
            map.entry(c).or_insert(j);
        }
        map
    };
    let pinned: Vec<Option<usize>> = (0..m)
        .map(|i| a.is_first_occurrence(i).then(|| first_in_b[&a.letters[i]]))
        .collect();
    let mut h = Vec::with_capacity(m);
    let mut cursor = 0;
    for i in 0..m {
        if let Some(p) = pinned[i] {
            if p < cursor {
                return Ok(None);
            }
            h.push(p);
            cursor = p + 1;
            continue;
        }
        let bound = pinned[i + 1..].iter().find_map(|p| *p).unwrap_or(b.len());
        let c = a.letters[i];
        match (cursor..bound).find(|&j| b.letters[j] == c) {
            Some(j) => {
                h.push(j);
                cursor = j + 1;
            }
            None => return Ok(None),
        }
    }
    let w = Witness::new(h);
    debug_assert!(w.validate(a, b).is_ok());
    Ok(Some(w))
}

pub fn word_le(a: &Word, b: &Word) -> Result<bool> {
    Ok(embeds(a, b)?.is_some())
}

/// The map `T_{a,b,h}: A^m -> A^n`. Position `j` of the output copies the
/// input at `h^-1(j)` when `j` is in the range of `h`, otherwise the input
/// at the first occurrence in `a` of the letter `b_j`.
pub fn t_map(a: &Word, b: &Word, h: &Witness, x: &[Element]) -> Result<Vec<Element>> {
    h.validate(a, b)?;
    if x.len() != a.len() {
        return Err(Error::ArityMismatch {
            expected: a.len(),
            found: x.len(),
        });
    }
    a.domain.check_all(x)?;
    Ok(t_map_sources(a, b, h).into_iter().map(|i| x[i]).collect())
}

/// For each output position of `T_{a,b,h}`, the input position it reads.
pub fn t_map_sources(a: &Word, b: &Word, h: &Witness) -> Vec<usize> {
    let mut source: Vec<Option<usize>> = vec![None; b.len()];
    for (i, &j) in h.map.iter().enumerate() {
        source[j] = Some(i);
    }
    source
        .into_iter()
        .enumerate()
        .map(|(j, s)| {
            s.unwrap_or_else(|| {
                a.letters
                    .iter()
                    .position(|&x| x == b.letters[j])
                    .expect("symbol sets agree")
            })
        })
        .collect()
}

/// Words obtained by deleting one letter that is not a first occurrence,
/// sorted and without repetition.
pub fn predecessors(a: &Word) -> Vec<Word> {
    let set: BTreeSet<Word> = (0..a.len())
        .filter(|&i| !a.is_first_occurrence(i))
        .map(|i| {
            let mut letters = a.letters.clone();
            letters.remove(i);
            Word {
                domain: a.domain,
                letters,
            }
        })
        .collect();
    set.into_iter().collect()
}

/// Result of a bounded scan for the minimal words of an upward-closed set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalScan {
    pub minimals: Vec<Word>,
    /// No minimal word of the maximal scanned length was found.
    pub frontier_closed: bool,
    pub max_len: usize,
}

impl MinimalScan {
    pub fn max_minimal_len(&self) -> Option<usize> {
        self.minimals.iter().map(Word::len).max()
    }
}

/// Scans all words of length `1..=max_len` in length-then-lex order and
/// reports the `<=_E`-minimal members.
///
/// A member is reported when no single-deletion predecessor is a member and
/// no previously reported word embeds into it. The scan never claims
/// anything about words longer than `max_len`; `frontier_closed` only says
/// the last layer produced no new minimal word.
pub fn minimal_elements<M>(member: M, domain: Domain, max_len: usize, limits: &Limits) -> Result<MinimalScan>
where
    M: Fn(&Word) -> Result<bool> + Sync,
{
    if max_len < 1 {
        return Err(Error::InvalidInput("max_len must be at least 1".into()));
    }
    if max_len > limits.max_word_len {
        return Err(Error::limit("word length", max_len as u128, limits.max_word_len));
    }
    let mut total: usize = 0;
    for len in 1..=max_len {
        total = total.saturating_add(domain.power(len).unwrap_or(usize::MAX));
    }
    if total > limits.max_bruteforce {
        return Err(Error::limit("word scan", total as u128, limits.max_bruteforce));
    }

    let mut status: HashMap<Word, bool> = HashMap::new();
    let mut minimals: Vec<Word> = Vec::new();
    let mut found_at_last = false;
    for len in 1..=max_len {
        let words: Vec<Word> = domain.tuples(len).map(|letters| Word { domain, letters }).collect();
        let flags: Vec<bool> = words.par_iter().map(&member).collect::<Result<Vec<bool>>>()?;
        found_at_last = false;
        for (w, is_member) in words.into_iter().zip(flags) {
            if is_member {
                let pred_member = predecessors(&w).iter().any(|p| status[p]);
                if !pred_member && !minimals.iter().any(|m| word_le(m, &w).unwrap_or(false)) {
                    minimals.push(w.clone());
                    if len == max_len {
                        found_at_last = true;
                    }
                }
            }
            status.insert(w, is_member);
        }
    }
    Ok(MinimalScan {
        minimals,
        frontier_closed: !found_at_last,
        max_len,
    })
}

/// Least index pair `(i, j)`, `i < j`, with `seq[i] <=_E seq[j]`.
pub fn find_good_pair(seq: &[Word]) -> Result<Option<(usize, usize)>> {
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if word_le(&seq[i], &seq[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

/// All words of length `1..=max_len` over `domain`, shortest first.
pub fn all_words(domain: Domain, max_len: usize) -> Vec<Word> {
    (1..=max_len)
        .flat_map(|len| domain.tuples(len).map(move |letters| Word { domain, letters }))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(t: usize) -> Domain {
        Domain::new(t).unwrap()
    }

    fn w(t: usize, s: &str) -> Word {
        Word::parse_one_based(dom(t), s).unwrap()
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = combinations(n - 1, k);
        for mut c in combinations(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }

    /// Tries every increasing injection against the three defining conditions.
    fn brute_force_le(a: &Word, b: &Word) -> bool {
        let fo = |x: &Word, c: Element| x.letters().iter().position(|&y| y == c);
        if a.symbols() != b.symbols() {
            return false;
        }
        combinations(b.len(), a.len()).into_iter().any(|h| {
            (0..a.len()).all(|i| a.letters()[i] == b.letters()[h[i]])
                && a.symbols().into_iter().all(|c| Some(h[fo(a, c).unwrap()]) == fo(b, c))
        })
    }

    #[test]
    fn first_occ_examples() {
        let a = w(3, "[1,2,1]");
        assert_eq!(a.first_occ(0).unwrap(), Some(0));
        assert_eq!(a.first_occ(2).unwrap(), None);
        assert_eq!(w(3, "[2,2,1]").first_occ(0).unwrap(), Some(2));
        assert!(a.first_occ(3).is_err());
    }

    #[test]
    fn accessors() {
        let a = w(3, "[1,3,1,2]");
        assert_eq!(a.symbols(), [0, 1, 2].into_iter().collect());
        assert_eq!(a.last(), 1);
        assert_eq!(a.start().unwrap(), w(3, "[1,3,1]"));
        assert!(w(3, "[2]").start().is_none());
        assert_eq!(a.to_string(), "[1,3,1,2]");
        assert!(Word::parse_one_based(dom(2), "[1,3]").is_err());
        assert!(Word::parse_one_based(dom(2), "[]").is_err());
        assert!(Word::parse_one_based(dom(2), "1,2").is_err());
    }

    #[test]
    fn embeds_examples() {
        let h = embeds(&w(2, "[1,2]"), &w(2, "[1,2,2]")).unwrap().unwrap();
        assert_eq!(h.one_based(), vec![1, 2]);
        assert!(embeds(&w(2, "[1,2]"), &w(2, "[2,1]")).unwrap().is_none());
        let h = embeds(&w(2, "[1]"), &w(2, "[1,1,1]")).unwrap().unwrap();
        assert_eq!(h.one_based(), vec![1]);
        let h = embeds(&w(2, "[1,2]"), &w(2, "[1,1,2]")).unwrap().unwrap();
        assert_eq!(h.one_based(), vec![1, 3]);
        assert!(embeds(&w(2, "[1]"), &w(3, "[1]")).is_err());
    }

    #[test]
    fn word_le_examples() {
        for a in all_words(dom(2), 3) {
            assert!(word_le(&a, &a).unwrap());
        }
        assert!(!word_le(&w(2, "[1,2]"), &w(2, "[2,1]")).unwrap());
        assert!(word_le(&w(2, "[1,2]"), &w(2, "[1,2,2,1]")).unwrap());
    }

    #[test]
    fn greedy_agrees_with_brute_force() {
        for t in 1..=3 {
            let shorts = all_words(dom(t), 4);
            let longs = all_words(dom(t), if t == 3 { 5 } else { 6 });
            for a in &shorts {
                for b in &longs {
                    let greedy = embeds(a, b).unwrap();
                    assert_eq!(greedy.is_some(), brute_force_le(a, b), "{a} vs {b}");
                    if let Some(h) = greedy {
                        h.validate(a, b).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn t_map_examples() {
        let a = w(2, "[1,2]");
        let b = w(2, "[1,2,2]");
        let h = Witness::new(vec![0, 1]);
        assert_eq!(t_map(&a, &b, &h, a.letters()).unwrap(), b.letters());
        let image = t_map(&a, &b, &h, &[0, 0]).unwrap();
        assert_eq!(image, vec![0, 0, 0]);
        assert!(image.as_slice() < b.letters());
        let one = w(2, "[1]");
        let two = w(2, "[1,1]");
        assert_eq!(t_map(&one, &two, &Witness::new(vec![0]), &[1]).unwrap(), vec![1, 1]);
        // h = (1,3) breaks first-occurrence preservation for letter 2
        assert!(matches!(
            t_map(&a, &b, &Witness::new(vec![0, 2]), &[0, 0]),
            Err(Error::InvalidWitness(_))
        ));
        assert!(t_map(&a, &b, &h, &[0]).is_err());
    }

    #[test]
    fn predecessor_examples() {
        assert_eq!(predecessors(&w(2, "[1,2,2]")), vec![w(2, "[1,2]")]);
        assert!(predecessors(&w(2, "[1,2]")).is_empty());
        assert_eq!(predecessors(&w(2, "[1,1,2,1]")), vec![w(2, "[1,1,2]"), w(2, "[1,2,1]")]);
        for a in all_words(dom(3), 5) {
            for p in predecessors(&a) {
                assert!(word_le(&p, &a).unwrap() && p != a);
            }
        }
    }

    /// Minimal members by the definition, over all words up to `max_len`.
    fn brute_minimals(member: impl Fn(&Word) -> bool, t: usize, max_len: usize) -> Vec<Word> {
        let words = all_words(dom(t), max_len);
        words
            .iter()
            .filter(|a| member(a))
            .filter(|a| !words.iter().any(|b| b != *a && member(b) && brute_force_le(b, a)))
            .cloned()
            .collect()
    }

    #[test]
    fn minimal_elements_examples() {
        let limits = Limits::default();
        let contains_two = |a: &Word| a.letters().contains(&1);
        let scan = minimal_elements(|a| Ok(contains_two(a)), dom(2), 3, &limits).unwrap();
        // (2,1) is minimal as well: it shares no symbol set with (2)
        assert_eq!(scan.minimals, vec![w(2, "[2]"), w(2, "[1,2]"), w(2, "[2,1]")]);
        assert!(scan.frontier_closed);
        assert_eq!(scan.minimals, brute_minimals(contains_two, 2, 3));

        let scan = minimal_elements(|_| Ok(false), dom(3), 3, &limits).unwrap();
        assert!(scan.minimals.is_empty() && scan.frontier_closed);

        // everything: minimal words are the repetition-free ones
        let scan = minimal_elements(|_| Ok(true), dom(2), 3, &limits).unwrap();
        assert_eq!(
            scan.minimals,
            vec![w(2, "[1]"), w(2, "[2]"), w(2, "[1,2]"), w(2, "[2,1]")]
        );
        assert!(scan.frontier_closed);
        let scan = minimal_elements(|_| Ok(true), dom(2), 2, &limits).unwrap();
        assert!(!scan.frontier_closed);
        let scan = minimal_elements(|_| Ok(true), dom(1), 1, &limits).unwrap();
        assert_eq!(scan.minimals, vec![w(1, "[1]")]);

        assert!(minimal_elements(|_| Ok(true), dom(2), 0, &limits).is_err());
        assert!(minimal_elements(|_| Ok(true), dom(2), 40, &limits)
            .unwrap_err()
            .is_resource_limit());
    }

    #[test]
    fn minimal_elements_match_definition_on_upsets() {
        let limits = Limits::default();
        // upward closure of a few generators is upward closed by transitivity
        let gens = [w(3, "[1,2,1]"), w(3, "[3,3]"), w(3, "[2,1,3,1]")];
        let member = |a: &Word| gens.iter().any(|g| brute_force_le(g, a));
        let scan = minimal_elements(|a| Ok(member(a)), dom(3), 5, &limits).unwrap();
        assert_eq!(scan.minimals, brute_minimals(member, 3, 5));
        assert_eq!(scan.minimals.len(), 3);
    }

    #[test]
    fn good_pair_examples() {
        let one = w(2, "[1]");
        assert_eq!(find_good_pair(&[one.clone(), one.clone()]).unwrap(), Some((0, 1)));
        assert_eq!(find_good_pair(&[w(2, "[1,2]"), w(2, "[2,1]")]).unwrap(), None);
        // more words than distinct words of length <= 2 over 2 letters
        let words = all_words(dom(2), 2);
        let mut seq = words.clone();
        seq.push(words[3].clone());
        assert!(find_good_pair(&seq).unwrap().is_some());
        assert_eq!(find_good_pair(&[]).unwrap(), None);
    }

    #[test]
    fn le_implies_length_and_symbols() {
        let words = all_words(dom(3), 4);
        for a in &words {
            for b in &words {
                if word_le(a, b).unwrap() {
                    assert!(a.len() <= b.len());
                    assert_eq!(a.symbols(), b.symbols());
                }
            }
        }
    }
}
