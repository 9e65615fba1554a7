//! Clone layers, special-term detection, the relations `phi(C, a)` and
//! `lambda(C, (c, d))`, the bound `m` on minimal `lambda` words, and term
//! membership.
//!
//! A clone layer `C^[n]` is the set of `n`-ary term operations of an
//! algebra. It is computed as the least set containing the `n` projections
//! and closed under composing each basic operation with members, using
//! semi-naive rounds: each round only composes argument tuples that involve
//! a member found in the previous round.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::algebra::{compose_values, fresh_round, Algebra, Domain, OperationTable, Relation};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::galois::preserves;
use crate::wpo::{minimal_elements, Word};
use crate::Element;

/// All `n`-ary term operations of an algebra, sorted by value table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CloneLayer {
    domain: Domain,
    arity: usize,
    ops: Vec<OperationTable>,
    generated_from: Vec<OperationTable>,
}

impl CloneLayer {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn ops(&self) -> &[OperationTable] {
        &self.ops
    }

    pub fn generated_from(&self) -> &[OperationTable] {
        &self.generated_from
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn contains(&self, f: &OperationTable) -> bool {
        self.ops.binary_search(f).is_ok()
    }
}

pub fn clone_layer(alg: &Algebra, n: usize, limits: &Limits) -> Result<CloneLayer> {
    if n == 0 {
        return Err(Error::InvalidInput("clone layers need positive arity".into()));
    }
    let domain = alg.domain();
    let t = domain.size();
    domain.power_within(n, limits.max_table_len, "operation table")?;

    let mut members: Vec<Vec<Element>> = Vec::new();
    let mut known: HashSet<Vec<Element>> = HashSet::new();
    for i in 1..=n {
        let p = OperationTable::projection(domain, n, i)?.into_values();
        if known.insert(p.clone()) {
            members.push(p);
        }
    }
    let mut fresh_from = 0;
    while fresh_from < members.len() {
        let len = members.len();
        let mut found = Vec::new();
        for f in alg.operations() {
            found.extend(fresh_round(&members, fresh_from, f.arity(), &known, |args| {
                let inner: Vec<&[Element]> = args.iter().map(|g| g.as_slice()).collect();
                compose_values(f.values(), t, &inner)
            }));
        }
        fresh_from = len;
        for v in found {
            if known.insert(v.clone()) {
                members.push(v);
                if members.len() > limits.max_layer_size {
                    return Err(Error::limit(
                        "clone layer",
                        members.len() as u128,
                        limits.max_layer_size,
                    ));
                }
            }
        }
    }
    let mut ops: Vec<OperationTable> = members
        .into_iter()
        .map(|v| OperationTable::from_raw(domain, n, v))
        .collect();
    ops.sort_unstable();
    Ok(CloneLayer {
        domain,
        arity: n,
        ops,
        generated_from: alg.operations().to_vec(),
    })
}

fn all_pairs(domain: Domain) -> impl Iterator<Item = (Element, Element)> {
    domain
        .elements()
        .flat_map(move |x| domain.elements().map(move |y| (x, y)))
}

/// Checks the `k`-edge identities on the `(k+1)`-ary `f`:
/// `f(y,y,x,..,x) = f(y,x,y,x,..,x) = x` and `f(x,..,x,y,x,..,x) = x` with
/// `y` at any position from the fourth on.
pub fn is_edge_op(f: &OperationTable, k: usize) -> Result<bool> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("edge operations need k >= 2, got {k}")));
    }
    if f.arity() != k + 1 {
        return Err(Error::ArityMismatch {
            expected: k + 1,
            found: f.arity(),
        });
    }
    let mut args = vec![0; k + 1];
    for (x, y) in all_pairs(f.domain()) {
        args.fill(x);
        args[0] = y;
        args[1] = y;
        if f.eval(&args) != x {
            return Ok(false);
        }
        args[1] = x;
        args[2] = y;
        if f.eval(&args) != x {
            return Ok(false);
        }
        args[2] = x;
        for pos in 3..=k {
            args[pos] = y;
            if f.eval(&args) != x {
                return Ok(false);
            }
            args[pos] = x;
        }
    }
    Ok(true)
}

/// `m(x,y,y) = m(y,y,x) = x`.
pub fn is_malcev(f: &OperationTable) -> Result<bool> {
    if f.arity() != 3 {
        return Err(Error::ArityMismatch {
            expected: 3,
            found: f.arity(),
        });
    }
    Ok(all_pairs(f.domain()).all(|(x, y)| f.eval(&[x, y, y]) == x && f.eval(&[y, y, x]) == x))
}

/// `f` returns `x` whenever all arguments but one equal `x`.
pub fn is_near_unanimity(f: &OperationTable) -> bool {
    let k = f.arity();
    let mut args = vec![0; k];
    all_pairs(f.domain()).all(|(x, y)| {
        (0..k).all(|pos| {
            args.fill(x);
            args[pos] = y;
            f.eval(&args) == x
        })
    })
}

/// `(x, y, z) -> f(y, x, z)`.
pub fn swap_first_two(f: &OperationTable) -> Result<OperationTable> {
    let d = f.domain();
    let p = |i| OperationTable::projection(d, 3, i);
    f.compose(&[p(2)?, p(1)?, p(3)?])
}

/// `(x_1, .., x_{k+1}) -> f(x_2, .., x_{k+1})`.
pub fn drop_first_argument(f: &OperationTable) -> Result<OperationTable> {
    let d = f.domain();
    let k = f.arity();
    let args = (2..=k + 1)
        .map(|i| OperationTable::projection(d, k + 1, i))
        .collect::<Result<Vec<_>>>()?;
    f.compose(&args)
}

fn first_in_layer(
    layer: &CloneLayer,
    test: impl Fn(&OperationTable) -> Result<bool> + Sync,
) -> Result<Option<OperationTable>> {
    let hits = layer
        .ops
        .par_iter()
        .map(|f| test(f).map(|ok| ok.then(|| f.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(hits.into_iter().flatten().next())
}

/// Least (by value table) Malcev term operation, if any.
pub fn find_malcev(alg: &Algebra, limits: &Limits) -> Result<Option<OperationTable>> {
    first_in_layer(&clone_layer(alg, 3, limits)?, is_malcev)
}

/// Least `k`-edge term operation, searched in the `(k+1)`-ary layer.
pub fn find_edge(alg: &Algebra, k: usize, limits: &Limits) -> Result<Option<OperationTable>> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("edge terms need k >= 2, got {k}")));
    }
    first_in_layer(&clone_layer(alg, k + 1, limits)?, |f| is_edge_op(f, k))
}

/// Least `k`-ary near-unanimity term operation.
pub fn find_nu(alg: &Algebra, k: usize, limits: &Limits) -> Result<Option<OperationTable>> {
    if k <= 2 {
        return Err(Error::InvalidInput(format!("near-unanimity terms need k > 2, got {k}")));
    }
    first_in_layer(&clone_layer(alg, k, limits)?, |f| Ok(is_near_unanimity(f)))
}

/// `phi(C, a)` together with the point it was computed at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiRelation {
    pub word: Word,
    pub pairs: BTreeSet<(Element, Element)>,
}

impl PhiRelation {
    pub fn contains(&self, c: Element, d: Element) -> bool {
        self.pairs.contains(&(c, d))
    }

    pub fn is_subset(&self, other: &PhiRelation) -> bool {
        self.pairs.is_subset(&other.pairs)
    }
}

/// Pairs `(f(a), g(a))` for members `f, g` that agree on every tuple
/// lexicographically below `a`.
///
/// Agreement below `a` is an equivalence, so members are grouped by their
/// table prefix before `a` and each group with value set `V` contributes
/// `V x V`.
pub fn phi(layer: &CloneLayer, a: &Word) -> Result<PhiRelation> {
    layer.domain.same_as(&a.domain())?;
    if a.len() != layer.arity {
        return Err(Error::ArityMismatch {
            expected: layer.arity,
            found: a.len(),
        });
    }
    let idx = layer.domain.encode_tuple(a.letters())?;
    let mut blocks: BTreeMap<&[Element], BTreeSet<Element>> = BTreeMap::new();
    for f in &layer.ops {
        let v = f.values();
        blocks.entry(&v[..idx]).or_default().insert(v[idx]);
    }
    let mut pairs = BTreeSet::new();
    for values in blocks.values() {
        for &x in values {
            for &y in values {
                pairs.insert((x, y));
            }
        }
    }
    Ok(PhiRelation { word: a.clone(), pairs })
}

/// `a` belongs to `lambda(C, (c, d))`, i.e. `(c, d)` is not in `phi(C, a)`.
pub fn lambda_member(alg: &Algebra, pair: (Element, Element), a: &Word, limits: &Limits) -> Result<bool> {
    alg.domain().check(pair.0)?;
    alg.domain().check(pair.1)?;
    let layer = clone_layer(alg, a.len(), limits)?;
    lambda_member_in(&layer, pair, a)
}

/// As [`lambda_member`], against a precomputed layer of arity `|a|`.
pub fn lambda_member_in(layer: &CloneLayer, pair: (Element, Element), a: &Word) -> Result<bool> {
    Ok(!phi(layer, a)?.contains(pair.0, pair.1))
}

/// Minimal words of one `lambda(C, (c, d))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairReport {
    pub pair: (Element, Element),
    pub minimals: Vec<Word>,
    pub frontier_closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MReport {
    pub max_len: usize,
    pub pairs: Vec<PairReport>,
    /// Longest minimal word found, or 1 when every `lambda` is empty up to `max_len`.
    pub m: usize,
    /// Every pair's frontier closed; otherwise `m` is only a lower bound.
    pub all_closed: bool,
    /// Layer sizes `|C^[n]|` for `n = 1..=max_len`.
    pub layer_sizes: Vec<usize>,
}

impl MReport {
    /// Deterministic plain-text rendering with 1-based elements.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "max_len {}", self.max_len);
        let _ = writeln!(out, "layer_sizes {:?}", self.layer_sizes);
        for p in &self.pairs {
            let words: Vec<String> = p.minimals.iter().map(|w| w.to_string()).collect();
            let _ = writeln!(
                out,
                "pair ({},{}) closed={} minimals [{}]",
                p.pair.0 as usize + 1,
                p.pair.1 as usize + 1,
                p.frontier_closed,
                words.join(" ")
            );
        }
        let _ = writeln!(out, "m {} all_closed {}", self.m, self.all_closed);
        out
    }
}

/// Bounded search for the minimal words of every `lambda(C, (c, d))` and
/// their maximal length `m`.
pub fn compute_m(alg: &Algebra, max_len: usize, limits: &Limits) -> Result<MReport> {
    if max_len < 1 {
        return Err(Error::InvalidInput("max_len must be at least 1".into()));
    }
    if max_len > limits.max_word_len {
        return Err(Error::limit("word length", max_len as u128, limits.max_word_len));
    }
    let domain = alg.domain();
    let layers = (1..=max_len)
        .map(|n| clone_layer(alg, n, limits))
        .collect::<Result<Vec<_>>>()?;
    let mut pairs = Vec::new();
    for pair in all_pairs(domain) {
        let scan = minimal_elements(
            |a: &Word| lambda_member_in(&layers[a.len() - 1], pair, a),
            domain,
            max_len,
            limits,
        )?;
        pairs.push(PairReport {
            pair,
            minimals: scan.minimals,
            frontier_closed: scan.frontier_closed,
        });
    }
    let m = pairs
        .iter()
        .flat_map(|p| p.minimals.iter().map(Word::len))
        .max()
        .unwrap_or(1);
    let all_closed = pairs.iter().all(|p| p.frontier_closed);
    Ok(MReport {
        max_len,
        pairs,
        m,
        all_closed,
        layer_sizes: layers.iter().map(CloneLayer::len).collect(),
    })
}

/// `C^[n]` as a relation of arity `t^n`: one tuple per value table.
pub fn layer_as_relation(layer: &CloneLayer, limits: &Limits) -> Result<Relation> {
    let arity = layer
        .domain
        .power_within(layer.arity, limits.max_table_len, "relation arity")?;
    Relation::new(layer.domain, arity, layer.ops.iter().map(|f| f.values().to_vec()))
}

#[derive(Clone, Copy, Debug)]
pub enum MembershipMode<'a> {
    /// Build the clone layer at the arity of the function and look it up.
    Exhaustive,
    /// Check preservation of relations assumed to determine the clone.
    ViaRelations(&'a [Relation]),
}

/// Decides whether `f` is a term operation of `alg`.
pub fn is_term_function(alg: &Algebra, f: &OperationTable, mode: MembershipMode<'_>, limits: &Limits) -> Result<bool> {
    alg.domain().same_as(&f.domain())?;
    match mode {
        MembershipMode::Exhaustive => Ok(clone_layer(alg, f.arity(), limits)?.contains(f)),
        MembershipMode::ViaRelations(rels) => {
            for r in rels {
                if !preserves(f, r)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn limits() -> Limits {
        Limits::default()
    }

    fn bool_domain() -> Domain {
        Domain::new(2).unwrap()
    }

    fn w(t: usize, s: &str) -> Word {
        Word::parse_one_based(Domain::new(t).unwrap(), s).unwrap()
    }

    /// Term operations by naive rounds: compose every generator with every
    /// tuple of current members until nothing new appears.
    fn naive_layer(alg: &Algebra, n: usize) -> BTreeSet<OperationTable> {
        let d = alg.domain();
        let mut set: BTreeSet<OperationTable> = (1..=n).map(|i| OperationTable::projection(d, n, i).unwrap()).collect();
        loop {
            let cur: Vec<OperationTable> = set.iter().cloned().collect();
            let mut next = set.clone();
            for f in alg.operations() {
                let k = f.arity();
                let count = cur.len().pow(k as u32);
                for code in 0..count {
                    let mut c = code;
                    let mut gs = Vec::with_capacity(k);
                    for _ in 0..k {
                        gs.push(cur[c % cur.len()].clone());
                        c /= cur.len();
                    }
                    next.insert(f.compose(&gs).unwrap());
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    /// Literal definition: quantify over all pairs of members.
    fn phi_by_pairs(layer: &CloneLayer, a: &Word) -> BTreeSet<(Element, Element)> {
        let idx = layer.domain().encode_tuple(a.letters()).unwrap();
        let mut out = BTreeSet::new();
        for f in layer.ops() {
            for g in layer.ops() {
                if f.values()[..idx] == g.values()[..idx] {
                    out.insert((f.values()[idx], g.values()[idx]));
                }
            }
        }
        out
    }

    #[test]
    fn layer_examples() {
        let empty = catalog::algebra_of(vec![]);
        let l = clone_layer(&empty, 2, &limits()).unwrap();
        assert_eq!(l.len(), 2);
        let xor = catalog::z2_group();
        let l2 = clone_layer(&xor, 2, &limits()).unwrap();
        let expected: Vec<Vec<Element>> = vec![vec![0, 0, 0, 0], vec![0, 0, 1, 1], vec![0, 1, 0, 1], vec![0, 1, 1, 0]];
        assert_eq!(
            l2.ops().iter().map(|f| f.values().to_vec()).collect::<Vec<_>>(),
            expected
        );
        assert_eq!(clone_layer(&xor, 3, &limits()).unwrap().len(), 8);
        assert!(clone_layer(&xor, 0, &limits()).is_err());
    }

    #[test]
    fn layer_matches_naive_closure() {
        let algebras = [
            catalog::z2_group(),
            catalog::boolean_lattice(),
            catalog::majority_algebra(),
            catalog::cyclic_group(3),
            catalog::algebra_of(vec![catalog::not()]),
        ];
        for alg in &algebras {
            for n in 1..=3 {
                let layer = clone_layer(alg, n, &limits()).unwrap();
                let naive = naive_layer(alg, n);
                assert_eq!(layer.ops().iter().cloned().collect::<BTreeSet<_>>(), naive);
                // fixpoint re-check: composing generators with members stays inside
                for f in alg.operations() {
                    for g in layer.ops() {
                        let gs = vec![g.clone(); f.arity()];
                        assert!(layer.contains(&f.compose(&gs).unwrap()));
                    }
                }
                for i in 1..=n {
                    let p = OperationTable::projection(alg.domain(), n, i).unwrap();
                    assert!(layer.contains(&p));
                }
            }
        }
    }

    #[test]
    fn layer_size_limit() {
        let tight = Limits {
            max_layer_size: 10,
            ..Limits::default()
        };
        let err = clone_layer(&catalog::boolean_all(), 2, &tight).unwrap_err();
        assert!(err.is_resource_limit());
        let tight = Limits {
            max_table_len: 4,
            ..Limits::default()
        };
        assert!(clone_layer(&catalog::z2_group(), 3, &tight)
            .unwrap_err()
            .is_resource_limit());
    }

    #[test]
    fn edge_examples() {
        assert!(is_edge_op(&catalog::minority(), 2).unwrap());
        let e33 = OperationTable::projection(bool_domain(), 3, 3).unwrap();
        assert!(!is_edge_op(&e33, 2).unwrap());
        let t = drop_first_argument(&catalog::majority()).unwrap();
        assert!(is_edge_op(&t, 3).unwrap());
        assert!(is_edge_op(&catalog::minority(), 3).is_err());
        assert!(is_edge_op(&catalog::minority(), 1).is_err());
    }

    #[test]
    fn nu_iff_dropped_argument_is_edge() {
        let d = bool_domain();
        for code in 0..(1u32 << 8) {
            let f = OperationTable::new(d, 3, (0..8).map(|i| ((code >> i) & 1) as Element).collect()).unwrap();
            let t = drop_first_argument(&f).unwrap();
            assert_eq!(is_near_unanimity(&f), is_edge_op(&t, 3).unwrap());
        }
    }

    #[test]
    fn malcev_edge_bridge_exhaustive() {
        let d = bool_domain();
        for code in 0..(1u32 << 8) {
            let f = OperationTable::new(d, 3, (0..8).map(|i| ((code >> i) & 1) as Element).collect()).unwrap();
            let m = swap_first_two(&f).unwrap();
            assert_eq!(is_edge_op(&f, 2).unwrap(), is_malcev(&m).unwrap());
        }
    }

    #[test]
    fn find_malcev_examples() {
        let m = find_malcev(&catalog::z2_group(), &limits()).unwrap().unwrap();
        assert_eq!(m, catalog::minority());
        assert!(find_malcev(&catalog::boolean_lattice(), &limits()).unwrap().is_none());
        let z3 = catalog::cyclic_group(3);
        let m = find_malcev(&z3, &limits()).unwrap().unwrap();
        let expected = OperationTable::from_fn(z3.domain(), 3, |x| ((x[0] + 3 - x[1] + x[2]) % 3) as Element).unwrap();
        assert_eq!(m, expected);
    }

    #[test]
    fn find_edge_and_nu_examples() {
        let e = find_edge(&catalog::z2_group(), 2, &limits()).unwrap().unwrap();
        assert!(is_malcev(&swap_first_two(&e).unwrap()).unwrap());
        assert_eq!(
            find_nu(&catalog::majority_algebra(), 3, &limits()).unwrap(),
            Some(catalog::majority())
        );
        let empty = catalog::algebra_of(vec![]);
        for k in 2..=4 {
            assert!(find_edge(&empty, k, &limits()).unwrap().is_none());
        }
        assert!(find_nu(&empty, 3, &limits()).unwrap().is_none());
        assert!(find_nu(&empty, 2, &limits()).is_err());
        // lattices have a majority term, hence a 3-edge term
        assert!(find_edge(&catalog::boolean_lattice(), 3, &limits()).unwrap().is_some());
    }

    #[test]
    fn phi_examples() {
        let proj = clone_layer(&catalog::algebra_of(vec![]), 2, &limits()).unwrap();
        let p = phi(&proj, &w(2, "[1,1]")).unwrap();
        assert_eq!(p.pairs, [(0, 0)].into_iter().collect());
        let p = phi(&proj, &w(2, "[2,2]")).unwrap();
        assert_eq!(p.pairs, [(1, 1)].into_iter().collect());
        let xor = clone_layer(&catalog::z2_group(), 2, &limits()).unwrap();
        let a = w(2, "[1,2]");
        let p = phi(&xor, &a).unwrap();
        assert_eq!(p.pairs, phi_by_pairs(&xor, &a));
        for f in xor.ops() {
            let v = f.apply(a.letters()).unwrap();
            assert!(p.contains(v, v));
        }
        assert!(phi(&xor, &w(2, "[1]")).is_err());
    }

    #[test]
    fn phi_matches_pair_definition() {
        for alg in [
            catalog::z2_group(),
            catalog::boolean_lattice(),
            catalog::cyclic_group(3),
        ] {
            let t = alg.domain().size();
            for n in 1..=2 {
                let layer = clone_layer(&alg, n, &limits()).unwrap();
                for letters in alg.domain().tuples(n) {
                    let a = Word::new(alg.domain(), letters).unwrap();
                    assert_eq!(phi(&layer, &a).unwrap().pairs, phi_by_pairs(&layer, &a), "t={t}");
                }
            }
        }
    }

    #[test]
    fn lambda_examples() {
        let all = catalog::boolean_all();
        for c in 0..2 {
            for d in 0..2 {
                assert!(!lambda_member(&all, (c, d), &w(2, "[1,1]"), &limits()).unwrap());
            }
        }
        let empty = catalog::algebra_of(vec![]);
        assert!(lambda_member(&empty, (0, 1), &w(2, "[1,1]"), &limits()).unwrap());
        let xor = catalog::z2_group();
        for letters in [vec![0u8, 1], vec![1, 1], vec![1, 0, 1]] {
            let a = Word::new(bool_domain(), letters).unwrap();
            let layer = clone_layer(&xor, a.len(), &limits()).unwrap();
            for f in layer.ops() {
                let v = f.apply(a.letters()).unwrap();
                assert!(!lambda_member(&xor, (v, v), &a, &limits()).unwrap());
            }
        }
        assert!(lambda_member(&xor, (0, 2), &w(2, "[1]"), &limits()).is_err());
    }

    #[test]
    fn compute_m_examples() {
        let report = compute_m(&catalog::boolean_all(), 3, &limits()).unwrap();
        assert_eq!(report.m, 1);
        assert!(report.pairs.iter().all(|p| p.minimals.is_empty()));
        assert!(report.all_closed);

        let report = compute_m(&catalog::z2_group(), 4, &limits()).unwrap();
        assert!(report.all_closed);
        assert_eq!(report.m, 3);
        assert_eq!(report.layer_sizes, vec![2, 4, 8, 16]);
        let p01 = &report.pairs[1];
        assert_eq!(p01.pair, (0, 1));
        let words: Vec<String> = p01.minimals.iter().map(|w| w.to_string()).collect();
        assert_eq!(words, ["[1]", "[2,2]", "[1,2,2]", "[2,1,2]", "[2,2,1]"]);

        // projection clone; values from a separate brute-force enumeration
        let report = compute_m(&catalog::algebra_of(vec![]), 2, &limits()).unwrap();
        let rendered: Vec<Vec<String>> = report
            .pairs
            .iter()
            .map(|p| p.minimals.iter().map(|w| w.to_string()).collect())
            .collect();
        assert_eq!(
            rendered,
            vec![
                vec!["[2]"],
                vec!["[1]", "[2]", "[2,1]"],
                vec!["[1]", "[2]", "[2,1]"],
                vec!["[1]"],
            ]
        );
        assert_eq!(report.m, 2);
        assert!(!report.all_closed);
        // no edge term: a longer scan keeps finding minimal words
        let report = compute_m(&catalog::algebra_of(vec![]), 4, &limits()).unwrap();
        assert_eq!(report.pairs[1].minimals.last().unwrap().to_string(), "[1,2,2]");
        assert!(compute_m(&catalog::z2_group(), 0, &limits()).is_err());
    }

    #[test]
    fn layer_relation_examples() {
        let proj1 = clone_layer(&catalog::algebra_of(vec![]), 1, &limits()).unwrap();
        let r = layer_as_relation(&proj1, &limits()).unwrap();
        assert_eq!(r.arity(), 2);
        assert_eq!(r.iter().cloned().collect::<Vec<_>>(), vec![vec![0, 1]]);
        let xor2 = clone_layer(&catalog::z2_group(), 2, &limits()).unwrap();
        let r = layer_as_relation(&xor2, &limits()).unwrap();
        assert_eq!((r.arity(), r.len()), (4, 4));
        let proj2 = clone_layer(&catalog::algebra_of(vec![]), 2, &limits()).unwrap();
        let r = layer_as_relation(&proj2, &limits()).unwrap();
        assert_eq!(
            r.iter().cloned().collect::<Vec<_>>(),
            vec![vec![0, 0, 1, 1], vec![0, 1, 0, 1]]
        );
    }

    #[test]
    fn membership_examples() {
        let xor = catalog::z2_group();
        let graph = [catalog::graph_of(&catalog::xor())];
        for mode in [MembershipMode::Exhaustive, MembershipMode::ViaRelations(&graph)] {
            assert!(is_term_function(&xor, &catalog::xor(), mode, &limits()).unwrap());
            assert!(!is_term_function(&xor, &catalog::not(), mode, &limits()).unwrap());
        }
        let lattice = catalog::boolean_lattice();
        let rels = [catalog::leq(), catalog::singleton(0), catalog::singleton(1)];
        for mode in [MembershipMode::Exhaustive, MembershipMode::ViaRelations(&rels)] {
            assert!(is_term_function(&lattice, &catalog::majority(), mode, &limits()).unwrap());
        }
    }

    fn all_tables(n: usize) -> Vec<OperationTable> {
        let d = bool_domain();
        let len = 1usize << n;
        (0..(1u64 << len))
            .map(|code| OperationTable::new(d, n, (0..len).map(|i| ((code >> i) & 1) as Element).collect()).unwrap())
            .collect()
    }

    #[test]
    fn dual_oracle_agreement() {
        let cases: Vec<(Algebra, Vec<Relation>)> = vec![
            (
                catalog::boolean_lattice(),
                vec![catalog::leq(), catalog::singleton(0), catalog::singleton(1)],
            ),
            (catalog::z2_group(), vec![catalog::graph_of(&catalog::xor())]),
            (
                catalog::algebra_of(vec![catalog::xor(), catalog::not()]),
                vec![catalog::affine_quaternary()],
            ),
        ];
        for (alg, rels) in &cases {
            for n in 1..=3 {
                let layer = clone_layer(alg, n, &limits()).unwrap();
                for f in all_tables(n) {
                    let via = is_term_function(alg, &f, MembershipMode::ViaRelations(rels), &limits()).unwrap();
                    assert_eq!(layer.contains(&f), via, "{f:?}");
                }
            }
        }
    }

    #[test]
    fn ternary_graph_does_not_determine_affine_clone() {
        // not(x) is a term of <xor, not> but moves (0,0,0) out of the graph of +
        let affine = catalog::algebra_of(vec![catalog::xor(), catalog::not()]);
        let graph = [catalog::graph_of(&catalog::xor())];
        let f = catalog::not();
        assert!(is_term_function(&affine, &f, MembershipMode::Exhaustive, &limits()).unwrap());
        assert!(!is_term_function(&affine, &f, MembershipMode::ViaRelations(&graph), &limits()).unwrap());
    }

    #[test]
    fn embedding_shrinks_phi_and_lambda_is_upward_closed() {
        let alg = catalog::z2_group();
        let layers: Vec<CloneLayer> = (1..=4).map(|n| clone_layer(&alg, n, &limits()).unwrap()).collect();
        let words = crate::wpo::all_words(bool_domain(), 4);
        for a in &words {
            let pa = phi(&layers[a.len() - 1], a).unwrap();
            for b in &words {
                if crate::wpo::word_le(a, b).unwrap() {
                    let pb = phi(&layers[b.len() - 1], b).unwrap();
                    assert!(pb.is_subset(&pa), "{a} <= {b}");
                    for c in 0..2 {
                        for d in 0..2 {
                            if !pa.contains(c, d) {
                                assert!(!pb.contains(c, d));
                            }
                        }
                    }
                }
            }
        }
    }
}
