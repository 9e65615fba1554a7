//! Domains, operation tables, relations and subpower closure.
//!
//! Elements are `0..t` internally. Tuples over a domain are indexed
//! big-endian, so the numeric order of tuple indices is the lexicographic
//! order on tuples. An operation table of arity `n` stores its value on the
//! `i`-th tuple at position `i`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use rayon::prelude::*;

use crate::config::Limits;
use crate::error::{Error, Result};
use crate::Element;

/// A finite set `{0, .., size-1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Domain {
    size: usize,
}

impl Domain {
    pub const MAX_SIZE: usize = Element::MAX as usize + 1;

    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size > Self::MAX_SIZE {
            return Err(Error::InvalidInput(format!(
                "domain size must lie in 1..={}, got {size}",
                Self::MAX_SIZE
            )));
        }
        Ok(Domain { size })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + Clone {
        (0..self.size).map(|x| x as Element)
    }

    pub fn check(&self, x: Element) -> Result<()> {
        if (x as usize) < self.size {
            Ok(())
        } else {
            Err(Error::domain(x, self.size))
        }
    }

    pub fn check_all(&self, xs: &[Element]) -> Result<()> {
        xs.iter().try_for_each(|&x| self.check(x))
    }

    pub fn same_as(&self, other: &Domain) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::DomainMismatch {
                left: self.size,
                right: other.size,
            })
        }
    }

    /// `t^n`, or `None` on overflow.
    pub fn power(&self, n: usize) -> Option<usize> {
        u32::try_from(n).ok().and_then(|n| self.size.checked_pow(n))
    }

    /// `t^n`, checked against `limit`.
    pub fn power_within(&self, n: usize, limit: usize, what: &'static str) -> Result<usize> {
        match self.power(n) {
            Some(p) if p <= limit => Ok(p),
            Some(p) => Err(Error::limit(what, p as u128, limit)),
            None => Err(Error::limit(what, u128::MAX, limit)),
        }
    }

    /// Big-endian positional index of `x`: `sum x_i * t^(n-i)`.
    pub fn encode_tuple(&self, x: &[Element]) -> Result<usize> {
        let mut index: usize = 0;
        for &v in x {
            self.check(v)?;
            index = index
                .checked_mul(self.size)
                .and_then(|i| i.checked_add(v as usize))
                .ok_or(Error::limit("tuple index", u128::MAX, usize::MAX))?;
        }
        Ok(index)
    }

    pub fn decode_tuple(&self, index: usize, n: usize) -> Result<Vec<Element>> {
        if let Some(bound) = self.power(n) {
            if index >= bound {
                return Err(Error::IndexOutOfRange { index, bound });
            }
        }
        let mut out = vec![0; n];
        let mut rest = index;
        for slot in out.iter_mut().rev() {
            *slot = (rest % self.size) as Element;
            rest /= self.size;
        }
        Ok(out)
    }

    /// All `n`-tuples in lexicographic (= index) order.
    pub fn tuples(&self, n: usize) -> Tuples {
        Tuples {
            size: self.size,
            next: Some(vec![0; n]),
        }
    }
}

/// Odometer over `A^n` in lexicographic order.
#[derive(Clone, Debug)]
pub struct Tuples {
    size: usize,
    next: Option<Vec<Element>>,
}

impl Iterator for Tuples {
    type Item = Vec<Element>;

    fn next(&mut self) -> Option<Vec<Element>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut carried = true;
        for slot in succ.iter_mut().rev() {
            if (*slot as usize) + 1 < self.size {
                *slot += 1;
                carried = false;
                break;
            }
            *slot = 0;
        }
        if !carried {
            self.next = Some(succ);
        }
        Some(current)
    }
}

/// A finitary operation stored as its flat value table.
///
/// Equality, hashing and ordering are on `(domain, arity, values)`, so two
/// tables are equal exactly when they define the same operation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OperationTable {
    domain: Domain,
    arity: usize,
    values: Vec<Element>,
}

impl fmt::Debug for OperationTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Op(t={}, n={}, {:?})", self.domain.size, self.arity, self.values)
    }
}

impl OperationTable {
    pub fn new(domain: Domain, arity: usize, values: Vec<Element>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidInput("operations must have positive arity".into()));
        }
        let expected = domain
            .power(arity)
            .ok_or(Error::limit("operation table", u128::MAX, usize::MAX))?;
        if values.len() != expected {
            return Err(Error::InvalidInput(format!(
                "table of arity {arity} over {} elements needs {expected} values, got {}",
                domain.size,
                values.len()
            )));
        }
        domain.check_all(&values)?;
        Ok(OperationTable { domain, arity, values })
    }

    /// Caller guarantees the length and range invariants.
    pub(crate) fn from_raw(domain: Domain, arity: usize, values: Vec<Element>) -> Self {
        debug_assert_eq!(Some(values.len()), domain.power(arity));
        OperationTable { domain, arity, values }
    }

    /// The projection `e_i^n`, with `i` counted from 1.
    pub fn projection(domain: Domain, n: usize, i: usize) -> Result<Self> {
        if i == 0 || i > n {
            return Err(Error::IndexOutOfRange { index: i, bound: n + 1 });
        }
        let len = domain
            .power(n)
            .ok_or(Error::limit("operation table", u128::MAX, usize::MAX))?;
        let stride = domain.power(n - i).unwrap_or(1);
        let values = (0..len).map(|idx| ((idx / stride) % domain.size) as Element).collect();
        Ok(OperationTable::from_raw(domain, n, values))
    }

    pub fn constant(domain: Domain, n: usize, c: Element) -> Result<Self> {
        domain.check(c)?;
        let len = domain
            .power(n)
            .ok_or(Error::limit("operation table", u128::MAX, usize::MAX))?;
        OperationTable::new(domain, n, vec![c; len])
    }

    /// Builds the table of `f` by evaluating it on every tuple.
    pub fn from_fn(domain: Domain, arity: usize, f: impl Fn(&[Element]) -> Element) -> Result<Self> {
        let values = domain.tuples(arity).map(|x| f(&x)).collect();
        OperationTable::new(domain, arity, values)
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[Element] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Element> {
        self.values
    }

    pub fn apply(&self, x: &[Element]) -> Result<Element> {
        if x.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: x.len(),
            });
        }
        Ok(self.values[self.domain.encode_tuple(x)?])
    }

    /// Evaluation without checks; `x` must be a valid tuple of the right length.
    #[inline]
    pub(crate) fn eval(&self, x: &[Element]) -> Element {
        let t = self.domain.size;
        let idx = x.iter().fold(0usize, |acc, &v| acc * t + v as usize);
        self.values[idx]
    }

    /// `x -> self(g_1(x), .., g_k(x))`.
    pub fn compose(&self, gs: &[OperationTable]) -> Result<OperationTable> {
        if gs.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: gs.len(),
            });
        }
        let n = gs[0].arity;
        for g in gs {
            self.domain.same_as(&g.domain)?;
            if g.arity != n {
                return Err(Error::ArityMismatch {
                    expected: n,
                    found: g.arity,
                });
            }
        }
        let inner: Vec<&[Element]> = gs.iter().map(|g| g.values.as_slice()).collect();
        Ok(OperationTable::from_raw(
            self.domain,
            n,
            compose_values(&self.values, self.domain.size, &inner),
        ))
    }

    /// Coordinatewise application to `arity` rows of equal length.
    pub(crate) fn apply_rows(&self, rows: &[&[Element]]) -> Vec<Element> {
        compose_values(&self.values, self.domain.size, rows)
    }
}

/// Hot path of composition: `out[x] = outer[sum_j inner_j[x] * t^(k-1-j)]`.
pub(crate) fn compose_values(outer: &[Element], t: usize, inner: &[&[Element]]) -> Vec<Element> {
    let len = inner.first().map_or(0, |g| g.len());
    (0..len)
        .map(|x| {
            let idx = inner.iter().fold(0usize, |acc, g| acc * t + g[x] as usize);
            outer[idx]
        })
        .collect()
}

/// A set with a finite list of basic operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    domain: Domain,
    ops: Vec<OperationTable>,
    names: Vec<String>,
}

impl Algebra {
    pub fn new(domain: Domain, ops: Vec<OperationTable>) -> Result<Self> {
        let names = (1..=ops.len()).map(|i| format!("f{i}")).collect();
        Algebra::with_names(domain, ops, names)
    }

    pub fn with_names(domain: Domain, ops: Vec<OperationTable>, names: Vec<String>) -> Result<Self> {
        for op in &ops {
            domain.same_as(&op.domain)?;
        }
        if names.len() != ops.len() {
            return Err(Error::InvalidInput("one name per operation required".into()));
        }
        Ok(Algebra { domain, ops, names })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn operations(&self) -> &[OperationTable] {
        &self.ops
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// True iff every basic operation maps `rel` into itself coordinatewise.
    pub fn is_subuniverse(&self, rel: &Relation) -> Result<bool> {
        self.domain.same_as(&rel.domain)?;
        let rows: Vec<&[Element]> = rel.tuples.iter().map(|r| r.as_slice()).collect();
        for op in &self.ops {
            let mut found_escape = false;
            for_each_fresh_tuple(op.arity, 0, rows.len(), |idx| {
                if found_escape {
                    return;
                }
                let args: Vec<&[Element]> = idx.iter().map(|&i| rows[i]).collect();
                if !rel.tuples.contains(&op.apply_rows(&args)) {
                    found_escape = true;
                }
            });
            if found_escape {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// A finitary relation: a set of equal-length tuples, kept in lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    domain: Domain,
    arity: usize,
    tuples: BTreeSet<Vec<Element>>,
}

impl Relation {
    pub fn new(domain: Domain, arity: usize, tuples: impl IntoIterator<Item = Vec<Element>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidInput("relations must have positive arity".into()));
        }
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(Error::ArityMismatch {
                    expected: arity,
                    found: t.len(),
                });
            }
            domain.check_all(&t)?;
            set.insert(t);
        }
        Ok(Relation {
            domain,
            arity,
            tuples: set,
        })
    }

    pub(crate) fn from_set(domain: Domain, arity: usize, tuples: BTreeSet<Vec<Element>>) -> Self {
        Relation { domain, arity, tuples }
    }

    pub fn empty(domain: Domain, arity: usize) -> Result<Self> {
        Relation::new(domain, arity, std::iter::empty())
    }

    pub fn full(domain: Domain, arity: usize, limits: &Limits) -> Result<Self> {
        domain.power_within(arity, limits.max_table_len, "full power")?;
        Relation::new(domain, arity, domain.tuples(arity))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, t: &[Element]) -> bool {
        self.tuples.contains(t)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<Element>> {
        self.tuples.iter()
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<Element>> {
        &self.tuples
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.domain == other.domain && self.arity == other.arity && self.tuples.is_subset(&other.tuples)
    }
}

/// Visits every `k`-tuple of indices into `0..len` that uses at least one
/// index from `fresh_from..len`. With `fresh_from == 0` this is all of them.
pub(crate) fn for_each_fresh_tuple(k: usize, fresh_from: usize, len: usize, mut visit: impl FnMut(&[usize])) {
    fn go(
        idx: &mut Vec<usize>,
        k: usize,
        fresh_from: usize,
        len: usize,
        has_fresh: bool,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if idx.len() == k {
            if has_fresh {
                visit(idx);
            }
            return;
        }
        let last = idx.len() + 1 == k;
        let start = if last && !has_fresh { fresh_from } else { 0 };
        for i in start..len {
            idx.push(i);
            go(idx, k, fresh_from, len, has_fresh || i >= fresh_from, visit);
            idx.pop();
        }
    }
    if k == 0 || fresh_from >= len {
        return;
    }
    let mut idx = Vec::with_capacity(k);
    go(&mut idx, k, fresh_from, len, false, &mut visit);
}

/// Runs one semi-naive round: applies `apply` to every `k`-tuple of members
/// that involves a fresh member, in parallel over the first coordinate, and
/// returns the results not yet in `known`. Output order is independent of
/// the thread schedule.
pub(crate) fn fresh_round<T, F>(members: &[T], fresh_from: usize, k: usize, known: &HashSet<T>, apply: F) -> Vec<T>
where
    T: Eq + std::hash::Hash + Sync + Send,
    F: Fn(&[&T]) -> T + Sync,
{
    let len = members.len();
    (0..len)
        .into_par_iter()
        .flat_map_iter(|first| {
            let mut out = Vec::new();
            let mut args: Vec<&T> = Vec::with_capacity(k);
            let mut emit = |rest: &[usize]| {
                args.clear();
                args.push(&members[first]);
                args.extend(rest.iter().map(|&i| &members[i]));
                let v = apply(&args);
                if !known.contains(&v) {
                    out.push(v);
                }
            };
            if k == 1 {
                if first >= fresh_from {
                    emit(&[]);
                }
            } else if first >= fresh_from {
                for_each_fresh_tuple(k - 1, 0, len, &mut emit);
            } else {
                for_each_fresh_tuple(k - 1, fresh_from, len, &mut emit);
            }
            out
        })
        .collect()
}

/// Smallest subset of `A^n` containing `generators` and closed under the
/// basic operations of `alg` applied coordinatewise. The closure of the
/// empty set is empty, since all operations have positive arity.
pub fn subpower_closure(
    alg: &Algebra,
    n: usize,
    generators: impl IntoIterator<Item = Vec<Element>>,
    limits: &Limits,
) -> Result<Relation> {
    let cap = alg.domain.power_within(n, limits.max_table_len, "subpower")?;
    let mut members: Vec<Vec<Element>> = Vec::new();
    let mut known: HashSet<Vec<Element>> = HashSet::new();
    for g in generators {
        if g.len() != n {
            return Err(Error::ArityMismatch {
                expected: n,
                found: g.len(),
            });
        }
        alg.domain.check_all(&g)?;
        if known.insert(g.clone()) {
            members.push(g);
        }
    }
    let mut fresh_from = 0;
    while fresh_from < members.len() && members.len() < cap {
        let len = members.len();
        let mut found = Vec::new();
        for op in &alg.ops {
            found.extend(fresh_round(&members, fresh_from, op.arity, &known, |args| {
                let rows: Vec<&[Element]> = args.iter().map(|r| r.as_slice()).collect();
                op.apply_rows(&rows)
            }));
        }
        fresh_from = len;
        for v in found {
            if known.insert(v.clone()) {
                members.push(v);
            }
        }
    }
    Relation::new(alg.domain, n, members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn d(t: usize) -> Domain {
        Domain::new(t).unwrap()
    }

    /// Lexicographic enumeration by nested counting, independent of `Tuples`.
    fn lex_enumeration(t: usize, n: usize) -> Vec<Vec<Element>> {
        let mut out: Vec<Vec<Element>> = vec![vec![]];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..t).map(move |v| {
                        let mut q = p.clone();
                        q.push(v as Element);
                        q
                    })
                })
                .collect();
        }
        out
    }

    #[test]
    fn encode_examples() {
        assert_eq!(d(2).encode_tuple(&[0, 0]).unwrap(), 0);
        assert_eq!(d(2).encode_tuple(&[1, 0, 1]).unwrap(), 5);
        assert_eq!(d(3).encode_tuple(&[2, 2]).unwrap(), 8);
        assert_eq!(
            d(2).encode_tuple(&[0, 2]),
            Err(Error::DomainViolation { value: 2, size: 2 })
        );
        // position of (1,0,1) in the lexicographic listing
        let listing = lex_enumeration(2, 3);
        assert_eq!(listing.iter().position(|x| x == &vec![1, 0, 1]), Some(5));
    }

    #[test]
    fn decode_examples() {
        assert_eq!(d(2).decode_tuple(0, 2).unwrap(), vec![0, 0]);
        assert_eq!(d(2).decode_tuple(5, 3).unwrap(), vec![1, 0, 1]);
        assert_eq!(d(3).decode_tuple(2, 1).unwrap(), vec![2]);
        assert!(matches!(
            d(2).decode_tuple(4, 2),
            Err(Error::IndexOutOfRange { index: 4, bound: 4 })
        ));
    }

    #[test]
    fn encode_decode_bijective_and_lex() {
        for t in 1..=4 {
            for n in 0..=6 {
                let dom = d(t);
                let listing = lex_enumeration(t, n);
                assert_eq!(listing.len(), t.pow(n as u32));
                for (i, x) in listing.iter().enumerate() {
                    assert_eq!(dom.encode_tuple(x).unwrap(), i);
                    assert_eq!(&dom.decode_tuple(i, n).unwrap(), x);
                }
                assert_eq!(dom.tuples(n).collect::<Vec<_>>(), listing);
            }
        }
    }

    #[test]
    fn projection_examples() {
        assert_eq!(OperationTable::projection(d(2), 1, 1).unwrap().values(), &[0, 1]);
        assert_eq!(OperationTable::projection(d(2), 2, 2).unwrap().values(), &[0, 1, 0, 1]);
        assert_eq!(
            OperationTable::projection(d(3), 2, 1).unwrap().values(),
            &[0, 0, 0, 1, 1, 1, 2, 2, 2]
        );
        assert!(OperationTable::projection(d(2), 2, 0).is_err());
        assert!(OperationTable::projection(d(2), 2, 3).is_err());
    }

    #[test]
    fn apply_examples() {
        let xor = catalog::xor();
        assert_eq!(xor.apply(&[1, 1]).unwrap(), 0);
        assert_eq!(xor.apply(&[0, 1]).unwrap(), 1);
        let e23 = OperationTable::projection(d(2), 3, 2).unwrap();
        assert_eq!(e23.apply(&[0, 1, 0]).unwrap(), 1);
        assert!(matches!(xor.apply(&[1]), Err(Error::ArityMismatch { .. })));
        assert!(matches!(xor.apply(&[1, 3]), Err(Error::DomainViolation { .. })));
    }

    #[test]
    fn compose_examples() {
        let t2 = d(2);
        let xor = catalog::xor();
        let e1 = OperationTable::projection(t2, 2, 1).unwrap();
        let g = catalog::and();
        let h = catalog::or();
        assert_eq!(e1.compose(&[g.clone(), h.clone()]).unwrap(), g);
        assert_eq!(
            xor.compose(&[e1.clone(), e1.clone()]).unwrap(),
            OperationTable::constant(t2, 2, 0).unwrap()
        );
        let e13 = OperationTable::projection(t2, 3, 1).unwrap();
        let e23 = OperationTable::projection(t2, 3, 2).unwrap();
        let sum12 = xor.compose(&[e13, e23]).unwrap();
        let expected = OperationTable::from_fn(t2, 3, |x| x[0] ^ x[1]).unwrap();
        assert_eq!(sum12, expected);
        assert!(xor.compose(std::slice::from_ref(&e1)).is_err());
        let unary = OperationTable::projection(t2, 1, 1).unwrap();
        assert!(xor.compose(&[e1, unary]).is_err());
    }

    #[test]
    fn compose_projection_selects_argument() {
        let t3 = d(3);
        let gs = vec![
            OperationTable::from_fn(t3, 2, |x| (x[0] + x[1]) % 3).unwrap(),
            OperationTable::from_fn(t3, 2, |x| x[0].max(x[1])).unwrap(),
            OperationTable::constant(t3, 2, 1).unwrap(),
        ];
        for i in 1..=3 {
            let p = OperationTable::projection(t3, 3, i).unwrap();
            assert_eq!(p.compose(&gs).unwrap(), gs[i - 1]);
        }
    }

    /// Closure by repeated full passes over all argument tuples.
    fn naive_closure(alg: &Algebra, gens: &[Vec<Element>]) -> BTreeSet<Vec<Element>> {
        let mut set: BTreeSet<Vec<Element>> = gens.iter().cloned().collect();
        loop {
            let rows: Vec<Vec<Element>> = set.iter().cloned().collect();
            let mut next = set.clone();
            for op in alg.operations() {
                for choice in lex_enumeration(rows.len(), op.arity()) {
                    let n = rows.first().map_or(0, |r| r.len());
                    let out: Vec<Element> = (0..n)
                        .map(|c| {
                            let x: Vec<Element> = choice.iter().map(|&r| rows[r as usize][c]).collect();
                            op.apply(&x).unwrap()
                        })
                        .collect();
                    next.insert(out);
                }
            }
            if next == set {
                return set;
            }
            set = next;
        }
    }

    #[test]
    fn subpower_examples() {
        let limits = Limits::default();
        let z2 = catalog::z2_group();
        let r = subpower_closure(&z2, 2, vec![vec![1, 1]], &limits).unwrap();
        assert_eq!(
            r.tuples().iter().cloned().collect::<Vec<_>>(),
            vec![vec![0, 0], vec![1, 1]]
        );
        let r = subpower_closure(&z2, 2, vec![vec![0, 1]], &limits).unwrap();
        assert_eq!(
            r.tuples().iter().cloned().collect::<Vec<_>>(),
            vec![vec![0, 0], vec![0, 1]]
        );
        let full = Relation::full(d(2), 2, &limits).unwrap();
        let r = subpower_closure(&catalog::boolean_lattice(), 2, full.iter().cloned(), &limits).unwrap();
        assert_eq!(r, full);
        let r = subpower_closure(&z2, 2, Vec::<Vec<Element>>::new(), &limits).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn subpower_matches_naive_and_is_closed() {
        let limits = Limits::default();
        let algebras = [
            catalog::z2_group(),
            catalog::boolean_lattice(),
            catalog::cyclic_group(3),
        ];
        for alg in &algebras {
            let t = alg.domain().size();
            let all: Vec<Vec<Element>> = alg.domain().tuples(2).collect();
            // every pair of generators from A^2
            for i in 0..all.len() {
                for j in i..all.len() {
                    let gens = vec![all[i].clone(), all[j].clone()];
                    let r = subpower_closure(alg, 2, gens.clone(), &limits).unwrap();
                    assert_eq!(r.tuples(), &naive_closure(alg, &gens), "t={t}");
                    assert!(alg.is_subuniverse(&r).unwrap());
                    let again = subpower_closure(alg, 2, r.iter().cloned(), &limits).unwrap();
                    assert_eq!(again, r);
                }
            }
        }
    }

    #[test]
    fn fresh_tuples_cover_exactly_new_combinations() {
        for k in 1..=3 {
            for len in 0..=4 {
                for fresh in 0..=len {
                    let mut seen = Vec::new();
                    for_each_fresh_tuple(k, fresh, len, |idx| seen.push(idx.to_vec()));
                    let expected: Vec<Vec<usize>> = lex_enumeration(len.max(1), k)
                        .into_iter()
                        .filter(|_| len > 0)
                        .map(|x| x.into_iter().map(|v| v as usize).collect::<Vec<_>>())
                        .filter(|x: &Vec<usize>| x.iter().any(|&i| i >= fresh))
                        .collect();
                    assert_eq!(seen, expected, "k={k} len={len} fresh={fresh}");
                }
            }
        }
    }

    #[test]
    fn relation_validation() {
        assert!(Relation::new(d(2), 2, vec![vec![0, 1, 1]]).is_err());
        assert!(Relation::new(d(2), 1, vec![vec![2]]).is_err());
        let r = Relation::new(d(2), 1, vec![vec![1], vec![0], vec![1]]).unwrap();
        assert_eq!(r.len(), 2);
        assert!(OperationTable::new(d(2), 2, vec![0, 1, 1]).is_err());
        assert!(OperationTable::new(d(2), 1, vec![0, 2]).is_err());
    }

    #[test]
    fn power_limit_is_reported() {
        let limits = Limits {
            max_table_len: 8,
            ..Limits::default()
        };
        let err = Relation::full(d(3), 2, &limits).unwrap_err();
        assert!(err.is_resource_limit());
    }
}
