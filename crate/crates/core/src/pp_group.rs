//! Primitive-positive definitions of subgroups of `G^n` over one relation
//! `H <= G^k`: greedy generating sets, a greedy choice of constraints
//! `M <= H^e` cutting the `e`-ary term functions out of all functions, the
//! index maps `sigma` and `tau`, and a brute-force evaluator.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::algebra::{subpower_closure, Algebra, Domain, OperationTable, Relation};
use crate::clone::clone_layer;
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::Element;

/// A finite group given by its multiplication table; identity and inverses
/// are derived and the group laws checked on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    domain: Domain,
    mul: OperationTable,
    inv: OperationTable,
    identity: Element,
}

impl GroupTable {
    pub fn new(mul: OperationTable) -> Result<Self> {
        if mul.arity() != 2 {
            return Err(Error::ArityMismatch {
                expected: 2,
                found: mul.arity(),
            });
        }
        let d = mul.domain();
        let m = |x: Element, y: Element| mul.eval(&[x, y]);
        for x in d.elements() {
            for y in d.elements() {
                for z in d.elements() {
                    if m(m(x, y), z) != m(x, m(y, z)) {
                        return Err(Error::NotSubgroup(format!(
                            "multiplication is not associative at ({x}, {y}, {z})"
                        )));
                    }
                }
            }
        }
        let identity = d
            .elements()
            .find(|&e| d.elements().all(|x| m(e, x) == x && m(x, e) == x))
            .ok_or_else(|| Error::NotSubgroup("no identity element".into()))?;
        let mut inverses = Vec::with_capacity(d.size());
        for x in d.elements() {
            let y = d
                .elements()
                .find(|&y| m(x, y) == identity && m(y, x) == identity)
                .ok_or_else(|| Error::NotSubgroup(format!("{x} has no inverse")))?;
            inverses.push(y);
        }
        Ok(GroupTable {
            domain: d,
            inv: OperationTable::from_raw(d, 1, inverses),
            mul,
            identity,
        })
    }

    /// Uses the first binary operation of `alg` as multiplication.
    pub fn from_algebra(alg: &Algebra) -> Result<Self> {
        let mul = alg
            .operations()
            .iter()
            .find(|f| f.arity() == 2)
            .ok_or_else(|| Error::InvalidInput("algebra has no binary operation".into()))?;
        Self::new(mul.clone())
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn mul(&self) -> &OperationTable {
        &self.mul
    }

    pub fn inv(&self) -> &OperationTable {
        &self.inv
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn order(&self) -> usize {
        self.domain.size()
    }

    /// `<G, mul, inv>`.
    pub fn algebra(&self) -> Algebra {
        Algebra::with_names(
            self.domain,
            vec![self.mul.clone(), self.inv.clone()],
            vec!["mul".into(), "inv".into()],
        )
        .expect("group operations share a domain")
    }

    /// `{ (x, y, z) : x * y = z }`.
    pub fn graph(&self) -> Relation {
        let tuples = self.domain.tuples(2).map(|x| vec![x[0], x[1], self.mul.eval(&x)]);
        Relation::new(self.domain, 3, tuples).expect("graph tuples are in range")
    }

    /// Checks that `s` is a subgroup of `G^arity(s)` under coordinatewise operations.
    pub fn check_subgroup(&self, s: &Relation) -> Result<()> {
        self.domain.same_as(&s.domain())?;
        let unit = vec![self.identity; s.arity()];
        if !s.contains(&unit) {
            return Err(Error::NotSubgroup("identity tuple missing".into()));
        }
        for x in s.iter() {
            if !s.contains(&self.inv.apply_rows(&[x])) {
                return Err(Error::NotSubgroup(format!("not closed under inverses at {x:?}")));
            }
            for y in s.iter() {
                if !s.contains(&self.mul.apply_rows(&[x, y])) {
                    return Err(Error::NotSubgroup(format!("not closed under products at {x:?}, {y:?}")));
                }
            }
        }
        Ok(())
    }

    fn generated(&self, n: usize, gens: &[Vec<Element>], limits: &Limits) -> Result<Relation> {
        let unit = vec![self.identity; n];
        subpower_closure(&self.algebra(), n, gens.iter().cloned().chain([unit]), limits)
    }
}

/// Greedy generating set of the subgroup `s`: repeatedly the least tuple of
/// `s` outside the subgroup generated so far.
pub fn small_generators(group: &GroupTable, s: &Relation, limits: &Limits) -> Result<Vec<Vec<Element>>> {
    group.check_subgroup(s)?;
    let n = s.arity();
    let mut gens: Vec<Vec<Element>> = Vec::new();
    let mut span = group.generated(n, &gens, limits)?;
    for x in s.iter() {
        if !span.contains(x) {
            gens.push(x.clone());
            span = group.generated(n, &gens, limits)?;
        }
        if span.len() == s.len() {
            break;
        }
    }
    Ok(gens)
}

/// A constraint `(r_1, ..., r_e)` with every `r_i` in `H`.
pub type Constraint = Vec<Vec<Element>>;

/// Argument indices into an `e`-ary table at which `f(r_1, ..., r_e)` is read.
fn constraint_columns(domain: Domain, c: &Constraint, k: usize) -> Vec<usize> {
    (0..k)
        .map(|j| {
            let column: Vec<Element> = c.iter().map(|r| r[j]).collect();
            domain.encode_tuple(&column).expect("constraint entries are in range")
        })
        .collect()
}

fn satisfies(values: &[Element], columns: &[usize], h: &Relation) -> bool {
    let image: Vec<Element> = columns.iter().map(|&i| values[i]).collect();
    h.contains(&image)
}

/// Greedy choice of constraints from `H^e` that cut all `e`-ary functions
/// down to exactly `target` (a sorted list of value tables).
fn greedy_cut(
    domain: Domain,
    e: usize,
    h: &Relation,
    target: &[Vec<Element>],
    limits: &Limits,
) -> Result<Vec<Constraint>> {
    let len = domain.power_within(e, limits.max_table_len, "operation table")?;
    let t = domain.size();
    let count = u32::try_from(len)
        .ok()
        .and_then(|l| t.checked_pow(l))
        .filter(|&c| c <= limits.max_bruteforce)
        .ok_or_else(|| {
            let size = (t as f64).powf(len as f64).min(u128::MAX as f64) as u128;
            Error::limit("function space", size, limits.max_bruteforce)
        })?;
    let rows: Vec<&Vec<Element>> = h.iter().collect();
    let n_constraints = rows
        .len()
        .checked_pow(e as u32)
        .filter(|&c| c <= limits.max_bruteforce)
        .ok_or_else(|| {
            Error::limit(
                "constraint space",
                (rows.len() as f64).powi(e as i32) as u128,
                limits.max_bruteforce,
            )
        })?;
    let constraints: Vec<(Constraint, Vec<usize>)> = (0..n_constraints)
        .map(|mut code| {
            let mut picked = vec![Vec::new(); e];
            for slot in picked.iter_mut().rev() {
                *slot = rows[code % rows.len()].clone();
                code /= rows.len();
            }
            let columns = constraint_columns(domain, &picked, h.arity());
            (picked, columns)
        })
        .collect();
    let mut current: Vec<Vec<Element>> = (0..count)
        .map(|code| domain.decode_tuple(code, len))
        .collect::<Result<_>>()?;
    let mut chosen = Vec::new();
    while current.as_slice() != target {
        let best = constraints
            .par_iter()
            .enumerate()
            .map(|(i, (_, cols))| {
                let removed = current.iter().filter(|f| !satisfies(f, cols, h)).count();
                (removed, std::cmp::Reverse(i))
            })
            .max()
            .filter(|&(removed, _)| removed > 0);
        let Some((_, std::cmp::Reverse(i))) = best else {
            return Err(Error::InsufficientRelation {
                arity: e,
                detail: format!(
                    "{} functions preserve every constraint, the clone has {}",
                    current.len(),
                    target.len()
                ),
            });
        };
        let (c, cols) = &constraints[i];
        current.retain(|f| satisfies(f, cols, h));
        chosen.push(c.clone());
    }
    Ok(chosen)
}

/// Greedy set `M <= H^e` such that the `e`-ary functions `f` with
/// `f(r_1, ..., r_e) in H` for all `(r_1, ..., r_e)` in `M` are exactly the
/// `e`-ary term functions of the group.
pub fn select_m(group: &GroupTable, e: usize, h: &Relation, limits: &Limits) -> Result<Vec<Constraint>> {
    if e == 0 {
        return Err(Error::InvalidInput("select_m needs at least one variable".into()));
    }
    group.check_subgroup(h)?;
    let layer = clone_layer(&group.algebra(), e, limits)?;
    let target: Vec<Vec<Element>> = layer.ops().iter().map(|f| f.values().to_vec()).collect();
    greedy_cut(group.domain(), e, h, &target, limits)
}

/// How a formula was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Encoding {
    /// From generators and constraints.
    Generated,
    /// Trivial subgroup: the single variable is forced through one conjunct
    /// on the diagonal of `H`.
    TrivialDiagonal,
    /// Trivial subgroup where the diagonal of `H` holds more than the
    /// identity; the single variable is pinned to the identity directly.
    TrivialPinned,
}

impl Encoding {
    pub fn as_str(self) -> &'static str {
        match self {
            Encoding::Generated => "generated",
            Encoding::TrivialDiagonal => "trivial-diagonal",
            Encoding::TrivialPinned => "trivial-pinned",
        }
    }
}

/// `S = { g : exists a_1..a_l, and_i (a_sigma(i,1), ..., a_sigma(i,k)) in H,
/// g_j = a_tau(j) }`. Indices are stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPFormula {
    pub l: usize,
    pub k: usize,
    pub sigma: Vec<Vec<usize>>,
    pub tau: Vec<usize>,
    pub h: Relation,
    pub encoding: Encoding,
    /// Identity element, used only by [`Encoding::TrivialPinned`].
    pub pinned: Option<Element>,
}

impl PPFormula {
    pub fn m_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn n(&self) -> usize {
        self.tau.len()
    }

    /// `l <= |G|^(n log2|G|)` and `m_count <= l log2|G|`.
    pub fn bounds_hold(&self) -> bool {
        let log_g = (self.h.domain().size() as f64).log2();
        let eps = 1e-9;
        (self.l as f64).log2() <= self.n() as f64 * log_g * log_g + eps
            && self.m_count() as f64 <= self.l as f64 * log_g + eps
    }

    fn check_indices(&self) -> Result<()> {
        let in_range = |i: &usize| *i < self.l;
        if self.l == 0
            || !self.tau.iter().all(in_range)
            || !self
                .sigma
                .iter()
                .all(|row| row.len() == self.k && row.iter().all(in_range))
            || self.h.arity() != self.k
        {
            return Err(Error::InvalidInput("formula indices out of range".into()));
        }
        Ok(())
    }
}

impl fmt::Display for PPFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gs: Vec<String> = (1..=self.n()).map(|j| format!("g{j}")).collect();
        write!(f, "S = {{ ({}) : exists a1..a{} : ", gs.join(", "), self.l)?;
        let mut parts: Vec<String> = self
            .sigma
            .iter()
            .map(|row| {
                let args: Vec<String> = row.iter().map(|i| format!("a{}", i + 1)).collect();
                format!("H({})", args.join(", "))
            })
            .collect();
        if let Some(id) = self.pinned {
            parts.push(format!("a1 = {id}"));
        }
        parts.extend(
            self.tau
                .iter()
                .enumerate()
                .map(|(j, i)| format!("g{} = a{}", j + 1, i + 1)),
        );
        write!(f, "{} }}", parts.join(" & "))
    }
}

/// Formula for the subgroup `s` of `G^n` over `h`.
pub fn build_pp_formula(group: &GroupTable, h: &Relation, s: &Relation, limits: &Limits) -> Result<PPFormula> {
    group.check_subgroup(h)?;
    let gens = small_generators(group, s, limits)?;
    let n = s.arity();
    let domain = group.domain();
    let k = h.arity();
    let formula = if gens.is_empty() {
        let id = group.identity();
        let diagonal_is_identity = domain
            .elements()
            .filter(|&g| h.contains(&vec![g; k]))
            .eq(std::iter::once(id));
        if diagonal_is_identity {
            PPFormula {
                l: 1,
                k,
                sigma: vec![vec![0; k]],
                tau: vec![0; n],
                h: h.clone(),
                encoding: Encoding::TrivialDiagonal,
                pinned: None,
            }
        } else {
            PPFormula {
                l: 1,
                k,
                sigma: Vec::new(),
                tau: vec![0; n],
                h: h.clone(),
                encoding: Encoding::TrivialPinned,
                pinned: Some(id),
            }
        }
    } else {
        let e = gens.len();
        let l = domain.power_within(e, limits.max_table_len, "existential variables")?;
        let m = select_m(group, e, h, limits)?;
        let sigma = m.iter().map(|c| constraint_columns(domain, c, k)).collect();
        let tau = (0..n)
            .map(|j| {
                let column: Vec<Element> = gens.iter().map(|s| s[j]).collect();
                domain.encode_tuple(&column)
            })
            .collect::<Result<_>>()?;
        PPFormula {
            l,
            k,
            sigma,
            tau,
            h: h.clone(),
            encoding: Encoding::Generated,
            pinned: None,
        }
    };
    if !formula.bounds_hold() {
        return Err(Error::Precondition(format!(
            "size bounds violated: l = {}, m = {}, |G| = {}",
            formula.l,
            formula.m_count(),
            group.order()
        )));
    }
    Ok(formula)
}

/// The relation defined by `formula`, by enumerating every assignment of
/// the existential variables.
pub fn eval_pp_formula(formula: &PPFormula, group: &GroupTable, n: usize, limits: &Limits) -> Result<Relation> {
    let domain = group.domain();
    domain.same_as(&formula.h.domain())?;
    if formula.n() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            found: formula.n(),
        });
    }
    formula.check_indices()?;
    let count = domain
        .power(formula.l)
        .filter(|&c| c <= limits.max_bruteforce)
        .ok_or_else(|| {
            let size = (domain.size() as f64).powf(formula.l as f64).min(u128::MAX as f64) as u128;
            Error::limit("assignment space", size, limits.max_bruteforce)
        })?;
    let found = (0..count)
        .into_par_iter()
        .map(|code| {
            let a = domain.decode_tuple(code, formula.l)?;
            if formula.pinned.is_some_and(|p| a[0] != p) {
                return Ok(None);
            }
            let holds = formula.sigma.iter().all(|row| {
                let image: Vec<Element> = row.iter().map(|&i| a[i]).collect();
                formula.h.contains(&image)
            });
            Ok(holds.then(|| formula.tau.iter().map(|&i| a[i]).collect::<Vec<Element>>()))
        })
        .collect::<Result<Vec<_>>>()?;
    let tuples: BTreeSet<Vec<Element>> = found.into_iter().flatten().collect();
    Ok(Relation::from_set(domain, n, tuples))
}
