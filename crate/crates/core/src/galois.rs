//! Preservation, `Pol` layers, subuniverse enumeration, projections and
//! fork relations of subpowers, the representation check for subpowers of
//! algebras with an edge term, and determination of clones by relations.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{subpower_closure, Algebra, Domain, OperationTable, Relation};
use crate::clone::{clone_layer, find_edge};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::Element;

/// True iff some `k`-tuple of indices into `0..len` satisfies `pred`.
fn any_index_tuple(k: usize, len: usize, mut pred: impl FnMut(&[usize]) -> bool) -> bool {
    if len == 0 {
        return false;
    }
    let mut idx = vec![0usize; k];
    loop {
        if pred(&idx) {
            return true;
        }
        let mut pos = k;
        loop {
            if pos == 0 {
                return false;
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < len {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// `f` maps every `arity(f)`-tuple of rows of `r` (applied coordinatewise)
/// back into `r`. Costs `|r|^arity(f)` membership tests.
pub fn preserves(f: &OperationTable, r: &Relation) -> Result<bool> {
    f.domain().same_as(&r.domain())?;
    let rows: Vec<&[Element]> = r.iter().map(|t| t.as_slice()).collect();
    let mut args: Vec<&[Element]> = Vec::with_capacity(f.arity());
    let escaped = any_index_tuple(f.arity(), rows.len(), |idx| {
        args.clear();
        args.extend(idx.iter().map(|&i| rows[i]));
        !r.contains(&f.apply_rows(&args))
    });
    Ok(!escaped)
}

/// All `n`-ary operations on `domain` preserving every relation, by brute
/// force over the `t^(t^n)` tables, in value-table order.
pub fn pol_layer(domain: Domain, relations: &[Relation], n: usize, limits: &Limits) -> Result<Vec<OperationTable>> {
    for r in relations {
        domain.same_as(&r.domain())?;
    }
    let len = domain.power_within(n, limits.max_table_len, "operation table")?;
    let t = domain.size();
    let count = u32::try_from(len)
        .ok()
        .and_then(|l| t.checked_pow(l))
        .filter(|&c| c <= limits.max_bruteforce)
        .ok_or_else(|| {
            let size = (t as f64).powf(len as f64).min(u128::MAX as f64) as u128;
            Error::limit("operation space", size, limits.max_bruteforce)
        })?;
    let kept = (0..count)
        .into_par_iter()
        .map(|code| {
            let f = OperationTable::from_raw(domain, n, domain.decode_tuple(code, len)?);
            for r in relations {
                if !preserves(&f, r)? {
                    return Ok(None);
                }
            }
            Ok(Some(f))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(kept.into_iter().flatten().collect())
}

/// The subuniverses of one power of an algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubpowerFamily {
    pub domain: Domain,
    pub power: usize,
    pub members: Vec<Relation>,
}

/// Every subuniverse of `alg^j`, including the empty one, found by closing
/// every subset of `A^j`.
pub fn subuniverses(alg: &Algebra, j: usize, limits: &Limits) -> Result<SubpowerFamily> {
    if j == 0 {
        return Err(Error::InvalidInput("power must be positive".into()));
    }
    let domain = alg.domain();
    let points: Vec<Vec<Element>> = {
        let size = domain.power_within(j, 63, "subset enumeration base")?;
        domain.tuples(j).take(size).collect()
    };
    let subsets = 1usize
        .checked_shl(points.len() as u32)
        .filter(|&c| c <= limits.max_bruteforce)
        .ok_or_else(|| Error::limit("subset enumeration", 1u128 << points.len(), limits.max_bruteforce))?;
    let closed = (0..subsets)
        .into_par_iter()
        .map(|mask| {
            let gens = points
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone());
            subpower_closure(alg, j, gens, limits)
        })
        .collect::<Result<Vec<_>>>()?;
    let members: BTreeSet<Relation> = closed.into_iter().collect();
    Ok(SubpowerFamily {
        domain,
        power: j,
        members: members.into_iter().collect(),
    })
}

fn check_positions(r: &Relation, positions: &[usize]) -> Result<Vec<usize>> {
    let sorted: BTreeSet<usize> = positions.iter().copied().collect();
    if sorted.is_empty() {
        return Err(Error::InvalidInput(
            "projection needs a nonempty set of positions".into(),
        ));
    }
    if let Some(&bad) = sorted.iter().find(|&&p| p == 0 || p > r.arity()) {
        return Err(Error::IndexOutOfRange {
            index: bad,
            bound: r.arity() + 1,
        });
    }
    Ok(sorted.into_iter().map(|p| p - 1).collect())
}

/// Projection onto the 1-based `positions` (taken in increasing order).
pub fn proj(r: &Relation, positions: &[usize]) -> Result<Relation> {
    let pos = check_positions(r, positions)?;
    let tuples: BTreeSet<Vec<Element>> = r.iter().map(|t| pos.iter().map(|&p| t[p]).collect()).collect();
    Ok(Relation::from_set(r.domain(), pos.len(), tuples))
}

/// The fork relation at 1-based position `i`: pairs of `i`-th entries of
/// tuples that agree on all earlier positions.
pub fn fork(r: &Relation, i: usize) -> Result<Relation> {
    if i == 0 || i > r.arity() {
        return Err(Error::IndexOutOfRange {
            index: i,
            bound: r.arity() + 1,
        });
    }
    let mut blocks: BTreeMap<&[Element], BTreeSet<Element>> = BTreeMap::new();
    for t in r.iter() {
        blocks.entry(&t[..i - 1]).or_default().insert(t[i - 1]);
    }
    let mut pairs = BTreeSet::new();
    for values in blocks.values() {
        for &x in values {
            for &y in values {
                pairs.insert(vec![x, y]);
            }
        }
    }
    Ok(Relation::from_set(r.domain(), 2, pairs))
}

fn subsets_below(m: usize, max_size: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, m: usize, max_size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        out.push(cur.clone());
        if cur.len() == max_size {
            return;
        }
        for p in start..=m {
            cur.push(p);
            go(p + 1, m, max_size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, m, max_size, &mut Vec::new(), &mut out);
    out
}

/// Outcome of checking the representation criterion on a pair `F <= G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepVerdict {
    /// `pi_T(F) = pi_T(G)` for every `T` with `|T| < k`.
    pub projections_agree: bool,
    /// `fork_i(G) <= fork_i(F)` for every position `i`.
    pub forks_contained: bool,
    pub hypotheses_hold: bool,
    pub conclusion_holds: bool,
    /// The algebra has a `k`-edge term, so the criterion applies.
    pub edge_term_verified: bool,
}

/// Evaluates the hypotheses of the representation criterion for subuniverses
/// `f <= g` of `alg^m` and whether `f = g`. When `alg` has a `k`-edge term
/// a pair satisfying the hypotheses with `f != g` is reported as
/// [`Error::RepCounterexample`].
pub fn rep_check(f: &Relation, g: &Relation, alg: &Algebra, k: usize, limits: &Limits) -> Result<RepVerdict> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("k must exceed 1, got {k}")));
    }
    alg.domain().same_as(&f.domain())?;
    alg.domain().same_as(&g.domain())?;
    if f.arity() != g.arity() {
        return Err(Error::ArityMismatch {
            expected: g.arity(),
            found: f.arity(),
        });
    }
    if !f.is_subset(g) {
        return Err(Error::Precondition("F is not contained in G".into()));
    }
    if !alg.is_subuniverse(f)? || !alg.is_subuniverse(g)? {
        return Err(Error::Precondition("F and G must be subuniverses".into()));
    }
    let m = g.arity();
    let mut projections_agree = true;
    for positions in subsets_below(m, (k - 1).min(m)) {
        let agree = if positions.is_empty() {
            f.is_empty() == g.is_empty()
        } else {
            proj(f, &positions)? == proj(g, &positions)?
        };
        if !agree {
            projections_agree = false;
            break;
        }
    }
    let mut forks_contained = true;
    for i in 1..=m {
        if !fork(g, i)?.is_subset(&fork(f, i)?) {
            forks_contained = false;
            break;
        }
    }
    let hypotheses_hold = projections_agree && forks_contained;
    let conclusion_holds = f == g;
    let edge_term_verified = find_edge(alg, k, limits)?.is_some();
    if edge_term_verified && hypotheses_hold && !conclusion_holds {
        return Err(Error::RepCounterexample {
            detail: format!("|F| = {}, |G| = {}", f.len(), g.len()),
        });
    }
    Ok(RepVerdict {
        projections_agree,
        forks_contained,
        hypotheses_hold,
        conclusion_holds,
        edge_term_verified,
    })
}

/// A single relation with the same polymorphisms as `relations`: empty
/// members are dropped and the rest concatenated as a product. If every
/// member is empty the result is the full unary relation.
pub fn combine_relations(relations: &[Relation]) -> Result<Relation> {
    let first = relations
        .first()
        .ok_or_else(|| Error::InvalidInput("combine_relations needs at least one relation".into()))?;
    let domain = first.domain();
    for r in relations {
        domain.same_as(&r.domain())?;
    }
    let factors: Vec<&Relation> = relations.iter().filter(|r| !r.is_empty()).collect();
    if factors.is_empty() {
        return Relation::new(domain, 1, domain.elements().map(|x| vec![x]));
    }
    let mut product: Vec<Vec<Element>> = vec![Vec::new()];
    for r in &factors {
        product = product
            .into_iter()
            .flat_map(|prefix| {
                r.iter().map(move |t| {
                    let mut row = prefix.clone();
                    row.extend_from_slice(t);
                    row
                })
            })
            .collect();
    }
    let arity = factors.iter().map(|r| r.arity()).sum();
    Relation::new(domain, arity, product)
}

/// Sizes of `Pol(relations)^[n]` and `C^[n]` and whether they coincide.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Determination {
    pub arity: usize,
    pub pol_size: usize,
    pub layer_size: usize,
    pub equal: bool,
}

pub fn check_determination(alg: &Algebra, relations: &[Relation], n: usize, limits: &Limits) -> Result<Determination> {
    let pol = pol_layer(alg.domain(), relations, n, limits)?;
    let layer = clone_layer(alg, n, limits)?;
    Ok(Determination {
        arity: n,
        pol_size: pol.len(),
        layer_size: layer.len(),
        equal: pol.as_slice() == layer.ops(),
    })
}

/// `Pol(relations)` and the clone of `alg` agree at arity `n`.
pub fn verify_determination(alg: &Algebra, relations: &[Relation], n: usize, limits: &Limits) -> Result<bool> {
    Ok(check_determination(alg, relations, n, limits)?.equal)
}

/// A relation containing each tuple of `A^arity` independently with probability `density`.
pub fn random_relation(domain: Domain, arity: usize, density: f64, rng: &mut impl Rng) -> Result<Relation> {
    let tuples: Vec<Vec<Element>> = domain.tuples(arity).filter(|_| rng.gen_bool(density)).collect();
    Relation::new(domain, arity, tuples)
}
