//! The acceptance checks, runnable from tests and from the command line.
//!
//! Each check returns an [`Outcome`] whose `report` is a deterministic
//! transcript of what was computed; timing lives only in `elapsed`.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Domain, OperationTable, Relation};
use crate::catalog;
use crate::clone::{
    clone_layer, compute_m, find_edge, is_edge_op, is_malcev, is_term_function, lambda_member_in, layer_as_relation,
    phi, swap_first_two, CloneLayer, MembershipMode,
};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::galois::{
    check_determination, combine_relations, pol_layer, preserves, random_relation, rep_check, subuniverses,
};
use crate::pp_group::{build_pp_formula, eval_pp_formula, GroupTable};
use crate::wpo::{all_words, embeds, t_map, word_le};
use crate::Element;

pub const CRITERIA: [(u8, &str); 12] = [
    (1, "embedding order is a partial order"),
    (2, "t-map sends a to b and keeps lex order below a"),
    (3, "2-edge iff swapped Malcev on all ternary tables"),
    (4, "phi shrinks along the embedding order"),
    (5, "lambda sets are upward closed"),
    (6, "subpower representation sweep for Z2 and Z3"),
    (7, "xor clone determined by its layer relation"),
    (8, "exhaustive and relational membership agree"),
    (9, "Pol of <= at arities 1 and 2"),
    (10, "combined relation has the same polymorphisms"),
    (11, "pp-formula round trip over subgroups of Z2^2"),
    (12, "reports independent of thread count"),
];

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    /// One-line summary.
    pub detail: String,
    /// Deterministic transcript of the computed data.
    pub report: String,
    pub elapsed: Duration,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {:>2} {}: {} ({:.2?})",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.detail,
            self.elapsed
        )
    }
}

struct Verdict {
    passed: bool,
    detail: String,
    report: String,
}

impl Verdict {
    fn new(passed: bool, detail: String) -> Self {
        Verdict {
            passed,
            report: detail.clone(),
            detail,
        }
    }
}

pub fn run(id: u8, limits: &Limits) -> Outcome {
    let title = CRITERIA
        .iter()
        .find(|(i, _)| *i == id)
        .map_or("unknown criterion", |(_, t)| *t);
    let start = Instant::now();
    let verdict = match id {
        1 => order_axioms(),
        2 => t_map_lex(),
        3 => edge_malcev_bridge(),
        4 => phi_antitone(limits),
        5 => lambda_upward(limits),
        6 => rep_sweep(limits),
        7 => determination(limits),
        8 => dual_membership(limits),
        9 => pol_leq(limits),
        10 => combine_equivalence(limits),
        11 => pp_round_trip(limits),
        12 => thread_determinism(limits),
        _ => Err(Error::InvalidInput(format!("no criterion {id}"))),
    };
    let verdict = verdict.unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
    Outcome {
        id,
        title,
        passed: verdict.passed,
        detail: verdict.detail,
        report: verdict.report,
        elapsed: start.elapsed(),
    }
}

pub fn run_all(limits: &Limits) -> Vec<Outcome> {
    CRITERIA.iter().map(|(id, _)| run(*id, limits)).collect()
}

/// Seeded spot check outside the numbered criteria: random relations
/// preserved by the generators of a few Boolean algebras must be preserved
/// by every term operation of arity at most 3. Reported with id 0.
pub fn sampled_preservation(seed: u64, samples: usize, limits: &Limits) -> Outcome {
    let start = Instant::now();
    let verdict = sampled_inner(seed, samples, limits).unwrap_or_else(|e| Verdict::new(false, format!("error: {e}")));
    Outcome {
        id: 0,
        title: "sampled preservation by term operations",
        passed: verdict.passed,
        detail: verdict.detail,
        report: verdict.report,
        elapsed: start.elapsed(),
    }
}

fn sampled_inner(seed: u64, samples: usize, limits: &Limits) -> Result<Verdict> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = Domain::new(2)?;
    let algebras = [
        catalog::boolean_lattice(),
        catalog::z2_group(),
        catalog::majority_algebra(),
        catalog::algebra_of(vec![catalog::not()]),
    ];
    let mut members = Vec::new();
    for alg in &algebras {
        let mut ops = Vec::new();
        for n in 1..=3 {
            ops.extend_from_slice(clone_layer(alg, n, limits)?.ops());
        }
        members.push(ops);
    }
    let mut invariant = 0;
    let mut failure = None;
    for _ in 0..samples {
        let arity = rng.gen_range(1..=3);
        let r = random_relation(d, arity, 0.5, &mut rng)?;
        for (alg, ops) in algebras.iter().zip(&members) {
            if !alg
                .operations()
                .iter()
                .try_fold(true, |acc, g| Ok::<_, Error>(acc && preserves(g, &r)?))?
            {
                continue;
            }
            invariant += 1;
            for f in ops {
                if !preserves(f, &r)? {
                    failure.get_or_insert_with(|| format!("{:?} breaks an invariant relation", f.values()));
                }
            }
        }
    }
    Ok(match failure {
        None => Verdict::new(
            true,
            format!("seed {seed}: {samples} relations, {invariant} invariant pairs"),
        ),
        Some(f) => Verdict::new(false, f),
    })
}

fn order_axioms() -> Result<Verdict> {
    let mut failures = Vec::new();
    let mut total = 0;
    for (t, len) in [(2, 5), (3, 4)] {
        let words = all_words(Domain::new(t)?, len);
        total += words.len();
        let n = words.len();
        let mut le = vec![false; n * n];
        for (i, a) in words.iter().enumerate() {
            for (j, b) in words.iter().enumerate() {
                le[i * n + j] = word_le(a, b)?;
            }
        }
        for i in 0..n {
            if !le[i * n + i] {
                failures.push(format!("not reflexive at {}", words[i]));
            }
            for j in 0..n {
                if i != j && le[i * n + j] && le[j * n + i] {
                    failures.push(format!("not antisymmetric at {} {}", words[i], words[j]));
                }
                if !le[i * n + j] {
                    continue;
                }
                for k in 0..n {
                    if le[j * n + k] && !le[i * n + k] {
                        failures.push(format!("not transitive at {} {} {}", words[i], words[j], words[k]));
                    }
                }
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{total} words checked")
    } else {
        format!("{} violations, first: {}", failures.len(), failures[0])
    };
    Ok(Verdict::new(failures.is_empty(), detail))
}

fn t_map_lex() -> Result<Verdict> {
    let mut pairs = 0usize;
    let mut inputs = 0usize;
    let mut failure = None;
    for t in 1..=3 {
        let d = Domain::new(t)?;
        let longs = all_words(d, 5);
        for a in all_words(d, 4) {
            for b in &longs {
                let Some(h) = embeds(&a, b)? else { continue };
                pairs += 1;
                if t_map(&a, b, &h, a.letters())? != b.letters() {
                    failure.get_or_insert_with(|| format!("T({a}) != {b} for witness {h}"));
                }
                for c in d.tuples(a.len()).take_while(|c| c.as_slice() < a.letters()) {
                    inputs += 1;
                    if t_map(&a, b, &h, &c)?.as_slice() >= b.letters() {
                        failure.get_or_insert_with(|| format!("T({c:?}) not below {b} for a = {a}"));
                    }
                }
            }
        }
    }
    Ok(match failure {
        None => Verdict::new(true, format!("{pairs} witnessed pairs, {inputs} smaller inputs")),
        Some(f) => Verdict::new(false, f),
    })
}

fn edge_malcev_bridge() -> Result<Verdict> {
    let d = Domain::new(2)?;
    let mut edges = 0;
    let mut mismatches = Vec::new();
    for code in 0..256 {
        let f = OperationTable::new(d, 3, d.decode_tuple(code, 8)?)?;
        let edge = is_edge_op(&f, 2)?;
        edges += usize::from(edge);
        if edge != is_malcev(&swap_first_two(&f)?)? {
            mismatches.push(code);
        }
    }
    let detail = if mismatches.is_empty() {
        format!("256 tables, {edges} are 2-edge")
    } else {
        format!("{} mismatches, first table index {}", mismatches.len(), mismatches[0])
    };
    Ok(Verdict::new(mismatches.is_empty(), detail))
}

fn xor_layers(limits: &Limits) -> Result<(Algebra, Vec<CloneLayer>)> {
    let alg = catalog::z2_group();
    let layers = (1..=4)
        .map(|n| clone_layer(&alg, n, limits))
        .collect::<Result<Vec<_>>>()?;
    Ok((alg, layers))
}

fn pairs_text(pairs: &BTreeSet<(Element, Element)>) -> String {
    let parts: Vec<String> = pairs.iter().map(|(c, d)| format!("({},{})", c + 1, d + 1)).collect();
    format!("{{{}}}", parts.join(""))
}

fn phi_antitone(limits: &Limits) -> Result<Verdict> {
    let (_, layers) = xor_layers(limits)?;
    let words = all_words(Domain::new(2)?, 4);
    let phis = words
        .iter()
        .map(|w| phi(&layers[w.len() - 1], w))
        .collect::<Result<Vec<_>>>()?;
    let mut report = String::new();
    for p in &phis {
        let _ = writeln!(report, "phi {} = {}", p.word, pairs_text(&p.pairs));
    }
    let mut comparable = 0;
    let mut failure = None;
    for (i, a) in words.iter().enumerate() {
        for (j, b) in words.iter().enumerate() {
            if word_le(a, b)? {
                comparable += 1;
                if !phis[j].is_subset(&phis[i]) {
                    failure.get_or_insert_with(|| format!("phi({b}) not inside phi({a})"));
                }
            }
        }
    }
    let passed = failure.is_none();
    let detail = failure.unwrap_or_else(|| format!("{comparable} comparable pairs over {} words", words.len()));
    let _ = writeln!(report, "{detail}");
    Ok(Verdict { passed, detail, report })
}

fn lambda_upward(limits: &Limits) -> Result<Verdict> {
    let (_, layers) = xor_layers(limits)?;
    let d = Domain::new(2)?;
    let words = all_words(d, 4);
    let mut checked = 0;
    let mut failure = None;
    for c in d.elements() {
        for e in d.elements() {
            let member = words
                .iter()
                .map(|w| lambda_member_in(&layers[w.len() - 1], (c, e), w))
                .collect::<Result<Vec<_>>>()?;
            for (i, a) in words.iter().enumerate() {
                if !member[i] {
                    continue;
                }
                for (j, b) in words.iter().enumerate() {
                    if word_le(a, b)? {
                        checked += 1;
                        if !member[j] {
                            failure.get_or_insert_with(|| {
                                format!("pair ({},{}): {a} in lambda but {b} is not", c + 1, e + 1)
                            });
                        }
                    }
                }
            }
        }
    }
    Ok(match failure {
        None => Verdict::new(true, format!("{checked} member/successor pairs")),
        Some(f) => Verdict::new(false, f),
    })
}

fn rep_sweep(limits: &Limits) -> Result<Verdict> {
    let mut parts = Vec::new();
    let mut passed = true;
    for (name, alg) in [("Z2", catalog::z2_group()), ("Z3", catalog::cyclic_group(3))] {
        let fam = subuniverses(&alg, 2, limits)?;
        let (mut pairs, mut hyp) = (0, 0);
        for g in &fam.members {
            for f in fam.members.iter().filter(|f| f.is_subset(g)) {
                pairs += 1;
                match rep_check(f, g, &alg, 2, limits) {
                    Ok(v) => {
                        passed &= v.edge_term_verified;
                        hyp += usize::from(v.hypotheses_hold);
                    }
                    Err(Error::RepCounterexample { detail }) => {
                        passed = false;
                        parts.push(format!("{name} counterexample {detail}"));
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        parts.push(format!(
            "{name}: {} subuniverses, {pairs} pairs, {hyp} meet the hypotheses",
            fam.members.len()
        ));
    }
    Ok(Verdict::new(passed, parts.join("; ")))
}

fn determination(limits: &Limits) -> Result<Verdict> {
    let alg = catalog::z2_group();
    let report = compute_m(&alg, 4, limits)?;
    let mut text = report.render();
    let k = 2;
    let edge = find_edge(&alg, k, limits)?.is_some();
    let mut relations = vec![layer_as_relation(&clone_layer(&alg, report.m, limits)?, limits)?];
    relations.extend(subuniverses(&alg, k - 1, limits)?.members);
    let mut passed = report.all_closed && edge;
    let mut sizes = Vec::new();
    for n in 1..=3 {
        let d = check_determination(&alg, &relations, n, limits)?;
        let _ = writeln!(
            text,
            "n {n}: pol {} layer {} equal {}",
            d.pol_size, d.layer_size, d.equal
        );
        passed &= d.equal;
        sizes.push(d.layer_size);
    }
    passed &= sizes == [2, 4, 8];
    let detail = format!(
        "m = {}, frontiers closed {}, {}-edge term {}, layer sizes {:?}",
        report.m, report.all_closed, k, edge, sizes
    );
    Ok(Verdict {
        passed,
        detail,
        report: text,
    })
}

fn dual_membership(limits: &Limits) -> Result<Verdict> {
    let d = Domain::new(2)?;
    let lattice_rels = [catalog::leq(), catalog::singleton(0), catalog::singleton(1)];
    let xor_rels = [catalog::graph_of(&catalog::xor())];
    let cases: [(&str, Algebra, &[Relation]); 2] = [
        ("and/or", catalog::boolean_lattice(), &lattice_rels),
        ("xor", catalog::z2_group(), &xor_rels),
    ];
    let mut passed = true;
    let mut report = String::new();
    let mut summary = Vec::new();
    for (name, alg, rels) in cases {
        for n in 2..=3 {
            let len = d.power(n).expect("small");
            let mut members = 0;
            let mut disagreements = 0;
            for code in 0..d.power(len).expect("small") {
                let f = OperationTable::new(d, n, d.decode_tuple(code, len)?)?;
                let exhaustive = is_term_function(&alg, &f, MembershipMode::Exhaustive, limits)?;
                let relational = is_term_function(&alg, &f, MembershipMode::ViaRelations(rels), limits)?;
                members += usize::from(exhaustive);
                if exhaustive != relational {
                    disagreements += 1;
                    let _ = writeln!(report, "{name} disagree on {:?}", f.values());
                }
            }
            passed &= disagreements == 0;
            let _ = writeln!(
                report,
                "{name} arity {n}: {members} members, {disagreements} disagreements"
            );
            summary.push(format!("{name}/{n}: {members}"));
        }
    }
    Ok(Verdict {
        passed,
        detail: format!("members {}", summary.join(", ")),
        report,
    })
}

fn pol_leq(limits: &Limits) -> Result<Verdict> {
    let d = Domain::new(2)?;
    let leq = [catalog::leq()];
    let one = pol_layer(d, &leq, 1, limits)?.len();
    let two = pol_layer(d, &leq, 2, limits)?.len();
    Ok(Verdict::new(
        one == 3 && two == 6,
        format!("arity 1: {one}, arity 2: {two}"),
    ))
}

fn combine_equivalence(limits: &Limits) -> Result<Verdict> {
    let d = Domain::new(2)?;
    let s = [catalog::leq(), catalog::singleton(0), catalog::singleton(1)];
    let combined = combine_relations(&s)?;
    let mut sizes = Vec::new();
    let mut passed = true;
    for n in 1..=3 {
        let a = pol_layer(d, &s, n, limits)?;
        let b = pol_layer(d, std::slice::from_ref(&combined), n, limits)?;
        passed &= a == b;
        sizes.push(a.len());
    }
    Ok(Verdict::new(
        passed,
        format!("combined arity {}, Pol sizes {:?}", combined.arity(), sizes),
    ))
}

fn pp_round_trip(limits: &Limits) -> Result<Verdict> {
    let g = GroupTable::from_algebra(&catalog::z2_group())?;
    let h = g.graph();
    let subgroups: Vec<Relation> = subuniverses(&g.algebra(), 2, limits)?
        .members
        .into_iter()
        .filter(|r| !r.is_empty())
        .collect();
    let mut passed = true;
    let mut parts = Vec::new();
    for s in &subgroups {
        let f = build_pp_formula(&g, &h, s, limits)?;
        let ok = eval_pp_formula(&f, &g, 2, limits)? == *s && f.bounds_hold();
        passed &= ok;
        parts.push(format!(
            "|S|={} l={} m={}{}",
            s.len(),
            f.l,
            f.m_count(),
            if ok { "" } else { " FAILED" }
        ));
    }
    Ok(Verdict::new(
        passed,
        format!("{} subgroups: {}", subgroups.len(), parts.join(", ")),
    ))
}

fn thread_determinism(limits: &Limits) -> Result<Verdict> {
    let reports = |threads: usize| -> Result<Vec<String>> {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))?;
        Ok(pool.install(|| [4, 7, 8].iter().map(|&id| run(id, limits).report).collect()))
    };
    let one = reports(1)?;
    let four = reports(4)?;
    let differing: Vec<u8> = [4u8, 7, 8]
        .iter()
        .zip(one.iter().zip(&four))
        .filter(|(_, (a, b))| a != b)
        .map(|(id, _)| *id)
        .collect();
    let bytes: usize = one.iter().map(String::len).sum();
    Ok(if differing.is_empty() {
        Verdict::new(
            true,
            format!("criteria 4, 7, 8 identical under 1 and 4 threads ({bytes} bytes)"),
        )
    } else {
        Verdict::new(false, format!("reports differ for criteria {differing:?}"))
    })
}
