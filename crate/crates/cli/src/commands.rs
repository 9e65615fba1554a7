use std::path::{Path, PathBuf};

use clonekit::acceptance;
use clonekit::clone::{
    clone_layer, compute_m, find_edge, find_malcev, find_nu, is_term_function, lambda_member_in, phi, MembershipMode,
};
use clonekit::galois::{check_determination, combine_relations, pol_layer, preserves, rep_check, subuniverses};
use clonekit::io::{self, OperationDoc, RelationDoc};
use clonekit::pp_group::{build_pp_formula, eval_pp_formula, GroupTable};
use clonekit::wpo::{embeds, minimal_elements, predecessors, t_map, word_le, Witness, Word};
use clonekit::{subpower_closure, Config, Domain, Element, Error, OperationTable, Relation};
use serde_json::{json, Value};

use crate::output::{load, Failure, Report};
use crate::{Alphabet, Command, MembershipKind, TermKind, WpoCommand};

type Outcome = Result<Report, Failure>;

pub fn dispatch(command: &Command, config: &Config) -> Outcome {
    let limits = config.limits();
    let limits = &limits;
    match command {
        Command::Closure {
            algebra,
            arity,
            generators,
        } => {
            let alg = load(algebra, io::parse_algebra)?;
            match generators {
                Some(path) => {
                    let gens = load(path, io::parse_relation)?;
                    if gens.arity() != *arity {
                        return Err(Error::ArityMismatch {
                            expected: *arity,
                            found: gens.arity(),
                        }
                        .into());
                    }
                    let r = subpower_closure(&alg, *arity, gens.iter().cloned(), limits)?;
                    Ok(Report::new(relation_text(&r), relation_json(&r)))
                }
                None => {
                    let layer = clone_layer(&alg, *arity, limits)?;
                    let mut text = format!("{} term operations of arity {arity}\n", layer.len());
                    for f in layer.ops() {
                        text.push_str(&table_text(f));
                        text.push('\n');
                    }
                    let ops: Vec<Value> = layer.ops().iter().map(op_json).collect();
                    Ok(Report::new(
                        text,
                        json!({ "arity": arity, "size": layer.len(), "operations": ops }),
                    ))
                }
            }
        }
        Command::FindTerm { kind, algebra, k } => {
            let alg = load(algebra, io::parse_algebra)?;
            let need_k = || k.ok_or_else(|| Failure::input("--k is required for this kind"));
            let (label, found) = match kind {
                TermKind::Malcev => ("Malcev".to_string(), find_malcev(&alg, limits)?),
                TermKind::Edge => {
                    let k = need_k()?;
                    (format!("{k}-edge"), find_edge(&alg, k, limits)?)
                }
                TermKind::Nu => {
                    let k = need_k()?;
                    (format!("{k}-ary near-unanimity"), find_nu(&alg, k, limits)?)
                }
            };
            Ok(match found {
                Some(f) => Report::new(
                    format!("{label} term operation\n{}", table_text(&f)),
                    json!({ "kind": label, "found": true, "operation": op_json(&f) }),
                ),
                None => Report::new(
                    format!("no {label} term operation"),
                    json!({ "kind": label, "found": false }),
                )
                .negative(true),
            })
        }
        Command::Phi { algebra, word } => {
            let alg = load(algebra, io::parse_algebra)?;
            let w = Word::parse_one_based(alg.domain(), word)?;
            let layer = clone_layer(&alg, w.len(), limits)?;
            let p = phi(&layer, &w)?;
            let pairs: Vec<[usize; 2]> = p.pairs.iter().map(|&(c, d)| one_based_pair(c, d)).collect();
            let text = format!("phi {} = {}", w, pairs_text(&pairs));
            Ok(Report::new(text, json!({ "word": w.to_string(), "pairs": pairs })))
        }
        Command::Lambda { algebra, pair, word } => {
            let alg = load(algebra, io::parse_algebra)?;
            let (c, d) = parse_pair(alg.domain(), pair)?;
            let w = Word::parse_one_based(alg.domain(), word)?;
            let layer = clone_layer(&alg, w.len(), limits)?;
            let member = lambda_member_in(&layer, (c, d), &w)?;
            let text = format!(
                "{} {} in lambda({},{})",
                w,
                if member { "is" } else { "is not" },
                c as usize + 1,
                d as usize + 1
            );
            Ok(Report::new(
                text,
                json!({ "word": w.to_string(), "pair": one_based_pair(c, d), "member": member }),
            )
            .negative(!member))
        }
        Command::ComputeM { algebra, max_len } => {
            let alg = load(algebra, io::parse_algebra)?;
            let report = compute_m(&alg, *max_len, limits)?;
            let pairs: Vec<Value> = report
                .pairs
                .iter()
                .map(|p| {
                    json!({
                        "pair": one_based_pair(p.pair.0, p.pair.1),
                        "minimals": p.minimals.iter().map(Word::to_string).collect::<Vec<_>>(),
                        "frontier_closed": p.frontier_closed,
                    })
                })
                .collect();
            let v = json!({
                "max_len": report.max_len,
                "m": report.m,
                "all_closed": report.all_closed,
                "layer_sizes": report.layer_sizes,
                "pairs": pairs,
            });
            Ok(Report::new(report.render(), v))
        }
        Command::IsTermFunction {
            mode,
            gens,
            function,
            relations,
        } => {
            let alg = load(gens, io::parse_generators)?;
            let f = load(function, |t| io::parse_operation(t, Some(alg.domain())))?;
            let rels = load_relations(relations)?;
            let member = match mode {
                MembershipKind::Exhaustive => is_term_function(&alg, &f, MembershipMode::Exhaustive, limits)?,
                MembershipKind::Relations => {
                    if rels.is_empty() {
                        return Err(Failure::input("--mode relations needs --relations"));
                    }
                    is_term_function(&alg, &f, MembershipMode::ViaRelations(&rels), limits)?
                }
            };
            let text = if member { "term function" } else { "not a term function" };
            Ok(Report::new(text, json!({ "member": member })).negative(!member))
        }
        Command::Pol { relations, arity } => {
            let rels = load_relations(relations)?;
            let domain = rels[0].domain();
            let ops = pol_layer(domain, &rels, *arity, limits)?;
            let mut text = format!("{} polymorphisms of arity {arity}\n", ops.len());
            for f in &ops {
                text.push_str(&table_text(f));
                text.push('\n');
            }
            let docs: Vec<Value> = ops.iter().map(op_json).collect();
            Ok(Report::new(
                text,
                json!({ "arity": arity, "size": ops.len(), "operations": docs }),
            ))
        }
        Command::Preserves { function, relation } => {
            let r = load(relation, io::parse_relation)?;
            let f = load(function, |t| io::parse_operation(t, Some(r.domain())))?;
            let ok = preserves(&f, &r)?;
            let text = if ok { "preserves" } else { "does not preserve" };
            Ok(Report::new(text, json!({ "preserves": ok })).negative(!ok))
        }
        Command::Subuniverses { algebra, power } => {
            let alg = load(algebra, io::parse_algebra)?;
            let fam = subuniverses(&alg, *power, limits)?;
            let mut text = format!("{} subuniverses of power {power}\n", fam.members.len());
            for r in &fam.members {
                text.push_str(&tuples_text(r));
                text.push('\n');
            }
            let members: Vec<Value> = fam.members.iter().map(relation_json).collect();
            Ok(Report::new(
                text,
                json!({ "power": power, "count": fam.members.len(), "members": members }),
            ))
        }
        Command::RepCheck {
            algebra,
            smaller,
            larger,
            k,
        } => {
            let alg = load(algebra, io::parse_algebra)?;
            let f = load(smaller, io::parse_relation)?;
            let g = load(larger, io::parse_relation)?;
            let v = rep_check(&f, &g, &alg, *k, limits)?;
            let text = format!(
                "projections agree: {}\nforks contained: {}\nhypotheses hold: {}\nF = G: {}\n{k}-edge term: {}",
                v.projections_agree, v.forks_contained, v.hypotheses_hold, v.conclusion_holds, v.edge_term_verified
            );
            let json = json!({
                "projections_agree": v.projections_agree,
                "forks_contained": v.forks_contained,
                "hypotheses_hold": v.hypotheses_hold,
                "conclusion_holds": v.conclusion_holds,
                "edge_term_verified": v.edge_term_verified,
            });
            Ok(Report::new(text, json).negative(v.hypotheses_hold && !v.conclusion_holds))
        }
        Command::CombineRelations { relations } => {
            let rels = load_relations(relations)?;
            let r = combine_relations(&rels)?;
            Ok(Report::new(relation_text(&r), relation_json(&r)))
        }
        Command::VerifyDetermination {
            algebra,
            relations,
            arity,
        } => {
            let alg = load(algebra, io::parse_algebra)?;
            let rels = load_relations(relations)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            let mut all = true;
            for n in 1..=*arity {
                let d = check_determination(&alg, &rels, n, limits)?;
                all &= d.equal;
                text.push_str(&format!(
                    "arity {n}: Pol {} clone {} {}\n",
                    d.pol_size,
                    d.layer_size,
                    if d.equal { "equal" } else { "differ" }
                ));
                rows.push(json!({ "arity": n, "pol_size": d.pol_size, "clone_size": d.layer_size, "equal": d.equal }));
            }
            text.push_str(if all { "determined" } else { "not determined" });
            Ok(Report::new(text, json!({ "determined": all, "arities": rows })).negative(!all))
        }
        Command::PpFormula {
            group,
            subgroup,
            relation,
        } => pp_formula(group, subgroup, relation.as_deref(), config),
        Command::Wpo { command } => wpo(command, config),
        Command::Selftest => {
            let outcomes = acceptance::run_all(limits);
            let mut text = String::new();
            for o in &outcomes {
                text.push_str(&format!(
                    "[{}] {:>2} {}: {}\n",
                    if o.passed { "PASS" } else { "FAIL" },
                    o.id,
                    o.title,
                    o.detail
                ));
            }
            let passed = outcomes.iter().filter(|o| o.passed).count();
            let sampled = acceptance::sampled_preservation(config.seed, 64, limits);
            text.push_str(&format!("{passed} of {} criteria passed\n", outcomes.len()));
            text.push_str(&format!(
                "[{}] sampled: {}",
                if sampled.passed { "PASS" } else { "FAIL" },
                sampled.detail
            ));
            let rows: Vec<Value> = outcomes
                .iter()
                .map(|o| json!({ "id": o.id, "title": o.title, "passed": o.passed, "detail": o.detail }))
                .collect();
            let v = json!({
                "criteria": rows,
                "passed": passed,
                "sampled": { "seed": config.seed, "passed": sampled.passed, "detail": sampled.detail },
            });
            Ok(Report::new(text, v).negative(passed < outcomes.len() || !sampled.passed))
        }
    }
}

fn pp_formula(group: &Path, subgroup: &Path, relation: Option<&Path>, config: &Config) -> Outcome {
    let limits = config.limits();
    let g = GroupTable::from_algebra(&load(group, io::parse_algebra)?)?;
    let s = load(subgroup, io::parse_relation)?;
    let h = match relation {
        Some(path) => load(path, io::parse_relation)?,
        None => g.graph(),
    };
    let f = build_pp_formula(&g, &h, &s, &limits)?;
    let check = match eval_pp_formula(&f, &g, s.arity(), &limits) {
        Ok(r) => Some(r == s),
        Err(e) if e.is_resource_limit() => None,
        Err(e) => return Err(e.into()),
    };
    let sigma: Vec<Vec<usize>> = f.sigma.iter().map(|row| row.iter().map(|i| i + 1).collect()).collect();
    let tau: Vec<usize> = f.tau.iter().map(|i| i + 1).collect();
    let mut text = format!(
        "{f}\nl = {}, m = {}, k = {}, encoding {}\n",
        f.l,
        f.m_count(),
        f.k,
        f.encoding.as_str()
    );
    text.push_str(match check {
        Some(true) => "evaluation reproduces the subgroup",
        Some(false) => "evaluation does NOT reproduce the subgroup",
        None => "evaluation skipped: assignment space over the cap",
    });
    let v = json!({
        "l": f.l,
        "m": f.m_count(),
        "k": f.k,
        "sigma": sigma,
        "tau": tau,
        "H": relation_json(&f.h),
        "encoding": f.encoding.as_str(),
        "verified": check,
        "formula": f.to_string(),
    });
    Ok(Report::new(text, v).negative(check == Some(false)))
}

fn wpo(command: &WpoCommand, config: &Config) -> Outcome {
    let limits = config.limits();
    match command {
        WpoCommand::Embeds { a, b, alphabet } => {
            let d = alphabet_domain(alphabet, &[a, b])?;
            let (a, b) = (Word::parse_one_based(d, a)?, Word::parse_one_based(d, b)?);
            Ok(match embeds(&a, &b)? {
                Some(h) => Report::new(
                    format!("{a} <=_E {b} via {h}"),
                    json!({ "embeds": true, "witness": h.one_based() }),
                ),
                None => Report::new("no witness", json!({ "embeds": false })).negative(true),
            })
        }
        WpoCommand::TMap {
            a,
            b,
            x,
            witness,
            alphabet,
        } => {
            let d = alphabet_domain(alphabet, &[a, b, x])?;
            let (a, b) = (Word::parse_one_based(d, a)?, Word::parse_one_based(d, b)?);
            let input = Word::parse_one_based(d, x)?;
            let h = match witness {
                Some(text) => {
                    let positions = parse_list(text)?;
                    if positions.contains(&0) {
                        return Err(Failure::input("witness positions are 1-based"));
                    }
                    Witness::new(positions.into_iter().map(|p| p - 1).collect())
                }
                None => embeds(&a, &b)?.ok_or_else(|| Failure::input(format!("{a} does not embed into {b}")))?,
            };
            let out = Word::new(d, t_map(&a, &b, &h, input.letters())?)?;
            Ok(Report::new(
                format!("T{h}({input}) = {out}"),
                json!({ "witness": h.one_based(), "input": input.to_string(), "output": out.to_string() }),
            ))
        }
        WpoCommand::Minimals {
            gens,
            max_len,
            alphabet,
        } => {
            let texts: Vec<&String> = gens.iter().collect();
            let d = alphabet_domain(alphabet, &texts)?;
            let gens = gens
                .iter()
                .map(|g| Word::parse_one_based(d, g))
                .collect::<clonekit::Result<Vec<_>>>()?;
            let member = |w: &Word| -> clonekit::Result<bool> {
                for g in &gens {
                    if word_le(g, w)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            };
            let scan = minimal_elements(member, d, *max_len, &limits)?;
            let words: Vec<String> = scan.minimals.iter().map(Word::to_string).collect();
            let lengths: Vec<usize> = scan.minimals.iter().map(Word::len).collect();
            let text = format!(
                "minimals {}\nfrontier_closed {}",
                if words.is_empty() {
                    "(none)".to_string()
                } else {
                    words.join(" ")
                },
                scan.frontier_closed
            );
            Ok(Report::new(
                text,
                json!({ "minimals": words, "lengths": lengths, "frontier_closed": scan.frontier_closed, "max_len": max_len }),
            ))
        }
        WpoCommand::FirstOcc { a, letter, alphabet } => {
            let mut d = alphabet_domain(alphabet, &[a])?;
            if alphabet.t.is_none() && *letter > d.size() {
                d = Domain::new(*letter)?;
            }
            let w = Word::parse_one_based(d, a)?;
            if *letter == 0 || *letter > d.size() {
                return Err(Error::DomainViolation {
                    value: *letter,
                    size: d.size(),
                }
                .into());
            }
            let pos = w.first_occ((*letter - 1) as Element)?;
            Ok(match pos {
                Some(p) => Report::new(
                    format!("{}", p + 1),
                    json!({ "word": w.to_string(), "letter": letter, "position": p + 1 }),
                ),
                None => Report::new(
                    format!("letter {letter} does not occur in {w}"),
                    json!({ "word": w.to_string(), "letter": letter, "position": null }),
                )
                .negative(true),
            })
        }
        WpoCommand::Predecessors { a, alphabet } => {
            let d = alphabet_domain(alphabet, &[a])?;
            let w = Word::parse_one_based(d, a)?;
            let preds: Vec<String> = predecessors(&w).iter().map(Word::to_string).collect();
            let text = if preds.is_empty() {
                "(none)".to_string()
            } else {
                preds.join(" ")
            };
            Ok(Report::new(
                text,
                json!({ "word": w.to_string(), "predecessors": preds }),
            ))
        }
    }
}

fn load_relations(paths: &[PathBuf]) -> Result<Vec<Relation>, Failure> {
    paths.iter().map(|p| load(p, io::parse_relation)).collect()
}

fn parse_list(text: &str) -> Result<Vec<usize>, Failure> {
    serde_json::from_str::<Vec<usize>>(text.trim())
        .map_err(|e| Failure::input(format!("expected a list like [1,2]: {text:?}: {e}")))
}

/// Domain for 1-based word arguments: `--t`, else the largest letter used.
fn alphabet_domain(alphabet: &Alphabet, words: &[&String]) -> Result<Domain, Failure> {
    let t = match alphabet.t {
        Some(t) => t,
        None => {
            let mut max = 1;
            for w in words {
                max = max.max(parse_list(w)?.into_iter().max().unwrap_or(1));
            }
            max
        }
    };
    Ok(Domain::new(t)?)
}

fn parse_pair(d: Domain, text: &str) -> Result<(Element, Element), Failure> {
    let parts: Vec<&str> = text
        .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
        .split(',')
        .collect();
    let bad = || Failure::input(format!("pair must look like 1,2: {text:?}"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let mut out = [0 as Element; 2];
    for (slot, p) in out.iter_mut().zip(&parts) {
        let v: usize = p.trim().parse().map_err(|_| bad())?;
        if v == 0 || v > d.size() {
            return Err(Error::DomainViolation {
                value: v,
                size: d.size(),
            }
            .into());
        }
        *slot = (v - 1) as Element;
    }
    Ok((out[0], out[1]))
}

fn one_based_pair(c: Element, d: Element) -> [usize; 2] {
    [c as usize + 1, d as usize + 1]
}

fn pairs_text(pairs: &[[usize; 2]]) -> String {
    let parts: Vec<String> = pairs.iter().map(|[c, d]| format!("({c},{d})")).collect();
    format!("{{{}}}", parts.join(", "))
}

fn table_text(f: &OperationTable) -> String {
    let values: Vec<String> = f.values().iter().map(|v| v.to_string()).collect();
    format!("[{}]", values.join(","))
}

fn tuples_text(r: &Relation) -> String {
    let tuples: Vec<String> = r
        .iter()
        .map(|t| {
            let xs: Vec<String> = t.iter().map(|v| v.to_string()).collect();
            format!("({})", xs.join(","))
        })
        .collect();
    format!("{{{}}}", tuples.join(" "))
}

fn relation_text(r: &Relation) -> String {
    format!("arity {}, {} tuples\n{}", r.arity(), r.len(), tuples_text(r))
}

fn op_json(f: &OperationTable) -> Value {
    serde_json::to_value(OperationDoc::from_table(f, None)).expect("operations serialize")
}

fn relation_json(r: &Relation) -> Value {
    serde_json::to_value(RelationDoc::from_relation(r)).expect("relations serialize")
}
