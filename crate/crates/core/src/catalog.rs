//! Small standard algebras, operations and relations used throughout the
//! tests, the acceptance suite and the command-line examples.

use crate::algebra::{Algebra, Domain, OperationTable, Relation};
use crate::Element;

fn bool_domain() -> Domain {
    Domain::new(2).expect("2 is a valid domain size")
}

fn table(domain: Domain, arity: usize, f: impl Fn(&[Element]) -> Element) -> OperationTable {
    OperationTable::from_fn(domain, arity, f).expect("catalog tables are well formed")
}

pub fn xor() -> OperationTable {
    table(bool_domain(), 2, |x| x[0] ^ x[1])
}

pub fn and() -> OperationTable {
    table(bool_domain(), 2, |x| x[0] & x[1])
}

pub fn or() -> OperationTable {
    table(bool_domain(), 2, |x| x[0] | x[1])
}

pub fn nand() -> OperationTable {
    table(bool_domain(), 2, |x| 1 - (x[0] & x[1]))
}

pub fn not() -> OperationTable {
    table(bool_domain(), 1, |x| 1 - x[0])
}

pub fn majority() -> OperationTable {
    table(
        bool_domain(),
        3,
        |x| {
            if x[0] == x[1] || x[0] == x[2] {
                x[0]
            } else {
                x[1]
            }
        },
    )
}

pub fn minority() -> OperationTable {
    table(bool_domain(), 3, |x| x[0] ^ x[1] ^ x[2])
}

pub fn bool_constant(arity: usize, c: Element) -> OperationTable {
    OperationTable::constant(bool_domain(), arity, c).expect("valid constant")
}

fn named(domain: Domain, ops: Vec<(&str, OperationTable)>) -> Algebra {
    let (names, ops): (Vec<String>, Vec<OperationTable>) = ops.into_iter().map(|(n, o)| (n.to_string(), o)).unzip();
    Algebra::with_names(domain, ops, names).expect("catalog algebras are well formed")
}

/// `<{0,1}, +>`.
pub fn z2_group() -> Algebra {
    named(bool_domain(), vec![("add", xor())])
}

/// `<Z_n, +, ->`.
pub fn cyclic_group(n: usize) -> Algebra {
    let d = Domain::new(n).expect("valid order");
    let m = n as u16;
    named(
        d,
        vec![
            ("mul", table(d, 2, |x| ((x[0] as u16 + x[1] as u16) % m) as Element)),
            ("inv", table(d, 1, |x| ((m - x[0] as u16) % m) as Element)),
        ],
    )
}

/// `<{0,1}, and, or>`.
pub fn boolean_lattice() -> Algebra {
    named(bool_domain(), vec![("and", and()), ("or", or())])
}

/// `<{0,1}, and, or, 0, 1>` with the constants as unary operations.
pub fn bounded_boolean_lattice() -> Algebra {
    named(
        bool_domain(),
        vec![
            ("and", and()),
            ("or", or()),
            ("zero", bool_constant(1, 0)),
            ("one", bool_constant(1, 1)),
        ],
    )
}

/// `<{0,1}, nand>`; generates every operation of positive arity.
pub fn boolean_all() -> Algebra {
    named(bool_domain(), vec![("nand", nand())])
}

pub fn majority_algebra() -> Algebra {
    named(bool_domain(), vec![("maj", majority())])
}

pub fn algebra_of(ops: Vec<OperationTable>) -> Algebra {
    let domain = ops.first().map_or_else(bool_domain, |o| o.domain());
    Algebra::new(domain, ops).expect("operations share a domain")
}

/// The order `<=` on `{0,1}`.
pub fn leq() -> Relation {
    Relation::new(bool_domain(), 2, vec![vec![0, 0], vec![0, 1], vec![1, 1]]).expect("valid")
}

/// The unary relation `{c}` on `{0,1}`.
pub fn singleton(c: Element) -> Relation {
    Relation::new(bool_domain(), 1, vec![vec![c]]).expect("valid")
}

/// `{(x, y, z) : op(x, y) = z}`.
pub fn graph_of(op: &OperationTable) -> Relation {
    assert_eq!(op.arity(), 2, "graph_of expects a binary operation");
    let d = op.domain();
    Relation::new(
        d,
        3,
        d.tuples(2).map(|x| {
            let z = op.apply(&x).expect("in range");
            vec![x[0], x[1], z]
        }),
    )
    .expect("valid")
}

/// `{(x, y, z, w) : x + y + z = w}` on `{0,1}`; determines the affine clone.
pub fn affine_quaternary() -> Relation {
    Relation::new(
        bool_domain(),
        4,
        bool_domain()
            .tuples(3)
            .map(|x| vec![x[0], x[1], x[2], x[0] ^ x[1] ^ x[2]]),
    )
    .expect("valid")
}
