use std::fmt;

use serde::Serialize;

/// A single violated axiom, reported with the element names that witness it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum Violation {
    NotAssociative { s: String, t: String, u: String },
    NoIdentity,
    NotCompatible { s: String, t: String, u: String, side: Side },
    ActionNotClosed { element: String, scalar: String, value: String },
    ActionNotUnital { element: String },
    ActionNotAssociative { element: String, s: String, t: String },
    NotMonotoneInAct { a: String, b: String, scalar: String },
    NotMonotoneInScalar { element: String, s: String, t: String },
    ActionsDoNotCommute { left: String, element: String, right: String },
    TableNotTotal { detail: String },
}

/// Which side a multiplication or action acts from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Side::Left => f.write_str("left"),
            Side::Right => f.write_str("right"),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAssociative { s, t, u } => {
                write!(f, "not associative: ({s}{t}){u} != {s}({t}{u})")
            }
            Violation::NoIdentity => f.write_str("no two-sided identity"),
            Violation::NotCompatible { s, t, u, side } => match side {
                Side::Left => write!(f, "not compatible: {t} <= {u} but {s}{t} !<= {s}{u}"),
                Side::Right => write!(f, "not compatible: {t} <= {u} but {t}{s} !<= {u}{s}"),
            },
            Violation::ActionNotClosed {
                element,
                scalar,
                value,
            } => write!(f, "action of {scalar} on {element} gives {value}, outside the carrier"),
            Violation::ActionNotUnital { element } => {
                write!(f, "identity does not fix {element}")
            }
            Violation::ActionNotAssociative { element, s, t } => {
                write!(f, "action not associative at {element}, {s}, {t}")
            }
            Violation::NotMonotoneInAct { a, b, scalar } => {
                write!(f, "{a} <= {b} but translates by {scalar} are not ordered")
            }
            Violation::NotMonotoneInScalar { element, s, t } => {
                write!(f, "{s} <= {t} but {element} translates are not ordered")
            }
            Violation::ActionsDoNotCommute {
                left,
                element,
                right,
            } => write!(f, "({left}{element}){right} != {left}({element}{right})"),
            Violation::TableNotTotal { detail } => write!(f, "table not total: {detail}"),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("order is not antisymmetric; cycle {}", .cycle.join(" <= "))]
    AntisymmetryViolation { cycle: Vec<String> },
    #[error("validation failed: {}", render_violations(.0))]
    Invalid(Vec<Violation>),
    #[error("map is not equivariant: f({element}·{scalar}) != f({element})·{scalar}")]
    NotEquivariant { element: String, scalar: String },
    #[error("actor mismatch: {0}")]
    ActorMismatch(String),
    #[error("enumeration size {requested} exceeds the configured cap {max}")]
    CapExceeded { requested: usize, max: usize },
    #[error("isomorphism check failed: {0}")]
    IsoCheckFailed(String),
    #[error("witness not found: {0}")]
    WitnessNotFound(String),
    #[error("direct system incoherent: {0}")]
    SystemIncoherent(String),
    #[error("not an order embedding: {0}")]
    NotOrderEmbedding(String),
    #[error("size guard exceeded at level {level}: {size} cells")]
    SizeGuardExceeded { level: usize, size: usize },
    #[error("not commutative: {0}")]
    NotCommutative(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("partition is not an act congruence: {0}")]
    NotActCongruence(String),
    #[error("bad input: {0}")]
    BadInput(String),
}

fn render_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
