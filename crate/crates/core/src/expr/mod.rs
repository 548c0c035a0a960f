//! Coordinate expressions with exact derivatives through third order.
//!
//! Every field on a chart (metric components, the structure tensor, the unit
//! field and the conformal factor) is given as a small arithmetic expression in
//! the chart coordinates. [`parse_expression`] compiles the text into an
//! [`Expr`]; [`eval_jet3`] evaluates it together with all partial derivatives
//! up to order three using truncated Taylor arithmetic ([`Jet`]).
//!
//! ```
//! use berger_conformal::expr::{parse_expression, eval_jet3};
//!
//! let e = parse_expression("x^3", &["x"]).unwrap();
//! let j = eval_jet3(&e, &[2.0]).unwrap();
//! assert_eq!(j.value(), 8.0);
//! assert_eq!(j.d1(0), 12.0);
//! assert_eq!(j.d3(0, 0, 0), 6.0);
//! ```

mod eval;
mod jet;
mod parser;
mod print;

use std::fmt;
use std::sync::Arc;

pub use eval::{eval_jet, eval_jet3, eval_value};
pub use jet::Jet;
pub use parser::parse_expression;
pub(crate) use parser::parse_with;

/// Names reserved by the grammar; coordinates may not reuse them.
pub const RESERVED_NAMES: &[&str] = &[
    "sin", "cos", "tan", "sinh", "cosh", "tanh", "exp", "log", "sqrt", "pi", "e",
];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExprError {
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{name}` at offset {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("unknown function `{name}` at offset {offset}")]
    UnknownFunction { name: String, offset: usize },
    #[error("domain error in `{subexpression}`: {message}")]
    Domain {
        subexpression: String,
        message: String,
    },
    #[error("expected {expected} coordinate values, got {got}")]
    PointDimension { expected: usize, got: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    pub fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Sinh,
    Cosh,
    Tanh,
    Exp,
    Log,
    Sqrt,
}

impl Func {
    pub const ALL: [Func; 9] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sinh,
        Func::Cosh,
        Func::Tanh,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Tanh => "tanh",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Func::ALL.iter().copied().find(|f| f.name() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
}

impl Constant {
    pub fn value(self) -> f64 {
        match self {
            Constant::Pi => std::f64::consts::PI,
            Constant::E => std::f64::consts::E,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Constant::Pi => "pi",
            Constant::E => "e",
        }
    }
}

/// Syntax tree node. Literals are never negative; a leading minus is a [`Node::Neg`].
#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Number(f64),
    Constant(Constant),
    /// Index into the owning coordinate list.
    Var(usize),
    Neg(Box<Node>),
    Binary(BinOp, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

impl Node {
    /// True when no coordinate occurs in the subtree.
    pub fn is_constant(&self) -> bool {
        match self {
            Node::Number(_) | Node::Constant(_) => true,
            Node::Var(_) => false,
            Node::Neg(a) | Node::Call(_, a) => a.is_constant(),
            Node::Binary(_, a, b) => a.is_constant() && b.is_constant(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Node::Number(_) | Node::Constant(_) | Node::Var(_) => 1,
            Node::Neg(a) | Node::Call(_, a) => 1 + a.depth(),
            Node::Binary(_, a, b) => 1 + a.depth().max(b.depth()),
        }
    }
}

/// A parsed expression bound to the coordinate names it was parsed against.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    coordinates: Arc<[String]>,
}

impl Expr {
    pub fn new(root: Node, coordinates: Arc<[String]>) -> Self {
        Expr { root, coordinates }
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn coordinates(&self) -> &[String] {
        &self.coordinates
    }

    pub fn dimension(&self) -> usize {
        self.coordinates.len()
    }

    pub fn is_constant(&self) -> bool {
        self.root.is_constant()
    }

    /// Canonical text form; re-parsing it yields an identical tree.
    pub fn to_canonical_string(&self) -> String {
        print::print_node(&self.root, &self.coordinates)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}
