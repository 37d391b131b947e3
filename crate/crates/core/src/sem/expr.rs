//! Structural-equation expressions in prefix notation.
//!
//! ```text
//! expr := number | name | "eps" | "(" op expr+ ")"
//! op   := "add" | "mul"                                   (one or more arguments)
//!       | "sub"                                           (exactly two)
//!       | "neg" | "atan" | "sin" | "sign" | "abs" | "sq" | "sqrtabs"   (exactly one)
//! ```
//!
//! `name` is a parent node, `eps` the node's own noise draw. `sign(0) = 0`
//! and `sqrtabs(x) = sqrt(|x|)`. Example: `(add X2 X4 (sq X3) eps)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryOp {
    Neg,
    Atan,
    Sin,
    Sign,
    Abs,
    Sq,
    SqrtAbs,
}

impl UnaryOp {
    const ALL: [UnaryOp; 7] = [
        UnaryOp::Neg,
        UnaryOp::Atan,
        UnaryOp::Sin,
        UnaryOp::Sign,
        UnaryOp::Abs,
        UnaryOp::Sq,
        UnaryOp::SqrtAbs,
    ];

    fn keyword(self) -> &'static str {
        match self {
            UnaryOp::Neg => "neg",
            UnaryOp::Atan => "atan",
            UnaryOp::Sin => "sin",
            UnaryOp::Sign => "sign",
            UnaryOp::Abs => "abs",
            UnaryOp::Sq => "sq",
            UnaryOp::SqrtAbs => "sqrtabs",
        }
    }

    fn apply(self, x: f64) -> f64 {
        match self {
            UnaryOp::Neg => -x,
            UnaryOp::Atan => x.atan(),
            UnaryOp::Sin => x.sin(),
            UnaryOp::Sign => {
                if x > 0.0 {
                    1.0
                } else if x < 0.0 {
                    -1.0
                } else {
                    0.0
                }
            }
            UnaryOp::Abs => x.abs(),
            UnaryOp::Sq => x * x,
            UnaryOp::SqrtAbs => x.abs().sqrt(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(f64),
    Var(String),
    Eps,
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Unary(UnaryOp, Box<Expr>),
}

impl Expr {
    pub fn var(name: &str) -> Self {
        Expr::Var(name.to_string())
    }

    pub fn unary(op: UnaryOp, arg: Expr) -> Self {
        Expr::Unary(op, Box::new(arg))
    }

    /// Parent names referenced by the expression.
    pub fn variables(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.as_str());
            }
            Expr::Const(_) | Expr::Eps => {}
            Expr::Add(args) | Expr::Mul(args) => args.iter().for_each(|a| a.collect_vars(out)),
            Expr::Sub(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Expr::Unary(_, a) => a.collect_vars(out),
        }
    }

    pub fn uses_noise(&self) -> bool {
        match self {
            Expr::Eps => true,
            Expr::Const(_) | Expr::Var(_) => false,
            Expr::Add(args) | Expr::Mul(args) => args.iter().any(Expr::uses_noise),
            Expr::Sub(a, b) => a.uses_noise() || b.uses_noise(),
            Expr::Unary(_, a) => a.uses_noise(),
        }
    }

    /// Evaluates over whole columns of length `n`.
    pub fn eval(&self, vars: &HashMap<&str, &[f64]>, eps: &[f64], n: usize) -> Result<Vec<f64>> {
        Ok(match self {
            Expr::Const(c) => vec![*c; n],
            Expr::Eps => eps.to_vec(),
            Expr::Var(v) => vars
                .get(v.as_str())
                .ok_or_else(|| Error::UnknownNode(v.clone()))?
                .to_vec(),
            Expr::Add(args) => fold_args(args, vars, eps, n, |a, b| a + b)?,
            Expr::Mul(args) => fold_args(args, vars, eps, n, |a, b| a * b)?,
            Expr::Sub(a, b) => {
                let mut out = a.eval(vars, eps, n)?;
                let rhs = b.eval(vars, eps, n)?;
                out.iter_mut().zip(rhs).for_each(|(x, y)| *x -= y);
                out
            }
            Expr::Unary(op, a) => {
                let mut out = a.eval(vars, eps, n)?;
                out.iter_mut().for_each(|x| *x = op.apply(*x));
                out
            }
        })
    }
}

fn fold_args(
    args: &[Expr],
    vars: &HashMap<&str, &[f64]>,
    eps: &[f64],
    n: usize,
    f: impl Fn(f64, f64) -> f64,
) -> Result<Vec<f64>> {
    let mut out = args[0].eval(vars, eps, n)?;
    for a in &args[1..] {
        let rhs = a.eval(vars, eps, n)?;
        out.iter_mut().zip(rhs).for_each(|(x, y)| *x = f(*x, y));
    }
    Ok(out)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            // Debug formatting is the shortest text that parses back exactly.
            Expr::Const(c) => write!(f, "{c:?}"),
            Expr::Var(v) => f.write_str(v),
            Expr::Eps => f.write_str("eps"),
            Expr::Add(args) | Expr::Mul(args) => {
                f.write_str(if matches!(self, Expr::Add(_)) { "(add" } else { "(mul" })?;
                for a in args {
                    write!(f, " {a}")?;
                }
                f.write_str(")")
            }
            Expr::Sub(a, b) => write!(f, "(sub {a} {b})"),
            Expr::Unary(op, a) => write!(f, "({} {a})", op.keyword()),
        }
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let expr = parse_expr(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::Expr(format!("trailing input after expression in {s:?}")));
        }
        Ok(expr)
    }
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
        && name != "eps"
}

fn tokenize(s: &str) -> Vec<&str> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, c) in s.char_indices() {
        if c == '(' || c == ')' || c.is_whitespace() {
            if let Some(st) = start.take() {
                tokens.push(&s[st..i]);
            }
            if !c.is_whitespace() {
                tokens.push(&s[i..i + 1]);
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(st) = start {
        tokens.push(&s[st..]);
    }
    tokens
}

fn parse_expr(tokens: &[&str], pos: &mut usize) -> Result<Expr> {
    let tok = *tokens.get(*pos).ok_or_else(|| Error::Expr("unexpected end of input".into()))?;
    *pos += 1;
    match tok {
        "(" => {
            let op = *tokens
                .get(*pos)
                .ok_or_else(|| Error::Expr("missing operator after '('".into()))?;
            *pos += 1;
            let mut args = Vec::new();
            while tokens.get(*pos).copied() != Some(")") {
                if *pos >= tokens.len() {
                    return Err(Error::Expr(format!("unclosed '({op}'")));
                }
                args.push(parse_expr(tokens, pos)?);
            }
            *pos += 1;
            build(op, args)
        }
        ")" => Err(Error::Expr("unexpected ')'".into())),
        "eps" => Ok(Expr::Eps),
        atom => {
            if let Ok(v) = atom.parse::<f64>() {
                if !v.is_finite() {
                    return Err(Error::Expr(format!("non-finite constant {atom:?}")));
                }
                Ok(Expr::Const(v))
            } else if is_valid_name(atom) {
                Ok(Expr::Var(atom.to_string()))
            } else {
                Err(Error::Expr(format!("invalid token {atom:?}")))
            }
        }
    }
}

fn build(op: &str, mut args: Vec<Expr>) -> Result<Expr> {
    let arity = |want: usize, args: &Vec<Expr>| {
        if args.len() == want {
            Ok(())
        } else {
            Err(Error::Expr(format!("'{op}' takes {want} argument(s), got {}", args.len())))
        }
    };
    match op {
        "add" | "mul" => {
            if args.is_empty() {
                return Err(Error::Expr(format!("'{op}' needs at least one argument")));
            }
            Ok(if op == "add" { Expr::Add(args) } else { Expr::Mul(args) })
        }
        "sub" => {
            arity(2, &args)?;
            let b = args.pop().unwrap();
            let a = args.pop().unwrap();
            Ok(Expr::Sub(Box::new(a), Box::new(b)))
        }
        _ => {
            let unary = UnaryOp::ALL
                .into_iter()
                .find(|u| u.keyword() == op)
                .ok_or_else(|| Error::Expr(format!("unknown operator {op:?}")))?;
            arity(1, &args)?;
            Ok(Expr::unary(unary, args.pop().unwrap()))
        }
    }
}
