use std::fmt;
use std::str::FromStr;

use super::{DagSpec, NodeSpec};
use crate::error::{Error, Result};

/// The benchmark models shipped with the crate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Builtin {
    /// 16 nodes, 15 edges; mixes additive, periodic and multiplicative links.
    Example1,
    /// 7 nodes, 9 edges; `X5` sits on a skeleton cycle with two of its parents.
    Example2,
    /// `X1 = sign(X3) + a·ε1`, `X2 = |X3| + a·ε2`, `Y = X1·X2` (noiseless `Y`).
    CodecViolation(f64),
}

impl FromStr for Builtin {
    type Err = Error;

    /// Accepts `example1`, `example2`, `codec_violation` (noise scale 0) and
    /// `codec_violation:<a>`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n, Some(a)),
            None => (s, None),
        };
        match (name.trim(), arg) {
            ("example1", None) => Ok(Builtin::Example1),
            ("example2", None) => Ok(Builtin::Example2),
            ("codec_violation" | "codec-violation", arg) => {
                let alpha = match arg {
                    Some(a) => a
                        .trim()
                        .parse::<f64>()
                        .map_err(|_| Error::UnknownBuiltin(s.to_string()))?,
                    None => 0.0,
                };
                if !(alpha.is_finite() && alpha >= 0.0) {
                    return Err(Error::InvalidArgument(format!(
                        "codec_violation noise scale must be finite and >= 0, got {alpha}"
                    )));
                }
                Ok(Builtin::CodecViolation(alpha))
            }
            _ => Err(Error::UnknownBuiltin(s.to_string())),
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::Example1 => f.write_str("example1"),
            Builtin::Example2 => f.write_str("example2"),
            Builtin::CodecViolation(a) => write!(f, "codec_violation:{a:?}"),
        }
    }
}

pub fn builtin(which: Builtin) -> DagSpec {
    let nodes: Vec<(&str, &[&str], String)> = match which {
        Builtin::Example1 => vec![
            ("X1", &[], "eps".into()),
            ("X2", &[], "eps".into()),
            ("X3", &[], "eps".into()),
            ("X4", &[], "eps".into()),
            ("X5", &["X1", "X2"], "(add X1 (neg (atan X2)) eps)".into()),
            ("X6", &["X2", "X3", "X4"], "(add X2 X4 (sq X3) eps)".into()),
            ("X7", &["X3"], "(add (sin X3) eps)".into()),
            ("X8", &[], "eps".into()),
            ("X9", &["X6", "X10"], "(add (sin (add X6 eps)) (abs X10))".into()),
            ("X10", &[], "eps".into()),
            ("X11", &["X6", "X8", "X12"], "(add (mul X6 (sub X12 X8)) eps)".into()),
            ("X12", &[], "eps".into()),
            ("X13", &["X9"], "(atan (add (sq X9) eps))".into()),
            ("X14", &["X11"], "(add (sin X11) eps)".into()),
            ("X15", &["X12"], "(add (sqrtabs X12) eps)".into()),
            ("X16", &["X12"], "(add (sin X12) eps)".into()),
        ],
        Builtin::Example2 => vec![
            ("X1", &[], "eps".into()),
            ("X2", &["X1"], "(atan (add X1 eps))".into()),
            ("X3", &["X1"], "(atan (add X1 eps))".into()),
            ("X4", &["X1"], "(atan (add X1 eps))".into()),
            ("X5", &["X2", "X3"], "(atan (add X2 X3 eps))".into()),
            ("X6", &["X4", "X5"], "(atan (add X4 X5 eps))".into()),
            ("X7", &["X4", "X5"], "(atan (add X4 X5 eps))".into()),
        ],
        Builtin::CodecViolation(a) => vec![
            ("X1", &["X3"], format!("(add (sign X3) (mul {a:?} eps))")),
            ("X2", &["X3"], format!("(add (abs X3) (mul {a:?} eps))")),
            ("X3", &[], "eps".into()),
            ("Y", &["X1", "X2"], "(mul X1 X2)".into()),
        ],
    };
    let nodes = nodes
        .into_iter()
        .map(|(name, parents, eq)| NodeSpec::new(name, parents, &eq).expect("builtin equations parse"))
        .collect();
    DagSpec::new(nodes).expect("builtin specs are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!("example1".parse::<Builtin>().unwrap(), Builtin::Example1);
        assert_eq!("codec_violation:0.25".parse::<Builtin>().unwrap(), Builtin::CodecViolation(0.25));
        assert_eq!("codec_violation".parse::<Builtin>().unwrap(), Builtin::CodecViolation(0.0));
        assert!(matches!("example3".parse::<Builtin>(), Err(Error::UnknownBuiltin(_))));
        assert!("codec_violation:-1".parse::<Builtin>().is_err());
    }

    #[test]
    fn sizes() {
        let e1 = builtin(Builtin::Example1);
        assert_eq!((e1.len(), e1.edges().len()), (16, 15));
        let e2 = builtin(Builtin::Example2);
        assert_eq!((e2.len(), e2.edges().len()), (7, 9));
        let cv = builtin(Builtin::CodecViolation(0.3));
        assert_eq!((cv.len(), cv.edges().len()), (4, 4));
    }
}
