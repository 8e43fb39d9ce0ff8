//! User-supplied complex maps `f(z)`.
//!
//! Grammar (ASCII, whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' factor)?
//! atom   := number | 'z' | 'i' | 'pi' | 'e'
//!         | 'exp' '(' expr ')' | '(' expr ')' | '-' factor
//! ```
//!
//! `^` is right-associative and binds tighter than a leading minus, so
//! `-z^2` is `-(z^2)`. Numbers are plain decimals (`2`, `0.25`); there is
//! no scientific notation and no implicit multiplication.
//!
//! Parsing folds constant subtrees, so a multiplier such as
//! `e^(2*pi*i*(3/7))` is computed once and every evaluation reuses the
//! same value.

mod parser;
pub mod presets;

use std::fmt;

use crate::numerics::Complex;

pub use parser::ParseError;
pub use presets::{builtin_presets, find_preset, GermPreset, PresetDefaults};

/// Integer exponents up to this magnitude are computed by repeated squaring.
pub const MAX_INT_EXPONENT: i64 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NamedConst {
    Pi,
    E,
    I,
}

impl NamedConst {
    pub fn value(self) -> Complex {
        match self {
            NamedConst::Pi => Complex::new(std::f64::consts::PI, 0.0),
            NamedConst::E => Complex::new(std::f64::consts::E, 0.0),
            NamedConst::I => Complex::new(0.0, 1.0),
        }
    }
}

/// Expression tree. Leaves are constants or the variable `z`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Const(Complex),
    Named(NamedConst),
    Var,
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    /// Integer power, `|n| <= MAX_INT_EXPONENT`.
    PowInt(Box<Expr>, i32),
    /// Principal-branch power `exp(b log a)`.
    Pow(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
}

#[inline]
fn poison() -> Complex {
    Complex::new(f64::NAN, f64::NAN)
}

#[inline]
fn is_zero(z: Complex) -> bool {
    z.re == 0.0 && z.im == 0.0
}

#[inline]
fn divide(num: Complex, den: Complex) -> Complex {
    if is_zero(den) {
        poison()
    } else {
        num / den
    }
}

/// `base^n` by repeated squaring.
pub fn powi(base: Complex, n: i32) -> Complex {
    let mut e = n.unsigned_abs();
    let mut acc = Complex::new(1.0, 0.0);
    let mut b = base;
    while e > 0 {
        if e & 1 == 1 {
            acc *= b;
        }
        e >>= 1;
        if e > 0 {
            b *= b;
        }
    }
    if n < 0 {
        divide(Complex::new(1.0, 0.0), acc)
    } else {
        acc
    }
}

/// Principal-branch `a^b`.
pub fn powc(base: Complex, exponent: Complex) -> Complex {
    if is_zero(base) {
        return if is_zero(exponent) {
            Complex::new(1.0, 0.0)
        } else if exponent.re > 0.0 {
            Complex::new(0.0, 0.0)
        } else {
            poison()
        };
    }
    (exponent * base.ln()).exp()
}

impl Expr {
    pub fn eval(&self, z: Complex) -> Complex {
        match self {
            Expr::Const(c) => *c,
            Expr::Named(n) => n.value(),
            Expr::Var => z,
            Expr::Neg(a) => -a.eval(z),
            Expr::Binary(op, a, b) => {
                let (x, y) = (a.eval(z), b.eval(z));
                match op {
                    BinOp::Add => x + y,
                    BinOp::Sub => x - y,
                    BinOp::Mul => x * y,
                    BinOp::Div => divide(x, y),
                }
            }
            Expr::PowInt(a, n) => powi(a.eval(z), *n),
            Expr::Pow(a, b) => powc(a.eval(z), b.eval(z)),
            Expr::Exp(a) => a.eval(z).exp(),
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Expr::Const(_) | Expr::Named(_))
    }

    pub fn node_count(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Named(_) | Expr::Var => 1,
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Exp(a) => 1 + a.node_count(),
            Expr::Binary(_, a, b) | Expr::Pow(a, b) => 1 + a.node_count() + b.node_count(),
        }
    }

    /// Collapse constant subtrees and pick the integer-power form where the
    /// exponent is a small integer constant.
    fn fold(self) -> Expr {
        let folded = match self {
            Expr::Named(n) => Expr::Const(n.value()),
            Expr::Neg(a) => Expr::Neg(Box::new(a.fold())),
            Expr::Binary(op, a, b) => Expr::Binary(op, Box::new(a.fold()), Box::new(b.fold())),
            Expr::PowInt(a, n) => Expr::PowInt(Box::new(a.fold()), n),
            Expr::Exp(a) => Expr::Exp(Box::new(a.fold())),
            Expr::Pow(a, b) => {
                let (a, b) = (a.fold(), b.fold());
                match b {
                    Expr::Const(c) if as_small_int(c).is_some() => {
                        Expr::PowInt(Box::new(a), as_small_int(c).unwrap())
                    }
                    b => Expr::Pow(Box::new(a), Box::new(b)),
                }
            }
            leaf => leaf,
        };
        let all_const = match &folded {
            Expr::Neg(a) | Expr::PowInt(a, _) | Expr::Exp(a) => a.is_const(),
            Expr::Binary(_, a, b) | Expr::Pow(a, b) => a.is_const() && b.is_const(),
            _ => false,
        };
        if all_const {
            // the value does not depend on z
            Expr::Const(folded.eval(Complex::new(0.0, 0.0)))
        } else {
            folded
        }
    }
}

fn as_small_int(c: Complex) -> Option<i32> {
    let n = c.re;
    if c.im == 0.0 && n.fract() == 0.0 && n.abs() <= MAX_INT_EXPONENT as f64 {
        Some(n as i32)
    } else {
        None
    }
}

fn write_real(f: &mut fmt::Formatter<'_>, x: f64) -> fmt::Result {
    if x.is_finite() {
        if x.is_sign_negative() {
            write!(f, "(-{})", -x)
        } else {
            write!(f, "{x}")
        }
    } else {
        // poisoned constant
        write!(f, "(0/0)")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(c) => {
                if c.im == 0.0 && !c.im.is_sign_negative() {
                    write_real(f, c.re)
                } else {
                    write!(f, "(")?;
                    write_real(f, c.re)?;
                    write!(f, "+")?;
                    write_real(f, c.im)?;
                    write!(f, "*i)")
                }
            }
            Expr::Named(NamedConst::Pi) => write!(f, "pi"),
            Expr::Named(NamedConst::E) => write!(f, "e"),
            Expr::Named(NamedConst::I) => write!(f, "i"),
            Expr::Var => write!(f, "z"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Binary(op, a, b) => write!(f, "({a}{}{b})", op.symbol()),
            Expr::PowInt(a, n) if *n < 0 => write!(f, "({a})^(-{})", n.unsigned_abs()),
            Expr::PowInt(a, n) => write!(f, "({a})^{n}"),
            Expr::Pow(a, b) => write!(f, "({a})^({b})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
        }
    }
}

/// A parsed, constant-folded map `f(z)`. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct MapExpr {
    root: Expr,
}

impl MapExpr {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        parser::parse(source).map(|root| Self { root: root.fold() })
    }

    /// The identity map `z`.
    pub fn identity() -> Self {
        Self { root: Expr::Var }
    }

    pub fn from_expr(root: Expr) -> Self {
        Self { root: root.fold() }
    }

    #[inline]
    pub fn eval(&self, z: Complex) -> Complex {
        self.root.eval(z)
    }

    pub fn root(&self) -> &Expr {
        &self.root
    }

    pub fn is_identity(&self) -> bool {
        self.root == Expr::Var
    }
}

impl fmt::Display for MapExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl std::str::FromStr for MapExpr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

pub fn parse(source: &str) -> Result<MapExpr, ParseError> {
    MapExpr::parse(source)
}

pub fn evaluate(expr: &MapExpr, z: Complex) -> Complex {
    expr.eval(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn close(a: Complex, b: Complex, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn quadratic_with_parameter() {
        let f = parse("z^2 + (0 - 1*i)").unwrap();
        assert_eq!(f.eval(c(0.0, 0.0)), c(0.0, -1.0));
    }

    #[test]
    fn identity_parses_to_var() {
        let f = parse("z").unwrap();
        assert!(f.is_identity());
        assert_eq!(f.eval(c(3.0, 4.0)), c(3.0, 4.0));
    }

    #[test]
    fn rational_rotation_germ() {
        let f = parse("e^(2*pi*i*(3/7))*z + z^2").unwrap();
        let angle = 6.0 * PI / 7.0;
        let expected = c(angle.cos() + 1.0, angle.sin());
        let got = f.eval(c(1.0, 0.0));
        assert!(close(got, expected, 1e-14), "{got}");
        assert!(close(got, c(1.0 - 0.900_968_867_9, 0.433_883_739_1), 1e-9));
        // the multiplier is folded into a single constant
        match f.root() {
            Expr::Binary(BinOp::Add, lhs, _) => match lhs.as_ref() {
                Expr::Binary(BinOp::Mul, k, _) => assert!(matches!(k.as_ref(), Expr::Const(_))),
                other => panic!("unexpected {other:?}"),
            },
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn newton_root_is_fixed() {
        let f = parse("(2*z^3+1)/(3*z^2)").unwrap();
        assert_eq!(f.eval(c(1.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn flower_fixed_at_origin() {
        let f = parse("z + z^4").unwrap();
        assert_eq!(f.eval(c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn precedence_and_associativity() {
        let z = c(0.0, 0.0);
        let v = |s: &str| parse(s).unwrap().eval(z);
        assert_eq!(v("2^3^2"), c(512.0, 0.0));
        assert_eq!(v("-2^2"), c(-4.0, 0.0));
        assert_eq!(v("(-2)^2"), c(4.0, 0.0));
        assert_eq!(v("1 - 2 - 3"), c(-4.0, 0.0));
        assert_eq!(v("8 / 2 / 2"), c(2.0, 0.0));
        assert_eq!(v("2 + 3 * 4"), c(14.0, 0.0));
        assert_eq!(v("2^-1"), c(0.5, 0.0));
        assert_eq!(v("--3"), c(3.0, 0.0));
        assert!(close(v("exp(i*pi)"), c(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn non_integer_powers_use_principal_branch() {
        let f = parse("z^0.5").unwrap();
        assert!(close(f.eval(c(-4.0, 0.0)), c(0.0, 2.0), 1e-12));
        let g = parse("z^i").unwrap();
        // i^i = e^{-π/2}
        assert!(close(g.eval(c(0.0, 1.0)), c((-PI / 2.0).exp(), 0.0), 1e-14));
        let big = parse("z^65").unwrap();
        assert!(matches!(big.root(), Expr::Pow(..)));
        assert!(close(big.eval(c(1.0, 0.0)), c(1.0, 0.0), 1e-12));
    }

    #[test]
    fn poles_poison() {
        let f = parse("1/z").unwrap();
        let v = f.eval(c(0.0, 0.0));
        assert!(v.re.is_nan() && v.im.is_nan());
        let g = parse("z^(-2)").unwrap();
        assert!(g.eval(c(0.0, 0.0)).re.is_nan());
        assert!(parse("z^(0-0.5)").unwrap().eval(c(0.0, 0.0)).re.is_nan());
        assert_eq!(parse("z^0.5").unwrap().eval(c(0.0, 0.0)), c(0.0, 0.0));
        // constant pole folds to poison and still prints as parseable text
        let p = parse("z + 1/0").unwrap();
        assert!(p.eval(c(1.0, 0.0)).re.is_nan());
        assert!(parse(&p.to_string()).unwrap().eval(c(1.0, 0.0)).re.is_nan());
    }

    #[test]
    fn powi_matches_repeated_multiplication() {
        let b = c(0.3, -0.7);
        let mut acc = c(1.0, 0.0);
        for n in 0..=12 {
            assert!(close(powi(b, n), acc, 1e-15), "n = {n}");
            acc *= b;
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let err = parse("z+").unwrap_err();
        assert_eq!(err.position(), 2);
        let err = parse("2z").unwrap_err();
        assert_eq!(err.position(), 1);
        let err = parse("").unwrap_err();
        assert_eq!(err.position(), 0);
        let err = parse("(z").unwrap_err();
        assert_eq!(err.position(), 2);
        let err = parse("z $ 1").unwrap_err();
        assert_eq!(err.position(), 2);
        let err = parse("1e5").unwrap_err();
        assert_eq!(err.position(), 1);
    }

    #[test]
    fn unknown_identifier() {
        match parse("z + sin(z)") {
            Err(ParseError::UnknownIdentifier { name, position }) => {
                assert_eq!(name, "sin");
                assert_eq!(position, 4);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("exp z"),
            Err(ParseError::Syntax { position: 4, .. })
        ));
    }

    #[test]
    fn display_reparses() {
        for src in [
            "z",
            "-z^2 + 0.25",
            "e^(2*pi*i*(3/7))*z + z^2",
            "(2*z^3+1)/(3*z^2)",
            "z^(1+i) - exp(-z)/z^(-3)",
        ] {
            let f = parse(src).unwrap();
            let g = parse(&f.to_string()).unwrap();
            let z = c(0.4, -0.9);
            assert!(close(f.eval(z), g.eval(z), 1e-12), "{src} -> {f}");
        }
    }
}
