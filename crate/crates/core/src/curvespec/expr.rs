//! Expressions in one parameter `t` and the tokenizer shared with the curve
//! file parser.

use std::fmt;

use crate::error::{Error, Location, Result};
use crate::jets::Jet;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Atan,
}

impl Func {
    pub const ALL: [Func; 7] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Atan,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Atan => "atan",
        }
    }

    fn lookup(name: &str) -> Option<Func> {
        if name == "ln" {
            return Some(Func::Log);
        }
        Func::ALL.into_iter().find(|f| f.name() == name)
    }

    fn apply(self, x: &Jet) -> Result<Jet> {
        match self {
            Func::Sin => Ok(x.sin()),
            Func::Cos => Ok(x.cos()),
            Func::Tan => x.tan(),
            Func::Exp => Ok(x.exp()),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Atan => Ok(x.atan()),
        }
    }
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
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Param,
    /// Named constant (`pi`, `e`).
    Const(&'static str, f64),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn eval_jet(&self, t: &Jet) -> Result<Jet> {
        let order = t.order();
        Ok(match self {
            Expr::Num(v) | Expr::Const(_, v) => Jet::constant(*v, order),
            Expr::Param => *t,
            Expr::Neg(e) => -e.eval_jet(t)?,
            Expr::Binary(op, a, b) => {
                let a = a.eval_jet(t)?;
                let b = b.eval_jet(t)?;
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => a.checked_div(&b).map_err(|_| {
                        Error::DomainError(format!("division by zero at t = {}", t.value()))
                    })?,
                    BinOp::Pow => a.pow(&b)?,
                }
            }
            Expr::Call(f, arg) => f.apply(&arg.eval_jet(t)?)?,
        })
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        Ok(self.eval_jet(&Jet::constant(t, 0))?.value())
    }

    pub fn depends_on_param(&self) -> bool {
        match self {
            Expr::Param => true,
            Expr::Num(_) | Expr::Const(..) => false,
            Expr::Neg(e) | Expr::Call(_, e) => e.depends_on_param(),
            Expr::Binary(_, a, b) => a.depends_on_param() || b.depends_on_param(),
        }
    }

    pub fn parse(source: &str) -> Result<Expr> {
        let tokens = tokenize(source)?;
        let mut parser = TokenStream::new(tokens);
        let expr = parser.expr()?;
        parser.expect_eof()?;
        Ok(expr)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => {
                write!(f, "(-{:?})", -v)
            }
            Expr::Num(v) => write!(f, "{v:?}"),
            Expr::Param => f.write_str("t"),
            Expr::Const(name, _) => f.write_str(name),
            Expr::Neg(e) => write!(f, "(-{e})"),
            Expr::Binary(op, a, b) => write!(f, "({a} {} {b})", op.symbol()),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum Tok {
    Number(f64),
    Ident(String),
    Str(String),
    Sym(char),
    Eof,
}

#[derive(Debug, Clone)]
pub(crate) struct Token {
    pub tok: Tok,
    pub loc: Location,
}

pub(crate) fn tokenize(source: &str) -> Result<Vec<Token>> {
    let mut tokens = Vec::new();
    let chars: Vec<char> = source.chars().collect();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    while i < chars.len() {
        let c = chars[i];
        let loc = Location { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value = text.parse::<f64>().map_err(|_| Error::ParseError {
                location: loc,
                message: format!("malformed number `{text}`"),
                expected: vec!["number".into()],
            })?;
            tokens.push(Token {
                tok: Tok::Number(value),
                loc,
            });
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            tokens.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                loc,
            });
        } else if c == '"' {
            i += 1;
            while i < chars.len() && chars[i] != '"' && chars[i] != '\n' {
                i += 1;
            }
            if i >= chars.len() || chars[i] != '"' {
                return Err(Error::ParseError {
                    location: loc,
                    message: "unterminated string".into(),
                    expected: vec!["\"".into()],
                });
            }
            i += 1;
            tokens.push(Token {
                tok: Tok::Str(chars[start + 1..i - 1].iter().collect()),
                loc,
            });
        } else if "+-*/^()[],;=".contains(c) {
            i += 1;
            tokens.push(Token {
                tok: Tok::Sym(c),
                loc,
            });
        } else {
            return Err(Error::ParseError {
                location: loc,
                message: format!("unexpected character `{c}`"),
                expected: vec!["expression".into()],
            });
        }
        col += i - start;
    }
    tokens.push(Token {
        tok: Tok::Eof,
        loc: Location { line, column: col },
    });
    Ok(tokens)
}

pub(crate) struct TokenStream {
    tokens: Vec<Token>,
    pos: usize,
}

const EXPR_START: &[&str] = &["number", "t", "pi", "e", "function", "(", "-"];

impl TokenStream {
    pub fn new(tokens: Vec<Token>) -> Self {
        TokenStream { tokens, pos: 0 }
    }

    pub fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    pub fn next(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error(&self, message: impl Into<String>, expected: &[&str]) -> Error {
        Error::ParseError {
            location: self.peek().loc,
            message: message.into(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn eat_sym(&mut self, c: char) -> bool {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.error(
                format!("expected `{c}`, found {}", describe(&self.peek().tok)),
                &[&c.to_string()],
            ))
        }
    }

    pub fn expect_eof(&mut self) -> Result<()> {
        if self.peek().tok == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(
                format!("unexpected {}", describe(&self.peek().tok)),
                &["end of input", "+", "-", "*", "/", "^"],
            ))
        }
    }

    /// expr := term (('+' | '-') term)*
    pub fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    /// term := unary (('*' | '/') unary)*
    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek().tok {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.unary()?;
            lhs = Expr::Binary(op, Box::new(lhs), Box::new(rhs));
        }
    }

    /// unary := ('-' | '+') unary | power
    fn unary(&mut self) -> Result<Expr> {
        if self.eat_sym('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat_sym('+') {
            return self.unary();
        }
        self.power()
    }

    /// power := primary ('^' unary)?   (right-associative, binds tighter than unary minus)
    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if self.eat_sym('^') {
            let exponent = self.unary()?;
            return Ok(Expr::Binary(BinOp::Pow, Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn primary(&mut self) -> Result<Expr> {
        let token = self.peek().clone();
        match token.tok {
            Tok::Number(v) => {
                self.next();
                Ok(Expr::Num(v))
            }
            Tok::Sym('(') => {
                self.next();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            Tok::Ident(ref name) => match name.as_str() {
                "t" => {
                    self.next();
                    Ok(Expr::Param)
                }
                "pi" => {
                    self.next();
                    Ok(Expr::Const("pi", std::f64::consts::PI))
                }
                "e" => {
                    self.next();
                    Ok(Expr::Const("e", std::f64::consts::E))
                }
                other => {
                    let Some(func) = Func::lookup(other) else {
                        return Err(self.error(
                            format!("unknown identifier `{other}`"),
                            EXPR_START,
                        ));
                    };
                    self.next();
                    self.expect_sym('(')?;
                    let arg = self.expr()?;
                    self.expect_sym(')')?;
                    Ok(Expr::Call(func, Box::new(arg)))
                }
            },
            ref other => Err(self.error(format!("unexpected {}", describe(other)), EXPR_START)),
        }
    }
}

pub(crate) fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Number(v) => format!("number {v}"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Str(s) => format!("string \"{s}\""),
        Tok::Sym(c) => format!("`{c}`"),
        Tok::Eof => "end of input".into(),
    }
}
