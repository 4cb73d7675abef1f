//! Arithmetic expressions in the boundary coordinates, used for densities given as text.
//!
//! Grammar: numbers, `+ - * / ^` (right-associative power), unary minus, parentheses,
//! variables `x1 x2 x3` (aliases `x y z`) and `t` (curve parameter), constants `pi` and `e`,
//! and the functions `sin cos tan exp ln log sqrt abs`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Node {
    Number(f64),
    Var(usize),
    Neg(Box<Node>),
    Binary(char, Box<Node>, Box<Node>),
    Call(Func, Box<Node>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Ln,
    Sqrt,
    Abs,
}

impl Func {
    fn apply(self, x: f64) -> f64 {
        match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Ln => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Abs => x.abs(),
        }
    }
}

/// Parsed expression; variable slots are `x1, x2, x3, t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    root: Node,
    source: String,
}

/// Slot of the curve parameter `t` in the variable array.
pub const PARAM_SLOT: usize = 3;

impl Expr {
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let root = p.sum()?;
        if p.pos != p.tokens.len() {
            return Err(Error::Parse(format!(
                "unexpected `{}` in `{text}`",
                p.tokens[p.pos]
            )));
        }
        Ok(Expr {
            root,
            source: text.to_string(),
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// Value with `vars = [x1, x2, x3, t]` (unused slots may hold anything).
    pub fn eval(&self, vars: &[f64; 4]) -> f64 {
        eval(&self.root, vars)
    }

    /// Highest coordinate slot referenced (`0` for `x1`), `None` if no coordinate is used.
    pub fn max_coordinate(&self) -> Option<usize> {
        fn walk(n: &Node, best: &mut Option<usize>) {
            match n {
                Node::Var(i) if *i < PARAM_SLOT => *best = Some(best.map_or(*i, |b| b.max(*i))),
                Node::Neg(a) | Node::Call(_, a) => walk(a, best),
                Node::Binary(_, a, b) => {
                    walk(a, best);
                    walk(b, best);
                }
                _ => {}
            }
        }
        let mut best = None;
        walk(&self.root, &mut best);
        best
    }

    pub fn uses_parameter(&self) -> bool {
        fn walk(n: &Node) -> bool {
            match n {
                Node::Var(i) => *i == PARAM_SLOT,
                Node::Neg(a) | Node::Call(_, a) => walk(a),
                Node::Binary(_, a, b) => walk(a) || walk(b),
                Node::Number(_) => false,
            }
        }
        walk(&self.root)
    }
}

fn eval(n: &Node, v: &[f64; 4]) -> f64 {
    match n {
        Node::Number(x) => *x,
        Node::Var(i) => v[*i],
        Node::Neg(a) => -eval(a, v),
        Node::Call(f, a) => f.apply(eval(a, v)),
        Node::Binary(op, a, b) => {
            let (x, y) = (eval(a, v), eval(b, v));
            match op {
                '+' => x + y,
                '-' => x - y,
                '*' => x * y,
                '/' => x / y,
                _ => x.powf(y),
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(f64),
    Ident(String),
    Op(char),
}

impl std::fmt::Display for Token {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Token::Number(x) => write!(f, "{x}"),
            Token::Ident(s) => write!(f, "{s}"),
            Token::Op(c) => write!(f, "{c}"),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
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
            let s: String = chars[start..i].iter().collect();
            let v = s
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
            out.push(Token::Number(v));
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^(),".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek_op() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(Error::Parse(format!("expected `{c}`")))
        }
    }

    fn sum(&mut self) -> Result<Node> {
        let mut left = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let right = self.product()?;
            left = Node::Binary(op, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn product(&mut self) -> Result<Node> {
        let mut left = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let right = self.unary()?;
            left = Node::Binary(op, Box::new(left), Box::new(right));
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<Node> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(Node::Neg(Box::new(self.unary()?)))
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exponent = self.unary()?;
            return Ok(Node::Binary('^', Box::new(base), Box::new(exponent)));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Node> {
        let token = self
            .tokens
            .get(self.pos)
            .cloned()
            .ok_or_else(|| Error::Parse("unexpected end of expression".into()))?;
        self.pos += 1;
        match token {
            Token::Number(v) => Ok(Node::Number(v)),
            Token::Op('(') => {
                let inner = self.sum()?;
                self.expect(')')?;
                Ok(inner)
            }
            Token::Ident(name) => {
                if self.peek_op() == Some('(') {
                    let f = match name.as_str() {
                        "sin" => Func::Sin,
                        "cos" => Func::Cos,
                        "tan" => Func::Tan,
                        "exp" => Func::Exp,
                        "ln" | "log" => Func::Ln,
                        "sqrt" => Func::Sqrt,
                        "abs" => Func::Abs,
                        _ => return Err(Error::Parse(format!("unknown function `{name}`"))),
                    };
                    self.pos += 1;
                    let arg = self.sum()?;
                    self.expect(')')?;
                    return Ok(Node::Call(f, Box::new(arg)));
                }
                match name.as_str() {
                    "x1" | "x" => Ok(Node::Var(0)),
                    "x2" | "y" => Ok(Node::Var(1)),
                    "x3" | "z" => Ok(Node::Var(2)),
                    "t" => Ok(Node::Var(PARAM_SLOT)),
                    "pi" => Ok(Node::Number(std::f64::consts::PI)),
                    "e" => Ok(Node::Number(std::f64::consts::E)),
                    _ => Err(Error::Parse(format!("unknown variable `{name}`"))),
                }
            }
            Token::Op(c) => Err(Error::Parse(format!("unexpected `{c}`"))),
        }
    }
}
