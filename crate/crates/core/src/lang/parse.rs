use std::collections::BTreeSet;

use super::ast::{Assertion, BinOp, BoolExpr, Expr, Prog, Triple, Var};
use super::subst::{fresh_var, rename_bound_apart};
use super::LangError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u64),
    Skip,
    While,
    Do,
    Invariant,
    If,
    Then,
    Else,
    Exists,
    Forall,
    True,
    False,
    Assign,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Eq,
    Ne,
    Le,
    Ge,
    Lt,
    Gt,
    Bang,
    AndAnd,
    OrOr,
    Arrow,
    Dot,
    Comma,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Num(n) => format!("number `{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    fn width(&self) -> usize {
        match self {
            Tok::Ident(s) => s.chars().count(),
            Tok::Num(n) => n.to_string().len(),
            other => other.text().chars().count(),
        }
    }

    fn text(&self) -> &'static str {
        match self {
            Tok::Skip => "skip",
            Tok::While => "while",
            Tok::Do => "do",
            Tok::Invariant => "invariant",
            Tok::If => "if",
            Tok::Then => "then",
            Tok::Else => "else",
            Tok::Exists => "exists",
            Tok::Forall => "forall",
            Tok::True => "true",
            Tok::False => "false",
            Tok::Assign => ":=",
            Tok::Semi => ";",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Percent => "%",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrace => "{",
            Tok::RBrace => "}",
            Tok::Eq => "=",
            Tok::Ne => "!=",
            Tok::Le => "<=",
            Tok::Ge => ">=",
            Tok::Lt => "<",
            Tok::Gt => ">",
            Tok::Bang => "!",
            Tok::AndAnd => "&&",
            Tok::OrOr => "||",
            Tok::Arrow => "->",
            Tok::Dot => ".",
            Tok::Comma => ",",
            Tok::Ident(_) | Tok::Num(_) | Tok::Eof => "",
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

fn keyword(word: &str) -> Option<Tok> {
    Some(match word {
        "skip" => Tok::Skip,
        "while" => Tok::While,
        "do" => Tok::Do,
        "invariant" => Tok::Invariant,
        "if" => Tok::If,
        "then" => Tok::Then,
        "else" => Tok::Else,
        "exists" => Tok::Exists,
        "forall" => Tok::Forall,
        "true" => Tok::True,
        "false" => Tok::False,
        _ => return None,
    })
}

fn lex(text: &str, line0: usize) -> Result<Vec<Spanned>, LangError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, line0, 1usize);
    let err = |line, col, msg: String| LangError::Syntax { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let mut adv = 1;
        let tok = match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
                continue;
            }
            c if c.is_whitespace() => {
                i += 1;
                col += 1;
                continue;
            }
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
                continue;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i + adv < chars.len() && chars[i + adv].is_ascii_digit() {
                    adv += 1;
                }
                let s: String = chars[start..start + adv].iter().collect();
                let n = s.parse().map_err(|_| err(tl, tc, format!("numeral `{s}` out of range")))?;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i + adv < chars.len() && (chars[i + adv].is_ascii_alphanumeric() || chars[i + adv] == '_') {
                    adv += 1;
                }
                let mut word: String = chars[start..start + adv].iter().collect();
                let mut primes = 0;
                while i + adv < chars.len() && matches!(chars[i + adv], '\'' | '′') {
                    primes += 1;
                    adv += 1;
                }
                if primes > 0 {
                    word = format!("{word}_p{primes}");
                    Tok::Ident(word)
                } else {
                    keyword(&word).unwrap_or(Tok::Ident(word))
                }
            }
            _ => {
                let next = chars.get(i + 1).copied();
                let mut two = |t| {
                    adv = 2;
                    t
                };
                match (c, next) {
                    (':', Some('=')) => two(Tok::Assign),
                    ('!', Some('=')) => two(Tok::Ne),
                    ('<', Some('=')) => two(Tok::Le),
                    ('>', Some('=')) => two(Tok::Ge),
                    ('&', Some('&')) => two(Tok::AndAnd),
                    ('|', Some('|')) => two(Tok::OrOr),
                    ('-', Some('>')) => two(Tok::Arrow),
                    (';', _) => Tok::Semi,
                    ('+', _) => Tok::Plus,
                    ('-', _) | ('−', _) => Tok::Minus,
                    ('*', _) => Tok::Star,
                    ('/', _) => Tok::Slash,
                    ('%', _) => Tok::Percent,
                    ('(', _) => Tok::LParen,
                    (')', _) => Tok::RParen,
                    ('{', _) => Tok::LBrace,
                    ('}', _) => Tok::RBrace,
                    ('=', _) => Tok::Eq,
                    ('<', _) => Tok::Lt,
                    ('>', _) => Tok::Gt,
                    ('!', _) | ('¬', _) => Tok::Bang,
                    ('.', _) => Tok::Dot,
                    (',', _) => Tok::Comma,
                    ('≤', _) => Tok::Le,
                    ('≥', _) => Tok::Ge,
                    ('≠', _) => Tok::Ne,
                    ('∧', _) => Tok::AndAnd,
                    ('∨', _) => Tok::OrOr,
                    ('→', _) => Tok::Arrow,
                    ('∃', _) => Tok::Exists,
                    ('∀', _) => Tok::Forall,
                    ('⊤', _) => Tok::True,
                    ('⊥', _) => Tok::False,
                    ('ε', _) => Tok::Skip,
                    _ => return Err(err(tl, tc, format!("unexpected character `{c}`"))),
                }
            }
        };
        out.push(Spanned { tok, line: tl, col: tc });
        i += adv;
        col += adv;
    }
    // end of input is reported just past the last token
    let (line, col) = out.last().map(|t: &Spanned| (t.line, t.col + t.tok.width())).unwrap_or((line0, 1));
    out.push(Spanned { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    /// Every identifier in the source, so generated names never clash.
    idents: BTreeSet<Var>,
}

type PResult<T> = Result<T, LangError>;

impl Parser {
    fn new(text: &str, line0: usize) -> PResult<Self> {
        let toks = lex(text, line0)?;
        let idents = toks
            .iter()
            .filter_map(|t| match &t.tok {
                Tok::Ident(s) => Some(s.clone()),
                _ => None,
            })
            .collect();
        Ok(Parser { toks, pos: 0, idents })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let idx = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[idx].tok
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error(&self, msg: impl Into<String>) -> LangError {
        let s = &self.toks[self.pos];
        LangError::Syntax { line: s.line, col: s.col, msg: msg.into() }
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(format!("expected {}, found {}", t.describe(), self.peek().describe())))
        }
    }

    fn expect_eof(&self) -> PResult<()> {
        if *self.peek() == Tok::Eof {
            Ok(())
        } else {
            Err(self.error(format!("unexpected {}", self.peek().describe())))
        }
    }

    fn ident(&mut self) -> PResult<Var> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            other => Err(self.error(format!("expected identifier, found {}", other.describe()))),
        }
    }

    // ---- programs ----

    fn program(&mut self) -> PResult<Prog> {
        let mut items = vec![self.choice()?];
        while self.eat(&Tok::Semi) {
            if matches!(self.peek(), Tok::Eof | Tok::RParen | Tok::RBrace) {
                break;
            }
            items.push(self.choice()?);
        }
        Ok(Prog::from_items(items))
    }

    fn choice(&mut self) -> PResult<Prog> {
        let mut acc = self.stmt()?;
        while self.eat(&Tok::Plus) {
            let rhs = self.stmt()?;
            acc = Prog::choice(acc, rhs);
        }
        Ok(acc)
    }

    fn stmt(&mut self) -> PResult<Prog> {
        match self.peek().clone() {
            Tok::Skip => {
                self.bump();
                Ok(Prog::Empty)
            }
            Tok::Ident(x) => {
                self.bump();
                self.expect(&Tok::Assign)?;
                let e = self.expr()?;
                Ok(Prog::Assign(x, e))
            }
            Tok::LParen => {
                self.bump();
                let p = self.program()?;
                self.expect(&Tok::RParen)?;
                Ok(p)
            }
            Tok::LBrace => self.block(),
            Tok::While => {
                self.bump();
                let cond = self.guard()?;
                let invariant = if self.eat(&Tok::Invariant) { Some(self.assertion()?) } else { None };
                self.eat(&Tok::Do);
                let body = self.stmt()?;
                Ok(Prog::While { cond, invariant, body: Box::new(body) })
            }
            Tok::If => {
                self.bump();
                let cond = self.guard()?;
                self.expect(&Tok::Then)?;
                let s0 = self.stmt()?;
                self.expect(&Tok::Else)?;
                let s1 = self.stmt()?;
                Ok(self.desugar_if(cond, s0, s1))
            }
            other => Err(self.error(format!("expected a statement, found {}", other.describe()))),
        }
    }

    fn block(&mut self) -> PResult<Prog> {
        self.expect(&Tok::LBrace)?;
        if self.eat(&Tok::RBrace) {
            return Ok(Prog::Empty);
        }
        let p = self.program()?;
        self.expect(&Tok::RBrace)?;
        Ok(p)
    }

    /// `t:=0; while (B && t=0) {S0; t:=1}; while (!B && t=0) {S1; t:=1}`.
    fn desugar_if(&mut self, b: BoolExpr, s0: Prog, s1: Prog) -> Prog {
        let t = fresh_var(&self.idents, "t");
        self.idents.insert(t.clone());
        let tv = || Expr::Var(t.clone());
        let t_zero = BoolExpr::Eq(tv(), Expr::Const(0));
        let set = |n| Prog::Assign(t.clone(), Expr::Const(n));
        Prog::from_items([
            set(0),
            Prog::while_loop(BoolExpr::and(b.clone(), t_zero.clone()), Prog::seq(s0, set(1))),
            Prog::while_loop(BoolExpr::and(BoolExpr::not(b), t_zero), Prog::seq(s1, set(1))),
        ])
    }

    fn guard(&mut self) -> PResult<BoolExpr> {
        let at = self.pos;
        let a = self.assertion()?;
        a.to_bool().ok_or_else(|| {
            let s = &self.toks[at];
            LangError::Syntax {
                line: s.line,
                col: s.col,
                msg: "loop guard must be a quantifier-free boolean condition".into(),
            }
        })
    }

    // ---- expressions ----

    /// True when the tokens after a `+` begin a statement, so the `+` is a
    /// choice and not an addition.
    fn statement_follows_plus(&self) -> bool {
        match self.peek_at(1) {
            Tok::Skip | Tok::While | Tok::If | Tok::LBrace => true,
            Tok::Ident(_) => *self.peek_at(2) == Tok::Assign,
            Tok::LParen => {
                let mut depth = 0usize;
                let mut k = 1;
                loop {
                    match self.peek_at(k) {
                        Tok::LParen => depth += 1,
                        Tok::RParen => {
                            depth -= 1;
                            if depth == 0 {
                                return false;
                            }
                        }
                        Tok::Assign | Tok::Skip | Tok::While | Tok::If | Tok::Semi | Tok::LBrace => return true,
                        Tok::Eof => return false,
                        _ => {}
                    }
                    k += 1;
                }
            }
            _ => false,
        }
    }

    fn expr(&mut self) -> PResult<Expr> {
        let mut acc = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus if !self.statement_follows_plus() => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.term()?;
            acc = Expr::bin(op, acc, rhs);
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut acc = self.factor()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Percent => BinOp::Mod,
                _ => return Ok(acc),
            };
            self.bump();
            let rhs = self.factor()?;
            acc = Expr::bin(op, acc, rhs);
        }
    }

    fn factor(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Const(n))
            }
            Tok::Ident(x) => {
                if *self.peek_at(1) == Tok::LParen {
                    let s = &self.toks[self.pos];
                    return Err(LangError::UnknownFunction { name: x, line: s.line, col: s.col });
                }
                self.bump();
                Ok(Expr::Var(x))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            other => Err(self.error(format!("expected an expression, found {}", other.describe()))),
        }
    }

    // ---- assertions ----

    fn assertion(&mut self) -> PResult<Assertion> {
        if matches!(self.peek(), Tok::Exists | Tok::Forall) {
            return self.quantified();
        }
        let lhs = self.disj()?;
        if self.eat(&Tok::Arrow) {
            let rhs = self.assertion()?;
            return Ok(Assertion::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn quantified(&mut self) -> PResult<Assertion> {
        let is_exists = self.bump() == Tok::Exists;
        let mut vars = vec![self.ident()?];
        loop {
            self.eat(&Tok::Comma);
            match self.peek() {
                Tok::Ident(_) => vars.push(self.ident()?),
                _ => break,
            }
        }
        self.expect(&Tok::Dot)?;
        let mut body = self.assertion()?;
        for v in vars.into_iter().rev() {
            body = if is_exists { Assertion::exists(v, body) } else { Assertion::forall(v, body) };
        }
        Ok(body)
    }

    fn disj(&mut self) -> PResult<Assertion> {
        let mut acc = self.conj()?;
        while self.eat(&Tok::OrOr) {
            let rhs = self.conj_or_quant()?;
            acc = Assertion::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> PResult<Assertion> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::AndAnd) {
            let rhs = self.unary_or_quant()?;
            acc = Assertion::and(acc, rhs);
        }
        Ok(acc)
    }

    // A trailing quantifier extends as far right as possible.
    fn conj_or_quant(&mut self) -> PResult<Assertion> {
        if matches!(self.peek(), Tok::Exists | Tok::Forall) {
            self.quantified()
        } else {
            self.conj()
        }
    }

    fn unary_or_quant(&mut self) -> PResult<Assertion> {
        if matches!(self.peek(), Tok::Exists | Tok::Forall) {
            self.quantified()
        } else {
            self.unary()
        }
    }

    fn unary(&mut self) -> PResult<Assertion> {
        if self.eat(&Tok::Bang) {
            let inner = self.unary_or_quant()?;
            return Ok(Assertion::not(inner));
        }
        self.atom()
    }

    fn atom(&mut self) -> PResult<Assertion> {
        match self.peek() {
            Tok::True => {
                self.bump();
                return Ok(Assertion::tt());
            }
            Tok::False => {
                self.bump();
                return Ok(Assertion::ff());
            }
            Tok::LParen => {
                let save = self.pos;
                match self.comparison() {
                    Ok(a) => return Ok(a),
                    Err(first) => {
                        let reached = self.pos;
                        self.pos = save;
                        self.bump();
                        match self.assertion().and_then(|a| self.expect(&Tok::RParen).map(|_| a)) {
                            Ok(a) => return Ok(a),
                            Err(second) => {
                                return Err(if reached > self.pos { first } else { second });
                            }
                        }
                    }
                }
            }
            _ => {}
        }
        self.comparison()
    }

    fn comparison(&mut self) -> PResult<Assertion> {
        let l = self.expr()?;
        let op = self.bump();
        let r = self.expr().map_err(|e| e)?;
        Ok(match op {
            Tok::Eq => Assertion::eq(l, r),
            Tok::Ne => Assertion::not(Assertion::eq(l, r)),
            Tok::Le => Assertion::le(l, r),
            Tok::Ge => Assertion::le(r, l),
            Tok::Lt => Assertion::not(Assertion::le(r, l)),
            Tok::Gt => Assertion::not(Assertion::le(l, r)),
            other => {
                self.pos -= 1;
                let _ = r;
                return Err(self.error(format!("expected a comparison operator, found {}", other.describe())));
            }
        })
    }
}

fn rename_invariants(p: &Prog, extra: &BTreeSet<Var>) -> Prog {
    match p {
        Prog::Empty | Prog::Assign(..) => p.clone(),
        Prog::Seq(a, b) => Prog::Seq(Box::new(rename_invariants(a, extra)), Box::new(rename_invariants(b, extra))),
        Prog::Choice(a, b) => Prog::choice(rename_invariants(a, extra), rename_invariants(b, extra)),
        Prog::While { cond, invariant, body } => Prog::While {
            cond: cond.clone(),
            invariant: invariant.as_ref().map(|a| rename_bound_apart(a, extra)),
            body: Box::new(rename_invariants(body, extra)),
        },
    }
}

fn program_at(text: &str, line0: usize) -> PResult<Prog> {
    let mut p = Parser::new(text, line0)?;
    if p.peek() == &Tok::Eof {
        return Err(p.error("empty program (write `skip` for the empty program)"));
    }
    let prog = p.program()?;
    p.expect_eof()?;
    let vars = prog.vars();
    Ok(rename_invariants(&prog, &vars).normalize())
}

fn assertion_at(text: &str, line0: usize) -> PResult<Assertion> {
    let mut p = Parser::new(text, line0)?;
    let a = p.assertion()?;
    p.expect_eof()?;
    Ok(rename_bound_apart(&a, &BTreeSet::new()))
}

/// Parses a program; the result is normalized and `if` is desugared.
pub fn parse_program(text: &str) -> Result<Prog, LangError> {
    program_at(text, 1)
}

/// Parses an assertion; bound variables are renamed apart.
pub fn parse_assertion(text: &str) -> Result<Assertion, LangError> {
    assertion_at(text, 1)
}

pub fn parse_expr(text: &str) -> Result<Expr, LangError> {
    let mut p = Parser::new(text, 1)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// Parses a quantifier-free boolean condition.
pub fn parse_bool(text: &str) -> Result<BoolExpr, LangError> {
    let mut p = Parser::new(text, 1)?;
    let b = p.guard()?;
    p.expect_eof()?;
    Ok(b)
}

/// Parses a triple file: three sections introduced by `pre:`, `prog:` and
/// `post:` at the start of a line, in any order. `#` starts a comment.
pub fn parse_triple(text: &str) -> Result<Triple, LangError> {
    let mut sections: [Option<(usize, String)>; 3] = [None, None, None];
    let mut current: Option<usize> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim_start();
        let header = ["pre:", "prog:", "post:"].iter().position(|h| trimmed.starts_with(h));
        if let Some(k) = header {
            if sections[k].is_some() {
                return Err(LangError::Syntax { line, col: 1, msg: "duplicate section".into() });
            }
            let rest = &trimmed[["pre:", "prog:", "post:"][k].len()..];
            sections[k] = Some((line, format!("{rest}\n")));
            current = Some(k);
            continue;
        }
        match current {
            Some(k) => {
                let body = &mut sections[k].as_mut().expect("current section exists").1;
                body.push_str(raw);
                body.push('\n');
            }
            None => {
                let content = raw.split('#').next().unwrap_or("").trim();
                if !content.is_empty() {
                    return Err(LangError::Syntax {
                        line,
                        col: 1,
                        msg: "text before the first `pre:`/`prog:`/`post:` section".into(),
                    });
                }
            }
        }
    }
    let take = |k: usize, name: &str| {
        sections[k].clone().ok_or_else(|| LangError::Syntax { line: 1, col: 1, msg: format!("missing `{name}:` section") })
    };
    let (pl, pre) = take(0, "pre")?;
    let (cl, prog) = take(1, "prog")?;
    let (ql, post) = take(2, "post")?;
    Ok(Triple::new(assertion_at(&pre, pl)?, program_at(&prog, cl)?, assertion_at(&post, ql)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn loop_body_example() {
        let p = parse_program("x := x + i; i := i + 1").unwrap();
        let x_plus_i = Expr::add(Expr::var("x"), Expr::var("i"));
        let i_plus_1 = Expr::add(Expr::var("i"), Expr::Const(1));
        assert_eq!(p, Prog::seq(Prog::assign("x", x_plus_i), Prog::assign("i", i_plus_1)));
        assert_eq!(parse_program("skip").unwrap(), Prog::Empty);
        assert_eq!(parse_program("skip; skip; x := 1; skip").unwrap(), Prog::assign("x", Expr::Const(1)));
    }

    #[test]
    fn if_desugars_with_fresh_flag() {
        let p = parse_program("if x=0 then x:=1 else x:=2").unwrap();
        let expected = parse_program(
            "t:=0; while (x=0 && t=0) {x:=1; t:=1}; while (!(x=0) && t=0) {x:=2; t:=1}",
        )
        .unwrap();
        assert_eq!(p, expected);
        let p = parse_program("if t=0 then t:=1 else skip").unwrap();
        assert!(p.vars().contains("t_p1"));
    }

    #[test]
    fn choice_and_addition() {
        let p = parse_program("x := 1 + x := 2").unwrap();
        assert!(matches!(p, Prog::Choice(..)));
        let p = parse_program("x := 1 + y").unwrap();
        assert!(matches!(p, Prog::Assign(..)));
        let p = parse_program("(x := 1 + skip)").unwrap();
        assert_eq!(p, Prog::choice(Prog::assign("x", Expr::Const(1)), Prog::Empty));
        let p = parse_program("x := 1 + (y := 2; z := 3)").unwrap();
        assert!(matches!(p, Prog::Choice(..)));
        let p = parse_program("x := 1 + (y * 2)").unwrap();
        assert!(matches!(p, Prog::Assign(..)));
    }

    #[test]
    fn while_forms() {
        let a = parse_program("while i < 5 do { x := x + i; i := i + 1 }").unwrap();
        let b = parse_program("while (i<5) {x:=x+i; i:=i+1}").unwrap();
        assert_eq!(a, b);
        let c = parse_program("while i<5 invariant true do {x:=x+i; i:=i+1}").unwrap();
        assert!(a.same_program(&c));
        assert_ne!(a, c);
        assert_eq!(a.vars().into_iter().collect::<Vec<_>>(), vec!["i", "x"]);
    }

    #[test]
    fn assertion_forms() {
        let a = parse_assertion("x > 0 && i >= 5").unwrap();
        let b = parse_assertion("!(x <= 0) ∧ 5 ≤ i").unwrap();
        assert_eq!(a, b);
        let a = parse_assertion("(x + 1) = y").unwrap();
        assert_eq!(a, Assertion::eq(Expr::add(Expr::var("x"), Expr::Const(1)), Expr::var("y")));
        let a = parse_assertion("(x = 1 && y = 2) || z = 3").unwrap();
        assert!(matches!(a, Assertion::Or(..)));
        let a = parse_assertion("a = 1 -> b = 1 -> c = 1").unwrap();
        let Assertion::Implies(_, r) = a else { panic!() };
        assert!(matches!(*r, Assertion::Implies(..)));
        assert_eq!(parse_assertion("x' = x′′").unwrap(), Assertion::eq(Expr::var("x_p1"), Expr::var("x_p2")));
        assert!(parse_assertion("true").unwrap().free_vars().is_empty());
        assert_eq!(parse_assertion("exists x. x = y").unwrap().free_vars().into_iter().collect::<Vec<_>>(), vec!["y"]);
    }

    #[test]
    fn bound_variables_renamed_apart() {
        let a = parse_assertion("x = 1 && exists x. x = 2").unwrap();
        assert_eq!(a, parse_assertion("x = 1 && exists x'. x' = 2").unwrap());
        let a = parse_assertion("(exists y. y = 1) && (exists y. y = 2)").unwrap();
        assert_eq!(a.all_vars().len(), 2);
    }

    #[test]
    fn errors_carry_positions() {
        match parse_program("x := 1;\n  y := ") {
            Err(LangError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 7)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_assertion("f(x) = 1"), Err(LangError::UnknownFunction { .. })));
        assert!(parse_program("").is_err());
        assert!(parse_program("while (exists y. y = x) do skip").is_err());
    }

    #[test]
    fn triple_file() {
        let t = parse_triple("# demo\npre: true\nprog:\n  while i < 5 do {\n    x := x + i; i := i + 1\n  }\npost: x > 0 && i >= 5\n").unwrap();
        assert!(t.pre.alpha_eq(&Assertion::tt()));
        assert!(t.prog.has_loop());
        match parse_triple("pre: true\nprog: x := \npost: true") {
            Err(LangError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }
}
