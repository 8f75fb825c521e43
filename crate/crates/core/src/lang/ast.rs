use std::collections::BTreeSet;

/// Variable names. Fresh names carry an ASCII `_pN` suffix (`x_p2` is `x''`).
pub type Var = String;

/// Natural-number constants.
pub type Nat = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
        }
    }

    /// Totalized natural arithmetic: monus, `a / 0 = 0`, `a % 0 = a`.
    /// Addition and multiplication saturate at `u64::MAX`.
    pub fn apply(self, a: Nat, b: Nat) -> Nat {
        match self {
            BinOp::Add => a.saturating_add(b),
            BinOp::Sub => a.saturating_sub(b),
            BinOp::Mul => a.saturating_mul(b),
            BinOp::Div => a.checked_div(b).unwrap_or(0),
            BinOp::Mod => a.checked_rem(b).unwrap_or(a),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Expr {
    Var(Var),
    Const(Nat),
    Bin(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<Var>) -> Self {
        Expr::Var(name.into())
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Self {
        Expr::Bin(op, Box::new(l), Box::new(r))
    }

    pub fn add(l: Expr, r: Expr) -> Self {
        Self::bin(BinOp::Add, l, r)
    }

    pub fn sub(l: Expr, r: Expr) -> Self {
        Self::bin(BinOp::Sub, l, r)
    }

    pub fn mul(l: Expr, r: Expr) -> Self {
        Self::bin(BinOp::Mul, l, r)
    }

    pub fn rem(l: Expr, r: Expr) -> Self {
        Self::bin(BinOp::Mod, l, r)
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Expr::Var(v) => {
                out.insert(v.clone());
            }
            Expr::Const(_) => {}
            Expr::Bin(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        match self {
            Expr::Var(w) => w == v,
            Expr::Const(_) => false,
            Expr::Bin(_, l, r) => l.mentions(v) || r.mentions(v),
        }
    }
}

impl From<Nat> for Expr {
    fn from(n: Nat) -> Self {
        Expr::Const(n)
    }
}

/// Boolean conditions. `≠`, `<`, `>` and `≥` are sugar over `=` and `≤`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoolExpr {
    Eq(Expr, Expr),
    Le(Expr, Expr),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn eq(l: Expr, r: Expr) -> Self {
        BoolExpr::Eq(l, r)
    }

    pub fn le(l: Expr, r: Expr) -> Self {
        BoolExpr::Le(l, r)
    }

    /// `l < r`, i.e. `¬(r ≤ l)`.
    pub fn lt(l: Expr, r: Expr) -> Self {
        BoolExpr::not(BoolExpr::Le(r, l))
    }

    pub fn not(b: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(b))
    }

    pub fn and(l: BoolExpr, r: BoolExpr) -> Self {
        BoolExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BoolExpr, r: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(l), Box::new(r))
    }

    /// `0 = 0`.
    pub fn tt() -> Self {
        BoolExpr::Eq(Expr::Const(0), Expr::Const(0))
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            BoolExpr::Eq(l, r) | BoolExpr::Le(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
            BoolExpr::Not(b) => b.collect_vars(out),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Assertion {
    Bool(BoolExpr),
    Not(Box<Assertion>),
    And(Box<Assertion>, Box<Assertion>),
    Or(Box<Assertion>, Box<Assertion>),
    Implies(Box<Assertion>, Box<Assertion>),
    Exists(Var, Box<Assertion>),
    Forall(Var, Box<Assertion>),
}

impl Assertion {
    /// `true`, encoded as `0 = 0`.
    pub fn tt() -> Self {
        Assertion::Bool(BoolExpr::tt())
    }

    /// `false`, encoded as `¬(0 = 0)`.
    pub fn ff() -> Self {
        Assertion::not(Self::tt())
    }

    pub fn eq(l: Expr, r: Expr) -> Self {
        Assertion::Bool(BoolExpr::Eq(l, r))
    }

    pub fn le(l: Expr, r: Expr) -> Self {
        Assertion::Bool(BoolExpr::Le(l, r))
    }

    pub fn lt(l: Expr, r: Expr) -> Self {
        Assertion::not(Assertion::le(r, l))
    }

    pub fn not(a: Assertion) -> Self {
        Assertion::Not(Box::new(a))
    }

    pub fn and(l: Assertion, r: Assertion) -> Self {
        Assertion::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Assertion, r: Assertion) -> Self {
        Assertion::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Assertion, r: Assertion) -> Self {
        Assertion::Implies(Box::new(l), Box::new(r))
    }

    pub fn exists(v: impl Into<Var>, body: Assertion) -> Self {
        Assertion::Exists(v.into(), Box::new(body))
    }

    pub fn forall(v: impl Into<Var>, body: Assertion) -> Self {
        Assertion::Forall(v.into(), Box::new(body))
    }

    /// Right-nested conjunction; `true` for an empty iterator.
    pub fn conj(parts: impl IntoIterator<Item = Assertion>) -> Self {
        let mut parts: Vec<_> = parts.into_iter().collect();
        let Some(mut acc) = parts.pop() else {
            return Self::tt();
        };
        while let Some(p) = parts.pop() {
            acc = Assertion::and(p, acc);
        }
        acc
    }

    /// Lifts the connectives of a boolean condition to assertion level, so that
    /// every `Bool` leaf is a single `=` or `≤` atom.
    pub fn from_bool(b: &BoolExpr) -> Self {
        match b {
            BoolExpr::Eq(..) | BoolExpr::Le(..) => Assertion::Bool(b.clone()),
            BoolExpr::Not(inner) => Assertion::not(Self::from_bool(inner)),
            BoolExpr::And(l, r) => Assertion::and(Self::from_bool(l), Self::from_bool(r)),
            BoolExpr::Or(l, r) => Assertion::or(Self::from_bool(l), Self::from_bool(r)),
        }
    }

    /// Canonical shape: boolean connectives inside `Bool` leaves are lifted.
    pub fn canon(&self) -> Self {
        match self {
            Assertion::Bool(b) => Self::from_bool(b),
            Assertion::Not(a) => Assertion::not(a.canon()),
            Assertion::And(l, r) => Assertion::and(l.canon(), r.canon()),
            Assertion::Or(l, r) => Assertion::or(l.canon(), r.canon()),
            Assertion::Implies(l, r) => Assertion::implies(l.canon(), r.canon()),
            Assertion::Exists(v, a) => Assertion::exists(v.clone(), a.canon()),
            Assertion::Forall(v, a) => Assertion::forall(v.clone(), a.canon()),
        }
    }

    /// Converts back to a boolean condition when the assertion is quantifier- and
    /// implication-free.
    pub fn to_bool(&self) -> Option<BoolExpr> {
        Some(match self {
            Assertion::Bool(b) => b.clone(),
            Assertion::Not(a) => BoolExpr::not(a.to_bool()?),
            Assertion::And(l, r) => BoolExpr::and(l.to_bool()?, r.to_bool()?),
            Assertion::Or(l, r) => BoolExpr::or(l.to_bool()?, r.to_bool()?),
            Assertion::Implies(..) | Assertion::Exists(..) | Assertion::Forall(..) => return None,
        })
    }

    pub fn free_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<Var>, out: &mut BTreeSet<Var>) {
        match self {
            Assertion::Bool(b) => {
                for v in b.vars() {
                    if !bound.contains(&v) {
                        out.insert(v);
                    }
                }
            }
            Assertion::Not(a) => a.collect_free(bound, out),
            Assertion::And(l, r) | Assertion::Or(l, r) | Assertion::Implies(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Assertion::Exists(v, a) | Assertion::Forall(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_all(&mut out);
        out
    }

    fn collect_all(&self, out: &mut BTreeSet<Var>) {
        match self {
            Assertion::Bool(b) => b.collect_vars(out),
            Assertion::Not(a) => a.collect_all(out),
            Assertion::And(l, r) | Assertion::Or(l, r) | Assertion::Implies(l, r) => {
                l.collect_all(out);
                r.collect_all(out);
            }
            Assertion::Exists(v, a) | Assertion::Forall(v, a) => {
                out.insert(v.clone());
                a.collect_all(out);
            }
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            Assertion::Bool(_) => false,
            Assertion::Not(a) => a.has_quantifier(),
            Assertion::And(l, r) | Assertion::Or(l, r) | Assertion::Implies(l, r) => {
                l.has_quantifier() || r.has_quantifier()
            }
            Assertion::Exists(..) | Assertion::Forall(..) => true,
        }
    }

    /// Structural equality modulo canonical shape and renaming of bound variables.
    pub fn alpha_eq(&self, other: &Assertion) -> bool {
        alpha_eq_in(&self.canon(), &other.canon(), &mut Vec::new())
    }
}

fn alpha_eq_in(a: &Assertion, b: &Assertion, env: &mut Vec<(Var, Var)>) -> bool {
    match (a, b) {
        (Assertion::Bool(x), Assertion::Bool(y)) => bool_alpha_eq(x, y, env),
        (Assertion::Not(x), Assertion::Not(y)) => alpha_eq_in(x, y, env),
        (Assertion::And(a1, a2), Assertion::And(b1, b2))
        | (Assertion::Or(a1, a2), Assertion::Or(b1, b2))
        | (Assertion::Implies(a1, a2), Assertion::Implies(b1, b2)) => {
            alpha_eq_in(a1, b1, env) && alpha_eq_in(a2, b2, env)
        }
        (Assertion::Exists(v, x), Assertion::Exists(w, y))
        | (Assertion::Forall(v, x), Assertion::Forall(w, y)) => {
            env.push((v.clone(), w.clone()));
            let r = alpha_eq_in(x, y, env);
            env.pop();
            r
        }
        _ => false,
    }
}

fn bool_alpha_eq(a: &BoolExpr, b: &BoolExpr, env: &[(Var, Var)]) -> bool {
    match (a, b) {
        (BoolExpr::Eq(a1, a2), BoolExpr::Eq(b1, b2)) | (BoolExpr::Le(a1, a2), BoolExpr::Le(b1, b2)) => {
            expr_alpha_eq(a1, b1, env) && expr_alpha_eq(a2, b2, env)
        }
        (BoolExpr::Not(x), BoolExpr::Not(y)) => bool_alpha_eq(x, y, env),
        (BoolExpr::And(a1, a2), BoolExpr::And(b1, b2)) | (BoolExpr::Or(a1, a2), BoolExpr::Or(b1, b2)) => {
            bool_alpha_eq(a1, b1, env) && bool_alpha_eq(a2, b2, env)
        }
        _ => false,
    }
}

fn expr_alpha_eq(a: &Expr, b: &Expr, env: &[(Var, Var)]) -> bool {
    match (a, b) {
        (Expr::Const(m), Expr::Const(n)) => m == n,
        (Expr::Var(v), Expr::Var(w)) => {
            // innermost binder wins
            for (bv, bw) in env.iter().rev() {
                if bv == v || bw == w {
                    return bv == v && bw == w;
                }
            }
            v == w
        }
        (Expr::Bin(o1, a1, a2), Expr::Bin(o2, b1, b2)) => {
            o1 == o2 && expr_alpha_eq(a1, b1, env) && expr_alpha_eq(a2, b2, env)
        }
        _ => false,
    }
}

/// Programs. `Empty` is ε; `Seq` never has an `Empty` child after normalization.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prog {
    Empty,
    Assign(Var, Expr),
    Seq(Box<Prog>, Box<Prog>),
    While {
        cond: BoolExpr,
        /// Optional loop-invariant annotation, consumed by the prover.
        invariant: Option<Assertion>,
        body: Box<Prog>,
    },
    Choice(Box<Prog>, Box<Prog>),
}

impl Prog {
    pub fn assign(v: impl Into<Var>, e: Expr) -> Self {
        Prog::Assign(v.into(), e)
    }

    /// Sequential composition with ε elided.
    pub fn seq(a: Prog, b: Prog) -> Self {
        match (a, b) {
            (Prog::Empty, b) => b,
            (a, Prog::Empty) => a,
            (a, b) => Prog::Seq(Box::new(a), Box::new(b)),
        }
    }

    pub fn choice(a: Prog, b: Prog) -> Self {
        Prog::Choice(Box::new(a), Box::new(b))
    }

    pub fn while_loop(cond: BoolExpr, body: Prog) -> Self {
        Prog::While { cond, invariant: None, body: Box::new(body) }
    }

    pub fn annotated_while(cond: BoolExpr, invariant: Assertion, body: Prog) -> Self {
        Prog::While { cond, invariant: Some(invariant), body: Box::new(body) }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, Prog::Empty)
    }

    /// Right-associates sequences and drops ε inside them, recursively.
    pub fn normalize(&self) -> Prog {
        match self {
            Prog::Empty | Prog::Assign(..) => self.clone(),
            Prog::Seq(a, b) => {
                let mut items = Vec::new();
                self.flatten_into(&mut items);
                let mut acc = Prog::Empty;
                for item in items.into_iter().rev() {
                    acc = Prog::seq(item, acc);
                }
                let _ = (a, b);
                acc
            }
            Prog::While { cond, invariant, body } => Prog::While {
                cond: cond.clone(),
                invariant: invariant.clone(),
                body: Box::new(body.normalize()),
            },
            Prog::Choice(a, b) => Prog::choice(a.normalize(), b.normalize()),
        }
    }

    fn flatten_into(&self, out: &mut Vec<Prog>) {
        match self {
            Prog::Seq(a, b) => {
                a.flatten_into(out);
                b.flatten_into(out);
            }
            Prog::Empty => {}
            other => out.push(other.normalize()),
        }
    }

    /// Sequence items of the normalized program, in order.
    pub fn items(&self) -> Vec<Prog> {
        let mut out = Vec::new();
        self.flatten_into(&mut out);
        out
    }

    /// Builds a normalized sequence from a list of commands.
    pub fn from_items(items: impl IntoIterator<Item = Prog>) -> Prog {
        let items: Vec<Prog> = items.into_iter().collect();
        let mut acc = Prog::Empty;
        for item in items.into_iter().rev() {
            acc = Prog::seq(item, acc);
        }
        acc.normalize()
    }

    /// Drops loop-invariant annotations, recursively.
    pub fn strip_annotations(&self) -> Prog {
        match self {
            Prog::Empty | Prog::Assign(..) => self.clone(),
            Prog::Seq(a, b) => Prog::Seq(Box::new(a.strip_annotations()), Box::new(b.strip_annotations())),
            Prog::While { cond, body, .. } => Prog::while_loop(cond.clone(), body.strip_annotations()),
            Prog::Choice(a, b) => Prog::choice(a.strip_annotations(), b.strip_annotations()),
        }
    }

    /// Equality after normalization, ignoring invariant annotations.
    pub fn same_program(&self, other: &Prog) -> bool {
        self.normalize().strip_annotations() == other.normalize().strip_annotations()
    }

    /// `Var(C)`: every variable occurring in the program (guards and assignments).
    /// Invariant annotations are not part of the program text semantically and
    /// are ignored.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Prog::Empty => {}
            Prog::Assign(v, e) => {
                out.insert(v.clone());
                e.collect_vars(out);
            }
            Prog::Seq(a, b) | Prog::Choice(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Prog::While { cond, body, .. } => {
                cond.collect_vars(out);
                body.collect_vars(out);
            }
        }
    }

    pub fn has_loop(&self) -> bool {
        match self {
            Prog::Empty | Prog::Assign(..) => false,
            Prog::Seq(a, b) | Prog::Choice(a, b) => a.has_loop() || b.has_loop(),
            Prog::While { .. } => true,
        }
    }
}

/// A partial reverse Hoare triple `⦗pre⦘ prog ⦗post⦘`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Triple {
    pub pre: Assertion,
    pub prog: Prog,
    pub post: Assertion,
}

impl Triple {
    pub fn new(pre: Assertion, prog: Prog, post: Assertion) -> Self {
        Triple { pre, prog, post }
    }

    /// Label equality used by the proof checkers: assertions up to α-renaming and
    /// canonical shape, programs up to normalization and annotations.
    pub fn same_label(&self, other: &Triple) -> bool {
        self.prog.same_program(&other.prog) && self.pre.alpha_eq(&other.pre) && self.post.alpha_eq(&other.post)
    }

    /// `FV(pre) ∪ Var(prog) ∪ FV(post)`, sorted.
    pub fn relevant_vars(&self) -> BTreeSet<Var> {
        let mut vs = self.pre.free_vars();
        vs.extend(self.prog.vars());
        vs.extend(self.post.free_vars());
        vs
    }
}
