use std::fmt;

use serde::{Deserialize, Serialize};

use super::TermError;

/// A universally quantified variable. At most three are ever in play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Var {
    X,
    Y,
    Z,
}

impl Var {
    pub const ALL: [Var; 3] = [Var::X, Var::Y, Var::Z];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Var> {
        Self::ALL.get(i).copied()
    }

    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
            Var::Z => 'z',
        }
    }

    pub fn from_name(c: char) -> Option<Var> {
        match c {
            'x' => Some(Var::X),
            'y' => Some(Var::Y),
            'z' => Some(Var::Z),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// Operation symbols. `P` and `Q` are ternary, `T` and `S` binary.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    P,
    Q,
    T,
    S,
}

impl Symbol {
    pub const ALL: [Symbol; 4] = [Symbol::P, Symbol::Q, Symbol::T, Symbol::S];

    pub fn arity(self) -> usize {
        match self {
            Symbol::P | Symbol::Q => 3,
            Symbol::T | Symbol::S => 2,
        }
    }

    pub fn name(self) -> char {
        match self {
            Symbol::P => 'p',
            Symbol::Q => 'q',
            Symbol::T => 't',
            Symbol::S => 's',
        }
    }

    pub fn from_name(c: char) -> Option<Symbol> {
        match c {
            'p' => Some(Symbol::P),
            'q' => Some(Symbol::Q),
            't' => Some(Symbol::T),
            's' => Some(Symbol::S),
            _ => None,
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())
    }
}

/// A set of operation symbols, iterated in the fixed order p, q, t, s.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(u8);

impl Signature {
    pub const EMPTY: Signature = Signature(0);

    pub fn of(symbols: &[Symbol]) -> Self {
        Signature(symbols.iter().fold(0, |acc, s| acc | s.bit()))
    }

    pub fn contains(self, symbol: Symbol) -> bool {
        self.0 & symbol.bit() != 0
    }

    pub fn insert(&mut self, symbol: Symbol) {
        self.0 |= symbol.bit();
    }

    pub fn union(self, other: Signature) -> Signature {
        Signature(self.0 | other.0)
    }

    pub fn is_subset(self, other: Signature) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Symbol> {
        Symbol::ALL.into_iter().filter(move |s| self.contains(*s))
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
enum Repr {
    Var(Var),
    // Unused trailing slots of a binary application hold `Var::X`.
    App(Symbol, [Var; 3]),
}

/// A term of height at most one: a bare variable, or a symbol applied to
/// variables.
///
/// Applications whose arguments are all the same variable never exist in
/// stored form; idempotence collapses them to that variable at construction.
/// The derived order puts variables first, then applications by symbol and
/// argument pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TermRef(Repr);

/// Borrowed view of a [`TermRef`] for matching.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TermKind<'a> {
    Var(Var),
    App(Symbol, &'a [Var]),
}

impl TermRef {
    pub fn var(v: Var) -> Self {
        TermRef(Repr::Var(v))
    }

    /// Builds `symbol(args)`, collapsing constant patterns by idempotence.
    pub fn app(symbol: Symbol, args: &[Var]) -> Result<Self, TermError> {
        if args.len() != symbol.arity() {
            return Err(TermError::ArityMismatch {
                symbol: symbol.name(),
                expected: symbol.arity(),
                found: args.len(),
            });
        }
        if args.iter().all(|a| *a == args[0]) {
            return Ok(TermRef::var(args[0]));
        }
        let mut slots = [Var::X; 3];
        slots[..args.len()].copy_from_slice(args);
        Ok(TermRef(Repr::App(symbol, slots)))
    }

    pub fn kind(&self) -> TermKind<'_> {
        match &self.0 {
            Repr::Var(v) => TermKind::Var(*v),
            Repr::App(s, args) => TermKind::App(*s, &args[..s.arity()]),
        }
    }

    pub fn symbol(&self) -> Option<Symbol> {
        match self.0 {
            Repr::Var(_) => None,
            Repr::App(s, _) => Some(s),
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self.0, Repr::Var(_))
    }

    /// Variables occurring in the term, in argument order (with repeats).
    pub fn vars(&self) -> Vec<Var> {
        match self.kind() {
            TermKind::Var(v) => vec![v],
            TermKind::App(_, args) => args.to_vec(),
        }
    }

    /// Rewrites every variable through `f` and reapplies idempotent collapse.
    pub fn map_vars(&self, f: impl Fn(Var) -> Var) -> TermRef {
        match self.kind() {
            TermKind::Var(v) => TermRef::var(f(v)),
            TermKind::App(s, args) => {
                let mapped: Vec<Var> = args.iter().map(|a| f(*a)).collect();
                TermRef::app(s, &mapped).expect("arity preserved")
            }
        }
    }
}

impl fmt::Display for TermRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            TermKind::Var(v) => write!(f, "{v}"),
            TermKind::App(s, args) => {
                write!(f, "{s}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An unordered pair of distinct terms, stored with `left < right`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Identity {
    left: TermRef,
    right: TermRef,
}

impl Identity {
    /// Returns `None` when both sides coincide.
    pub fn new(a: TermRef, b: TermRef) -> Option<Self> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Identity { left: a, right: b }),
            std::cmp::Ordering::Greater => Some(Identity { left: b, right: a }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn left(&self) -> TermRef {
        self.left
    }

    pub fn right(&self) -> TermRef {
        self.right
    }

    pub fn sides(&self) -> [TermRef; 2] {
        [self.left, self.right]
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.left, self.right)
    }
}
