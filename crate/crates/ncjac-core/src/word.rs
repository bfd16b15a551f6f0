//! Words (monomials) of the free algebra and the variable context.
//!
//! A `Word` is a finite sequence of variable indices; the empty word is the
//! multiplicative identity. Words are ordered by degree first, then
//! lexicographically — this graded order is the deterministic pivot order
//! used throughout the elimination code.

use std::cmp::Ordering;
use std::fmt;

use crate::error::Error;

/// The ambient free algebra: number of variables and their display names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Context {
    d: usize,
    names: Vec<String>,
}

impl Context {
    /// Build a context from variable names; names must be distinct, nonempty
    /// identifiers (letter or `_` first, then letters/digits/`_`).
    pub fn new(names: &[&str]) -> Result<Context, Error> {
        if names.is_empty() {
            return Err(Error::BadContext("need at least one variable".into()));
        }
        for n in names {
            if !is_ident(n) {
                return Err(Error::BadContext(format!("invalid identifier `{n}`")));
            }
        }
        for i in 0..names.len() {
            for j in (i + 1)..names.len() {
                if names[i] == names[j] {
                    return Err(Error::BadContext(format!("duplicate variable `{}`", names[i])));
                }
            }
        }
        Ok(Context { d: names.len(), names: names.iter().map(|s| s.to_string()).collect() })
    }

    /// The standard two-variable context `x, y`.
    pub fn xy() -> Context {
        Context::new(&["x", "y"]).unwrap()
    }

    /// Standard contexts with 1..=4 variables named `x, y, z, w`.
    pub fn standard(d: usize) -> Result<Context, Error> {
        let all = ["x", "y", "z", "w"];
        if d == 0 || d > all.len() {
            return Err(Error::BadContext(format!("standard context supports 1..=4 variables, got {d}")));
        }
        Context::new(&all[..d])
    }

    /// Number of variables.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Display name of variable `i`.
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    /// Index of a variable by name, if present.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A monomial of the free algebra: a sequence of variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    /// The empty word (multiplicative identity).
    pub fn one() -> Word {
        Word(Vec::new())
    }

    /// Single-letter word for variable `i`.
    pub fn var(i: usize) -> Word {
        Word(vec![i as u8])
    }

    /// Build from a slice of variable indices.
    pub fn from_letters(letters: &[u8]) -> Word {
        Word(letters.to_vec())
    }

    /// Degree (length).
    pub fn degree(&self) -> usize {
        self.0.len()
    }

    /// Concatenation (noncommutative product of monomials).
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Rotate left by `k`: `w[k..] ++ w[..k]`.
    pub fn rotate(&self, k: usize) -> Word {
        let n = self.0.len();
        if n == 0 {
            return self.clone();
        }
        let k = k % n;
        let mut v = Vec::with_capacity(n);
        v.extend_from_slice(&self.0[k..]);
        v.extend_from_slice(&self.0[..k]);
        Word(v)
    }

    /// Lexicographically minimal rotation: the necklace representative of
    /// the cyclic class. Words here are short, so a direct scan suffices.
    pub fn min_rotation(&self) -> Word {
        let n = self.0.len();
        if n <= 1 {
            return self.clone();
        }
        let mut best = 0usize;
        for k in 1..n {
            if cyclic_less(&self.0, k, best) {
                best = k;
            }
        }
        self.rotate(best)
    }

    /// Exponent vector of the commutative image, length `d`.
    pub fn exponents(&self, d: usize) -> Vec<u32> {
        let mut e = vec![0u32; d];
        for &l in &self.0 {
            e[l as usize] += 1;
        }
        e
    }

    /// Maximum variable index occurring, or None for the empty word.
    pub fn max_letter(&self) -> Option<u8> {
        self.0.iter().copied().max()
    }

    /// Render with context names, `*` between letters, `^` compressing runs.
    pub fn render(&self, ctx: &Context) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut parts: Vec<String> = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if run == 1 {
                parts.push(ctx.name(l as usize).to_string());
            } else {
                parts.push(format!("{}^{}", ctx.name(l as usize), run));
            }
            i += run;
        }
        parts.join("*")
    }
}

/// Compare rotation starting at `a` with rotation starting at `b`, strictly.
fn cyclic_less(w: &[u8], a: usize, b: usize) -> bool {
    let n = w.len();
    for i in 0..n {
        let ca = w[(a + i) % n];
        let cb = w[(b + i) % n];
        match ca.cmp(&cb) {
            Ordering::Less => return true,
            Ordering::Greater => return false,
            Ordering::Equal => {}
        }
    }
    false
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Graded lexicographic order: by degree, then lex on letters.
impl Ord for Word {
    fn cmp(&self, other: &Word) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for &l in &self.0 {
            write!(f, "{}", (b'a' + l) as char)?;
        }
        Ok(())
    }
}
