use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::PosetError;
use crate::word::text::parse_alphabet;
use crate::word::{Alphabet, Word};

/// Names one of the dense sets.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DenseDescriptor {
    /// `{q : n ≤ n^q}`
    A(usize),
    /// `{q : S ⊆ X^q}`
    B(Alphabet),
    /// `{q : g ∈ F(X^q) ∖ U^q_{n^q}}`
    C(Word),
    /// `{q : g ∈ ⟨Cyc(U^q_{n^q})⟩}`
    D(Word),
    /// `{q : n ≤ n^q, S ⊆ X^q, (Conj(g)·h) ∩ U^q_{n^q} ≠ ∅}`
    E { n: usize, s: Alphabet, g: Word, h: Word },
}

impl DenseDescriptor {
    pub fn validate(&self) -> Result<(), PosetError> {
        match self {
            DenseDescriptor::C(g) | DenseDescriptor::D(g) | DenseDescriptor::E { g, .. } if g.is_e() => {
                Err(PosetError::TrivialG)
            }
            _ => Ok(()),
        }
    }

    /// The family letter.
    pub fn kind(&self) -> char {
        match self {
            DenseDescriptor::A(_) => 'A',
            DenseDescriptor::B(_) => 'B',
            DenseDescriptor::C(_) => 'C',
            DenseDescriptor::D(_) => 'D',
            DenseDescriptor::E { .. } => 'E',
        }
    }
}

fn fmt_set(s: &Alphabet) -> String {
    let tokens: Vec<String> = s.to_string().split_whitespace().map(str::to_owned).collect();
    format!("{{{}}}", tokens.join(", "))
}

impl fmt::Display for DenseDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DenseDescriptor::A(n) => write!(f, "A({n})"),
            DenseDescriptor::B(s) => write!(f, "B({})", fmt_set(s)),
            DenseDescriptor::C(g) => write!(f, "C({g})"),
            DenseDescriptor::D(g) => write!(f, "D({g})"),
            DenseDescriptor::E { n, s, g, h } => write!(f, "E({n}, {}, {g}, {h})", fmt_set(s)),
        }
    }
}

/// Splits on commas outside braces.
fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' => depth += 1,
            '}' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

impl FromStr for DenseDescriptor {
    type Err = PosetError;

    fn from_str(s: &str) -> Result<DenseDescriptor, PosetError> {
        let bad = |m: &str| PosetError::Parse(format!("{s:?}: {m}"));
        let s = s.trim();
        let open = s.find('(').ok_or_else(|| bad("expected K(...)"))?;
        let inner = s[open + 1..].strip_suffix(')').ok_or_else(|| bad("missing ')'"))?;
        let args = split_args(inner);
        let word = |a: &str| a.parse::<Word>().map_err(|e| bad(&e.to_string()));
        let set = |a: &str| parse_alphabet(a).map_err(|e| bad(&e.to_string()));
        let num = |a: &str| a.parse::<usize>().map_err(|e| bad(&e.to_string()));
        let d = match (&s[..open], args.as_slice()) {
            ("A", [n]) => DenseDescriptor::A(num(n)?),
            ("B", [a]) => DenseDescriptor::B(set(a)?),
            ("C", [g]) => DenseDescriptor::C(word(g)?),
            ("D", [g]) => DenseDescriptor::D(word(g)?),
            ("E", [n, a, g, h]) => DenseDescriptor::E {
                n: num(n)?,
                s: set(a)?,
                g: word(g)?,
                h: word(h)?,
            },
            _ => return Err(bad("unknown family or wrong number of arguments")),
        };
        d.validate()?;
        Ok(d)
    }
}

impl Serialize for DenseDescriptor {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DenseDescriptor {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<DenseDescriptor, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
