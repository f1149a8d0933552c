//! Text syntax for words and alphabets.
//!
//! Tokens are separated by whitespace (`*` and `·` are accepted as
//! separators too). A token is `e`, a letter name, or a run, optionally
//! followed by `^-1` or `^k`:
//!
//! * `a` … `w` name ids 0 … 22, except `e`, which is the identity; id 4
//!   is written `x4`;
//! * `yN` names id 22 + N (so `y1` is id 23), `xN` names the raw id N;
//! * `y[p..q]` / `x[p..q]` is the run of consecutive ids from p to q,
//!   ascending or descending depending on the order of p and q.

use super::{Alphabet, Dir, Letter, Segment, Sign, Word, WordError};

/// Number of ids with single-letter names.
pub const NAMED: u64 = 23;
/// The id whose letter name would clash with `e`.
const IDENTITY_ID: u64 = 4;

pub fn gen_name(id: u64) -> String {
    if id == IDENTITY_ID {
        format!("x{id}")
    } else if id < NAMED {
        ((b'a' + id as u8) as char).to_string()
    } else {
        format!("y{}", id - (NAMED - 1))
    }
}

pub fn letter_name(l: Letter) -> String {
    match l.sign {
        Sign::Pos => gen_name(l.id()),
        Sign::Neg => format!("{}^-1", gen_name(l.id())),
    }
}

/// Run token over ids `from..to` (in either order).
pub fn range_token(from: u64, to: u64) -> String {
    if from.min(to) >= NAMED {
        format!("y[{}..{}]", from - (NAMED - 1), to - (NAMED - 1))
    } else {
        format!("x[{from}..{to}]")
    }
}

pub fn format_word(w: &Word) -> String {
    if w.is_e() {
        return "e".to_string();
    }
    let mut parts = Vec::new();
    for s in w.segments() {
        match s {
            Segment::Explicit(v) => parts.extend(v.iter().map(|&l| letter_name(l))),
            Segment::Run(r) => match r.sign {
                Sign::Pos => parts.push(range_token(r.first_id(), r.last_id())),
                Sign::Neg => parts.push(format!("{}^-1", range_token(r.last_id(), r.first_id()))),
            },
        }
    }
    parts.join(" ")
}

fn perr(msg: impl Into<String>) -> WordError {
    WordError::Parse(msg.into())
}

fn parse_index(s: &str, tok: &str) -> Result<u64, WordError> {
    s.parse::<u64>()
        .map_err(|_| perr(format!("bad index in token `{tok}`")))
}

/// One token without its exponent, as a word.
fn parse_base(tok: &str) -> Result<Word, WordError> {
    if tok == "e" {
        return Ok(Word::e());
    }
    let bytes = tok.as_bytes();
    if bytes.len() == 1 && bytes[0].is_ascii_lowercase() && (bytes[0] - b'a') < NAMED as u8 {
        return Ok(Word::gen((bytes[0] - b'a') as u64));
    }
    let (kind, rest) = tok.split_at(1);
    let offset = match kind {
        "x" => 0,
        "y" => NAMED - 1,
        _ => return Err(perr(format!("unknown token `{tok}`"))),
    };
    let to_id = |n: u64| -> Result<u64, WordError> {
        if kind == "y" && n == 0 {
            return Err(perr(format!("y-indices start at 1 in `{tok}`")));
        }
        n.checked_add(offset)
            .ok_or_else(|| perr(format!("index too large in `{tok}`")))
    };
    if let Some(inner) = rest.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        let (p, q) = inner
            .split_once("..")
            .ok_or_else(|| perr(format!("run token needs `p..q`: `{tok}`")))?;
        let p = to_id(parse_index(p, tok)?)?;
        let q = to_id(parse_index(q, tok)?)?;
        let (dir, len) = if p <= q {
            (Dir::Asc, q - p + 1)
        } else {
            (Dir::Desc, p - q + 1)
        };
        return Word::run(p, len, dir, Sign::Pos);
    }
    Ok(Word::gen(to_id(parse_index(rest, tok)?)?))
}

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| c.is_whitespace() || c == '*' || c == '·')
        .filter(|t| !t.is_empty())
}

pub fn parse_word(s: &str) -> Result<Word, WordError> {
    let mut out = Word::e();
    for tok in tokens(s) {
        let (base, exp) = match tok.split_once('^') {
            Some((b, e)) => {
                let k: i64 = e
                    .parse()
                    .map_err(|_| perr(format!("bad exponent in `{tok}`")))?;
                (b, k)
            }
            None => (tok, 1),
        };
        let w = parse_base(base)?;
        let w = match exp {
            1 => w,
            -1 => w.inverse(),
            k => {
                let mut acc = Word::e();
                let step = if k < 0 { w.inverse() } else { w };
                for _ in 0..k.unsigned_abs() {
                    acc = acc.mul(&step);
                }
                acc
            }
        };
        out = out.mul(&w);
    }
    Ok(out)
}

/// Parses an alphabet given as letter names and runs (exponents ignored).
pub fn parse_alphabet(s: &str) -> Result<Alphabet, WordError> {
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    let mut a = Alphabet::new();
    for tok in s.split(|c: char| c.is_whitespace() || c == ',') {
        if tok.is_empty() {
            continue;
        }
        let base = tok.split_once('^').map(|(b, _)| b).unwrap_or(tok);
        let w = parse_base(base)?;
        a = a.union(&w.letters());
    }
    Ok(a)
}


mod serde_impls {
    use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

    use super::super::{Alphabet, Letter, Word};
    use super::{letter_name, parse_alphabet, parse_word};

    impl Serialize for Word {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&self.to_string())
        }
    }

    impl<'de> Deserialize<'de> for Word {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let s = String::deserialize(d)?;
            parse_word(&s).map_err(de::Error::custom)
        }
    }

    impl Serialize for Alphabet {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&self.to_string())
        }
    }

    impl<'de> Deserialize<'de> for Alphabet {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let s = String::deserialize(d)?;
            parse_alphabet(&s).map_err(de::Error::custom)
        }
    }

    impl Serialize for Letter {
        fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&letter_name(*self))
        }
    }

    impl<'de> Deserialize<'de> for Letter {
        fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
            let s = String::deserialize(d)?;
            let w = parse_word(&s).map_err(de::Error::custom)?;
            match w.flatten(1).as_deref() {
                Some([l]) => Ok(*l),
                _ => Err(de::Error::custom(format!("`{s}` is not a single letter"))),
            }
        }
    }
}
