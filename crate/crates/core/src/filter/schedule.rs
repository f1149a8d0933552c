use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::poset::DenseDescriptor;
use crate::word::{Alphabet, ShortlexWords, Word};

/// Which countable family of dense sets a chain has to meet.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Preset {
    /// `A_n`, `B_S`, `C_g`
    T2,
    /// `C_g`, `A_n ∩ D_g`, `B_S`
    Assgp,
    /// the T2 family and `E_{n,S,g,h}`
    Simple,
    /// all of the above
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Family {
    A,
    B,
    C,
    AD,
    E,
}

impl Preset {
    fn families(self) -> &'static [Family] {
        match self {
            Preset::T2 => &[Family::A, Family::B, Family::C],
            Preset::Assgp => &[Family::C, Family::AD, Family::B],
            Preset::Simple => &[Family::A, Family::B, Family::C, Family::E],
            Preset::Full => &[Family::A, Family::B, Family::C, Family::AD, Family::E],
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Preset::T2 => "t2",
            Preset::Assgp => "assgp",
            Preset::Simple => "simple",
            Preset::Full => "full",
        })
    }
}

impl FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Preset, String> {
        match s.to_ascii_lowercase().as_str() {
            "t2" => Ok(Preset::T2),
            "assgp" => Ok(Preset::Assgp),
            "simple" => Ok(Preset::Simple),
            "full" => Ok(Preset::Full),
            _ => Err(format!("unknown preset {s:?} (t2, assgp, simple, full)")),
        }
    }
}

impl Serialize for Preset {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Preset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Preset, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// A fair enumeration of the preset's descriptors. The seed rotates the
/// order in which families take turns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub preset: Preset,
    pub seed: u64,
}

/// Inverse Cantor pairing.
pub fn unpair(z: u64) -> (u64, u64) {
    let z = z as u128;
    let w = ((8 * z + 1).isqrt() - 1) / 2;
    let y = z - w * (w + 1) / 2;
    ((w - y) as u64, y as u64)
}

/// The `i`-th non-trivial word: `(a, b) = unpair(i)`, then the `b`-th
/// non-trivial word over the first `a + 1` generators in shortlex order.
pub fn word_at(i: u64) -> Word {
    let (a, b) = unpair(i);
    let alphabet = Alphabet::block(0, a + 1);
    ShortlexWords::new(&alphabet, 64)
        .skip(1)
        .nth(b as usize)
        .expect("infinitely many words")
}

/// The finite set of generators given by the binary digits of `m + 1`.
pub fn set_at(m: u64) -> Alphabet {
    let bits = m + 1;
    Alphabet::from_ids((0..64).filter(|i| bits >> i & 1 == 1))
}

impl Schedule {
    pub fn new(preset: Preset, seed: u64) -> Schedule {
        Schedule { preset, seed }
    }

    /// Descriptors met by the `idx`-th schedule item, in order; `A_n ∩ D_g`
    /// items are met as two consecutive steps.
    pub fn item(&self, idx: u64) -> Vec<DenseDescriptor> {
        let fams = self.preset.families();
        let len = fams.len() as u64;
        let fam = fams[((idx + self.seed) % len) as usize];
        family_item(fam, idx / len)
    }
}

fn family_item(fam: Family, m: u64) -> Vec<DenseDescriptor> {
    match fam {
        Family::A => vec![DenseDescriptor::A(unpair(m).0 as usize + 1)],
        Family::B => vec![DenseDescriptor::B(set_at(m))],
        Family::C => vec![DenseDescriptor::C(word_at(m))],
        Family::AD => {
            let (a, b) = unpair(m);
            vec![DenseDescriptor::A(a as usize + 1), DenseDescriptor::D(word_at(b))]
        }
        Family::E => {
            let (a, r) = unpair(m);
            let (s, r2) = unpair(r);
            let (gi, hi) = unpair(r2);
            vec![DenseDescriptor::E {
                n: a as usize + 1,
                s: set_at(s),
                g: word_at(gi),
                h: if hi == 0 { Word::e() } else { word_at(hi - 1) },
            }]
        }
    }
}
