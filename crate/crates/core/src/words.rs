//! Words in the free semigroup on `n` generators.
//!
//! The canonical basis order used by every matrix representation in the
//! crate is graded-lex: words sorted by length, then lexicographically by
//! letter index. [`Word::index`] and [`Word::from_index`] convert between a
//! word and its position in that order without enumerating.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A word `g_{i_1} ... g_{i_k}`; letters are 1-based generator indices.
/// The empty word is the identity `g_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![letter_u8(i)])
    }

    pub fn from_letters(letters: &[usize]) -> Self {
        Word(letters.iter().map(|&i| letter_u8(i)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().map(|&l| l as usize)
    }

    /// Checks every letter lies in `1..=n`.
    pub fn check_alphabet(&self, n: usize) -> Result<()> {
        match self.letters().find(|&l| l == 0 || l > n) {
            Some(letter) => Err(Error::BadLetter { letter, n }),
            None => Ok(()),
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    /// Position in the graded-lex enumeration over `n` generators.
    pub fn index(&self, n: usize) -> usize {
        let offset = fock_dim(n, self.len().saturating_sub(1)) * usize::from(!self.is_empty());
        self.letters().fold(0, |acc, l| acc * n + (l - 1)) + offset
    }

    /// Inverse of [`Word::index`].
    pub fn from_index(n: usize, mut index: usize) -> Word {
        let mut len = 0;
        let mut level = 1;
        while index >= level {
            index -= level;
            level *= n;
            len += 1;
        }
        let mut letters = vec![0u8; len];
        for slot in letters.iter_mut().rev() {
            *slot = letter_u8(index % n + 1);
            index /= n;
        }
        Word(letters)
    }

    /// All ordered splittings into `parts` nonempty consecutive subwords.
    pub fn factorizations(&self, parts: usize) -> Result<Vec<Vec<Word>>> {
        if parts < 1 || parts > self.len() {
            return Err(Error::BadArity { len: self.len(), parts });
        }
        let mut out = Vec::new();
        let mut cuts = Vec::with_capacity(parts + 1);
        cuts.push(0);
        self.split_from(parts, &mut cuts, &mut out);
        Ok(out)
    }

    fn split_from(&self, parts: usize, cuts: &mut Vec<usize>, out: &mut Vec<Vec<Word>>) {
        let start = *cuts.last().unwrap();
        if cuts.len() == parts {
            cuts.push(self.len());
            out.push(cuts.windows(2).map(|w| Word(self.0[w[0]..w[1]].to_vec())).collect());
            cuts.pop();
            return;
        }
        let remaining = parts - cuts.len();
        for cut in start + 1..=self.len() - remaining {
            cuts.push(cut);
            self.split_from(parts, cuts, out);
            cuts.pop();
        }
    }
}

fn letter_u8(i: usize) -> u8 {
    u8::try_from(i).expect("generator index does not fit in a byte")
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Digit-string form: `""` for the empty word, `"121"` for `g1 g2 g1`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        s.chars()
            .map(|ch| match ch.to_digit(10) {
                Some(d) if d >= 1 => Ok(d as u8),
                _ => Err(Error::Parse(format!("bad letter {ch:?} in word {s:?}"))),
            })
            .collect::<Result<Vec<u8>>>()
            .map(Word)
    }
}

/// Number of words of length at most `max_len`: `sum_{k<=max_len} n^k`.
pub fn fock_dim(n: usize, max_len: usize) -> usize {
    (0..=max_len).map(|k| n.pow(k as u32)).sum()
}

/// All words of length `<= max_len` over `n` generators in graded-lex order.
pub fn enumerate(n: usize, max_len: usize) -> Vec<Word> {
    assert!(n >= 1, "need at least one generator");
    (0..fock_dim(n, max_len)).map(|i| Word::from_index(n, i)).collect()
}
