//! Substitutions over finite alphabets and their combinatorial operations.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::error::Error;
use crate::intmatrix::IntMatrix;
use crate::Result;

/// Finite alphabet `{0, ..., d-1}`. Spectral analysis assumes `d >= 2`;
/// `d = 1` is accepted so trivial cases stay expressible.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub struct Alphabet {
    pub size: usize,
}

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidArgument("alphabet must be nonempty".into()));
        }
        Ok(Alphabet { size })
    }
}

/// A map from letters to nonempty words, extended to words by concatenation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Substitution {
    alphabet: Alphabet,
    images: Vec<Vec<usize>>,
}

const CHAR_LETTERS: &[u8] = b"0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ";

fn char_to_letter(c: char) -> Option<usize> {
    CHAR_LETTERS.iter().position(|&b| b as char == c)
}

impl Substitution {
    /// `images[j]` is the image of letter `j`; the alphabet size is `images.len()`.
    pub fn new(images: Vec<Vec<usize>>) -> Result<Self> {
        let d = images.len();
        let alphabet = Alphabet::new(d)?;
        for (letter, image) in images.iter().enumerate() {
            if image.is_empty() {
                return Err(Error::EmptyImage { letter });
            }
            for &l in image {
                if l >= d {
                    return Err(Error::LetterOutOfRange { letter: l, alphabet: d });
                }
            }
        }
        Ok(Substitution { alphabet, images })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Substitution::new((0..d).map(|j| alloc::vec![j]).collect())
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn dim(&self) -> usize {
        self.alphabet.size
    }

    pub fn image(&self, letter: usize) -> &[usize] {
        &self.images[letter]
    }

    pub fn images(&self) -> &[Vec<usize>] {
        &self.images
    }

    /// Total number of letters over all images.
    pub fn total_len(&self) -> usize {
        self.images.iter().map(|w| w.len()).sum()
    }

    /// Image of an arbitrary word under the substitution.
    pub fn apply_word(&self, word: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        for &l in word {
            out.extend_from_slice(&self.images[l]);
        }
        out
    }

    /// `(outer ∘ inner)(a) = outer(inner(a))`.
    pub fn compose(outer: &Substitution, inner: &Substitution) -> Result<Substitution> {
        if outer.dim() != inner.dim() {
            return Err(Error::AlphabetMismatch { left: outer.dim(), right: inner.dim() });
        }
        let images = inner.images.iter().map(|w| outer.apply_word(w)).collect();
        Substitution::new(images)
    }

    /// n-fold composition, `n >= 1`.
    pub fn power(&self, n: u32) -> Result<Substitution> {
        if n == 0 {
            return Err(Error::ZeroPower);
        }
        let mut acc = self.clone();
        for _ in 1..n {
            acc = Substitution::compose(self, &acc)?;
        }
        Ok(acc)
    }

    /// `S(i, j)` counts occurrences of letter `i` in the image of `j`.
    pub fn substitution_matrix(&self) -> IntMatrix {
        let d = self.dim();
        let mut m = IntMatrix::zeros(d);
        for (j, image) in self.images.iter().enumerate() {
            for &i in image {
                m.add_assign_entry(i, j, 1);
            }
        }
        m
    }

    /// True iff some power of the substitution matrix is entrywise positive.
    /// The search stops at the Wielandt bound `d^2 - 2d + 2`.
    pub fn is_primitive(&self) -> bool {
        let d = self.dim();
        let adj: Vec<bool> = {
            let s = self.substitution_matrix();
            (0..d * d).map(|idx| s.entry(idx / d, idx % d).sign() != num_bigint::Sign::NoSign).collect()
        };
        let bound = d * d - 2 * d + 2;
        let mut pow = adj.clone();
        for _ in 0..bound {
            if pow.iter().all(|&b| b) {
                return true;
            }
            // boolean matrix product pow * adj
            let mut next = alloc::vec![false; d * d];
            for i in 0..d {
                for k in 0..d {
                    if pow[i * d + k] {
                        for j in 0..d {
                            if adj[k * d + j] {
                                next[i * d + j] = true;
                            }
                        }
                    }
                }
            }
            pow = next;
        }
        pow.iter().all(|&b| b)
    }

    pub fn is_constant_length(&self) -> bool {
        let q = self.images[0].len();
        self.images.iter().all(|w| w.len() == q)
    }

    /// Parse the rule grammar `LHS -> RHS`, rules separated by `;` or
    /// newlines. Letters are single characters from `0-9a-zA-Z`, or
    /// comma-separated decimal integers when the text contains a comma.
    /// `#` starts a comment running to the end of the line.
    pub fn parse(text: &str) -> Result<Substitution> {
        let decimal = text.contains(',');
        let mut rules: Vec<(usize, Vec<usize>, usize, usize)> = Vec::new();
        for (lineno, raw_line) in text.lines().enumerate() {
            let line = match raw_line.find('#') {
                Some(pos) => &raw_line[..pos],
                None => raw_line,
            };
            for rule in line.split(';') {
                if rule.trim().is_empty() {
                    continue;
                }
                let col = raw_line.find(rule.trim()).map(|c| c + 1).unwrap_or(1);
                let mut parts = rule.splitn(2, "->");
                let lhs = parts.next().unwrap_or("");
                let rhs = parts.next().ok_or_else(|| Error::Parse {
                    msg: "rule must contain '->'".to_string(),
                    line: lineno + 1,
                    col,
                })?;
                let lhs_letters = parse_letters(lhs, decimal, lineno + 1, col)?;
                if lhs_letters.len() != 1 {
                    return Err(Error::Parse {
                        msg: "left-hand side must be a single letter".to_string(),
                        line: lineno + 1,
                        col,
                    });
                }
                let rhs_letters = parse_letters(rhs, decimal, lineno + 1, col)?;
                rules.push((lhs_letters[0], rhs_letters, lineno + 1, col));
            }
        }
        if rules.is_empty() {
            return Err(Error::Parse { msg: "no rules".to_string(), line: 1, col: 1 });
        }
        let max_letter = rules
            .iter()
            .map(|(l, img, _, _)| img.iter().copied().chain([*l]).max().unwrap_or(*l))
            .max()
            .unwrap();
        let d = max_letter + 1;
        let mut images: Vec<Option<Vec<usize>>> = alloc::vec![None; d];
        for (letter, image, _, _) in &rules {
            if image.is_empty() {
                return Err(Error::EmptyImage { letter: *letter });
            }
            if images[*letter].is_some() {
                return Err(Error::DuplicateRule { letter: *letter });
            }
            images[*letter] = Some(image.clone());
        }
        let images = images
            .into_iter()
            .enumerate()
            .map(|(letter, img)| img.ok_or(Error::MissingRule { letter }))
            .collect::<Result<Vec<_>>>()?;
        Substitution::new(images)
    }

    /// Canonical serialization of the parse grammar, letters in increasing order.
    pub fn to_grammar(&self) -> String {
        let mut out = String::new();
        for (j, image) in self.images.iter().enumerate() {
            if j > 0 {
                out.push(';');
            }
            push_letters(&mut out, &[j], self.dim());
            out.push_str("->");
            push_letters(&mut out, image, self.dim());
        }
        out
    }
}

fn parse_letters(text: &str, decimal: bool, line: usize, col: usize) -> Result<Vec<usize>> {
    let mut out = Vec::new();
    if decimal {
        for tok in text.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                continue;
            }
            let v: usize = tok.parse().map_err(|_| Error::Parse {
                msg: alloc::format!("invalid letter '{tok}'"),
                line,
                col,
            })?;
            out.push(v);
        }
    } else {
        for c in text.chars() {
            if c.is_whitespace() {
                continue;
            }
            let l = char_to_letter(c).ok_or_else(|| Error::Parse {
                msg: alloc::format!("invalid letter '{c}'"),
                line,
                col,
            })?;
            out.push(l);
        }
    }
    Ok(out)
}

fn push_letters(out: &mut String, letters: &[usize], d: usize) {
    if d <= CHAR_LETTERS.len() {
        for &l in letters {
            out.push(CHAR_LETTERS[l] as char);
        }
    } else {
        for (i, &l) in letters.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(&l.to_string());
        }
    }
}
