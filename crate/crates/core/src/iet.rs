//! Interval exchange transformations, Rauzy induction and the substitutions
//! attached to loops in the Rauzy diagram.
//!
//! Permutations use one-line notation with 1-based values: `pi(j)` is the
//! place of interval `j` after the exchange. Substitutions produced here use
//! the 0-based internal alphabet, so interval `j` becomes letter `j - 1`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::substitution::Substitution;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm {
    map: Vec<usize>, // map[j] = pi(j+1), values 1..=d
}

impl Perm {
    pub fn new(map: Vec<usize>) -> Result<Perm> {
        let d = map.len();
        if d == 0 {
            return Err(Error::InvalidPermutation);
        }
        let mut seen = alloc::vec![false; d + 1];
        for &v in &map {
            if v == 0 || v > d || seen[v] {
                return Err(Error::InvalidPermutation);
            }
            seen[v] = true;
        }
        Ok(Perm { map })
    }

    /// One-line notation: contiguous digits (`4321`) up to d = 9, or
    /// comma-separated values (`4,3,2,1`) in general.
    pub fn parse(text: &str) -> Result<Perm> {
        let text = text.trim();
        let values: Vec<usize> = if text.contains(',') {
            text.split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::InvalidPermutation))
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| c.to_digit(10).map(|v| v as usize).ok_or(Error::InvalidPermutation))
                .collect::<Result<_>>()?
        };
        Perm::new(values)
    }

    pub fn dim(&self) -> usize {
        self.map.len()
    }

    /// `pi(j)` for `j` in `1..=d`.
    pub fn apply(&self, j: usize) -> usize {
        self.map[j - 1]
    }

    /// `pi^{-1}(v)` for `v` in `1..=d`.
    pub fn inverse_of(&self, v: usize) -> usize {
        self.map.iter().position(|&x| x == v).unwrap() + 1
    }

    /// Irreducible: no proper prefix `{1..k}` is mapped onto `{1..k}`.
    pub fn is_irreducible(&self) -> bool {
        let d = self.dim();
        let mut max_seen = 0;
        for k in 1..d {
            max_seen = max_seen.max(self.map[k - 1]);
            if max_seen == k {
                return false;
            }
        }
        true
    }

    pub fn one_line(&self) -> String {
        if self.dim() <= 9 {
            self.map.iter().map(|v| char::from(b'0' + *v as u8)).collect()
        } else {
            let parts: Vec<String> = self.map.iter().map(|v| v.to_string()).collect();
            parts.join(",")
        }
    }
}

impl core::fmt::Display for Perm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.one_line())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RauzyMove {
    /// Losing interval is the last one (`lambda_d < lambda_{pi^{-1}(d)}`).
    A,
    /// Losing interval is `pi^{-1}(d)`.
    B,
}

/// The permutation reached by one Rauzy move.
pub fn rauzy_move_permutation(pi: &Perm, mv: RauzyMove) -> Result<Perm> {
    if !pi.is_irreducible() {
        return Err(Error::ReduciblePermutation);
    }
    let d = pi.dim();
    let k = pi.inverse_of(d);
    let next = match mv {
        RauzyMove::A => {
            // remove the last value and reinsert it just after position k
            let last = pi.apply(d);
            let mut out = Vec::with_capacity(d);
            for j in 1..d {
                out.push(pi.apply(j));
                if j == k {
                    out.push(last);
                }
            }
            out
        }
        RauzyMove::B => {
            let pd = pi.apply(d);
            (1..=d)
                .map(|j| {
                    let v = pi.apply(j);
                    if v == d {
                        pd + 1
                    } else if v > pd {
                        v + 1
                    } else {
                        v
                    }
                })
                .collect()
        }
    };
    Perm::new(next)
}

/// The substitution read off one Rauzy move (same return-word rule as for
/// self-similar IETs):
///
/// move `a` with `k = pi^{-1}(d)`: `i -> i` for `i <= k`,
/// `k+1 -> k d`, `i -> i-1` for `i > k+1`;
/// move `b`: identity except `k -> k d`.
pub fn rauzy_substitution(pi: &Perm, mv: RauzyMove) -> Result<Substitution> {
    if !pi.is_irreducible() {
        return Err(Error::ReduciblePermutation);
    }
    let d = pi.dim();
    let k = pi.inverse_of(d);
    let mut images: Vec<Vec<usize>> = Vec::with_capacity(d);
    for i in 1..=d {
        let image = match mv {
            RauzyMove::A => {
                if i <= k {
                    alloc::vec![i - 1]
                } else if i == k + 1 {
                    alloc::vec![k - 1, d - 1]
                } else {
                    alloc::vec![i - 2]
                }
            }
            RauzyMove::B => {
                if i == k {
                    alloc::vec![k - 1, d - 1]
                } else {
                    alloc::vec![i - 1]
                }
            }
        };
        images.push(image);
    }
    Substitution::new(images)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RauzyLoop {
    pub base: Perm,
    pub moves: Vec<RauzyMove>,
}

/// Walk of a loop: the permutation after each move, ending where it started.
pub fn loop_vertices(l: &RauzyLoop) -> Result<Vec<Perm>> {
    let mut out = alloc::vec![l.base.clone()];
    let mut current = l.base.clone();
    for &mv in &l.moves {
        current = rauzy_move_permutation(&current, mv)?;
        out.push(current.clone());
    }
    Ok(out)
}

/// Substitution of a closed loop: the composition of the per-move
/// substitutions with the first move outermost.
pub fn loop_substitution(l: &RauzyLoop) -> Result<Substitution> {
    if l.moves.is_empty() {
        return Err(Error::EmptyLoop);
    }
    let mut current = l.base.clone();
    let mut total: Option<Substitution> = None;
    for &mv in &l.moves {
        let step = rauzy_substitution(&current, mv)?;
        total = Some(match total {
            None => step,
            Some(t) => Substitution::compose(&t, &step)?,
        });
        current = rauzy_move_permutation(&current, mv)?;
    }
    if current != l.base {
        return Err(Error::OpenLoop { base: l.base.one_line(), end: current.one_line() });
    }
    Ok(total.unwrap())
}

const COMPONENT_GUARD: u64 = 1_000_000;

/// All permutations reachable from `pi` by Rauzy moves (the Rauzy class),
/// sorted in one-line order.
pub fn enumerate_component(pi: &Perm) -> Result<Vec<Perm>> {
    if !pi.is_irreducible() {
        return Err(Error::ReduciblePermutation);
    }
    let mut seen = alloc::vec![pi.clone()];
    let mut queue = alloc::vec![pi.clone()];
    while let Some(p) = queue.pop() {
        for mv in [RauzyMove::A, RauzyMove::B] {
            let next = rauzy_move_permutation(&p, mv)?;
            if !seen.contains(&next) {
                if seen.len() as u64 >= COMPONENT_GUARD {
                    return Err(Error::GuardExceeded {
                        what: "Rauzy class size",
                        limit: COMPONENT_GUARD,
                        got: seen.len() as u64 + 1,
                    });
                }
                seen.push(next.clone());
                queue.push(next);
            }
        }
    }
    seen.sort();
    Ok(seen)
}

/// Interval exchange transformation `f(lambda, pi)` on `[0, sum lambda)`.
#[derive(Debug, Clone)]
pub struct Iet {
    lengths: Vec<f64>,
    perm: Perm,
}

impl Iet {
    pub fn new(lengths: Vec<f64>, perm: Perm) -> Result<Iet> {
        if lengths.len() != perm.dim() {
            return Err(Error::DimensionMismatch { expected: perm.dim(), got: lengths.len() });
        }
        if lengths.iter().any(|&l| !(l > 0.0) || !l.is_finite()) {
            return Err(Error::InvalidArgument("interval lengths must be positive".into()));
        }
        Ok(Iet { lengths, perm })
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    pub fn perm(&self) -> &Perm {
        &self.perm
    }

    pub fn lengths(&self) -> &[f64] {
        &self.lengths
    }

    /// Left endpoint of interval `j` (1-based) before the exchange.
    fn left(&self, j: usize) -> f64 {
        self.lengths[..j - 1].iter().sum()
    }

    /// Left endpoint of interval `j` after the exchange.
    fn left_after(&self, j: usize) -> f64 {
        let place = self.perm.apply(j);
        (1..=self.lengths.len())
            .filter(|&i| self.perm.apply(i) < place)
            .map(|i| self.lengths[i - 1])
            .sum()
    }

    pub fn apply(&self, x: f64) -> Result<f64> {
        if !(0.0..self.total_length()).contains(&x) {
            return Err(Error::PointOutOfRange);
        }
        let d = self.lengths.len();
        let mut j = d;
        for i in 1..=d {
            if x < self.left(i) + self.lengths[i - 1] {
                j = i;
                break;
            }
        }
        Ok(x - self.left(j) + self.left_after(j))
    }
}

/// Deriving the substitution of a self-similar IET needs exact arithmetic in
/// the field of the renormalization eigenvalue; out of scope for now.
pub fn self_similar_substitution(_f: &Iet) -> Result<Substitution> {
    Err(Error::Unimplemented("substitution extraction from a self-similar IET"))
}

/// The loop based at `(4321)`: `b, a, a, b, a^n, b, a, a, a`.
pub fn family_loop(n: usize) -> RauzyLoop {
    use RauzyMove::{A, B};
    let mut moves = alloc::vec![B, A, A, B];
    moves.extend(core::iter::repeat(A).take(n));
    moves.extend([B, A, A, A]);
    RauzyLoop { base: Perm::parse("4321").unwrap(), moves }
}

/// Closed form of the loop substitution:
/// `1 -> 14, 2 -> 14224, 3 -> 14(23)^{n+1}24, 4 -> 14(23)^n 24`
/// (written with 1-based interval labels).
pub fn family_zeta_n(n: usize) -> Substitution {
    let with_blocks = |reps: usize| -> Vec<usize> {
        let mut w = alloc::vec![0, 3];
        for _ in 0..reps {
            w.extend([1, 2]);
        }
        w.extend([1, 3]);
        w
    };
    Substitution::new(alloc::vec![
        alloc::vec![0, 3],
        alloc::vec![0, 3, 1, 1, 3],
        with_blocks(n + 1),
        with_blocks(n),
    ])
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use RauzyMove::{A, B};

    #[test]
    fn parse_and_irreducibility() {
        let p = Perm::parse("4321").unwrap();
        assert_eq!(p.one_line(), "4321");
        assert!(p.is_irreducible());
        assert!(!Perm::parse("2134").unwrap().is_irreducible());
        assert!(!Perm::parse("1234").unwrap().is_irreducible());
        assert!(Perm::parse("4,3,2,1").unwrap() == p);
        assert!(Perm::parse("4421").is_err());
        assert!(Perm::parse("").is_err());
    }

    #[test]
    fn known_move_table() {
        // the full cycle of moves through the class of (4321)
        let cases = [
            ("4321", B, "2431"),
            ("2431", A, "2413"),
            ("2413", A, "2431"),
            ("2431", B, "3241"),
            ("3241", A, "3241"),
            ("3241", B, "4321"),
            ("4321", A, "4132"),
            ("4132", A, "4213"),
            ("4213", A, "4321"),
        ];
        for (from, mv, to) in cases {
            let got = rauzy_move_permutation(&Perm::parse(from).unwrap(), mv).unwrap();
            assert_eq!(got.one_line(), to, "{from} --{mv:?}--> {to}");
        }
    }

    #[test]
    fn known_move_substitutions() {
        // b at 4321: 1 -> 14, rest fixed
        let z = rauzy_substitution(&Perm::parse("4321").unwrap(), B).unwrap();
        assert_eq!(z.image(0), &[0, 3]);
        assert_eq!(z.image(1), &[1]);
        assert_eq!(z.image(3), &[3]);
        // a at 4321: 2 -> 14, 3 -> 2, 4 -> 3
        let z = rauzy_substitution(&Perm::parse("4321").unwrap(), A).unwrap();
        assert_eq!(z.image(0), &[0]);
        assert_eq!(z.image(1), &[0, 3]);
        assert_eq!(z.image(2), &[1]);
        assert_eq!(z.image(3), &[2]);
        // a at 2431: 3 -> 24, 4 -> 3
        let z = rauzy_substitution(&Perm::parse("2431").unwrap(), A).unwrap();
        assert_eq!(z.image(2), &[1, 3]);
        assert_eq!(z.image(3), &[2]);
        // a at 3241: 4 -> 34, rest fixed
        let z = rauzy_substitution(&Perm::parse("3241").unwrap(), A).unwrap();
        assert_eq!(z.image(3), &[2, 3]);
        assert_eq!(z.image(2), &[2]);
    }

    #[test]
    fn loop_composition_matches_closed_form() {
        for n in 1..=3 {
            let composed = loop_substitution(&family_loop(n)).unwrap();
            assert_eq!(composed, family_zeta_n(n), "n = {n}");
        }
    }

    #[test]
    fn loop_vertex_walk() {
        let verts = loop_vertices(&family_loop(1)).unwrap();
        let names: Vec<String> = verts.iter().map(|p| p.one_line()).collect();
        assert_eq!(
            names,
            ["4321", "2431", "2413", "2431", "3241", "3241", "4321", "4132", "4213", "4321"]
        );
    }

    #[test]
    fn open_loop_rejected() {
        let l = RauzyLoop { base: Perm::parse("4321").unwrap(), moves: alloc::vec![B, A] };
        assert!(matches!(loop_substitution(&l), Err(Error::OpenLoop { .. })));
        let empty = RauzyLoop { base: Perm::parse("4321").unwrap(), moves: Vec::new() };
        assert!(matches!(loop_substitution(&empty), Err(Error::EmptyLoop)));
    }

    #[test]
    fn component_of_4321() {
        let class = enumerate_component(&Perm::parse("4321").unwrap()).unwrap();
        let names: Vec<String> = class.iter().map(|p| p.one_line()).collect();
        assert_eq!(names, ["2413", "2431", "3142", "3241", "4132", "4213", "4321"]);
    }

    #[test]
    fn family_matrix() {
        // column sums of the substitution matrix are the image lengths
        for n in 1..=4i64 {
            let s = family_zeta_n(n as usize).substitution_matrix();
            let expect = crate::intmatrix::IntMatrix::from_i64_rows(&[
                &[1, 1, 1, 1],
                &[0, 2, n + 2, n + 1],
                &[0, 0, n + 1, n],
                &[1, 2, 2, 2],
            ]);
            assert_eq!(s, expect, "n = {n}");
        }
    }

    #[test]
    fn iet_two_intervals_is_rotation() {
        let f = Iet::new(alloc::vec![0.6, 0.4], Perm::parse("21").unwrap()).unwrap();
        assert!((f.apply(0.1).unwrap() - 0.5).abs() < 1e-12);
        assert!((f.apply(0.7).unwrap() - 0.1).abs() < 1e-12);
        assert!(f.apply(1.0).is_err());
        assert!(f.apply(-0.1).is_err());
        // orbit stays in the domain
        let mut x = 0.05;
        for _ in 0..100 {
            x = f.apply(x).unwrap();
        }
    }

    #[test]
    fn iet_preserves_lengths() {
        let f = Iet::new(alloc::vec![0.2, 0.5, 0.3], Perm::parse("321").unwrap()).unwrap();
        // interval 2 = [0.2, 0.7) lands in second place after intervals at
        // places 1 (that is interval 3)
        assert!((f.apply(0.2).unwrap() - 0.3).abs() < 1e-12);
        assert!((f.apply(0.69).unwrap() - 0.79).abs() < 1e-12);
        // interval 3 goes to the front
        assert!((f.apply(0.7).unwrap() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn self_similar_extraction_unimplemented() {
        let f = Iet::new(alloc::vec![0.5, 0.5], Perm::parse("21").unwrap()).unwrap();
        assert!(matches!(self_similar_substitution(&f), Err(Error::Unimplemented(_))));
    }
}
