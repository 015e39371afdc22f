//! Deterministic families of colorings `[m] -> [k]` that are perfect for
//! every `k`-subset: for every set `S` of `k` positions and every bijection
//! `S -> [k]`, some member of the family restricts to it.
//!
//! Two constructions, whichever is smaller:
//!
//! * all `k^m` colorings;
//! * `x -> ((a*x) mod P) mod r` for every `a in 1..P` with `P > max(m, r)`
//!   prime and `r = k(k-1)+1`, composed with every injection of a
//!   `k`-subset of `[r]` onto `[k]` (positions hashed outside the subset
//!   get color 0). For a fixed `S` the number of colliding pairs summed
//!   over `a` is at most `C(k,2)(P-1)*2/r < P-1`, so some `a` is injective
//!   on `S`, and the subset/permutation layer then realizes every
//!   bijection.

use crate::error::{Error, Result};

/// Families larger than this are refused.
pub const MAX_FAMILY_SIZE: u128 = 200_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    Exhaustive,
    Hashed { prime: u64, r: usize },
}

#[derive(Clone, Debug)]
pub struct ColoringFamily {
    m: usize,
    k: usize,
    kind: Kind,
    size: u128,
}

fn is_prime(x: u64) -> bool {
    x >= 2
        && (2..)
            .take_while(|d| d * d <= x)
            .all(|d| !x.is_multiple_of(d))
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

fn factorial(k: usize) -> u128 {
    (1..=k as u128).product()
}

impl ColoringFamily {
    pub fn new(m: usize, k: usize) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::Inapplicable(format!(
                "no perfect coloring family of {m} positions with {k} colors"
            )));
        }
        let exhaustive = (k as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
        let r = k * (k - 1) + 1;
        let mut prime = m.max(r) as u64 + 1;
        while !is_prime(prime) {
            prime += 1;
        }
        let hashed = (prime as u128 - 1) * binomial(r, k) * factorial(k);
        let (kind, size) = if exhaustive <= hashed {
            (Kind::Exhaustive, exhaustive)
        } else {
            (Kind::Hashed { prime, r }, hashed)
        };
        if size > MAX_FAMILY_SIZE {
            return Err(Error::BoundExceeded {
                what: "perfect coloring family",
                size: size.min(usize::MAX as u128) as usize,
                bound: MAX_FAMILY_SIZE as usize,
            });
        }
        Ok(ColoringFamily { m, k, kind, size })
    }

    pub fn len(&self) -> u128 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn iter(&self) -> ColoringIter {
        ColoringIter {
            fam: self.clone(),
            state: None,
            done: false,
        }
    }
}

#[derive(Clone, Debug)]
enum State {
    Exhaustive(Vec<u8>),
    Hashed {
        a: u64,
        subset: Vec<usize>,
        perm: Vec<u8>,
    },
}

pub struct ColoringIter {
    fam: ColoringFamily,
    state: Option<State>,
    done: bool,
}

// Lexicographically next k-combination of 0..n.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn next_permutation(p: &mut [u8]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let Some(i) = (0..n - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

impl ColoringIter {
    fn render(&self) -> Vec<u8> {
        match self.state.as_ref().unwrap() {
            State::Exhaustive(c) => c.clone(),
            State::Hashed { a, subset, perm } => {
                let Kind::Hashed { prime, r } = self.fam.kind else {
                    unreachable!()
                };
                (0..self.fam.m as u64)
                    .map(|x| {
                        let h = ((a * x) % prime) as usize % r;
                        subset.binary_search(&h).map_or(0, |pos| perm[pos])
                    })
                    .collect()
            }
        }
    }

    fn advance(&mut self) -> bool {
        let k = self.fam.k;
        match (&self.fam.kind, self.state.as_mut()) {
            (Kind::Exhaustive, None) => {
                self.state = Some(State::Exhaustive(vec![0; self.fam.m]));
                true
            }
            (Kind::Exhaustive, Some(State::Exhaustive(c))) => {
                for d in c.iter_mut() {
                    if (*d as usize) + 1 < k {
                        *d += 1;
                        return true;
                    }
                    *d = 0;
                }
                false
            }
            (Kind::Hashed { .. }, None) => {
                self.state = Some(State::Hashed {
                    a: 1,
                    subset: (0..k).collect(),
                    perm: (0..k as u8).collect(),
                });
                true
            }
            (Kind::Hashed { prime, r }, Some(State::Hashed { a, subset, perm })) => {
                if next_permutation(perm) {
                    return true;
                }
                perm.sort_unstable();
                if next_combination(subset, *r) {
                    return true;
                }
                *subset = (0..k).collect();
                *a += 1;
                *a < *prime
            }
            _ => unreachable!(),
        }
    }
}

impl Iterator for ColoringIter {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done || !self.advance() {
            self.done = true;
            return None;
        }
        Some(self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn is_perfect(m: usize, k: usize) -> bool {
        let fam = ColoringFamily::new(m, k).unwrap();
        let colorings: Vec<Vec<u8>> = fam.iter().collect();
        assert_eq!(colorings.len() as u128, fam.len());
        // every injective pattern on every k-subset
        let mut needed = HashSet::new();
        let mut subset: Vec<usize> = (0..k).collect();
        loop {
            let mut perm: Vec<u8> = (0..k as u8).collect();
            loop {
                needed.insert((subset.clone(), perm.clone()));
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }
        needed.iter().all(|(s, p)| {
            colorings
                .iter()
                .any(|c| s.iter().zip(p).all(|(&x, &col)| c[x] == col))
        })
    }

    #[test]
    fn small_families_are_perfect() {
        for m in 1..=7 {
            for k in 1..=m.min(3) {
                assert!(is_perfect(m, k), "m={m} k={k}");
            }
        }
    }

    #[test]
    fn hashed_construction_is_perfect() {
        // 2^12 = 4096 > 12 * 3 * 2 = 72: the hashed family is chosen
        let fam = ColoringFamily::new(12, 2).unwrap();
        assert!(matches!(fam.kind, Kind::Hashed { .. }));
        assert!(is_perfect(12, 2));
        let fam = ColoringFamily::new(20, 3).unwrap();
        assert!(matches!(fam.kind, Kind::Hashed { .. }));
        assert!(is_perfect(20, 3));
    }

    #[test]
    fn rejects_degenerate_parameters() {
        assert!(ColoringFamily::new(3, 0).is_err());
        assert!(ColoringFamily::new(2, 3).is_err());
    }
}
