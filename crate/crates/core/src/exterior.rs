//! Basis monomials of the exterior algebra on the dual of g.
//!
//! A monomial `xi^{i1} ^ ... ^ xi^{ip}` with `i1 < ... < ip` is stored as a
//! bitmask. All sign computations of the crate go through [`Wedge::mul`] and
//! [`Wedge::contract`].

use std::fmt;

pub const MAX_DIM: usize = 32;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Wedge(pub u32);

impl Wedge {
    pub const EMPTY: Wedge = Wedge(0);

    pub fn single(i: usize) -> Wedge {
        assert!(i < MAX_DIM);
        Wedge(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> Option<Wedge> {
        let mut w = 0u32;
        for &i in indices {
            assert!(i < MAX_DIM);
            if w & (1 << i) != 0 {
                return None;
            }
            w |= 1 << i;
        }
        Some(Wedge(w))
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn indices(self) -> Vec<usize> {
        (0..MAX_DIM).filter(|&i| self.contains(i)).collect()
    }

    /// `self ^ other = sign * result`, or `None` when they share an index.
    pub fn mul(self, other: Wedge) -> Option<(i64, Wedge)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // count pairs (a in self, b in other) with a > b
        let mut inversions = 0u32;
        let mut rest = other.0;
        while rest != 0 {
            let b = rest.trailing_zeros();
            rest &= rest - 1;
            inversions += (self.0 >> (b + 1)).count_ones();
        }
        let sign = if inversions % 2 == 0 { 1 } else { -1 };
        Some((sign, Wedge(self.0 | other.0)))
    }

    /// Interior product with the basis vector `x_i`:
    /// `iota_{x_i} xi^I = (-1)^r xi^{I \ i}` where `r` is the position of `i`.
    pub fn contract(self, i: usize) -> Option<(i64, Wedge)> {
        if !self.contains(i) {
            return None;
        }
        let r = (self.0 & ((1u32 << i) - 1)).count_ones();
        let sign = if r % 2 == 0 { 1 } else { -1 };
        Some((sign, Wedge(self.0 & !(1 << i))))
    }

    /// Lexicographic comparison of the index tuples.
    pub fn cmp_lex(self, other: Wedge) -> std::cmp::Ordering {
        self.indices().cmp(&other.indices())
    }
}

impl fmt::Debug for Wedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.indices())
    }
}

/// All degree-`p` monomials in `n` variables, lexicographic in the tuples.
pub fn wedge_basis(n: usize, p: usize) -> Vec<Wedge> {
    fn rec(start: usize, n: usize, left: usize, acc: u32, out: &mut Vec<Wedge>) {
        if left == 0 {
            out.push(Wedge(acc));
            return;
        }
        for i in start..n {
            if n - i < left {
                break;
            }
            rec(i + 1, n, left - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if p <= n {
        rec(0, n, p, 0, &mut out);
    }
    out
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
