//! Finite cyclic and symmetric group actions on affine space.

use alloc::vec;
use alloc::vec::Vec;

use num_integer::{gcd, lcm, Integer};

use crate::motivic::Exponent;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GroupError {
    #[error("group order must be positive")]
    ZeroOrder,
    #[error("exponent {exp} is not reduced modulo {l}")]
    ExponentOutOfRange { exp: u64, l: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("Jordan block of size {size} is not unipotent of order {p}")]
    BadBlock { size: usize, p: u64 },
    #[error("matrix is not square or not of order p")]
    BadMatrix,
    #[error("unsupported size {0}")]
    TooLarge(u64),
}

/// `μ_l` acting diagonally: the generator scales `x_i` by `ζ^{a_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TameCyclicAction {
    l: u64,
    exponents: Vec<u64>,
}

impl TameCyclicAction {
    pub fn new(l: u64, exponents: Vec<u64>) -> Result<Self, GroupError> {
        if l == 0 {
            return Err(GroupError::ZeroOrder);
        }
        if let Some(&exp) = exponents.iter().find(|&&a| a >= l) {
            return Err(GroupError::ExponentOutOfRange { exp, l });
        }
        Ok(TameCyclicAction { l, exponents })
    }

    pub fn order(&self) -> u64 {
        self.l
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn dim(&self) -> usize {
        self.exponents.len()
    }

    /// `Σ ((k a_i) mod l) / l`.
    pub fn age(&self, k: u64) -> Exponent {
        let s: u64 = self.exponents.iter().map(|a| (k % self.l) * a % self.l).sum();
        Exponent::new(s as i64, self.l as i64)
    }

    pub fn fixed_dim(&self, k: u64) -> usize {
        self.exponents.iter().filter(|&&a| (k % self.l) * a % self.l == 0).count()
    }

    /// Whether `g^k` acts as the identity.
    pub fn is_trivial_power(&self, k: u64) -> bool {
        self.fixed_dim(k) == self.dim()
    }

    /// Order of the image of the group in `GL_d`.
    pub fn effective_order(&self) -> u64 {
        self.exponents.iter().fold(1, |acc, &a| lcm(acc, self.l / gcd(self.l, a)))
    }

    pub fn is_faithful(&self) -> bool {
        self.effective_order() == self.l
    }

    /// The faithful action of the image group.
    pub fn effective(&self) -> TameCyclicAction {
        let l = self.effective_order();
        let f = self.l / l;
        TameCyclicAction { l, exponents: self.exponents.iter().map(|a| a / f).collect() }
    }

    /// The subgroup `<g^k>` as a cyclic group of order `l / gcd(l, k)`
    /// generated by `g^k`.
    pub fn power(&self, k: u64) -> TameCyclicAction {
        let g = gcd(self.l, k % self.l);
        let g = if g == 0 { self.l } else { g };
        let l2 = self.l / g;
        let step = (k % self.l) / g;
        let exponents = self.exponents.iter().map(|a| step * a % l2).collect();
        TameCyclicAction { l: l2, exponents }
    }

    pub fn direct_sum(&self, other: &Self) -> Option<Self> {
        if self.l != other.l {
            return None;
        }
        let mut exponents = self.exponents.clone();
        exponents.extend_from_slice(&other.exponents);
        Some(TameCyclicAction { l: self.l, exponents })
    }

    pub fn has_pseudo_reflection(&self) -> bool {
        let d = self.dim();
        (1..self.l).any(|k| !self.is_trivial_power(k) && self.fixed_dim(k) + 1 == d)
    }
}

/// `Z/p` in characteristic `p` acting by unipotent Jordan blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularCyclicAction {
    p: u64,
    blocks: Vec<usize>,
}

impl ModularCyclicAction {
    pub fn new(p: u64, mut blocks: Vec<usize>) -> Result<Self, GroupError> {
        if !crate::field::is_prime(p) {
            return Err(GroupError::NotPrime(p));
        }
        if let Some(&size) = blocks.iter().find(|&&b| b == 0 || b as u64 > p) {
            return Err(GroupError::BadBlock { size, p });
        }
        blocks.sort_unstable_by(|a, b| b.cmp(a));
        Ok(ModularCyclicAction { p, blocks })
    }

    /// Jordan type of an order-`p` matrix over `F_p`, read off from the
    /// ranks of `(g - 1)^k`.
    pub fn from_matrix(p: u64, g: &[Vec<u64>]) -> Result<Self, GroupError> {
        let d = g.len();
        if g.iter().any(|r| r.len() != d) || !crate::field::is_prime(p) {
            return Err(GroupError::BadMatrix);
        }
        let mut n: Vec<Vec<u64>> = g.iter().map(|r| r.iter().map(|x| x % p).collect()).collect();
        for (i, row) in n.iter_mut().enumerate() {
            row[i] = (row[i] + p - 1) % p;
        }
        // ranks[k] = rank (g - 1)^k
        let mut ranks = vec![d];
        let mut pow = n.clone();
        for _ in 0..d {
            let r = rank_mod_p(&pow, p);
            ranks.push(r);
            if r == 0 {
                break;
            }
            pow = mat_mul_mod(&pow, &n, p);
        }
        if *ranks.last().unwrap() != 0 {
            return Err(GroupError::BadMatrix);
        }
        // number of blocks of size >= k is ranks[k-1] - ranks[k]
        let mut blocks = Vec::new();
        for k in 1..ranks.len() {
            let at_least_k = ranks[k - 1] - ranks[k];
            let at_least_next = if k + 1 < ranks.len() { ranks[k] - ranks[k + 1] } else { 0 };
            for _ in 0..at_least_k - at_least_next {
                blocks.push(k);
            }
        }
        Self::new(p, blocks)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Every non-identity element has the generator's Jordan type.
    pub fn fixed_dim(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_faithful(&self) -> bool {
        self.blocks.iter().any(|&b| b >= 2)
    }

    pub fn has_pseudo_reflection(&self) -> bool {
        self.is_faithful() && self.fixed_dim() + 1 == self.dim()
    }

    pub fn direct_sum(&self, other: &Self) -> Option<Self> {
        if self.p != other.p {
            return None;
        }
        let mut blocks = self.blocks.clone();
        blocks.extend_from_slice(&other.blocks);
        Self::new(self.p, blocks).ok()
    }

    /// Generator matrix: `g e_1 = e_1`, `g e_k = e_k + e_{k-1}` in each
    /// block.
    pub fn matrix(&self) -> Vec<Vec<u64>> {
        let d = self.dim();
        let mut m = vec![vec![0u64; d]; d];
        let mut off = 0;
        for &b in &self.blocks {
            for k in 0..b {
                m[off + k][off + k] = 1;
                if k > 0 {
                    m[off + k - 1][off + k] = 1;
                }
            }
            off += b;
        }
        m
    }
}

/// `S_n` permuting the factors of `(A^m)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PermAction {
    pub n: usize,
    pub m: usize,
}

impl PermAction {
    pub fn dim(&self) -> usize {
        self.n * self.m
    }

    pub fn fixed_dim(&self, cycle_type: &[usize]) -> usize {
        self.m * cycle_type.len()
    }

    pub fn has_pseudo_reflection(&self) -> bool {
        // a transposition fixes codimension m
        self.n >= 2 && self.m == 1
    }
}

/// A linear action of a finite group, in one of the supported shapes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearAction {
    Tame(TameCyclicAction),
    Modular(ModularCyclicAction),
    Perm(PermAction),
}

impl LinearAction {
    pub fn dim(&self) -> usize {
        match self {
            LinearAction::Tame(a) => a.dim(),
            LinearAction::Modular(a) => a.dim(),
            LinearAction::Perm(a) => a.dim(),
        }
    }

    pub fn group_order(&self) -> u64 {
        match self {
            LinearAction::Tame(a) => a.order(),
            LinearAction::Modular(a) => a.p(),
            LinearAction::Perm(a) => factorial(a.n as u64),
        }
    }

    pub fn has_pseudo_reflection(&self) -> bool {
        match self {
            LinearAction::Tame(a) => a.has_pseudo_reflection(),
            LinearAction::Modular(a) => a.has_pseudo_reflection(),
            LinearAction::Perm(a) => a.has_pseudo_reflection(),
        }
    }
}

pub fn factorial(n: u64) -> u64 {
    (1..=n).product()
}

/// Representative of a conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassRep {
    CycleType(Vec<usize>),
    Power(u64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjClassData {
    pub rep: ClassRep,
    pub size: u64,
    pub centralizer: u64,
    pub element_order: u64,
}

/// Partitions of `n`, parts in non-increasing order, listed in reverse
/// lexicographic order starting from `(n)`.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(n: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if n == 0 {
            out.push(cur.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            cur.push(k);
            go(n - k, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Conjugacy classes of `S_n`, `n <= 20`.
pub fn conj_classes_symmetric(n: usize) -> Result<Vec<ConjClassData>, GroupError> {
    if n > 20 {
        return Err(GroupError::TooLarge(n as u64));
    }
    let order = factorial(n as u64);
    Ok(partitions(n)
        .into_iter()
        .map(|lambda| {
            let mut centralizer = 1u64;
            let mut i = 0;
            while i < lambda.len() {
                let k = lambda[i];
                let mult = lambda[i..].iter().take_while(|&&x| x == k).count();
                centralizer *= (k as u64).pow(mult as u32) * factorial(mult as u64);
                i += mult;
            }
            let element_order = lambda.iter().fold(1u64, |a, &k| lcm(a, k as u64));
            ConjClassData {
                rep: ClassRep::CycleType(lambda),
                size: order / centralizer,
                centralizer,
                element_order,
            }
        })
        .collect())
}

/// Conjugacy classes of the cyclic group of order `l`: one per element.
pub fn conj_classes_cyclic(l: u64) -> Vec<ConjClassData> {
    (0..l)
        .map(|k| ConjClassData {
            rep: ClassRep::Power(k),
            size: 1,
            centralizer: l,
            element_order: l / gcd(l, k),
        })
        .collect()
}

/// Eigenvalue exponents of a permutation of cycle type `lambda` acting on
/// `(A^m)^n`, as a diagonal action of order `lcm(lambda)`: a `k`-cycle
/// contributes every `k`-th root of unity, each `m` times.
pub fn perm_exponents(lambda: &[usize], m: usize) -> TameCyclicAction {
    let l = lambda.iter().fold(1u64, |a, &k| lcm(a, k as u64));
    let mut exponents = Vec::with_capacity(m * lambda.iter().sum::<usize>());
    for &k in lambda {
        let step = l / k as u64;
        for j in 0..k as u64 {
            for _ in 0..m {
                exponents.push(j * step);
            }
        }
    }
    TameCyclicAction { l, exponents }
}

pub(crate) fn rank_mod_p(m: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m.to_vec();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| a[r][c] % p != 0) else { continue };
        a.swap(rank, piv);
        let inv = inv_mod(a[rank][c], p);
        for r in 0..rows {
            if r != rank && a[r][c] % p != 0 {
                let f = a[r][c] * inv % p;
                for j in c..cols {
                    a[r][j] = (a[r][j] + p * p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn inv_mod(a: u64, p: u64) -> u64 {
    let e = (a as i64).extended_gcd(&(p as i64));
    e.x.rem_euclid(p as i64) as u64
}

fn mat_mul_mod(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let n = a.len();
    let k = b.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![0u64; m]; n];
    for i in 0..n {
        for t in 0..k {
            if a[i][t] == 0 {
                continue;
            }
            for j in 0..m {
                out[i][j] = (out[i][j] + a[i][t] * b[t][j]) % p;
            }
        }
    }
    out
}
