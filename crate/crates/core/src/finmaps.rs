//! Functions and permutations of the finite sets `⟦n⟧ = {1, …, n}`.
//!
//! Tables are one-line and 1-indexed: `f(i)` is `table[i - 1]`. Permutations act
//! on positions, so `[2,1,3]` sends input 1 to slot 2 and input 2 to slot 1.
//!
//! Two structural compositions live here: [`block_compose`], the composition of
//! the operad of symmetries, and [`comb_compose`], the "combing out" of finite
//! functions that governs how relabellings pass through operadic composition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A function `⟦dom⟧ → ⟦cod⟧`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FinFunction {
    cod: usize,
    table: Vec<usize>,
}

impl FinFunction {
    pub fn new(table: Vec<usize>, cod: usize) -> Result<Self> {
        if let Some(bad) = table.iter().find(|&&v| v == 0 || v > cod) {
            return Err(Error::InvalidFunction(format!(
                "value {bad} outside codomain ⟦{cod}⟧"
            )));
        }
        Ok(FinFunction { cod, table })
    }

    pub fn identity(n: usize) -> Self {
        FinFunction {
            cod: n,
            table: (1..=n).collect(),
        }
    }

    /// The map `⟦1⟧ → ⟦n⟧` picking out `i`.
    pub fn point(i: usize, n: usize) -> Result<Self> {
        FinFunction::new(vec![i], n)
    }

    pub fn dom(&self) -> usize {
        self.table.len()
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn table(&self) -> &[usize] {
        &self.table
    }

    /// `f(i)` for `1 ≤ i ≤ dom`.
    pub fn apply(&self, i: usize) -> usize {
        self.table[i - 1]
    }

    /// `self ∘ inner`, i.e. `i ↦ self(inner(i))`.
    pub fn after(&self, inner: &FinFunction) -> Result<FinFunction> {
        if inner.cod != self.dom() {
            return Err(Error::DegreeMismatch(format!(
                "cannot compose ⟦{}⟧→⟦{}⟧ after ⟦{}⟧→⟦{}⟧",
                self.dom(),
                self.cod,
                inner.dom(),
                inner.cod
            )));
        }
        Ok(FinFunction {
            cod: self.cod,
            table: inner.table.iter().map(|&j| self.apply(j)).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self.cod == self.dom() && self.table.iter().enumerate().all(|(i, &v)| v == i + 1)
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.cod + 1];
        self.table.iter().all(|&v| !std::mem::replace(&mut seen[v], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut seen = vec![false; self.cod + 1];
        for &v in &self.table {
            seen[v] = true;
        }
        seen[1..].iter().all(|&b| b)
    }

    pub fn is_bijection(&self) -> bool {
        self.dom() == self.cod && self.is_injective()
    }

    pub fn to_perm(&self) -> Option<Perm> {
        self.is_bijection().then(|| Perm(self.clone()))
    }

    /// Every function `⟦n⟧ → ⟦m⟧`, in lexicographic order of tables.
    pub fn all(n: usize, m: usize) -> Vec<FinFunction> {
        let mut out = Vec::new();
        if n > 0 && m == 0 {
            return out;
        }
        let mut table = vec![1; n];
        loop {
            out.push(FinFunction {
                cod: m,
                table: table.clone(),
            });
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if table[i] < m {
                    table[i] += 1;
                    for t in &mut table[i + 1..] {
                        *t = 1;
                    }
                    break;
                }
            }
        }
    }
}

impl fmt::Display for FinFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_table(f, &self.table)
    }
}

/// A bijection of `⟦n⟧`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Perm(FinFunction);

impl Perm {
    pub fn new(table: Vec<usize>) -> Result<Self> {
        let n = table.len();
        let f = FinFunction::new(table, n)?;
        if !f.is_injective() {
            return Err(Error::InvalidFunction(format!("{f} is not a permutation")));
        }
        Ok(Perm(f))
    }

    pub fn identity(n: usize) -> Self {
        Perm(FinFunction::identity(n))
    }

    /// The transposition of `⟦2⟧`.
    pub fn swap2() -> Self {
        Perm(FinFunction {
            cod: 2,
            table: vec![2, 1],
        })
    }

    pub fn degree(&self) -> usize {
        self.0.dom()
    }

    pub fn table(&self) -> &[usize] {
        self.0.table()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0.apply(i)
    }

    pub fn as_fn(&self) -> &FinFunction {
        &self.0
    }

    pub fn into_fn(self) -> FinFunction {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_identity()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Perm) -> Result<Perm> {
        if self.degree() != other.degree() {
            return Err(Error::DegreeMismatch(format!(
                "permutations of degree {} and {}",
                self.degree(),
                other.degree()
            )));
        }
        self.0.after(&other.0).map(Perm)
    }

    pub fn inverse(&self) -> Perm {
        let mut table = vec![0; self.degree()];
        for (i, &v) in self.table().iter().enumerate() {
            table[v - 1] = i + 1;
        }
        Perm(FinFunction {
            cod: self.degree(),
            table,
        })
    }

    /// All permutations of degree `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        let mut out = Vec::new();
        let mut table: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Perm(FinFunction {
                cod: n,
                table: table.clone(),
            }));
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| table[i - 1] < table[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| table[j] > table[i - 1]).unwrap();
            table.swap(i - 1, j);
            table[i..].reverse();
        }
    }
}

impl TryFrom<Vec<usize>> for Perm {
    type Error = Error;

    fn try_from(table: Vec<usize>) -> Result<Self> {
        Perm::new(table)
    }
}

impl From<Perm> for Vec<usize> {
    fn from(p: Perm) -> Self {
        p.0.table
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_table(f, self.table())
    }
}

impl FromStr for Perm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Perm::new(parse_table(s)?)
    }
}

fn write_table(f: &mut fmt::Formatter<'_>, table: &[usize]) -> fmt::Result {
    f.write_str("[")?;
    for (i, v) in table.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("]")
}

/// Parses a one-line bracket list such as `[2,1,3]`.
pub fn parse_table(s: &str) -> Result<Vec<usize>> {
    let s = s.trim();
    let inner = s
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| Error::parse(1, 1, format!("expected `[…]`, found `{s}`")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|tok| {
            tok.trim()
                .parse::<usize>()
                .map_err(|e| Error::parse(1, 1, format!("bad entry `{}`: {e}", tok.trim())))
        })
        .collect()
}

pub fn perm_identity(n: usize) -> Perm {
    Perm::identity(n)
}

pub fn perm_compose(sigma: &Perm, rho: &Perm) -> Result<Perm> {
    sigma.compose(rho)
}

pub fn perm_inverse(sigma: &Perm) -> Perm {
    sigma.inverse()
}

/// Composition in the operad of symmetries.
///
/// The inputs are cut into consecutive blocks of sizes `k_1, …, k_n` (the degrees of
/// `inner`); block `j` is moved to block slot `σ(j)` and its entries are permuted
/// by `τ_j`:
///
/// ```text
/// (Σ_{i<j} k_i) + m  ↦  (Σ_{i : σ(i) < σ(j)} k_i) + τ_j(m)
/// ```
pub fn block_compose(sigma: &Perm, inner: &[Perm]) -> Result<Perm> {
    let n = sigma.degree();
    if inner.len() != n {
        return Err(Error::DegreeMismatch(format!(
            "block composition of a degree-{n} permutation with {} blocks",
            inner.len()
        )));
    }
    let sizes: Vec<usize> = inner.iter().map(Perm::degree).collect();
    let total: usize = sizes.iter().sum();
    let mut table = Vec::with_capacity(total);
    for (j, tau) in inner.iter().enumerate() {
        let target_offset: usize = (0..n)
            .filter(|&i| sigma.apply(i + 1) < sigma.apply(j + 1))
            .map(|i| sizes[i])
            .sum();
        table.extend(tau.table().iter().map(|&m| target_offset + m));
    }
    Perm::new(table)
}

/// The "combing out" of `f : ⟦n⟧ → ⟦m⟧` past inner maps `g_i : ⟦k_i⟧ → ⟦j_i⟧`,
/// one for each element of the codomain `⟦m⟧`.
///
/// Result: `⟦Σ_p k_{f(p)}⟧ → ⟦Σ_i j_i⟧`, sending
/// `(Σ_{i<p} k_{f(i)}) + h ↦ (Σ_{i<f(p)} j_i) + g_{f(p)}(h)`. It is the unique map with
/// `(f·p)∘(g_1·q_1, …, g_m·q_m) = comb(f, g•)·(p∘(q_{f(1)}, …, q_{f(n)}))`.
pub fn comb_compose(f: &FinFunction, inner: &[FinFunction]) -> Result<FinFunction> {
    if inner.len() != f.cod() {
        return Err(Error::DegreeMismatch(format!(
            "combing a map into ⟦{}⟧ needs {} inner maps, got {}",
            f.cod(),
            f.cod(),
            inner.len()
        )));
    }
    let mut cod_offsets = Vec::with_capacity(inner.len());
    let mut acc = 0;
    for g in inner {
        cod_offsets.push(acc);
        acc += g.cod();
    }
    let mut table = Vec::new();
    for &target in f.table() {
        let g = &inner[target - 1];
        table.extend(g.table().iter().map(|&h| cod_offsets[target - 1] + h));
    }
    FinFunction::new(table, acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(t: &[usize]) -> Perm {
        Perm::new(t.to_vec()).unwrap()
    }

    #[test]
    fn group_laws() {
        let sigma = p(&[3, 1, 2]);
        assert_eq!(perm_compose(&perm_identity(3), &sigma).unwrap(), sigma);
        assert_eq!(
            perm_compose(&sigma, &perm_inverse(&sigma)).unwrap(),
            perm_identity(3)
        );
        assert_eq!(
            perm_compose(&Perm::swap2(), &Perm::swap2()).unwrap(),
            perm_identity(2)
        );
        assert!(perm_compose(&sigma, &Perm::swap2()).is_err());
    }

    #[test]
    fn block_compose_examples() {
        let ids = [Perm::identity(2), Perm::identity(0), Perm::identity(3)];
        assert_eq!(
            block_compose(&Perm::identity(3), &ids).unwrap(),
            Perm::identity(5)
        );
        assert_eq!(
            block_compose(&Perm::swap2(), &[Perm::identity(1), Perm::identity(1)]).unwrap(),
            Perm::swap2()
        );
        assert_eq!(
            block_compose(&Perm::identity(2), &[Perm::swap2(), Perm::identity(1)]).unwrap(),
            p(&[2, 1, 3])
        );
        assert!(block_compose(&Perm::swap2(), &[Perm::identity(1)]).is_err());
    }

    #[test]
    fn rejects_bad_tables() {
        assert!(Perm::new(vec![1, 1]).is_err());
        assert!(Perm::new(vec![0, 1]).is_err());
        assert!(FinFunction::new(vec![3], 2).is_err());
        assert!("[1,2".parse::<Perm>().is_err());
    }

    #[test]
    fn one_line_notation() {
        let sigma: Perm = " [2, 1,3] ".parse().unwrap();
        assert_eq!(sigma.to_string(), "[2,1,3]");
        assert_eq!("[]".parse::<Perm>().unwrap(), Perm::identity(0));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(Perm::all(0).len(), 1);
        assert_eq!(Perm::all(4).len(), 24);
        assert_eq!(FinFunction::all(3, 2).len(), 8);
        assert_eq!(FinFunction::all(0, 0).len(), 1);
        assert_eq!(FinFunction::all(2, 0).len(), 0);
    }

    #[test]
    fn comb_identity() {
        let id = FinFunction::identity(2);
        let inner = [FinFunction::identity(3), FinFunction::identity(1)];
        assert!(comb_compose(&id, &inner).unwrap().is_identity());
    }
}
