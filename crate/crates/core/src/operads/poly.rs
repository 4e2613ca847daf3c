use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finmaps::FinFunction;

/// An integer polynomial in the commuting variables `x_1, …, x_n`, stored as a
/// sparse map from exponent vectors to non-zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Polynomial {
    vars: usize,
    terms: BTreeMap<Vec<u32>, i64>,
}

fn overflow() -> Error {
    Error::Unsupported("integer coefficient overflow".into())
}

impl Polynomial {
    pub fn zero(vars: usize) -> Self {
        Polynomial {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: usize, c: i64) -> Self {
        let mut p = Polynomial::zero(vars);
        p.add_term(vec![0; vars], c).expect("single term cannot overflow");
        p
    }

    pub fn variable(vars: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= vars, "x{i} outside 1..={vars}");
        let mut e = vec![0; vars];
        e[i - 1] = 1;
        Polynomial::monomial(e, 1)
    }

    pub fn monomial(exponents: Vec<u32>, coeff: i64) -> Self {
        let mut p = Polynomial::zero(exponents.len());
        p.add_term(exponents, coeff).expect("single term cannot overflow");
        p
    }

    /// Builds from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms(vars: usize, terms: impl IntoIterator<Item = (Vec<u32>, i64)>) -> Result<Self> {
        let mut p = Polynomial::zero(vars);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::ArityMismatch {
                    expected: vars,
                    found: e.len(),
                });
            }
            p.add_term(e, c)?;
        }
        Ok(p)
    }

    fn add_term(&mut self, exponents: Vec<u32>, coeff: i64) -> Result<()> {
        if coeff == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(exponents).or_insert(0);
        *entry = entry.checked_add(coeff).ok_or_else(overflow)?;
        if *entry == 0 {
            self.terms.retain(|_, c| *c != 0);
        }
        Ok(())
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], i64)> {
        self.terms.iter().map(|(e, &c)| (e.as_slice(), c))
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_vars(other)?;
        let mut out = self.clone();
        for (e, &c) in &other.terms {
            out.add_term(e.clone(), c)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_vars(other)?;
        let mut out = Polynomial::zero(self.vars);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.checked_mul(c2).ok_or_else(overflow)?)?;
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<Polynomial> {
        let mut out = Polynomial::constant(self.vars, 1);
        for _ in 0..k {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    fn same_vars(&self, other: &Polynomial) -> Result<()> {
        if self.vars != other.vars {
            return Err(Error::ArityMismatch {
                expected: self.vars,
                found: other.vars,
            });
        }
        Ok(())
    }

    /// `self(values_1, …, values_n)`, all values polynomials in a common set of variables.
    pub fn substitute(&self, values: &[Polynomial], vars: usize) -> Result<Polynomial> {
        if values.len() != self.vars {
            return Err(Error::ArityMismatch {
                expected: self.vars,
                found: values.len(),
            });
        }
        let mut out = Polynomial::zero(vars);
        for (e, &c) in &self.terms {
            let mut term = Polynomial::constant(vars, c);
            for (v, &k) in values.iter().zip(e) {
                if k > 0 {
                    term = term.mul(&v.pow(k)?)?;
                }
            }
            out = out.add(&term)?;
        }
        Ok(out)
    }

    /// Moves `x_i` to `x_{offset+i}` inside `total` variables.
    pub fn shift(&self, offset: usize, total: usize) -> Polynomial {
        let mut out = Polynomial::zero(total);
        for (e, &c) in &self.terms {
            let mut e2 = vec![0; total];
            e2[offset..offset + self.vars].copy_from_slice(e);
            out.terms.insert(e2, c);
        }
        out
    }

    /// `x_i ↦ x_f(i)` for `f : ⟦n⟧ → ⟦m⟧`.
    pub fn relabel(&self, f: &FinFunction) -> Result<Polynomial> {
        if f.dom() != self.vars {
            return Err(Error::ArityMismatch {
                expected: self.vars,
                found: f.dom(),
            });
        }
        let mut out = Polynomial::zero(f.cod());
        for (e, &c) in &self.terms {
            let mut e2 = vec![0; f.cod()];
            for (i, &k) in e.iter().enumerate() {
                e2[f.apply(i + 1) - 1] += k;
            }
            out.add_term(e2, c)?;
        }
        Ok(out)
    }

    pub fn eval(&self, point: &[i64]) -> Result<i64> {
        if point.len() != self.vars {
            return Err(Error::ArityMismatch {
                expected: self.vars,
                found: point.len(),
            });
        }
        let mut acc: i64 = 0;
        for (e, &c) in &self.terms {
            let mut t = c;
            for (&x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t = t.checked_mul(x).ok_or_else(overflow)?;
                }
            }
            acc = acc.checked_add(t).ok_or_else(overflow)?;
        }
        Ok(acc)
    }

    /// Terms in graded-lex order, highest first.
    fn graded_terms(&self) -> Vec<(&Vec<u32>, i64)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, &c)| (e, c)).collect();
        v.sort_by(|(a, _), (b, _)| {
            let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0/{}", self.vars);
        }
        for (k, (e, c)) in self.graded_terms().into_iter().enumerate() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{}", i + 1) } else { format!("x{}^{k}", i + 1) })
                .collect();
            let sign = if c < 0 { "-" } else if k > 0 { "+" } else { "" };
            let mag = c.unsigned_abs();
            if k > 0 {
                f.write_str(" ")?;
            }
            f.write_str(sign)?;
            if k > 0 {
                f.write_str(" ")?;
            }
            match (mono.is_empty(), mag) {
                (true, _) => write!(f, "{mag}")?,
                (false, 1) => write!(f, "{}", mono.join("*"))?,
                (false, _) => write!(f, "{mag}*{}", mono.join("*"))?,
            }
        }
        write!(f, " /{}", self.vars)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x1 = Polynomial::variable(2, 1);
        let x2 = Polynomial::variable(2, 2);
        let p = x1.add(&x2).unwrap().pow(2).unwrap();
        assert_eq!(p.to_string(), "x1^2 + 2*x1*x2 + x2^2 /2");
        assert_eq!(p.eval(&[2, 3]).unwrap(), 25);
        let q = x1.add(&Polynomial::constant(2, -1)).unwrap();
        assert_eq!(q.to_string(), "x1 - 1 /2");
        assert!(x1.add(&q.mul(&Polynomial::zero(2)).unwrap()).unwrap() == x1);
    }

    #[test]
    fn relabel_merges_variables() {
        let p = Polynomial::variable(2, 1).mul(&Polynomial::variable(2, 2)).unwrap();
        let f = FinFunction::new(vec![1, 1], 1).unwrap();
        assert_eq!(p.relabel(&f).unwrap(), Polynomial::monomial(vec![2], 1));
    }
}
