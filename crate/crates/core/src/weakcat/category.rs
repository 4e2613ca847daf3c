use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A category with finitely many objects, numbered `0..object_count()`.
pub trait Category {
    type Arr: Copy + Eq + Hash + Ord + Debug + Send + Sync;

    fn object_count(&self) -> usize;

    fn object_label(&self, x: usize) -> String;

    fn arrow_label(&self, f: Self::Arr) -> String;

    fn src(&self, f: Self::Arr) -> usize;

    fn dst(&self, f: Self::Arr) -> usize;

    fn id(&self, x: usize) -> Self::Arr;

    /// `g ∘ f`.
    fn compose(&self, g: Self::Arr, f: Self::Arr) -> Result<Self::Arr>;

    fn hom(&self, x: usize, y: usize) -> Vec<Self::Arr>;

    fn inverse(&self, f: Self::Arr) -> Option<Self::Arr> {
        let (x, y) = (self.src(f), self.dst(f));
        self.hom(y, x).into_iter().find(|&g| {
            self.compose(g, f).ok() == Some(self.id(x)) && self.compose(f, g).ok() == Some(self.id(y))
        })
    }

    fn arrows(&self) -> Vec<Self::Arr> {
        let n = self.object_count();
        (0..n)
            .flat_map(|x| (0..n).flat_map(move |y| self.hom(x, y)))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrowSpec {
    pub id: String,
    pub src: String,
    pub dst: String,
}

/// A category given by tables, validated on construction.
#[derive(Clone, Debug)]
pub struct FiniteCategory {
    objects: Vec<String>,
    arrows: Vec<(String, usize, usize)>,
    identities: Vec<usize>,
    comp: HashMap<(usize, usize), usize>,
    homs: Vec<Vec<Vec<usize>>>,
    object_index: HashMap<String, usize>,
    arrow_index: HashMap<String, usize>,
}

fn check_name(kind: &str, name: &str) -> Result<()> {
    if name.is_empty() || name.contains([',', '∘', '=', '@']) || name.trim() != name {
        return Err(Error::InvalidData(format!(
            "{kind} name `{name}` must be non-empty and free of `,`, `∘`, `=`, `@` and surrounding spaces"
        )));
    }
    Ok(())
}

impl FiniteCategory {
    /// `compose` maps `(g, f)` to `g ∘ f` for every composable pair.
    pub fn new(
        objects: Vec<String>,
        arrows: Vec<ArrowSpec>,
        identities: &HashMap<String, String>,
        compose: &HashMap<(String, String), String>,
    ) -> Result<Self> {
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            check_name("object", o)?;
            if object_index.insert(o.clone(), i).is_some() {
                return Err(Error::InvalidData(format!("duplicate object `{o}`")));
            }
        }
        let obj = |name: &str| {
            object_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidData(format!("unknown object `{name}`")))
        };
        let mut arrow_index = HashMap::new();
        let mut table = Vec::new();
        for (i, a) in arrows.iter().enumerate() {
            check_name("arrow", &a.id)?;
            if arrow_index.insert(a.id.clone(), i).is_some() {
                return Err(Error::InvalidData(format!("duplicate arrow `{}`", a.id)));
            }
            table.push((a.id.clone(), obj(&a.src)?, obj(&a.dst)?));
        }
        let arr = |name: &str| {
            arrow_index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidData(format!("unknown arrow `{name}`")))
        };
        let mut ids = Vec::with_capacity(objects.len());
        for o in &objects {
            let name = identities
                .get(o)
                .ok_or_else(|| Error::InvalidData(format!("object `{o}` has no identity")))?;
            ids.push(arr(name)?);
        }
        let mut comp = HashMap::new();
        for ((g, f), h) in compose {
            comp.insert((arr(g)?, arr(f)?), arr(h)?);
        }
        Self::from_tables(objects, table, ids, comp)
    }

    /// Index-based constructor; arrows are `(label, src, dst)`.
    pub fn from_tables(
        objects: Vec<String>,
        arrows: Vec<(String, usize, usize)>,
        identities: Vec<usize>,
        comp: HashMap<(usize, usize), usize>,
    ) -> Result<Self> {
        let n = objects.len();
        let mut homs = vec![vec![Vec::new(); n]; n];
        for (i, &(_, s, d)) in arrows.iter().enumerate() {
            if s >= n || d >= n {
                return Err(Error::InvalidData(format!("arrow {i} has an endpoint out of range")));
            }
            homs[s][d].push(i);
        }
        let object_index = objects.iter().enumerate().map(|(i, o)| (o.clone(), i)).collect();
        let arrow_index = arrows.iter().enumerate().map(|(i, a)| (a.0.clone(), i)).collect();
        let cat = FiniteCategory {
            objects,
            arrows,
            identities,
            comp,
            homs,
            object_index,
            arrow_index,
        };
        cat.validate()?;
        Ok(cat)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Validation(msg));
        if self.identities.len() != self.objects.len() {
            return bad("one identity per object required".into());
        }
        for (x, &i) in self.identities.iter().enumerate() {
            if i >= self.arrows.len() || self.arrows[i].1 != x || self.arrows[i].2 != x {
                return bad(format!("identity of `{}` is not an endomorphism of it", self.objects[x]));
            }
        }
        for (&(g, f), &h) in &self.comp {
            if g >= self.arrows.len() || f >= self.arrows.len() || h >= self.arrows.len() {
                return bad("composition table mentions an unknown arrow".into());
            }
            if self.arrows[f].2 != self.arrows[g].1 {
                return bad(format!(
                    "{} ∘ {} is listed but the arrows are not composable",
                    self.arrows[g].0, self.arrows[f].0
                ));
            }
            if self.arrows[h].1 != self.arrows[f].1 || self.arrows[h].2 != self.arrows[g].2 {
                return bad(format!(
                    "{} ∘ {} = {} has the wrong endpoints",
                    self.arrows[g].0, self.arrows[f].0, self.arrows[h].0
                ));
            }
        }
        for f in 0..self.arrows.len() {
            let (_, s, d) = self.arrows[f];
            for &g in self.homs[d].iter().flatten() {
                if !self.comp.contains_key(&(g, f)) {
                    return bad(format!("{} ∘ {} is missing", self.arrows[g].0, self.arrows[f].0));
                }
            }
            if self.comp[&(self.identities[d], f)] != f || self.comp[&(f, self.identities[s])] != f {
                return bad(format!("identities are not units for {}", self.arrows[f].0));
            }
        }
        for f in 0..self.arrows.len() {
            for &g in self.homs[self.arrows[f].2].iter().flatten() {
                let gf = self.comp[&(g, f)];
                for &h in self.homs[self.arrows[g].2].iter().flatten() {
                    if self.comp[&(h, gf)] != self.comp[&(self.comp[&(h, g)], f)] {
                        return bad(format!(
                            "composition is not associative at {}, {}, {}",
                            self.arrows[h].0, self.arrows[g].0, self.arrows[f].0
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Exactly one arrow between any two objects; the arrow `x→y` is labelled `x>y`.
    pub fn indiscrete(objects: Vec<String>) -> Result<Self> {
        let n = objects.len();
        let idx = |x: usize, y: usize| x * n + y;
        let arrows = (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .map(|(x, y)| (format!("{}>{}", objects[x], objects[y]), x, y))
            .collect();
        let identities = (0..n).map(|x| idx(x, x)).collect();
        let mut comp = HashMap::new();
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    comp.insert((idx(y, z), idx(x, y)), idx(x, z));
                }
            }
        }
        Self::from_tables(objects, arrows, identities, comp)
    }

    /// One object whose endomorphisms are the monoid with multiplication
    /// `table[a][b] = a·b` and unit `unit`; composition `g ∘ f = g·f`.
    pub fn one_object(object: &str, elements: Vec<String>, table: &[Vec<usize>], unit: usize) -> Result<Self> {
        let n = elements.len();
        let arrows = elements.into_iter().map(|e| (e, 0, 0)).collect();
        let mut comp = HashMap::new();
        for g in 0..n {
            for f in 0..n {
                comp.insert((g, f), table[g][f]);
            }
        }
        Self::from_tables(vec![object.to_string()], arrows, vec![unit], comp)
    }

    pub fn object_index(&self, name: &str) -> Option<usize> {
        self.object_index.get(name).copied()
    }

    pub fn arrow_index(&self, name: &str) -> Option<usize> {
        self.arrow_index.get(name).copied()
    }

    pub fn objects(&self) -> &[String] {
        &self.objects
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow_specs(&self) -> Vec<ArrowSpec> {
        self.arrows
            .iter()
            .map(|(id, s, d)| ArrowSpec {
                id: id.clone(),
                src: self.objects[*s].clone(),
                dst: self.objects[*d].clone(),
            })
            .collect()
    }

    /// Composable pairs `(g, f)` with their composite.
    pub fn composition_table(&self) -> Vec<((usize, usize), usize)> {
        let mut v: Vec<_> = self.comp.iter().map(|(&k, &h)| (k, h)).collect();
        v.sort();
        v
    }

    /// True when every hom-set has at most one element.
    pub fn is_thin(&self) -> bool {
        self.homs.iter().flatten().all(|h| h.len() <= 1)
    }
}

impl Category for FiniteCategory {
    type Arr = usize;

    fn object_count(&self) -> usize {
        self.objects.len()
    }

    fn object_label(&self, x: usize) -> String {
        self.objects[x].clone()
    }

    fn arrow_label(&self, f: usize) -> String {
        self.arrows[f].0.clone()
    }

    fn src(&self, f: usize) -> usize {
        self.arrows[f].1
    }

    fn dst(&self, f: usize) -> usize {
        self.arrows[f].2
    }

    fn id(&self, x: usize) -> usize {
        self.identities[x]
    }

    fn compose(&self, g: usize, f: usize) -> Result<usize> {
        self.comp.get(&(g, f)).copied().ok_or_else(|| {
            Error::DegreeMismatch(format!(
                "{} ∘ {} is not defined",
                self.arrows[g].0, self.arrows[f].0
            ))
        })
    }

    fn hom(&self, x: usize, y: usize) -> Vec<usize> {
        self.homs[x][y].clone()
    }
}

/// All tuples of length `k` over `0..n`, in lexicographic order.
pub(crate) fn index_tuples(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut v = p.clone();
                    v.push(i);
                    v
                })
            })
            .collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indiscrete_is_thin_and_valid() {
        let c = FiniteCategory::indiscrete(vec!["a".into(), "b".into()]).unwrap();
        assert!(c.is_thin());
        assert_eq!(c.arrow_count(), 4);
        let f = c.hom(0, 1)[0];
        assert_eq!(c.inverse(f), Some(c.hom(1, 0)[0]));
    }

    #[test]
    fn rejects_non_associative_tables() {
        // a one-object "category" on {1, s, t} whose multiplication is not associative
        let table = vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 0, 1]];
        let names = vec!["1".to_string(), "s".into(), "t".into()];
        assert!(FiniteCategory::one_object("*", names, &table, 0).is_err());
    }

    #[test]
    fn named_constructor() {
        let ids = HashMap::from([("x".to_string(), "1x".to_string())]);
        let comp = HashMap::from([(("1x".to_string(), "1x".to_string()), "1x".to_string())]);
        let arrows = vec![ArrowSpec {
            id: "1x".into(),
            src: "x".into(),
            dst: "x".into(),
        }];
        let c = FiniteCategory::new(vec!["x".into()], arrows, &ids, &comp).unwrap();
        assert_eq!(c.compose(0, 0).unwrap(), 0);
        let bad = HashMap::new();
        let arrows = c.arrow_specs();
        assert!(FiniteCategory::new(vec!["x".into()], arrows, &ids, &bad).is_err());
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(index_tuples(2, 2), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(index_tuples(3, 0), vec![Vec::<usize>::new()]);
    }
}
