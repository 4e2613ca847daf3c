use super::{check_arity, Operad};
use crate::error::Result;
use crate::finmaps::{FinFunction, Perm};
use crate::terms::{Flavor, Signature};
use crate::trees::{
    compose_fp, compose_permuted, enumerate_permuted, enumerate_trees, enumerate_trees_of_arity,
    FPTree, PermutedTree, SRTree,
};

/// Trees over a signature composed by grafting.
#[derive(Clone, Debug)]
pub struct FreePlainOperad {
    pub signature: Signature,
}

/// Permuted trees over a signature.
#[derive(Clone, Debug)]
pub struct FreeSymmetricOperad {
    pub signature: Signature,
}

/// Pairs `(f, t)` of a tree and a relabelling of its leaves.
#[derive(Clone, Debug)]
pub struct FreeFpOperad {
    pub signature: Signature,
}

impl Operad for FreePlainOperad {
    type Elem = SRTree;

    fn name(&self) -> String {
        "free-plain".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Plain
    }

    fn arity(&self, p: &SRTree) -> usize {
        p.arity()
    }

    fn identity(&self) -> SRTree {
        SRTree::Leaf
    }

    fn compose(&self, p: &SRTree, qs: &[SRTree]) -> Result<SRTree> {
        p.graft(qs)
    }

    /// Trees of the arity with at most `bound` nodes.
    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<SRTree>> {
        Some(enumerate_trees_of_arity(&self.signature, arity, bound))
    }
}

impl Operad for FreeSymmetricOperad {
    type Elem = PermutedTree;

    fn name(&self) -> String {
        "free-symmetric".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Symmetric
    }

    fn arity(&self, p: &PermutedTree) -> usize {
        p.arity()
    }

    fn identity(&self) -> PermutedTree {
        PermutedTree::identity()
    }

    fn compose(&self, p: &PermutedTree, qs: &[PermutedTree]) -> Result<PermutedTree> {
        compose_permuted(p, qs)
    }

    fn act_perm(&self, sigma: &Perm, p: &PermutedTree) -> Result<PermutedTree> {
        check_arity(p.arity(), sigma.degree())?;
        p.act(sigma)
    }

    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<PermutedTree>> {
        Some(enumerate_permuted(&self.signature, arity, bound))
    }
}

impl Operad for FreeFpOperad {
    type Elem = FPTree;

    fn name(&self) -> String {
        "free-fp".into()
    }

    fn flavor(&self) -> Flavor {
        Flavor::Fp
    }

    fn arity(&self, p: &FPTree) -> usize {
        p.arity()
    }

    fn identity(&self) -> FPTree {
        FPTree::identity()
    }

    fn compose(&self, p: &FPTree, qs: &[FPTree]) -> Result<FPTree> {
        compose_fp(p, qs)
    }

    fn act_fn(&self, f: &FinFunction, p: &FPTree) -> Result<FPTree> {
        check_arity(p.arity(), f.dom())?;
        p.act(f)
    }

    /// Every labelling `⟦k⟧ → ⟦arity⟧` of every tree with at most `bound` nodes.
    fn enumerate(&self, arity: usize, bound: usize) -> Option<Vec<FPTree>> {
        let mut out = Vec::new();
        for tree in enumerate_trees(&self.signature, bound) {
            for fun in FinFunction::all(tree.arity(), arity) {
                out.push(FPTree::new(fun, tree.clone()).expect("domain is the tree arity"));
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operads::{operad_axiom_check, AxiomBounds};

    fn sig() -> Signature {
        Signature::from_ops([("m", 2), ("e", 0)]).unwrap()
    }

    #[test]
    fn free_operads_satisfy_axioms() {
        let bounds = AxiomBounds {
            max_arity: 2,
            element_bound: 3,
            ..AxiomBounds::default()
        };
        let plain = FreePlainOperad { signature: sig() };
        assert!(operad_axiom_check(&plain, &bounds).passed());
        let sym = FreeSymmetricOperad { signature: sig() };
        assert!(operad_axiom_check(&sym, &bounds).passed());
        let fp = FreeFpOperad { signature: sig() };
        assert!(operad_axiom_check(&fp, &bounds).passed());
    }
}
