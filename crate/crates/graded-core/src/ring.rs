//! Ring abstraction.
//!
//! Every coefficient domain in this crate (Leavitt path algebras, Laurent
//! polynomial rings, plain scalars, reconstructed graded rings) implements
//! [`Ring`]: exact arithmetic on elements kept in a canonical normal form,
//! so equality is literal comparison. Graded rings additionally implement
//! [`GradedRing`], exposing the homogeneous decomposition with ℤ-valued
//! degrees.
//!
//! Rings are lightweight *handles* (cheap to clone, typically wrapping an
//! `Arc` of shared data); elements do not carry their ring, so all
//! operations go through the handle.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::linalg::{solve, ScalarMat};
use crate::scalar::Scalar;

/// One term of a formal relation: `coeff · gen₁ gen₂ ⋯ genₖ`.
///
/// The word is a sequence of generator names; the empty word denotes `1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelTerm<S: Scalar> {
    pub coeff: S,
    pub word: Vec<String>,
}

/// A declared relation `Σ lhs = Σ rhs` between formal words in the
/// generators. Used to verify that generator-image maps (derivations,
/// homomorphism witnesses) are well defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation<S: Scalar> {
    pub label: String,
    pub lhs: Vec<RelTerm<S>>,
    pub rhs: Vec<RelTerm<S>>,
}

/// A unital associative ring with exact arithmetic and canonical forms.
pub trait Ring: Clone + 'static {
    /// Ground scalars (exact rationals or Gaussian rationals).
    type Sc: Scalar;
    /// Elements, always held in canonical normal form.
    type Elem: Clone + PartialEq + Debug + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
    /// Multiplication. Fallible: window-partial rings may refuse products
    /// whose degree leaves the computation window.
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    fn scale(&self, c: &Self::Sc, a: &Self::Elem) -> Self::Elem;

    /// Whether the ring carries an involution.
    fn has_star(&self) -> bool {
        false
    }
    /// Conjugate-linear anti-multiplicative involution, if present.
    fn star(&self, _a: &Self::Elem) -> Result<Self::Elem> {
        Err(Error::MissingInvolution(format!(
            "{} has no involution",
            self.describe()
        )))
    }

    /// Named generators, in a fixed order.
    fn generators(&self) -> Vec<(String, Self::Elem)>;

    /// Declared relations among the generators (may be empty for rings
    /// whose presentation is not tracked).
    fn relations(&self) -> Vec<Relation<Self::Sc>> {
        Vec::new()
    }

    /// Canonical linear coordinates of an element: a list of
    /// `(basis-monomial key, coefficient)` pairs with distinct keys and
    /// nonzero coefficients. Two elements are equal iff their supports
    /// agree, and the support of a sum is the coefficientwise sum.
    fn monomial_support(&self, a: &Self::Elem) -> Vec<(String, Self::Sc)>;

    /// Express `a` as a formal sum `Σ c·(gen₁ gen₂ ⋯)` of scalar-weighted
    /// words in the named generators. This is how generator-image maps
    /// (homomorphisms, derivations) evaluate on arbitrary elements; each
    /// returned word must multiply back to its monomial exactly.
    fn decompose_words(&self, a: &Self::Elem) -> Result<Vec<(Self::Sc, Vec<String>)>>;

    /// Human-readable rendering of an element.
    fn display(&self, a: &Self::Elem) -> String;

    /// Short description of the ring itself (for reports).
    fn describe(&self) -> String;

    /// Look up a generator by name.
    fn generator(&self, name: &str) -> Result<Self::Elem> {
        self.generators()
            .into_iter()
            .find(|(n, _)| n == name)
            .map(|(_, e)| e)
            .ok_or_else(|| {
                Error::UnknownSymbol(format!("{} in {}", name, self.describe()))
            })
    }

    /// Evaluate a formal word (product of named generators; empty = 1).
    fn eval_word(&self, word: &[String]) -> Result<Self::Elem> {
        let mut acc = self.one();
        for name in word {
            let g = self.generator(name)?;
            acc = self.mul(&acc, &g)?;
        }
        Ok(acc)
    }

    /// Evaluate one side of a relation.
    fn eval_terms(&self, terms: &[RelTerm<Self::Sc>]) -> Result<Self::Elem> {
        let mut acc = self.zero();
        for t in terms {
            let w = self.eval_word(&t.word)?;
            acc = self.add(&acc, &self.scale(&t.coeff, &w));
        }
        Ok(acc)
    }

    /// Check that all declared relations actually hold for the generator
    /// values (a sanity check on the presentation itself).
    fn check_relations(&self) -> Result<()> {
        for rel in self.relations() {
            let l = self.eval_terms(&rel.lhs)?;
            let r = self.eval_terms(&rel.rhs)?;
            if l != r {
                return Err(Error::RelationViolated(format!(
                    "{}: {} != {}",
                    rel.label,
                    self.display(&l),
                    self.display(&r)
                )));
            }
        }
        Ok(())
    }
}

/// A ℤ-graded ring (degrees are integers; finite groups are handled by
/// reconstruction, where degrees index the group's elements).
pub trait GradedRing: Ring {
    /// Homogeneous decomposition: sorted `(degree, component)` pairs with
    /// nonzero components; their sum is the input.
    fn split_degrees(&self, a: &Self::Elem) -> Vec<(i64, Self::Elem)>;

    /// The component of `a` in a single degree.
    fn component_of(&self, a: &Self::Elem, g: i64) -> Self::Elem {
        self.split_degrees(a)
            .into_iter()
            .find(|(d, _)| *d == g)
            .map(|(_, c)| c)
            .unwrap_or_else(|| self.zero())
    }

    /// Whether `a` is homogeneous of degree `g` (zero counts for every g).
    fn is_homogeneous(&self, a: &Self::Elem, g: i64) -> bool {
        let parts = self.split_degrees(a);
        parts.is_empty() || (parts.len() == 1 && parts[0].0 == g)
    }
}

// ---------------------------------------------------------------------------
// Scalar ring
// ---------------------------------------------------------------------------

/// The ground field itself as a ring (elements are plain scalars).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarRing<S: Scalar> {
    _marker: std::marker::PhantomData<S>,
}

impl<S: Scalar> Default for ScalarRing<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> ScalarRing<S> {
    pub fn new() -> Self {
        ScalarRing {
            _marker: std::marker::PhantomData,
        }
    }
}

impl<S: Scalar> Ring for ScalarRing<S> {
    type Sc = S;
    type Elem = S;

    fn zero(&self) -> S {
        S::zero()
    }
    fn one(&self) -> S {
        S::one()
    }
    fn is_zero(&self, a: &S) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &S, b: &S) -> S {
        a.add(b)
    }
    fn neg(&self, a: &S) -> S {
        a.neg()
    }
    fn mul(&self, a: &S, b: &S) -> Result<S> {
        Ok(a.mul(b))
    }
    fn scale(&self, c: &S, a: &S) -> S {
        c.mul(a)
    }
    fn has_star(&self) -> bool {
        true
    }
    fn star(&self, a: &S) -> Result<S> {
        Ok(a.conj())
    }
    fn generators(&self) -> Vec<(String, S)> {
        vec![("1".to_string(), S::one())]
    }
    fn monomial_support(&self, a: &S) -> Vec<(String, S)> {
        if a.is_zero() {
            Vec::new()
        } else {
            vec![("1".to_string(), a.clone())]
        }
    }
    fn decompose_words(&self, a: &S) -> Result<Vec<(S, Vec<String>)>> {
        if a.is_zero() {
            Ok(Vec::new())
        } else {
            Ok(vec![(a.clone(), Vec::new())])
        }
    }
    fn display(&self, a: &S) -> String {
        format!("{}", a)
    }
    fn describe(&self) -> String {
        "scalar ring".to_string()
    }
}

// ---------------------------------------------------------------------------
// Exact coordinatization in a finite span
// ---------------------------------------------------------------------------

/// Express each target element as an exact linear combination of the given
/// spanning elements, via the canonical monomial coordinates. Returns one
/// coefficient row per target, or `NoSolution` naming the first target that
/// falls outside the span.
pub fn coords_in_span<R: Ring>(
    ring: &R,
    targets: &[R::Elem],
    span: &[R::Elem],
) -> Result<Vec<Vec<R::Sc>>> {
    // Collect the union of monomial keys appearing anywhere.
    let mut keys: Vec<String> = Vec::new();
    let mut supports: Vec<Vec<(String, R::Sc)>> = Vec::new();
    for e in span.iter().chain(targets.iter()) {
        let sup = ring.monomial_support(e);
        for (k, _) in &sup {
            if !keys.contains(k) {
                keys.push(k.clone());
            }
        }
        supports.push(sup);
    }
    keys.sort();
    let index_of = |k: &str| keys.iter().position(|x| x == k).expect("key present");

    // Column per span element, row per monomial key.
    let mut a = ScalarMat::<R::Sc>::zero(keys.len(), span.len());
    for (j, sup) in supports[..span.len()].iter().enumerate() {
        for (k, c) in sup {
            a.set(index_of(k), j, c.clone());
        }
    }

    let mut out = Vec::with_capacity(targets.len());
    for (t, sup) in supports[span.len()..].iter().enumerate() {
        let mut b = vec![R::Sc::zero(); keys.len()];
        for (k, c) in sup {
            b[index_of(k)] = c.clone();
        }
        match solve(&a, &b) {
            Some(x) => out.push(x),
            None => {
                return Err(Error::NoSolution(format!(
                    "element {} is not in the given span",
                    ring.display(&targets[t])
                )))
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;

    #[test]
    fn scalar_ring_arithmetic() {
        let r = ScalarRing::<Rat>::new();
        let two = r.add(&r.one(), &r.one());
        let four = r.mul(&two, &two).unwrap();
        assert_eq!(r.display(&four), "4");
        assert!(r.is_zero(&r.sub(&four, &four)));
        r.check_relations().unwrap();
    }

    #[test]
    fn eval_word_multiplies_generators() {
        let r = ScalarRing::<Rat>::new();
        let w = vec!["1".to_string(), "1".to_string()];
        assert_eq!(r.eval_word(&w).unwrap(), r.one());
        assert!(r.eval_word(&["nope".to_string()]).is_err());
    }

    #[test]
    fn coords_in_span_scalars() {
        let r = ScalarRing::<Rat>::new();
        let span = vec![r.add(&r.one(), &r.one())]; // {2}
        let targets = vec![r.one()]; // 1 = (1/2)·2
        let coords = coords_in_span(&r, &targets, &span).unwrap();
        assert_eq!(coords.len(), 1);
        let half = Rat::one().div(&r.add(&r.one(), &r.one())).unwrap();
        assert_eq!(coords[0][0], half);
    }
}
