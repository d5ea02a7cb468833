//! Laurent polynomial rings in finitely many commuting variables, with a
//! configurable involution.
//!
//! Elements are exact finite sums `Σ c·x₁^{n₁}⋯x_k^{n_k}` with integer
//! exponents. The involution conjugates coefficients and sends each
//! variable to `ε·x⁻¹` where the sign `ε ∈ {+1, −1}` is chosen per
//! variable at construction (so `t* = t⁻¹` or the twisted `t* = −t⁻¹`).
//!
//! When used as a graded ring, the degree of a monomial is the exponent of
//! the **first** variable (the one-variable case is the strongly ℤ-graded
//! ring of Laurent polynomials; multi-variable rings are used as
//! principal components, where the grading is not consulted).

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::lpa::FrameColumn;
use crate::ring::{GradedRing, RelTerm, Relation, Ring};
use crate::scalar::Scalar;

/// Handle to a Laurent polynomial ring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentRing<S: Scalar> {
    vars: Vec<String>,
    /// Involution signs: `star(xᵢ) = signs[i]·xᵢ⁻¹`; entries are ±1.
    signs: Vec<i8>,
    _marker: std::marker::PhantomData<S>,
}

/// An element: finite map from exponent vectors to nonzero scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentElem<S: Scalar> {
    pub terms: BTreeMap<Vec<i64>, S>,
}

impl<S: Scalar> LaurentRing<S> {
    pub fn new(vars: Vec<String>, signs: Vec<i8>) -> Result<Self> {
        if vars.is_empty() {
            return Err(Error::BadInput("need at least one variable".into()));
        }
        if vars.len() != signs.len() {
            return Err(Error::BadInput("one sign per variable required".into()));
        }
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::BadInput("involution signs must be ±1".into()));
        }
        let mut seen = std::collections::BTreeSet::new();
        for v in &vars {
            if v.is_empty() || !seen.insert(v.clone()) {
                return Err(Error::BadInput(format!("bad variable name {:?}", v)));
            }
        }
        Ok(LaurentRing {
            vars,
            signs,
            _marker: std::marker::PhantomData,
        })
    }

    /// Single variable, untwisted involution `t* = t⁻¹`.
    pub fn single(var: &str) -> Self {
        LaurentRing::new(vec![var.to_string()], vec![1]).expect("valid")
    }

    /// Single variable with the twisted involution `t* = −t⁻¹`.
    pub fn single_twisted(var: &str) -> Self {
        LaurentRing::new(vec![var.to_string()], vec![-1]).expect("valid")
    }

    pub fn n_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.vars
    }

    /// Monomial `c · x₁^{e₁}⋯x_k^{e_k}`.
    pub fn monomial(&self, exps: &[i64], c: S) -> Result<LaurentElem<S>> {
        if exps.len() != self.vars.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} exponents for {} variables",
                exps.len(),
                self.vars.len()
            )));
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps.to_vec(), c);
        }
        Ok(LaurentElem { terms })
    }

    /// The variable `xᵢ`.
    pub fn var(&self, i: usize) -> LaurentElem<S> {
        let mut exps = vec![0i64; self.vars.len()];
        exps[i] = 1;
        self.monomial(&exps, S::one()).expect("shape")
    }

    /// The inverse variable `xᵢ⁻¹`.
    pub fn var_inv(&self, i: usize) -> LaurentElem<S> {
        let mut exps = vec![0i64; self.vars.len()];
        exps[i] = -1;
        self.monomial(&exps, S::one()).expect("shape")
    }

    fn add_term(&self, acc: &mut BTreeMap<Vec<i64>, S>, exps: Vec<i64>, c: S) {
        if c.is_zero() {
            return;
        }
        match acc.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    o.insert(s);
                }
            }
        }
    }

    fn mon_string(&self, exps: &[i64]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(i, &e)| {
                if e == 1 {
                    self.vars[i].clone()
                } else {
                    format!("{}^{}", self.vars[i], e)
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("·")
        }
    }

    /// One-variable rings are strongly ℤ-graded with frame
    /// `x = (tⁿ)`, `y = (t⁻ⁿ)`.
    pub fn frame(&self, n: i64) -> Result<FrameColumn<Self>> {
        if self.vars.len() != 1 {
            return Err(Error::BadInput(
                "frames only for one-variable Laurent rings".into(),
            ));
        }
        let frame = FrameColumn {
            g: n,
            x: Mat::column(self, vec![self.monomial(&[n], S::one())?]),
            y: Mat::column(self, vec![self.monomial(&[-n], S::one())?]),
        };
        frame.verify(self)?;
        Ok(frame)
    }
}

impl<S: Scalar> Ring for LaurentRing<S> {
    type Sc = S;
    type Elem = LaurentElem<S>;

    fn zero(&self) -> LaurentElem<S> {
        LaurentElem {
            terms: BTreeMap::new(),
        }
    }

    fn one(&self) -> LaurentElem<S> {
        self.monomial(&vec![0; self.vars.len()], S::one())
            .expect("shape")
    }

    fn is_zero(&self, a: &LaurentElem<S>) -> bool {
        a.terms.is_empty()
    }

    fn add(&self, a: &LaurentElem<S>, b: &LaurentElem<S>) -> LaurentElem<S> {
        let mut acc = a.terms.clone();
        for (e, c) in &b.terms {
            self.add_term(&mut acc, e.clone(), c.clone());
        }
        LaurentElem { terms: acc }
    }

    fn neg(&self, a: &LaurentElem<S>) -> LaurentElem<S> {
        LaurentElem {
            terms: a.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    fn mul(&self, a: &LaurentElem<S>, b: &LaurentElem<S>) -> Result<LaurentElem<S>> {
        let mut acc = BTreeMap::new();
        for (e1, c1) in &a.terms {
            for (e2, c2) in &b.terms {
                let exps: Vec<i64> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                self.add_term(&mut acc, exps, c1.mul(c2));
            }
        }
        Ok(LaurentElem { terms: acc })
    }

    fn scale(&self, c: &S, a: &LaurentElem<S>) -> LaurentElem<S> {
        if c.is_zero() {
            return self.zero();
        }
        LaurentElem {
            terms: a
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), c.mul(x)))
                .collect(),
        }
    }

    fn has_star(&self) -> bool {
        true
    }

    /// `star(c·xⁿ) = conj(c)·Π εᵢ^{nᵢ} · x⁻ⁿ`.
    fn star(&self, a: &LaurentElem<S>) -> Result<LaurentElem<S>> {
        let mut acc = BTreeMap::new();
        for (e, c) in &a.terms {
            let mut coeff = c.conj();
            for (i, &n) in e.iter().enumerate() {
                if self.signs[i] == -1 && n.rem_euclid(2) == 1 {
                    coeff = coeff.neg();
                }
            }
            let neg_exps: Vec<i64> = e.iter().map(|&n| -n).collect();
            self.add_term(&mut acc, neg_exps, coeff);
        }
        Ok(LaurentElem { terms: acc })
    }

    fn generators(&self) -> Vec<(String, LaurentElem<S>)> {
        let mut out = Vec::new();
        for (i, v) in self.vars.iter().enumerate() {
            out.push((v.clone(), self.var(i)));
        }
        for (i, v) in self.vars.iter().enumerate() {
            out.push((format!("{}^-1", v), self.var_inv(i)));
        }
        out
    }

    fn relations(&self) -> Vec<Relation<S>> {
        let mut rels = Vec::new();
        let term = |word: Vec<String>| RelTerm {
            coeff: S::one(),
            word,
        };
        let names: Vec<String> = self
            .vars
            .iter()
            .cloned()
            .chain(self.vars.iter().map(|v| format!("{}^-1", v)))
            .collect();
        for v in &self.vars {
            let inv = format!("{}^-1", v);
            rels.push(Relation {
                label: format!("{}·{} = 1", v, inv),
                lhs: vec![term(vec![v.clone(), inv.clone()])],
                rhs: vec![term(vec![])],
            });
            rels.push(Relation {
                label: format!("{}·{} = 1", inv, v),
                lhs: vec![term(vec![inv.clone(), v.clone()])],
                rhs: vec![term(vec![])],
            });
        }
        for i in 0..names.len() {
            for j in (i + 1)..names.len() {
                rels.push(Relation {
                    label: format!("{}·{} commute", names[i], names[j]),
                    lhs: vec![term(vec![names[i].clone(), names[j].clone()])],
                    rhs: vec![term(vec![names[j].clone(), names[i].clone()])],
                });
            }
        }
        rels
    }

    fn monomial_support(&self, a: &LaurentElem<S>) -> Vec<(String, S)> {
        a.terms
            .iter()
            .map(|(e, c)| {
                (
                    e.iter()
                        .map(|n| n.to_string())
                        .collect::<Vec<_>>()
                        .join("|"),
                    c.clone(),
                )
            })
            .collect()
    }

    fn decompose_words(&self, a: &LaurentElem<S>) -> Result<Vec<(S, Vec<String>)>> {
        let mut out = Vec::with_capacity(a.terms.len());
        for (e, c) in &a.terms {
            let mut word = Vec::new();
            for (i, &n) in e.iter().enumerate() {
                let name = if n >= 0 {
                    self.vars[i].clone()
                } else {
                    format!("{}^-1", self.vars[i])
                };
                for _ in 0..n.unsigned_abs() {
                    word.push(name.clone());
                }
            }
            out.push((c.clone(), word));
        }
        Ok(out)
    }

    fn display(&self, a: &LaurentElem<S>) -> String {
        if a.terms.is_empty() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (e, c) in &a.terms {
            let m = self.mon_string(e);
            if m == "1" {
                parts.push(format!("{}", c));
            } else if c.is_one() {
                parts.push(m);
            } else {
                parts.push(format!("({})·{}", c, m));
            }
        }
        parts.join(" + ")
    }

    fn describe(&self) -> String {
        format!("Laurent ring in {}", self.vars.join(", "))
    }
}

impl<S: Scalar> GradedRing for LaurentRing<S> {
    fn split_degrees(&self, a: &LaurentElem<S>) -> Vec<(i64, LaurentElem<S>)> {
        let mut by_deg: BTreeMap<i64, LaurentElem<S>> = BTreeMap::new();
        for (e, c) in &a.terms {
            by_deg
                .entry(e[0])
                .or_insert_with(|| self.zero())
                .terms
                .insert(e.clone(), c.clone());
        }
        by_deg.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{GaussRat, Rat};

    #[test]
    fn arithmetic_and_relations() {
        let r = LaurentRing::<Rat>::new(vec!["u".into(), "v".into()], vec![1, 1]).unwrap();
        r.check_relations().unwrap();
        let u = r.var(0);
        let vinv = r.var_inv(1);
        let p = r.mul(&u, &vinv).unwrap();
        assert_eq!(r.display(&p), "u·v^-1");
        let q = r.mul(&p, &r.var(1)).unwrap();
        assert_eq!(q, u);
    }

    #[test]
    fn twisted_star() {
        let r = LaurentRing::<GaussRat>::single_twisted("t");
        let t = r.var(0);
        // t* = −t⁻¹, (t⁻¹)* = −t, (t²)* = t⁻²
        assert_eq!(r.star(&t).unwrap(), r.neg(&r.var_inv(0)));
        assert_eq!(r.star(&r.var_inv(0)).unwrap(), r.neg(&t));
        let t2 = r.mul(&t, &t).unwrap();
        assert_eq!(r.star(&t2).unwrap(), r.monomial(&[-2], GaussRat::one()).unwrap());
        // star is involutive
        let z = r.add(&r.scale(&GaussRat::i(), &t), &r.one());
        assert_eq!(r.star(&r.star(&z).unwrap()).unwrap(), z);
    }

    #[test]
    fn untwisted_star_and_frames() {
        let r = LaurentRing::<Rat>::single("t");
        let f = r.frame(3).unwrap();
        assert_eq!(f.size(), 1);
        // Parseval shape: y = x* entrywise
        assert_eq!(f.y, f.x.star_entrywise().unwrap());
        let f = r.frame(-2).unwrap();
        f.verify(&r).unwrap();
    }

    #[test]
    fn twisted_frame_is_not_parseval_shaped() {
        let r = LaurentRing::<GaussRat>::single_twisted("t");
        let f = r.frame(1).unwrap(); // yᵗx = 1 still holds
        assert_ne!(f.y, f.x.star_entrywise().unwrap()); // but y ≠ x*
    }

    #[test]
    fn grading_by_first_variable() {
        let r = LaurentRing::<Rat>::single("t");
        let a = r.add(&r.var(0), &r.one());
        let parts = r.split_degrees(&a);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 0);
        assert_eq!(parts[1].0, 1);
    }

    #[test]
    fn decompose_words_roundtrip() {
        let r = LaurentRing::<Rat>::new(vec!["u".into(), "v".into()], vec![1, 1]).unwrap();
        let e = r
            .add(
                &r.monomial(&[2, -1], Rat::from_i64(3)).unwrap(),
                &r.monomial(&[0, 1], Rat::from_i64(-2)).unwrap(),
            );
        let words = r.decompose_words(&e).unwrap();
        let mut back = r.zero();
        for (c, w) in words {
            back = r.add(&back, &r.scale(&c, &r.eval_word(&w).unwrap()));
        }
        assert_eq!(back, e);
    }
}
