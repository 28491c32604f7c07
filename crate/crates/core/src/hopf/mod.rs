//! The Hopf algebra of 1PI ribbon graphs.
//!
//! Products are disjoint unions. The coproduct of a generator sums over its
//! shrinkable subgraphs:
//!
//! ```text
//! ΔΓ = Γ⊗1 + 1⊗Γ + Σ_γ γ ⊗ Γ/γ
//! ```
//!
//! Left factors are subgraphs cut out of a larger graph, so their legs carry
//! no labels of their own; they are keyed with [`LegSymmetry::Residue`]. The
//! cograph keeps the leg symmetry of the graph it came from.

mod algebra;

use std::sync::Arc;

use dashmap::DashMap;
use num_traits::One;

use crate::ribbon_graph::{CanonicalForm, LegSymmetry, RibbonGraph};
use crate::subgraphs::shrinkings;

pub use algebra::{AlgebraElement, Coefficient, Generator, Monomial, TensorElement, TripleTensor};

/// A pair of combinations that should agree and do not, with the first
/// basis element where they differ.
#[derive(Debug, Clone)]
pub struct Discrepancy<K> {
    pub law: &'static str,
    pub key: K,
    pub left: Coefficient,
    pub right: Coefficient,
}

/// Outcome of checking one algebraic law.
pub type LawCheck<K> = Result<(), Box<Discrepancy<K>>>;

/// Coproduct and antipodes with memo tables keyed by canonical form.
///
/// The tables are concurrent maps; inserts are idempotent, so racing threads
/// at worst recompute the same value.
#[derive(Default)]
pub struct HopfAlgebra {
    reduced: DashMap<CanonicalForm, Arc<TensorElement>>,
    left_antipodes: DashMap<CanonicalForm, Arc<AlgebraElement>>,
    right_antipodes: DashMap<CanonicalForm, Arc<AlgebraElement>>,
}

impl HopfAlgebra {
    pub fn new() -> Self {
        Self::default()
    }

    /// `Δ'Γ = Σ_γ γ ⊗ Γ/γ` over shrinkable proper subgraphs.
    pub fn reduced_coproduct(&self, g: &Generator) -> Arc<TensorElement> {
        if let Some(hit) = self.reduced.get(g.form()) {
            return hit.clone();
        }
        let mut out = TensorElement::zero();
        for s in shrinkings(g.graph()) {
            let left = Monomial::from_generators(
                s.components
                    .into_iter()
                    .map(|c| Generator::new(c, LegSymmetry::Residue))
                    .collect(),
            );
            let right = Monomial::from(Generator::new(s.quotient, g.symmetry()));
            out.add_term((left, right), Coefficient::one());
        }
        let out = Arc::new(out);
        self.reduced.insert(g.form().clone(), out.clone());
        out
    }

    pub fn generator_coproduct(&self, g: &Generator) -> TensorElement {
        let mut out = (*self.reduced_coproduct(g)).clone();
        let gm = Monomial::from(g.clone());
        out.add_term((gm.clone(), Monomial::unit()), Coefficient::one());
        out.add_term((Monomial::unit(), gm), Coefficient::one());
        out
    }

    /// Multiplicative on monomials, `Δ1 = 1⊗1`.
    pub fn monomial_coproduct(&self, m: &Monomial) -> TensorElement {
        m.factors().iter().fold(TensorElement::unit(), |acc, g| {
            acc.times(&self.generator_coproduct(g))
        })
    }

    pub fn coproduct(&self, x: &AlgebraElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for (m, c) in x.terms() {
            for (k, d) in self.monomial_coproduct(m).terms() {
                out.add_term(k.clone(), c * d);
            }
        }
        out
    }

    pub fn counit(&self, x: &AlgebraElement) -> Coefficient {
        x.counit()
    }

    /// `S(Γ) = -Γ - Σ_γ S(γ)·Γ/γ`, extended as an algebra map.
    pub fn antipode(&self, x: &AlgebraElement) -> AlgebraElement {
        self.extend(x, &|g| self.generator_antipode(g, Side::Left))
    }

    /// `S(Γ) = -Γ - Σ_γ γ·S(Γ/γ)`, the recursion through the right factor.
    pub fn right_antipode(&self, x: &AlgebraElement) -> AlgebraElement {
        self.extend(x, &|g| self.generator_antipode(g, Side::Right))
    }

    fn extend(
        &self,
        x: &AlgebraElement,
        on_generator: &dyn Fn(&Generator) -> Arc<AlgebraElement>,
    ) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (m, c) in x.terms() {
            let image = m
                .factors()
                .iter()
                .fold(AlgebraElement::one(), |acc, g| &acc * &*on_generator(g));
            for (k, d) in image.terms() {
                out.add_term(k.clone(), c * d);
            }
        }
        out
    }

    fn generator_antipode(&self, g: &Generator, side: Side) -> Arc<AlgebraElement> {
        let memo = match side {
            Side::Left => &self.left_antipodes,
            Side::Right => &self.right_antipodes,
        };
        if let Some(hit) = memo.get(g.form()) {
            return hit.clone();
        }
        let mut out = -&AlgebraElement::from_generator(g.clone());
        for ((left, right), c) in self.reduced_coproduct(g).terms() {
            let term = match side {
                Side::Left => {
                    let s = self.extend(&AlgebraElement::from_monomial(left.clone()), &|h| {
                        self.generator_antipode(h, Side::Left)
                    });
                    &s * &AlgebraElement::from_monomial(right.clone())
                }
                Side::Right => {
                    let s = self.extend(&AlgebraElement::from_monomial(right.clone()), &|h| {
                        self.generator_antipode(h, Side::Right)
                    });
                    &AlgebraElement::from_monomial(left.clone()) * &s
                }
            };
            out = &out - &term.scaled(c);
        }
        let out = Arc::new(out);
        memo.insert(g.form().clone(), out.clone());
        out
    }

    /// `(Δ⊗id)∘Δ` and `(id⊗Δ)∘Δ` applied to `x`.
    pub fn triple_coproducts(&self, x: &AlgebraElement) -> (TripleTensor, TripleTensor) {
        let delta = self.coproduct(x);
        let mut left = TripleTensor::zero();
        let mut right = TripleTensor::zero();
        for ((a, b), c) in delta.terms() {
            for ((a1, a2), d) in self.monomial_coproduct(a).terms() {
                left.add_term((a1.clone(), a2.clone(), b.clone()), c * d);
            }
            for ((b1, b2), d) in self.monomial_coproduct(b).terms() {
                right.add_term((a.clone(), b1.clone(), b2.clone()), c * d);
            }
        }
        (left, right)
    }

    pub fn check_coassociativity(
        &self,
        x: &AlgebraElement,
    ) -> LawCheck<(Monomial, Monomial, Monomial)> {
        let (left, right) = self.triple_coproducts(x);
        compare(
            "coassociativity",
            &left,
            &right,
            TripleTensor::first_difference,
        )
    }

    /// `(ε⊗id)∘Δ = id = (id⊗ε)∘Δ`.
    pub fn check_counit_laws(&self, x: &AlgebraElement) -> LawCheck<Monomial> {
        let delta = self.coproduct(x);
        let mut via_left = AlgebraElement::zero();
        let mut via_right = AlgebraElement::zero();
        for ((a, b), c) in delta.terms() {
            if a.is_unit() {
                via_left.add_term(b.clone(), c.clone());
            }
            if b.is_unit() {
                via_right.add_term(a.clone(), c.clone());
            }
        }
        compare(
            "left counit",
            &via_left,
            x,
            AlgebraElement::first_difference,
        )?;
        compare(
            "right counit",
            &via_right,
            x,
            AlgebraElement::first_difference,
        )
    }

    /// `m∘(S⊗id)∘Δ = u∘ε = m∘(id⊗S)∘Δ`.
    pub fn check_hopf_identity(&self, x: &AlgebraElement) -> LawCheck<Monomial> {
        let delta = self.coproduct(x);
        let unit = AlgebraElement::one().scaled(&x.counit());
        let mut left = AlgebraElement::zero();
        let mut right = AlgebraElement::zero();
        for ((a, b), c) in delta.terms() {
            let sa = self.antipode(&AlgebraElement::from_monomial(a.clone()));
            let sb = self.antipode(&AlgebraElement::from_monomial(b.clone()));
            let l = &sa * &AlgebraElement::from_monomial(b.clone());
            let r = &AlgebraElement::from_monomial(a.clone()) * &sb;
            left = &left + &l.scaled(c);
            right = &right + &r.scaled(c);
        }
        compare(
            "m(S⊗id)Δ = uε",
            &left,
            &unit,
            AlgebraElement::first_difference,
        )?;
        compare(
            "m(id⊗S)Δ = uε",
            &right,
            &unit,
            AlgebraElement::first_difference,
        )
    }

    /// The left and right antipode recursions give the same element.
    pub fn check_antipodes_agree(&self, x: &AlgebraElement) -> LawCheck<Monomial> {
        compare(
            "left and right antipode",
            &self.antipode(x),
            &self.right_antipode(x),
            AlgebraElement::first_difference,
        )
    }

    /// Every term of `Δx` has total degree equal to the degree of the
    /// monomial it came from, and `S` preserves degree.
    pub fn check_grading(&self, x: &AlgebraElement) -> Result<(), String> {
        for (m, _) in x.terms() {
            let n = m.degree();
            let single = AlgebraElement::from_monomial(m.clone());
            for ((a, b), _) in self.coproduct(&single).terms() {
                if a.degree() + b.degree() != n {
                    return Err(format!(
                        "{a} ⊗ {b} in Δ({m}) has degree {}",
                        a.degree() + b.degree()
                    ));
                }
            }
            for (s, _) in self.antipode(&single).terms() {
                if s.degree() != n {
                    return Err(format!("{s} in S({m}) has degree {}", s.degree()));
                }
            }
        }
        Ok(())
    }

    /// For a generator of `H_c`, every factor of every coproduct term and of
    /// every antipode monomial lies in `H_c` again.
    pub fn check_hc_closure(&self, graph: &RibbonGraph) -> Result<(), String> {
        if !is_in_hc(graph) {
            return Err("graph is not in H_c".into());
        }
        let x = AlgebraElement::from_generator(Generator::labeled(graph.clone()));
        let outside = |m: &Monomial| m.factors().iter().find(|g| !is_in_hc(g.graph())).cloned();
        for ((a, b), _) in self.coproduct(&x).terms() {
            if let Some(g) = outside(a).or_else(|| outside(b)) {
                return Err(format!("coproduct factor {g} is not in H_c"));
            }
        }
        for (m, _) in self.antipode(&x).terms() {
            if let Some(g) = outside(m) {
                return Err(format!("antipode factor {g} is not in H_c"));
            }
        }
        Ok(())
    }
}

/// Membership in the subalgebra of graphs whose residue is a vertex or a
/// plain line.
pub fn is_in_hc(graph: &RibbonGraph) -> bool {
    graph.has_vertex_residue()
}

type Difference<T, K> = fn(&T, &T) -> Option<(K, Coefficient, Coefficient)>;

#[derive(Clone, Copy)]
enum Side {
    Left,
    Right,
}

fn compare<T, K>(law: &'static str, left: &T, right: &T, diff: Difference<T, K>) -> LawCheck<K> {
    match diff(left, right) {
        None => Ok(()),
        Some((key, l, r)) => Err(Box::new(Discrepancy {
            law,
            key,
            left: l,
            right: r,
        })),
    }
}
