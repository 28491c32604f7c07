//! Feynman-rule characters with values in Laurent series, the subtraction
//! projection, and the counterterm and renormalized values they produce.

mod laurent;

use std::collections::HashMap;
use std::sync::Arc;

use dashmap::DashMap;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::hopf::{AlgebraElement, Generator, HopfAlgebra, Monomial};
use crate::ribbon_graph::{CanonicalForm, LegSymmetry, Mode, RibbonGraph};

pub use laurent::{LaurentParseError, LaurentSeries, DEFAULT_TRUNCATION};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenormError {
    #[error("no rule for graph {hash}")]
    MissingRule { hash: String },
    #[error("graph is not planar regular")]
    NotPlanarRegular,
    #[error("split weights {0}")]
    BadWeights(String),
}

/// Values assigned to connected graphs; extended multiplicatively.
#[derive(Debug, Clone, PartialEq)]
pub enum FeynmanRules {
    /// `φ(Γ) = (c/e + d)^L(Γ)`.
    PolePerLoop { c: BigRational, d: BigRational },
    /// Values keyed by canonical hash.
    Table(HashMap<String, LaurentSeries>),
}

/// A multiplicative map from the graph algebra to Laurent series.
#[derive(Debug, Clone)]
pub struct Character {
    rules: FeynmanRules,
    order: i32,
}

impl Character {
    pub fn new(rules: FeynmanRules) -> Self {
        Self::with_truncation(rules, DEFAULT_TRUNCATION)
    }

    pub fn with_truncation(rules: FeynmanRules, order: i32) -> Self {
        Character { rules, order }
    }

    pub fn pole_per_loop(c: BigRational, d: BigRational) -> Self {
        Self::new(FeynmanRules::PolePerLoop { c, d })
    }

    pub fn rules(&self) -> &FeynmanRules {
        &self.rules
    }

    pub fn truncation(&self) -> i32 {
        self.order
    }

    pub fn mul(&self, a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
        a.mul_truncated(b, self.order)
    }

    /// Table entries may be keyed by the generator's own hash or by the
    /// hash of its graph with legs ignored.
    pub fn on_generator(&self, g: &Generator) -> Result<LaurentSeries, RenormError> {
        match &self.rules {
            FeynmanRules::PolePerLoop { c, d } => {
                let base =
                    &LaurentSeries::monomial(c.clone(), -1) + &LaurentSeries::constant(d.clone());
                Ok(base.pow_truncated(g.loops() as u32, self.order))
            }
            FeynmanRules::Table(table) => {
                let own = g.form().hash_hex();
                let bare = g
                    .graph()
                    .canonical_form_with(LegSymmetry::Unlabeled)
                    .hash_hex();
                table
                    .get(&own)
                    .or_else(|| table.get(&bare))
                    .cloned()
                    .ok_or(RenormError::MissingRule { hash: own })
            }
        }
    }

    pub fn on_graph(&self, graph: &RibbonGraph) -> Result<LaurentSeries, RenormError> {
        self.on_generator(&Generator::labeled(graph.clone()))
    }

    pub fn on_monomial(&self, m: &Monomial) -> Result<LaurentSeries, RenormError> {
        m.factors().iter().try_fold(LaurentSeries::one(), |acc, g| {
            Ok(self.mul(&acc, &self.on_generator(g)?))
        })
    }

    pub fn on_element(&self, x: &AlgebraElement) -> Result<LaurentSeries, RenormError> {
        linear(x, |m| self.on_monomial(m))
    }
}

fn linear(
    x: &AlgebraElement,
    f: impl Fn(&Monomial) -> Result<LaurentSeries, RenormError>,
) -> Result<LaurentSeries, RenormError> {
    x.terms().try_fold(LaurentSeries::zero(), |acc, (m, c)| {
        Ok(&acc + &f(m)?.scaled(c))
    })
}

/// The subtraction applied at each step of the counterterm recursion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Projection {
    /// The pole part.
    #[default]
    MinimalSubtraction,
    /// Subtracts nothing.
    Zero,
}

impl Projection {
    pub fn apply(self, a: &LaurentSeries) -> LaurentSeries {
        match self {
            Projection::MinimalSubtraction => projection_t(a),
            Projection::Zero => LaurentSeries::zero(),
        }
    }
}

/// Minimal subtraction: the strictly negative part of `a`.
pub fn projection_t(a: &LaurentSeries) -> LaurentSeries {
    a.restricted(|k| k < 0)
}

/// `m∘(f⊗g)∘Δ` applied to `x`.
pub fn convolution(
    hopf: &HopfAlgebra,
    f: &dyn Fn(&Monomial) -> Result<LaurentSeries, RenormError>,
    g: &dyn Fn(&Monomial) -> Result<LaurentSeries, RenormError>,
    x: &AlgebraElement,
    order: i32,
) -> Result<LaurentSeries, RenormError> {
    hopf.coproduct(x)
        .terms()
        .try_fold(LaurentSeries::zero(), |acc, ((a, b), c)| {
            Ok(&acc + &f(a)?.mul_truncated(&g(b)?, order).scaled(c))
        })
}

/// The counterterm character `φ₋` and renormalized values `φ₊ = φ₋∗φ` of
/// one character under one projection, memoized by canonical form.
pub struct Renormalizer<'h> {
    hopf: &'h HopfAlgebra,
    phi: Character,
    projection: Projection,
    counterterms: DashMap<CanonicalForm, Arc<LaurentSeries>>,
}

impl<'h> Renormalizer<'h> {
    pub fn new(hopf: &'h HopfAlgebra, phi: Character, projection: Projection) -> Self {
        Renormalizer {
            hopf,
            phi,
            projection,
            counterterms: DashMap::new(),
        }
    }

    pub fn character(&self) -> &Character {
        &self.phi
    }

    pub fn projection(&self) -> Projection {
        self.projection
    }

    /// `φ(Γ) + Σ_γ φ₋(γ) φ(Γ/γ)`, the argument of the projection.
    fn prepared(&self, g: &Generator) -> Result<LaurentSeries, RenormError> {
        let mut out = self.phi.on_generator(g)?;
        for ((left, right), c) in self.hopf.reduced_coproduct(g).terms() {
            let term = self.phi.mul(
                &self.counterterm_monomial(left)?,
                &self.phi.on_monomial(right)?,
            );
            out = &out + &term.scaled(c);
        }
        Ok(out)
    }

    /// `φ₋(Γ) = -T(φ(Γ) + Σ_γ φ₋(γ) φ(Γ/γ))`.
    pub fn counterterm(&self, g: &Generator) -> Result<LaurentSeries, RenormError> {
        if let Some(hit) = self.counterterms.get(g.form()) {
            return Ok((**hit).clone());
        }
        let out = -&self.projection.apply(&self.prepared(g)?);
        self.counterterms
            .insert(g.form().clone(), Arc::new(out.clone()));
        Ok(out)
    }

    pub fn counterterm_monomial(&self, m: &Monomial) -> Result<LaurentSeries, RenormError> {
        m.factors().iter().try_fold(LaurentSeries::one(), |acc, g| {
            Ok(self.phi.mul(&acc, &self.counterterm(g)?))
        })
    }

    pub fn counterterm_element(&self, x: &AlgebraElement) -> Result<LaurentSeries, RenormError> {
        linear(x, |m| self.counterterm_monomial(m))
    }

    /// `φ₊(Γ) = φ₋(Γ) + φ(Γ) + Σ_γ φ₋(γ) φ(Γ/γ)`.
    pub fn renormalized(&self, g: &Generator) -> Result<LaurentSeries, RenormError> {
        Ok(&self.counterterm(g)? + &self.prepared(g)?)
    }

    /// `φ₊` on a monomial, computed as `φ₋∗φ` through the full coproduct.
    pub fn renormalized_monomial(&self, m: &Monomial) -> Result<LaurentSeries, RenormError> {
        convolution(
            self.hopf,
            &|a| self.counterterm_monomial(a),
            &|b| self.phi.on_monomial(b),
            &AlgebraElement::from_monomial(m.clone()),
            self.phi.truncation(),
        )
    }

    pub fn renormalized_element(&self, x: &AlgebraElement) -> Result<LaurentSeries, RenormError> {
        linear(x, |m| self.renormalized_monomial(m))
    }
}

pub fn twisted_antipode(
    hopf: &HopfAlgebra,
    phi: &Character,
    graph: &RibbonGraph,
) -> Result<LaurentSeries, RenormError> {
    Renormalizer::new(hopf, phi.clone(), Projection::MinimalSubtraction)
        .counterterm(&Generator::labeled(graph.clone()))
}

pub fn renormalized_value(
    hopf: &HopfAlgebra,
    phi: &Character,
    graph: &RibbonGraph,
) -> Result<LaurentSeries, RenormError> {
    Renormalizer::new(hopf, phi.clone(), Projection::MinimalSubtraction)
        .renormalized(&Generator::labeled(graph.clone()))
}

/// Fractions of a two-point pole assigned to the mass, wave-function and
/// oscillator counterterms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalStructureWeights {
    pub mass: BigRational,
    pub wave: BigRational,
    pub oscillator: BigRational,
}

impl ExternalStructureWeights {
    pub fn new(mass: BigRational, wave: BigRational, oscillator: BigRational) -> Self {
        ExternalStructureWeights {
            mass,
            wave,
            oscillator,
        }
    }

    /// Equal shares over the slots the mode allows.
    pub fn uniform(mode: Mode) -> Self {
        let n = match mode {
            Mode::NonCommutative => 3,
            Mode::Commutative => 2,
        };
        let share = BigRational::new(1.into(), n.into());
        let oscillator = match mode {
            Mode::NonCommutative => share.clone(),
            Mode::Commutative => BigRational::zero(),
        };
        Self::new(share.clone(), share, oscillator)
    }

    fn validate(&self, mode: Mode) -> Result<(), RenormError> {
        if mode == Mode::Commutative && !self.oscillator.is_zero() {
            return Err(RenormError::BadWeights(
                "have an oscillator share in commutative mode".into(),
            ));
        }
        let total = &self.mass + &self.wave + &self.oscillator;
        if !total.is_one() {
            return Err(RenormError::BadWeights(format!("sum to {total}, not 1")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CountertermSlot {
    Mass,
    Wave,
    Oscillator,
    Vertex,
}

impl CountertermSlot {
    pub fn name(self) -> &'static str {
        match self {
            CountertermSlot::Mass => "mass",
            CountertermSlot::Wave => "wave",
            CountertermSlot::Oscillator => "oscillator",
            CountertermSlot::Vertex => "vertex",
        }
    }
}

/// The pole part of `φ(Γ)` distributed over counterterm slots.
#[derive(Debug, Clone, PartialEq)]
pub struct CountertermSplit {
    pub slots: Vec<(CountertermSlot, LaurentSeries)>,
}

impl CountertermSplit {
    pub fn total(&self) -> LaurentSeries {
        self.slots
            .iter()
            .fold(LaurentSeries::zero(), |acc, (_, s)| &acc + s)
    }
}

pub fn counterterm_split(
    phi: &Character,
    graph: &RibbonGraph,
    weights: &ExternalStructureWeights,
) -> Result<CountertermSplit, RenormError> {
    if !graph.has_vertex_residue() {
        return Err(RenormError::NotPlanarRegular);
    }
    let pole = projection_t(&phi.on_graph(graph)?);
    let slots = if graph.external_count() == 4 {
        vec![(CountertermSlot::Vertex, pole)]
    } else {
        weights.validate(graph.mode())?;
        let mut slots = vec![
            (CountertermSlot::Mass, pole.scaled(&weights.mass)),
            (CountertermSlot::Wave, pole.scaled(&weights.wave)),
        ];
        if graph.mode() == Mode::NonCommutative {
            slots.push((
                CountertermSlot::Oscillator,
                pole.scaled(&weights.oscillator),
            ));
        }
        slots
    };
    Ok(CountertermSplit { slots })
}
