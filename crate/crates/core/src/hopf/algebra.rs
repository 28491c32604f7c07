//! Formal rational combinations of graph monomials and of pairs and triples
//! of monomials.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ribbon_graph::{CanonicalForm, LegSymmetry, RibbonGraph};

pub type Coefficient = BigRational;

#[derive(Debug)]
struct GeneratorData {
    form: CanonicalForm,
    graph: RibbonGraph,
    symmetry: LegSymmetry,
}

/// A connected 1PI graph up to isomorphism, identified by its canonical
/// form under a chosen leg symmetry.
#[derive(Clone)]
pub struct Generator(Arc<GeneratorData>);

impl Generator {
    pub fn new(graph: RibbonGraph, symmetry: LegSymmetry) -> Self {
        let form = graph.canonical_form_with(symmetry);
        Generator(Arc::new(GeneratorData {
            form,
            graph,
            symmetry,
        }))
    }

    /// Generator whose isomorphisms fix every external label.
    pub fn labeled(graph: RibbonGraph) -> Self {
        Self::new(graph, LegSymmetry::Labeled)
    }

    pub fn graph(&self) -> &RibbonGraph {
        &self.0.graph
    }

    pub fn symmetry(&self) -> LegSymmetry {
        self.0.symmetry
    }

    pub fn form(&self) -> &CanonicalForm {
        &self.0.form
    }

    pub fn loops(&self) -> usize {
        self.0.graph.loops()
    }
}

impl PartialEq for Generator {
    fn eq(&self, other: &Self) -> bool {
        self.0.form == other.0.form
    }
}

impl Eq for Generator {}

impl PartialOrd for Generator {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Generator {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.form.cmp(&other.0.form)
    }
}

impl std::hash::Hash for Generator {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.0.form.hash(state)
    }
}

impl fmt::Debug for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G[{}]", self.0.form.hash_hex())
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.0.symmetry {
            LegSymmetry::Labeled => "",
            LegSymmetry::Residue => "~",
            LegSymmetry::Unlabeled => "*",
        };
        write!(f, "G{tag}[{}]", self.0.form.hash_hex())
    }
}

/// Disjoint union of generators; the empty product is the unit.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<Generator>);

impl Monomial {
    pub fn unit() -> Self {
        Monomial(Vec::new())
    }

    pub fn from_generators(mut factors: Vec<Generator>) -> Self {
        factors.sort();
        Monomial(factors)
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn factors(&self) -> &[Generator] {
        &self.0
    }

    /// Total loop number.
    pub fn degree(&self) -> usize {
        self.0.iter().map(Generator::loops).sum()
    }

    pub fn times(&self, other: &Monomial) -> Monomial {
        let mut merged = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            if self.0[i] <= other.0[j] {
                merged.push(self.0[i].clone());
                i += 1;
            } else {
                merged.push(other.0[j].clone());
                j += 1;
            }
        }
        merged.extend_from_slice(&self.0[i..]);
        merged.extend_from_slice(&other.0[j..]);
        Monomial(merged)
    }
}

impl From<Generator> for Monomial {
    fn from(g: Generator) -> Self {
        Monomial(vec![g])
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, g) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, "·")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

fn add_into<K: Ord>(map: &mut BTreeMap<K, Coefficient>, key: K, c: Coefficient) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

macro_rules! linear_combination {
    ($name:ident, $key:ty) => {
        #[derive(Clone, Default, PartialEq, Eq)]
        pub struct $name {
            terms: BTreeMap<$key, Coefficient>,
        }

        impl $name {
            pub fn zero() -> Self {
                Self::default()
            }

            pub fn is_zero(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn add_term(&mut self, key: $key, c: Coefficient) {
                add_into(&mut self.terms, key, c);
            }

            pub fn terms(&self) -> impl Iterator<Item = (&$key, &Coefficient)> {
                self.terms.iter()
            }

            pub fn len(&self) -> usize {
                self.terms.len()
            }

            pub fn is_empty(&self) -> bool {
                self.terms.is_empty()
            }

            pub fn coefficient(&self, key: &$key) -> Coefficient {
                self.terms
                    .get(key)
                    .cloned()
                    .unwrap_or_else(Coefficient::zero)
            }

            pub fn scaled(&self, c: &Coefficient) -> Self {
                let mut out = Self::zero();
                for (k, v) in &self.terms {
                    out.add_term(k.clone(), v * c);
                }
                out
            }

            /// First key, in key order, where the two combinations differ.
            pub fn first_difference(
                &self,
                other: &Self,
            ) -> Option<($key, Coefficient, Coefficient)> {
                let mut keys: Vec<&$key> = self.terms.keys().chain(other.terms.keys()).collect();
                keys.sort();
                keys.dedup();
                keys.into_iter().find_map(|k| {
                    let (a, b) = (self.coefficient(k), other.coefficient(k));
                    (a != b).then(|| (k.clone(), a, b))
                })
            }
        }

        impl Add<&$name> for &$name {
            type Output = $name;
            fn add(self, rhs: &$name) -> $name {
                let mut out = self.clone();
                for (k, v) in &rhs.terms {
                    out.add_term(k.clone(), v.clone());
                }
                out
            }
        }

        impl Sub<&$name> for &$name {
            type Output = $name;
            fn sub(self, rhs: &$name) -> $name {
                let mut out = self.clone();
                for (k, v) in &rhs.terms {
                    out.add_term(k.clone(), -v.clone());
                }
                out
            }
        }

        impl Neg for &$name {
            type Output = $name;
            fn neg(self) -> $name {
                self.scaled(&-Coefficient::one())
            }
        }

        impl FromIterator<($key, Coefficient)> for $name {
            fn from_iter<I: IntoIterator<Item = ($key, Coefficient)>>(iter: I) -> Self {
                let mut out = Self::zero();
                for (k, c) in iter {
                    out.add_term(k, c);
                }
                out
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.debug_map().entries(self.terms.iter()).finish()
            }
        }
    };
}

linear_combination!(AlgebraElement, Monomial);
linear_combination!(TensorElement, (Monomial, Monomial));
linear_combination!(TripleTensor, (Monomial, Monomial, Monomial));

impl AlgebraElement {
    pub fn one() -> Self {
        Self::from_monomial(Monomial::unit())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut out = Self::zero();
        out.add_term(m, Coefficient::one());
        out
    }

    pub fn from_generator(g: Generator) -> Self {
        Self::from_monomial(g.into())
    }

    /// Coefficient of the unit monomial.
    pub fn counit(&self) -> Coefficient {
        self.coefficient(&Monomial::unit())
    }

    /// Homogeneous components by loop number.
    pub fn grade(&self) -> BTreeMap<usize, AlgebraElement> {
        let mut out: BTreeMap<usize, AlgebraElement> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree())
                .or_default()
                .add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Mul<&AlgebraElement> for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        let mut out = AlgebraElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a.times(b), x * y);
            }
        }
        out
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            write_signed(f, i == 0, c)?;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl TensorElement {
    pub fn unit() -> Self {
        let mut out = Self::zero();
        out.add_term((Monomial::unit(), Monomial::unit()), Coefficient::one());
        out
    }

    /// Product in the tensor square: `(a⊗b)(c⊗d) = ac⊗bd`.
    pub fn times(&self, rhs: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero();
        for ((a, b), x) in &self.terms {
            for ((c, d), y) in &rhs.terms {
                out.add_term((a.times(c), b.times(d)), x * y);
            }
        }
        out
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, ((a, b), c)) in self.terms.iter().enumerate() {
            write_signed(f, i == 0, c)?;
            write!(f, "{a} ⊗ {b}")?;
        }
        Ok(())
    }
}

fn write_signed(f: &mut fmt::Formatter<'_>, first: bool, c: &Coefficient) -> fmt::Result {
    let negative = c < &Coefficient::zero();
    let magnitude = if negative { -c.clone() } else { c.clone() };
    match (first, negative) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if !magnitude.is_one() {
        write!(f, "{magnitude}*")?;
    }
    Ok(())
}
