//! Normal-ordering engine for the polynomial *-algebra of S_μU(2).
//!
//! Elements are finite linear combinations of PBW monomials `α^k γ^l γ*^m`
//! (with `α^k` read as `(α*)^{-k}` for negative `k`). Products are brought
//! back to that order with the commutation rules
//!
//! ```text
//! γα  = μ⁻¹ αγ     γ*α  = μ⁻¹ αγ*
//! γα* = μ α*γ      γ*α* = μ α*γ*
//! αα* = 1 − μ² γγ*   α*α = 1 − γγ*   γ*γ = γγ*
//! ```
//!
//! The coefficients are complex doubles at a fixed numeric μ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Coefficients below this magnitude are dropped after every normalization.
pub const DROP_THRESHOLD: f64 = 1e-14;

/// The deformation parameter μ ∈ [−1, 1] \ {0}.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Mu(f64);

impl Mu {
    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu != 0.0 && (-1.0..=1.0).contains(&mu) {
            Ok(Mu(mu))
        } else {
            Err(Error::InvalidMu(mu))
        }
    }

    /// The undeformed point μ = 1 (classical SU(2)).
    pub fn classical() -> Self {
        Mu(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl fmt::Display for Mu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Numeric constants used by the rewriting step.
///
/// For a genuine S_μU(2) these are fixed by μ (see [`RewriteRules::standard`]).
/// They are exposed so that self-tests can run the engine with a corrupted
/// rule and confirm that the relation checks notice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RewriteRules {
    /// `c` in `αγ = c γα` and `αγ* = c γ*α`.
    pub commutation: f64,
    /// `c` in `αα* = 1 − c γγ*`.
    pub alpha_alpha_star: f64,
    /// `c` in `α*α = 1 − c γγ*`.
    pub alpha_star_alpha: f64,
}

impl RewriteRules {
    pub fn standard(mu: Mu) -> Self {
        RewriteRules {
            commutation: mu.0,
            alpha_alpha_star: mu.0 * mu.0,
            alpha_star_alpha: 1.0,
        }
    }
}

/// A PBW monomial `α^alpha γ^gamma γ*^gamma_star`; negative `alpha` stands for
/// a power of `α*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    pub alpha: i32,
    pub gamma: u32,
    pub gamma_star: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial::new(0, 0, 0);

    pub const fn new(alpha: i32, gamma: u32, gamma_star: u32) -> Self {
        Monomial {
            alpha,
            gamma,
            gamma_star,
        }
    }

    pub fn degree(&self) -> u32 {
        self.alpha.unsigned_abs() + self.gamma + self.gamma_star
    }

    pub fn is_one(&self) -> bool {
        *self == Monomial::ONE
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut parts = Vec::new();
        let power = |name: &str, p: u32| {
            if p == 1 {
                name.to_string()
            } else {
                format!("{name}^{p}")
            }
        };
        match self.alpha {
            0 => {}
            a if a > 0 => parts.push(power("α", a as u32)),
            a => parts.push(power("α*", a.unsigned_abs())),
        }
        if self.gamma > 0 {
            parts.push(power("γ", self.gamma));
        }
        if self.gamma_star > 0 {
            parts.push(power("γ*", self.gamma_star));
        }
        f.write_str(&parts.join(" "))
    }
}

/// Algebra context: the deformation parameter together with the rewrite rules
/// derived from it. Elements only combine with elements of the same context.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Algebra {
    mu: Mu,
    rules: RewriteRules,
}

impl Algebra {
    pub fn new(mu: Mu) -> Self {
        Algebra {
            mu,
            rules: RewriteRules::standard(mu),
        }
    }

    /// An algebra whose rewriting uses `rules` instead of the ones implied by `mu`.
    pub fn with_rules(mu: Mu, rules: RewriteRules) -> Self {
        Algebra { mu, rules }
    }

    pub fn mu(&self) -> Mu {
        self.mu
    }

    pub fn rules(&self) -> RewriteRules {
        self.rules
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            terms: BTreeMap::new(),
            algebra: *self,
        }
    }

    pub fn one(&self) -> AlgebraElement {
        self.scalar(Complex64::new(1.0, 0.0))
    }

    pub fn scalar(&self, c: Complex64) -> AlgebraElement {
        self.term(c, Monomial::ONE)
    }

    pub fn term(&self, c: Complex64, m: Monomial) -> AlgebraElement {
        let mut terms = BTreeMap::new();
        if c.norm() >= DROP_THRESHOLD {
            terms.insert(m, c);
        }
        AlgebraElement {
            terms,
            algebra: *self,
        }
    }

    pub fn monomial(&self, m: Monomial) -> AlgebraElement {
        self.term(Complex64::new(1.0, 0.0), m)
    }

    pub fn alpha(&self) -> AlgebraElement {
        self.monomial(Monomial::new(1, 0, 0))
    }

    pub fn alpha_star(&self) -> AlgebraElement {
        self.monomial(Monomial::new(-1, 0, 0))
    }

    pub fn gamma(&self) -> AlgebraElement {
        self.monomial(Monomial::new(0, 1, 0))
    }

    pub fn gamma_star(&self) -> AlgebraElement {
        self.monomial(Monomial::new(0, 0, 1))
    }

    /// The four generators in the order α, α*, γ, γ*.
    pub fn generators(&self) -> [AlgebraElement; 4] {
        [
            self.alpha(),
            self.alpha_star(),
            self.gamma(),
            self.gamma_star(),
        ]
    }

    /// Builds an element from raw terms, normalizing away dust.
    pub fn from_terms<I>(&self, terms: I) -> AlgebraElement
    where
        I: IntoIterator<Item = (Monomial, Complex64)>,
    {
        let mut acc = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        AlgebraElement::normalized(acc, *self)
    }

    /// Product `α^p · α^q` (negative exponents meaning α*) written as
    /// `Σ c · α^a (γγ*)^z` with the `γγ*` powers on the right.
    fn merge_alpha(&self, p: i32, q: i32) -> Vec<(f64, i32, u32)> {
        if p == 0 || q == 0 || p.signum() == q.signum() {
            return vec![(1.0, p + q, 0)];
        }
        let c = self.rules.commutation;
        let (inner, shift) = if p > 0 {
            // α^{p-1} (αα*) α*^{r-1} with γγ* α* = c² α* γγ*
            let r = -q;
            (
                self.merge_alpha(p - 1, q + 1),
                self.rules.alpha_alpha_star * c.powi(2 * (r - 1)),
            )
        } else {
            // α*^{s-1} (α*α) α^{r-1} with γγ* α = c⁻² α γγ*
            let r = q;
            (
                self.merge_alpha(p + 1, q - 1),
                self.rules.alpha_star_alpha * c.powi(-2 * (r - 1)),
            )
        };
        let mut out = inner.clone();
        out.extend(inner.into_iter().map(|(f, a, z)| (-shift * f, a, z + 1)));
        out
    }

    /// Normal-ordered product of two monomials.
    pub(crate) fn multiply_monomials(&self, a: Monomial, b: Monomial) -> Vec<(f64, Monomial)> {
        let c = self.rules.commutation;
        // γ^l γ*^m of the left factor travels past the α-part of the right one.
        let hops = (a.gamma + a.gamma_star) as i32 * b.alpha.abs();
        let factor = if b.alpha > 0 {
            c.powi(-hops)
        } else {
            c.powi(hops)
        };
        self.merge_alpha(a.alpha, b.alpha)
            .into_iter()
            .map(|(f, alpha, z)| {
                (
                    factor * f,
                    Monomial::new(
                        alpha,
                        a.gamma + b.gamma + z,
                        a.gamma_star + b.gamma_star + z,
                    ),
                )
            })
            .collect()
    }

    fn check_same(&self, other: &Algebra) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::ParameterMismatch {
                left: self.mu.0,
                right: other.mu.0,
            })
        }
    }
}

/// An element of the S_μU(2) polynomial algebra in PBW normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    terms: BTreeMap<Monomial, Complex64>,
    algebra: Algebra,
}

impl AlgebraElement {
    fn normalized(mut terms: BTreeMap<Monomial, Complex64>, algebra: Algebra) -> Self {
        terms.retain(|_, c| c.norm() >= DROP_THRESHOLD);
        AlgebraElement { terms, algebra }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn mu(&self) -> Mu {
        self.algebra.mu
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn coefficient(&self, m: &Monomial) -> Complex64 {
        self.terms.get(m).copied().unwrap_or_default()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(m, v)| (*m, v * c)).collect();
        Self::normalized(terms, self.algebra)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.algebra.check_same(&other.algebra)?;
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(*m).or_default() += c;
        }
        Ok(Self::normalized(terms, self.algebra))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// Normal-ordered product `self · other`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.algebra.check_same(&other.algebra)?;
        let mut acc: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let c = ca * cb;
                for (f, m) in self.algebra.multiply_monomials(*ma, *mb) {
                    *acc.entry(m).or_default() += c * f;
                }
            }
        }
        Ok(Self::normalized(acc, self.algebra))
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(self.algebra.one(), |acc, _| &acc * self)
    }

    /// The *-involution: antilinear and order reversing.
    pub fn adjoint(&self) -> Self {
        let alg = self.algebra;
        let mut acc: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m, c) in &self.terms {
            // (α^k γ^l γ*^m)* = γ^m γ*^l (α^k)*
            let left = Monomial::new(0, m.gamma_star, m.gamma);
            let right = Monomial::new(-m.alpha, 0, 0);
            for (f, out) in alg.multiply_monomials(left, right) {
                *acc.entry(out).or_default() += c.conj() * f;
            }
        }
        Self::normalized(acc, alg)
    }

    /// The comultiplication, extended multiplicatively from the generators.
    pub fn coproduct(&self) -> TensorAlgebraElement {
        let alg = self.algebra;
        let images = generator_coproducts(&alg);
        let mut total = TensorPower::zero(alg);
        for (m, c) in &self.terms {
            let alpha_image = if m.alpha >= 0 { &images[0] } else { &images[1] };
            let mut acc = TensorPower::one(alg);
            for _ in 0..m.alpha.unsigned_abs() {
                acc = acc.multiply(alpha_image);
            }
            for _ in 0..m.gamma {
                acc = acc.multiply(&images[2]);
            }
            for _ in 0..m.gamma_star {
                acc = acc.multiply(&images[3]);
            }
            total = total.add(&acc.scale(*c));
        }
        total
    }

    /// The counit: ε(α) = ε(α*) = 1, ε(γ) = ε(γ*) = 0.
    pub fn counit(&self) -> Complex64 {
        self.terms
            .iter()
            .filter(|(m, _)| m.gamma == 0 && m.gamma_star == 0)
            .map(|(_, c)| *c)
            .sum()
    }

    /// Largest coefficient deviation between two elements.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_diff(&self.terms, &other.terms)
    }

    pub fn max_abs_coefficient(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

fn max_diff<K: Ord>(a: &BTreeMap<K, Complex64>, b: &BTreeMap<K, Complex64>) -> f64 {
    let zero = Complex64::new(0.0, 0.0);
    let one_way = a
        .iter()
        .map(|(k, c)| (c - b.get(k).copied().unwrap_or(zero)).norm());
    let other_way = b
        .iter()
        .filter(|(k, _)| !a.contains_key(k))
        .map(|(_, c)| c.norm());
    one_way.chain(other_way).fold(0.0, f64::max)
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if c.im == 0.0 {
                    format!("{}·{}", c.re, m)
                } else {
                    format!("({})·{}", c, m)
                }
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

// Operator sugar. These panic on mismatched algebras; use the `try_*` and
// `multiply` methods where the operands come from different sources.

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_add(rhs)
            .expect("mismatched deformation parameters")
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.try_sub(rhs)
            .expect("mismatched deformation parameters")
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        self.multiply(rhs)
            .expect("mismatched deformation parameters")
    }
}

impl Mul<&AlgebraElement> for Complex64 {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        rhs.scale(self)
    }
}

impl Mul<&AlgebraElement> for f64 {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        rhs.scale(Complex64::new(self, 0.0))
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

/// Element of the `N`-fold tensor power of the algebra, every leg in normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorPower<const N: usize> {
    terms: BTreeMap<[Monomial; N], Complex64>,
    algebra: Algebra,
}

/// Element of `A ⊗ A`, the codomain of the coproduct.
pub type TensorAlgebraElement = TensorPower<2>;

impl<const N: usize> TensorPower<N> {
    pub fn zero(algebra: Algebra) -> Self {
        TensorPower {
            terms: BTreeMap::new(),
            algebra,
        }
    }

    pub fn one(algebra: Algebra) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert([Monomial::ONE; N], Complex64::new(1.0, 0.0));
        TensorPower { terms, algebra }
    }

    /// The pure tensor `legs[0] ⊗ legs[1] ⊗ …`.
    pub fn pure(legs: [&AlgebraElement; N]) -> Result<Self> {
        let algebra = legs
            .first()
            .map(|l| l.algebra)
            .ok_or_else(|| Error::Dimension("empty tensor".into()))?;
        for leg in &legs {
            algebra.check_same(&leg.algebra)?;
        }
        let mut partial: Vec<([Monomial; N], Complex64)> =
            vec![([Monomial::ONE; N], Complex64::new(1.0, 0.0))];
        for (i, leg) in legs.iter().enumerate() {
            partial = partial
                .into_iter()
                .flat_map(|(key, c)| {
                    leg.terms.iter().map(move |(m, v)| {
                        let mut key = key;
                        key[i] = *m;
                        (key, c * v)
                    })
                })
                .collect();
        }
        let mut terms = BTreeMap::new();
        for (k, c) in partial {
            *terms.entry(k).or_default() += c;
        }
        Ok(Self::normalized(terms, algebra))
    }

    fn normalized(mut terms: BTreeMap<[Monomial; N], Complex64>, algebra: Algebra) -> Self {
        terms.retain(|_, c| c.norm() >= DROP_THRESHOLD);
        TensorPower { terms, algebra }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Monomial; N], &Complex64)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &[Monomial; N]) -> Complex64 {
        self.terms.get(key).copied().unwrap_or_default()
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let terms = self.terms.iter().map(|(k, v)| (*k, v * c)).collect();
        Self::normalized(terms, self.algebra)
    }

    /// Sum; both operands must share an algebra.
    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            self.algebra, other.algebra,
            "mismatched deformation parameters"
        );
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            *terms.entry(*k).or_default() += c;
        }
        Self::normalized(terms, self.algebra)
    }

    /// Leg-wise product `(a₁⊗…)(b₁⊗…) = a₁b₁ ⊗ …`.
    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(
            self.algebra, other.algebra,
            "mismatched deformation parameters"
        );
        let alg = self.algebra;
        let mut acc: BTreeMap<[Monomial; N], Complex64> = BTreeMap::new();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                let mut partial: Vec<(f64, [Monomial; N])> = vec![(1.0, [Monomial::ONE; N])];
                for leg in 0..N {
                    let products = alg.multiply_monomials(ka[leg], kb[leg]);
                    partial = partial
                        .into_iter()
                        .flat_map(|(f, key)| {
                            products.iter().map(move |(g, m)| {
                                let mut key = key;
                                key[leg] = *m;
                                (f * g, key)
                            })
                        })
                        .collect();
                }
                let c = ca * cb;
                for (f, key) in partial {
                    *acc.entry(key).or_default() += c * f;
                }
            }
        }
        Self::normalized(acc, alg)
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        max_diff(&self.terms, &other.terms)
    }
}

impl TensorPower<2> {
    /// `(φ ⊗ id)` applied to a two-leg element.
    pub fn coproduct_first_leg(&self) -> TensorPower<3> {
        self.expand_leg(0)
    }

    /// `(id ⊗ φ)` applied to a two-leg element.
    pub fn coproduct_second_leg(&self) -> TensorPower<3> {
        self.expand_leg(1)
    }

    fn expand_leg(&self, leg: usize) -> TensorPower<3> {
        let alg = self.algebra;
        let mut acc: BTreeMap<[Monomial; 3], Complex64> = BTreeMap::new();
        for (key, c) in &self.terms {
            let image = alg.monomial(key[leg]).coproduct();
            for (pair, v) in &image.terms {
                let out = if leg == 0 {
                    [pair[0], pair[1], key[1]]
                } else {
                    [key[0], pair[0], pair[1]]
                };
                *acc.entry(out).or_default() += c * v;
            }
        }
        TensorPower::normalized(acc, alg)
    }

    /// `(ε ⊗ id)` applied to a two-leg element.
    pub fn counit_first_leg(&self) -> AlgebraElement {
        self.algebra.from_terms(
            self.terms
                .iter()
                .map(|(k, c)| (k[1], c * self.algebra.monomial(k[0]).counit())),
        )
    }

    /// `(id ⊗ ε)` applied to a two-leg element.
    pub fn counit_second_leg(&self) -> AlgebraElement {
        self.algebra.from_terms(
            self.terms
                .iter()
                .map(|(k, c)| (k[0], c * self.algebra.monomial(k[1]).counit())),
        )
    }
}

/// Coproduct images of α, α*, γ, γ*.
fn generator_coproducts(alg: &Algebra) -> [TensorAlgebraElement; 4] {
    let mu = Complex64::new(alg.mu.0, 0.0);
    let [a, a_star, g, g_star] = alg.generators();
    let pure = |x: &AlgebraElement, y: &AlgebraElement| {
        TensorPower::pure([x, y]).expect("generators share an algebra")
    };
    [
        // φ(α) = α⊗α − μ γ*⊗γ
        pure(&a, &a).add(&pure(&g_star, &g).scale(-mu)),
        // φ(α*) = α*⊗α* − μ γ⊗γ*
        pure(&a_star, &a_star).add(&pure(&g, &g_star).scale(-mu)),
        // φ(γ) = γ⊗α + α*⊗γ
        pure(&g, &a).add(&pure(&a_star, &g)),
        // φ(γ*) = γ*⊗α* + α⊗γ*
        pure(&g_star, &a_star).add(&pure(&a, &g_star)),
    ]
}

/// Residuals of the defining relations, each evaluated as `lhs − rhs` after
/// normal ordering. Names follow the relation they check.
pub fn relation_residuals(alg: &Algebra) -> Vec<(&'static str, f64)> {
    let mu = alg.mu.0;
    let [a, a_s, g, g_s] = alg.generators();
    let one = alg.one();
    let res = |x: AlgebraElement| x.max_abs_coefficient();
    vec![
        (
            "αα* + μ²γ*γ = 1",
            res(&(&(&a * &a_s) + &(mu * mu * &(&g_s * &g))) - &one),
        ),
        ("α*α + γ*γ = 1", res(&(&(&a_s * &a) + &(&g_s * &g)) - &one)),
        ("γ*γ = γγ*", res(&(&g_s * &g) - &(&g * &g_s))),
        ("αγ = μγα", res(&(&a * &g) - &(mu * &(&g * &a)))),
        ("αγ* = μγ*α", res(&(&a * &g_s) - &(mu * &(&g_s * &a)))),
        ("γα* = μα*γ", res(&(&g * &a_s) - &(mu * &(&a_s * &g)))),
        ("γ*α* = μα*γ*", res(&(&g_s * &a_s) - &(mu * &(&a_s * &g_s)))),
    ]
}
