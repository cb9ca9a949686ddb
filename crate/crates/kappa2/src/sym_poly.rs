//! Exact polynomials in the free cumulants of two variables.
//!
//! Indeterminates are first-order cumulants `κ_n^a`, `κ_n^b` and
//! second-order cumulants `κ_{j,k}^a`, `κ_{j,k}^b` (symmetric in `j, k`,
//! stored with `j ≥ k`). Monomials keep their factors sorted by
//! `(variable, order, arguments)`; polynomials are coefficient maps with
//! exact big-integer coefficients, and evaluation substitutes exact
//! rationals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("malformed cumulant specification: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    A,
    B,
}

impl Var {
    pub fn letter(self) -> char {
        match self {
            Var::A => 'a',
            Var::B => 'b',
        }
    }

    pub fn other(self) -> Var {
        match self {
            Var::A => Var::B,
            Var::B => Var::A,
        }
    }
}

/// Which cumulant of the variable: `First(n)` for `κ_n`, `Second(j, k)`
/// for `κ_{j,k}` with `j ≥ k` enforced on construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CumOrder {
    First(u32),
    Second(u32, u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Indet {
    pub var: Var,
    pub order: CumOrder,
}

impl Indet {
    pub fn first(var: Var, n: u32) -> Indet {
        assert!(n >= 1);
        Indet {
            var,
            order: CumOrder::First(n),
        }
    }

    pub fn second(var: Var, j: u32, k: u32) -> Indet {
        assert!(j >= 1 && k >= 1);
        Indet {
            var,
            order: CumOrder::Second(j.max(k), j.min(k)),
        }
    }

    fn subscript(&self) -> String {
        match self.order {
            CumOrder::First(n) => n.to_string(),
            CumOrder::Second(j, k) => format!("{j},{k}"),
        }
    }
}

/// A product of indeterminates, kept sorted (factors repeat per power).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    factors: Vec<Indet>,
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial::default()
    }

    pub fn from_indets(mut factors: Vec<Indet>) -> Monomial {
        factors.sort_unstable();
        Monomial { factors }
    }

    pub fn factors(&self) -> &[Indet] {
        &self.factors
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            if self.factors[i] <= other.factors[j] {
                factors.push(self.factors[i]);
                i += 1;
            } else {
                factors.push(other.factors[j]);
                j += 1;
            }
        }
        factors.extend_from_slice(&self.factors[i..]);
        factors.extend_from_slice(&other.factors[j..]);
        Monomial { factors }
    }
}

/// Exact polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: i64) -> Poly {
        let mut p = Poly::zero();
        p.add_term(Monomial::one(), BigInt::from(c));
        p
    }

    pub fn from_monomial(m: Monomial) -> Poly {
        let mut p = Poly::zero();
        p.add_term(m, BigInt::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    pub fn add_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &Poly) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }

    pub fn scale(&mut self, c: &BigInt) {
        if c.is_zero() {
            self.terms.clear();
            return;
        }
        for v in self.terms.values_mut() {
            *v *= c;
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    /// Substitutes the cumulant values of `a` and `b`.
    pub fn evaluate(&self, a: &CumulantSpec, b: &CumulantSpec) -> BigRational {
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = BigRational::from(c.clone());
            for ind in m.factors() {
                let spec = match ind.var {
                    Var::A => a,
                    Var::B => b,
                };
                v *= spec.get(ind.order);
            }
            total += v;
        }
        total
    }

    /// LaTeX rendering in canonical term order; repeated factors collapse
    /// into powers, e.g. `12(\kappa_2^a)^2\kappa_4^b`.
    pub fn render_latex(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if !abs.is_one() || m.factors().is_empty() {
                let _ = write!(out, "{abs}");
            }
            let mut i = 0;
            while i < m.factors().len() {
                let ind = m.factors()[i];
                let mut run = 1;
                while i + run < m.factors().len() && m.factors()[i + run] == ind {
                    run += 1;
                }
                let sub = ind.subscript();
                let base = if sub.len() > 1 {
                    format!("\\kappa_{{{sub}}}^{}", ind.var.letter())
                } else {
                    format!("\\kappa_{sub}^{}", ind.var.letter())
                };
                if run == 1 {
                    out.push_str(&base);
                } else if run < 10 {
                    let _ = write!(out, "({base})^{run}");
                } else {
                    let _ = write!(out, "({base})^{{{run}}}");
                }
                i += run;
            }
        }
        out
    }

    pub fn to_json_string(&self) -> String {
        let terms: Vec<TermJson> = self
            .terms
            .iter()
            .map(|(m, c)| TermJson {
                coeff: c.to_string(),
                factors: m
                    .factors()
                    .iter()
                    .map(|ind| FactorJson {
                        var: ind.var.letter().to_string(),
                        args: match ind.order {
                            CumOrder::First(n) => vec![n],
                            CumOrder::Second(j, k) => vec![j, k],
                        },
                    })
                    .collect(),
            })
            .collect();
        serde_json::to_string(&PolyJson { terms }).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Poly, SpecError> {
        let parsed: PolyJson =
            serde_json::from_str(s).map_err(|e| SpecError::Malformed(e.to_string()))?;
        let mut poly = Poly::zero();
        for term in parsed.terms {
            let coeff: BigInt = term
                .coeff
                .parse()
                .map_err(|_| SpecError::Malformed(format!("bad coefficient {:?}", term.coeff)))?;
            let mut factors = Vec::with_capacity(term.factors.len());
            for f in term.factors {
                let var = match f.var.as_str() {
                    "a" => Var::A,
                    "b" => Var::B,
                    other => {
                        return Err(SpecError::Malformed(format!("bad variable {other:?}")));
                    }
                };
                let ind = match f.args.as_slice() {
                    [n] => Indet::first(var, *n),
                    [j, k] => Indet::second(var, *j, *k),
                    _ => {
                        return Err(SpecError::Malformed(format!(
                            "factor needs 1 or 2 args, got {}",
                            f.args.len()
                        )));
                    }
                };
                factors.push(ind);
            }
            poly.add_term(Monomial::from_indets(factors), coeff);
        }
        Ok(poly)
    }
}

#[derive(Serialize, Deserialize)]
struct PolyJson {
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coeff: String,
    factors: Vec<FactorJson>,
}

#[derive(Serialize, Deserialize)]
struct FactorJson {
    var: String,
    args: Vec<u32>,
}

/// Numeric cumulant data for one variable: exact rational values for its
/// first- and second-order cumulants, absent entries reading as zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CumulantSpec {
    first: BTreeMap<u32, BigRational>,
    second: BTreeMap<(u32, u32), BigRational>,
}

impl CumulantSpec {
    pub fn new() -> CumulantSpec {
        CumulantSpec::default()
    }

    /// The standard semicircular data: `κ_2 = κ_{2,2} = 1`, everything
    /// else zero.
    pub fn semicircular() -> CumulantSpec {
        CumulantSpec::semicircular_with(BigRational::one(), BigRational::one())
    }

    /// Semicircular data with prescribed `κ_2` and `κ_{2,2}`.
    pub fn semicircular_with(k2: BigRational, k22: BigRational) -> CumulantSpec {
        let mut s = CumulantSpec::new();
        s.set_first(2, k2);
        s.set_second(2, 2, k22);
        s
    }

    pub fn set_first(&mut self, n: u32, v: BigRational) {
        if v.is_zero() {
            self.first.remove(&n);
        } else {
            self.first.insert(n, v);
        }
    }

    pub fn set_second(&mut self, j: u32, k: u32, v: BigRational) {
        let key = (j.max(k), j.min(k));
        if v.is_zero() {
            self.second.remove(&key);
        } else {
            self.second.insert(key, v);
        }
    }

    pub fn get(&self, order: CumOrder) -> BigRational {
        match order {
            CumOrder::First(n) => self.first.get(&n).cloned().unwrap_or_else(BigRational::zero),
            CumOrder::Second(j, k) => self
                .second
                .get(&(j.max(k), j.min(k)))
                .cloned()
                .unwrap_or_else(BigRational::zero),
        }
    }

    pub fn get_first(&self, n: u32) -> BigRational {
        self.get(CumOrder::First(n))
    }

    pub fn get_second(&self, j: u32, k: u32) -> BigRational {
        self.get(CumOrder::Second(j, k))
    }

    /// Random small-rational data for every first-order cumulant up to
    /// `max_first` and every second-order pair with `j + k ≤ max_second`.
    pub fn random(rng: &mut crate::XorShift64, max_first: u32, max_second: u32) -> CumulantSpec {
        let mut s = CumulantSpec::new();
        let mut draw = |rng: &mut crate::XorShift64| {
            let p = rng.range_i64(-3, 3);
            let q = rng.range_i64(1, 3);
            BigRational::new(BigInt::from(p), BigInt::from(q))
        };
        for n in 1..=max_first {
            let v = draw(rng);
            s.set_first(n, v);
        }
        for j in 1..=max_second {
            for k in 1..=j {
                if j + k <= max_second {
                    let v = draw(rng);
                    s.set_second(j, k, v);
                }
            }
        }
        s
    }

    /// Parses the JSON shape `{"first": {"2": "1"}, "second": {"2,1": "1/3"}}`.
    pub fn from_json_str(s: &str) -> Result<CumulantSpec, SpecError> {
        #[derive(Deserialize)]
        struct SpecJson {
            #[serde(default)]
            first: BTreeMap<String, String>,
            #[serde(default)]
            second: BTreeMap<String, String>,
        }
        let parsed: SpecJson =
            serde_json::from_str(s).map_err(|e| SpecError::Malformed(e.to_string()))?;
        let rational = |v: &str| -> Result<BigRational, SpecError> {
            v.trim()
                .parse()
                .map_err(|_| SpecError::Malformed(format!("bad rational {v:?}")))
        };
        let mut spec = CumulantSpec::new();
        for (k, v) in &parsed.first {
            let n: u32 = k
                .trim()
                .parse()
                .map_err(|_| SpecError::Malformed(format!("bad first-order key {k:?}")))?;
            if n == 0 {
                return Err(SpecError::Malformed("cumulant order 0".into()));
            }
            spec.set_first(n, rational(v)?);
        }
        for (k, v) in &parsed.second {
            let parts: Vec<&str> = k.split(',').map(str::trim).collect();
            let [j, l] = parts.as_slice() else {
                return Err(SpecError::Malformed(format!("bad second-order key {k:?}")));
            };
            let j: u32 = j
                .parse()
                .map_err(|_| SpecError::Malformed(format!("bad second-order key {k:?}")))?;
            let l: u32 = l
                .parse()
                .map_err(|_| SpecError::Malformed(format!("bad second-order key {k:?}")))?;
            if j == 0 || l == 0 {
                return Err(SpecError::Malformed("cumulant order 0".into()));
            }
            spec.set_second(j, l, rational(v)?);
        }
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k1(var: Var, n: u32) -> Monomial {
        Monomial::from_indets(vec![Indet::first(var, n)])
    }

    #[test]
    fn latex_examples() {
        let mut p = Poly::zero();
        p.add_term(
            Monomial::from_indets(vec![Indet::first(Var::A, 2), Indet::first(Var::B, 2)]),
            BigInt::from(2),
        );
        assert_eq!(p.render_latex(), "2\\kappa_2^a\\kappa_2^b");
        let mut q = Poly::zero();
        q.add_term(
            Monomial::from_indets(vec![
                Indet::second(Var::A, 2, 2),
                Indet::first(Var::B, 2),
                Indet::first(Var::B, 2),
            ]),
            BigInt::from(-4),
        );
        assert_eq!(q.render_latex(), "-4\\kappa_{2,2}^a(\\kappa_2^b)^2");
        assert_eq!(Poly::zero().render_latex(), "0");
        assert_eq!(Poly::constant(7).render_latex(), "7");
    }

    #[test]
    fn canonical_term_order_is_variable_then_order_then_args() {
        let mut p = Poly::zero();
        p.add_term(k1(Var::B, 1), BigInt::one());
        p.add_term(k1(Var::A, 2), BigInt::one());
        p.add_term(
            Monomial::from_indets(vec![Indet::second(Var::A, 1, 1)]),
            BigInt::one(),
        );
        p.add_term(k1(Var::A, 1), BigInt::one());
        assert_eq!(
            p.render_latex(),
            "\\kappa_1^a + \\kappa_2^a + \\kappa_{1,1}^a + \\kappa_1^b"
        );
    }

    #[test]
    fn json_round_trip() {
        let mut p = Poly::zero();
        p.add_term(
            Monomial::from_indets(vec![
                Indet::second(Var::A, 2, 1),
                Indet::first(Var::B, 1),
                Indet::first(Var::B, 1),
                Indet::first(Var::B, 1),
            ]),
            BigInt::from(8),
        );
        p.add_term(k1(Var::A, 4), BigInt::from(-3));
        let s = p.to_json_string();
        assert_eq!(Poly::from_json_str(&s).unwrap(), p);
        // Factor order in the input is immaterial.
        let shuffled = r#"{"terms":[{"coeff":"5","factors":[{"var":"b","args":[2]},{"var":"a","args":[1,2]}]}]}"#;
        let parsed = Poly::from_json_str(shuffled).unwrap();
        let mut expect = Poly::zero();
        expect.add_term(
            Monomial::from_indets(vec![Indet::second(Var::A, 2, 1), Indet::first(Var::B, 2)]),
            BigInt::from(5),
        );
        assert_eq!(parsed, expect);
    }

    #[test]
    fn evaluation_substitutes_exact_rationals() {
        let spec_str = r#"{"first": {"1": "1/2", "2": "1"}, "second": {"2,2": "-2/3"}}"#;
        let a = CumulantSpec::from_json_str(spec_str).unwrap();
        let b = CumulantSpec::semicircular();
        let mut p = Poly::zero();
        // 3 κ_{2,2}^a (κ_2^b)^2 + κ_1^a
        p.add_term(
            Monomial::from_indets(vec![
                Indet::second(Var::A, 2, 2),
                Indet::first(Var::B, 2),
                Indet::first(Var::B, 2),
            ]),
            BigInt::from(3),
        );
        p.add_term(k1(Var::A, 1), BigInt::one());
        let v = p.evaluate(&a, &b);
        // 3·(−2/3)·1 + 1/2 = −3/2.
        assert_eq!(v, BigRational::new(BigInt::from(-3), BigInt::from(2)));
    }

    #[test]
    fn second_order_keys_are_symmetric() {
        let mut s = CumulantSpec::new();
        s.set_second(1, 2, BigRational::one());
        assert_eq!(s.get_second(2, 1), BigRational::one());
        assert_eq!(s.get_second(1, 2), BigRational::one());
        assert_eq!(Indet::second(Var::A, 1, 2), Indet::second(Var::A, 2, 1));
    }

    #[test]
    fn add_and_cancel() {
        let mut p = Poly::zero();
        p.add_term(k1(Var::A, 3), BigInt::from(5));
        let mut q = Poly::zero();
        q.add_term(k1(Var::A, 3), BigInt::from(-5));
        p.add_assign(&q);
        assert!(p.is_zero());
        assert_eq!(p, Poly::zero());
    }

    #[test]
    fn malformed_spec_files_are_rejected() {
        assert!(CumulantSpec::from_json_str("{").is_err());
        assert!(CumulantSpec::from_json_str(r#"{"first": {"x": "1"}}"#).is_err());
        assert!(CumulantSpec::from_json_str(r#"{"second": {"2": "1"}}"#).is_err());
        assert!(CumulantSpec::from_json_str(r#"{"first": {"1": "1/0x"}}"#).is_err());
    }
}
