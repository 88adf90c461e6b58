use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::PolyError;

/// Exponent vector, one entry per ambient variable.
///
/// Ordered graded-lexicographically: total degree first, then the exponent
/// vectors lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_even(&self) -> bool {
        self.0.iter().all(|e| e % 2 == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval_f64(&self, point: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(point)
            .fold(1.0, |acc, (&e, &x)| acc * x.powi(e as i32))
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(point)
            .fold(Complex64::new(1.0, 0.0), |acc, (&e, &x)| acc * x.powi(e as i32))
    }

    pub fn eval_exact(&self, point: &[BigRational]) -> BigRational {
        let mut acc = BigRational::one();
        for (&e, x) in self.0.iter().zip(point) {
            if e > 0 {
                acc *= num_traits::pow(x.clone(), e as usize);
            }
        }
        acc
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial with exact rational coefficients.
///
/// Zero coefficients are never stored; terms iterate in canonical
/// graded-lex order, so printing and hashing are reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl SparsePoly {
    pub fn zero(vars: &[&str]) -> Self {
        Self::zero_owned(vars.iter().map(|s| s.to_string()).collect())
    }

    pub(crate) fn zero_owned(vars: Vec<String>) -> Self {
        SparsePoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        let n = p.nvars();
        p.add_term(Monomial::one(n), c);
        p
    }

    pub fn var(vars: &[&str], index: usize) -> Self {
        let mut p = Self::zero(vars);
        let n = p.nvars();
        p.add_term(Monomial::var(n, index), BigRational::one());
        p
    }

    /// Builds a polynomial from `(coefficient, exponents)` pairs; repeated
    /// monomials are summed.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (BigRational, Vec<u32>)>,
    {
        let mut p = Self::zero(vars);
        for (c, e) in terms {
            assert_eq!(e.len(), p.nvars(), "exponent vector length");
            p.add_term(Monomial(e), c);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn check_vars(&self, other: &SparsePoly) {
        assert_eq!(
            self.vars, other.vars,
            "polynomial arithmetic across different variable sets"
        );
    }

    pub fn scale(&self, c: &BigRational) -> SparsePoly {
        if c.is_zero() {
            return Self::zero_owned(self.vars.clone());
        }
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> SparsePoly {
        let mut acc = Self::zero_owned(self.vars.clone());
        acc.add_term(Monomial::one(self.nvars()), BigRational::one());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn check_dim(&self, got: usize) -> Result<(), PolyError> {
        if got != self.nvars() {
            return Err(PolyError::DimensionMismatch {
                expected: self.nvars(),
                got,
            });
        }
        Ok(())
    }

    pub fn eval_exact(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        self.check_dim(point.len())?;
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            acc += c * m.eval_exact(point);
        }
        Ok(acc)
    }

    /// Direct term-by-term evaluation, summed in canonical order.
    pub fn eval_float(&self, point: &[f64]) -> Result<f64, PolyError> {
        self.check_dim(point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| rational_to_f64(c) * m.eval_f64(point))
            .sum())
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64, PolyError> {
        self.check_dim(point.len())?;
        Ok(self
            .terms
            .iter()
            .map(|(m, c)| m.eval_complex(point) * rational_to_f64(c))
            .sum())
    }

    /// `|p(x)| / sum |c_m x^m|`: the fraction of the term magnitudes that
    /// survives cancellation. Scale invariant in both the coefficients and
    /// (for homogeneous parts) the point; 0 on the zero set.
    pub fn normalized_abs_complex(&self, point: &[Complex64]) -> Result<f64, PolyError> {
        self.check_dim(point.len())?;
        let mut value = Complex64::new(0.0, 0.0);
        let mut mass = 0.0;
        for (m, c) in &self.terms {
            let t = m.eval_complex(point) * rational_to_f64(c);
            value += t;
            mass += t.norm();
        }
        Ok(if mass == 0.0 { 0.0 } else { value.norm() / mass })
    }

    /// Formal partial derivative with respect to variable `index`.
    pub fn partial(&self, index: usize) -> Result<SparsePoly, PolyError> {
        if index >= self.nvars() {
            return Err(PolyError::VariableOutOfRange {
                index,
                nvars: self.nvars(),
            });
        }
        let mut out = Self::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[index];
            if e == 0 {
                continue;
            }
            let mut d = m.0.clone();
            d[index] -= 1;
            out.add_term(Monomial(d), c * BigRational::from_integer(BigInt::from(e)));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Vec<SparsePoly> {
        (0..self.nvars())
            .map(|i| self.partial(i).expect("index in range"))
            .collect()
    }

    /// Substitutes an exact value for one variable; the variable stays in
    /// the ambient list with exponent zero everywhere.
    pub fn specialize(&self, index: usize, value: &BigRational) -> SparsePoly {
        let mut out = Self::zero_owned(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[index];
            let mut d = m.0.clone();
            d[index] = 0;
            out.add_term(Monomial(d), c * num_traits::pow(value.clone(), e as usize));
        }
        out
    }

    /// Keeps only the listed variables (in the given order). Fails if a
    /// dropped variable still occurs.
    pub fn restrict_vars(&self, keep: &[&str]) -> Result<SparsePoly, PolyError> {
        let idx: Vec<usize> = keep
            .iter()
            .map(|k| {
                self.vars
                    .iter()
                    .position(|v| v == k)
                    .ok_or_else(|| PolyError::UnknownVariable(k.to_string()))
            })
            .collect::<Result<_, _>>()?;
        let mut out = SparsePoly::zero(keep);
        for (m, c) in &self.terms {
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 && !idx.contains(&i) {
                    return Err(PolyError::UnknownVariable(self.vars[i].clone()));
                }
            }
            out.add_term(Monomial(idx.iter().map(|&i| m.0[i]).collect()), c.clone());
        }
        Ok(out)
    }

    pub fn max_abs_coefficient(&self) -> BigRational {
        self.terms
            .values()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(BigRational::zero)
    }

    /// Scales so the largest coefficient magnitude is 1.
    pub fn normalized(&self) -> SparsePoly {
        let m = self.max_abs_coefficient();
        if m.is_zero() {
            return self.clone();
        }
        self.scale(&m.recip())
    }

    pub fn float_coefficients(&self) -> Vec<(Monomial, f64)> {
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), rational_to_f64(c)))
            .collect()
    }
}

pub(crate) fn rational_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

impl Add for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_vars(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        self.check_vars(rhs);
        let mut out = SparsePoly::zero_owned(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        self.scale(&-BigRational::one())
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    fn circle() -> SparsePoly {
        SparsePoly::from_terms(&["x", "y"], [(q(1), vec![2, 0]), (q(1), vec![0, 2])])
    }

    #[test]
    fn constant_and_pythagoras() {
        let c = SparsePoly::constant(&["x", "y"], q(7));
        assert_eq!(c.eval_exact(&[q(11), q(-3)]).unwrap(), q(7));
        assert_eq!(c.eval_float(&[0.5, 2.0]).unwrap(), 7.0);
        assert_eq!(circle().eval_exact(&[q(3), q(4)]).unwrap(), q(25));
        assert_eq!(circle().eval_float(&[3.0, 4.0]).unwrap(), 25.0);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let err = circle().eval_float(&[1.0]).unwrap_err();
        assert_eq!(
            err,
            PolyError::DimensionMismatch {
                expected: 2,
                got: 1
            }
        );
        assert!(circle().eval_exact(&[q(1), q(2), q(3)]).is_err());
    }

    #[test]
    fn partials() {
        let dx = circle().partial(0).unwrap();
        assert_eq!(dx, SparsePoly::from_terms(&["x", "y"], [(q(2), vec![1, 0])]));
        let c = SparsePoly::constant(&["x", "y"], q(7));
        assert!(c.partial(0).unwrap().is_zero());
        assert!(circle().partial(2).is_err());
    }

    #[test]
    fn cancellation_removes_terms() {
        let p = circle();
        let z = &p - &p;
        assert!(z.is_zero());
        assert_eq!(z.num_terms(), 0);
    }

    #[test]
    fn canonical_order_is_graded() {
        let p = SparsePoly::from_terms(
            &["x", "y"],
            [(q(1), vec![0, 0]), (q(2), vec![0, 3]), (q(3), vec![1, 0])],
        );
        let degs: Vec<u32> = p.terms().map(|(m, _)| m.degree()).collect();
        assert_eq!(degs, vec![0, 1, 3]);
    }

    #[test]
    fn specialize_and_restrict() {
        let p = SparsePoly::from_terms(&["x", "s"], [(q(1), vec![2, 2]), (q(-1), vec![0, 0])]);
        let r = p.specialize(1, &q(3)).restrict_vars(&["x"]).unwrap();
        assert_eq!(r.eval_exact(&[q(2)]).unwrap(), q(35));
        assert!(p.restrict_vars(&["x"]).is_err());
    }
}
