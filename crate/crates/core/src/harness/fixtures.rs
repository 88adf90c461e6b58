//! The seven reference triangles and the fully displayed components of the
//! radical of their complementary elimination ideal.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::p3p::{P3pError, Triangle};
use crate::polyarith::{Monomial, SparsePoly};

/// Variables of every component polynomial.
pub const E_PRIME_VARS: [&str; 3] = ["e1p", "e2p", "e3p"];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureComponent {
    pub label: String,
    #[serde(serialize_with = "ser_poly")]
    pub poly: SparsePoly,
    /// One of the coordinate planes `e_i' = 0`.
    pub trivial: bool,
}

fn ser_poly<S: serde::Serializer>(p: &SparsePoly, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_text())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FixtureTriangle {
    pub name: &'static str,
    /// Side lengths as text, `sqrt(2)` where irrational.
    pub sides_text: [&'static str; 3],
    /// Exact `(s12^2, s13^2, s23^2)`.
    pub squared_sides: [i64; 3],
    pub components: Vec<FixtureComponent>,
    /// The displayed terms of the degree-16 component, as
    /// `(exponents, coefficient)`; the five `e1'^8` terms come first.
    pub displayed_terms: Vec<([u32; 3], i128)>,
}

impl FixtureTriangle {
    pub fn triangle(&self) -> Result<Triangle, P3pError> {
        let [a, b, c] = self.squared_sides.map(|q| BigRational::from_integer(BigInt::from(q)));
        Triangle::from_squared(a, b, c)
    }

    pub fn sides(&self) -> [f64; 3] {
        self.squared_sides.map(|q| (q as f64).sqrt())
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &FixtureComponent> {
        self.components.iter().filter(|c| !c.trivial)
    }

    /// Displayed ratios `coef(m) / coef(e1'^8 e2'^8)` for the four other
    /// leading terms.
    pub fn leading_ratios(&self) -> Vec<(Monomial, f64)> {
        let lead = self.displayed_terms[0].1 as f64;
        self.displayed_terms[1..5]
            .iter()
            .map(|(e, c)| (Monomial::new(e.to_vec()), *c as f64 / lead))
            .collect()
    }
}

fn component(expr: &str) -> FixtureComponent {
    FixtureComponent {
        label: expr.to_string(),
        poly: SparsePoly::parse_expr(&E_PRIME_VARS, expr).expect("fixture component parses"),
        trivial: false,
    }
}

/// `a e_i'^2 - b e_i' e_j' + a e_j'^2 - c` and its `+b` twin.
fn quadric_pair(i: usize, j: usize, a: i64, b: i64, c: i64) -> [FixtureComponent; 2] {
    let (x, y) = (E_PRIME_VARS[i], E_PRIME_VARS[j]);
    [-1, 1].map(|s| component(&format!("{a}*{x}^2 + {}*{x}*{y} + {a}*{y}^2 - {c}", s * b).replace("+ -", "- ")))
}

fn leading(c: [i128; 5]) -> Vec<([u32; 3], i128)> {
    let exps = [[8, 8, 0], [8, 6, 2], [8, 4, 4], [8, 2, 6], [8, 0, 8]];
    exps.into_iter().zip(c).collect()
}

fn build(
    name: &'static str,
    sides_text: [&'static str; 3],
    squared_sides: [i64; 3],
    nontrivial: Vec<FixtureComponent>,
    lead: [i128; 5],
    tail: &[([u32; 3], i128)],
) -> FixtureTriangle {
    let mut components: Vec<FixtureComponent> = E_PRIME_VARS
        .iter()
        .map(|v| FixtureComponent {
            trivial: true,
            ..component(v)
        })
        .collect();
    components.extend(nontrivial);
    let mut displayed_terms = leading(lead);
    displayed_terms.extend_from_slice(tail);
    FixtureTriangle {
        name,
        sides_text,
        squared_sides,
        components,
        displayed_terms,
    }
}

/// All seven fixtures, general acute last.
pub fn load_fixtures() -> Vec<FixtureTriangle> {
    let q = quadric_pair;
    let c = component;
    vec![
        build(
            "equilateral",
            ["1", "1", "1"],
            [1, 1, 1],
            [q(0, 1, 1, 1, 1), q(0, 2, 1, 1, 1), q(1, 2, 1, 1, 1)]
                .into_iter()
                .flatten()
                .chain([c("e1p^4 - e1p^2*e2p^2 - e1p^2*e3p^2 + e2p^4 - e2p^2*e3p^2 + e3p^4 - 1")])
                .collect(),
            [3, -6, 9, -6, 3],
            &[([0, 0, 4], -6), ([2, 0, 0], 4), ([0, 2, 0], 4), ([0, 0, 2], 4), ([0, 0, 0], -1)],
        ),
        build(
            "isosceles_right",
            ["sqrt(2)", "1", "1"],
            [2, 1, 1],
            vec![
                c("e1p^2 + e2p^2 - 2"),
                c("e1p^4 + e3p^4 - 2*e1p^2 - 2*e3p^2 + 1"),
                c("e2p^4 + e3p^4 - 2*e2p^2 - 2*e3p^2 + 1"),
                c("e1p^4 - 2*e1p^2*e3p^2 + e2p^4 - 2*e2p^2*e3p^2 + 2*e3p^4 - 2"),
            ],
            [4, -8, 8, -4, 1],
            &[([0, 0, 4], -24), ([2, 0, 0], 12), ([0, 2, 0], 12), ([0, 0, 2], 16), ([0, 0, 0], -4)],
        ),
        build(
            "isosceles_acute",
            ["4", "3", "3"],
            [16, 9, 9],
            [q(0, 1, 9, 2, 144), q(0, 2, 3, 4, 27), q(1, 2, 3, 4, 27)]
                .into_iter()
                .flatten()
                .chain([c("9*e1p^4 - 2*e1p^2*e2p^2 - 16*e1p^2*e3p^2 + 9*e2p^4 - 16*e2p^2*e3p^2 + 16*e3p^4 - 1296")])
                .collect(),
            [1280, -2560, 2720, -1440, 405],
            &[
                ([0, 0, 4], -3265173504),
                ([2, 0, 0], 15305500800),
                ([0, 2, 0], 15305500800),
                ([0, 0, 2], 19591041024),
                ([0, 0, 0], -44079842304),
            ],
        ),
        build(
            "isosceles_obtuse",
            ["5", "3", "3"],
            [25, 9, 9],
            [q(0, 1, 9, 7, 225), q(0, 2, 3, 5, 27), q(1, 2, 3, 5, 27)]
                .into_iter()
                .flatten()
                .chain([c("9*e1p^4 + 7*e1p^2*e2p^2 - 25*e1p^2*e3p^2 + 9*e2p^4 - 25*e2p^2*e3p^2 + 25*e3p^4 - 2025")])
                .collect(),
            [6875, -13750, 11825, -4950, 891],
            &[([0, 2, 0], 203276182500), ([0, 0, 2], 298935562500), ([0, 0, 0], -672605015625)],
        ),
        build(
            "general_right",
            ["5", "4", "3"],
            [25, 16, 9],
            [c("e1p^2 + e2p^2 - 25")]
                .into_iter()
                .chain(q(0, 2, 5, 6, 80))
                .chain(q(1, 2, 5, 8, 45))
                .chain([c("9*e1p^4 - 18*e1p^2*e3p^2 + 16*e2p^4 - 32*e2p^2*e3p^2 + 25*e3p^4 - 3600")])
                .collect(),
            [625, -1600, 1824, -1024, 256],
            &[
                ([2, 0, 0], 59778000000),
                ([0, 2, 0], 88128000000),
                ([0, 0, 2], 101250000000),
                ([0, 0, 0], -291600000000),
            ],
        ),
        build(
            "general_obtuse",
            ["7", "5", "3"],
            [49, 25, 9],
            [q(0, 1, 1, 1, 49), q(0, 2, 7, 11, 175), q(1, 2, 7, 13, 63)]
                .into_iter()
                .flatten()
                .chain([c("9*e1p^4 + 15*e1p^2*e2p^2 - 33*e1p^2*e3p^2 + 25*e2p^4 - 65*e2p^2*e3p^2 + 49*e3p^4 - 11025")])
                .collect(),
            [7203, -19110, 20025, -9750, 1875],
            &[([0, 0, 2], 19845327442500), ([0, 0, 0], -65664686390625)],
        ),
        build(
            "general_acute",
            ["7", "6", "5"],
            [49, 36, 25],
            [q(0, 1, 5, 2, 245), q(0, 2, 35, 38, 1260), q(1, 2, 7, 10, 175)]
                .into_iter()
                .flatten()
                .chain([c("25*e1p^4 - 12*e1p^2*e2p^2 - 38*e1p^2*e3p^2 + 36*e2p^4 - 60*e2p^2*e3p^2 + 49*e3p^4 - 44100")])
                .collect(),
            [57624, -141120, 171072, -103680, 31104],
            &[([0, 0, 2], 3560485217625000), ([0, 0, 0], -26265874556250000)],
        ),
    ]
}

/// Fixture whose sides match `(s12, s13, s23)` to `1e-12`.
pub fn fixture_by_sides(s: [f64; 3]) -> Option<FixtureTriangle> {
    load_fixtures()
        .into_iter()
        .find(|f| f.sides().iter().zip(&s).all(|(a, b)| (a - b).abs() <= 1e-12 * a))
}

pub fn fixture_by_name(name: &str) -> Option<FixtureTriangle> {
    load_fixtures().into_iter().find(|f| f.name == name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seven_fixtures_with_expected_components() {
        let fx = load_fixtures();
        assert_eq!(fx.len(), 7);
        let eq = &fx[0];
        let quartic = SparsePoly::parse_expr(
            &E_PRIME_VARS,
            "e1p^4 - e1p^2*e2p^2 - e1p^2*e3p^2 + e2p^4 - e2p^2*e3p^2 + e3p^4 - 1",
        )
        .unwrap();
        assert!(eq.components.iter().any(|c| c.poly == quartic));
        let right = fixture_by_name("isosceles_right").unwrap();
        let circle = SparsePoly::parse_expr(&E_PRIME_VARS, "e1p^2 + e2p^2 - 2").unwrap();
        assert!(right.components.iter().any(|c| c.poly == circle));
        assert_eq!(right.triangle().unwrap().squared_sides_f64(), [2.0, 1.0, 1.0]);
        for f in &fx {
            assert_eq!(f.components.iter().filter(|c| c.trivial).count(), 3);
        }
    }

    #[test]
    fn quadric_pairs_carry_both_signs() {
        let f = fixture_by_sides([7.0, 6.0, 5.0]).unwrap();
        let labels: Vec<&str> = f.nontrivial().map(|c| c.label.as_str()).collect();
        assert!(labels.contains(&"5*e1p^2 - 2*e1p*e2p + 5*e2p^2 - 245"));
        assert!(labels.contains(&"5*e1p^2 + 2*e1p*e2p + 5*e2p^2 - 245"));
        assert_eq!(labels.len(), 7);
        assert_eq!(fixture_by_name("isosceles_right").unwrap().nontrivial().count(), 4);
        assert_eq!(fixture_by_name("general_right").unwrap().nontrivial().count(), 6);
    }

    #[test]
    fn cylinder_quartic_matches_closed_form() {
        // the quartic component in e' equals the cylinder form up to scale
        use crate::forms::cylinder_form;
        for f in load_fixtures() {
            let t = f.triangle().unwrap();
            let cyl = cylinder_form(t.squared_sides()).normalized();
            let comp = &f.nontrivial().last().unwrap().poly;
            let renamed = SparsePoly::from_terms(
                &crate::forms::E_VARS,
                comp.terms().map(|(m, c)| (c.clone(), m.exponents().to_vec())),
            );
            assert_eq!(cyl, renamed.normalized(), "{}", f.name);
        }
    }
}
