//! Closed-form polynomials in the distances `(e1, e2, e3)`.
//!
//! Every form depends on the triangle only through the squared sides
//! `q12 = s12^2`, `q13 = s13^2`, `q23 = s23^2`, so specializing at a triangle
//! stays in exact rational arithmetic even when a side is irrational.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::polyarith::SparsePoly;

pub const E_VARS: [&str; 3] = ["e1", "e2", "e3"];
const GENERIC_VARS: [&str; 6] = ["e1", "e2", "e3", "q12", "q13", "q23"];

/// The danger-cylinder form: zero iff the solution is singular.
pub const CYLINDER: &str = "q23*e1^4 + q12*e1^2*e2^2 - q13*e1^2*e2^2 - q23*e1^2*e2^2 \
    - q12*e1^2*e3^2 + q13*e1^2*e3^2 - q23*e1^2*e3^2 + q13*e2^4 - q12*e2^2*e3^2 \
    - q13*e2^2*e3^2 + q23*e2^2*e3^2 + q12*e3^4 - q12*q13*q23";

/// Extra generators cutting the three Morley generatrices out of the cylinder.
pub const GENERATRIX: [&str; 3] = [
    "-q12*e1^4 + q13*e1^4 - 2*q13*e1^2*e2^2 + 2*q12*e1^2*e3^2 + q13*e2^4 \
     - q12*q13*e2^2 - q12*e3^4 + q12*q13*e3^2",
    "q23*e1^4 - 2*q23*e1^2*e2^2 - q12*q23*e1^2 - q12*e2^4 + q23*e2^4 \
     + 2*q12*e2^2*e3^2 - q12*e3^4 + q12*q23*e3^2",
    "q23*e1^4 - 2*q23*e1^2*e3^2 - q13*q23*e1^2 - q13*e2^4 + 2*q13*e2^2*e3^2 \
     + q13*q23*e2^2 - q13*e3^4 + q23*e3^4",
];

/// Proportional to the squared volume of the tetrahedron `O ABC`.
pub const COPLANARITY: &str = "-q23*e1^4 - q12*e1^2*e2^2 + q13*e1^2*e2^2 + q23*e1^2*e2^2 \
    + q12*e1^2*e3^2 - q13*e1^2*e3^2 + q23*e1^2*e3^2 + q12*q23*e1^2 + q13*q23*e1^2 \
    - q23^2*e1^2 - q13*e2^4 + q12*e2^2*e3^2 + q13*e2^2*e3^2 - q23*e2^2*e3^2 \
    + q12*q13*e2^2 - q13^2*e2^2 + q13*q23*e2^2 - q12*e3^4 - q12^2*e3^2 \
    + q12*q13*e3^2 + q12*q23*e3^2 - q12*q13*q23";

fn generic(expr: &str) -> SparsePoly {
    SparsePoly::parse_expr(&GENERIC_VARS, expr).expect("built-in form parses")
}

/// Substitutes the squared sides, leaving a polynomial in `e1, e2, e3`.
fn specialize(p: &SparsePoly, sq: &[BigRational; 3]) -> SparsePoly {
    let mut out = p.clone();
    for (k, q) in sq.iter().enumerate() {
        out = out.specialize(3 + k, q);
    }
    out.restrict_vars(&E_VARS).expect("only distance variables remain")
}

pub fn cylinder_form_generic() -> SparsePoly {
    generic(CYLINDER)
}

pub fn cylinder_form(sq: &[BigRational; 3]) -> SparsePoly {
    specialize(&generic(CYLINDER), sq)
}

/// The four generators of the generatrix ideal: the three of
/// [`GENERATRIX`] and the negated cylinder form.
pub fn generatrix_generators(sq: &[BigRational; 3]) -> [SparsePoly; 4] {
    let g = GENERATRIX.map(|s| specialize(&generic(s), sq));
    let [g1, g2, g3] = g;
    [g1, g2, g3, -&cylinder_form(sq)]
}

pub fn coplanarity_form(sq: &[BigRational; 3]) -> SparsePoly {
    specialize(&generic(COPLANARITY), sq)
}

/// Squared tetrahedron volume from the 5x5 Cayley-Menger determinant,
/// divided by 288.
pub fn cayley_menger_form(sq: &[BigRational; 3]) -> SparsePoly {
    let e = |i: usize| SparsePoly::var(&E_VARS, i).pow(2);
    let c = |q: &BigRational| SparsePoly::constant(&E_VARS, q.clone());
    let one = c(&BigRational::one());
    let zero = SparsePoly::zero(&E_VARS);
    // points O, A, B, C
    let d = [
        [zero.clone(), e(0), e(1), e(2)],
        [e(0), zero.clone(), c(&sq[0]), c(&sq[1])],
        [e(1), c(&sq[0]), zero.clone(), c(&sq[2])],
        [e(2), c(&sq[1]), c(&sq[2]), zero.clone()],
    ];
    let m: Vec<Vec<SparsePoly>> = (0..5)
        .map(|r| {
            (0..5)
                .map(|col| match (r, col) {
                    (0, 0) => zero.clone(),
                    (0, _) | (_, 0) => one.clone(),
                    _ => d[r - 1][col - 1].clone(),
                })
                .collect()
        })
        .collect();
    determinant(&m).scale(&BigRational::new(1.into(), 288.into()))
}

/// Laplace expansion along the first row.
fn determinant(m: &[Vec<SparsePoly>]) -> SparsePoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = SparsePoly::zero(&E_VARS);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<SparsePoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(c, _)| *c != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * &determinant(&minor);
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Exact value of a distance form at squared distances `(e1^2, e2^2, e3^2)`.
///
/// Only valid for forms that are even in every variable.
pub fn eval_at_squares(p: &SparsePoly, e_sq: &[BigRational; 3]) -> BigRational {
    let mut acc = BigRational::zero();
    for (m, c) in p.terms() {
        let mut t = c.clone();
        for (ex, v) in m.exponents().iter().zip(e_sq) {
            debug_assert!(ex % 2 == 0, "form is not even");
            for _ in 0..ex / 2 {
                t *= v;
            }
        }
        acc += t;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn sides(a: i64, b: i64, c: i64) -> [BigRational; 3] {
        [q(a * a, 1), q(b * b, 1), q(c * c, 1)]
    }

    #[test]
    fn cylinder_form_at_right_triangle_fixture() {
        let f = cylinder_form(&sides(5, 4, 3));
        assert!(eval_at_squares(&f, &[q(21, 1), q(6, 1), q(9, 5)]).is_zero());
        assert!(!eval_at_squares(&f, &[q(21, 1), q(6, 1), q(2, 1)]).is_zero());
    }

    #[test]
    fn cylinder_form_on_equilateral_axis() {
        let f = cylinder_form(&sides(1, 1, 1));
        for r in [q(1, 1), q(7, 3), q(1, 9)] {
            assert_eq!(eval_at_squares(&f, &[r.clone(), r.clone(), r]), q(-1, 1));
        }
        // antipode of A on the circumcircle
        assert!(eval_at_squares(&f, &[q(4, 3), q(1, 3), q(1, 3)]).is_zero());
    }

    #[test]
    fn cylinder_form_coefficients_for_acute_fixture() {
        let f = cylinder_form(&sides(7, 6, 5));
        let expect =
            SparsePoly::parse_expr(&E_VARS, "25*e1^4 - 12*e1^2*e2^2 - 38*e1^2*e3^2 + 36*e2^4 - 60*e2^2*e3^2 + 49*e3^4 - 44100")
                .unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn first_generatrix_generator_cancels_under_swap_symmetry() {
        // s12 = s13 and e2 = e3
        let g = &generatrix_generators(&[q(3, 1), q(3, 1), q(2, 1)])[0];
        for e in [q(1, 1), q(5, 2)] {
            let v = eval_at_squares(g, &[q(7, 1), e.clone(), e]);
            assert!(v.is_zero());
        }
    }

    #[test]
    fn cayley_menger_volume() {
        let v = cayley_menger_form(&sides(5, 4, 3));
        // base area 6, height 1
        assert_eq!(eval_at_squares(&v, &[q(21, 1), q(6, 1), q(9, 5)]), q(4, 1));
        // O = A lies in the plane
        assert!(eval_at_squares(&v, &[q(0, 1), q(25, 1), q(16, 1)]).is_zero());
    }
}
