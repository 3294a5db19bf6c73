//! Type of an isolated compound Du Val point read off the 2-jet and 3-jet
//! of its index-one cover.

use std::fmt;

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{int, Rational};
use crate::germ::QuotientGerm;
use crate::poly::Polynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PointKind {
    /// The germ does not pass through the origin.
    Empty,
    Smooth,
    CA,
    CD,
    CE,
    /// Multiplicity at least three, or embedding dimension above four.
    NotCdv,
}

impl fmt::Display for PointKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PointKind::Empty => "empty",
            PointKind::Smooth => "smooth",
            PointKind::CA => "cA",
            PointKind::CD => "cD",
            PointKind::CE => "cE",
            PointKind::NotCdv => "not cDV",
        })
    }
}

fn linear_coefficient(p: &Polynomial, var: usize) -> Rational {
    let mut e = vec![0u32; p.nvars()];
    e[var] = 1;
    p.coefficient(&e).cloned().unwrap_or_else(Rational::zero)
}

/// Eliminates variables with nonzero linear terms until one equation is left, keeping jets up to degree 3.
fn hypersurface_jet(germ: &QuotientGerm) -> Option<Polynomial> {
    let dim = germ.dim();
    let mut eqs: Vec<Polynomial> = germ.equations.iter().map(|p| p.truncate(3)).collect();
    while eqs.len() > 1 {
        let (k, var) = (0..eqs.len())
            .flat_map(|k| (0..dim).map(move |v| (k, v)))
            .find(|&(k, v)| !linear_coefficient(&eqs[k], v).is_zero())?;
        let c = linear_coefficient(&eqs[k], var);
        let rest = &eqs[k] + &Polynomial::monomial(unit(dim, var), -c.clone());
        let scale = Polynomial::constant(dim, -int(1) / c);
        let expr = &rest * &scale;
        let mut value = Polynomial::zero(dim);
        for _ in 0..3 {
            value = expr.substitute(var, &value).truncate(3);
        }
        eqs.remove(k);
        eqs = eqs.iter().map(|p| p.substitute(var, &value).truncate(3)).collect();
    }
    eqs.pop()
}

fn unit(dim: usize, var: usize) -> Vec<u32> {
    let mut e = vec![0u32; dim];
    e[var] = 1;
    e
}

fn quadratic_matrix(q: &Polynomial) -> Vec<Vec<Rational>> {
    let n = q.nvars();
    let mut m = vec![vec![Rational::zero(); n]; n];
    for (e, c) in q.terms() {
        let vars: Vec<usize> = (0..n).flat_map(|i| std::iter::repeat(i).take(e[i] as usize)).collect();
        let (i, j) = (vars[0], vars[1]);
        if i == j {
            m[i][i] += c;
        } else {
            m[i][j] += c / int(2);
            m[j][i] += c / int(2);
        }
    }
    m
}

fn rank(mut m: Vec<Vec<Rational>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        for i in r + 1..rows {
            if !m[i][c].is_zero() {
                let f = m[i][c].clone() / &m[r][c];
                for k in c..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        r += 1;
    }
    r
}

/// Whether a cubic form is `c l^3` for a linear form `l`.
fn is_cube(f: &Polynomial) -> bool {
    let n = f.nvars();
    let Some(j) = (0..n).find(|&j| {
        let mut e = vec![0u32; n];
        e[j] = 3;
        f.contains(&e)
    }) else {
        return false;
    };
    let mut cube = vec![0u32; n];
    cube[j] = 3;
    let c = f.coefficient(&cube).cloned().expect("present");
    let mut l = Polynomial::var(n, j);
    for k in (0..n).filter(|&k| k != j) {
        let mut e = vec![0u32; n];
        e[j] = 2;
        e[k] = 1;
        if let Some(ck) = f.coefficient(&e) {
            let coef = ck / (int(3) * &c);
            l = &l + &(&Polynomial::var(n, k) * &Polynomial::constant(n, coef));
        }
    }
    let candidate = &(&(&l * &l) * &l) * &Polynomial::constant(n, c);
    &candidate + &(-f) == Polynomial::zero(n)
}

/// cDV type of the index-one cover of the germ at the origin.
pub fn point_kind(germ: &QuotientGerm) -> PointKind {
    let Some(phi) = hypersurface_jet(germ) else {
        return PointKind::NotCdv;
    };
    let n = phi.nvars();
    if phi.contains(&vec![0; n]) {
        return PointKind::Empty;
    }
    if !phi.homogeneous_part(1).is_zero() {
        return PointKind::Smooth;
    }
    let q = phi.homogeneous_part(2);
    let m = quadratic_matrix(&q);
    match rank(m.clone()) {
        0 => PointKind::NotCdv,
        1 => {
            let j = (0..n).find(|&j| !m[j][j].is_zero()).expect("rank one form has a square term");
            let mut value = Polynomial::zero(n);
            for k in (0..n).filter(|&k| k != j && !m[j][k].is_zero()) {
                let coef = -(m[j][k].clone() / &m[j][j]);
                value = &value + &(&Polynomial::var(n, k) * &Polynomial::constant(n, coef));
            }
            let cubic = phi.homogeneous_part(3).substitute(j, &value);
            if cubic.is_zero() {
                PointKind::NotCdv
            } else if is_cube(&cubic) {
                PointKind::CE
            } else {
                PointKind::CD
            }
        }
        _ => PointKind::CA,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::germ::parse_germ;

    fn kind(text: &str) -> PointKind {
        point_kind(&parse_germ(text).unwrap())
    }

    #[test]
    fn hypersurfaces() {
        assert_eq!(kind("quotient 1/2(1,1,1,0); eq x1^2 + x4^3 + x2*x3^3*x4 + x2^4 + x3^8;"), PointKind::CE);
        assert_eq!(kind("quotient 1/2(1,1,1,0); eq x1^2 + x2^2*x4 + x3^8 + x4^8;"), PointKind::CD);
        assert_eq!(kind("quotient 1/2(1,1,1,0); eq x1^2 + x2^2 + x3^8 + x4^8;"), PointKind::CA);
        assert_eq!(kind("quotient 1/3(1,2,1,0); eq x1*x2 + x3^3 + x4^2;"), PointKind::CA);
        assert_eq!(kind("quotient 1/1(0,0,0,0); eq x1^3 + x2^3 + x3^3 + x4^3;"), PointKind::NotCdv);
        assert_eq!(kind("quotient 1/1(0,0,0,0); eq x1 + x2^3;"), PointKind::Smooth);
        assert_eq!(kind("quotient 1/1(0,0,0,0); eq x1^2 + 2*x1*x2 + x2^2 + x3^4 + x4^4;"), PointKind::NotCdv);
    }

    #[test]
    fn complete_intersections() {
        let t = "quotient 1/2(1,1,1,0,0); eq x1^2 + x4*x5 + x3^4; eq x2^2 + x3^2 + x4^2 + x5;";
        assert_eq!(kind(t), PointKind::CD);
        let t = "quotient 1/1(0,0,0,0,0); eq x1^2 + x2*x5 + x4^8; eq x2*x4 + x3^2 + x5;";
        assert_eq!(kind(t), PointKind::CD);
        assert_eq!(kind("quotient 1/1(0,0,0,0,0); eq x1^2 + x2^2; eq x3^2 + x4^2 + x5^2;"), PointKind::NotCdv);
    }
}
