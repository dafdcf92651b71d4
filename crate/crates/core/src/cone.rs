//! Rational polyhedral cones given by generators, with an exact
//! inequality description obtained by Fourier-Motzkin elimination.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::linalg::{self, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    dim: usize,
    generators: Vec<Vec<i64>>,
    // x is in the cone iff <e, x> = 0 for every equation and <a, x> >= 0 for
    // every inequality.
    equations: Vec<Vec<BigInt>>,
    inequalities: Vec<Vec<BigInt>>,
}

impl Cone {
    pub fn from_generators(dim: usize, generators: Vec<Vec<i64>>) -> Cone {
        assert!(generators.iter().all(|g| g.len() == dim));
        let s = generators.len();
        let width = s + dim;
        let mut eqs: Vec<Vec<Rational>> = (0..dim)
            .map(|i| {
                let mut row = vec![Rational::zero(); width];
                for (j, g) in generators.iter().enumerate() {
                    row[j] = rat(g[i]);
                }
                row[s + i] = rat(-1);
                row
            })
            .collect();
        let mut ges: Vec<Vec<Rational>> = (0..s)
            .map(|j| {
                let mut row = vec![Rational::zero(); width];
                row[j] = rat(1);
                row
            })
            .collect();

        for var in 0..s {
            if let Some(p) = eqs.iter().position(|r| !r[var].is_zero()) {
                let pivot = eqs.remove(p);
                let eliminate = |row: &mut Vec<Rational>| {
                    if row[var].is_zero() {
                        return;
                    }
                    let f = &row[var] / &pivot[var];
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        *x -= &f * y;
                    }
                };
                eqs.iter_mut().for_each(eliminate);
                ges.iter_mut().for_each(eliminate);
            } else {
                let (mut pos, mut neg, mut rest) = (Vec::new(), Vec::new(), Vec::new());
                for row in ges.drain(..) {
                    if row[var].is_positive() {
                        pos.push(row);
                    } else if row[var].is_negative() {
                        neg.push(row);
                    } else {
                        rest.push(row);
                    }
                }
                for p in &pos {
                    for n in &neg {
                        let a = -n[var].clone();
                        let b = p[var].clone();
                        let combined: Vec<Rational> = p.iter().zip(n).map(|(x, y)| x * &a + y * &b).collect();
                        rest.push(combined);
                    }
                }
                ges = dedup_rows(rest);
            }
            eqs = dedup_rows(eqs);
        }

        let project = |rows: Vec<Vec<Rational>>| -> Vec<Vec<BigInt>> {
            let set: BTreeSet<Vec<BigInt>> = rows
                .into_iter()
                .map(|r| linalg::primitive_integer_vector(&r[s..]))
                .filter(|r| r.iter().any(|x| !x.is_zero()))
                .collect();
            set.into_iter().collect()
        };
        let equations = project(eqs);
        let inequalities = project(ges);
        Cone { dim, generators, equations, inequalities }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Vec<i64>] {
        &self.generators
    }

    pub fn inequalities(&self) -> &[Vec<BigInt>] {
        &self.inequalities
    }

    pub fn equations(&self) -> &[Vec<BigInt>] {
        &self.equations
    }

    pub fn contains(&self, x: &[i64]) -> bool {
        let xb: Vec<BigInt> = x.iter().map(|&v| BigInt::from(v)).collect();
        let eval = |row: &Vec<BigInt>| -> BigInt { row.iter().zip(&xb).map(|(a, b)| a * b).sum() };
        self.equations.iter().all(|e| eval(e).is_zero()) && self.inequalities.iter().all(|a| !eval(a).is_negative())
    }

    /// Generators that are not in the cone spanned by the remaining ones,
    /// after reducing each to its primitive vector and dropping zeros and
    /// duplicates.
    pub fn extremal_generators(&self) -> Vec<Vec<i64>> {
        let mut gens: Vec<Vec<i64>> = self
            .generators
            .iter()
            .filter(|g| g.iter().any(|&x| x != 0))
            .map(|g| linalg::primitive_part(g))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let mut i = 0;
        while i < gens.len() {
            let others: Vec<Vec<i64>> =
                gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            if Cone::from_generators(self.dim, others).contains(&gens[i]) {
                gens.remove(i);
            } else {
                i += 1;
            }
        }
        gens
    }
}

fn dedup_rows(rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        let key = linalg::primitive_integer_vector(&r);
        if key.iter().all(|x| x.is_zero()) {
            continue;
        }
        if seen.insert(key) {
            out.push(r);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadrant() {
        let c = Cone::from_generators(2, vec![vec![1, 0], vec![0, 1]]);
        assert!(c.contains(&[3, 4]));
        assert!(c.contains(&[0, 0]));
        assert!(!c.contains(&[-1, 4]));
        assert_eq!(c.inequalities().len(), 2);
    }

    #[test]
    fn ray_in_the_plane_has_an_equation() {
        let c = Cone::from_generators(2, vec![vec![1, 1]]);
        assert!(c.contains(&[2, 2]));
        assert!(!c.contains(&[2, 3]));
        assert!(!c.contains(&[-1, -1]));
    }

    #[test]
    fn one_dimensional() {
        let c = Cone::from_generators(1, vec![vec![1]]);
        assert!(c.contains(&[5]));
        assert!(!c.contains(&[-1]));
    }

    #[test]
    fn redundant_generator_is_not_extremal() {
        let c = Cone::from_generators(2, vec![vec![1, 0], vec![1, 2], vec![0, 1], vec![2, 0]]);
        assert_eq!(c.extremal_generators(), vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn membership_matches_brute_force_in_the_plane() {
        // cone spanned by (2,-1) and (-1,3): x in cone iff 3x+y >= 0 and x+2y >= 0
        let c = Cone::from_generators(2, vec![vec![2, -1], vec![-1, 3]]);
        for x in -6..=6 {
            for y in -6..=6 {
                assert_eq!(c.contains(&[x, y]), 3 * x + y >= 0 && x + 2 * y >= 0, "({x},{y})");
            }
        }
    }
}
