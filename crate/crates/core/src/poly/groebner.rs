//! Buchberger's algorithm with the normal selection strategy, the coprime
//! criterion and the chain criterion; output is the reduced basis.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use super::monomial::{Monomial, MonomialOrder};
use super::polynomial::Polynomial;
use super::PolyError;
use crate::linalg::Rational;

/// Ideal given by generators, tagged with the order used for its bases.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ideal {
    pub nvars: usize,
    pub generators: Vec<Polynomial>,
    pub order: MonomialOrder,
}

impl Ideal {
    pub fn new(nvars: usize, generators: Vec<Polynomial>, order: MonomialOrder) -> Ideal {
        assert!(generators.iter().all(|g| g.nvars() == nvars));
        Ideal { nvars, generators, order }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.generators.iter().all(Polynomial::is_homogeneous)
    }
}

/// Reduced Gröbner basis: monic, no leading monomial divides another,
/// sorted by ascending leading monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroebnerBasis {
    nvars: usize,
    order: MonomialOrder,
    polys: Vec<Polynomial>,
    leading: Vec<Monomial>,
}

impl GroebnerBasis {
    /// Wraps polynomials that are already a reduced basis (e.g. read back
    /// from a cache); recomputes leading monomials.
    pub fn from_reduced(nvars: usize, order: MonomialOrder, polys: Vec<Polynomial>) -> GroebnerBasis {
        let leading = polys.iter().map(|p| p.leading_monomial(order).expect("nonzero basis element").clone()).collect();
        GroebnerBasis { nvars, order, polys, leading }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> MonomialOrder {
        self.order
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn is_unit(&self) -> bool {
        self.leading.iter().any(Monomial::is_one)
    }

    pub fn normal_form(&self, p: &Polynomial) -> Polynomial {
        reduce(p, &self.polys, &self.leading, self.order)
    }

    pub fn contains(&self, p: &Polynomial) -> bool {
        self.normal_form(p).is_zero()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.polys.iter().all(Polynomial::is_homogeneous)
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        !self.leading.iter().any(|l| l.divides(m))
    }

    /// Monomials of the given degree outside the leading-term ideal.
    pub fn standard_monomials(&self, degree: u32) -> Vec<Monomial> {
        let mut out: Vec<Monomial> =
            Monomial::all_of_degree(self.nvars, degree).into_iter().filter(|m| self.is_standard(m)).collect();
        out.sort_by(|a, b| self.order.cmp(b, a));
        out
    }

    /// Dimensions of the graded pieces of the quotient in degrees `0..=up_to`.
    pub fn quotient_dims(&self, up_to: u32) -> Result<Vec<usize>, PolyError> {
        if !self.is_homogeneous() {
            return Err(PolyError::NonHomogeneousIdeal);
        }
        Ok((0..=up_to).map(|d| self.standard_monomials(d).len()).collect())
    }
}

fn reduce(p: &Polynomial, basis: &[Polynomial], leading: &[Monomial], order: MonomialOrder) -> Polynomial {
    // keyed by the order so the leading term is the last entry
    let mut work: BTreeMap<Vec<i64>, (Monomial, Rational)> =
        p.terms().map(|(m, c)| (order.sort_key(m), (m.clone(), c.clone()))).collect();
    let mut rem = Polynomial::zero(p.nvars());
    while let Some((_, (m, c))) = work.pop_last() {
        let Some(i) = leading.iter().position(|l| l.divides(&m)) else {
            rem.add_term(m, c);
            continue;
        };
        let g = &basis[i];
        let shift = m.div(&leading[i]).unwrap();
        let factor: Rational = -(c / g.coefficient(&leading[i]));
        for (gm, gc) in g.terms() {
            if *gm == leading[i] {
                continue;
            }
            let t = gm.mul(&shift);
            let v = gc * &factor;
            match work.entry(order.sort_key(&t)) {
                Entry::Vacant(e) => {
                    e.insert((t, v));
                }
                Entry::Occupied(mut e) => {
                    e.get_mut().1 += v;
                    if e.get().1.is_zero() {
                        e.remove();
                    }
                }
            }
        }
    }
    rem
}

fn s_polynomial(f: &Polynomial, g: &Polynomial, order: MonomialOrder) -> Polynomial {
    let (fm, fc) = f.leading_term(order).unwrap();
    let (gm, gc) = g.leading_term(order).unwrap();
    let l = fm.lcm(gm);
    let mut s = Polynomial::zero(f.nvars());
    s.add_scaled_product(f, &l.div(fm).unwrap(), &fc.recip());
    s.add_scaled_product(g, &l.div(gm).unwrap(), &-gc.recip());
    s
}

/// Reduced Gröbner basis of `ideal`.
pub fn groebner(ideal: &Ideal) -> GroebnerBasis {
    let order = ideal.order;
    let mut basis: Vec<Polynomial> =
        ideal.generators.iter().filter(|g| !g.is_zero()).map(|g| g.monic(order)).collect();
    // Generators sorted by leading monomial make the run deterministic.
    basis.sort_by(|a, b| order.cmp(a.leading_monomial(order).unwrap(), b.leading_monomial(order).unwrap()));
    basis.dedup();
    let mut leading: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial(order).unwrap().clone()).collect();

    if leading.iter().any(Monomial::is_one) {
        let one = Polynomial::one(ideal.nvars);
        return GroebnerBasis::from_reduced(ideal.nvars, order, vec![one]);
    }

    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }

    while let Some(&(i, j)) = pending
        .iter()
        .min_by(|a, b| order.cmp(&leading[a.0].lcm(&leading[a.1]), &leading[b.0].lcm(&leading[b.1])).then(a.cmp(b)))
    {
        pending.remove(&(i, j));
        if leading[i].is_coprime(&leading[j]) {
            continue;
        }
        let l = leading[i].lcm(&leading[j]);
        let key = |a: usize, b: usize| (a.min(b), a.max(b));
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && leading[k].divides(&l)
                && !pending.contains(&key(i, k))
                && !pending.contains(&key(j, k))
        });
        if chain {
            continue;
        }
        let s = s_polynomial(&basis[i], &basis[j], order);
        let r = reduce(&s, &basis, &leading, order);
        if r.is_zero() {
            continue;
        }
        let r = r.monic(order);
        let lm = r.leading_monomial(order).unwrap().clone();
        if lm.is_one() {
            let one = Polynomial::one(ideal.nvars);
            return GroebnerBasis::from_reduced(ideal.nvars, order, vec![one]);
        }
        let idx = basis.len();
        basis.push(r);
        leading.push(lm);
        for k in 0..idx {
            pending.insert((k, idx));
        }
    }

    reduce_basis(ideal.nvars, order, basis)
}

fn reduce_basis(nvars: usize, order: MonomialOrder, basis: Vec<Polynomial>) -> GroebnerBasis {
    let lms: Vec<Monomial> = basis.iter().map(|g| g.leading_monomial(order).unwrap().clone()).collect();
    let keep: Vec<usize> = (0..basis.len())
        .filter(|&i| !(0..basis.len()).any(|j| j != i && lms[j].divides(&lms[i]) && (lms[j] != lms[i] || j < i)))
        .collect();
    let minimal: Vec<Polynomial> = keep.iter().map(|&i| basis[i].clone()).collect();
    let minimal_lms: Vec<Monomial> = keep.iter().map(|&i| lms[i].clone()).collect();

    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<Polynomial> =
            minimal.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
        let other_lms: Vec<Monomial> =
            minimal_lms.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, m)| m.clone()).collect();
        let r = reduce(&minimal[i], &others, &other_lms, order).monic(order);
        debug_assert!(!r.is_zero() && !Zero::is_zero(&r.coefficient(&minimal_lms[i])));
        reduced.push(r);
    }
    reduced.sort_by(|a, b| order.cmp(a.leading_monomial(order).unwrap(), b.leading_monomial(order).unwrap()));
    GroebnerBasis::from_reduced(nvars, order, reduced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, i)
    }

    #[test]
    fn principal_monomial_ideal() {
        let gb = groebner(&Ideal::new(1, vec![x(1, 0).pow(3)], MonomialOrder::GrevLex));
        assert_eq!(gb.polys(), &[x(1, 0).pow(3)]);
        assert_eq!(gb.quotient_dims(4).unwrap(), vec![1, 1, 1, 0, 0]);
        assert!(gb.contains(&x(1, 0).pow(4)));
    }

    #[test]
    fn hand_buchberger_run() {
        // (a^2 - b^2, b^3): S(a^2-b^2, b^3) reduces to 0 (coprime leading terms),
        // so the reduced basis is {b^3, a^2 - b^2} ordered by leading monomial.
        let a = x(2, 0);
        let b = x(2, 1);
        let f = &a.pow(2) - &b.pow(2);
        let g = b.pow(3);
        let gb = groebner(&Ideal::new(2, vec![f.clone(), g.clone()], MonomialOrder::GrevLex));
        assert_eq!(gb.polys(), &[f.clone(), g.clone()]);
        assert_eq!(gb.quotient_dims(4).unwrap(), vec![1, 2, 2, 1, 0]);
        // a^2 b = b^3 + b(a^2 - b^2)
        assert!(gb.contains(&(&a.pow(2) * &b)));
        assert!(!gb.contains(&(&a * &b.pow(2))));
    }

    #[test]
    fn non_trivial_completion() {
        // (x^2 - y, x y - 1) in grevlex: S-pair gives y^2 - x, then all
        // remaining pairs reduce to zero.
        let xx = x(2, 0);
        let yy = x(2, 1);
        let one = Polynomial::one(2);
        let gb = groebner(&Ideal::new(2, vec![&xx.pow(2) - &yy, &(&xx * &yy) - &one], MonomialOrder::GrevLex));
        assert_eq!(gb.polys(), &[&yy.pow(2) - &xx, &(&xx * &yy) - &one, &xx.pow(2) - &yy]);
    }

    #[test]
    fn unit_ideal() {
        let gb = groebner(&Ideal::new(2, vec![x(2, 0), &x(2, 0) + &Polynomial::one(2)], MonomialOrder::GrevLex));
        assert!(gb.is_unit());
        assert_eq!(gb.quotient_dims(2).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn zero_ideal_dims() {
        let gb = groebner(&Ideal::new(1, vec![], MonomialOrder::GrevLex));
        assert_eq!(gb.quotient_dims(5).unwrap(), vec![1; 6]);
        let gb = groebner(&Ideal::new(2, vec![Polynomial::zero(2)], MonomialOrder::GrevLex));
        assert_eq!(gb.quotient_dims(2).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn normal_forms() {
        let a = x(2, 0);
        let b = x(2, 1);
        let gb = groebner(&Ideal::new(2, vec![a.pow(2), b.pow(2)], MonomialOrder::GrevLex));
        assert_eq!(gb.polys(), &[b.pow(2), a.pow(2)]);
        assert!(gb.normal_form(&(&a.pow(2) * &b)).is_zero());
        assert_eq!(gb.normal_form(&(&a * &b)), &a * &b);
        assert_eq!(gb.quotient_dims(3).unwrap(), vec![1, 2, 1, 0]);
    }

    #[test]
    fn nonhomogeneous_dims_rejected() {
        let gb = groebner(&Ideal::new(1, vec![&x(1, 0).pow(2) - &Polynomial::constant(1, rat(2))], MonomialOrder::GrevLex));
        assert_eq!(gb.quotient_dims(2), Err(PolyError::NonHomogeneousIdeal));
    }
}
