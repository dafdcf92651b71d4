//! Fixtures and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use qsheaf_core::deformation::{characters, classify, Deformation, Entry, LinearData, TermKind};
use qsheaf_core::fan::{standard, Fan};
use qsheaf_core::lattice::ClassLattice;
use qsheaf_core::poly::{Monomial, Polynomial};
use rand::seq::SliceRandom;
use rand::Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(n.into())
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

pub fn example_fans() -> Vec<(&'static str, Fan)> {
    vec![
        ("P1", standard::projective_line()),
        ("P2", standard::projective_plane()),
        ("P1xP1", standard::p1_x_p1()),
        ("F1", standard::hirzebruch(1)),
        ("F2", standard::hirzebruch(2)),
        ("F3", standard::hirzebruch(3)),
    ]
}

pub struct Setup {
    pub fan: Fan,
    pub cl: ClassLattice,
    pub e: Deformation,
    pub lin: LinearData,
}

pub fn tangent(fan: Fan) -> Setup {
    let cl = ClassLattice::new(&fan).unwrap();
    let e = Deformation::tangent(&fan, &cl);
    let lin = LinearData::new(&fan, &cl, &e);
    Setup { fan, cl, e, lin }
}

pub fn with_entries(fan: &Fan, cl: &ClassLattice, entries: Vec<Entry>) -> Setup {
    let e = Deformation::new(fan, cl, entries).unwrap();
    let lin = LinearData::new(fan, cl, &e);
    Setup { fan: fan.clone(), cl: cl.clone(), e, lin }
}

/// Star subdivision of the 2-dimensional cone `cones[i]` of a smooth
/// complete surface fan.
pub fn blow_up(fan: &Fan, i: usize) -> Fan {
    assert_eq!(fan.rank(), 2);
    let mut rays = fan.rays().to_vec();
    let mut cones = fan.max_cones().to_vec();
    let (a, b) = (cones[i][0], cones[i][1]);
    let v: Vec<i64> = rays[a].iter().zip(&rays[b]).map(|(x, y)| x + y).collect();
    rays.push(v);
    let new = rays.len() - 1;
    cones[i] = vec![a, new];
    cones.push(vec![new, b]);
    Fan::new(2, rays, cones).unwrap()
}

/// A smooth complete surface obtained from one of the example surfaces by
/// `blowups` random star subdivisions.
pub fn random_surface(rng: &mut impl Rng, blowups: usize) -> Fan {
    let mut fan = match rng.gen_range(0..5) {
        0 => standard::projective_plane(),
        1 => standard::p1_x_p1(),
        k => standard::hirzebruch(k as i64 - 1),
    };
    for _ in 0..blowups {
        let i = rng.gen_range(0..fan.max_cones().len());
        fan = blow_up(&fan, i);
    }
    fan
}

/// Faces of all maximal cones, deduplicated.
pub fn faces(fan: &Fan) -> BTreeSet<Vec<usize>> {
    let mut out = BTreeSet::new();
    for c in fan.max_cones() {
        for mask in 0u32..(1 << c.len()) {
            let mut f: Vec<usize> = (0..c.len()).filter(|j| mask & (1 << j) != 0).map(|j| c[j]).collect();
            f.sort();
            out.insert(f);
        }
    }
    out
}

/// `Σ h_i t^{n-i} = Σ f_{i-1} (t-1)^{n-i}` from face counts.
pub fn h_vector_oracle(fan: &Fan) -> Vec<i64> {
    let n = fan.rank();
    let mut f = vec![0i64; n + 1]; // f[i] = number of faces with i rays
    for face in faces(fan) {
        f[face.len()] += 1;
    }
    let binom = |a: i64, b: i64| -> i64 {
        if b < 0 || b > a {
            return 0;
        }
        (0..b).fold(1, |acc, j| acc * (a - j) / (j + 1))
    };
    (0..=n as i64)
        .map(|k| {
            // coefficient of t^{n-k}
            (0..=k).map(|i| f[i as usize] * binom(n as i64 - i, k - i) * if (k - i) % 2 == 0 { 1 } else { -1 }).sum()
        })
        .collect()
}

/// Rank of a rational matrix by plain Gaussian elimination.
pub fn rank(mut m: Vec<Vec<Q>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let pivot = m[r][c].clone();
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pivot;
                for j in c..cols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Solves `Σ c_j cols_j = b` for linearly independent columns.
pub fn solve_columns(cols: &[Vec<i64>], b: &[Q]) -> Option<Vec<Q>> {
    let n = b.len();
    let k = cols.len();
    let mut m: Vec<Vec<Q>> = (0..n).map(|i| (0..k).map(|j| q(cols[j][i])).chain([b[i].clone()]).collect()).collect();
    let mut piv = Vec::new();
    let mut r = 0;
    for c in 0..k {
        let p = (r..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..n {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=k {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        piv.push(c);
        r += 1;
    }
    if (r..n).any(|i| !m[i][k].is_zero()) {
        return None;
    }
    Some((0..k).map(|i| m[i][k].clone()).collect())
}

fn monomials(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(nvars: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Monomial>) {
        if cur.len() + 1 == nvars {
            cur.push(left);
            out.push(Monomial::new(cur.clone()));
            cur.pop();
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(nvars, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(nvars, degree, &mut Vec::new(), &mut out);
    out
}

/// Membership of a homogeneous `p` in the ideal of homogeneous `gens`:
/// `p` lies in the span of `{monomial · g}` in its degree.
pub fn in_ideal_oracle(nvars: usize, gens: &[Polynomial], p: &Polynomial) -> bool {
    if p.is_zero() {
        return true;
    }
    let d = p.degree().unwrap();
    let basis = monomials(nvars, d);
    let row = |f: &Polynomial| -> Vec<Q> { basis.iter().map(|m| f.coefficient(m)).collect() };
    let mut span: Vec<Vec<Q>> = Vec::new();
    for g in gens.iter().filter(|g| !g.is_zero()) {
        let gd = g.degree().unwrap();
        if gd > d {
            continue;
        }
        for m in monomials(nvars, d - gd) {
            span.push(row(&g.mul_monomial(&m)));
        }
    }
    let r0 = rank(span.clone());
    span.push(row(p));
    rank(span) == r0
}

pub fn random_rational(rng: &mut impl Rng) -> Q {
    let den = *[1i64, 1, 2, 3, 5, 7].choose(rng).unwrap();
    qf(rng.gen_range(-4..=4), den)
}

/// Nonzero.
pub fn random_homogeneous(rng: &mut impl Rng, nvars: usize, degree: u32, max_terms: usize) -> Polynomial {
    let ms = monomials(nvars, degree);
    loop {
        let mut p = Polynomial::zero(nvars);
        for _ in 0..rng.gen_range(1..=max_terms) {
            let m = ms.choose(rng).unwrap().clone();
            p = &p + &Polynomial::term(m, random_rational(rng));
        }
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn random_polynomial(rng: &mut impl Rng, nvars: usize, max_degree: u32, max_terms: usize) -> Polynomial {
    let mut p = Polynomial::zero(nvars);
    for _ in 0..rng.gen_range(0..=max_terms) {
        let d = rng.gen_range(0..=max_degree);
        p = &p + &random_homogeneous(rng, nvars, d, 1);
    }
    p
}

/// A random element of `W` (linear form in the Picard basis).
pub fn random_w(rng: &mut impl Rng, pic_rank: usize) -> Polynomial {
    random_homogeneous(rng, pic_rank, 1, pic_rank + 1)
}

/// Tangent entries plus random nonlinear entries with random coefficients.
pub fn add_random_nonlinear(rng: &mut impl Rng, fan: &Fan, cl: &ClassLattice, base: &[Entry]) -> Vec<Entry> {
    let mut entries = base.to_vec();
    for ray in 0..fan.num_rays() {
        for m in characters(fan, ray) {
            if classify(fan, ray, &m) == TermKind::Nonlinear && rng.gen_bool(0.6) {
                entries.retain(|e| !(e.ray == ray && e.m == m));
                entries.push(Entry { ray, m, coeff: random_w(rng, cl.pic_rank()) });
            }
        }
    }
    entries
}

pub fn nonlinear_characters(fan: &Fan) -> usize {
    (0..fan.num_rays())
        .map(|r| characters(fan, r).into_iter().filter(|m| classify(fan, r, m) == TermKind::Nonlinear).count())
        .sum()
}

/// Deformed `ℙ¹×ℙ¹` with parameters `(γ₁, γ₂, δ₁, δ₂)`.
pub fn quadric_deformed(g: [Q; 4]) -> Setup {
    let fan = standard::p1_x_p1();
    let cl = ClassLattice::new(&fan).unwrap();
    let psi1 = cl.divisor_polynomial(0);
    let psi2 = cl.divisor_polynomial(2);
    let mut entries = Deformation::tangent(&fan, &cl).entries().to_vec();
    let [g1, g2, d1, d2] = g;
    entries.push(Entry { ray: 0, m: vec![-1, 0], coeff: psi2.scale(&g1) });
    entries.push(Entry { ray: 1, m: vec![1, 0], coeff: psi2.scale(&g2) });
    entries.push(Entry { ray: 2, m: vec![0, -1], coeff: psi1.scale(&d1) });
    entries.push(Entry { ray: 3, m: vec![0, 1], coeff: psi1.scale(&d2) });
    with_entries(&fan, &cl, entries)
}

pub fn is_positive(x: &Q) -> bool {
    x.is_positive()
}

pub fn one() -> Q {
    Q::one()
}
