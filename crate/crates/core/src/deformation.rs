//! Toric deformations of the tangent bundle: validation, linear coefficient
//! matrices, the deformed Stanley–Reisner ideal and the polymology ring.

use std::collections::BTreeMap;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::fan::{subsets, Fan};
use crate::lattice::ClassLattice;
use crate::linalg::{self, Rational};
use crate::poly::{self, groebner, GroebnerBasis, Ideal, Monomial, MonomialOrder, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeformationError {
    #[error("ray index {ray} is out of range")]
    UnknownRayIndex { ray: usize },
    #[error("character for ray {ray} has {found} entries, expected {expected}")]
    CharacterDimension { ray: usize, found: usize, expected: usize },
    #[error("character {m:?} lies outside the polytope of D_{}", ray + 1)]
    CharacterOutsidePolytope { ray: usize, m: Vec<i64> },
    #[error("more than one entry for ray {ray} and character {m:?}")]
    DuplicateEntry { ray: usize, m: Vec<i64> },
    #[error("coefficient for ray {ray} and character {m:?} is not a linear form in the divisor classes")]
    CoefficientNotInW { ray: usize, m: Vec<i64> },
    #[error("degenerate deformation: {0}")]
    DegenerateDeformation(String),
}

/// One coefficient `a_{ρm} ∈ W` of the deformed Euler map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Entry {
    pub ray: usize,
    pub m: Vec<i64>,
    pub coeff: Polynomial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Deformation {
    entries: Vec<Entry>,
    pic_rank: usize,
    is_tangent: bool,
}

impl Deformation {
    /// Validates raw entries; entries with zero coefficient are dropped.
    pub fn new(fan: &Fan, cl: &ClassLattice, raw: Vec<Entry>) -> Result<Deformation, DeformationError> {
        let mut seen: BTreeMap<(usize, Vec<i64>), ()> = BTreeMap::new();
        let mut entries = Vec::new();
        for e in raw {
            if e.ray >= fan.num_rays() {
                return Err(DeformationError::UnknownRayIndex { ray: e.ray });
            }
            if e.m.len() != fan.rank() {
                return Err(DeformationError::CharacterDimension { ray: e.ray, found: e.m.len(), expected: fan.rank() });
            }
            if !is_valid_character(fan, e.ray, &e.m) {
                return Err(DeformationError::CharacterOutsidePolytope { ray: e.ray, m: e.m });
            }
            if seen.insert((e.ray, e.m.clone()), ()).is_some() {
                return Err(DeformationError::DuplicateEntry { ray: e.ray, m: e.m });
            }
            if e.coeff.nvars() != cl.pic_rank() || !(e.coeff.is_zero() || e.coeff.degrees() == [1]) {
                return Err(DeformationError::CoefficientNotInW { ray: e.ray, m: e.m });
            }
            if !e.coeff.is_zero() {
                entries.push(e);
            }
        }
        entries.sort_by(|a, b| (a.ray, &a.m).cmp(&(b.ray, &b.m)));
        let is_tangent = entries.len() == fan.num_rays()
            && entries.iter().all(|e| e.m.iter().all(|&x| x == 0) && e.coeff == cl.divisor_polynomial(e.ray));
        Ok(Deformation { entries, pic_rank: cl.pic_rank(), is_tangent })
    }

    /// The undeformed tangent bundle: `E_ρ = x_ρ [D_ρ]`.
    pub fn tangent(fan: &Fan, cl: &ClassLattice) -> Deformation {
        let entries = (0..fan.num_rays())
            .map(|ray| Entry { ray, m: vec![0; fan.rank()], coeff: cl.divisor_polynomial(ray) })
            .collect();
        Deformation::new(fan, cl, entries).expect("tangent bundle entries are valid")
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn is_tangent(&self) -> bool {
        self.is_tangent
    }

    pub fn pic_rank(&self) -> usize {
        self.pic_rank
    }
}

/// `⟨m, v_ρ'⟩ ≥ -δ_{ρρ'}` for every ray `ρ'`.
pub fn is_valid_character(fan: &Fan, ray: usize, m: &[i64]) -> bool {
    (0..fan.num_rays()).all(|r| linalg::dot(m, fan.ray(r)) >= -i64::from(r == ray))
}

/// How a character enters the linear part of `E_ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TermKind {
    /// Contributes to slot `(ρ, ρ')` of the class matrix.
    Linear(usize),
    Nonlinear,
}

pub fn classify(fan: &Fan, ray: usize, m: &[i64]) -> TermKind {
    if m.iter().all(|&x| x == 0) {
        return TermKind::Linear(ray);
    }
    let pairings: Vec<i64> = (0..fan.num_rays()).map(|r| linalg::dot(m, fan.ray(r))).collect();
    if pairings[ray] != -1 {
        return TermKind::Nonlinear;
    }
    let ones: Vec<usize> = (0..pairings.len()).filter(|&r| pairings[r] == 1).collect();
    let zeros = pairings.iter().filter(|&&p| p == 0).count();
    if ones.len() == 1 && zeros == pairings.len() - 2 {
        TermKind::Linear(ones[0])
    } else {
        TermKind::Nonlinear
    }
}

/// Lattice points of the polytope `Δ_{D_ρ}`, sorted.
pub fn characters(fan: &Fan, ray: usize) -> Vec<Vec<i64>> {
    // Vertices are 0 and minus the dual-basis vector of ρ in each maximal
    // cone containing ρ, so their entries bound the polytope.
    let mut bound = 0;
    for (k, cone) in fan.max_cones().iter().enumerate() {
        if let Some(j) = cone.iter().position(|&r| r == ray) {
            bound = fan.dual_basis(k)[j].iter().fold(bound, |b, &x| b.max(x.abs()));
        }
    }
    let n = fan.rank();
    let mut out = Vec::new();
    let mut cur = vec![-bound; n];
    loop {
        if is_valid_character(fan, ray, &cur) {
            out.push(cur.clone());
        }
        let mut i = 0;
        while i < n && cur[i] == bound {
            cur[i] = -bound;
            i += 1;
        }
        if i == n {
            break;
        }
        cur[i] += 1;
    }
    out.sort();
    out
}

/// The matrices `A_c` and their determinants `Q_c`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearData {
    pic_rank: usize,
    /// Rows and columns follow the sorted members of each class.
    matrices: Vec<Vec<Vec<Polynomial>>>,
    q: Vec<Polynomial>,
}

impl LinearData {
    pub fn new(fan: &Fan, cl: &ClassLattice, e: &Deformation) -> LinearData {
        let p = cl.pic_rank();
        let mut matrices: Vec<Vec<Vec<Polynomial>>> = cl
            .equiv_classes()
            .iter()
            .map(|c| vec![vec![Polynomial::zero(p); c.len()]; c.len()])
            .collect();
        for entry in e.entries() {
            if let TermKind::Linear(target) = classify(fan, entry.ray, &entry.m) {
                let c = cl.class_of(entry.ray);
                debug_assert_eq!(c, cl.class_of(target));
                let members = &cl.equiv_classes()[c].members;
                let i = members.iter().position(|&r| r == entry.ray).unwrap();
                let j = members.iter().position(|&r| r == target).unwrap();
                matrices[c][i][j] = entry.coeff.clone();
            }
        }
        let q = matrices.iter().map(|a| poly::det(p, a).expect("class matrices are square")).collect();
        LinearData { pic_rank: p, matrices, q }
    }

    pub fn pic_rank(&self) -> usize {
        self.pic_rank
    }

    pub fn matrix(&self, class: usize) -> &[Vec<Polynomial>] {
        &self.matrices[class]
    }

    /// `Q_c = det A_c`.
    pub fn q(&self, class: usize) -> &Polynomial {
        &self.q[class]
    }

    pub fn q_all(&self) -> &[Polynomial] {
        &self.q
    }

    /// `∏_c Q_c^{exponents[c]}`.
    pub fn q_product(&self, exponents: &[u32]) -> Polynomial {
        let mut out = Polynomial::one(self.pic_rank);
        for (c, &e) in exponents.iter().enumerate() {
            if e > 0 {
                out = &out * &self.q[c].pow(e);
            }
        }
        out
    }

    /// `Q_K = ∏_{c∈[K]} Q_c`.
    pub fn q_collection(&self, classes: &[usize]) -> Polynomial {
        let mut e = vec![0u32; self.q.len()];
        for &c in classes {
            e[c] = 1;
        }
        self.q_product(&e)
    }
}

/// Classes met by a primitive collection.
pub fn collection_classes(cl: &ClassLattice, rays: &[usize]) -> Vec<usize> {
    let mut c: Vec<usize> = rays.iter().map(|&r| cl.class_of(r)).collect();
    c.sort_unstable();
    c.dedup();
    c
}

/// `SR(X, E)`: one generator `Q_K` per primitive collection.
pub fn sr_ideal(fan: &Fan, cl: &ClassLattice, lin: &LinearData) -> Ideal {
    let gens = fan
        .primitive_collections()
        .iter()
        .map(|k| lin.q_collection(&collection_classes(cl, &k.rays)))
        .collect();
    Ideal::new(cl.pic_rank(), gens, MonomialOrder::GrevLex)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polymology {
    pub basis: GroebnerBasis,
    /// Graded dimensions in degrees `0..=dim X`.
    pub dims: Vec<usize>,
    /// The standard monomial spanning the top degree.
    pub generator: Monomial,
}

pub fn polymology(fan: &Fan, cl: &ClassLattice, lin: &LinearData) -> Result<Polymology, DeformationError> {
    let basis = groebner(&sr_ideal(fan, cl, lin));
    polymology_from_basis(fan, basis)
}

pub fn polymology_from_basis(fan: &Fan, basis: GroebnerBasis) -> Result<Polymology, DeformationError> {
    let n = fan.rank();
    let all = basis
        .quotient_dims(n as u32 + 1)
        .map_err(|e| DeformationError::DegenerateDeformation(e.to_string()))?;
    let h = fan.h_vector();
    if all[n + 1] != 0 {
        return Err(DeformationError::DegenerateDeformation(format!(
            "degree {} has dimension {}, expected 0",
            n + 1,
            all[n + 1]
        )));
    }
    if let Some(k) = (0..=n).find(|&k| all[k] as i64 > h[k]) {
        return Err(DeformationError::DegenerateDeformation(format!(
            "degree {k} has dimension {}, exceeding the h-vector entry {}",
            all[k], h[k]
        )));
    }
    if all[n] != 1 {
        return Err(DeformationError::DegenerateDeformation(format!("top degree {n} has dimension {}", all[n])));
    }
    let generator = basis.standard_monomials(n as u32).remove(0);
    let dims = all[..=n].to_vec();
    Ok(Polymology { basis, dims, generator })
}

/// Outcome of the randomized local-freeness test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalFreeness {
    /// No rank drop found at `points` sample points or along `lines` random
    /// lines. Probabilistic.
    Pass { points: usize, lines: usize },
    Fail(Witness),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    /// A point off the exceptional set where the map drops rank.
    Point(Vec<Rational>),
    /// The map drops rank at the roots of `gcd` (in `t`) on the line `a + t b`.
    LineRoots { a: Vec<Rational>, b: Vec<Rational>, gcd: Polynomial },
}

/// Rows `E_ρ(x)` as vectors in the Picard basis.
pub fn euler_matrix(fan: &Fan, e: &Deformation, x: &[Rational]) -> Vec<Vec<Rational>> {
    let p = e.pic_rank();
    let mut rows = vec![vec![Rational::zero(); p]; fan.num_rays()];
    for entry in e.entries() {
        let value = monomial_value(fan, entry, x);
        let coeffs = entry.coeff.linear_coefficients().expect("linear coefficient");
        for (slot, c) in rows[entry.ray].iter_mut().zip(coeffs) {
            *slot += &value * c;
        }
    }
    rows
}

/// Value of `x_ρ ∏ x^{⟨m, v⟩}` (a regular monomial for valid characters).
fn monomial_value(fan: &Fan, entry: &Entry, x: &[Rational]) -> Rational {
    let mut value = Rational::from_integer(1.into());
    for (r, xr) in x.iter().enumerate() {
        let k = linalg::dot(&entry.m, fan.ray(r)) + i64::from(r == entry.ray);
        for _ in 0..k {
            value *= xr;
        }
    }
    value
}

fn euler_matrix_on_line(fan: &Fan, e: &Deformation, a: &[Rational], b: &[Rational]) -> Vec<Vec<Polynomial>> {
    let p = e.pic_rank();
    let line: Vec<Polynomial> = a
        .iter()
        .zip(b)
        .map(|(ai, bi)| &Polynomial::constant(1, ai.clone()) + &Polynomial::var(1, 0).scale(bi))
        .collect();
    let mut rows = vec![vec![Polynomial::zero(1); p]; fan.num_rays()];
    for entry in e.entries() {
        let mut value = Polynomial::one(1);
        for (r, xr) in line.iter().enumerate() {
            let k = linalg::dot(&entry.m, fan.ray(r)) + i64::from(r == entry.ray);
            value = &value * &xr.pow(k as u32);
        }
        let coeffs = entry.coeff.linear_coefficients().expect("linear coefficient");
        for (slot, c) in rows[entry.ray].iter_mut().zip(coeffs) {
            *slot = &*slot + &value.scale(&c);
        }
    }
    rows
}

fn in_exceptional_set(fan: &Fan, x: &[Rational]) -> bool {
    fan.primitive_collections().iter().any(|k| k.rays.iter().all(|&r| x[r].is_zero()))
}

fn random_nonzero(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let n: i64 = rng.gen_range(-30..=30);
        let d: i64 = rng.gen_range(1..=7);
        if n != 0 {
            return linalg::rat_frac(n, d);
        }
    }
}

/// Randomized surjectivity test for the Euler map off the exceptional set.
///
/// Samples one point in every torus orbit not contained in the exceptional
/// set plus `trials` generic points, and restricts the map to `trials`
/// random lines, where a common factor of the maximal minors reveals a
/// rank-dropping hypersurface. Deterministic for a fixed `seed`.
pub fn local_freeness_check(fan: &Fan, e: &Deformation, trials: usize, seed: u64) -> LocalFreeness {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = e.pic_rank();
    let r = fan.num_rays();
    let mut points: Vec<Vec<Rational>> = Vec::new();
    for cone in fan.cones() {
        let x: Vec<Rational> =
            (0..r).map(|i| if cone.contains(&i) { Rational::zero() } else { random_nonzero(&mut rng) }).collect();
        points.push(x);
    }
    for _ in 0..trials {
        points.push((0..r).map(|_| random_nonzero(&mut rng)).collect());
    }
    for x in &points {
        debug_assert!(!in_exceptional_set(fan, x));
        if linalg::rank(&euler_matrix(fan, e, x)) < p {
            return LocalFreeness::Fail(Witness::Point(x.clone()));
        }
    }

    let row_sets = subsets(r, p);
    for _ in 0..trials {
        let a: Vec<Rational> = (0..r).map(|_| random_nonzero(&mut rng)).collect();
        let b: Vec<Rational> = (0..r).map(|_| random_nonzero(&mut rng)).collect();
        let m = euler_matrix_on_line(fan, e, &a, &b);
        let minors: Vec<Polynomial> = row_sets
            .iter()
            .map(|rows| {
                let sub: Vec<Vec<Polynomial>> = rows.iter().map(|&i| m[i].clone()).collect();
                poly::det(1, &sub).expect("square minor")
            })
            .collect();
        let gcd = groebner(&Ideal::new(1, minors, MonomialOrder::GrevLex));
        if gcd.is_unit() {
            continue;
        }
        let Some(g) = gcd.polys().first().cloned() else {
            // every minor vanishes identically along the line
            return LocalFreeness::Fail(Witness::Point(a));
        };
        if g.degree() == Some(1) {
            // g = t - t0
            let t0 = -g.constant_term();
            let x: Vec<Rational> = a.iter().zip(&b).map(|(ai, bi)| ai + &t0 * bi).collect();
            if !in_exceptional_set(fan, &x) {
                return LocalFreeness::Fail(Witness::Point(x));
            }
        }
        return LocalFreeness::Fail(Witness::LineRoots { a, b, gcd: g });
    }
    LocalFreeness::Pass { points: points.len(), lines: trials }
}
