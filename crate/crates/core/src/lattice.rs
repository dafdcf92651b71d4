//! Picard group, divisor classes, curve classes and the Mori cone.
//!
//! The Picard basis is tied to the first maximal cone `σ` of the fan: the
//! classes `[D_x]` for the rays `x ∉ σ` form a ℤ-basis, and every `[D_ρ]`
//! with `ρ ∈ σ` is eliminated through the characters dual to `σ`. Curve
//! classes are recorded by their full intersection vector `d_ρ = D_ρ·β`;
//! their coordinates are the entries `d_x` on the same rays `x ∉ σ`, which
//! makes the pairing a plain dot product.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::cone::Cone;
use crate::fan::{Fan, PrimitiveCollection};
use crate::linalg;
use crate::poly::Polynomial;
use crate::quantum::h0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("Picard group has torsion (maximal cone {cone} is not a lattice basis)")]
    TorsionDetected { cone: usize },
    #[error("coefficient {value} of ray {ray} in the primitive relation of {collection} is not a positive integer")]
    NonIntegralCoefficient { collection: String, ray: usize, value: String },
    #[error("no curve class positive on every divisor class within combination bound {bound}")]
    NoPositiveClassFound { bound: u32 },
    #[error("vector of length {found} given, expected {expected}")]
    WrongLength { found: usize, expected: usize },
    #[error("intersection vector {0:?} is not a relation among the rays")]
    NotARelation(Vec<i64>),
    #[error("curve class {0} is not effective")]
    NotEffective(String),
    #[error("degree slice is unbounded: the functional is not positive on Mori generator {0}")]
    UnboundedSlice(String),
}

/// A curve class, stored as its intersection numbers with every toric divisor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    d: Vec<i64>,
}

impl CurveClass {
    pub fn d(&self) -> &[i64] {
        &self.d
    }

    pub fn d_at(&self, ray: usize) -> i64 {
        self.d[ray]
    }

    /// `c₁(X)·β = Σ_ρ d_ρ`.
    pub fn c1(&self) -> i64 {
        self.d.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0)
    }

    pub fn zero(num_rays: usize) -> CurveClass {
        CurveClass { d: vec![0; num_rays] }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.d.iter().map(|x| x.to_string()).collect();
        write!(f, "d=({})", parts.join(","))
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;
    fn add(self, rhs: &CurveClass) -> CurveClass {
        CurveClass { d: self.d.iter().zip(&rhs.d).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &CurveClass {
    type Output = CurveClass;
    fn sub(self, rhs: &CurveClass) -> CurveClass {
        CurveClass { d: self.d.iter().zip(&rhs.d).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &CurveClass {
    type Output = CurveClass;
    fn neg(self) -> CurveClass {
        CurveClass { d: self.d.iter().map(|a| -a).collect() }
    }
}

impl Mul<&CurveClass> for i64 {
    type Output = CurveClass;
    fn mul(self, rhs: &CurveClass) -> CurveClass {
        CurveClass { d: rhs.d.iter().map(|a| self * a).collect() }
    }
}

/// Rays with equal divisor class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivClass {
    pub id: usize,
    pub members: Vec<usize>,
}

impl EquivClass {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn representative(&self) -> usize {
        self.members[0]
    }
}

/// The primitive relation of a collection `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimitiveRelation {
    pub collection: PrimitiveCollection,
    pub beta: CurveClass,
    /// Equivalence classes met by `K`, ascending.
    pub classes: Vec<usize>,
    /// Classes met by the cone containing `Σ_{ρ∈K} v_ρ`, with multiplicity `-d_c`.
    pub negative: Vec<(usize, u32)>,
}

#[derive(Debug, Clone)]
pub struct ClassLattice {
    rank: usize,
    rays: Vec<Vec<i64>>,
    pivot_cone: Vec<usize>,
    basis_rays: Vec<usize>,
    divisor_classes: Vec<Vec<i64>>,
    curve_basis: Vec<CurveClass>,
    classes: Vec<EquivClass>,
    class_of: Vec<usize>,
    mori: Vec<CurveClass>,
    mori_cone: Cone,
}

impl ClassLattice {
    pub fn new(fan: &Fan) -> Result<ClassLattice, LatticeError> {
        let r = fan.num_rays();
        let pivot_cone = fan.max_cones()[0].clone();
        let dual = fan.dual_basis(0);
        let basis_block: Vec<Vec<i64>> =
            (0..fan.rank()).map(|i| pivot_cone.iter().map(|&p| fan.ray(p)[i]).collect()).collect();
        if linalg::det_i64(&basis_block).abs() != 1 {
            return Err(LatticeError::TorsionDetected { cone: 0 });
        }
        let basis_rays: Vec<usize> = (0..r).filter(|x| !pivot_cone.contains(x)).collect();
        let pic_rank = basis_rays.len();

        let mut divisor_classes = vec![vec![0; pic_rank]; r];
        for (i, &x) in basis_rays.iter().enumerate() {
            divisor_classes[x][i] = 1;
        }
        for (j, &rho) in pivot_cone.iter().enumerate() {
            for (i, &x) in basis_rays.iter().enumerate() {
                divisor_classes[rho][i] = -linalg::dot(&dual[j], fan.ray(x));
            }
        }

        // β_x: d_x = 1, d_y = 0 for the other basis rays, d_ρ = [D_ρ]_x on σ.
        let curve_basis: Vec<CurveClass> = (0..pic_rank)
            .map(|i| CurveClass { d: (0..r).map(|rho| divisor_classes[rho][i]).collect() })
            .collect();

        let mut classes: Vec<EquivClass> = Vec::new();
        let mut class_of = vec![usize::MAX; r];
        for rho in 0..r {
            match classes.iter_mut().find(|c| divisor_classes[c.members[0]] == divisor_classes[rho]) {
                Some(c) => {
                    c.members.push(rho);
                    class_of[rho] = c.id;
                }
                None => {
                    class_of[rho] = classes.len();
                    classes.push(EquivClass { id: classes.len(), members: vec![rho] });
                }
            }
        }

        let mut lattice = ClassLattice {
            rank: fan.rank(),
            rays: fan.rays().to_vec(),
            pivot_cone,
            basis_rays,
            divisor_classes,
            curve_basis,
            classes,
            class_of,
            mori: Vec::new(),
            mori_cone: Cone::from_generators(pic_rank, Vec::new()),
        };

        let walls: Vec<Vec<i64>> = fan
            .walls()
            .into_iter()
            .map(|(facet, a, b)| lattice.coords(&lattice.wall_relation(fan, &facet, a, b)))
            .collect();
        let spanning = Cone::from_generators(pic_rank, walls);
        let mut mori: Vec<CurveClass> =
            spanning.extremal_generators().into_iter().map(|c| lattice.from_coords_unchecked(&c)).collect();
        mori.sort_by(|a, b| b.d.cmp(&a.d));
        lattice.mori_cone = Cone::from_generators(pic_rank, mori.iter().map(|m| lattice.coords(m)).collect());
        lattice.mori = mori;
        Ok(lattice)
    }

    fn wall_relation(&self, fan: &Fan, facet: &[usize], a: usize, b: usize) -> CurveClass {
        // v_a + v_b = Σ_{ρ∈τ} c_ρ v_ρ; solve in the maximal cone τ ∪ {a}.
        let mut cone: Vec<usize> = facet.to_vec();
        cone.push(a);
        cone.sort_unstable();
        let k = fan.max_cones().iter().position(|c| *c == cone).expect("wall cone is maximal");
        let dual = fan.dual_basis(k);
        let mut d = vec![0; fan.num_rays()];
        d[a] = 1;
        d[b] = 1;
        for (j, &rho) in cone.iter().enumerate() {
            if rho != a {
                d[rho] = -linalg::dot(&dual[j], fan.ray(b));
            }
        }
        debug_assert_eq!(linalg::dot(&dual[cone.iter().position(|&x| x == a).unwrap()], fan.ray(b)), -1);
        CurveClass { d }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn pic_rank(&self) -> usize {
        self.basis_rays.len()
    }

    /// Rays whose divisor classes form the Picard basis `ψ_1, ψ_2, …`.
    pub fn basis_rays(&self) -> &[usize] {
        &self.basis_rays
    }

    pub fn pivot_cone(&self) -> &[usize] {
        &self.pivot_cone
    }

    /// `[D_ρ]` in the Picard basis.
    pub fn divisor_class(&self, ray: usize) -> &[i64] {
        &self.divisor_classes[ray]
    }

    /// `[D_ρ]` as a linear form in `ψ_1..ψ_{pic_rank}`.
    pub fn divisor_polynomial(&self, ray: usize) -> Polynomial {
        Polynomial::linear_i64(&self.divisor_classes[ray])
    }

    pub fn curve_basis(&self) -> &[CurveClass] {
        &self.curve_basis
    }

    pub fn equiv_classes(&self) -> &[EquivClass] {
        &self.classes
    }

    pub fn class_of(&self, ray: usize) -> usize {
        self.class_of[ray]
    }

    /// `d_c^β` for an equivalence class.
    pub fn d_class(&self, beta: &CurveClass, class: usize) -> i64 {
        beta.d[self.classes[class].representative()]
    }

    /// Coordinates of `β` in the curve basis.
    pub fn coords(&self, beta: &CurveClass) -> Vec<i64> {
        self.basis_rays.iter().map(|&x| beta.d[x]).collect()
    }

    fn from_coords_unchecked(&self, coords: &[i64]) -> CurveClass {
        let r = self.num_rays();
        CurveClass {
            d: (0..r).map(|rho| linalg::dot(&self.divisor_classes[rho], coords)).collect(),
        }
    }

    pub fn curve_from_coords(&self, coords: &[i64]) -> Result<CurveClass, LatticeError> {
        if coords.len() != self.pic_rank() {
            return Err(LatticeError::WrongLength { found: coords.len(), expected: self.pic_rank() });
        }
        Ok(self.from_coords_unchecked(coords))
    }

    /// Curve class with the given intersection vector, which must satisfy
    /// `Σ_ρ d_ρ v_ρ = 0`.
    pub fn curve_from_d(&self, d: &[i64]) -> Result<CurveClass, LatticeError> {
        if d.len() != self.num_rays() {
            return Err(LatticeError::WrongLength { found: d.len(), expected: self.num_rays() });
        }
        let is_relation = (0..self.rank).all(|i| d.iter().zip(&self.rays).map(|(a, v)| a * v[i]).sum::<i64>() == 0);
        if !is_relation {
            return Err(LatticeError::NotARelation(d.to_vec()));
        }
        Ok(CurveClass { d: d.to_vec() })
    }

    /// `D·β` for a divisor given in the Picard basis.
    pub fn pair(&self, divisor: &[i64], beta: &CurveClass) -> i64 {
        linalg::dot(divisor, &self.coords(beta))
    }

    pub fn zero_curve(&self) -> CurveClass {
        CurveClass::zero(self.num_rays())
    }

    /// Extremal wall classes, sorted by descending intersection vector.
    pub fn mori_generators(&self) -> &[CurveClass] {
        &self.mori
    }

    pub fn mori_cone(&self) -> &Cone {
        &self.mori_cone
    }

    pub fn is_effective(&self, beta: &CurveClass) -> bool {
        self.mori_cone.contains(&self.coords(beta))
    }

    /// True when the Mori generators form a ℤ-basis of the curve lattice.
    pub fn mori_is_unimodular(&self) -> bool {
        if self.mori.len() != self.pic_rank() {
            return false;
        }
        let m: Vec<Vec<i64>> = self.mori.iter().map(|g| self.coords(g)).collect();
        linalg::det_i64(&m).abs() == 1
    }

    /// Coordinates of `β` on the Mori generators, when they form a basis.
    pub fn mori_coordinates(&self, beta: &CurveClass) -> Option<Vec<i64>> {
        if !self.mori_is_unimodular() {
            return None;
        }
        let n = self.pic_rank();
        // columns are the generators
        let m: Vec<Vec<i64>> = (0..n).map(|i| self.mori.iter().map(|g| self.coords(g)[i]).collect()).collect();
        let inv = linalg::unimodular_inverse(&m)?;
        let c = self.coords(beta);
        Some(inv.iter().map(|row| linalg::dot(row, &c)).collect())
    }

    pub fn primitive_relation(&self, fan: &Fan, k: &PrimitiveCollection) -> Result<PrimitiveRelation, LatticeError> {
        let mut point = vec![0i64; self.rank];
        for &rho in &k.rays {
            for (p, v) in point.iter_mut().zip(fan.ray(rho)) {
                *p += v;
            }
        }
        let loc = fan.locate_integer_point(&point).expect("complete fan covers every point");
        let mut d = vec![0i64; self.num_rays()];
        for &rho in &k.rays {
            d[rho] += 1;
        }
        for (&rho, c) in loc.cone.iter().zip(&loc.coefficients) {
            let value = c.to_integer().to_i64().filter(|_| c.is_integer());
            match value {
                Some(v) if v > 0 => d[rho] -= v,
                _ => {
                    return Err(LatticeError::NonIntegralCoefficient {
                        collection: k.to_string(),
                        ray: rho,
                        value: c.to_string(),
                    })
                }
            }
        }
        let beta = CurveClass { d };
        let mut classes: Vec<usize> = k.rays.iter().map(|&rho| self.class_of[rho]).collect();
        classes.sort_unstable();
        classes.dedup();
        let mut negative: Vec<(usize, u32)> = Vec::new();
        for &rho in &loc.cone {
            let c = self.class_of[rho];
            let mult = (-beta.d[rho]) as u32;
            match negative.iter().find(|(cc, _)| *cc == c) {
                // rays of one class in σ carry equal coefficients
                Some(&(_, m)) => assert_eq!(m, mult, "linearly equivalent rays with different coefficients"),
                None => negative.push((c, mult)),
            }
        }
        negative.sort_unstable();
        Ok(PrimitiveRelation { collection: k.clone(), beta, classes, negative })
    }

    pub fn primitive_relations(&self, fan: &Fan) -> Result<Vec<PrimitiveRelation>, LatticeError> {
        fan.primitive_collections().iter().map(|k| self.primitive_relation(fan, k)).collect()
    }

    /// `β′` dominates `β`: the difference is effective and `h⁰` does not
    /// drop on any equivalence class.
    pub fn dominates(&self, beta_prime: &CurveClass, beta: &CurveClass) -> bool {
        self.is_effective(&(beta_prime - beta))
            && self.classes.iter().all(|c| {
                let rho = c.representative();
                h0(beta_prime.d[rho]) >= h0(beta.d[rho])
            })
    }

    /// Least-weight nonnegative combination of Mori generators (each
    /// coefficient at most `bound`) with `d_c > 0` on every class.
    pub fn positive_class(&self, bound: u32) -> Result<CurveClass, LatticeError> {
        let s = self.mori.len();
        let max_total = bound as usize * s;
        for total in 1..=max_total {
            let mut found = None;
            for_each_composition(s, total, bound as usize, &mut |coeffs| {
                if found.is_some() {
                    return;
                }
                let mut beta = self.zero_curve();
                for (k, g) in coeffs.iter().zip(&self.mori) {
                    beta = &beta + &(*k as i64 * g);
                }
                if self.classes.iter().all(|c| beta.d[c.representative()] > 0) {
                    found = Some(beta);
                }
            });
            if let Some(b) = found {
                return Ok(b);
            }
        }
        Err(LatticeError::NoPositiveClassFound { bound })
    }

    /// `β̂ = Σ β_i + n·β_A` with the least `n ≥ 1` dominating every sector.
    pub fn find_anchor(&self, sectors: &[CurveClass], bound: u32) -> Result<CurveClass, LatticeError> {
        if let Some(bad) = sectors.iter().find(|b| !self.is_effective(b)) {
            return Err(LatticeError::NotEffective(bad.to_string()));
        }
        let positive = self.positive_class(bound)?;
        let mut sum = self.zero_curve();
        for b in sectors {
            sum = &sum + b;
        }
        let mut n = 1i64;
        loop {
            let anchor = &sum + &(n * &positive);
            if sectors.iter().all(|b| self.dominates(&anchor, b)) {
                return Ok(anchor);
            }
            // h⁰ grows without bound along β_A, so this terminates.
            n += 1;
        }
    }

    /// Linear functional `c₁` on curve coordinates.
    pub fn c1_functional(&self) -> Vec<i64> {
        self.curve_basis.iter().map(CurveClass::c1).collect()
    }

    /// Sum of the inward facet normals of the Mori cone; positive on every
    /// nonzero effective class.
    pub fn height_functional(&self) -> Vec<i64> {
        let n = self.pic_rank();
        let mut h = vec![0i64; n];
        for row in self.mori_cone.inequalities() {
            for (hi, a) in h.iter_mut().zip(row) {
                *hi += a.to_i64().expect("small facet normal");
            }
        }
        h
    }

    /// Effective classes `β` with `⟨f, β⟩ ≤ max` for every `(f, max)` in
    /// `bounds`; the first functional must be positive on every Mori
    /// generator so the set is finite. Sorted by the first functional, then
    /// by descending intersection vector.
    pub fn effective_classes(&self, bounds: &[(Vec<i64>, i64)]) -> Result<Vec<CurveClass>, LatticeError> {
        let (f, max) = &bounds[0];
        let coords: Vec<Vec<i64>> = self.mori.iter().map(|g| self.coords(g)).collect();
        for (g, c) in self.mori.iter().zip(&coords) {
            if linalg::dot(f, c) <= 0 {
                return Err(LatticeError::UnboundedSlice(g.to_string()));
            }
        }
        let n = self.pic_rank();
        if *max < 0 {
            return Ok(Vec::new());
        }
        // β = Σ λ_j g_j with λ_j ≤ max / f(g_j)
        let mut limit = vec![0i64; n];
        for c in &coords {
            let fg = linalg::dot(f, c);
            let lam = max / fg;
            for i in 0..n {
                limit[i] += lam * c[i].abs();
            }
        }
        let mut out = Vec::new();
        let mut cur = vec![0i64; n];
        box_points(&limit, 0, &mut cur, &mut |p| {
            if bounds.iter().all(|(g, m)| linalg::dot(g, p) <= *m) && self.mori_cone.contains(p) {
                out.push(self.from_coords_unchecked(p));
            }
        });
        out.sort_by(|a, b| {
            linalg::dot(f, &self.coords(a)).cmp(&linalg::dot(f, &self.coords(b))).then_with(|| b.d.cmp(&a.d))
        });
        Ok(out)
    }

    /// Effective classes with `c₁·β = degree` (requires positive `c₁` on
    /// the Mori cone).
    pub fn effective_with_c1(&self, degree: i64) -> Result<Vec<CurveClass>, LatticeError> {
        let c1 = self.c1_functional();
        let all = self.effective_classes(&[(c1.clone(), degree)])?;
        Ok(all.into_iter().filter(|b| b.c1() == degree).collect())
    }

    /// Does the cone spanned by the primitive-relation classes equal the
    /// Mori cone? (Diagnostic; both are expected to agree.)
    pub fn primitive_relations_span_mori_cone(&self, fan: &Fan) -> Result<bool, LatticeError> {
        let rels = self.primitive_relations(fan)?;
        let gens: Vec<Vec<i64>> = rels.iter().map(|r| self.coords(&r.beta)).collect();
        let cone = Cone::from_generators(self.pic_rank(), gens);
        let mori_in = self.mori.iter().all(|g| cone.contains(&self.coords(g)));
        let rel_in = rels.iter().all(|r| self.is_effective(&r.beta));
        Ok(mori_in && rel_in)
    }
}

fn box_points(limit: &[i64], i: usize, cur: &mut Vec<i64>, f: &mut dyn FnMut(&[i64])) {
    if i == limit.len() {
        f(cur);
        return;
    }
    for v in -limit[i]..=limit[i] {
        cur[i] = v;
        box_points(limit, i + 1, cur, f);
    }
}

/// Calls `f` on every vector of `parts` nonnegative integers (each at most
/// `cap`) summing to `total`, in lexicographically descending order.
fn for_each_composition(parts: usize, total: usize, cap: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(i: usize, left: usize, cap: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if i + 1 == cur.len() {
            if left <= cap {
                cur[i] = left;
                f(cur);
            }
            return;
        }
        for v in (0..=left.min(cap)).rev() {
            cur[i] = v;
            rec(i + 1, left - v, cap, cur, f);
        }
    }
    if parts == 0 {
        return;
    }
    rec(0, total, cap, &mut vec![0; parts], f);
}

/// Orders curve classes by `c₁` then descending intersection vector.
pub fn cmp_by_degree(a: &CurveClass, b: &CurveClass) -> Ordering {
    a.c1().cmp(&b.c1()).then_with(|| b.d.cmp(&a.d))
}
