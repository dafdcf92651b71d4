//! Complete smooth fans and their primitive collections.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::linalg::{self, rat, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error("fan rank must be positive")]
    ZeroRank,
    #[error("fan has no rays")]
    NoRays,
    #[error("fan has no maximal cones")]
    NoCones,
    #[error("ray {index} has {found} coordinates, expected {expected}")]
    RayDimension { index: usize, found: usize, expected: usize },
    #[error("ray {index} is not primitive (gcd of entries is {gcd})")]
    NonPrimitiveRay { index: usize, gcd: i64 },
    #[error("rays {first} and {second} coincide")]
    DuplicateRay { first: usize, second: usize },
    #[error("maximal cone {index} is malformed: {reason}")]
    InvalidCone { index: usize, reason: String },
    #[error("maximal cone {index} has determinant {det}; the fan is not smooth")]
    NonUnimodularCone { index: usize, det: i64 },
    #[error("ray {index} lies in no maximal cone")]
    UnusedRay { index: usize },
    #[error("fan is not complete: {reason}")]
    IncompleteFan { reason: String },
    #[error("point is not in the support of the fan")]
    NotInSupport,
}

/// A complete smooth simplicial fan.
///
/// Rays are indexed `0..rays.len()` in input order; maximal cones are stored
/// as sorted index lists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    max_cones: Vec<Vec<usize>>,
    // dual_bases[k][j] is the character m with <m, v_x> = delta for the rays x
    // of max_cones[k]; integral because every maximal cone is unimodular.
    dual_bases: Vec<Vec<Vec<i64>>>,
    cones: BTreeSet<Vec<usize>>,
}

/// Index set of rays spanning no cone while all proper subsets do.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PrimitiveCollection {
    pub rays: Vec<usize>,
}

impl PrimitiveCollection {
    pub fn len(&self) -> usize {
        self.rays.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rays.is_empty()
    }

    pub fn contains(&self, ray: usize) -> bool {
        self.rays.binary_search(&ray).is_ok()
    }
}

impl fmt::Display for PrimitiveCollection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, r) in self.rays.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "rho{}", r + 1)?;
        }
        write!(f, "}}")
    }
}

/// The cone whose relative interior contains a point, with the (positive)
/// coordinates of the point on that cone's rays.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeLocation {
    pub cone: Vec<usize>,
    pub coefficients: Vec<Rational>,
}

impl Fan {
    pub fn new(rank: usize, rays: Vec<Vec<i64>>, max_cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        if rank == 0 {
            return Err(FanError::ZeroRank);
        }
        if rays.is_empty() {
            return Err(FanError::NoRays);
        }
        if max_cones.is_empty() {
            return Err(FanError::NoCones);
        }
        for (index, v) in rays.iter().enumerate() {
            if v.len() != rank {
                return Err(FanError::RayDimension { index, found: v.len(), expected: rank });
            }
            let gcd = v.iter().fold(0, |g, &x| linalg::gcd_i64(g, x));
            if gcd != 1 {
                return Err(FanError::NonPrimitiveRay { index, gcd });
            }
        }
        for i in 0..rays.len() {
            for j in i + 1..rays.len() {
                if rays[i] == rays[j] {
                    return Err(FanError::DuplicateRay { first: i, second: j });
                }
            }
        }

        let mut sorted_cones = Vec::with_capacity(max_cones.len());
        let mut dual_bases = Vec::with_capacity(max_cones.len());
        for (index, cone) in max_cones.iter().enumerate() {
            let mut c = cone.clone();
            c.sort_unstable();
            c.dedup();
            if c.len() != cone.len() {
                return Err(FanError::InvalidCone { index, reason: "repeated ray index".into() });
            }
            if c.len() != rank {
                return Err(FanError::InvalidCone {
                    index,
                    reason: format!("has {} rays, expected {rank}", c.len()),
                });
            }
            if let Some(&bad) = c.iter().find(|&&r| r >= rays.len()) {
                return Err(FanError::InvalidCone { index, reason: format!("ray index {bad} out of range") });
            }
            // columns are the ray vectors
            let basis: Vec<Vec<i64>> = (0..rank).map(|i| c.iter().map(|&r| rays[r][i]).collect()).collect();
            let det = linalg::det_i64(&basis);
            if det.abs() != 1 {
                return Err(FanError::NonUnimodularCone { index, det });
            }
            let inv = linalg::unimodular_inverse(&basis).expect("unimodular matrix has an integral inverse");
            dual_bases.push(inv);
            sorted_cones.push(c);
        }
        {
            let mut seen = BTreeSet::new();
            for (index, c) in sorted_cones.iter().enumerate() {
                if !seen.insert(c.clone()) {
                    return Err(FanError::InvalidCone { index, reason: "duplicate maximal cone".into() });
                }
            }
        }
        for index in 0..rays.len() {
            if !sorted_cones.iter().any(|c| c.contains(&index)) {
                return Err(FanError::UnusedRay { index });
            }
        }

        let mut cones = BTreeSet::new();
        for c in &sorted_cones {
            for mask in 0u32..(1 << c.len()) {
                let face: Vec<usize> = (0..c.len()).filter(|i| mask & (1 << i) != 0).map(|i| c[i]).collect();
                cones.insert(face);
            }
        }

        let fan = Fan { rank, rays, max_cones: sorted_cones, dual_bases, cones };
        fan.check_completeness()?;
        Ok(fan)
    }

    /// Facet pairing plus a covering-degree count at a generic point.
    fn check_completeness(&self) -> Result<(), FanError> {
        let mut facets: BTreeMap<Vec<usize>, Vec<(usize, usize)>> = BTreeMap::new();
        for (k, c) in self.max_cones.iter().enumerate() {
            for j in 0..c.len() {
                let mut facet = c.clone();
                facet.remove(j);
                facets.entry(facet).or_default().push((k, j));
            }
        }
        for (facet, owners) in &facets {
            if owners.len() != 2 {
                return Err(FanError::IncompleteFan {
                    reason: format!(
                        "wall {:?} lies in {} maximal cones instead of 2",
                        facet,
                        owners.len()
                    ),
                });
            }
            let (k, j) = owners[0];
            let (k2, j2) = owners[1];
            let normal = &self.dual_bases[k][j];
            let opposite = self.max_cones[k2][j2];
            if linalg::dot(normal, &self.rays[opposite]) >= 0 {
                return Err(FanError::IncompleteFan {
                    reason: format!("cones on wall {:?} overlap", facet),
                });
            }
        }

        // Walk along the moment curve until the point avoids every cone wall.
        for t in 2i64.. {
            let point: Vec<Rational> = (0..self.rank)
                .map(|i| rat(t.pow(i as u32)) + Rational::new(1.into(), 7919.into()))
                .collect();
            let coords: Vec<Vec<Rational>> = self.dual_bases.iter().map(|dual| Self::coords_in(dual, &point)).collect();
            if coords.iter().flatten().any(|x| x.is_zero()) {
                continue;
            }
            let covering = coords.iter().filter(|c| c.iter().all(|x| x.is_positive())).count();
            if covering != 1 {
                return Err(FanError::IncompleteFan {
                    reason: format!("a generic point is covered by {covering} maximal cones"),
                });
            }
            break;
        }
        Ok(())
    }

    fn coords_in(dual: &[Vec<i64>], point: &[Rational]) -> Vec<Rational> {
        dual.iter()
            .map(|m| m.iter().zip(point).map(|(&a, x)| rat(a) * x).sum())
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &[i64] {
        &self.rays[i]
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    /// Dual basis of a maximal cone, row `j` pairing to 1 with its `j`-th ray.
    pub fn dual_basis(&self, cone: usize) -> &[Vec<i64>] {
        &self.dual_bases[cone]
    }

    /// Every cone of the fan (as sorted ray sets), including the zero cone.
    pub fn cones(&self) -> impl Iterator<Item = &Vec<usize>> {
        self.cones.iter()
    }

    pub fn spans_cone(&self, rays: &[usize]) -> bool {
        let mut s = rays.to_vec();
        s.sort_unstable();
        s.dedup();
        self.cones.contains(&s)
    }

    /// Codimension-one cones shared by two maximal cones, with the opposite rays.
    pub fn walls(&self) -> Vec<(Vec<usize>, usize, usize)> {
        let mut facets: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
        for c in &self.max_cones {
            for j in 0..c.len() {
                let mut facet = c.clone();
                let opp = facet.remove(j);
                facets.entry(facet).or_default().push(opp);
            }
        }
        facets
            .into_iter()
            .map(|(facet, opp)| (facet, opp[0].min(opp[1]), opp[0].max(opp[1])))
            .collect()
    }

    /// All primitive collections, sorted lexicographically.
    pub fn primitive_collections(&self) -> Vec<PrimitiveCollection> {
        let r = self.rays.len();
        let mut out = Vec::new();
        // Minimal non-faces have at most rank + 1 elements.
        for size in 2..=(self.rank + 1).min(r) {
            for subset in subsets(r, size) {
                if self.cones.contains(&subset) {
                    continue;
                }
                let all_proper_faces = (0..size).all(|skip| {
                    let face: Vec<usize> =
                        subset.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
                    self.cones.contains(&face)
                });
                if all_proper_faces {
                    out.push(PrimitiveCollection { rays: subset });
                }
            }
        }
        out.sort();
        out
    }

    /// Finds the cone containing `point` in its relative interior.
    pub fn locate_cone(&self, point: &[Rational]) -> Result<ConeLocation, FanError> {
        assert_eq!(point.len(), self.rank);
        for (k, dual) in self.dual_bases.iter().enumerate() {
            let coords = Self::coords_in(dual, point);
            if coords.iter().any(|x| x.is_negative()) {
                continue;
            }
            let mut cone = Vec::new();
            let mut coefficients = Vec::new();
            for (j, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    cone.push(self.max_cones[k][j]);
                    coefficients.push(c);
                }
            }
            return Ok(ConeLocation { cone, coefficients });
        }
        Err(FanError::NotInSupport)
    }

    pub fn locate_integer_point(&self, point: &[i64]) -> Result<ConeLocation, FanError> {
        let p: Vec<Rational> = point.iter().map(|&x| rat(x)).collect();
        self.locate_cone(&p)
    }

    /// Number of cones with `i` rays, for `i = 0..=rank`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.rank + 1];
        for c in &self.cones {
            f[c.len()] += 1;
        }
        f
    }

    /// h-vector of the simplicial sphere underlying the fan.
    pub fn h_vector(&self) -> Vec<i64> {
        let n = self.rank as i64;
        let f: Vec<i64> = self.f_vector().into_iter().map(|x| x as i64).collect();
        (0..=n)
            .map(|k| {
                (0..=k)
                    .map(|i| {
                        let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                        sign * binomial(n - i, k - i) * f[i as usize]
                    })
                    .sum()
            })
            .collect()
    }
}

pub(crate) fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// All `size`-element subsets of `0..n` in lexicographic order.
pub(crate) fn subsets(n: usize, size: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < size - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, size, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, size, &mut Vec::new(), &mut out);
    out
}

/// Fans of a few standard smooth projective toric varieties.
pub mod standard {
    use super::Fan;

    pub fn projective_line() -> Fan {
        Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    pub fn projective_plane() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![vec![0, 1], vec![1, 2], vec![2, 0]]).unwrap()
    }

    pub fn projective_space(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n).map(|skip| (0..=n).filter(|&i| i != skip).collect()).collect();
        Fan::new(n, rays, cones).unwrap()
    }

    /// P^1 x P^1 with rays (1,0), (-1,0), (0,1), (0,-1).
    pub fn p1_x_p1() -> Fan {
        hirzebruch(0)
    }

    /// Hirzebruch surface F_n with rays (1,0), (-1,n), (0,1), (0,-1).
    pub fn hirzebruch(n: i64) -> Fan {
        Fan::new(
            2,
            vec![vec![1, 0], vec![-1, n], vec![0, 1], vec![0, -1]],
            vec![vec![0, 2], vec![2, 1], vec![1, 3], vec![3, 0]],
        )
        .unwrap()
    }
}
