//! Instanton sectors: the moduli spaces `X_β` are never built; everything
//! downstream only needs the exponents `h⁰(d_c^β)` and the primitive
//! collections of the original fan.

use thiserror::Error;

use crate::deformation::{collection_classes, LinearData};
use crate::fan::Fan;
use crate::lattice::{ClassLattice, CurveClass};
use crate::poly::cache::{cached_groebner, GroebnerCache};
use crate::poly::{GroebnerBasis, Ideal, MonomialOrder, Polynomial};
use crate::quantum::h0;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InstantonError {
    #[error("{upper} does not dominate {lower}")]
    NotDominating { upper: String, lower: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorData {
    pub beta: CurveClass,
    /// `(ρ, i)` for `0 ≤ i ≤ d_ρ`.
    pub enhanced_edges: Vec<(usize, u32)>,
    /// Rays whose edge `(ρ, 0)` is degenerate.
    pub degenerate: Vec<usize>,
    pub n_beta: i64,
    /// `h⁰(d_c^β)` for every equivalence class.
    pub exponents: Vec<u32>,
    pub ideal_gens: Vec<Polynomial>,
    pub nonempty: bool,
    pub effective: bool,
}

impl SectorData {
    pub fn ideal(&self, pic_rank: usize) -> Ideal {
        Ideal::new(pic_rank, self.ideal_gens.clone(), MonomialOrder::GrevLex)
    }
}

fn class_exponents(cl: &ClassLattice, beta: &CurveClass) -> Vec<u32> {
    cl.equiv_classes().iter().map(|c| h0(cl.d_class(beta, c.id)) as u32).collect()
}

pub fn sector(fan: &Fan, cl: &ClassLattice, lin: &LinearData, beta: &CurveClass) -> SectorData {
    let d = beta.d();
    let prims = fan.primitive_collections();
    let enhanced_edges: Vec<(usize, u32)> =
        (0..d.len()).filter(|&r| d[r] >= 0).flat_map(|r| (0..=d[r] as u32).map(move |i| (r, i))).collect();
    let degenerate: Vec<usize> = (0..d.len())
        .filter(|&r| {
            d[r] == 0 && prims.iter().any(|k| k.contains(r) && k.rays.iter().all(|&x| x == r || d[x] < 0))
        })
        .collect();
    let nonempty = !prims.iter().any(|k| k.rays.iter().all(|&x| d[x] < 0));
    let n_beta = d.iter().map(|&x| h0(x)).sum::<i64>() - cl.pic_rank() as i64;
    let exponents = class_exponents(cl, beta);

    let mut ideal_gens: Vec<Polynomial> = prims
        .iter()
        .map(|k| {
            let mut e = vec![0u32; exponents.len()];
            for c in collection_classes(cl, &k.rays) {
                e[c] = exponents[c];
            }
            lin.q_product(&e)
        })
        .collect();
    for &r in &degenerate {
        let c = cl.class_of(r);
        debug_assert_eq!(cl.equiv_classes()[c].len(), 1, "degenerate edges sit in singleton classes");
        if !ideal_gens.contains(lin.q(c)) {
            ideal_gens.push(lin.q(c).clone());
        }
    }
    SectorData {
        beta: beta.clone(),
        enhanced_edges,
        degenerate,
        n_beta,
        exponents,
        ideal_gens,
        nonempty,
        effective: cl.is_effective(beta),
    }
}

/// Reduced Gröbner basis of the sector ideal.
pub fn sector_basis(sector: &SectorData, pic_rank: usize, cache: Option<&dyn GroebnerCache>) -> GroebnerBasis {
    cached_groebner(&sector.ideal(pic_rank), cache)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Transition {
    pub source: CurveClass,
    pub target: CurveClass,
    /// `h⁰(d_c^{β′}) - h⁰(d_c^β)` per class.
    pub exponents: Vec<u32>,
    pub r: Polynomial,
}

/// Exponents of `R_{β′β}` without expanding the product.
pub fn transition_exponents(
    cl: &ClassLattice,
    target: &CurveClass,
    source: &CurveClass,
) -> Result<Vec<u32>, InstantonError> {
    if !cl.dominates(target, source) {
        return Err(InstantonError::NotDominating { upper: target.to_string(), lower: source.to_string() });
    }
    let hi = class_exponents(cl, target);
    let lo = class_exponents(cl, source);
    Ok(hi.iter().zip(&lo).map(|(a, b)| a - b).collect())
}

/// `R_{β′β} = ∏_c Q_c^{h⁰(d_c^{β′}) − h⁰(d_c^β)}`.
pub fn transition(
    cl: &ClassLattice,
    lin: &LinearData,
    target: &CurveClass,
    source: &CurveClass,
) -> Result<Transition, InstantonError> {
    let exponents = transition_exponents(cl, target, source)?;
    let r = lin.q_product(&exponents);
    if let Some(deg) = r.degree() {
        let n_target = target.d().iter().map(|&x| h0(x)).sum::<i64>();
        let n_source = source.d().iter().map(|&x| h0(x)).sum::<i64>();
        assert_eq!(deg as i64, n_target - n_source, "degree of R differs from n_β′ - n_β");
    }
    Ok(Transition { source: source.clone(), target: target.clone(), exponents, r })
}

/// `R_{β′β}·Q_{K_β}` is a multiple of `Q_{K_{β′}}` for every primitive
/// collection, compared exponent by exponent.
pub fn transfer_check(
    fan: &Fan,
    cl: &ClassLattice,
    target: &CurveClass,
    source: &CurveClass,
) -> Result<bool, InstantonError> {
    if !cl.dominates(target, source) {
        return Err(InstantonError::NotDominating { upper: target.to_string(), lower: source.to_string() });
    }
    let hi = class_exponents(cl, target);
    let lo = class_exponents(cl, source);
    Ok(fan.primitive_collections().iter().all(|k| {
        let in_k = collection_classes(cl, &k.rays);
        (0..hi.len()).all(|c| {
            let member = in_k.contains(&c);
            let have = (hi[c] - lo[c]) + if member { lo[c] } else { 0 };
            let need = if member { hi[c] } else { 0 };
            have >= need
        })
    }))
}
