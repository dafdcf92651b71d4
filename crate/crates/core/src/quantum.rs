//! Correlation functions, quantum Stanley–Reisner relations and the
//! mechanical check of the relations against the sector rings.
//!
//! Sector correlators live in a direct limit of one-dimensional spaces
//! with no canonical trivialization. Every query fixes one anchor class
//! dominating all sectors involved and reports scalars against the unique
//! top-degree standard monomial of the anchor ring; only ratios are
//! intrinsic.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use thiserror::Error;

use crate::deformation::LinearData;
use crate::fan::{Fan, PrimitiveCollection};
use crate::instanton::{sector, sector_basis, transition, transition_exponents, InstantonError, SectorData};
use crate::lattice::{cmp_by_degree, ClassLattice, CurveClass, LatticeError, PrimitiveRelation};
use crate::linalg::Rational;
use crate::poly::cache::{cached_groebner, GroebnerCache};
use crate::poly::{parse_polynomial, GroebnerBasis, Ideal, Monomial, MonomialOrder, PolyError, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuantumError {
    #[error("{upper} does not dominate {lower}")]
    NotDominating { upper: String, lower: String },
    #[error("anchor {anchor} has a {dim}-dimensional top graded piece, expected 1")]
    AnchorDegenerate { anchor: String, dim: usize },
    #[error("sector {0} is not effective")]
    NotEffective(String),
    #[error("degree slices of the Mori cone are infinite ({0}); list the sectors explicitly")]
    NonFanoEnumerationUnbounded(String),
    #[error("Mori generators do not form a basis of the curve lattice; quantum normal forms are unavailable")]
    UnsupportedNovikovShape,
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl From<InstantonError> for QuantumError {
    fn from(e: InstantonError) -> QuantumError {
        match e {
            InstantonError::NotDominating { upper, lower } => QuantumError::NotDominating { upper, lower },
        }
    }
}

/// `h⁰(O(x))` on ℙ¹.
pub fn h0(x: i64) -> i64 {
    (x + 1).max(0)
}

/// `h¹(O(x))` on ℙ¹.
pub fn h1(x: i64) -> i64 {
    (-x - 1).max(0)
}

fn h1_exponents(cl: &ClassLattice, beta: &CurveClass) -> Vec<u32> {
    cl.equiv_classes().iter().map(|c| h1(cl.d_class(beta, c.id)) as u32).collect()
}

/// Four-fermi factor `F_β = ∏_c Q_c^{h¹(d_c^β)}`.
pub fn four_fermi(cl: &ClassLattice, lin: &LinearData, beta: &CurveClass) -> Polynomial {
    lin.q_product(&h1_exponents(cl, beta))
}

/// Polynomials in `ψ` with coefficients indexed by curve classes `q^β`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NovikovPolynomial {
    pic_rank: usize,
    terms: BTreeMap<CurveClass, Polynomial>,
}

impl NovikovPolynomial {
    pub fn zero(pic_rank: usize) -> NovikovPolynomial {
        NovikovPolynomial { pic_rank, terms: BTreeMap::new() }
    }

    pub fn classical(p: Polynomial, num_rays: usize) -> NovikovPolynomial {
        let mut out = NovikovPolynomial::zero(p.nvars());
        out.add_term(CurveClass::zero(num_rays), p);
        out
    }

    pub fn add_term(&mut self, beta: CurveClass, p: Polynomial) {
        if p.is_zero() {
            return;
        }
        let entry = self.terms.entry(beta).or_insert_with(|| Polynomial::zero(p.nvars()));
        *entry = &*entry + &p;
        let zero: Vec<CurveClass> = self.terms.iter().filter(|(_, v)| v.is_zero()).map(|(k, _)| k.clone()).collect();
        for k in zero {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &Polynomial)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, beta: &CurveClass) -> Polynomial {
        self.terms.get(beta).cloned().unwrap_or_else(|| Polynomial::zero(self.pic_rank))
    }

    pub fn mul_poly(&self, p: &Polynomial) -> NovikovPolynomial {
        let mut out = NovikovPolynomial::zero(self.pic_rank);
        for (b, c) in &self.terms {
            out.add_term(b.clone(), c * p);
        }
        out
    }

    /// Sets every `q^β` with `β ≠ 0` to zero.
    pub fn classical_part(&self) -> Polynomial {
        self.terms.iter().find(|(b, _)| b.is_zero()).map(|(_, p)| p.clone()).unwrap_or_else(|| Polynomial::zero(self.pic_rank))
    }

    /// Homogeneous under `deg q^β = c₁·β`.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = Vec::new();
        for (b, p) in &self.terms {
            if !p.is_homogeneous() {
                return false;
            }
            degs.push(p.degree().unwrap() as i64 + b.c1());
        }
        degs.windows(2).all(|w| w[0] == w[1])
    }

    pub fn display(&self, cl: &ClassLattice) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let names = psi_names(cl.pic_rank());
        let mut keys: Vec<&CurveClass> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.is_zero().cmp(&a.is_zero()).then_with(|| cmp_by_degree(a, b)));
        let mut out = String::new();
        for (i, b) in keys.into_iter().enumerate() {
            let p = &self.terms[b];
            let ptxt = p.display_with(&names).to_string();
            let q = q_monomial(cl, b);
            let term = match (q.as_str(), p.num_terms()) {
                ("1", _) => ptxt,
                (_, 1) if p.is_one() => q,
                (_, 1) if ptxt == "-1" => format!("-{q}"),
                (_, 1) => format!("{q}*{ptxt}"),
                _ => format!("{q}*({ptxt})"),
            };
            if i == 0 {
                out.push_str(&term);
            } else if let Some(rest) = term.strip_prefix('-') {
                out.push_str(" - ");
                out.push_str(rest);
            } else {
                out.push_str(" + ");
                out.push_str(&term);
            }
        }
        out
    }
}

pub fn psi_names(pic_rank: usize) -> Vec<String> {
    (1..=pic_rank).map(|i| format!("psi{i}")).collect()
}

/// `q1^a*q2^b` in Mori coordinates when they form a basis, otherwise
/// `q^[c1,c2,…]` in curve-basis coordinates.
pub fn q_monomial(cl: &ClassLattice, beta: &CurveClass) -> String {
    if beta.is_zero() {
        return "1".into();
    }
    match cl.mori_coordinates(beta) {
        Some(lam) => {
            let parts: Vec<String> = lam
                .iter()
                .enumerate()
                .filter(|(_, &e)| e != 0)
                .map(|(j, &e)| if e == 1 { format!("q{}", j + 1) } else { format!("q{}^{}", j + 1, e) })
                .collect();
            parts.join("*")
        }
        None => {
            let c: Vec<String> = cl.coords(beta).iter().map(|x| x.to_string()).collect();
            format!("q^[{}]", c.join(","))
        }
    }
}

/// Renders a scalar series `Σ λ_β q^β`.
pub fn series_string(cl: &ClassLattice, series: &BTreeMap<CurveClass, Rational>) -> String {
    let mut n = NovikovPolynomial::zero(cl.pic_rank());
    for (b, v) in series {
        n.add_term(b.clone(), Polynomial::constant(cl.pic_rank(), v.clone()));
    }
    n.display(cl)
}

/// Parses text over `D<i>` (divisor class of ray `i`, 1-based), `psi<k>`
/// (Picard basis) and `q<j>` (`j`-th Mori generator).
pub fn parse_novikov(cl: &ClassLattice, text: &str) -> Result<NovikovPolynomial, QuantumError> {
    let p = cl.pic_rank();
    let s = cl.mori_generators().len();
    let lookup = |name: &str| -> Option<Polynomial> {
        let index = |prefix: &str| name.strip_prefix(prefix).and_then(|t| t.parse::<usize>().ok()).filter(|&i| i >= 1);
        if let Some(i) = index("psi") {
            return (i <= p).then(|| Polynomial::var(p + s, i - 1));
        }
        if let Some(i) = index("D") {
            return (i <= cl.num_rays()).then(|| cl.divisor_polynomial(i - 1).extend_vars(s));
        }
        if let Some(j) = index("q") {
            return (j <= s).then(|| Polynomial::var(p + s, p + j - 1));
        }
        None
    };
    let ext = parse_polynomial(text, p + s, &lookup)?;
    Ok(from_extended(cl, &ext))
}

/// Parses a class in `W`-polynomials (no Novikov variables).
pub fn parse_w(cl: &ClassLattice, text: &str) -> Result<Polynomial, QuantumError> {
    let n = parse_novikov(cl, text)?;
    if n.terms().any(|(b, _)| !b.is_zero()) {
        return Err(PolyError::Parse { position: 1, message: "Novikov variables are not allowed here".into() }.into());
    }
    Ok(n.classical_part())
}

/// Splits a polynomial in `ψ` and `q` variables into Novikov terms.
pub fn from_extended(cl: &ClassLattice, ext: &Polynomial) -> NovikovPolynomial {
    let p = cl.pic_rank();
    let mut out = NovikovPolynomial::zero(p);
    for (m, c) in ext.terms() {
        let e = m.exponents();
        let mut beta = cl.zero_curve();
        for (j, g) in cl.mori_generators().iter().enumerate() {
            beta = &beta + &(e[p + j] as i64 * g);
        }
        out.add_term(beta, Polynomial::term(Monomial::new(e[..p].to_vec()), c.clone()));
    }
    out
}

/// Inverse of [`from_extended`]; needs Mori coordinates.
pub fn to_extended(cl: &ClassLattice, n: &NovikovPolynomial) -> Result<Polynomial, QuantumError> {
    let p = cl.pic_rank();
    let s = cl.mori_generators().len();
    let mut out = Polynomial::zero(p + s);
    for (b, poly) in n.terms() {
        let lam = cl.mori_coordinates(b).ok_or(QuantumError::UnsupportedNovikovShape)?;
        if lam.iter().any(|&x| x < 0) {
            return Err(QuantumError::NotEffective(b.to_string()));
        }
        let qm: Vec<u32> = std::iter::repeat_n(0, p).chain(lam.iter().map(|&x| x as u32)).collect();
        out = &out + &poly.extend_vars(s).mul_monomial(&Monomial::new(qm));
    }
    Ok(out)
}

/// The anchor sector with its ring and the spanning top-degree monomial.
#[derive(Debug, Clone)]
pub struct Anchor {
    pub beta: CurveClass,
    pub sector: SectorData,
    pub basis: GroebnerBasis,
    pub generator: Monomial,
}

pub fn prepare_anchor(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    beta: &CurveClass,
    cache: Option<&dyn GroebnerCache>,
) -> Result<Anchor, QuantumError> {
    let s = sector(fan, cl, lin, beta);
    let basis = sector_basis(&s, cl.pic_rank(), cache);
    let top = if s.nonempty && s.n_beta >= 0 { basis.standard_monomials(s.n_beta as u32) } else { Vec::new() };
    if top.len() != 1 {
        return Err(QuantumError::AnchorDegenerate { anchor: beta.to_string(), dim: top.len() });
    }
    let generator = top.into_iter().next().unwrap();
    Ok(Anchor { beta: beta.clone(), sector: s, basis, generator })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroReason {
    DegreeMismatch,
    EmptySector,
}

impl fmt::Display for ZeroReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZeroReason::DegreeMismatch => write!(f, "degree mismatch"),
            ZeroReason::EmptySector => write!(f, "empty sector"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorValue {
    pub beta: CurveClass,
    pub lambda: Rational,
    /// Set when the value vanishes for a structural reason.
    pub reason: Option<ZeroReason>,
}

/// `⟨p⟩_β` against the anchor: `NF(R_{β̂β}·p·F_β) = λ·g`. Only the
/// homogeneous component of `p` in degree `c₁·β + dim X` contributes.
pub fn correlator_sector(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    p: &Polynomial,
    beta: &CurveClass,
    anchor: &Anchor,
) -> Result<SectorValue, QuantumError> {
    let zero = |reason| SectorValue { beta: beta.clone(), lambda: Rational::from_integer(0.into()), reason: Some(reason) };
    let r_exponents = transition_exponents(cl, &anchor.beta, beta)?;
    let s = sector(fan, cl, lin, beta);
    if !s.nonempty {
        return Ok(zero(ZeroReason::EmptySector));
    }
    let degree = beta.c1() + fan.rank() as i64;
    if degree < 0 {
        return Ok(zero(ZeroReason::DegreeMismatch));
    }
    let pd = p.homogeneous_component(degree as u32);
    if pd.is_zero() {
        return Ok(zero(ZeroReason::DegreeMismatch));
    }
    // p·F_β·R_{β̂β}, reduced after every factor so intermediates stay in
    // the finite-dimensional quotient
    let h1e = h1_exponents(cl, beta);
    if lin.q_all().iter().all(|q| !q.is_zero()) {
        let deg_f: i64 = h1e.iter().zip(lin.q_all()).map(|(&e, q)| e as i64 * q.degree().unwrap() as i64).sum();
        assert_eq!(degree + deg_f, s.n_beta, "deg(p·F_β) differs from n_β");
    }
    let mut nf = anchor.basis.normal_form(&pd);
    for (c, (&f, &r)) in h1e.iter().zip(&r_exponents).enumerate() {
        for _ in 0..f + r {
            if nf.is_zero() {
                break;
            }
            nf = anchor.basis.normal_form(&(&nf * lin.q(c)));
        }
    }
    let lambda = nf.coefficient(&anchor.generator);
    debug_assert!(nf == Polynomial::term(anchor.generator.clone(), lambda.clone()) || nf.is_zero());
    Ok(SectorValue { beta: beta.clone(), lambda, reason: None })
}

#[derive(Debug, Clone)]
pub struct CorrelatorReport {
    pub poly: Polynomial,
    pub anchor: CurveClass,
    pub generator: Monomial,
    pub values: Vec<SectorValue>,
    /// Nonzero `λ_β`.
    pub series: BTreeMap<CurveClass, Rational>,
}

/// Correlators of `p` in the given sectors against one common anchor.
pub fn correlator_in_sectors(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    p: &Polynomial,
    sectors: &[CurveClass],
    anchor_bound: u32,
    cache: Option<&dyn GroebnerCache>,
) -> Result<CorrelatorReport, QuantumError> {
    if let Some(b) = sectors.iter().find(|b| !cl.is_effective(b)) {
        return Err(QuantumError::NotEffective(b.to_string()));
    }
    let anchor_input: Vec<CurveClass> = if sectors.is_empty() { vec![cl.zero_curve()] } else { sectors.to_vec() };
    let anchor_beta = cl.find_anchor(&anchor_input, anchor_bound)?;
    let anchor = prepare_anchor(fan, cl, lin, &anchor_beta, cache)?;
    correlator_with_anchor(fan, cl, lin, p, sectors, &anchor)
}

pub fn correlator_with_anchor(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    p: &Polynomial,
    sectors: &[CurveClass],
    anchor: &Anchor,
) -> Result<CorrelatorReport, QuantumError> {
    let values: Vec<SectorValue> = sectors
        .par_iter()
        .map(|b| correlator_sector(fan, cl, lin, p, b, anchor))
        .collect::<Result<_, _>>()?;
    let series = values
        .iter()
        .filter(|v| v.lambda != Rational::from_integer(0.into()))
        .map(|v| (v.beta.clone(), v.lambda.clone()))
        .collect();
    Ok(CorrelatorReport {
        poly: p.clone(),
        anchor: anchor.beta.clone(),
        generator: anchor.generator.clone(),
        values,
        series,
    })
}

/// Effective classes whose sector can pair with some homogeneous part of
/// `p`, with `0 ≤ c₁·β ≤ max_c1_degree`.
pub fn series_sectors(
    fan: &Fan,
    cl: &ClassLattice,
    p: &Polynomial,
    max_c1_degree: i64,
) -> Result<Vec<CurveClass>, QuantumError> {
    let n = fan.rank() as i64;
    let mut out = Vec::new();
    for d in p.degrees() {
        let k = d as i64 - n;
        if k < 0 || k > max_c1_degree {
            continue;
        }
        match cl.effective_with_c1(k) {
            Ok(v) => out.extend(v),
            Err(LatticeError::UnboundedSlice(g)) => return Err(QuantumError::NonFanoEnumerationUnbounded(g)),
            Err(e) => return Err(e.into()),
        }
    }
    out.sort_by(cmp_by_degree);
    out.dedup();
    Ok(out)
}

/// `⟨p⟩ = Σ_β ⟨p⟩_β q^β` over effective `β` with `c₁·β ≤ max_c1_degree`.
pub fn correlator_series(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    p: &Polynomial,
    max_c1_degree: i64,
    anchor_bound: u32,
    cache: Option<&dyn GroebnerCache>,
) -> Result<CorrelatorReport, QuantumError> {
    let sectors = series_sectors(fan, cl, p, max_c1_degree)?;
    correlator_in_sectors(fan, cl, lin, p, &sectors, anchor_bound, cache)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumRelation {
    pub relation: PrimitiveRelation,
    /// `Q_K`.
    pub lhs: Polynomial,
    /// `∏_{c∈[K⁻]} Q_c^{-d_c}`, to be multiplied by `q^{β_K}`.
    pub rhs: Polynomial,
    /// `Q_K − q^{β_K}·rhs`.
    pub difference: NovikovPolynomial,
}

impl QuantumRelation {
    pub fn collection(&self) -> &PrimitiveCollection {
        &self.relation.collection
    }
}

pub fn qsr_generators(fan: &Fan, cl: &ClassLattice, lin: &LinearData) -> Result<Vec<QuantumRelation>, QuantumError> {
    let rels = cl.primitive_relations(fan)?;
    Ok(rels
        .into_iter()
        .map(|rel| {
            let lhs = lin.q_collection(&rel.classes);
            let mut e = vec![0u32; cl.equiv_classes().len()];
            for &(c, m) in &rel.negative {
                e[c] = m;
            }
            let rhs = lin.q_product(&e);
            let mut difference = NovikovPolynomial::zero(cl.pic_rank());
            difference.add_term(cl.zero_curve(), lhs.clone());
            difference.add_term(rel.beta.clone(), -&rhs);
            if !lhs.is_zero() && !rhs.is_zero() {
                assert!(difference.is_homogeneous(), "relation for {} is not homogeneous", rel.collection);
            }
            QuantumRelation { relation: rel, lhs, rhs, difference }
        })
        .collect())
}

/// Per-class exponents of `Q_c` on the two sides of
/// `R_{β′,β+β_K}·F_{β+β_K}·Q_K = R_{β′β}·F_β·∏_{[K⁻]} Q_c^{-d_c^{β_K}}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QcExponents {
    pub lhs: Vec<i64>,
    pub rhs: Vec<i64>,
}

impl QcExponents {
    pub fn holds(&self) -> bool {
        self.lhs == self.rhs
    }
}

fn check_dominance(cl: &ClassLattice, upper: &CurveClass, lower: &CurveClass) -> Result<(), QuantumError> {
    if cl.dominates(upper, lower) {
        Ok(())
    } else {
        Err(QuantumError::NotDominating { upper: upper.to_string(), lower: lower.to_string() })
    }
}

pub fn qc_exponents(
    cl: &ClassLattice,
    rel: &PrimitiveRelation,
    beta: &CurveClass,
    beta_prime: &CurveClass,
) -> Result<QcExponents, QuantumError> {
    if !cl.is_effective(beta) {
        return Err(QuantumError::NotEffective(beta.to_string()));
    }
    let shifted = beta + &rel.beta;
    check_dominance(cl, beta_prime, beta)?;
    check_dominance(cl, beta_prime, &shifted)?;
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for c in cl.equiv_classes() {
        let dp = cl.d_class(beta_prime, c.id);
        let ds = cl.d_class(&shifted, c.id);
        let db = cl.d_class(beta, c.id);
        let in_k = i64::from(rel.classes.contains(&c.id));
        let minus = rel.negative.iter().find(|(cc, _)| *cc == c.id).map_or(0, |&(_, m)| m as i64);
        lhs.push(h0(dp) - h0(ds) + h1(ds) + in_k);
        rhs.push(h0(dp) - h0(db) + h1(db) + minus);
    }
    Ok(QcExponents { lhs, rhs })
}

/// Exponent-identity check of the relation for `K` at `(β, β′)`.
pub fn verify_qc_relation(
    cl: &ClassLattice,
    rel: &PrimitiveRelation,
    beta: &CurveClass,
    beta_prime: &CurveClass,
) -> Result<bool, QuantumError> {
    Ok(qc_exponents(cl, rel, beta, beta_prime)?.holds())
}

/// Same identity with both sides expanded as polynomials.
pub fn verify_qc_polynomial(
    cl: &ClassLattice,
    lin: &LinearData,
    q: &QuantumRelation,
    beta: &CurveClass,
    beta_prime: &CurveClass,
) -> Result<bool, QuantumError> {
    let shifted = beta + &q.relation.beta;
    let r1 = transition(cl, lin, beta_prime, &shifted)?;
    let r2 = transition(cl, lin, beta_prime, beta)?;
    let lhs = &(&r1.r * &four_fermi(cl, lin, &shifted)) * &q.lhs;
    let rhs = &(&r2.r * &four_fermi(cl, lin, beta)) * &q.rhs;
    Ok(lhs == rhs)
}

/// `⟨Y·Q_K⟩_{β+β_K} = ⟨Y·∏ Q_c^{-d_c}⟩_β` for every test polynomial, with
/// `β′` as the common anchor.
pub fn verify_qc_correlator(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    q: &QuantumRelation,
    beta: &CurveClass,
    anchor: &Anchor,
    ys: &[Polynomial],
) -> Result<bool, QuantumError> {
    let shifted = beta + &q.relation.beta;
    for y in ys {
        let a = correlator_sector(fan, cl, lin, &(y * &q.lhs), &shifted, anchor)?;
        let b = correlator_sector(fan, cl, lin, &(y * &q.rhs), beta, anchor)?;
        if a.lambda != b.lambda {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Coefficients of `⟨Y·r⟩ = ⟨Y·Q_K⟩ − Σ_β q^{β+β_K} ⟨Y·∏ Q_c^{-d_c}⟩_β`
/// at every listed sector, against one anchor. A sector `β` for which
/// `β − β_K` is not effective only receives the first term.
pub fn relation_correlator(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    q: &QuantumRelation,
    y: &Polynomial,
    sectors: &[CurveClass],
    anchor: &Anchor,
) -> Result<BTreeMap<CurveClass, Rational>, QuantumError> {
    let lhs = y * &q.lhs;
    let rhs = y * &q.rhs;
    sectors
        .par_iter()
        .map(|beta| {
            let a = correlator_sector(fan, cl, lin, &lhs, beta, anchor)?.lambda;
            let shifted = beta - &q.relation.beta;
            let b = if cl.is_effective(&shifted) {
                correlator_sector(fan, cl, lin, &rhs, &shifted, anchor)?.lambda
            } else {
                Rational::from_integer(0.into())
            };
            Ok((beta.clone(), a - b))
        })
        .collect()
}

/// `c₁` is positive on every Mori generator.
pub fn is_fano(cl: &ClassLattice) -> bool {
    cl.mori_generators().iter().all(|g| g.c1() > 0)
}

/// Effective classes with `c₁·β ≤ grid`; when `c₁` is not positive on the
/// Mori cone, additionally bounded by the Mori-cone height `≤ grid`.
pub fn verification_grid(cl: &ClassLattice, grid: i64) -> Result<Vec<CurveClass>, QuantumError> {
    let c1 = cl.c1_functional();
    let bounds = if is_fano(cl) { vec![(c1, grid)] } else { vec![(cl.height_functional(), grid), (c1, grid)] };
    let mut v = cl.effective_classes(&bounds)?;
    v.sort_by(cmp_by_degree);
    Ok(v)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridCase {
    pub collection: PrimitiveCollection,
    pub beta: CurveClass,
    pub anchor: CurveClass,
    pub exponents: bool,
    pub polynomial: Option<bool>,
    pub correlator: Option<bool>,
}

impl GridCase {
    pub fn passed(&self) -> bool {
        self.exponents && self.polynomial != Some(false) && self.correlator != Some(false)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub grid: i64,
    pub anchor_bound: u32,
    /// Also expand both sides as polynomials.
    pub polynomial: bool,
    /// Also compare correlators of all monomials of the matching degree.
    pub correlator: bool,
}

/// Checks every relation on the verification grid with the anchor of
/// `{β, β + β_K}` as `β′`.
pub fn verify_all(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    opts: VerifyOptions,
    cache: Option<&dyn GroebnerCache>,
) -> Result<Vec<GridCase>, QuantumError> {
    let rels = qsr_generators(fan, cl, lin)?;
    let grid = verification_grid(cl, opts.grid)?;
    let jobs: Vec<(&QuantumRelation, &CurveClass)> = rels.iter().flat_map(|q| grid.iter().map(move |b| (q, b))).collect();
    jobs.par_iter()
        .map(|&(q, beta)| {
            let shifted = beta + &q.relation.beta;
            let anchor = cl.find_anchor(&[beta.clone(), shifted.clone()], opts.anchor_bound)
                .or_else(|_| cl.find_anchor(std::slice::from_ref(beta), opts.anchor_bound))?;
            // β + β_K may fail to be effective; then the anchor only needs
            // to dominate it in the h⁰ sense, which find_anchor cannot
            // certify, and the identity is vacuous on the left.
            let exponents = match qc_exponents(cl, &q.relation, beta, &anchor) {
                Ok(e) => e.holds(),
                Err(QuantumError::NotDominating { .. }) if !cl.is_effective(&shifted) => true,
                Err(e) => return Err(e),
            };
            let effective_shift = cl.is_effective(&shifted);
            let polynomial = (opts.polynomial && effective_shift)
                .then(|| verify_qc_polynomial(cl, lin, q, beta, &anchor))
                .transpose()?;
            let correlator = if opts.correlator && effective_shift {
                let a = prepare_anchor(fan, cl, lin, &anchor, cache)?;
                let deg = shifted.c1() + fan.rank() as i64 - q.lhs.degree().unwrap_or(0) as i64;
                let ys: Vec<Polynomial> = if deg < 0 {
                    Vec::new()
                } else {
                    Monomial::all_of_degree(cl.pic_rank(), deg as u32)
                        .into_iter()
                        .map(|m| Polynomial::term(m, Rational::from_integer(1.into())))
                        .collect()
                };
                Some(verify_qc_correlator(fan, cl, lin, q, beta, &a, &ys)?)
            } else {
                None
            };
            Ok(GridCase {
                collection: q.relation.collection.clone(),
                beta: beta.clone(),
                anchor,
                exponents,
                polynomial,
                correlator,
            })
        })
        .collect()
}

/// The ring `Sym*W[q]/QSR` with a block order eliminating `ψ`.
#[derive(Debug, Clone)]
pub struct QuantumRing {
    pic_rank: usize,
    basis: GroebnerBasis,
}

pub fn quantum_ring(
    fan: &Fan,
    cl: &ClassLattice,
    lin: &LinearData,
    cache: Option<&dyn GroebnerCache>,
) -> Result<QuantumRing, QuantumError> {
    if !cl.mori_is_unimodular() {
        return Err(QuantumError::UnsupportedNovikovShape);
    }
    let p = cl.pic_rank();
    let s = cl.mori_generators().len();
    let gens: Vec<Polynomial> = qsr_generators(fan, cl, lin)?
        .iter()
        .map(|q| to_extended(cl, &q.difference))
        .collect::<Result<_, _>>()?;
    let ideal = Ideal::new(p + s, gens, MonomialOrder::BlockGrevLex { split: p });
    Ok(QuantumRing { pic_rank: p, basis: cached_groebner(&ideal, cache) })
}

impl QuantumRing {
    pub fn basis(&self) -> &GroebnerBasis {
        &self.basis
    }

    pub fn pic_rank(&self) -> usize {
        self.pic_rank
    }

    pub fn normal_form(&self, cl: &ClassLattice, p: &NovikovPolynomial) -> Result<NovikovPolynomial, QuantumError> {
        let ext = to_extended(cl, p)?;
        Ok(from_extended(cl, &self.basis.normal_form(&ext)))
    }

    /// Reduced basis with all `q` set to zero.
    pub fn classical_limit(&self) -> Vec<Polynomial> {
        self.basis
            .polys()
            .iter()
            .map(|g| g.truncate_vars(self.pic_rank))
            .filter(|g| !g.is_zero())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deformation::{sr_ideal, Deformation};
    use crate::fan::standard::*;
    use crate::linalg::rat;
    use crate::poly::groebner;

    fn setup(fan: &Fan) -> (ClassLattice, LinearData) {
        let cl = ClassLattice::new(fan).unwrap();
        let e = Deformation::tangent(fan, &cl);
        let lin = LinearData::new(fan, &cl, &e);
        (cl, lin)
    }

    #[test]
    fn riemann_roch_examples() {
        assert_eq!((h0(2), h1(2)), (3, 0));
        assert_eq!((h0(-1), h1(-1)), (0, 0));
        assert_eq!((h0(-3), h1(-3)), (0, 2));
    }

    #[test]
    fn four_fermi_examples() {
        let fan = hirzebruch(2);
        let (cl, lin) = setup(&fan);
        let beta = cl.curve_from_d(&[1, 1, -2, 0]).unwrap();
        assert_eq!(&four_fermi(&cl, &lin, &beta), lin.q(1));
        assert!(four_fermi(&cl, &lin, &cl.zero_curve()).is_one());
        let fan = hirzebruch(1);
        let (cl, lin) = setup(&fan);
        assert!(four_fermi(&cl, &lin, &cl.curve_from_d(&[1, 1, -1, 0]).unwrap()).is_one());
    }

    #[test]
    fn projective_line_correlators() {
        let fan = projective_line();
        let (cl, lin) = setup(&fan);
        let psi = Polynomial::var(1, 0);
        let b1 = cl.curve_from_coords(&[1]).unwrap();
        let anchor = prepare_anchor(&fan, &cl, &lin, &b1, None).unwrap();
        let v = correlator_sector(&fan, &cl, &lin, &psi, &cl.zero_curve(), &anchor).unwrap();
        assert_eq!(v.lambda, rat(1));
        let v = correlator_sector(&fan, &cl, &lin, &psi.pow(3), &b1, &anchor).unwrap();
        assert_eq!(v.lambda, rat(1));
        let v = correlator_sector(&fan, &cl, &lin, &psi.pow(2), &b1, &anchor).unwrap();
        assert_eq!(v.reason, Some(ZeroReason::DegreeMismatch));

        for k in 0..4u32 {
            let report = correlator_series(&fan, &cl, &lin, &psi.pow(2 * k + 1), 8, 10, None).unwrap();
            let expected: BTreeMap<CurveClass, Rational> =
                [(cl.curve_from_coords(&[k as i64]).unwrap(), rat(1))].into_iter().collect();
            assert_eq!(report.series, expected);
        }
        let report = correlator_series(&fan, &cl, &lin, &psi.pow(3), 8, 10, None).unwrap();
        assert_eq!(series_string(&cl, &report.series), "q1");
        let report = correlator_series(&fan, &cl, &lin, &psi.pow(5), 8, 10, None).unwrap();
        assert_eq!(series_string(&cl, &report.series), "q1^2");
    }

    #[test]
    fn projective_plane_classical_correlator() {
        let fan = projective_plane();
        let (cl, lin) = setup(&fan);
        let psi = Polynomial::var(1, 0);
        let report = correlator_series(&fan, &cl, &lin, &psi.pow(2), 6, 10, None).unwrap();
        assert_eq!(series_string(&cl, &report.series), "1");
        let report = correlator_series(&fan, &cl, &lin, &psi.pow(5), 6, 10, None).unwrap();
        assert_eq!(series_string(&cl, &report.series), "q1");
    }

    #[test]
    fn non_fano_series_is_refused() {
        let fan = hirzebruch(2);
        let (cl, lin) = setup(&fan);
        let p = Polynomial::var(2, 0).pow(2);
        assert!(matches!(
            correlator_series(&fan, &cl, &lin, &p, 4, 10, None),
            Err(QuantumError::NonFanoEnumerationUnbounded(_))
        ));
    }

    #[test]
    fn batyrev_relations() {
        let fan = projective_plane();
        let (cl, lin) = setup(&fan);
        let qsr = qsr_generators(&fan, &cl, &lin).unwrap();
        assert_eq!(qsr.len(), 1);
        assert_eq!(qsr[0].difference.display(&cl), "psi1^3 - q1");

        let fan = p1_x_p1();
        let (cl, lin) = setup(&fan);
        let shown: Vec<String> = qsr_generators(&fan, &cl, &lin).unwrap().iter().map(|q| q.difference.display(&cl)).collect();
        assert_eq!(shown, vec!["psi1^2 - q1", "psi2^2 - q2"]);

        for n in 1..4 {
            let fan = hirzebruch(n);
            let (cl, lin) = setup(&fan);
            let qsr = qsr_generators(&fan, &cl, &lin).unwrap();
            let d = |i: usize| cl.divisor_polynomial(i);
            assert_eq!(qsr[0].lhs, &d(0) * &d(1));
            assert_eq!(qsr[0].rhs, d(2).pow(n as u32));
            assert_eq!(q_monomial(&cl, &qsr[0].relation.beta), "q1");
            assert_eq!(qsr[1].lhs, &d(2) * &d(3));
            assert!(qsr[1].rhs.is_one());
            assert_eq!(q_monomial(&cl, &qsr[1].relation.beta), "q2");
        }
    }

    #[test]
    fn quantum_normal_forms() {
        let fan = projective_plane();
        let (cl, lin) = setup(&fan);
        let ring = quantum_ring(&fan, &cl, &lin, None).unwrap();
        let nf = |t: &str| ring.normal_form(&cl, &parse_novikov(&cl, t).unwrap()).unwrap().display(&cl);
        assert_eq!(nf("psi1^3"), "q1");
        assert_eq!(nf("psi1^4"), "q1*psi1");
        assert_eq!(nf("D1*D2*D3"), "q1");

        let fan = p1_x_p1();
        let (cl, lin) = setup(&fan);
        let ring = quantum_ring(&fan, &cl, &lin, None).unwrap();
        let nf = ring.normal_form(&cl, &parse_novikov(&cl, "psi1^2*psi2^2").unwrap()).unwrap();
        assert_eq!(nf.display(&cl), "q1*q2");
    }

    #[test]
    fn classical_limit_of_quantum_basis() {
        for fan in [projective_line(), projective_plane(), p1_x_p1(), hirzebruch(1)] {
            let (cl, lin) = setup(&fan);
            let ring = quantum_ring(&fan, &cl, &lin, None).unwrap();
            let classical = groebner(&sr_ideal(&fan, &cl, &lin));
            let limit = groebner(&Ideal::new(cl.pic_rank(), ring.classical_limit(), MonomialOrder::GrevLex));
            assert_eq!(limit, classical);
        }
    }

    #[test]
    fn checker_detects_perturbation() {
        let fan = hirzebruch(1);
        let (cl, lin) = setup(&fan);
        let qsr = qsr_generators(&fan, &cl, &lin).unwrap();
        let beta = cl.curve_from_d(&[0, 0, 1, 1]).unwrap();
        let rel = &qsr[0].relation;
        let anchor = cl.find_anchor(&[beta.clone(), &beta + &rel.beta], 10).unwrap();
        let mut e = qc_exponents(&cl, rel, &beta, &anchor).unwrap();
        assert!(e.holds());
        e.lhs[0] += 1;
        assert!(!e.holds());
        assert!(verify_qc_polynomial(&cl, &lin, &qsr[0], &beta, &anchor).unwrap());
    }

    #[test]
    fn verify_small_grid() {
        let fan = hirzebruch(1);
        let (cl, lin) = setup(&fan);
        let opts = VerifyOptions { grid: 3, anchor_bound: 10, polynomial: true, correlator: true };
        let cases = verify_all(&fan, &cl, &lin, opts, None).unwrap();
        assert!(!cases.is_empty());
        assert!(cases.iter().all(GridCase::passed), "{cases:?}");
    }

    #[test]
    fn parsing_symbols() {
        let fan = hirzebruch(2);
        let (cl, _) = setup(&fan);
        let n = parse_novikov(&cl, "D1*D2 - q1*D3^2").unwrap();
        assert_eq!(n.classical_part(), &cl.divisor_polynomial(0) * &cl.divisor_polynomial(1));
        assert_eq!(n.coefficient(&cl.mori_generators()[0]), -&cl.divisor_polynomial(2).pow(2));
        assert!(parse_novikov(&cl, "D5").is_err());
        assert!(parse_w(&cl, "q1").is_err());
    }
}
