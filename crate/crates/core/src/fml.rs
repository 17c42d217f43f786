//! Sets of locally nilpotent derivations: common fixed elements, bounded
//! kernel intersections, scalar extension, and the end-to-end embedding
//! pipeline.

use thiserror::Error;

use crate::derivation::{monomials_up_to, Derivation, DerivationError, DEFAULT_DEGREE_BOUND};
use crate::embedding::{build_psi, sample_and_test, EmbeddingError, EmbeddingMap, LocusCertificate, Method, PointSpec, SampleReport};
use crate::field::{Field, Value};
use crate::ideal::{IdealError, RingPresentation};
use crate::poly::{MonomialOrder, Poly};

/// Largest monomial basis accepted by the bounded kernel search.
pub const MAX_KERNEL_BASIS: usize = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FmlError {
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error("the derivation set is empty")]
    Empty,
    #[error("derivation `{0}` lives on a different ring")]
    RingMismatch(String),
    #[error("derivation `{0}` is neither certified nor asserted locally nilpotent")]
    NotLocallyNilpotent(String),
    #[error("internal disagreement on `{element}` under `{derivation}`: D(b) = 0 is {direct}, exp fixes b is {via_exp}")]
    InternalDisagreement { derivation: String, element: String, direct: bool, via_exp: bool },
    #[error("monomial basis of size {0} exceeds the search limit")]
    ResourceExceeded(usize),
}

impl From<DerivationError> for FmlError {
    fn from(e: DerivationError) -> Self {
        FmlError::Embedding(e.into())
    }
}

impl From<IdealError> for FmlError {
    fn from(e: IdealError) -> Self {
        FmlError::Embedding(e.into())
    }
}

/// A named family `Delta` of locally nilpotent derivations of one ring.
#[derive(Clone, Debug)]
pub struct DerivationSet {
    ring: RingPresentation,
    derivations: Vec<Derivation>,
    trivial_fixed_field_asserted: bool,
}

impl DerivationSet {
    pub fn new(ring: &RingPresentation, derivations: Vec<Derivation>) -> Result<Self, FmlError> {
        if derivations.is_empty() {
            return Err(FmlError::Empty);
        }
        for d in &derivations {
            if d.ring().ring() != ring.ring() {
                return Err(FmlError::RingMismatch(d.name().to_string()));
            }
            if !d.status().is_lnd() {
                return Err(FmlError::NotLocallyNilpotent(d.name().to_string()));
            }
        }
        Ok(DerivationSet { ring: ring.clone(), derivations, trivial_fixed_field_asserted: false })
    }

    /// Records the user's claim that the common fixed field is the base field.
    pub fn assert_trivial_fixed_field(mut self) -> Self {
        self.trivial_fixed_field_asserted = true;
        self
    }

    pub fn trivial_fixed_field_asserted(&self) -> bool {
        self.trivial_fixed_field_asserted
    }

    pub fn ring(&self) -> &RingPresentation {
        &self.ring
    }

    pub fn derivations(&self) -> &[Derivation] {
        &self.derivations
    }

    /// `D(b) = 0` for every member, cross-checked against `exp(T D)(b) = b`.
    pub fn fixed_by_all(&self, b: &Poly, bound: u32) -> Result<bool, FmlError> {
        let mut all = true;
        for d in &self.derivations {
            let direct = d.apply(b)?.is_zero();
            let via_exp = d.fixed_by_exp(b, bound)?;
            if direct != via_exp {
                return Err(FmlError::InternalDisagreement {
                    derivation: d.name().to_string(),
                    element: b.to_string(),
                    direct,
                    via_exp,
                });
            }
            all &= direct;
        }
        Ok(all)
    }

    /// Basis of the common kernel among normal forms spanned by standard
    /// monomials of total degree `<= degree_bound`.
    pub fn kernel_intersection_bounded(&self, degree_bound: u32) -> Result<Vec<Poly>, FmlError> {
        let b = &self.ring;
        let k = b.field().clone();
        let lms = b.ideal().groebner(&MonomialOrder::grevlex())?.leading_monomials();
        let basis: Vec<Vec<u32>> = monomials_up_to(b.nvars(), degree_bound)
            .into_iter()
            .filter(|m| !lms.iter().any(|lm| lm.iter().zip(m).all(|(a, e)| a <= e)))
            .collect();
        if basis.len() > MAX_KERNEL_BASIS {
            return Err(FmlError::ResourceExceeded(basis.len()));
        }
        let elems: Vec<Poly> = basis.iter().map(|m| b.ring().monomial(m.clone(), k.one())).collect();
        // rows: (derivation, monomial of the image); columns: basis elements
        let mut row_keys: Vec<(usize, Vec<u32>)> = Vec::new();
        let mut entries: Vec<Vec<(usize, Value)>> = vec![Vec::new(); elems.len()];
        for (di, d) in self.derivations.iter().enumerate() {
            for (col, e) in elems.iter().enumerate() {
                for (m, c) in d.apply(e)?.terms() {
                    let key = (di, m.clone());
                    let row = match row_keys.iter().position(|r| *r == key) {
                        Some(r) => r,
                        None => {
                            row_keys.push(key);
                            row_keys.len() - 1
                        }
                    };
                    entries[col].push((row, c.clone()));
                }
            }
        }
        let mut matrix = vec![vec![k.zero(); elems.len()]; row_keys.len()];
        for (col, es) in entries.into_iter().enumerate() {
            for (row, c) in es {
                matrix[row][col] = c;
            }
        }
        let null = nullspace(&k, matrix, elems.len());
        Ok(null
            .into_iter()
            .map(|v| {
                let mut acc = b.ring().zero();
                for (c, e) in v.iter().zip(&elems) {
                    if !k.is_zero(c) {
                        acc = &acc + &e.scale(c);
                    }
                }
                acc
            })
            .collect())
    }

    /// Every member extended to `L ⊗ B`.
    pub fn base_change(&self, field: &Field) -> Result<DerivationSet, FmlError> {
        let ring = self.ring.base_change(field)?;
        let derivations = self.derivations.iter().map(|d| d.base_change(field)).collect::<Result<Vec<_>, _>>()?;
        Ok(DerivationSet { ring, derivations, trivial_fixed_field_asserted: self.trivial_fixed_field_asserted })
    }
}

/// Basis of `{v : M v = 0}` from the reduced row echelon form, one vector
/// per free column in increasing column order.
pub(crate) fn nullspace(k: &Field, mut m: Vec<Vec<Value>>, cols: usize) -> Vec<Vec<Value>> {
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..m.len()).find(|&r| !k.is_zero(&m[r][col])) else {
            continue;
        };
        m.swap(row, p);
        let inv = k.inv(&m[row][col]).expect("nonzero pivot");
        for x in &mut m[row][col..cols] {
            *x = k.mul(x, &inv);
        }
        let pivot_row = m[row].clone();
        for (r, line) in m.iter_mut().enumerate() {
            if r != row && !k.is_zero(&line[col]) {
                let f = line[col].clone();
                for (x, y) in line[col..cols].iter_mut().zip(&pivot_row[col..cols]) {
                    *x = k.sub(x, &k.mul(&f, y));
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let mut out = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![k.zero(); cols];
        v[free] = k.one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = k.neg(&m[r][free]);
        }
        out.push(v);
    }
    out
}

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Largest number of repetitions of `Delta` tried for the sequence.
    pub max_repeat: usize,
    pub degree_bound: u32,
    pub trials: usize,
    pub seed: u64,
    pub method: Method,
    pub points: Vec<PointSpec>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            max_repeat: 3,
            degree_bound: DEFAULT_DEGREE_BOUND,
            trials: 20,
            seed: 0,
            method: Method::Both,
            points: Vec::new(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PipelineReport {
    /// Repetitions of `Delta` in the chosen sequence.
    pub repeat: usize,
    /// `(repetitions, generic Jacobian rank)` for every attempt.
    pub attempts: Vec<(usize, usize)>,
    pub dimension: usize,
    /// Length of the sequence, i.e. the number of target variables before
    /// reduction.
    pub sequence_length: usize,
    pub psi: EmbeddingMap,
    /// The map after reduction to `dim B` target variables.
    pub reduced: EmbeddingMap,
    pub certificate: LocusCertificate,
    pub samples: SampleReport,
}

/// Sequence choice, generic injectivity, target reduction, certificate,
/// and point sampling.
pub fn fml_pipeline(delta: &DerivationSet, config: &PipelineConfig) -> Result<PipelineReport, FmlError> {
    let b = delta.ring();
    let dim = b.dimension()?;
    let mut attempts = Vec::new();
    let mut chosen = None;
    for r in 1..=config.max_repeat.max(1) {
        let seq: Vec<Derivation> = (0..r).flat_map(|_| delta.derivations().iter().cloned()).collect();
        let psi = build_psi(b, &seq, config.degree_bound)?;
        let rank = psi.generic_rank()?;
        attempts.push((r, rank));
        if rank >= dim {
            chosen = Some((r, psi));
            break;
        }
    }
    let Some((repeat, psi)) = chosen else {
        let rank = attempts.last().map(|a| a.1).unwrap_or(0);
        return Err(EmbeddingError::GenericNotInjective { rank, dim }.into());
    };
    let reduced = psi.reduce_targets(config.trials, config.seed)?;
    let certificate = reduced.certify_open_locus()?;
    let samples = sample_and_test(&reduced, &config.points, config.method, Some(&certificate))?;
    Ok(PipelineReport {
        repeat,
        attempts,
        dimension: dim,
        sequence_length: psi.ntargets(),
        psi,
        reduced,
        certificate,
        samples,
    })
}
