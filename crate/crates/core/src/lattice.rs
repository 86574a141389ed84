//! The Mukai lattice of a K3 surface.
//!
//! A [`MukaiVector`] is a triple `(r, D, n)` with `D` a coordinate vector in an
//! H² quadratic space. The pairing is `(x, y) = D·D' - r n' - r' n`, so the
//! degree-0 and degree-4 parts form a hyperbolic plane with a sign flip. By
//! default H² is the K3 lattice `U^3 ⊕ E8(-1)^2`.
//!
//! Besides the pairing this module provides the exact span computations used
//! by the universality argument: Gram ranks, the reduction of a list of
//! classes to one with non‑degenerate span and the same pairing matrix, and
//! isometries between spans with equal Gram matrices.

use crate::linalg::{self, Matrix};
use crate::rational::{rat, serde_str, Rational};
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::sync::{Arc, OnceLock};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LatticeError {
    #[error("vectors live in different quadratic spaces")]
    SpaceMismatch,
    #[error("expected an H² vector of length {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("Gram matrix must be square and symmetric")]
    NotSymmetric,
    #[error("Mukai vector has square {square}, need at least 2")]
    DegenerateMukaiVector { square: Rational },
    #[error("the two lists have different Gram matrices")]
    GramMismatch,
    #[error("span is degenerate")]
    DegenerateSpan,
    #[error("vector is not in the source span")]
    NotInSpan,
}

/// Finite-dimensional rational vector space with a symmetric bilinear form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticSpace {
    gram: Matrix,
}

impl QuadraticSpace {
    pub fn new(gram: Matrix) -> Result<Self, LatticeError> {
        if gram.is_empty() || !linalg::is_symmetric(&gram) {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(QuadraticSpace { gram })
    }

    /// H²(S, ℤ) of a K3 surface: `U^3 ⊕ E8(-1)^2`, even unimodular of
    /// signature (3, 19). The instance is shared.
    pub fn k3() -> Arc<QuadraticSpace> {
        static K3: OnceLock<Arc<QuadraticSpace>> = OnceLock::new();
        K3.get_or_init(|| Arc::new(build_k3())).clone()
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn inner(&self, a: &[Rational], b: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() && !self.gram[i][j].is_zero() {
                    acc += ai * &self.gram[i][j] * bj;
                }
            }
        }
        acc
    }

    pub fn is_k3(&self) -> bool {
        *self == *QuadraticSpace::k3()
    }

    /// Gram matrix of the full Mukai space in (rank, c1, v2) coordinates.
    pub fn mukai_gram(&self) -> Matrix {
        let d = self.dim();
        let mut m = linalg::zeros(d + 2, d + 2);
        m[0][d + 1] = rat(-1);
        m[d + 1][0] = rat(-1);
        for i in 0..d {
            for j in 0..d {
                m[i + 1][j + 1] = self.gram[i][j].clone();
            }
        }
        m
    }
}

/// Cartan matrix of E8, negated. Nodes 0..6 form a chain and node 7 hangs
/// off node 4.
fn e8_negative() -> Matrix {
    let edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (4, 7)];
    let mut m = linalg::zeros(8, 8);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = rat(-2);
    }
    for &(a, b) in &edges {
        m[a][b] = rat(1);
        m[b][a] = rat(1);
    }
    m
}

fn build_k3() -> QuadraticSpace {
    let mut gram = linalg::zeros(22, 22);
    for k in 0..3 {
        gram[2 * k][2 * k + 1] = rat(1);
        gram[2 * k + 1][2 * k] = rat(1);
    }
    let e8 = e8_negative();
    for block in 0..2 {
        let off = 6 + 8 * block;
        for i in 0..8 {
            for j in 0..8 {
                gram[off + i][off + j] = e8[i][j].clone();
            }
        }
    }
    QuadraticSpace { gram }
}

fn same_space(a: &Arc<QuadraticSpace>, b: &Arc<QuadraticSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// An element `(r, D, n)` of the Mukai lattice, tensored with ℚ.
#[derive(Clone)]
pub struct MukaiVector {
    pub rank: Rational,
    pub c1: Vec<Rational>,
    pub v2: Rational,
    space: Arc<QuadraticSpace>,
}

impl MukaiVector {
    pub fn new(
        rank: Rational,
        c1: Vec<Rational>,
        v2: Rational,
        space: Arc<QuadraticSpace>,
    ) -> Result<Self, LatticeError> {
        if c1.len() != space.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: space.dim(),
                found: c1.len(),
            });
        }
        Ok(MukaiVector { rank, c1, v2, space })
    }

    pub fn zero(space: Arc<QuadraticSpace>) -> Self {
        let d = space.dim();
        MukaiVector {
            rank: Rational::zero(),
            c1: vec![Rational::zero(); d],
            v2: Rational::zero(),
            space,
        }
    }

    /// The class `p` of a point, `(0, 0, 1)`.
    pub fn point(space: Arc<QuadraticSpace>) -> Self {
        let mut p = Self::zero(space);
        p.v2 = Rational::one();
        p
    }

    /// Mukai vector of the Hilbert scheme of `n` points, `(1, 0, 1 - n)`.
    pub fn hilbert_scheme(n: i64, space: Arc<QuadraticSpace>) -> Self {
        let mut v = Self::zero(space);
        v.rank = Rational::one();
        v.v2 = rat(1 - n);
        v
    }

    /// `v(E) = ch(E) √td_S` with `√td_S = 1 + p`, i.e. `(r, c1, r + c1²/2 - c2)`.
    pub fn from_chern(
        rank: Rational,
        c1: Vec<Rational>,
        c2: Rational,
        space: Arc<QuadraticSpace>,
    ) -> Result<Self, LatticeError> {
        if c1.len() != space.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: space.dim(),
                found: c1.len(),
            });
        }
        let c1sq = space.inner(&c1, &c1);
        let v2 = &rank + c1sq / rat(2) - c2;
        Ok(MukaiVector { rank, c1, v2, space })
    }

    /// Inverse of [`MukaiVector::coordinates`].
    pub fn from_coordinates(coords: &[Rational], space: Arc<QuadraticSpace>) -> Self {
        let d = space.dim();
        assert_eq!(coords.len(), d + 2, "coordinate vector has wrong length");
        MukaiVector {
            rank: coords[0].clone(),
            c1: coords[1..=d].to_vec(),
            v2: coords[d + 1].clone(),
            space,
        }
    }

    pub fn space(&self) -> &Arc<QuadraticSpace> {
        &self.space
    }

    /// Flat `(rank, c1..., v2)` coordinates.
    pub fn coordinates(&self) -> Vec<Rational> {
        let mut out = Vec::with_capacity(self.c1.len() + 2);
        out.push(self.rank.clone());
        out.extend(self.c1.iter().cloned());
        out.push(self.v2.clone());
        out
    }

    pub fn pair(&self, other: &MukaiVector) -> Result<Rational, LatticeError> {
        if !same_space(&self.space, &other.space) {
            return Err(LatticeError::SpaceMismatch);
        }
        Ok(self.space.inner(&self.c1, &other.c1) - &self.rank * &other.v2 - &other.rank * &self.v2)
    }

    pub fn square(&self) -> Rational {
        self.pair(self).expect("a vector shares its own space")
    }

    /// Dual class `(r, -D, n)`.
    pub fn dual(&self) -> Self {
        MukaiVector {
            rank: self.rank.clone(),
            c1: self.c1.iter().map(|c| -c).collect(),
            v2: self.v2.clone(),
            space: self.space.clone(),
        }
    }

    /// Cup product with `exp(c)` for an H² class `c`:
    /// `(r, D + r c, n + D·c + r c²/2)`.
    pub fn times_exp(&self, c: &[Rational]) -> Result<Self, LatticeError> {
        if c.len() != self.space.dim() {
            return Err(LatticeError::DimensionMismatch {
                expected: self.space.dim(),
                found: c.len(),
            });
        }
        let csq = self.space.inner(c, c);
        let dc = self.space.inner(&self.c1, c);
        Ok(MukaiVector {
            rank: self.rank.clone(),
            c1: self.c1.iter().zip(c).map(|(d, x)| d + &self.rank * x).collect(),
            v2: &self.v2 + dc + &self.rank * csq / rat(2),
            space: self.space.clone(),
        })
    }

    pub fn scale(&self, k: &Rational) -> Self {
        MukaiVector {
            rank: &self.rank * k,
            c1: self.c1.iter().map(|c| c * k).collect(),
            v2: &self.v2 * k,
            space: self.space.clone(),
        }
    }

    pub fn add(&self, other: &MukaiVector) -> Result<Self, LatticeError> {
        if !same_space(&self.space, &other.space) {
            return Err(LatticeError::SpaceMismatch);
        }
        Ok(MukaiVector {
            rank: &self.rank + &other.rank,
            c1: self.c1.iter().zip(&other.c1).map(|(a, b)| a + b).collect(),
            v2: &self.v2 + &other.v2,
            space: self.space.clone(),
        })
    }

    pub fn sub(&self, other: &MukaiVector) -> Result<Self, LatticeError> {
        self.add(&other.scale(&rat(-1)))
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero() && self.v2.is_zero() && self.c1.iter().all(Zero::is_zero)
    }
}

impl PartialEq for MukaiVector {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space)
            && self.rank == other.rank
            && self.c1 == other.c1
            && self.v2 == other.v2
    }
}

impl fmt::Debug for MukaiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c1: Vec<String> = self.c1.iter().map(|c| c.to_string()).collect();
        write!(f, "({}, [{}], {})", self.rank, c1.join(", "), self.v2)
    }
}

pub fn mukai_pairing(x: &MukaiVector, y: &MukaiVector) -> Result<Rational, LatticeError> {
    x.pair(y)
}

fn common_space(xs: &[&MukaiVector]) -> Result<(), LatticeError> {
    if let Some(first) = xs.first() {
        if xs.iter().any(|x| !same_space(first.space(), x.space())) {
            return Err(LatticeError::SpaceMismatch);
        }
    }
    Ok(())
}

/// Matrix of pairwise Mukai pairings.
pub fn gram_matrix(xs: &[MukaiVector]) -> Result<Matrix, LatticeError> {
    common_space(&xs.iter().collect::<Vec<_>>())?;
    let k = xs.len();
    let mut g = linalg::zeros(k, k);
    for i in 0..k {
        for j in i..k {
            let p = xs[i].pair(&xs[j])?;
            g[j][i] = p.clone();
            g[i][j] = p;
        }
    }
    Ok(g)
}

/// Exact rank of a Gram matrix.
pub fn gram_rank(g: &[Vec<Rational>]) -> usize {
    linalg::rank(g)
}

/// Dimension of the linear span of `xs`.
pub fn span_dimension(xs: &[MukaiVector]) -> usize {
    let coords: Matrix = xs.iter().map(MukaiVector::coordinates).collect();
    linalg::rank(&coords)
}

/// Whether the pairing restricted to `Span(xs)` is non-degenerate.
pub fn is_nondegenerate_span(xs: &[MukaiVector]) -> Result<bool, LatticeError> {
    let coords: Matrix = xs.iter().map(MukaiVector::coordinates).collect();
    let basis: Vec<MukaiVector> = linalg::independent_subset(&coords)
        .into_iter()
        .map(|i| xs[i].clone())
        .collect();
    let g = gram_matrix(&basis)?;
    Ok(linalg::rank(&g) == basis.len())
}

/// Pairing matrix of `v` followed by `xs`; row and column 0 belong to `v`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FingerprintMatrix(#[serde(with = "serde_str::matrix")] Matrix);

impl FingerprintMatrix {
    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Number of classes besides `v`.
    pub fn len(&self) -> usize {
        self.0.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `dim M = v·v + 2`.
    pub fn moduli_dimension(&self) -> Rational {
        &self.0[0][0] + rat(2)
    }
}

pub fn fingerprint(v: &MukaiVector, xs: &[MukaiVector]) -> Result<FingerprintMatrix, LatticeError> {
    let mut all = Vec::with_capacity(xs.len() + 1);
    all.push(v.clone());
    all.extend(xs.iter().cloned());
    Ok(FingerprintMatrix(gram_matrix(&all)?))
}

/// Replace `xs` by classes with the same fingerprint against `v` whose span
/// together with `v` is non-degenerate.
///
/// While `L = Span(v, xs)` has a nonzero radical vector `w`, extend `{w, v}`
/// to a basis of `L`, write each `x_i = λ_i w + (rest)` and subtract `λ_i w`.
/// The span loses a dimension each round. The radical vector is the first
/// kernel vector from exact elimination, so the output is deterministic.
pub fn nondegenerate_reduction(
    v: &MukaiVector,
    xs: &[MukaiVector],
) -> Result<Vec<MukaiVector>, LatticeError> {
    common_space(&std::iter::once(v).chain(xs).collect::<Vec<_>>())?;
    let square = v.square();
    if square < rat(2) {
        return Err(LatticeError::DegenerateMukaiVector { square });
    }
    let space = v.space().clone();
    let mut ys: Vec<MukaiVector> = xs.to_vec();
    loop {
        let coords: Matrix = std::iter::once(v)
            .chain(&ys)
            .map(MukaiVector::coordinates)
            .collect();
        let basis: Matrix = linalg::independent_subset(&coords)
            .into_iter()
            .map(|i| coords[i].clone())
            .collect();
        let basis_vectors: Vec<MukaiVector> = basis
            .iter()
            .map(|c| MukaiVector::from_coordinates(c, space.clone()))
            .collect();
        let g = gram_matrix(&basis_vectors)?;
        let Some(radical) = linalg::kernel(&g, basis.len()).into_iter().next() else {
            return Ok(ys);
        };
        let mut w = vec![Rational::zero(); space.dim() + 2];
        for (c, b) in radical.iter().zip(&basis) {
            for (wi, bi) in w.iter_mut().zip(b) {
                *wi += c * bi;
            }
        }
        // w is orthogonal to v and v·v != 0, so {w, v} is independent.
        let mut candidates: Matrix = vec![w.clone(), coords[0].clone()];
        candidates.extend(basis.iter().cloned());
        let adapted: Matrix = linalg::independent_subset(&candidates)
            .into_iter()
            .map(|i| candidates[i].clone())
            .collect();
        debug_assert_eq!(adapted.len(), basis.len());
        let w_vec = MukaiVector::from_coordinates(&w, space.clone());
        for y in ys.iter_mut() {
            let c = linalg::combination(&adapted, &y.coordinates())
                .expect("every class lies in the span");
            if !c[0].is_zero() {
                *y = y.sub(&w_vec.scale(&c[0]))?;
            }
        }
    }
}

/// Linear map `Span(vs) → Span(ws)` sending `v_i ↦ w_i`, built from a basis
/// `v_a` of the source and the inverse Gram block:
/// `φ(x) = Σ ⟨x, v_a⟩ (G⁻¹)_{ab} w_b`.
#[derive(Debug, Clone)]
pub struct SpanIsometry {
    basis_indices: Vec<usize>,
    source_basis: Vec<MukaiVector>,
    target_basis: Vec<MukaiVector>,
    gram_inverse: Matrix,
}

impl SpanIsometry {
    /// Positions in the source list that form the chosen basis.
    pub fn basis_indices(&self) -> &[usize] {
        &self.basis_indices
    }

    pub fn dimension(&self) -> usize {
        self.source_basis.len()
    }

    /// Coefficients of `x` in the source basis, read off from pairings.
    fn dual_coefficients(&self, x: &MukaiVector) -> Result<Vec<Rational>, LatticeError> {
        let pairings = self
            .source_basis
            .iter()
            .map(|b| x.pair(b))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(linalg::mat_vec(&self.gram_inverse, &pairings))
    }

    fn combine(basis: &[MukaiVector], coeffs: &[Rational]) -> Result<MukaiVector, LatticeError> {
        let mut acc = MukaiVector::zero(basis[0].space().clone());
        for (b, c) in basis.iter().zip(coeffs) {
            acc = acc.add(&b.scale(c))?;
        }
        Ok(acc)
    }

    /// Image of `x`, which must lie in the source span.
    pub fn apply(&self, x: &MukaiVector) -> Result<MukaiVector, LatticeError> {
        if self.source_basis.is_empty() {
            return if x.is_zero() {
                Ok(x.clone())
            } else {
                Err(LatticeError::NotInSpan)
            };
        }
        let coeffs = self.dual_coefficients(x)?;
        if Self::combine(&self.source_basis, &coeffs)? != *x {
            return Err(LatticeError::NotInSpan);
        }
        Self::combine(&self.target_basis, &coeffs)
    }
}

pub fn span_isometry(
    vs: &[MukaiVector],
    ws: &[MukaiVector],
) -> Result<SpanIsometry, LatticeError> {
    if vs.len() != ws.len() || gram_matrix(vs)? != gram_matrix(ws)? {
        return Err(LatticeError::GramMismatch);
    }
    if !is_nondegenerate_span(vs)? || !is_nondegenerate_span(ws)? {
        return Err(LatticeError::DegenerateSpan);
    }
    let coords: Matrix = vs.iter().map(MukaiVector::coordinates).collect();
    let basis_indices = linalg::independent_subset(&coords);
    let source_basis: Vec<MukaiVector> = basis_indices.iter().map(|&i| vs[i].clone()).collect();
    let target_basis: Vec<MukaiVector> = basis_indices.iter().map(|&i| ws[i].clone()).collect();
    let g = gram_matrix(&source_basis)?;
    let gram_inverse = linalg::inverse(&g).ok_or(LatticeError::DegenerateSpan)?;
    let map = SpanIsometry {
        basis_indices,
        source_basis,
        target_basis,
        gram_inverse,
    };
    // The non-basis vectors are determined by their pairings; check that
    // they land on the prescribed targets.
    for (v, w) in vs.iter().zip(ws) {
        if map.apply(v)? != *w {
            return Err(LatticeError::GramMismatch);
        }
    }
    Ok(map)
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SpaceRepr {
    Named(String),
    Gram {
        #[serde(with = "serde_str::matrix")]
        gram: Matrix,
    },
}

impl SpaceRepr {
    fn k3() -> Self {
        SpaceRepr::Named("k3".to_string())
    }
}

#[derive(Serialize, Deserialize)]
struct MukaiRepr {
    #[serde(with = "serde_str")]
    rank: Rational,
    #[serde(with = "serde_str::vec")]
    c1: Vec<Rational>,
    #[serde(with = "serde_str")]
    v2: Rational,
    #[serde(default = "SpaceRepr::k3")]
    space: SpaceRepr,
}

impl Serialize for MukaiVector {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let space = if self.space.is_k3() {
            SpaceRepr::Named("k3".to_string())
        } else {
            SpaceRepr::Gram {
                gram: self.space.gram.clone(),
            }
        };
        MukaiRepr {
            rank: self.rank.clone(),
            c1: self.c1.clone(),
            v2: self.v2.clone(),
            space,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MukaiVector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let repr = MukaiRepr::deserialize(d)?;
        let space = match repr.space {
            SpaceRepr::Named(name) if name == "k3" => QuadraticSpace::k3(),
            SpaceRepr::Named(name) => {
                return Err(D::Error::custom(format!("unknown quadratic space {name:?}")))
            }
            SpaceRepr::Gram { gram } => {
                Arc::new(QuadraticSpace::new(gram).map_err(D::Error::custom)?)
            }
        };
        MukaiVector::new(repr.rank, repr.c1, repr.v2, space).map_err(D::Error::custom)
    }
}
