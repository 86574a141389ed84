//! Test-only helpers: a tiny independent polynomial toolkit, random
//! generators, and lattice builders shared by the integration tests.
#![allow(dead_code)]

use k3sv::lattice::{MukaiVector, QuadraticSpace};
use k3sv::rational::{rat, Rational};
use k3sv::TruncatedSeries;
use num_traits::{One, Zero};
use rand::Rng;

/// Dense polynomial truncated after `len` coefficients.
pub type Poly = Vec<Rational>;

pub fn poly_mul(a: &[Rational], b: &[Rational], len: usize) -> Poly {
    let mut out = vec![Rational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Inverse of a polynomial with constant term 1 by the geometric series
/// `1/(1 - e) = sum e^k`.
pub fn poly_inverse_unit(a: &[Rational], len: usize) -> Poly {
    assert!(a[0].is_one());
    let mut e: Poly = a.iter().map(|c| -c).collect();
    e[0] = Rational::zero();
    e.resize(len, Rational::zero());
    let mut total = vec![Rational::zero(); len];
    let mut power = vec![Rational::zero(); len];
    power[0] = Rational::one();
    for _ in 0..len {
        for (t, p) in total.iter_mut().zip(&power) {
            *t += p;
        }
        power = poly_mul(&power, &e, len);
    }
    total
}

pub fn poly_pow(a: &[Rational], k: usize, len: usize) -> Poly {
    let mut out = vec![Rational::zero(); len];
    out[0] = Rational::one();
    for _ in 0..k {
        out = poly_mul(&out, a, len);
    }
    out
}

pub fn poly_derivative(a: &[Rational]) -> Poly {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * rat(k as i64))
        .collect()
}

/// `[z^n] H(t(z))` for the inverse of `z(t) = t u(t)`, `u(0) = 1`, via
/// `(1/n) [t^(n-1)] H'(t) u(t)^(-n)`.
pub fn lagrange_burmann(h: &[Rational], u: &[Rational], n: usize) -> Rational {
    assert!(n >= 1);
    let len = n;
    let u_inv = poly_inverse_unit(u, len);
    let phi_n = poly_pow(&u_inv, n, len);
    let mut dh = poly_derivative(h);
    dh.resize(len, Rational::zero());
    let prod = poly_mul(&dh, &phi_n, len);
    &prod[n - 1] / rat(n as i64)
}

pub fn random_unit_series<R: Rng>(rng: &mut R, order: usize, max: i64) -> TruncatedSeries {
    let mut c: Vec<Rational> = vec![Rational::one()];
    for _ in 0..order {
        c.push(rat(rng.gen_range(-max..=max)));
    }
    TruncatedSeries::from_coeffs(c, order)
}

pub fn random_series<R: Rng>(rng: &mut R, order: usize, max: i64) -> TruncatedSeries {
    let c: Vec<Rational> = (0..=order).map(|_| rat(rng.gen_range(-max..=max))).collect();
    TruncatedSeries::from_coeffs(c, order)
}

pub fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=5).into())
}

/// A K3 ⊕ U Mukai vector from explicit coordinates.
pub fn mukai(rank: i64, c1: &[(usize, i64)], v2: i64) -> MukaiVector {
    let mut d = vec![Rational::zero(); 22];
    for &(i, x) in c1 {
        d[i] = rat(x);
    }
    MukaiVector::new(rat(rank), d, rat(v2), QuadraticSpace::k3()).unwrap()
}

pub fn random_mukai<R: Rng>(rng: &mut R, max: i64) -> MukaiVector {
    let coords: Vec<Rational> = (0..24).map(|_| rat(rng.gen_range(-max..=max))).collect();
    MukaiVector::from_coordinates(&coords, QuadraticSpace::k3())
}

/// Mutually orthogonal classes of nonzero square. Any subset spans a
/// non-degenerate subspace.
pub fn orthogonal_anisotropic() -> Vec<MukaiVector> {
    let mut out = vec![mukai(1, &[], -1), mukai(1, &[], 1)];
    for k in 0..3 {
        out.push(mukai(0, &[(2 * k, 1), (2 * k + 1, 1)], 0));
        out.push(mukai(0, &[(2 * k, 1), (2 * k + 1, -1)], 0));
    }
    // One simple root in each E8(-1) block.
    out.push(mukai(0, &[(6, 1)], 0));
    out.push(mukai(0, &[(14, 1)], 0));
    out
}

/// The isotropic class `e` of the `k`-th hyperbolic plane in H².
pub fn isotropic(k: usize) -> MukaiVector {
    mukai(0, &[(2 * k, 1)], 0)
}

pub fn combine(vs: &[MukaiVector], coeffs: &[i64]) -> MukaiVector {
    let mut acc = MukaiVector::zero(QuadraticSpace::k3());
    for (v, &c) in vs.iter().zip(coeffs) {
        acc = acc.add(&v.scale(&rat(c))).unwrap();
    }
    acc
}

/// Reflection in an anisotropic class: `x - 2 (x·r)/(r·r) r`.
pub fn reflect(x: &MukaiVector, r: &MukaiVector) -> MukaiVector {
    let k = rat(2) * x.pair(r).unwrap() / r.square();
    x.sub(&r.scale(&k)).unwrap()
}

/// `lagrange_burmann` for every `n` in `1..=max_n`, sharing `u^(-1)` and its
/// powers across `n`.
pub fn lagrange_burmann_all(h: &[Rational], u: &[Rational], max_n: usize) -> Vec<Rational> {
    let len = max_n;
    let u_inv = poly_inverse_unit(u, len);
    let mut dh = poly_derivative(h);
    dh.resize(len, Rational::zero());
    let mut phi_n = vec![Rational::zero(); len];
    phi_n[0] = Rational::one();
    (1..=max_n)
        .map(|n| {
            phi_n = poly_mul(&phi_n, &u_inv, len);
            let c: Rational = (0..n).map(|k| &dh[k] * &phi_n[n - 1 - k]).sum();
            c / rat(n as i64)
        })
        .collect()
}
