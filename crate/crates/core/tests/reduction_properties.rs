use k3sv::lattice::fingerprint;
use k3sv::rational::{rat, Rational};
use k3sv::reduction::{
    dependence_pairings, dim2_evaluate, hilbert_pairings, reduce_to_hilbert, segre_cross_check,
};
use k3sv::segre_verlinde::{segre_number, SegreParams};
use k3sv::{KClassInvariants, ModuliData, MukaiVector, QuadraticSpace};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn moduli_data() -> impl Strategy<Value = ModuliData> {
    (1u32..=5, 1u32..=6, -10i64..=10, -5i64..=5, -10i64..=10, -10i64..=10, -10i64..=10, -10i64..=10)
        .prop_map(|(rho, n, rank, half_c1sq, c1l, v2, l_sq, u)| {
            ModuliData::new(
                rho,
                n,
                KClassInvariants::from_ints(rank, 2 * half_c1sq, c1l, v2),
                rat(l_sq),
                rat(u),
            )
            .unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn pairings_survive_reduction(m in moduli_data()) {
        let target = reduce_to_hilbert(&m).unwrap();
        prop_assert_eq!(hilbert_pairings(&target), dependence_pairings(&m).unwrap());
        prop_assert_eq!(&target.u_prime, &(&m.u * rat(m.rho as i64)));
    }
}

fn random_h2<R: Rng>(rng: &mut R) -> Vec<Rational> {
    (0..22).map(|_| rat(rng.gen_range(-2..=2))).collect()
}

/// Realize both five-class lists with explicit lattice vectors and compare
/// their pairing matrices, and the formula-level pairings, entry by entry.
#[test]
fn explicit_classes_reproduce_pairing_formulas() {
    let k3 = QuadraticSpace::k3();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for _ in 0..60 {
        let rho = rng.gen_range(1..=4i64);
        let n = rng.gen_range(1..=6i64);
        let dv = random_h2(&mut rng);
        let dv_sq = k3.inner(&dv, &dv);
        // Choose v2(v) so that v·v = 2n - 2.
        let v2v = (dv_sq - rat(2 * n - 2)) / rat(2 * rho);
        let v = MukaiVector::new(rat(rho), dv.clone(), v2v, k3.clone()).unwrap();
        assert_eq!(v.square(), rat(2 * n - 2));

        let da = random_h2(&mut rng);
        let alpha = MukaiVector::new(rat(rng.gen_range(-5..=5)), da.clone(), rat(rng.gen_range(-5..=5)), k3.clone())
            .unwrap();
        let l = random_h2(&mut rng);
        let u = rat(rng.gen_range(-4..=4));

        let shift: Vec<Rational> = dv.iter().map(|x| x / rat(rho)).collect();
        let p = MukaiVector::point(k3.clone());
        let alpha_prime = alpha.dual().times_exp(&shift).unwrap();
        let l_class = MukaiVector::new(rat(0), l.clone(), rat(0), k3.clone()).unwrap();
        let l_prime = l_class.times_exp(&shift).unwrap();
        let p_rho = p.scale(&(rat(1) / rat(rho)));

        let m = ModuliData::new(
            rho as u32,
            n as u32,
            KClassInvariants::new(alpha.rank.clone(), k3.inner(&da, &da), k3.inner(&da, &l), alpha.v2.clone()),
            k3.inner(&l, &l),
            u.clone(),
        )
        .unwrap();
        let formulas = dependence_pairings(&m).unwrap();
        assert_eq!(v.pair(&alpha_prime).unwrap(), formulas.v_alpha);
        assert_eq!(p_rho.pair(&alpha_prime).unwrap(), formulas.p_alpha);
        assert_eq!(alpha_prime.square(), formulas.alpha_alpha);
        assert_eq!(alpha_prime.square(), alpha.square());
        assert_eq!(
            vec![
                v.pair(&l_prime).unwrap(),
                alpha_prime.pair(&l_prime).unwrap(),
                l_prime.square()
            ],
            formulas.l_pairings
        );
        let up = p.scale(&u);
        let u_direct: Vec<Rational> = [&v, &p_rho, &alpha_prime, &l_prime]
            .iter()
            .map(|c| up.pair(c).unwrap())
            .collect();
        assert_eq!(u_direct, formulas.u_pairings);

        // Hilbert side with c1(β) = c1(α).
        let target = reduce_to_hilbert(&m).unwrap();
        let beta = MukaiVector::new(target.beta.rank.clone(), da.clone(), target.beta.v2.clone(), k3.clone()).unwrap();
        let vh = MukaiVector::hilbert_scheme(n, k3.clone());
        let m_side = fingerprint(&v, &[p_rho, alpha_prime, l_prime, up]).unwrap();
        let h_side = fingerprint(&vh, &[p.clone(), beta.dual(), l_class, p.scale(&target.u_prime)]).unwrap();
        assert_eq!(m_side, h_side);
    }
}

#[test]
fn segre_at_n_one_is_the_closed_form() {
    for rho in 1..=4u32 {
        for s in -2..=5 {
            for c2 in [-3, 0, 2] {
                for c1sq in [-4, 0, 6] {
                    assert!(segre_cross_check(rho, s, c2, c1sq).unwrap());
                }
            }
        }
    }
}

#[test]
fn segre_at_n_one_equals_c2_only_for_rank_one() {
    for s in -2..=4 {
        for c2 in -3..=3 {
            let p = SegreParams { rho: 1, s: rat(s), c2, c1sq: 2, n: 1 };
            assert_eq!(segre_number(&p).unwrap(), rat(c2));
        }
    }
    // rho = 2, s = 2, c2 = c1sq = 0: closed form 2/2 - 2 * 2 = -3.
    let p = SegreParams { rho: 2, s: rat(2), c2: 0, c1sq: 0, n: 1 };
    assert_eq!(segre_number(&p).unwrap(), rat(-3));
}

#[test]
fn mukai_square_forms_agree() {
    let k3 = QuadraticSpace::k3();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..50 {
        let d = random_h2(&mut rng);
        let x = MukaiVector::new(rat(rng.gen_range(-6..=6)), d.clone(), rat(rng.gen_range(-6..=6)), k3.clone()).unwrap();
        let inv = KClassInvariants::new(x.rank.clone(), k3.inner(&d, &d), rat(0), x.v2.clone());
        assert_eq!(inv.mukai_square(), x.square());
    }
}

#[test]
fn dim2_uses_hilbert_data() {
    let m = ModuliData::new(3, 1, KClassInvariants::from_ints(6, 4, -2, 1), rat(2), rat(1)).unwrap();
    // rk/ρ - ρ v2 + c1²/2 + c1·L + L²/2 + uρ = 2 - 3 + 2 - 2 + 1 + 3
    assert_eq!(dim2_evaluate(&m).unwrap(), rat(3));
}
