use std::collections::HashSet;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rz_lattice::coeff::{make_ring, CoeffRing, RingParams};
use rz_lattice::field::Fe;
use rz_lattice::lattice::{
    colength, intersect, inv, normalize, random_unimodular, random_window_lattice, sum, InvVector, Lattice, Mat,
};
use rz_lattice::Error;

fn ring(p: u32, m: usize, n: u32) -> CoeffRing {
    make_ring(RingParams::new(p, m, n), 0).unwrap()
}

fn diag(r: &CoeffRing, e: &[i32]) -> Lattice {
    Lattice::diagonal(r, e).unwrap()
}

#[test]
fn normalize_examples() {
    let r = ring(2, 2, 6);
    let id: Mat = vec![vec![r.one(), r.zero()], vec![r.zero(), r.one()]];
    assert_eq!(normalize(&r, 0, &id).unwrap(), Lattice::standard(&r, 2));
    let p = r.from_int(2);
    let a = normalize(&r, 0, &vec![vec![p, r.one()], vec![r.zero(), p]]).unwrap();
    let b = normalize(&r, 0, &vec![vec![r.one(), p], vec![p, r.zero()]]).unwrap();
    assert_eq!(a, b);
    assert_eq!(normalize(&r, a.shift(), a.basis()).unwrap(), a);
}

#[test]
fn normalize_is_span_invariant() {
    let r = ring(3, 2, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let l = random_window_lattice(&r, n, &mut rng).unwrap();
        let u = random_unimodular(&r, n, &mut rng);
        let regen = rz_lattice::lattice::mat_mul(&r, l.basis(), &u);
        assert_eq!(normalize(&r, l.shift(), &regen).unwrap(), l);
    }
}

#[test]
fn sum_and_intersection_examples() {
    let r = ring(2, 2, 6);
    let l0 = Lattice::standard(&r, 4);
    let pl0 = l0.scale(1);
    assert_eq!(sum(&r, &pl0, &l0).unwrap(), l0);
    assert_eq!(intersect(&r, &pl0, &l0).unwrap(), pl0);
    let x = diag(&r, &[1, 0, -1, -1]);
    assert_eq!(sum(&r, &x, &x).unwrap(), x);
    assert_eq!(intersect(&r, &x, &x).unwrap(), x);
    assert_eq!(sum(&r, &x, &l0).unwrap(), diag(&r, &[0, 0, -1, -1]));
    assert_eq!(intersect(&r, &x, &l0).unwrap(), diag(&r, &[1, 0, 0, 0]));
    let m0 = intersect(&r, &x, &l0).unwrap();
    assert_eq!(colength(&r, &m0, &l0).unwrap(), 1);
}

#[test]
fn inv_and_colength_examples() {
    let r = ring(2, 2, 6);
    let l = diag(&r, &[1, 0, -1]);
    let l0 = Lattice::standard(&r, 3);
    assert_eq!(inv(&r, &l, &l).unwrap(), InvVector(vec![0, 0, 0]));
    assert_eq!(inv(&r, &l.scale(1), &l).unwrap(), InvVector(vec![1, 1, 1]));
    assert_eq!(inv(&r, &l, &l0).unwrap(), InvVector(vec![1, 0, -1]));
    assert_eq!(colength(&r, &l0.scale(1), &l0).unwrap(), 3);
    assert_eq!(colength(&r, &l, &l).unwrap(), 0);
    assert!(matches!(colength(&r, &l, &l0), Err(Error::NotContained)));
}

#[test]
fn precision_exhaustion_is_reported() {
    let r = ring(2, 2, 4);
    let gens: Mat = vec![vec![r.from_int(4), r.zero()], vec![r.zero(), r.one()]];
    assert!(matches!(normalize(&r, 0, &gens), Err(Error::Precision(_))));
    let scaled = vec![vec![r.from_int(4), r.zero()], vec![r.zero(), r.from_int(4)]];
    assert!(matches!(normalize(&r, 2, &scaled), Err(Error::Precision(_))));
    let mild = vec![vec![r.from_int(2), r.zero()], vec![r.zero(), r.from_int(2)]];
    assert_eq!(normalize(&r, 1, &mild).unwrap(), diag(&r, &[0, 0]));
}

#[test]
fn inv_laws_on_random_window_lattices() {
    let r = ring(3, 2, 6);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..150 {
        let n = rng.gen_range(1..=4);
        let a = random_window_lattice(&r, n, &mut rng).unwrap();
        let b = random_window_lattice(&r, n, &mut rng).unwrap();
        let v = inv(&r, &a, &b).unwrap();
        assert!(v.0.windows(2).all(|w| w[0] >= w[1]));
        assert_eq!(inv(&r, &b, &a).unwrap(), v.swapped());
        let u = random_unimodular(&r, n, &mut rng);
        let (ua, ub) = (a.transform(&r, &u).unwrap(), b.transform(&r, &u).unwrap());
        assert_eq!(inv(&r, &ua, &ub).unwrap(), v);
        let (meet, join) = (intersect(&r, &a, &b).unwrap(), sum(&r, &a, &b).unwrap());
        assert_eq!(colength(&r, &meet, &a).unwrap(), colength(&r, &b, &join).unwrap());
        assert!(rz_lattice::lattice::contains(&r, &a, &meet).unwrap());
        assert!(rz_lattice::lattice::contains(&r, &join, &b).unwrap());
    }
}

/// Brute-force relative position for `pΛ₀ ⊆ L1, L2 ⊆ Λ₀`: the vector sets of
/// the images in `F_q^n` are enumerated and the `±1` multiplicities are read
/// off from set sizes.
fn brute_inv(r: &CoeffRing, n: usize, l1: &Lattice, l2: &Lattice) -> InvVector {
    let fq = r.field();
    let q = fq.size() as usize;
    let span = |l: &Lattice| -> HashSet<Vec<Fe>> {
        let gens: Vec<Vec<Fe>> = l
            .generators_at(r, 0)
            .iter()
            .map(|row| row.iter().map(|&e| r.residue(e)).collect::<Vec<_>>())
            .collect();
        let cols: Vec<Vec<Fe>> = (0..n).map(|j| (0..n).map(|i| gens[i][j]).collect()).collect();
        let mut out = HashSet::new();
        let total = q.pow(n as u32);
        for idx in 0..total {
            let mut t = idx;
            let mut v = vec![0 as Fe; n];
            for c in &cols {
                let coef = (t % q) as Fe;
                t /= q;
                for i in 0..n {
                    v[i] = fq.add(v[i], fq.mul(coef, c[i]));
                }
            }
            out.insert(v);
        }
        out
    };
    let (s1, s2) = (span(l1), span(l2));
    let common = s1.intersection(&s2).count();
    let log = |x: usize| (x as f64).log(q as f64).round() as usize;
    let (d1, d2, d12) = (log(s1.len()), log(s2.len()), log(common));
    InvVector::block(n, d2 - d12, d1 - d12)
}

#[test]
fn inv_matches_brute_force_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (p, m) in [(2u32, 1usize), (2, 2), (3, 1)] {
        let r = ring(p, m, 4);
        for _ in 0..60 {
            let n = rng.gen_range(1..=3);
            let mk = |rng: &mut ChaCha8Rng| {
                let mut gens: Mat = vec![Vec::new(); n];
                for _ in 0..rng.gen_range(0..=n) {
                    for row in gens.iter_mut() {
                        row.push(r.lift(rng.gen_range(0..r.field().size()) as Fe));
                    }
                }
                for (i, row) in gens.iter_mut().enumerate() {
                    for j in 0..n {
                        row.push(if i == j { r.from_int(p as i64) } else { r.zero() });
                    }
                }
                normalize(&r, 0, &gens).unwrap()
            };
            let (a, b) = (mk(&mut rng), mk(&mut rng));
            assert_eq!(inv(&r, &a, &b).unwrap(), brute_inv(&r, n, &a, &b), "p={p} m={m}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent_and_order_free(seed in any::<u64>(), n in 1usize..5) {
        let r = ring(2, 2, 6);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let l = random_window_lattice(&r, n, &mut rng).unwrap();
        prop_assert_eq!(normalize(&r, l.shift(), l.basis()).unwrap(), l.clone());
        let mut rev = l.basis().clone();
        for row in rev.iter_mut() {
            row.reverse();
        }
        prop_assert_eq!(normalize(&r, l.shift(), &rev).unwrap(), l);
    }
}
