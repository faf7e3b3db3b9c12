use std::collections::{BTreeSet, HashSet};

use rz_lattice::field::Fe;
use rz_lattice::lattice::{inv, InvVector, Lattice};
use rz_lattice::moduli::*;
use rz_lattice::subspace::{grassmannian, Subspace};

fn model(p: u32, n: usize) -> Model {
    Model::new(ModelParams::new(p, n, 1)).unwrap()
}

fn diag(m: &Model, e: &[i32]) -> Lattice {
    Lattice::diagonal(m.ring(), e).unwrap()
}

#[test]
fn diagonal_rz_points() {
    let m3 = model(2, 3);
    assert!(is_rz_point(&m3, &diag(&m3, &[0, 0, -1])).unwrap());
    assert!(!is_rz_point(&m3, m3.lambda0()).unwrap());
    assert_eq!(stratum_of(&m3, &diag(&m3, &[0, 0, -1])).unwrap(), 1);
    assert_eq!(m3.dual(&diag(&m3, &[0, 0, -1])).unwrap(), diag(&m3, &[1, 0, 0]));

    let m4 = model(2, 4);
    let x = diag(&m4, &[1, 0, -1, -1]);
    assert!(is_rz_point(&m4, &x).unwrap());
    assert_eq!(stratum_of(&m4, &x).unwrap(), 2);
    let y = mn_from_l(&m4, &x).unwrap();
    assert_eq!(y.m0, diag(&m4, &[1, 0, 0, 0]));
    assert_eq!(y.n0, diag(&m4, &[0, 0, -1, -1]));
    let y1 = mn_from_l(&m4, &diag(&m4, &[0, 0, 0, -1])).unwrap();
    assert_eq!(y1.m0, *m4.lambda0());
    assert_eq!(y1.n0, diag(&m4, &[0, 0, 0, -1]));
}

#[test]
fn diagonal_flag_and_fiber() {
    let m = model(2, 4);
    let x = diag(&m, &[1, 0, -1, -1]);
    let y = mn_from_l(&m, &x).unwrap();
    let flag = dl_flag_from_y(&m, &y).unwrap();
    let fq = m.field();
    let e = |i: usize| {
        let mut v = vec![0 as Fe; 4];
        v[i] = 1;
        v
    };
    // pM0* = span{p y1, p y2, p y3, y4} and pN0 = span{p y1, p y2, y3, y4}.
    assert_eq!(flag.j, Subspace::from_vectors(fq, 4, &[e(3)]));
    assert_eq!(flag.kperp, Subspace::from_vectors(fq, 4, &[e(2), e(3)]));
    assert_eq!(flag.kspace, flag.kperp);
    assert_eq!(flag.jperp, m.pairing().perp(&flag.j));

    let f = fiber_data(&m, &y).unwrap();
    assert_eq!((f.dim(), f.v1.dim(), f.vk.dim()), (3, 1, 2));
    assert!(beta_properties(&m, &f).all());
    // M0* = span{y1, y2, y3, p^{-1} y4}, N0* = span{p y1, p y2, y3, y4}:
    // V has representatives y1, y2, p^{-1} y4 and p·b(y1, p^{-1} y4) = 1.
    let reps = f.quotient.representatives();
    assert_eq!(reps.len(), 3);
    assert_eq!(f.beta.eval(&[1, 0, 0], &[0, 0, 1]), 1);

    let t = TriplePoint::from_rz(&m, &x).unwrap();
    let fs = complement_from_triple(&m, &t, &f).unwrap();
    assert_eq!(fs.dim(), 1);
    assert_eq!(lattice_from_complement(&m, &y, &f, &fs).unwrap(), x);
}

#[test]
fn rz_counts_and_naive_oracle_n2() {
    for (p, want) in [(2u32, 3usize)] {
        let m = model(p, 2);
        let pruned = enumerate_rz(&m).unwrap();
        assert_eq!(pruned.len(), want);
        assert_eq!(enumerate_rz_naive(&m).unwrap(), pruned);
    }
    assert_eq!(enumerate_rz(&model(3, 2)).unwrap().len(), 4);
}

#[test]
fn rz_n3_is_a_single_stratum_and_membership_agrees() {
    let m = model(2, 3);
    let pts = enumerate_rz(&m).unwrap();
    assert!(!pts.is_empty());
    for l in &pts {
        assert_eq!(stratum_of(&m, l).unwrap(), 1);
        assert!(xmu_membership(&m, l).unwrap());
        assert_eq!(xmu_label(&m, l).unwrap().flavor, Flavor::Interior);
    }
    assert_eq!(pts.len(), enumerate_dl(&m, 1).unwrap().len());
}

/// Isotropic lines of `x₁y₂^p + x₂y₁^p` counted directly.
fn isotropic_lines(m: &Model) -> usize {
    grassmannian(m.field(), 2, 1).iter().filter(|l| m.pairing().is_isotropic(l)).count()
}

#[test]
fn dl_counts_n2() {
    for (p, want) in [(2u32, 3usize), (3, 4)] {
        let m = model(p, 2);
        assert_eq!(isotropic_lines(&m), want);
        assert_eq!(enumerate_dl(&m, 1).unwrap().len(), want);
        assert_eq!(enumerate_dl_naive(&m, 1).unwrap().len(), want);
        let k1 = &enumerate_dl(&m, 1).unwrap()[0];
        assert_eq!(k1.j.dim(), 0);
        assert_eq!(k1.kspace, k1.kperp);
    }
}

#[test]
fn dl_pruned_equals_naive_n4() {
    let m = model(2, 4);
    for k in 1..=2 {
        let a = enumerate_dl(&m, k).unwrap();
        assert_eq!(a, enumerate_dl_naive(&m, k).unwrap());
        assert!(a.iter().all(|f| is_dl_point(&m, k, f)));
    }
    assert_eq!(enumerate_dl(&m, 1).unwrap().len(), 45);
}

#[test]
fn y_pruned_equals_naive() {
    for (p, n) in [(2u32, 2usize), (3, 2), (2, 3), (2, 4)] {
        let m = model(p, n);
        for k in 1..=n / 2 {
            let a = enumerate_y(&m, k).unwrap();
            assert_eq!(a, enumerate_y_naive(&m, k).unwrap(), "p={p} n={n} k={k}");
            let flags: HashSet<_> = a.iter().map(|y| dl_flag_from_y(&m, y).unwrap()).collect();
            assert_eq!(flags.len(), a.len());
            assert_eq!(a.len(), enumerate_dl(&m, k).unwrap().len());
        }
    }
}

#[test]
fn hearts_counts() {
    for (p, n, want) in [(2u32, 2usize, 3usize), (3, 2, 4), (2, 4, 27)] {
        let m = model(p, n);
        let hs = hearts(&m).unwrap();
        assert_eq!(hs.len(), want);
        assert_eq!(hearts_naive(&m).unwrap(), hs);
    }
    let q = 2.0f64;
    assert_eq!((q + 1.0) * (q.powi(3) + 1.0), 27.0);
    assert!(hearts(&model(2, 3)).is_err());
}

#[test]
fn n2_points_hearts_and_labels() {
    for p in [2u32, 3] {
        let m = model(p, 2);
        let pts = enumerate_rz(&m).unwrap();
        let hs = hearts(&m).unwrap();
        let mut hit = BTreeSet::new();
        for l in &pts {
            let h = heart_of(&m, l).unwrap();
            assert!(is_heart_point(&m, l, &h).unwrap());
            assert!(hs.contains(&h));
            hit.insert(h.lattice.clone());
            let label = xmu_label(&m, l).unwrap();
            assert_eq!(label.k, 1);
            assert_eq!(label.flavor, Flavor::Heart(h.clone()));
            let flag = dl_heart_flag(&m, l, &h).unwrap();
            assert_eq!(flag.f.dim(), 0);
            assert_eq!(enumerate_dl_heart(&m, &h).unwrap(), vec![flag]);
        }
        assert_eq!(hit.len(), pts.len());
        assert!(!is_heart_point(&m, m.lambda0(), &hs[0]).unwrap());
    }
}

#[test]
fn complements_pruned_equals_naive_n4() {
    let m = model(2, 4);
    for k in 1..=2 {
        for y in enumerate_y(&m, k).unwrap().iter().take(40) {
            let f = fiber_data(&m, y).unwrap();
            let a = isotropic_complements(&m, &f).unwrap();
            assert_eq!(a, isotropic_complements_naive(&m, &f).unwrap());
            if k == 1 {
                assert_eq!(a, vec![Subspace::zero(1)]);
            }
        }
    }
}

#[test]
fn unscaled_beta_is_rejected_or_degenerate() {
    let m = model(2, 4);
    let y = &enumerate_y(&m, 2).unwrap()[0];
    match fiber_data_scaled(&m, y, 0) {
        Err(_) => {}
        Ok(f) => assert!(!beta_properties(&m, &f).all()),
    }
}

#[test]
fn dual_invariant_is_reversed() {
    let m = model(2, 4);
    let x = diag(&m, &[1, 0, -1, -1]);
    let d = m.dual(&x).unwrap();
    assert_eq!(inv(m.ring(), &d, m.lambda0()).unwrap(), InvVector::block(4, 2, 1));
    let label = xmu_label(&m, &x).unwrap();
    assert_eq!(label.k, 2);
    assert!(matches!(label.flavor, Flavor::Heart(_)));
    let l1 = xmu_label(&m, &diag(&m, &[0, 0, 0, -1])).unwrap();
    assert_eq!((l1.k, l1.flavor), (1, Flavor::Interior));
}

#[test]
fn ceiling_is_enforced() {
    let m = model(2, 4).with_ceiling(10);
    assert!(matches!(enumerate_rz(&m), Err(rz_lattice::Error::Ceiling { .. })));
    assert!(matches!(model(3, 2).with_ceiling(1_000).check_ceiling(1e9), Err(_)));
}

#[test]
fn invalid_parameters() {
    assert!(Model::new(ModelParams { m: 1, ..ModelParams::new(2, 2, 1) }).is_err());
    assert!(Model::new(ModelParams::new(4, 2, 1)).is_err());
    assert!(enumerate_dl(&model(2, 4), 3).is_err());
}
