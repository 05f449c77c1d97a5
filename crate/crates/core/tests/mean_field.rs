use num_complex::Complex;
use thermal_ent::meanfield_aff::*;

fn params(h: f64, t: f64) -> AlternatingParams<f64> {
    AlternatingParams::new(1.0, -1.0, h, t).unwrap()
}

#[test]
fn converged_state_is_a_fixed_point() {
    let p = params(0.4, 0.15);
    let s = self_consistent_solve(&p, &MeanFieldState::seed()).unwrap();
    assert!(s.converged);
    let next = map_step(&s, &p);
    assert!((next.d_a - s.d_a).abs() < 1e-9);
    assert!((next.d_b - s.d_b).abs() < 1e-9);
    assert!((next.p_ab - s.p_ab).norm() < 1e-9);
    assert!((next.p_ba - s.p_ba).norm() < 1e-9);
}

#[test]
fn symmetry_emerges_across_grid() {
    for h in [0.0, 0.5, 0.9] {
        for t in [0.05, 0.2, 0.6] {
            let s = self_consistent_solve(&params(h, t), &MeanFieldState::seed()).unwrap();
            assert!(s.p_ab.im.abs() < 1e-8, "h={h} t={t}");
            assert!((s.d_a - s.d_b).abs() < 1e-8, "h={h} t={t}");
        }
    }
}

#[test]
fn zero_field_concurrences() {
    for t in [0.05, 0.2, 0.5, 1.0] {
        let p = params(0.0, t);
        let s = self_consistent_solve(&p, &MeanFieldState::seed()).unwrap();
        let r = mf_concurrences(&s, &p).unwrap();
        assert_eq!(r.c_f.c, 0.0, "t={t}");
        if t < 0.3 {
            assert!(r.c_a.c > 0.0, "t={t}");
        }
    }
}

#[test]
fn bands_are_ordered() {
    let p = params(0.5, 0.1);
    let s = self_consistent_solve(&p, &MeanFieldState::seed()).unwrap();
    let r = mf_concurrences(&s, &p).unwrap();
    for k in 0..64 {
        let k = -std::f64::consts::PI + k as f64 * 0.1;
        assert!(r.band_minus(k) <= r.band_plus(k));
    }
}

#[test]
fn polarized_state_has_no_entanglement() {
    let s = MeanFieldState {
        converged: true,
        ..MeanFieldState::unconverged(1.0, 1.0, Complex::new(0.0, 0.0), Complex::new(0.0, 0.0))
    };
    let r = mf_concurrences(&s, &params(3.0, 0.1)).unwrap();
    assert_eq!(r.c_a.c, 0.0);
    assert_eq!(r.c_f.c, 0.0);
}

#[test]
fn ferro_bond_critical_temperature() {
    assert!(mf_critical_temperature(&params(0.0, 0.1), BondKind::Ferro)
        .unwrap()
        .is_none());
    let a = mf_critical_temperature(&params(0.8, 0.1), BondKind::Ferro)
        .unwrap()
        .unwrap();
    let b = mf_critical_temperature(&params(0.9, 0.1), BondKind::Ferro)
        .unwrap()
        .unwrap();
    assert!(b.t_c > a.t_c);
    for cp in [a, b] {
        assert!(cp.identity.simplified.abs() < 1e-6);
        assert!(cp.identity.product_symmetric.abs() < 1e-6);
    }
}
