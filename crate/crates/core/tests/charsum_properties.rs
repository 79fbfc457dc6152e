use std::f64::consts::PI;

use num_complex::Complex64;
use pclab_core::charsum::{
    char_sum, epsilon_star, logs_of, root_of_unity, verify_charsumcor, verify_katz,
    verify_reis, SumTable, two_dim_subspaces_with_one,
};
use pclab_core::ff::{Elem, FieldTower};
use proptest::prelude::*;

/// Smallest modulus of an average of a multiset of at most `k_max` points.
fn min_multiset_average(m: &[Complex64], k_max: usize) -> f64 {
    fn walk(m: &[Complex64], start: usize, k: usize, acc: Complex64, left: usize, best: &mut f64) {
        if k > 0 {
            *best = best.min((acc / k as f64).norm());
        }
        if left == 0 {
            return;
        }
        for i in start..m.len() {
            walk(m, i, k + 1, acc + m[i], left - 1, best);
        }
    }
    let mut best = f64::INFINITY;
    walk(m, 0, 0, Complex64::new(0.0, 0.0), k_max, &mut best);
    best
}

fn point() -> impl Strategy<Value = Complex64> {
    (-3.0f64..3.0, -3.0f64..3.0).prop_map(|(a, b)| Complex64::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hull_distance_never_exceeds_any_multiset_average(m in prop::collection::vec(point(), 1..=6)) {
        let e = epsilon_star(&m).unwrap().epsilon_star;
        prop_assert!(e >= 0.0);
        prop_assert!(e <= m.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min) + 1e-12);
        prop_assert!(min_multiset_average(&m, 12) >= e - 1e-9);
    }

    #[test]
    fn hull_distance_is_monotone(m in prop::collection::vec(point(), 1..=6), extra in point()) {
        let mut bigger = m.clone();
        bigger.push(extra);
        let a = epsilon_star(&m).unwrap().epsilon_star;
        let b = epsilon_star(&bigger).unwrap().epsilon_star;
        prop_assert!(a >= b - 1e-12);
    }

    /// Sets whose nearest hull point is a vertex or the midpoint of two points
    /// are attained by a multiset of size at most 2.
    #[test]
    fn hull_distance_is_attained_at_midpoints(
        r in 0.2f64..3.0,
        phi in 0.0f64..(2.0 * PI),
        half in 0.05f64..1.5,
        fill in prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 0..4),
    ) {
        // two points symmetric about the ray at angle phi, plus points farther out
        let dir = Complex64::from_polar(1.0, phi);
        let a = Complex64::from_polar(r, phi + half);
        let b = Complex64::from_polar(r, phi - half);
        let foot = (r * half.cos()).max(0.0);
        let mut m = vec![a, b];
        for (s, t) in fill {
            // stay on the far side of the chord, inside the wedge
            let along = foot + 0.1 + 2.0 * s;
            let across = (t - 0.5) * 2.0 * r * half.sin();
            m.push(dir * Complex64::new(along, across));
        }
        let e = epsilon_star(&m).unwrap().epsilon_star;
        let oracle = min_multiset_average(&m, 12);
        prop_assert!((e - oracle).abs() < 1e-6, "hull {e} vs sampled {oracle}");
    }
}

#[test]
fn half_circle_bound_holds_up_to_a_thousand() {
    for d in 4..=1000u32 {
        let x = PI / f64::from(d);
        assert!(x.sin() >= x - x * x / PI, "d = {d}");
        assert!(x.sin() >= PI / f64::from(d) - PI / f64::from(d * d));
    }
}

#[test]
fn fast_table_agrees_with_exact_sums() {
    let t = FieldTower::build(5, 1, 3).unwrap();
    let table = SumTable::new(&t);
    let a: Vec<Elem> = (0..40).map(|i| Elem::from_index((i * 7 + 3) % 125)).collect();
    let logs = logs_of(&a);
    for chi in t.characters() {
        let exact = char_sum(&t, a.iter().copied(), &chi).value();
        let fast = table.sum_logs(&logs, chi.index());
        assert!((exact - fast).norm() < 1e-9);
    }
    assert!((root_of_unity(1, 4) - Complex64::new(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn katz_on_f125_spot_checks() {
    let t = FieldTower::build(5, 1, 3).unwrap();
    let thetas: Vec<Elem> = t.elements().filter(|&x| t.element_degree(x) == 3).collect();
    for i in 0..50u64 {
        let theta = thetas[(i * 37 % thetas.len() as u64) as usize];
        let chi = t.char(1 + i * 5 % 123).unwrap();
        assert!(verify_katz(&t, &chi, theta).unwrap().holds);
    }
}

#[test]
fn reis_on_prime_subspaces_of_f81() {
    let t = FieldTower::build(3, 1, 4).unwrap();
    let table = SumTable::new(&t);
    let bound = 4.0 * 3f64.powf(1.5);
    for (h, v) in two_dim_subspaces_with_one(&t) {
        if t.element_degree(h) != 4 {
            continue;
        }
        let r = verify_reis(&t, Elem::ZERO, &[Elem::ONE, h], &t.char(1).unwrap()).unwrap();
        assert!(r.hypothesis_witness.is_some());
        let logs = logs_of(&v);
        for m in 1..80 {
            assert!(table.magnitude_logs(&logs, m) < bound);
        }
        assert!(verify_charsumcor(&t, &[Elem::ONE, h], &t.char(3).unwrap()).unwrap().holds);
    }
}
