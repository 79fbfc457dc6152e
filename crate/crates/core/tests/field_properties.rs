use pclab_core::ff::{arith, Elem, FieldTower};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn mobius(n: u64) -> i64 {
    let f = arith::prime_factors(n);
    if f.iter().any(|&p| n % (p * p) == 0) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

#[test]
fn degree_counts_follow_the_mobius_formula() {
    for (p, n, big_n) in [(3u64, 1u32, 4u32), (5, 1, 3), (3, 2, 2), (7, 1, 2), (3, 1, 6), (5, 2, 2)] {
        let t = FieldTower::build(p, n, big_n).unwrap();
        let q = t.q() as i64;
        let mut counts = vec![0i64; big_n as usize + 1];
        for x in t.elements() {
            counts[t.element_degree(x) as usize] += 1;
        }
        for k in 1..=big_n as u64 {
            let expected: i64 = if u64::from(big_n) % k == 0 {
                arith::divisors(k)
                    .into_iter()
                    .map(|d| mobius(k / d) * q.pow(d as u32))
                    .sum()
            } else {
                0
            };
            assert_eq!(counts[k as usize], expected, "F_{q}^{big_n}, degree {k}");
        }
    }
}

#[test]
fn characters_are_multiplicative() {
    let t = FieldTower::build(3, 1, 4).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let n = t.group_order();
    let chars: Vec<_> = (0..10).map(|_| t.char(rng.gen_range(0..n)).unwrap()).collect();
    for _ in 0..500 {
        let x = Elem::from_log(rng.gen_range(0..n));
        let y = Elem::from_log(rng.gen_range(0..n));
        let xy = t.mul(x, y);
        for chi in &chars {
            let lhs = t.char_value(chi, xy).unwrap();
            let rhs = (t.char_value(chi, x).unwrap() + t.char_value(chi, y).unwrap()) % n;
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn frobenius_fixes_exactly_the_base_field() {
    let t = FieldTower::build(5, 1, 3).unwrap();
    let fixed: Vec<Elem> = t.elements().filter(|&x| t.frobenius(x, 1) == x).collect();
    assert_eq!(fixed, t.base_field());
}

proptest! {
    #[test]
    fn log_round_trip(t in 0u64..624) {
        let tower = FieldTower::build(5, 1, 4).unwrap();
        let x = tower.pow(tower.generator(), t);
        prop_assert_eq!(x.log(), Some(t));
        prop_assert_eq!(Elem::from_dlog_code(x.dlog_code()), x);
    }

    #[test]
    fn field_axioms(a in 0usize..343, b in 0usize..343, c in 0usize..343) {
        let t = FieldTower::build(7, 1, 3).unwrap();
        let (a, b, c) = (Elem::from_index(a), Elem::from_index(b), Elem::from_index(c));
        prop_assert_eq!(t.mul(a, t.add(b, c)), t.add(t.mul(a, b), t.mul(a, c)));
        prop_assert_eq!(t.add(t.sub(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(t.mul(t.div(a, b).unwrap(), b), a);
        }
        let coeffs = t.coeffs(a);
        prop_assert_eq!(t.from_coeffs(&coeffs), a);
    }
}
