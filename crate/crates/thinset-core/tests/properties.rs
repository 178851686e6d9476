use std::collections::BTreeMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use thinset_core::polyring::rank_bigint;
use thinset_core::{Polynomial, SievedForm};

fn arb_poly(nvars: usize) -> impl Strategy<Value = Polynomial> {
    let term = (
        prop::collection::vec(0u32..=3, nvars + 1),
        -9i64..=9,
    );
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut acc = Polynomial::zero(nvars);
        for (expo, c) in terms {
            let mut mono = Polynomial::constant(nvars, BigInt::from(c));
            for (i, &e) in expo.iter().enumerate() {
                for _ in 0..e {
                    mono = mono.mul(&Polynomial::var(nvars, i));
                }
            }
            acc = acc.add(&mono);
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn add_commutes(a in arb_poly(2), b in arb_poly(2)) {
        prop_assert_eq!(a.add(&b), b.add(&a));
    }

    #[test]
    fn add_associates(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
    }

    #[test]
    fn mul_associates(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }

    #[test]
    fn mul_distributes(a in arb_poly(2), b in arb_poly(2), c in arb_poly(2)) {
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
    }

    #[test]
    fn additive_inverse(a in arb_poly(3)) {
        prop_assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn parse_print_roundtrip(a in arb_poly(2)) {
        let text = a.print();
        let back = Polynomial::parse(&text, 2).unwrap();
        prop_assert_eq!(a, back);
    }

    #[test]
    fn specialize_commutes_with_reduce(
        a in arb_poly(2),
        x1 in -20i64..=20,
        p in prop::sample::select(vec![3u64, 5, 7, 11, 13]),
    ) {
        let mut b = BTreeMap::new();
        b.insert(1usize, BigInt::from(x1));
        let mut bp = BTreeMap::new();
        bp.insert(1usize, BigInt::from(x1.rem_euclid(p as i64)));
        let (left, _) = a.specialize(&b).reduce_mod(p);
        let (ared, _) = a.reduce_mod(p);
        let (right, _) = ared.specialize(&bp).reduce_mod(p);
        prop_assert_eq!(left, right);
    }

    #[test]
    fn decompose_reconstructs(
        m in 1u32..=3,
        d in 1u32..=3,
        fs in prop::collection::vec(arb_poly(2), 3),
    ) {
        // build Y^{md} + sum Y^{m(d-j)} f_j with f_d forced nonzero
        let nv = 2;
        let mut f = Polynomial::var(nv, 0).pow(m * d);
        let mut coeffs: Vec<Polynomial> = fs.into_iter().take(d as usize).collect();
        while coeffs.len() < d as usize {
            coeffs.push(Polynomial::zero(nv));
        }
        // strip any Y-dependence the generator produced, then force f_d != 0
        for c in coeffs.iter_mut() {
            *c = c.coeff_of(0, 0);
        }
        let last = coeffs.len() - 1;
        if coeffs[last].is_zero() {
            coeffs[last] = Polynomial::one(nv);
        }
        for (j, c) in coeffs.iter().enumerate() {
            let y_pow = Polynomial::var(nv, 0).pow(m * (d - 1 - j as u32));
            f = f.add(&y_pow.mul(c));
        }
        let sf = SievedForm::decompose(&f, m).unwrap();
        prop_assert_eq!(sf.d, d);
        prop_assert_eq!(sf.reconstruct(), f);
    }

    #[test]
    fn rank_bounded_by_dims(rows in prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 1..5)) {
        let mut m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let nrows = m.len();
        let r = rank_bigint(&mut m);
        prop_assert!(r <= nrows.min(3));
    }
}

#[test]
fn essential_variables_unimodular_invariance() {
    // deterministic pseudorandom unimodular matrices via row operations
    let mut state = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    };
    let n = 3usize;
    let fixtures = [
        Polynomial::parse("X1^3 + X2^3 + X3^3", n).unwrap(),
        Polynomial::parse("X1 + X2 + X3", n).unwrap().pow(3),
        Polynomial::parse("X1^2 + X2^2", n).unwrap(),
    ];
    let base: Vec<usize> = fixtures
        .iter()
        .map(|h| h.essential_variables().unwrap())
        .collect();
    assert_eq!(base, vec![3, 1, 2]);
    for _ in 0..20 {
        // start from the identity, apply shear row operations: determinant 1
        let mut l: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| (i == j) as i64).collect())
            .collect();
        for _ in 0..6 {
            let i = (next() % n as u64) as usize;
            let j = (next() % n as u64) as usize;
            if i == j {
                continue;
            }
            let c = (next() % 7) as i64 - 3;
            for k in 0..n {
                l[i][k] += c * l[j][k];
            }
        }
        for (h, &expect) in fixtures.iter().zip(&base) {
            let transformed = h.linear_substitute(&l);
            assert_eq!(
                transformed.essential_variables().unwrap(),
                expect,
                "matrix {l:?}"
            );
        }
    }
}
