mod common;

use cgsb_core::confmod::{base_ruleset, ModElement, Reducer};
use cgsb_core::freelie::{LieElement, LieSpec};
use cgsb_core::linear::q;
use cgsb_core::poisson::encode;
use cgsb_core::rules::DEFAULT_FUEL;
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_vector(rng: &mut ChaCha8Rng, spec: &LieSpec, red: &mut Reducer) -> ModElement {
    let mut v = red.reduce(&encode(&random_poisson(rng, spec, 3, 3))).unwrap();
    for _ in 0..rng.gen_range(0..=2) {
        v = red.act_d(&v).unwrap();
    }
    v
}

fn check(spec: &LieSpec, seed: u64, trials: usize) {
    let rules = base_ruleset(spec);
    let mut red = Reducer::new(&rules, DEFAULT_FUEL);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = spec.basis_upto(2);
    for i in 0..trials {
        let v = random_vector(&mut rng, spec, &mut red);
        let a = LieElement::basis(basis[rng.gen_range(0..basis.len())].clone());
        let b = LieElement::basis(basis[rng.gen_range(0..basis.len())].clone());
        let (n, m) = (rng.gen_range(0..=3u32), rng.gen_range(0..=3u32));

        let ab = red.act_l(&b, m, &v).unwrap();
        let ab = red.act_l(&a, n, &ab).unwrap();
        let ba = red.act_l(&a, n, &v).unwrap();
        let ba = red.act_l(&b, m, &ba).unwrap();
        let c = spec.bracket(&a, &b);
        let want = red.act_l(&c, n + m, &v).unwrap();
        assert_eq!(&ab - &ba, want, "commutator, trial {}", i);

        let dv = red.act_d(&v).unwrap();
        let lhs = red.act_l(&a, n, &dv).unwrap();
        let lv = red.act_l(&a, n, &v).unwrap();
        let mut rhs = red.act_d(&lv).unwrap();
        if n > 0 {
            rhs += &red.act_l(&a, n - 1, &v).unwrap().scale(&q(n as i64));
        }
        assert_eq!(lhs, rhs, "sesquilinearity, trial {}", i);
    }
}

#[test]
fn free_action_is_conformal() {
    check(&LieSpec::free_on(&["x", "y", "z"]).unwrap(), 31, 100);
}

#[test]
fn table_action_is_conformal() {
    let e = |a: &str, b: &str, c: &str, k: i64| ((a.to_owned(), b.to_owned()), vec![(c.to_owned(), q(k))]);
    let spec = LieSpec::table(&["e", "f", "h"], &[e("e", "f", "h", 1), e("h", "e", "e", 2), e("h", "f", "f", -2)]).unwrap();
    check(&spec, 32, 100);
}
