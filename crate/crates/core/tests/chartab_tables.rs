use glq_ekr::chartab::{hook_degree, Tower};
use glq_ekr::gfq::build_field;
use num_bigint::BigInt;

fn check(q: u64, n: usize) {
    let f = build_field(q).unwrap();
    let tw = Tower::build(&f, n, None, 250_000, None).unwrap();
    for k in 1..=n {
        let t = tw.table(k).unwrap();
        t.verify_orthogonality().unwrap();
        for (r, l) in t.labels().unwrap().iter().enumerate() {
            assert_eq!(hook_degree(l, q as usize), BigInt::from(t.degrees()[r]), "{l}");
        }
    }
}

#[test]
fn gl42_tower() {
    check(2, 4);
}

#[test]
fn gl33_tower() {
    check(3, 3);
}

#[test]
fn gl2_small_fields() {
    for q in [4, 5] {
        check(q, 2);
    }
}

#[test]
fn class_count_guard() {
    let f = build_field(7).unwrap();
    let err = Tower::build(&f, 2, None, 250_000, None).err().unwrap();
    assert!(matches!(err, glq_ekr::Error::BudgetExceeded { needed: 48, .. }));
}
