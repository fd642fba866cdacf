use misfact::family::FamilyError;
use misfact::{Degree, Family, FamilyIndex, IntPoly};
use rug::Integer;

fn idx(ell: u32, n: u32) -> FamilyIndex {
    FamilyIndex::new(ell, n).unwrap()
}

#[test]
fn mt_degree_is_a_power_of_two() {
    let fam = Family::default();
    for i in FamilyIndex::up_to_order(12) {
        let q = fam.mt_poly(i).unwrap();
        assert_eq!(q.degree(), Degree::Finite(1 << (i.order() - 1)), "{i}");
    }
}

#[test]
fn low_coefficients_stabilize() {
    let fam = Family::default();
    for n in 0..=14 {
        let base = fam.orbit_poly(n).unwrap().truncate(n as usize + 1);
        for k in 1..=14 - n {
            assert_eq!(fam.orbit_poly(n + k).unwrap().truncate(n as usize + 1), base, "n={n} k={k}");
        }
    }
}

#[test]
fn leading_jet() {
    let fam = Family::default();
    for i in FamilyIndex::up_to_order(14).into_iter().filter(|i| i.ell >= 1) {
        let jet = fam.mt_poly(i).unwrap().truncate(i.ell as usize + 2);
        let want = IntPoly::monomial(Integer::from(1) << (i.ell - 1), i.ell as usize + 1);
        assert_eq!(jet, want, "{i}");
    }
}

#[test]
fn divisibility_along_both_indices() {
    let fam = Family::default();
    for i in FamilyIndex::up_to_order(10) {
        let q = fam.mt_poly(i).unwrap();
        for k in misfact::arith::divisors(i.n) {
            let d = fam.mt_poly(idx(i.ell, k)).unwrap();
            assert!(d.divides(&q), "q{} by q({}, {k})", i, i.ell);
        }
        for ell in 0..i.ell {
            let d = fam.mt_poly(idx(ell, i.n)).unwrap();
            assert!(d.divides(&q), "q{} by q({ell}, {})", i, i.n);
        }
    }
}

#[test]
fn difference_of_squares_components() {
    let fam = Family::default();
    for i in FamilyIndex::up_to_order(12).into_iter().filter(|i| i.ell >= 1) {
        let (a, b) = fam.diff_squares_step(i).unwrap();
        assert_eq!(&a * &b, fam.mt_poly(i).unwrap(), "{i}");
    }
}

#[test]
fn simple_part_is_the_quotient() {
    let fam = Family::default();
    for i in FamilyIndex::up_to_order(12).into_iter().filter(|i| i.ell >= 1) {
        let s = fam.simple_part(i).unwrap();
        let q = fam.mt_poly(i).unwrap();
        let prev = fam.mt_poly(idx(i.ell - 1, i.n)).unwrap();
        assert_eq!(q.exact_div(&prev).unwrap(), s, "{i}");
    }
}

#[test]
fn worked_simple_part() {
    let fam = Family::default();
    let p4 = fam.orbit_poly(4).unwrap();
    let want = &p4.square() + &IntPoly::from_i64s(&[0, 2]);
    assert_eq!(fam.simple_part(idx(2, 4)).unwrap(), want);
}

#[test]
fn cap_and_index_errors() {
    let fam = Family::new(6);
    assert!(fam.orbit_poly(6).is_ok());
    assert_eq!(fam.orbit_poly(7).unwrap_err(), FamilyError::CapExceeded { order: 7, cap: 6 });
    assert!(matches!(fam.mt_poly(idx(3, 4)), Err(FamilyError::CapExceeded { .. })));
    assert!(FamilyIndex::new(2, 0).is_err());
    assert!(fam.simple_part(idx(0, 3)).is_err());
}
