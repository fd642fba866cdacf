use misfact::roots::{find_roots_with, points_of_order, to_csv, FamilyTarget, Kind, RootError, CSV_HEADER};
use misfact::{find_roots, orbit_classify, Exec, FactorEngine, IntPoly};
use rug::{Complex, Float};

fn abs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

fn eval(p: &IntPoly, z: &Complex, prec: u32) -> Complex {
    let mut acc = Complex::new(prec);
    for c in p.coeffs().iter().rev() {
        acc *= z;
        acc += c;
    }
    acc
}

#[test]
fn small_examples() {
    let r = find_roots(&IntPoly::from_i64s(&[1, 1]), 64).unwrap();
    assert_eq!(r.len(), 1);
    assert_eq!(r[0].kind, Kind::Unclassified);
    let e = FactorEngine::default();
    let m22 = e.misiurewicz_factor(2, 2).unwrap();
    assert_eq!(*m22, IntPoly::from_i64s(&[1, 0, 1]));
    let r = find_roots(&m22, 64).unwrap();
    assert_eq!(r[0].value, Complex::with_val(64, (0, -1)));
    assert_eq!(r[1].value, Complex::with_val(64, (0, 1)));
}

#[test]
fn gleason_roots_have_exact_period() {
    let e = FactorEngine::default();
    let fam = e.family();
    for n in 1..=8 {
        let t = FamilyTarget::gleason(n, e.gleason(n).unwrap());
        let roots = find_roots_with(&t, 128, Exec::Parallel).unwrap();
        assert_eq!(roots.len(), e.gleason(n).unwrap().degree().finite().unwrap());
        let threshold = Float::with_val(64, 1) >> 64u32;
        for r in &roots {
            assert!(abs(&eval(&fam.orbit_poly(n).unwrap(), &r.value, 512)) < threshold, "h_{n}");
            for k in misfact::arith::strict_divisors(n) {
                assert!(abs(&eval(&fam.orbit_poly(k).unwrap(), &r.value, 512)) > threshold, "h_{n} vs p_{k}");
            }
        }
    }
}

#[test]
fn residuals_shrink_with_precision() {
    let e = FactorEngine::default();
    let h = e.gleason(7).unwrap();
    let worst = |prec| {
        find_roots(&h, prec)
            .unwrap()
            .iter()
            .map(|p| p.residual_log2())
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let (a, b, c) = (worst(64), worst(128), worst(256));
    assert!(a > b && b > c, "{a} {b} {c}");
}

#[test]
fn points_stay_in_the_disk_and_classify() {
    let e = FactorEngine::default();
    let pts = points_of_order(&e, 8, 128, Exec::Parallel).unwrap();
    let bound = Float::with_val(64, 2) + (Float::with_val(64, 1) >> 20u32);
    let expected: u64 = (1..=8).map(|n| misfact::arith::hyp_count(n).to_u64().unwrap()).sum::<u64>()
        + (2..8u32)
            .flat_map(|l| (1..=8 - l).map(move |n| misfact::arith::mis_count(l, n).to_u64().unwrap()))
            .sum::<u64>();
    assert_eq!(pts.len() as u64, expected);
    for p in &pts {
        assert!(abs(&p.value) <= bound);
        assert!(!p.mismatch(), "{} classified {:?}", p.kind, p.classified);
    }
}

#[test]
fn first_orders_match_the_examples() {
    let e = FactorEngine::default();
    let one = points_of_order(&e, 1, 64, Exec::Sequential).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].kind, Kind::Hyperbolic { period: 1 });
    assert!(one[0].value.is_zero());
    let two = points_of_order(&e, 2, 64, Exec::Sequential).unwrap();
    assert_eq!(two[0].value, Complex::with_val(64, (-1, 0)));
    assert_eq!(two[0].kind, Kind::Hyperbolic { period: 2 });
    let three = points_of_order(&e, 3, 64, Exec::Sequential).unwrap();
    assert_eq!(three.len(), 6);
    assert_eq!(three[0].value, Complex::with_val(64, (-2, 0)));
    assert_eq!(three[0].kind, Kind::Misiurewicz { preperiod: 2, period: 1 });
}

#[test]
fn output_is_conjugation_symmetric() {
    let e = FactorEngine::default();
    let csv = to_csv(&points_of_order(&e, 7, 96, Exec::Parallel).unwrap());
    let rows: std::collections::BTreeSet<(String, String)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let mut f = l.split(',');
            (f.next().unwrap().to_string(), f.next().unwrap().to_string())
        })
        .collect();
    for (re, im) in &rows {
        let mirror = match im.strip_prefix('-') {
            Some(pos) => pos.to_string(),
            None if im.bytes().all(|b| b == b'0' || b == b'.') => im.clone(),
            None => format!("-{im}"),
        };
        assert!(rows.contains(&(re.clone(), mirror)), "{re} {im}");
    }
}

#[test]
fn modes_give_identical_csv() {
    let e = FactorEngine::default();
    let a = to_csv(&points_of_order(&e, 7, 128, Exec::Parallel).unwrap());
    let b = to_csv(&points_of_order(&e, 7, 128, Exec::Sequential).unwrap());
    assert_eq!(a, b);
    assert!(a.starts_with(CSV_HEADER));
    assert!(!a.contains("-0.000000000000000000000000000000000000000,"));
}

#[test]
fn known_orbits() {
    let tol = Float::with_val(64, 1) >> 32u32;
    let cases = [
        ((0, 0), Kind::Hyperbolic { period: 1 }),
        ((-1, 0), Kind::Hyperbolic { period: 2 }),
        ((-2, 0), Kind::Misiurewicz { preperiod: 2, period: 1 }),
        ((0, 1), Kind::Misiurewicz { preperiod: 2, period: 2 }),
        ((0, -1), Kind::Misiurewicz { preperiod: 2, period: 2 }),
    ];
    for (c, want) in cases {
        assert_eq!(orbit_classify(&Complex::with_val(128, c), 6, 6, &tol), want);
    }
}

#[test]
fn repeated_roots_are_reported() {
    let p = &IntPoly::from_i64s(&[1, 1, 1]) * &IntPoly::from_i64s(&[1, 1, 1]);
    assert!(matches!(find_roots(&p, 64), Err(RootError::PrecisionExhausted { .. })));
}
