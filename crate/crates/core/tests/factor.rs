use misfact::arith::{divisors, hyp_count, mis_count};
use misfact::poly::gcd;
use misfact::{Degree, Exec, FactorEngine, FamilyIndex, IntPoly};
use rug::Integer;

fn idx(ell: u32, n: u32) -> FamilyIndex {
    FamilyIndex::new(ell, n).unwrap()
}

fn deg(p: &IntPoly) -> Integer {
    Integer::from(p.degree().finite().unwrap())
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 { a } else { gcd_u32(b, a % b) }
}

#[test]
fn sweep_to_twelve_reassembles() {
    let e = FactorEngine::default();
    for (i, r) in e.verify_sweep(12, Exec::Parallel) {
        assert!(r.unwrap(), "{i}");
    }
}

#[test]
fn factor_degrees_match_counts() {
    let e = FactorEngine::default();
    for n in 1..=12 {
        assert_eq!(deg(&e.gleason(n).unwrap()), hyp_count(n), "h_{n}");
    }
    for i in FamilyIndex::up_to_order(12).into_iter().filter(|i| i.ell >= 2) {
        assert_eq!(deg(&e.misiurewicz_factor(i.ell, i.n).unwrap()), mis_count(i.ell, i.n), "m{i}");
    }
}

#[test]
fn gleason_factors_are_squarefree_and_coprime() {
    let e = FactorEngine::default();
    let hs: Vec<_> = (1..=12).map(|n| e.gleason(n).unwrap()).collect();
    for (i, h) in hs.iter().enumerate() {
        assert!(h.is_squarefree(), "h_{}", i + 1);
        for g in &hs[..i] {
            assert_eq!(gcd(h, g).degree(), Degree::Finite(0), "h_{} and an earlier factor", i + 1);
        }
    }
}

#[test]
fn simple_parts_are_squarefree() {
    let e = FactorEngine::default();
    let fam = e.family();
    for i in FamilyIndex::up_to_order(14).into_iter().filter(|i| i.ell >= 1) {
        assert!(fam.simple_part(i).unwrap().is_squarefree(), "s{i}");
    }
}

#[test]
fn gleason_divides_simple_part_exactly_when_expected() {
    let e = FactorEngine::default();
    // ell, n <= 10, limited to order 14 so that p_{ell+n-1} stays desk-sized
    for ell in 1..=10 {
        for n in (1..=10).filter(|n| ell + n <= 14) {
            let s = e.family().simple_part(idx(ell, n)).unwrap();
            for k in 1..=10 {
                let expected = gcd_u32(n, ell - 1).is_multiple_of(k);
                let h = e.gleason(k).unwrap();
                assert_eq!(h.divides(&s), expected, "h_{k} | s({ell}, {n})");
            }
        }
    }
}

#[test]
fn worked_table() {
    let e = FactorEngine::default();
    let t = e.factorize(idx(2, 4)).unwrap();
    let exps: Vec<(u32, u32)> = t.hyp_factors.iter().map(|(k, (_, e))| (*k, *e)).collect();
    assert_eq!(exps, [(1, 3), (2, 2), (4, 2)]);
    let mis: Vec<((u32, u32), usize)> = t.mis_factors.iter().map(|(k, m)| (*k, m.degree().finite().unwrap())).collect();
    assert_eq!(mis, [((2, 1), 1), ((2, 2), 2), ((2, 4), 12)]);
    assert_eq!(t.total_degree(), 32);
    assert!(e.verify(&t).unwrap());
    for k in divisors(4) {
        assert!(t.hyp_factors.contains_key(&k));
    }
}

#[test]
fn cache_directory_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let first = FactorEngine::default().with_cache_dir(dir.path());
    let t = first.factorize(idx(3, 4)).unwrap();
    assert!(dir.path().join("h_4.poly").exists());
    assert!(dir.path().join("m_3_4.poly").exists());
    for entry in std::fs::read_dir(dir.path()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(IntPoly::parse_text(&text).unwrap().to_text(), text, "{}", path.display());
    }

    // a damaged entry is rebuilt
    std::fs::write(dir.path().join("h_4.poly"), "poly v1 deg=1\n1\n1\n").unwrap();
    let second = FactorEngine::default().with_cache_dir(dir.path());
    let again = second.factorize(idx(3, 4)).unwrap();
    assert_eq!(again.reassemble(), t.reassemble());
    assert!(second.verify(&again).unwrap());
}
