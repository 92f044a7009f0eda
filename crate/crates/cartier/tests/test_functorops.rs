use cartier::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use cartier::fpmod::{PresentedModule, Submodule};
use cartier::fppoly::{cartier_trace, parse_poly, Poly, Ring, RingRef};
use cartier::functorops::*;
use cartier::idealkit::{Ideal, Vector};
use cartier::testmod::TauOptions;

fn p(r: &RingRef, s: &str) -> Poly {
    parse_poly(r, s).unwrap()
}

fn cyclic(r: &RingRef, u: &str) -> CartierModule {
    CartierModule::free(&CartierAlgebraSpec::single(CartierOp::scalar(1, &p(r, u), 1).unwrap()))
}

fn module(r: &RingRef, ideals: &[&[&str]], diag: &[&str]) -> CartierModule {
    let is: Vec<Ideal> = ideals.iter().map(|g| if g.is_empty() { Ideal::zero(r) } else { Ideal::parse(r, g).unwrap() }).collect();
    let m = PresentedModule::direct_sum_of_cyclics(r, &is).unwrap();
    let op = CartierOp::diagonal(1, &diag.iter().map(|s| p(r, s)).collect::<Vec<_>>()).unwrap();
    CartierModule::validate(&m, &CartierAlgebraSpec::single(op)).unwrap()
}

fn all_hold(lines: &[SuiteLine]) {
    for l in lines {
        assert_eq!(l.verdict, Verdict::Holds, "{}: {} vs {}", l.statement, l.lhs, l.rhs);
    }
}

#[test]
fn affine_line_pullback_of_a_point() {
    let pt = Ring::new(2, &[]).unwrap();
    let m = cyclic(&pt, "1");
    let (g, ring) = shriek_affine_line(&m, "x").unwrap();
    assert_eq!(ring.n(), 1);
    let x = p(&ring, "x");
    let v = Vector::from_poly_at(&x, 0);
    assert_eq!(g.act(0, &v).unwrap(), Vector::from_poly_at(&Poly::one(&ring), 0));
    let lines = commutation_suite(&m, &RingMap::AffineLine { var: "x".into() }, &TauOptions::default()).unwrap();
    all_hold(&lines);
}

#[test]
fn affine_line_pullback_commutes_with_tau() {
    let r = Ring::new(2, &["x", "y"]).unwrap();
    let intro = module(&r, &[&["y"], &[]], &["y", "x"]);
    let line = RingMap::AffineLine { var: "u".into() };
    all_hold(&commutation_suite(&intro, &line, &TauOptions::default()).unwrap());
    let r3 = Ring::new(3, &["x"]).unwrap();
    all_hold(&commutation_suite(&cyclic(&r3, "x^2"), &line, &TauOptions::default()).unwrap());
}

fn ext3() -> (RingRef, FiniteExtension) {
    let r = Ring::new(3, &["x"]).unwrap();
    let ext = FiniteExtension::new(&r, "z", "z^2-x").unwrap();
    (r, ext)
}

#[test]
fn finite_extension_arithmetic() {
    let (r, ext) = ext3();
    assert_eq!(ext.degree(), 2);
    let s = ext.ring();
    assert_eq!(ext.coords(&p(s, "z^3")).unwrap(), vec![Poly::zero(&r), p(&r, "x")]);
    assert_eq!(ext.trace(&p(s, "z")).unwrap(), Poly::zero(&r));
    assert_eq!(ext.trace(&p(s, "z^2+1")).unwrap(), p(&r, "2*x+2"));
    for f in ["z", "z+x", "x*z^2+z+1", "z^3+x^2"] {
        let f = p(s, f);
        let lhs = ext.trace(&f.pow(3).unwrap()).unwrap();
        let rhs = ext.trace(&f).unwrap().pow(3).unwrap();
        assert_eq!(lhs, rhs);
    }
    let over = ext.primes_over(&Ideal::parse(&r, &["x"]).unwrap()).unwrap();
    assert_eq!(over.len(), 1);
    assert!(ext.contract(&over[0]).unwrap().equals(&Ideal::parse(&r, &["x"]).unwrap()).unwrap());
}

#[test]
fn pulled_back_algebra_laws() {
    let r = Ring::new(2, &["x"]).unwrap();
    let ext = FiniteExtension::new(&r, "z", "z^2+x*z+1").unwrap();
    let s = ext.ring().clone();
    let k1 = CartierOp::scalar(1, &p(&r, "x"), 1).unwrap();
    let k2 = CartierOp::scalar(1, &p(&r, "1+x"), 1).unwrap();
    let alg = PulledBackAlgebra::new(&[k1.clone(), k2.clone()], &ext).unwrap();
    let a = PulledElement { op: k1.clone(), s: p(&s, "z") };
    let b = PulledElement { op: k2.clone(), s: p(&s, "x+z") };
    let c = PulledElement { op: k1.clone(), s: p(&s, "1+z") };
    let ab = alg.mul(&a, &b).unwrap();
    let want = ext.reduce(&p(&s, "z^2*(x+z)")).unwrap();
    assert!(alg.same(&ab, &PulledElement { op: k1.after(&k2).unwrap(), s: want }).unwrap());
    let left = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
    let right = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
    assert!(alg.same(&left, &right).unwrap());
    let g = alg.generators();
    let prod = alg.mul(&g[0], &g[1]).unwrap();
    assert!(alg.same(&prod, &PulledElement { op: k1.after(&k2).unwrap(), s: Poly::one(&s) }).unwrap());
    let r3 = Ring::new(3, &["x"]).unwrap();
    let e3 = FiniteExtension::new(&r3, "z", "z^2-x").unwrap();
    let k = CartierOp::scalar(1, &Poly::one(&r3), 1).unwrap();
    let a3 = PulledBackAlgebra::new(std::slice::from_ref(&k), &e3).unwrap();
    let t = PulledElement { op: k.clone(), s: p(e3.ring(), "z") };
    let lm = a3.left_mul(&p(e3.ring(), "x+1"), &t).unwrap();
    let want = e3.reduce(&p(e3.ring(), "(x+1)^3*z")).unwrap();
    assert!(a3.same(&lm, &PulledElement { op: k, s: want }).unwrap());
}

#[test]
fn degree_one_extension_is_the_identity() {
    let r = Ring::new(3, &["x"]).unwrap();
    let ext = FiniteExtension::new(&r, "z", "z-x").unwrap();
    let m = cyclic(&r, "x^2");
    let sh = shriek_finite(&m, &ext).unwrap();
    assert_eq!(sh.rank(), 1);
    let pushed = pushforward_finite(&sh, &ext).unwrap();
    let opts = TauOptions::default();
    assert!(pushed.tau(&opts).unwrap().submodule.equals(&Submodule::new(pushed.module(), m.tau(&opts).unwrap().submodule.gens().to_vec())).unwrap());
}

#[test]
fn finite_map_square_root_of_x() {
    let (r, _) = ext3();
    let opts = TauOptions::default();
    for m in [cyclic(&r, "1"), cyclic(&r, "x^2"), module(&r, &[&[], &["x"]], &["1", "x^2"])] {
        let lines = commutation_suite(&m, &RingMap::Finite { adjoin: "z".into(), relation: "z^2-x".into() }, &opts).unwrap();
        all_hold(&lines);
    }
}

#[test]
fn pushforward_of_the_hypersurface() {
    let (_, ext) = ext3();
    let s = ext.ring().clone();
    let m = PresentedModule::direct_sum_of_cyclics(&s, &[Ideal::parse(&s, &["z^2-x"]).unwrap()]).unwrap();
    let n = CartierModule::validate(&m, &CartierAlgebraSpec::single(CartierOp::scalar(1, &p(&s, "(z^2-x)^2"), 1).unwrap())).unwrap();
    let pushed = pushforward_finite(&n, &ext).unwrap();
    assert_eq!(pushed.rank(), 2);
    all_hold(&pushforward_suite(&n, &ext, &TauOptions::default()).unwrap());
}

#[test]
fn nilpotent_modules_stay_nilpotent() {
    let (r, ext) = ext3();
    let zero = CartierModule::free(&CartierAlgebraSpec::single(CartierOp::scalar(1, &Poly::zero(&r), 1).unwrap()));
    let sh = shriek_finite(&zero, &ext).unwrap();
    assert!(sh.is_nilpotent(&sh.whole(), None).unwrap());
    let (g, _) = shriek_affine_line(&zero, "u").unwrap();
    assert!(g.is_nilpotent(&g.whole(), None).unwrap());
    assert!(shriek_localize(&zero, &p(&r, "x")).unwrap().is_nilpotent().unwrap());
}

#[test]
fn localization_of_the_line() {
    let r = Ring::new(2, &["x"]).unwrap();
    let m = cyclic(&r, "x");
    let opts = TauOptions::default();
    let loc = shriek_localize(&m, &p(&r, "x")).unwrap();
    assert!(loc.is_f_regular(&opts).unwrap());
    let one = shriek_localize(&m, &Poly::one(&r)).unwrap();
    assert!(one.tau(&opts).unwrap().equals(&m.tau(&opts).unwrap().submodule).unwrap());
    let el = loc.normalize(&Vector::from_poly_at(&p(&r, "x^3"), 0), 2).unwrap();
    assert_eq!((el.numerator, el.k), (Vector::from_poly_at(&p(&r, "x"), 0), 0));
    let half = loc.act(0, &LocalElement { numerator: Vector::from_poly_at(&Poly::one(&r), 0), k: 1 }).unwrap();
    assert!(half.numerator.is_zero());
    let inv = loc.act(0, &LocalElement { numerator: Vector::from_poly_at(&Poly::one(&r), 0), k: 2 }).unwrap();
    assert_eq!((inv.numerator, inv.k), (Vector::from_poly_at(&Poly::one(&r), 0), 1));
}

#[test]
fn localization_drops_primes_containing_c() {
    let r = Ring::new(2, &["x", "y"]).unwrap();
    let intro = module(&r, &[&["y"], &[]], &["y", "x"]);
    let lines = commutation_suite(&intro, &RingMap::Localize { at: "y".into() }, &TauOptions::default()).unwrap();
    all_hold(&lines);
}

#[test]
fn open_immersion_model() {
    for pr in [2u32, 3] {
        let r = Ring::new(pr, &["x"]).unwrap();
        let m = cyclic(&r, "1");
        let model = coherent_model(&m, &p(&r, "x")).unwrap();
        assert_eq!(model.depth, 1);
        assert!(model.independent);
        let rep = model.report(&TauOptions::default()).unwrap();
        assert_eq!(rep.tau_model, vec![vec!["1".to_string()]]);
        assert!(rep.inside_pushforward_of_tau);
        assert!(rep.strict_witness.is_some());
        let trivial = coherent_model(&m, &Poly::one(&r)).unwrap();
        assert_eq!(trivial.depth, 0);
    }
}

#[test]
fn gauge_contraction_and_growth() {
    for pr in [2u32, 3] {
        let r = Ring::new(pr, &["x", "y"]).unwrap();
        for e in [1u32, 2] {
            assert_eq!(contraction_failures(&r, e, 200, 7 + e as u64).unwrap(), 0);
            let (lhs, rhs) = growth_identity(&r, e).unwrap();
            assert_eq!(lhs, rhs);
        }
    }
    let r = Ring::new(2, &["x", "y"]).unwrap();
    let family: Vec<(u32, Poly)> = (1..=3).map(|e| (e, growth_family_member(&r, e).unwrap())).collect();
    let rep = gauge_growth(&family).unwrap();
    assert!(rep.flagged, "{:?}", rep.bounds);
    let tame: Vec<(u32, Poly)> = (1..=3).map(|e| (e, Poly::one(&r))).collect();
    assert!(!gauge_growth(&tame).unwrap().flagged);
    let f = p(&r, "x^5*y^3+y^7");
    assert!(contraction_holds(&f, 1).unwrap());
    assert_eq!(cartier_trace(&f, 1, &Poly::one(&r)).unwrap(), p(&r, "x^2*y"));
    assert!(cartier_trace(&f, 1, &p(&r, "x*y")).unwrap().is_zero());
}

#[test]
fn line_to_point_is_the_expected_negative() {
    for pr in [2u32, 3] {
        let r = Ring::new(pr, &["x"]).unwrap();
        let omega = cyclic(&r, &format!("x^{}", pr - 1));
        let lines = commutation_suite(&omega, &RingMap::ToPoint, &TauOptions::default()).unwrap();
        assert_eq!(lines.len(), 1);
        assert_eq!(lines[0].verdict, Verdict::ExpectedNegative);
        assert_eq!((lines[0].lhs.as_str(), lines[0].rhs.as_str()), ("dim 0", "dim 1"));
    }
}
