use cartier::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use cartier::fpmod::{PresentedModule, Submodule};
use cartier::fppoly::{parse_poly, Poly, Ring, RingRef};
use cartier::idealkit::{Ideal, Vector};
use cartier::rational::Rat;
use cartier::testmod::TauOptions;

fn p(r: &RingRef, s: &str) -> Poly {
    parse_poly(r, s).unwrap()
}

fn sub(m: &CartierModule, cols: &[&[&str]]) -> Submodule {
    let r = m.ring();
    Submodule::new(m.module(), cols.iter().map(|c| Vector::from_polys(r, &c.iter().map(|s| p(r, s)).collect::<Vec<_>>())).collect())
}

fn section3(pr: u32) -> CartierModule {
    let r = Ring::new(pr, &["x", "y"]).unwrap();
    let e = (pr - 1).to_string();
    let op = CartierOp::new(
        1,
        vec![vec![p(&r, "x"), p(&r, "0")], vec![p(&r, &format!("x^{e}")), p(&r, &format!("(x*y)^{e}"))]],
    )
    .unwrap();
    let m = PresentedModule::direct_sum_of_cyclics(&r, &[Ideal::zero(&r), Ideal::parse(&r, &["x"]).unwrap()]).unwrap();
    CartierModule::validate(&m, &CartierAlgebraSpec::single(op)).unwrap()
}

#[test]
fn section3_test_elements_and_regularity() {
    let m = section3(3);
    let opts = TauOptions::default();
    let seq = m.find_test_elements(&opts).unwrap();
    let got: Vec<(String, String)> = seq.iter().map(|t| (t.eta.ideal.to_string(), t.c.to_string())).collect();
    assert_eq!(got, vec![("(0)".to_string(), "x".to_string()), ("(x)".to_string(), "y".to_string())]);
    assert!(m.is_f_regular(&opts).unwrap());
    let (under, _) = m.underline().unwrap();
    let piece = m.torsion_part(&under, &Ideal::parse(m.ring(), &["x"]).unwrap()).unwrap();
    let (pm, _) = m.restrict(&piece).unwrap();
    assert!(!pm.is_f_regular(&opts).unwrap());
}

#[test]
fn intro_example_tau_and_tau_prime() {
    let r = Ring::new(2, &["x", "y"]).unwrap();
    let op = CartierOp::diagonal(1, &[p(&r, "y"), p(&r, "x")]).unwrap();
    let m = PresentedModule::direct_sum_of_cyclics(&r, &[Ideal::parse(&r, &["y"]).unwrap(), Ideal::zero(&r)]).unwrap();
    let cm = CartierModule::validate(&m, &CartierAlgebraSpec::single(op)).unwrap();
    let opts = TauOptions::default();
    let tau = cm.tau(&opts).unwrap().submodule;
    assert!(tau.equals(&sub(&cm, &[&["1", "0"], &["0", "x"]])).unwrap());
    let taup = cm.tau_prime(&opts).unwrap().submodule;
    assert!(taup.equals(&sub(&cm, &[&["0", "x"]])).unwrap());
}

#[test]
fn principal_twist_floor_formula() {
    for pr in [2u32, 3, 5] {
        let r = Ring::new(pr, &["y"]).unwrap();
        let alg = CartierAlgebraSpec::single(CartierOp::scalar(1, &Poly::one(&r), 1).unwrap());
        for (n, d) in [(1i64, 2i64), (1, 1), (3, 2), (2, 1), (5, 2)] {
            let t = Rat::new(n, d);
            let tw = alg.twisted(&Ideal::parse(&r, &["y"]).unwrap(), t).unwrap();
            let cm = CartierModule::free(&tw);
            let tau = cm.tau(&TauOptions::default()).unwrap().submodule;
            let k = (n / d) as u64;
            let expect = Submodule::new(cm.module(), vec![Vector::from_poly_at(&p(&r, "y").pow(k).unwrap(), 0)]);
            assert!(tau.equals(&expect).unwrap(), "p={pr} t={n}/{d}: {:?}", tau);
        }
    }
}
