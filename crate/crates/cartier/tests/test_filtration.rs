use cartier::cartiercore::{CartierAlgebraSpec, CartierModule, CartierOp};
use cartier::filtration::{gr, inequality_checks, jumping_numbers, mixed_checks, Spectrum, SpectrumPolicy, TauOracle};
use cartier::fpmod::{PresentedModule, Submodule};
use cartier::fppoly::{parse_poly, Poly, Ring, RingRef};
use cartier::idealkit::{Ideal, Vector};
use cartier::rational::Rat;
use cartier::testmod::TauOptions;

fn p(r: &RingRef, s: &str) -> Poly {
    parse_poly(r, s).unwrap()
}

fn plain(r: &RingRef) -> CartierModule {
    CartierModule::free(&CartierAlgebraSpec::single(CartierOp::scalar(1, &Poly::one(r), 1).unwrap()))
}

fn ideal(r: &RingRef, gens: &[&str]) -> Ideal {
    Ideal::parse(r, gens).unwrap()
}

#[test]
fn integer_jumps_of_a_coordinate() {
    let r = Ring::new(2, &["y"]).unwrap();
    let oracle = TauOracle::new(&plain(&r), &ideal(&r, &["y"]), TauOptions::default(), 16).unwrap();
    assert!(oracle.is_fast_path());
    let spec = jumping_numbers(&oracle, &Rat::from_integer(3), (1, 2), SpectrumPolicy::Strict, None).unwrap();
    assert_eq!(spec.jump_values(), vec![Rat::from_integer(1), Rat::from_integer(2), Rat::from_integer(3)]);
    assert_eq!(spec.kind, Spectrum::Exact);
    for j in &spec.jumps {
        assert!(j.right_continuous);
        let k = j.t.to_integer() as u64;
        let y = p(&r, "y");
        let want = Submodule::new(oracle.module().module(), vec![Vector::from_poly_at(&y.pow(k).unwrap(), 0)]);
        assert!(j.tau_at.equals(&want).unwrap());
    }
}

#[test]
fn module_path_agrees_with_fast_path_on_jumps() {
    let r = Ring::new(2, &["x", "y"]).unwrap();
    let m = PresentedModule::direct_sum_of_cyclics(&r, &[ideal(&r, &["x"])]).unwrap();
    let cm = CartierModule::validate(&m, &CartierAlgebraSpec::single(CartierOp::scalar(1, &p(&r, "x"), 1).unwrap())).unwrap();
    let oracle = TauOracle::new(&cm, &ideal(&r, &["y"]), TauOptions::default(), 16).unwrap();
    assert!(!oracle.is_fast_path());
    let spec = jumping_numbers(&oracle, &Rat::from_integer(2), (0, 2), SpectrumPolicy::LowerBound, None).unwrap();
    assert_eq!(spec.jump_values(), vec![Rat::from_integer(1), Rat::from_integer(2)]);
    assert_eq!(spec.kind, Spectrum::LowerBound);
    assert!(jumping_numbers(&oracle, &Rat::from_integer(1), (0, 1), SpectrumPolicy::Strict, None).is_err());
}

#[test]
fn unit_ideal_has_no_jumps() {
    let r = Ring::new(3, &["x", "y"]).unwrap();
    let oracle = TauOracle::new(&plain(&r), &ideal(&r, &["1"]), TauOptions::default(), 16).unwrap();
    let spec = jumping_numbers(&oracle, &Rat::from_integer(2), (1, 1), SpectrumPolicy::Strict, None).unwrap();
    assert!(spec.jumps.is_empty());
}

#[test]
fn cusp_first_jump_p7() {
    let r = Ring::new(7, &["x", "y"]).unwrap();
    let f = p(&r, "x^2 + y^3");
    // one Frobenius root already shows tau(f^{5/6}) is a proper ideal
    let one_step = Ideal::principal(&f.pow(6).unwrap()).frobenius_root(1).unwrap();
    assert!(ideal(&r, &["x", "y"]).contains_ideal(&one_step).unwrap());
    let oracle = TauOracle::new(&plain(&r), &Ideal::principal(&f), TauOptions::default(), 16).unwrap();
    let spec = jumping_numbers(&oracle, &Rat::from_integer(1), (2, 2), SpectrumPolicy::Strict, None).unwrap();
    assert_eq!(spec.jumps[0].t, Rat::new(5, 6));
    assert_eq!(spec.denominator, 49 * 48);
}

#[test]
fn graded_piece_of_a_coordinate() {
    let r = Ring::new(2, &["y"]).unwrap();
    let oracle = TauOracle::new(&plain(&r), &ideal(&r, &["y"]), TauOptions::default(), 16).unwrap();
    let g = gr(&oracle, &Rat::from_integer(1), &Rat::new(1, 2)).unwrap();
    assert!(!g.module().is_zero_module().unwrap());
    assert!(g.is_f_pure().unwrap());
    let (under, _) = g.underline().unwrap();
    assert!(!under.is_zero());
    let quiet = gr(&oracle, &Rat::new(1, 2), &Rat::new(1, 4)).unwrap();
    assert!(quiet.module().is_zero_module().unwrap());
}

fn inclusion_example(r: &RingRef) -> CartierModule {
    let m = PresentedModule::direct_sum_of_cyclics(r, &[ideal(r, &["x"]), Ideal::zero(r)]).unwrap();
    let op = CartierOp::diagonal(1, &[p(r, "x"), p(r, "x")]).unwrap();
    CartierModule::validate(&m, &CartierAlgebraSpec::single(op)).unwrap()
}

#[test]
fn graded_piece_of_the_direct_sum() {
    let r = Ring::new(2, &["x", "y"]).unwrap();
    let cm = inclusion_example(&r);
    let first = Submodule::new(cm.module(), vec![Vector::unit(&r, 0)]);
    let (one, half) = (Rat::from_integer(1), Rat::new(1, 2));

    let legacy = TauOracle::new(&cm, &ideal(&r, &["y"]), TauOptions::default(), 16).unwrap().legacy();
    let before = legacy.tau_at(&half).unwrap().0.intersect(&first).unwrap();
    let at = legacy.tau_at(&one).unwrap().0.intersect(&first).unwrap();
    assert!(before.is_zero() && at.is_zero());
    assert!(!gr(&legacy, &one, &half).unwrap().module().is_zero_module().unwrap());

    let full = TauOracle::new(&cm, &ideal(&r, &["y"]), TauOptions::default(), 16).unwrap();
    let before = full.tau_at(&half).unwrap().0.intersect(&first).unwrap();
    let at = full.tau_at(&one).unwrap().0.intersect(&first).unwrap();
    assert!(before.equals(&first).unwrap());
    assert!(!at.equals(&first).unwrap());
}

#[test]
fn briancon_skoda() {
    let r = Ring::new(2, &["y"]).unwrap();
    let oracle = TauOracle::new(&plain(&r), &ideal(&r, &["y"]), TauOptions::default(), 16).unwrap();
    let lines = inequality_checks(&oracle, &Rat::from_integer(2), &Rat::new(1, 8)).unwrap();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l.passed), "{lines:?}");

    let r = Ring::new(3, &["x", "y"]).unwrap();
    let oracle = TauOracle::new(&plain(&r), &ideal(&r, &["x", "y"]), TauOptions::default(), 16).unwrap();
    let lines = inequality_checks(&oracle, &Rat::from_integer(1), &Rat::new(1, 9)).unwrap();
    assert!(lines[0].passed);
    assert!(!lines.iter().any(|l| l.name.contains(" = tau(t) ")));
}

#[test]
fn mixed_briancon_skoda() {
    let r = Ring::new(2, &["x", "y"]).unwrap();
    let factors = vec![(ideal(&r, &["y"]), Rat::from_integer(1)), (ideal(&r, &["x"]), Rat::from_integer(1))];
    let lines = mixed_checks(&plain(&r), &factors, &Rat::new(1, 4), &TauOptions::default()).unwrap();
    assert!(lines.iter().all(|l| l.passed), "{lines:?}");
}
