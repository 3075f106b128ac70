use gmlife_core::oracle::{integrate_survival, relative_tolerance};
use gmlife_core::{annuity, remaining_life, Age, GmParams, Rate};

fn basis() -> GmParams {
    GmParams::new(0.001, 0.000_012, 0.101_314).unwrap()
}

#[test]
fn annuity_stays_accurate_while_ageing_term_grows() {
    let p = basis();
    let r = Rate::new(0.026_559).unwrap();
    // β e^{γx}/γ runs from about 1e-4 to about 700 across this range
    for x in (0..=154).step_by(7) {
        let x = Age::new(x as f64).unwrap();
        let closed = annuity(&p, r, x).unwrap();
        let quad = relative_tolerance(1e-11, |t| integrate_survival(&p, r, x, t)).unwrap();
        assert!(closed.is_finite() && closed > 0.0);
        assert!(
            ((closed - quad.value) / quad.value).abs() < 1e-9,
            "x = {}",
            x.years()
        );
    }
}

#[test]
fn remaining_life_decreases_to_the_hazard_reciprocal() {
    let p = basis();
    let mut prev = f64::INFINITY;
    for x in (0..=160).step_by(5) {
        let e = remaining_life(&p, Age::new(x as f64).unwrap()).unwrap();
        assert!(e < prev);
        prev = e;
    }
    let x: f64 = 160.0;
    let mu = 0.001 + 0.000_012 * (0.101_314 * x).exp();
    assert!(prev < 1.0 / mu && prev > 0.5 / mu);
}
