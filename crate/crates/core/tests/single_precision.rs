use powerq::{d_nq, integral, DiffConfig, QuantumParams, RealFunction, SeriesConfig};

#[test]
fn operator_and_integral_in_f32() {
    let p = QuantumParams::<f32>::new(1, 0.5).unwrap();
    let square = RealFunction::<f32>::parse("t^2").unwrap();
    assert_eq!(d_nq(&p, &square, 2.0, &DiffConfig::default()).unwrap(), 3.0);

    let t = RealFunction::<f32>::identity();
    let r = integral(&p, &t, 0.0, 1.0, &SeriesConfig::default()).unwrap();
    assert!(r.converged);
    assert!((r.value - 2.0 / 3.0).abs() < 1e-6, "{}", r.value);
}

#[test]
fn cubic_lattice_in_f32() {
    let p = QuantumParams::<f32>::new(3, 0.5).unwrap();
    let f = RealFunction::<f32>::parse("t^2").unwrap();
    assert_eq!(d_nq(&p, &f, 2.0, &DiffConfig::default()).unwrap(), 6.0);
}
