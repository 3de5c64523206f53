use std::time::Instant;
fn main() {
    let f = hhmeans::ConvexFn::exp();
    let spec = hhmeans::QuadratureSpec::default();
    let t0 = Instant::now();
    let r = hhmeans::hh::cor215_integrated(&f, -3.2, 5.1, &spec).unwrap();
    println!("one cor215: {:?}  evals={} est={:.2e}", t0.elapsed(), r.est_error, r.est_error);
    let t0 = Instant::now();
    let mut n = 0u64;
    for i in 0..20 {
        let x = -6.9 + 0.6 * i as f64;
        let r = hhmeans::hh::cor215_integrated(&f, x, 6.9 - 0.3 * i as f64, &spec).unwrap();
        n += 1;
        std::hint::black_box(r);
    }
    println!("20 cor215 evals: {:?} ({n})", t0.elapsed());
}
