use gz4::green::green_pair_with_cutoff;
use gz4::modgroup::{CMPoint, GroupSpec};
use rug::Float;
use std::time::Instant;

fn main() {
    let g = GroupSpec::parse_label("G0(2)+2").unwrap();
    let pole = CMPoint::new(3, 2, 2).unwrap();
    let at = CMPoint::new(1, 0, 1).unwrap();
    let prec = 200u32;
    let tau = at.tau(prec);
    let sigma = pole.tau(prec);
    let target = Float::with_val(prec, 1e-13);
    let mut prev: Option<Float> = None;
    for q in [1.0e5f64, 4.0e5, 1.6e6, 6.4e6] {
        let t0 = Instant::now();
        let r = green_pair_with_cutoff(&g, &tau, &sigma, &target, Some(q)).unwrap();
        let dt = t0.elapsed().as_secs_f64();
        let d = prev.as_ref().map(|p| (r.value.clone() - p).abs().to_f64());
        println!("q={:9.1e} t={:7.2}s val={:.20e} bound={:.2e} diff={:?}", q, dt, r.value.to_f64(), r.error_bound.to_f64(), d);
        prev = Some(r.value.clone());
    }
}
