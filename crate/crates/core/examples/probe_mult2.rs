use gz4::green::{green_pair, hecke_translate, pole_coefficient, GreenSpec};
use gz4::modgroup::{CMPoint, GroupSpec, PointH};
use rug::Float;

fn main() {
    let prec = 128u32;
    let g = GroupSpec::gamma0(3);
    let b = CMPoint::new(3, 0, 1).unwrap();
    let tb = b.tau(prec);
    let target = Float::with_val(prec, 1e-8);
    let spec = GreenSpec { group: g.clone(), pole: b };

    // reference: coefficient of G(., b) at its own pole
    let mut f0 = |tau: &PointH| green_pair(&g, tau, &tb, &target);
    let (c0, rms0) = pole_coefficient(&mut f0, &tb).unwrap();
    println!("c0 = {}  rms = {:.3e}", c0.to_f64(), rms0.to_f64());

    // mult-1 point: 1 + 2i/sqrt(3)
    let y2 = 2.0 / 3f64.sqrt();
    let t1 = PointH::from_f64(1.0, y2, prec);
    let mut f1 = |tau: &PointH| hecke_translate(2, &spec, tau, &target);
    let (c1, rms1) = pole_coefficient(&mut f1, &t1).unwrap();
    println!("c1 = {}  ratio = {}  rms = {:.3e}", c1.to_f64(), (c1.clone() / &c0).to_f64(), rms1.to_f64());

    // mult-3 point: 1/2 + i/(2 sqrt(3))
    let t3 = PointH::from_f64(0.5, 0.5 / 3f64.sqrt(), prec);
    let mut f3 = |tau: &PointH| hecke_translate(2, &spec, tau, &target);
    let (c3, rms3) = pole_coefficient(&mut f3, &t3).unwrap();
    println!("c3 = {}  ratio = {}  rms = {:.3e}", c3.to_f64(), (c3.clone() / &c0).to_f64(), rms3.to_f64());
}
