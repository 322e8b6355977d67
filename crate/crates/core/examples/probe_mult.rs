use gz4::green::orbit_equivalent;
use gz4::modgroup::{hecke_cosets, moebius_apply, CMPoint, GroupSpec, PointH, ProjectiveMatrix};
use rug::Float;

fn main() {
    let prec = 128u32;
    let g = GroupSpec::gamma0(3);
    let b = CMPoint::new(3, 0, 1).unwrap();
    let tb = b.tau(prec);
    println!("b = {} + {}i", tb.x.to_f64(), tb.y.to_f64());
    let reps = hecke_cosets(2, 3).unwrap();
    println!("{} cosets", reps.len());
    // small gamma in Gamma0(3)
    let mut gammas = vec![ProjectiveMatrix::identity()];
    for t in [-2i64, -1, 1, 2] {
        gammas.push(ProjectiveMatrix::new(1, t, 0, 1).unwrap());
    }
    for c in [-1i64, 1] {
        gammas.push(ProjectiveMatrix::new(1, 0, 3 * c, 1).unwrap());
        for t in [-1i64, 1] {
            gammas.push(ProjectiveMatrix::new(1, t, 3 * c, 1 + 3 * c * t).unwrap());
        }
    }
    let mut found: Vec<(f64, f64, usize)> = vec![];
    for rep in &reps {
        // rep^{-1} = adjugate up to scale; use adjugate for the inverse Moebius action
        let inv = rep.adjugate();
        for gam in &gammas {
            let img = moebius_apply(gam, &tb);
            let cand = moebius_apply(&inv, &img);
            if cand.y.to_f64() < 0.05 {
                continue;
            }
            // count multiplicity: how many cosets send cand into the orbit of b
            let mult = reps
                .iter()
                .filter(|r| orbit_equivalent(&g, &moebius_apply(r, &cand), &tb))
                .count();
            let (x, y) = (cand.x.to_f64(), cand.y.to_f64());
            if !found.iter().any(|(fx, fy, _)| (fx - x).abs() < 1e-9 && (fy - y).abs() < 1e-9) {
                found.push((x, y, mult));
                println!("tau_hat = {:.6} + {:.6}i  mult = {}", x, y, mult);
            }
        }
    }
    // also scan images under gamma for the candidate points themselves
    let _ = PointH::from_f64(0.0, 1.0, prec);
    let _: Float = Float::with_val(prec, 0);
}
