//! Cross-ply membrane response checked against a hand-expanded 2x2 solve.

use approx::assert_relative_eq;
use vesselopt::materials::MaterialDb;
use vesselopt::mechanics::{laminate_solve, Lamina, MembraneForces, Ply};

#[test]
fn cross_ply_matches_cramer_rule() {
    let db = MaterialDb::bundled();
    let card = db.composite("GF-PP").unwrap();
    let (e1, e2, nu12) = (card.e11, card.e22, card.nu12);
    let t = 0.7;

    let nu21 = nu12 * e2 / e1;
    let d = 1.0 - nu12 * nu21;
    let q11 = e1 / d;
    let q22 = e2 / d;
    let q12 = nu12 * e2 / d;
    // a 0 ply and a 90 ply of equal thickness
    let a11 = (q11 + q22) * t;
    let a22 = a11;
    let a12 = 2.0 * q12 * t;
    let (n1, n2) = (250.0, 500.0);
    let det = a11 * a22 - a12 * a12;
    let ex = (n1 * a22 - a12 * n2) / det;
    let ey = (a11 * n2 - a12 * n1) / det;

    let lamina = Lamina::from(card);
    let plies = [0.0, 90.0].map(|angle| Ply { lamina, angle, thickness: t });
    let f = MembraneForces { pressure: 2.0, n_phi: n1, n_theta: n2 };
    let s = laminate_solve(&plies, &f, 0).unwrap();
    assert_relative_eq!(s.strain[0], ex, max_relative = 1e-10);
    assert_relative_eq!(s.strain[1], ey, max_relative = 1e-10);
    assert!(s.strain[2].abs() < 1e-15);

    // the 0 ply sees the meridional strain along its fibers
    let sigma1_zero = q11 * ex + q12 * ey;
    assert_relative_eq!(s.plies[0].material[0], sigma1_zero, max_relative = 1e-10);
    let sigma1_ninety = q11 * ey + q12 * ex;
    assert_relative_eq!(s.plies[1].material[0], sigma1_ninety, max_relative = 1e-10);
    assert_relative_eq!(s.energy_density, 0.5 * (n1 * ex + n2 * ey), max_relative = 1e-12);
}
