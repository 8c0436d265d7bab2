//! Integration checks for the depth-2 package, where the half-depth layer
//! carries a genuine symplectic space and the building block is the
//! p-dimensional Heisenberg-Weil module.

use jetlie::cyclotomic::Cyc;
use jetlie::group::{build_group, GroupKind, DEFAULT_GROUP_CAP};
use jetlie::lie::{coadjoint_orbit, generic_dual_element};
use jetlie::yu::{build_circ_tau, build_zero_toral_datum, theta_tau_at, verify_descent, zero_toral_characters};

#[test]
fn depth2_package() {
    let g = build_group(GroupKind::Sl2, 5, 2, DEFAULT_GROUP_CAP).unwrap();
    assert_eq!(g.order(), 1_875_000);
    let chars = zero_toral_characters(&g);
    // torus level Z/6 x Z/5 x Z/5: characters of exact depth 2
    assert_eq!(chars.len(), 120);
    let datum = build_zero_toral_datum(&g, chars[0].clone(), None).unwrap();
    assert_eq!(datum.torus.order(), 150);
    let pkg = build_circ_tau(&g, &datum).unwrap();
    // [G:K] = 20 and the Stone-von-Neumann block has dimension p
    assert_eq!(pkg.circ_k.order(), 93_750);
    assert_eq!(pkg.rho_dim, 5);
    let deg = theta_tau_at(&g, &pkg, &g.identity());
    assert_eq!(deg, Cyc::from_int(100));

    // descent: the ratio kappa(su) / (theta(s) kappa_s(u)) is a unit constant
    // in u, both at the central s = -1 and at a regular prime-to-p s
    let minus_one = g.index_of(&[g.ring.neg(1), 0, 0, g.ring.neg(1)]);
    let rep = verify_descent(&g, &datum, &pkg, minus_one).unwrap();
    assert!(rep.samples > 10);
    assert_eq!(rep.unit.abs2(), Cyc::one());
    let sreg = datum
        .torus
        .elements
        .iter()
        .copied()
        .find(|&i| {
            let m = g.element(i);
            g.element_order(&m) % g.p != 0 && !g.is_central(&m)
        })
        .unwrap();
    let rep2 = verify_descent(&g, &datum, &pkg, sreg).unwrap();
    assert!(rep2.samples >= 1);
    assert_eq!(rep2.unit.abs2(), Cyc::one());

    // the coadjoint orbit of the dual element matches the degree through
    // the q^(r+1) normalization: |orbit| = q^3 tau(1)
    let xstar = generic_dual_element(&g, &datum).unwrap();
    let (orbit, stab) = coadjoint_orbit(&g, &xstar);
    assert_eq!(stab, 150);
    assert_eq!(orbit.len(), 12_500);
    assert_eq!(orbit.len() as u128, 125 * 100);
}
