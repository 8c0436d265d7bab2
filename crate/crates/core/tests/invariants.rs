//! Cross-module invariants: reciprocity, transitivity of induction,
//! filtration behavior, relabeling invariance, and bound checks.

use jetlie::chartab::{
    dixon_character_table, henniart_bound_check, litmus_match, CharacterTable,
};
use jetlie::classfn::{induce, inner_product, restrict, subgroup_inner_product, SubgroupFunction};
use jetlie::cyclotomic::{rat, rat_int, Cyc, Rat};
use jetlie::group::{build_group, GroupKind, JetGroup, TorusKind, DEFAULT_GROUP_CAP};
use jetlie::roots::load_root_system;
use jetlie::torus::{enumerate_torus_points, torus_order};
use jetlie::yu::{regular_torus_characters, vreg_pattern};
use num::BigInt;

fn all_cyclic_subgroups(g: &JetGroup) -> Vec<jetlie::group::SubgroupModel> {
    let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    let mut out = Vec::new();
    for i in 0..g.order() as u32 {
        let x = g.element(i);
        let mut members = vec![g.identity_index()];
        let mut y = x;
        while y != g.identity() {
            members.push(g.index_of(&y));
            y = g.mul(&y, &x);
        }
        members.sort_unstable();
        members.dedup();
        if seen.insert(members.clone()) {
            let mut bitmap = vec![false; g.order()];
            for &m in &members {
                bitmap[m as usize] = true;
            }
            out.push(g.subgroup_from_predicate(|m| bitmap[g.index_of(m) as usize]));
        }
    }
    out
}

#[test]
fn frobenius_reciprocity_sl2_f3_all_cyclic_and_named() {
    let g = build_group(GroupKind::Sl2, 3, 0, DEFAULT_GROUP_CAP).unwrap();
    let table = dixon_character_table(&g).unwrap();
    let mut subgroups = all_cyclic_subgroups(&g);
    subgroups.push(g.subgroup_from_predicate(|m| m[2] == 0)); // borel
    subgroups.push(g.torus_subgroup(TorusKind::Split));
    subgroups.push(g.torus_subgroup(TorusKind::Elliptic));
    for h in &subgroups {
        // a class function on H: the element order is a class invariant
        let f = SubgroupFunction {
            values: h
                .elements
                .iter()
                .map(|&i| Cyc::from_int(g.element_order(&g.element(i)) as i64))
                .collect(),
        };
        let ind = induce(&g, h, &f);
        for row in &table.rows {
            let chi = jetlie::classfn::ClassFunction { values: row.clone() };
            let lhs = inner_product(&g, &ind, &chi).unwrap();
            let rhs = subgroup_inner_product(h, &f, &restrict(&g, h, &chi));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn frobenius_reciprocity_sl2_f5_sampled() {
    let g = build_group(GroupKind::Sl2, 5, 0, DEFAULT_GROUP_CAP).unwrap();
    let table = dixon_character_table(&g).unwrap();
    let mut subgroups = all_cyclic_subgroups(&g);
    subgroups.push(g.subgroup_from_predicate(|m| m[2] == 0));
    subgroups.push(g.torus_subgroup(TorusKind::Split));
    subgroups.push(g.torus_subgroup(TorusKind::Elliptic));
    for h in &subgroups {
        // a class function on H: the element order is a class invariant
        let f = SubgroupFunction {
            values: h
                .elements
                .iter()
                .map(|&i| Cyc::from_int(g.element_order(&g.element(i)) as i64))
                .collect(),
        };
        let ind = induce(&g, h, &f);
        for row in table.rows.iter() {
            let chi = jetlie::classfn::ClassFunction { values: row.clone() };
            let lhs = inner_product(&g, &ind, &chi).unwrap();
            let rhs = subgroup_inner_product(h, &f, &restrict(&g, h, &chi));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn induction_is_transitive() {
    // K = split torus inside H = borel inside G = SL2(F_5)
    let g = build_group(GroupKind::Sl2, 5, 0, DEFAULT_GROUP_CAP).unwrap();
    let h = g.subgroup_from_predicate(|m| m[2] == 0);
    let k = g.torus_subgroup(TorusKind::Split);
    // class function on K: any function constant on K-classes works for the
    // character-level statement; K is abelian
    let f = SubgroupFunction {
        values: (0..k.order())
            .map(|i| Cyc::from_int((i % 4) as i64 - 1))
            .collect(),
    };
    // direct induction K -> G
    let direct = induce(&g, &k, &f);
    // two-step: first induce at the level of H by the Frobenius sum over a
    // transversal of H/K computed inside H
    let mut h_transversal: Vec<u32> = Vec::new();
    let mut covered = vec![false; g.order()];
    for &e in &h.elements {
        if covered[e as usize] {
            continue;
        }
        h_transversal.push(e);
        let em = g.element(e);
        for &kk in &k.elements {
            let x = g.index_of(&g.mul(&em, &g.element(kk)));
            covered[x as usize] = true;
        }
    }
    let step: Vec<Cyc> = h
        .elements
        .iter()
        .map(|&x| {
            let xm = g.element(x);
            let mut acc = Cyc::zero(1);
            for &t in &h_transversal {
                let tm = g.element(t);
                let y = g.mul(&g.mul(&g.inv(&tm), &xm), &tm);
                if let Some(v) = f.at(&k, g.index_of(&y)) {
                    acc = acc.add(v);
                }
            }
            acc
        })
        .collect();
    let two_step = induce(&g, &h, &SubgroupFunction { values: step });
    for (a, b) in direct.values.iter().zip(&two_step.values) {
        assert_eq!(a, b);
    }
}

#[test]
fn moy_prasad_commutator_filtration_depth2() {
    let g = build_group(GroupKind::Sl2, 5, 2, DEFAULT_GROUP_CAP).unwrap();
    let k1 = g.congruence_kernel(1);
    let k2 = g.congruence_kernel(2);
    let k3 = g.congruence_kernel(3);
    assert_eq!(k1.order(), 5usize.pow(6));
    assert_eq!(k2.order(), 5usize.pow(3));
    assert_eq!(k3.order(), 1);
    // nesting
    for &i in &k2.elements {
        assert!(k1.contains(i));
    }
    // [K_1, K_1] inside K_2, [K_1, K_2] inside K_3 = 1
    for (a_step, b_step, target) in [(101usize, 103usize, &k2), (101, 1, &k3)] {
        let bs: &jetlie::group::SubgroupModel = if b_step == 1 { &k2 } else { &k1 };
        for &a in k1.elements.iter().step_by(a_step) {
            for &b in bs.elements.iter().step_by(b_step * 7) {
                let (am, bm) = (g.element(a), g.element(b));
                let comm = g.mul(&g.mul(&am, &bm), &g.inv(&g.mul(&bm, &am)));
                assert!(target.contains(g.index_of(&comm)));
            }
        }
    }
}

#[test]
fn litmus_is_relabeling_invariant() {
    let g = build_group(GroupKind::Sl2, 5, 0, DEFAULT_GROUP_CAP).unwrap();
    let t = dixon_character_table(&g).unwrap();
    let torus = g.torus_subgroup(TorusKind::Elliptic);
    let chi = &regular_torus_characters(&g, &torus)[1];
    let pattern = vreg_pattern(&g, &torus, chi);
    let before = litmus_match(&t, &pattern, &[1, -1]);
    // permute the classes of the table (relabeling)
    let k = t.class_names.len();
    let perm: Vec<usize> = (0..k).map(|i| (i + 3) % k).collect();
    let permuted = CharacterTable {
        group_order: t.group_order,
        class_names: perm.iter().map(|&i| t.class_names[i].clone()).collect(),
        class_orders: perm.iter().map(|&i| t.class_orders[i]).collect(),
        class_sizes: perm.iter().map(|&i| t.class_sizes[i]).collect(),
        centralizer_orders: perm.iter().map(|&i| t.centralizer_orders[i]).collect(),
        class_type: perm.iter().map(|&i| t.class_type[i]).collect(),
        tori: perm.iter().map(|&i| t.tori[i].clone()).collect(),
        row_names: t.row_names.clone(),
        rows: t
            .rows
            .iter()
            .map(|r| perm.iter().map(|&i| r[i].clone()).collect())
            .collect(),
        unipotent_rows: t.unipotent_rows.clone(),
    };
    let inv: Vec<usize> = {
        let mut v = vec![0; k];
        for (new, &old) in perm.iter().enumerate() {
            v[old] = new;
        }
        v
    };
    let pattern2: Vec<(usize, Cyc)> = pattern
        .iter()
        .map(|(c, v)| (inv[*c], v.clone()))
        .collect();
    let after = litmus_match(&permuted, &pattern2, &[1, -1]);
    assert_eq!(before, after);
}

#[test]
fn henniart_bound_values() {
    // SL2(F_9): bound 1 - (2/10) 2 = 3/5 > 1/2, and the matched row clears it
    let g9 = build_group(GroupKind::Sl2, 9, 0, DEFAULT_GROUP_CAP).unwrap();
    let t9 = dixon_character_table(&g9).unwrap();
    let torus9 = g9.torus_subgroup(TorusKind::Elliptic);
    let chi = &regular_torus_characters(&g9, &torus9)[0];
    let pattern = vreg_pattern(&g9, &torus9, chi);
    let matches = litmus_match(&t9, &pattern, &[1, -1]);
    assert_eq!(matches.len(), 1);
    let report = henniart_bound_check(&g9, &t9.rows[matches[0].0], 10, 2, 2).unwrap();
    assert_eq!(report.lower_bound, rat(3, 5));
    assert!(report.hypothesis_holds);
    assert!(report.satisfied);
    let vreg = report.vreg_self_inner.try_to_rat().unwrap();
    assert!(vreg > Rat::new(BigInt::from(1), BigInt::from(2)));

    // SL2(F_5): bound 1 - (2/6) 2 = 1/3 <= 1/2, hypothesis fails (flagged)
    let g5 = build_group(GroupKind::Sl2, 5, 0, DEFAULT_GROUP_CAP).unwrap();
    let t5 = dixon_character_table(&g5).unwrap();
    let report5 = henniart_bound_check(&g5, &t5.rows[4], 6, 2, 2).unwrap();
    assert_eq!(report5.lower_bound, rat(1, 3));
    assert!(!report5.hypothesis_holds);
}

#[test]
fn torus_order_matches_enumeration_all_g2_classes() {
    let rs = load_root_system("G2").unwrap();
    for class in ["empty", "A1", "A1t", "A1xA1t", "A2", "G2"] {
        let wc = rs.class(class).unwrap();
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let order = torus_order(&rs, wc, q).unwrap();
            let (_, pts) = enumerate_torus_points(&rs, wc, q, 1 << 22).unwrap();
            assert_eq!(pts.len() as u128, order, "{} q={}", class, q);
        }
    }
}

#[test]
fn weyl_transporter_reduction_bijection() {
    // the transporter count is the same at depth 0 and depth 1 levels
    for q in [5u64, 7] {
        let g0 = build_group(GroupKind::Sl2, q, 0, DEFAULT_GROUP_CAP).unwrap();
        let g1 = build_group(GroupKind::Sl2, q, 1, DEFAULT_GROUP_CAP).unwrap();
        for kind in [TorusKind::Elliptic, TorusKind::Split] {
            let t0 = g0.torus_subgroup(kind);
            let t1 = g1.torus_subgroup(kind);
            assert_eq!(
                g0.weyl_transporter(&t0, &t0).len(),
                g1.weyl_transporter(&t1, &t1).len()
            );
        }
    }
}

#[test]
fn locus_inner_products_partition() {
    let g = build_group(GroupKind::Sl2, 5, 1, DEFAULT_GROUP_CAP).unwrap();
    let t = dixon_character_table(&g).unwrap();
    let cls = g.classes();
    let vreg: Vec<bool> = cls.flags.iter().map(|f| f.very_regular).collect();
    let rest: Vec<bool> = vreg.iter().map(|b| !b).collect();
    for i in [0usize, 11, 30] {
        for j in [3usize, 22] {
            let a = jetlie::classfn::ClassFunction { values: t.rows[i].clone() };
            let b = jetlie::classfn::ClassFunction { values: t.rows[j].clone() };
            let full = inner_product(&g, &a, &b).unwrap();
            let p1 = jetlie::classfn::inner_product_on(&g, &a, &b, &vreg).unwrap();
            let p2 = jetlie::classfn::inner_product_on(&g, &a, &b, &rest).unwrap();
            assert_eq!(full, p1.add(&p2));
            let expected = Cyc::from_int(i64::from(i == j));
            assert_eq!(full, expected);
        }
    }
    let _ = rat_int(0);
}
