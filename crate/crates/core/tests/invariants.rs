//! Exact identities checked across the zoo.

mod common;

use std::sync::Arc;

use common::Img;
use dessins_core::bsgs::bsgs_order;
use dessins_core::census::{dessin_census, Census};
use dessins_core::formulas::generating_pair_coverage;
use dessins_core::group::IDENTITY;
use dessins_core::lattice::{
    check_delta_identity, enumerate_subgroups, moebius_table, phi2_of_subgroup,
};
use dessins_core::perm::enumerate_elements;
use dessins_core::tsystems::{
    apply_nielsen, apply_word, apply_word_to_class, omega_orbits, omega_orbits_with, NielsenMove,
    INVERT_BOTH, ROTATION,
};
use dessins_core::ucover::{
    closed_form_ucover, generators_commute, ucover_generators, ucover_record, BlockLayout,
};
use dessins_core::zoo::{construct_group, parse_descriptor, GroupDescriptor};
use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};

fn census_of(desc: &GroupDescriptor) -> Census {
    dessin_census(Arc::new(construct_group(desc).unwrap())).unwrap()
}

fn named(d: &str) -> Census {
    census_of(&parse_descriptor(d).unwrap())
}

#[test]
fn dual_paths_agree_up_to_order_1100() {
    let zoo = common::zoo_up_to(1100);
    assert!(zoo.len() > 80);
    for desc in &zoo {
        let c = census_of(desc);
        let rep = c.report();
        assert_eq!(rep.phi2, rep.phi2_moebius, "{desc}: pair counts");
        assert_eq!(rep.moebius_r, c.r(), "{desc}: class counts");
        assert_eq!(
            rep.phi2,
            BigUint::from(c.r() as u64 * c.aut().order()),
            "{desc}: semiregularity"
        );
        assert!(check_delta_identity(c.lattice(), c.moebius()), "{desc}");
        assert_eq!(
            c.aut().inn_order() * c.aut().out_order(),
            c.aut().order(),
            "{desc}"
        );
        for class in c.classes() {
            let [l, m, n] = class.dessin_type;
            if class.genus.is_zero() {
                assert!(
                    m * n + l * n + l * m > l * m * n,
                    "{desc}: planar class {}",
                    class.class_id
                );
            }
        }
    }
}

#[test]
fn pair_counts_over_subgroups_sum_to_all_pairs() {
    for desc in common::zoo_up_to(360) {
        let g = construct_group(&desc).unwrap();
        let lattice = enumerate_subgroups(&g).unwrap();
        let total: BigUint = (0..lattice.len())
            .map(|h| phi2_of_subgroup(&lattice, h).unwrap())
            .sum();
        let n = g.order();
        assert_eq!(total, n * n, "{desc}");
    }
}

#[test]
fn moebius_top_is_one_and_delta_holds() {
    for desc in common::zoo_up_to(720) {
        let g = construct_group(&desc).unwrap();
        let lattice = enumerate_subgroups(&g).unwrap();
        let mu = moebius_table(&lattice);
        assert_eq!(mu.get(lattice.top()), 1, "{desc}");
        assert!(check_delta_identity(&lattice, &mu), "{desc}");
    }
}

#[test]
fn stabilizer_chain_order_matches_enumeration() {
    let zoo = common::zoo_up_to(5000);
    assert!(zoo
        .iter()
        .any(|d| d.expected_order() > BigUint::from(2000u32)));
    for desc in zoo {
        let g = construct_group(&desc).unwrap();
        let order = bsgs_order(g.generators()).unwrap();
        assert_eq!(order, desc.expected_order(), "{desc}");
        assert_eq!(
            BigUint::from(enumerate_elements(g.generators(), 10_000).unwrap().len()),
            order,
            "{desc}"
        );
    }
}

#[test]
fn simple_groups_every_element_in_a_generating_pair() {
    for d in ["A5", "PSL2_7", "PSL2_8"] {
        let c = named(d);
        assert!(generating_pair_coverage(&c), "{d}");
        // Independent search by closure for a partner of every element.
        let t = c.table();
        let elems: Vec<Img> = t.elements().iter().map(|p| p.images().to_vec()).collect();
        let degree = elems[0].len();
        for (i, x) in elems.iter().enumerate() {
            if i == IDENTITY as usize {
                continue;
            }
            let found = elems
                .iter()
                .any(|y| common::closure(degree, &[x.clone(), y.clone()]).len() == elems.len());
            assert!(found, "{d}: element {i}");
        }
    }
}

#[test]
fn orbit_lengths_sum_to_class_count() {
    for desc in common::zoo_up_to(1100) {
        let c = census_of(&desc);
        let report = omega_orbits(&c);
        assert_eq!(
            report.orbits.iter().map(|o| o.length).sum::<usize>(),
            c.r(),
            "{desc}"
        );
        assert_eq!(report.nu, report.orbits.len());
        let small = omega_orbits_with(&c, &NielsenMove::SMALL);
        assert_eq!(report.partition(), small.partition(), "{desc}");
        for o in &report.orbits {
            for &k in &o.classes {
                let class = &c.classes()[k];
                assert_eq!(class.commutator_order, o.commutator_order, "{desc}");
                assert_eq!(class.higman_label, o.higman_label, "{desc}");
            }
        }
    }
}

#[test]
fn abelian_and_dihedral_groups_have_one_orbit() {
    for n in 1..=30 {
        assert_eq!(omega_orbits(&named(&format!("C{n}"))).nu, 1, "C{n}");
    }
    for n in 3..=12 {
        assert_eq!(omega_orbits(&named(&format!("D{n}"))).nu, 1, "D{n}");
    }
}

#[test]
fn other_lift_of_the_multiplication_move() {
    for d in ["A5", "S4", "PSL2_7", "F_13_3"] {
        let c = named(d);
        let t = c.table();
        for class in c.classes() {
            let (x, y) = class.rep;
            let other = c.class_of(x, t.mul(x, y)).unwrap();
            assert_eq!(
                apply_nielsen(&c, NielsenMove::E5, class.class_id),
                other,
                "{d}"
            );
        }
    }
}

#[test]
fn inversion_and_rotation_words() {
    use NielsenMove::*;
    for d in ["A5", "S4", "PSL2_7", "D5", "C12"] {
        let c = named(d);
        let t = c.table();
        for class in c.classes() {
            let k = class.class_id;
            let (x, y) = class.rep;
            let direct = c.class_of(t.inv(x), t.inv(y)).unwrap();
            assert_eq!(apply_word_to_class(&c, &INVERT_BOTH, k), direct, "{d}");
            assert_eq!(apply_word_to_class(&c, &[E1, E2, E1, E2], k), direct, "{d}");
            assert_eq!(class.reflexible, direct == k);

            let rotated = apply_word_to_class(&c, &ROTATION, k);
            let [l, m, n] = class.dessin_type;
            assert_eq!(c.classes()[rotated].dessin_type, [n, l, m], "{d}");
            let three: Vec<NielsenMove> = ROTATION.iter().cycle().take(12).copied().collect();
            assert_eq!(apply_word_to_class(&c, &three, k), k, "{d}");

            let (a, b) = apply_word(t, &ROTATION, (x, y));
            assert_eq!(c.class_of(a, b), Some(rotated));
        }
    }
}

#[test]
fn cover_orders_divide_products_of_orbit_covers() {
    for d in ["C6", "V4", "D5", "D6", "A4", "S4", "F_7_3", "SL2_3", "A5"] {
        let c = named(d);
        let report = omega_orbits(&c);
        let whole = ucover_record(&c, None, BlockLayout::Natural).unwrap();
        let g = c.group().order().clone();
        let mut product = BigUint::one();
        for o in &report.orbits {
            let part =
                ucover_record(&c, Some((&report, o.orbit_id)), BlockLayout::Natural).unwrap();
            assert!(
                g.pow(o.length as u32).is_multiple_of(&part.order),
                "{d} orbit {}",
                o.orbit_id
            );
            product *= &part.order;
        }
        assert!(product.is_multiple_of(&whole.order), "{d}");
        assert!(whole.order.is_multiple_of(&g), "{d}");
    }
}

#[test]
fn abelian_cover_generators_commute() {
    for d in ["V4", "C2", "C5", "C8", "C12"] {
        let c = named(d);
        let classes: Vec<usize> = (0..c.r()).collect();
        let (x, y) = ucover_generators(&c, &classes, BlockLayout::Natural).unwrap();
        assert!(generators_commute(&x, &y), "{d}");
    }
    let c = named("S3");
    let classes: Vec<usize> = (0..c.r()).collect();
    let (x, y) = ucover_generators(&c, &classes, BlockLayout::Natural).unwrap();
    assert!(!generators_commute(&x, &y));
}

#[test]
fn computed_covers_match_closed_forms() {
    let mut names: Vec<String> = (1..=12).map(|n| format!("C{n}")).collect();
    names.extend(["D3", "D5", "D7", "V4", "F_7_3", "F_13_3"].map(String::from));
    for d in &names {
        let desc = parse_descriptor(d).unwrap();
        let computed = ucover_record(&census_of(&desc), None, BlockLayout::Natural).unwrap();
        let predicted = closed_form_ucover(&desc).unwrap();
        assert_eq!(computed.order, predicted.order, "{d}");
        assert_eq!(computed.genus, predicted.genus, "{d}");
        assert_eq!(computed.cover_type, predicted.cover_type, "{d}");
    }
}

#[test]
fn simple_cover_types_are_the_exponent() {
    let c = named("A5");
    let e = c.table().exponent();
    let rec = ucover_record(&c, None, BlockLayout::Natural).unwrap();
    assert_eq!(rec.cover_type, [e, e, e]);

    // L2(7): the whole cover is large, so combine the orbit covers' types.
    let c = named("PSL2_7");
    let e = c.table().exponent();
    assert_eq!(e, 84);
    let report = omega_orbits(&c);
    let mut lcm = [1u64; 3];
    for o in &report.orbits {
        let rec = ucover_record(&c, Some((&report, o.orbit_id)), BlockLayout::Natural).unwrap();
        for (acc, t) in lcm.iter_mut().zip(rec.cover_type) {
            *acc = num_integer::lcm(*acc, t);
        }
    }
    assert_eq!(lcm, [e, e, e]);
}
