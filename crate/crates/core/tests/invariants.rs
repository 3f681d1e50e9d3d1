use gmkit::derivations::{derivation_space, is_derivation, verify_derivation_form};
use gmkit::families;
use gmkit::maps::{
    check_step_invariants, commuting_space, decompose, is_k_commuting, properness_certificate, space_maps, verify_block_structure,
    ProperFormPipeline,
};
use gmkit::oracle::{brute_k_commuting, brute_properness};
use gmkit::schema::{map_from_json, map_to_json};
use gmkit::{Element, Error, GMAlgebra, LinMap, RingSpec};
use proptest::prelude::*;

fn z(n: u64) -> RingSpec {
    RingSpec::zmod(n).unwrap()
}

fn map_from(ring: &RingSpec, dim: usize, entries: &[i64]) -> LinMap {
    let rows = entries.chunks(dim).map(|r| r.iter().map(|&v| ring.from_i64(v)).collect()).collect();
    LinMap::from_rows(rows).unwrap()
}

fn fixtures() -> Vec<GMAlgebra> {
    vec![
        families::full_matrix_gma(z(3), 2, 1).unwrap(),
        families::triangular_gma(z(3), 2, 1).unwrap(),
        families::triangular_gma(z(2), 3, 1).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn k_commuting_agrees_with_oracle(f in 0usize..3, k in 1usize..=3, seed in prop::collection::vec(-4i64..5, 36)) {
        let g = &fixtures()[f];
        let alg = g.algebra();
        let d = alg.dim();
        let theta = map_from(alg.ring(), d, &seed[..d * d]);
        let fast = is_k_commuting(alg, &theta, k).unwrap();
        let slow = brute_k_commuting(alg, &theta, k).unwrap();
        prop_assert_eq!(fast.holds, slow.is_none());
        if let Some(x) = fast.witness {
            let tx = theta.apply(alg.ring(), &x).unwrap();
            prop_assert!(!alg.iterated_bracket(&tx, &x, k).unwrap().is_zero(alg.ring()));
        }
        let space = commuting_space(alg, k).unwrap();
        prop_assert_eq!(space.contains(&theta.to_vector()), fast.holds);
    }

    #[test]
    fn properness_agrees_with_oracle(f in 0usize..3, seed in prop::collection::vec(-4i64..5, 36), pick in any::<prop::sample::Index>()) {
        let g = &fixtures()[f];
        let alg = g.algebra();
        let d = alg.dim();
        // Half the cases come from the commuting space so proper maps show up.
        let theta = if seed[0] % 2 == 0 {
            let maps = space_maps(&commuting_space(alg, 1).unwrap(), d).unwrap();
            maps[pick.index(maps.len())].clone()
        } else {
            map_from(alg.ring(), d, &seed[..d * d])
        };
        let cert = properness_certificate(alg, &theta).unwrap();
        let brute = brute_properness(alg, &theta).unwrap();
        prop_assert_eq!(cert.is_some(), brute.is_some());
        if let Some(c) = cert {
            prop_assert!(c.is_valid(alg));
            prop_assert_eq!(c.reassemble(alg).unwrap(), theta);
        }
    }

    #[test]
    fn decomposition_reassembles(f in 0usize..3, seed in prop::collection::vec(-4i64..5, 36)) {
        let g = &fixtures()[f];
        let d = g.algebra().dim();
        let theta = map_from(g.algebra().ring(), d, &seed[..d * d]);
        prop_assert_eq!(decompose(g, &theta).unwrap().reassemble(), theta);
    }

    #[test]
    fn map_documents_round_trip(n in 2u64..8, seed in prop::collection::vec(-20i64..20, 9)) {
        let ring = z(n);
        let theta = map_from(&ring, 3, &seed);
        let text = map_to_json(&ring, &theta);
        prop_assert_eq!(map_from_json(&text, &ring, 3).unwrap(), theta);
    }

    #[test]
    fn rational_map_documents_round_trip(num in prop::collection::vec(-50i64..50, 4), den in prop::collection::vec(1i64..9, 4)) {
        let ring = RingSpec::Rationals;
        let rows = num
            .chunks(2)
            .zip(den.chunks(2))
            .map(|(p, q)| p.iter().zip(q).map(|(&a, &b)| ring.parse_scalar(&format!("{a}/{b}")).unwrap()).collect())
            .collect();
        let theta = LinMap::from_rows(rows).unwrap();
        let text = map_to_json(&ring, &theta);
        prop_assert_eq!(map_from_json(&text, &ring, 2).unwrap(), theta);
    }
}

#[test]
fn rational_full_matrix_path() {
    let ring = RingSpec::Rationals;
    let g = families::full_matrix_gma(ring, 2, 1).unwrap();
    let alg = g.algebra();
    let space = commuting_space(alg, 1).unwrap();
    assert_eq!(space.generators().len(), 5);
    // The witness search behind the pipeline needs a finite ring.
    assert!(matches!(ProperFormPipeline::new(&g, 1), Err(Error::NotEnumerable)));
    for theta in space_maps(&space, 4).unwrap() {
        assert!(verify_block_structure(&g, &theta, 1).unwrap().all_passed());
        let cert = properness_certificate(alg, &theta).unwrap().expect("proper");
        assert_eq!(cert.reassemble(alg).unwrap(), theta);
        assert!(check_step_invariants(&g, &decompose(&g, &theta).unwrap()).all_passed());
    }
}

#[test]
fn rational_inner_derivations_have_normal_form() {
    let ring = RingSpec::Rationals;
    let g = families::full_matrix_gma(ring, 2, 1).unwrap();
    let alg = g.algebra();
    let c = Element::new(["1/2", "-3", "2/7", "5"].iter().map(|s| ring.parse_scalar(s).unwrap()).collect());
    let ad = alg.inner_derivation(&c).unwrap();
    assert!(is_derivation(alg, &ad).unwrap().holds);
    let fr = verify_derivation_form(&g, &ad).unwrap();
    assert!(fr.report.all_passed());
    assert_eq!(fr.form.reassemble(&g).unwrap(), ad);
    assert!(derivation_space(alg).unwrap().contains(&ad.to_vector()));

    let id = LinMap::identity(&ring, 4);
    assert!(!is_derivation(alg, &id).unwrap().holds);
}
