//! End-to-end flows across modules.

use std::collections::BTreeMap;
use std::sync::Arc;

use dgtan::derham::{
    adr_cohomology, adr_component, local_system_from_rep, ls_hom, tdr_compose, LocalSystem, MatchingFamily,
};
use dgtan::eqcdga::{t_cohomology, tc_hom, PresentedGCdga};
use dgtan::exactla::int;
use dgtan::fixtures;
use dgtan::repcat::sign_representation;
use dgtan::simpset::{
    finite_fundamental_group, first_surjective_labeling, twisted_cochain_complex, universal_cover, DEFAULT_COSET_BUDGET,
};
use dgtan::wordcat::Word;
use dgtan::{FinSimplicialSet, FiniteGroup, Representation};

fn z2() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(2))
}

#[test]
fn projective_plane_from_both_models() {
    for name in ["rp2-6", "rp2-1"] {
        let k = Arc::new(fixtures::space(name).unwrap());
        let pi = finite_fundamental_group(&k, DEFAULT_COSET_BUDGET).unwrap();
        assert_eq!(pi.group.order(), 2, "{name}");
        let sign = fixtures::sign_system(&k).unwrap();
        let r = adr_cohomology(&k, &sign, 8).unwrap();
        assert!(r.stabilized());
        assert_eq!(r.cohomology, vec![0, 0, 1], "{name}");
        let trivial = adr_cohomology(&k, &LocalSystem::constant(k.clone(), 1), 8).unwrap();
        assert_eq!(trivial.cohomology, vec![1, 0, 0], "{name}");
    }
}

#[test]
fn universal_cover_of_the_projective_plane_is_a_sphere() {
    let k = fixtures::rp2_6();
    let labeling = first_surjective_labeling(&k, z2(), DEFAULT_COSET_BUDGET).unwrap();
    let cover = universal_cover(&k, &labeling, DEFAULT_COSET_BUDGET).unwrap();
    assert_eq!(cover.space.counts(), vec![12, 30, 20]);
    let h = twisted_cochain_complex(&cover.space, &LocalSystem::constant(cover.space.clone(), 1)).cohomology_dims();
    assert_eq!(h.values().copied().collect::<Vec<_>>(), vec![1, 0, 1]);
}

#[test]
fn de_rham_and_algebraic_sides_agree_on_rp2() {
    let k = Arc::new(fixtures::rp2_6());
    let m = fixtures::rp2_model();
    let labeling = first_surjective_labeling(&k, m.group().clone(), DEFAULT_COSET_BUDGET).unwrap();
    let one = Representation::trivial(m.group().clone(), 1);
    let sign = sign_representation(m.group().clone()).unwrap();
    for (v, w) in [(&one, &one), (&one, &sign), (&sign, &one), (&sign, &sign)] {
        let lv = local_system_from_rep(k.clone(), &labeling, v).unwrap();
        let lw = local_system_from_rep(k.clone(), &labeling, w).unwrap();
        let de_rham = adr_cohomology(&k, &ls_hom(&lv, &lw).unwrap(), 8).unwrap().cohomology;
        let algebraic = t_cohomology(&m, v, w, 5).unwrap().cohomology;
        assert_eq!(de_rham[..], algebraic[..3]);
        assert!(algebraic[3..].iter().all(|d| *d == 0));
    }
}

#[test]
fn identity_is_a_unit_for_de_rham_composition() {
    let k = FinSimplicialSet::standard_simplex(2);
    let k = Arc::new(k);
    let l = LocalSystem::constant(k.clone(), 2);
    let hom = ls_hom(&l, &l).unwrap();
    let comp = adr_component(&k, &hom, 1, 2).unwrap();
    let coords: Vec<_> = (0..comp.dim()).map(|i| int(i as i64 % 3 - 1)).collect();
    let omega = comp.family(&k, &coords);
    assert!(omega.is_matching(&k, &hom));
    let id = MatchingFamily::identity(&k, 2);
    assert_eq!(tdr_compose(&id, &omega, 2, 2, 2).unwrap(), omega);
    assert_eq!(tdr_compose(&omega, &id, 2, 2, 2).unwrap(), omega);
    let d = omega.differential();
    assert!(d.is_matching(&k, &hom));
}

#[test]
fn words_evaluate_through_the_closed_structure() {
    let m = fixtures::rp2_model();
    let g = m.group().clone();
    let ctx = BTreeMap::from([
        ("V".to_string(), sign_representation(g.clone()).unwrap()),
        ("R".to_string(), dgtan::repcat::regular_representation(g).left),
    ]);
    let dims = |x: &str, y: &str| {
        tc_hom(&m, &ctx, &Word::parse(x).unwrap(), &Word::parse(y).unwrap(), 6).unwrap().cohomology()
    };
    // Hom(R, 1) ≅ Hom(1, R) ≅ A in cohomology, since R is self-dual and R ≅ 1 ⊕ V
    assert_eq!(dims("R", "1"), dims("1", "oplus(1,V)"));
    assert_eq!(dims("tensor(V,V)", "V"), dims("1", "V"));
    assert_eq!(dims("hom(V,V)", "1"), dims("1", "1"));
    assert_eq!(dims("0", "R"), vec![0; 7]);
}

#[test]
fn json_roundtrips_across_modules() {
    let torus = fixtures::torus7();
    let text = serde_json::to_string(&torus.to_json()).unwrap();
    let back = FinSimplicialSet::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
    assert_eq!(back.counts(), torus.counts());

    let s3 = Arc::new(FiniteGroup::symmetric3());
    let standard = fixtures::s3_standard(s3.clone());
    let text = serde_json::to_string(&standard.to_json()).unwrap();
    let back = Representation::from_json(&serde_json::from_str(&text).unwrap(), |n| fixtures::group(n).or(Some((*s3).clone()))).unwrap();
    assert_eq!(back.matrices(), standard.matrices());

    let cdga = fixtures::cdga("S3-x2").unwrap();
    let text = serde_json::to_string(&cdga.to_json()).unwrap();
    let back = PresentedGCdga::from_json_in(&serde_json::from_str(&text).unwrap(), s3).unwrap();
    assert_eq!(back.basis(6).dims(), cdga.basis(6).dims());
}
