//! Named spaces, groups, representations and cdgas used by the tests, the
//! acceptance suite and the command line.

use std::sync::Arc;

use crate::derham::{local_system_from_rep, LocalSystem};
use crate::eqcdga::{FreeGca, Poly, PresentedGCdga};
use crate::exactla::{int, Matrix};
use crate::group::{permutation_closure, FiniteGroup, S3_GENERATORS};
use crate::repcat::{regular_representation, sign_representation, Representation};
use crate::simpset::{first_surjective_labeling, FinSimplicialSet, Simplex, DEFAULT_COSET_BUDGET};

pub const SPACES: [&str; 11] = [
    "point", "simplex1", "simplex2", "simplex3", "boundary2", "boundary3", "rp2-6", "rp2-1", "torus7", "s1-1", "s2-1",
];
pub const GROUPS: [&str; 5] = ["Z1", "Z2", "Z3", "Z2xZ2", "S3"];
pub const REPRESENTATIONS: [&str; 5] = ["trivial", "sign", "regular", "standard", "rotation"];
pub const CDGAS: [&str; 5] = ["M", "Q", "Q-Z2", "S3-x2", "free-x3"];

/// Six-vertex triangulation of the projective plane.
pub const RP2_6_FACETS: [[usize; 3]; 10] = [
    [0, 1, 2],
    [0, 2, 3],
    [0, 3, 4],
    [0, 4, 5],
    [0, 5, 1],
    [1, 2, 4],
    [2, 3, 5],
    [3, 4, 1],
    [4, 5, 2],
    [5, 1, 3],
];

pub fn rp2_6() -> FinSimplicialSet {
    let facets: Vec<Vec<usize>> = RP2_6_FACETS.iter().map(|f| f.to_vec()).collect();
    FinSimplicialSet::from_facets(&facets).expect("RP² triangulation")
}

/// Seven-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> FinSimplicialSet {
    let facets: Vec<Vec<usize>> = (0..7)
        .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
        .collect();
    FinSimplicialSet::from_facets(&facets).expect("torus triangulation")
}

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

/// One vertex and one loop.
pub fn circle_one_vertex() -> FinSimplicialSet {
    let v = Simplex::nondegenerate(0, 0);
    FinSimplicialSet::new(names(&["*", "a"]), vec![0, 1], vec![vec![], vec![v.clone(), v]], 0).expect("circle")
}

/// One vertex, one edge `a` and one 2-simplex with faces `a, s₀(*), a`.
pub fn rp2_one_vertex() -> FinSimplicialSet {
    let v = Simplex::nondegenerate(0, 0);
    let a = Simplex::nondegenerate(1, 1);
    let faces = vec![vec![], vec![v.clone(), v.clone()], vec![a.clone(), v.degeneracy(0), a]];
    FinSimplicialSet::new(names(&["*", "a", "s"]), vec![0, 1, 2], faces, 0).expect("one-vertex RP²")
}

/// `Δ²/∂Δ²`.
pub fn sphere_one_vertex() -> FinSimplicialSet {
    let dot = Simplex::nondegenerate(0, 0).degeneracy(0);
    FinSimplicialSet::new(names(&["*", "σ"]), vec![0, 2], vec![vec![], vec![dot.clone(), dot.clone(), dot]], 0)
        .expect("one-vertex sphere")
}

pub fn space(name: &str) -> Option<FinSimplicialSet> {
    Some(match name {
        "point" => FinSimplicialSet::standard_simplex(0),
        "simplex1" => FinSimplicialSet::standard_simplex(1),
        "simplex2" => FinSimplicialSet::standard_simplex(2),
        "simplex3" => FinSimplicialSet::standard_simplex(3),
        "boundary2" => FinSimplicialSet::simplex_boundary(2),
        "boundary3" => FinSimplicialSet::simplex_boundary(3),
        "rp2-6" => rp2_6(),
        "rp2-1" => rp2_one_vertex(),
        "torus7" => torus7(),
        "s1-1" => circle_one_vertex(),
        "s2-1" => sphere_one_vertex(),
        _ => return None,
    })
}

pub fn group(name: &str) -> Option<FiniteGroup> {
    Some(match name {
        "Z1" => FiniteGroup::trivial(),
        "Z2" => FiniteGroup::cyclic(2),
        "Z3" => FiniteGroup::cyclic(3),
        "Z2xZ2" => FiniteGroup::klein_four(),
        "S3" => FiniteGroup::symmetric3(),
        _ => return None,
    })
}

/// The two-dimensional irreducible representation of `S₃` on the sum-zero
/// plane of `ℚ³`, basis `e₀ − e₁`, `e₁ − e₂`.
pub fn s3_standard(group: Arc<FiniteGroup>) -> Representation {
    let perms = permutation_closure(&S3_GENERATORS.map(|g| g.to_vec()));
    let matrices = perms
        .iter()
        .map(|p| {
            // image of e_i - e_{i+1} is e_{p(i)} - e_{p(i+1)}; plane coordinates are (x₀, −x₂)
            let column = |i: usize| {
                let mut x = [0i64; 3];
                x[p[i]] += 1;
                x[p[i + 1]] -= 1;
                [x[0], -x[2]]
            };
            let (c0, c1) = (column(0), column(1));
            Matrix::from_ints(&[&[c0[0], c1[0]], &[c0[1], c1[1]]])
        })
        .collect();
    Representation::new(group, 2, matrices).expect("standard representation of S3")
}

/// Rotation by a third of a turn on the lattice `ℤ[ω]`.
pub fn z3_rotation(group: Arc<FiniteGroup>) -> Representation {
    let r = Matrix::from_ints(&[&[0, -1], &[1, -1]]);
    let matrices = vec![Matrix::identity(2), r.clone(), r.mul(&r)];
    Representation::new(group, 2, matrices).expect("rotation representation of Z3")
}

/// A named representation of `group` (resolved by value, so the group must
/// be one of [`GROUPS`] for `standard` and `rotation`).
pub fn representation(group: &Arc<FiniteGroup>, name: &str) -> Option<Representation> {
    match name {
        "trivial" => Some(Representation::trivial(group.clone(), 1)),
        "sign" => sign_representation(group.clone()),
        "regular" => Some(regular_representation(group.clone()).left),
        "standard" if **group == FiniteGroup::symmetric3() => Some(s3_standard(group.clone())),
        "rotation" if **group == FiniteGroup::cyclic(3) => Some(z3_rotation(group.clone())),
        _ => None,
    }
}

/// `(ℤ/2, M)`: free on `t` (degree 2) and `s` (degree 3), `d s = t²`,
/// `g·t = −t`, `g·s = s`.
pub fn rp2_model() -> PresentedGCdga {
    let group = Arc::new(FiniteGroup::cyclic(2));
    let alg = FreeGca::new(names(&["t", "s"]), vec![2, 3]).expect("generators");
    let t = alg.gen(0);
    let s = alg.gen(1);
    let differential = vec![Poly::zero(), alg.mul(&t, &t)];
    let action = vec![vec![t.clone(), s.clone()], vec![t.scaled(&int(-1)), s]];
    PresentedGCdga::new(group, alg, differential, action).expect("RP² model")
}

/// `ℚ` with the trivial action of `group`.
pub fn ground_field(group: Arc<FiniteGroup>) -> PresentedGCdga {
    let n = group.order();
    PresentedGCdga::new(group, FreeGca::new(vec![], vec![]).expect("no generators"), vec![], vec![vec![]; n])
        .expect("ground field")
}

/// Free on one invariant generator with zero differential.
pub fn free_invariant(group: Arc<FiniteGroup>, name: &str, degree: usize) -> PresentedGCdga {
    let alg = FreeGca::new(vec![name.to_string()], vec![degree]).expect("one generator");
    let x = alg.gen(0);
    let n = group.order();
    PresentedGCdga::new(group, alg, vec![Poly::zero()], vec![vec![x]; n]).expect("free cdga")
}

pub fn cdga(name: &str) -> Option<PresentedGCdga> {
    Some(match name {
        "M" => rp2_model(),
        "Q" => ground_field(Arc::new(FiniteGroup::trivial())),
        "Q-Z2" => ground_field(Arc::new(FiniteGroup::cyclic(2))),
        "S3-x2" => free_invariant(Arc::new(FiniteGroup::symmetric3()), "x", 2),
        "free-x3" => free_invariant(Arc::new(FiniteGroup::trivial()), "x", 3),
        _ => return None,
    })
}

/// The rank-one local system pulled back along the first surjection of
/// `π₁(K)` onto `ℤ/2`, if there is one.
pub fn sign_system(k: &Arc<FinSimplicialSet>) -> Option<LocalSystem> {
    let z2 = Arc::new(FiniteGroup::cyclic(2));
    let labeling = first_surjective_labeling(k, z2.clone(), DEFAULT_COSET_BUDGET).ok()?;
    let sign = sign_representation(z2)?;
    local_system_from_rep(k.clone(), &labeling, &sign).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simpset::{finite_fundamental_group, twisted_cochain_complex, universal_cover};
    use std::collections::BTreeMap;

    fn edge_degrees(k: &FinSimplicialSet) -> BTreeMap<usize, usize> {
        let mut count = BTreeMap::new();
        for &t in k.simplices(2) {
            let x = k.nondegenerate(t);
            for i in 0..3 {
                *count.entry(k.face(&x, i).id).or_insert(0) += 1;
            }
        }
        count
    }

    #[test]
    fn closed_surfaces() {
        for (k, chi) in [(rp2_6(), 1), (torus7(), 0)] {
            assert!(edge_degrees(&k).values().all(|c| *c == 2));
            assert_eq!(edge_degrees(&k).len(), k.simplices(1).len());
            assert_eq!(k.euler_characteristic(), chi);
        }
        assert_eq!(rp2_6().counts(), vec![6, 15, 10]);
        assert_eq!(torus7().counts(), vec![7, 21, 14]);
    }

    #[test]
    fn all_named_fixtures_resolve() {
        for s in SPACES {
            assert!(space(s).is_some(), "{s}");
        }
        for g in GROUPS {
            let g = Arc::new(group(g).unwrap());
            assert!(representation(&g, "trivial").is_some());
            assert!(representation(&g, "regular").is_some());
        }
        for c in CDGAS {
            assert!(cdga(c).is_some(), "{c}");
        }
        let s3 = Arc::new(FiniteGroup::symmetric3());
        assert_eq!(representation(&s3, "standard").unwrap().character()[0], int(2));
        assert!(representation(&s3, "sign").is_some());
        assert!(representation(&Arc::new(FiniteGroup::cyclic(3)), "sign").is_none());
    }

    #[test]
    fn s3_standard_is_irreducible() {
        let s3 = Arc::new(FiniteGroup::symmetric3());
        let v = s3_standard(s3);
        assert_eq!(v.equivariant_maps(&v).unwrap().len(), 1);
        let r = z3_rotation(Arc::new(FiniteGroup::cyclic(3)));
        assert_eq!(r.equivariant_maps(&r).unwrap().len(), 2);
    }

    #[test]
    fn torus_cohomology() {
        let k = torus7();
        let l = LocalSystem::constant(Arc::new(k.clone()), 1);
        let h = twisted_cochain_complex(&k, &l).cohomology_dims();
        assert_eq!(h, BTreeMap::from([(0, 1), (1, 2), (2, 1)]));
    }

    #[test]
    fn rp2_cover_and_twisted_cohomology() {
        let k = Arc::new(rp2_6());
        let pi1 = finite_fundamental_group(&k, DEFAULT_COSET_BUDGET).unwrap();
        assert_eq!(pi1.group.order(), 2);
        let cover = universal_cover(&k, &pi1.labeling, DEFAULT_COSET_BUDGET).unwrap();
        assert_eq!(cover.space.counts(), vec![12, 30, 20]);
        assert_eq!(cover.space.euler_characteristic(), 2);
        let sign = sign_system(&k).unwrap();
        let h = twisted_cochain_complex(&k, &sign).cohomology_dims();
        assert_eq!(h, BTreeMap::from([(0, 0), (1, 0), (2, 1)]));
        let triv = LocalSystem::constant(k.clone(), 1);
        assert_eq!(twisted_cochain_complex(&k, &triv).cohomology_dims(), BTreeMap::from([(0, 1), (1, 0), (2, 0)]));
    }

    #[test]
    fn one_vertex_models() {
        assert_eq!(finite_fundamental_group(&rp2_one_vertex(), 100).unwrap().group.order(), 2);
        assert_eq!(sphere_one_vertex().euler_characteristic(), 2);
        assert_eq!(circle_one_vertex().euler_characteristic(), 0);
        assert!(sign_system(&Arc::new(circle_one_vertex())).is_some());
        assert!(sign_system(&Arc::new(sphere_one_vertex())).is_none());
    }
}
