use mubound::catalog;
use mubound::homotopy::{edgewidth, edgewidth_bruteforce, CycleWalk, Edgewidth};
use mubound::refine::{build_prescribed_edgewidth, verify_minor_model};

#[test]
fn torus_refinements_have_exact_edgewidth() {
    let g = catalog::k7_torus();
    for k in 3..=5 {
        let r = build_prescribed_edgewidth(&g, 0, k).unwrap();
        assert_eq!(edgewidth(&r.h), Edgewidth::Finite(k), "k = {k}");
        assert_eq!(edgewidth_bruteforce(&r.h, k), Some(k), "k = {k}");
        assert!(r.h.is_simplicial() && r.h_prime.is_simplicial());
        assert_eq!(r.h.euler_characteristic(), 0);
        assert_eq!(r.h_prime.euler_characteristic(), 0);
        assert!(verify_minor_model(&g, &r.h, &r.model));
        let faces = r.h.trace_faces();
        let disk = r.h.disk_face(&r.h.face_table()).unwrap();
        for (f, w) in faces.iter().enumerate() {
            assert!(f == disk || w.len() == 3);
        }
    }
}

#[test]
fn projective_refinement_k4() {
    let g = catalog::k6_projective();
    let r = build_prescribed_edgewidth(&g, 0, 4).unwrap();
    assert_eq!(edgewidth_bruteforce(&r.h, 5), Some(4));
    assert_eq!(edgewidth(&r.h), Edgewidth::Finite(4));
    assert_eq!(r.h.euler_characteristic(), 1);
    let ring = CycleWalk::from_vertices(&r.h, &r.disk_boundary()).unwrap();
    assert!(!mubound::homotopy::is_contractible(&r.h, &ring).unwrap());
}
