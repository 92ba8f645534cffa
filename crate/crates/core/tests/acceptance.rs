//! Acceptance suite: one PASS/FAIL line per criterion.

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mubound::catalog;
use mubound::filling::{dual_quadrangulation, isometric_filling_seeded, random_generic_arrangement, verify_isometric};
use mubound::homotopy::{edgewidth_bruteforce, CycleWalk};
use mubound::nodal::{self, blowup, build_zero_complex, check_nodal, check_plus_minus, contract_2d, heawood_number, BlownUpComplex, ZeroComplex};
use mubound::pipeline::{check_bound, known_mu, run_pipeline, OperatorSource};
use mubound::refine::{build_prescribed_edgewidth, verify_minor_model};
use mubound::spectral::{
    check_one_negative, designed_kernel_instance, kernel_exact, minimize_support, one_negative_report, random_sign_pattern,
    SchrodingerOperator, SignedVector, SimpleGraph, DEFAULT_TOL,
};
use mubound::surface_map::EmbeddedGraph;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("{what} took {:?} (limit {limit:?})", start.elapsed()))
}

fn binomial2(m: usize) -> usize {
    m * (m - 1) / 2
}

fn isometric_fillings() -> Outcome {
    let start = Instant::now();
    for n in 3..=14 {
        let d = isometric_filling_seeded(n, 0).map_err(|e| format!("n={n}: {e}"))?;
        ensure(verify_isometric(&d), || format!("n={n} not isometric"))?;
        ensure(d.is_simplicial(), || format!("n={n} not simplicial"))?;
        ensure(d.boundary.len() == n, || format!("n={n} boundary {}", d.boundary.len()))?;
        if n % 2 == 0 {
            let m = n / 2;
            let arr = random_generic_arrangement(m, 0).map_err(|e| e.to_string())?;
            let q = dual_quadrangulation(&arr).map_err(|e| e.to_string())?;
            ensure(q.vertex_count == 1 + m + binomial2(m), || format!("n={n}: {} vertices", q.vertex_count))?;
            ensure(q.faces.len() == binomial2(m) && q.faces.iter().all(|f| f.len() == 4), || {
                format!("n={n}: {} faces", q.faces.len())
            })?;
        }
    }
    within(start, Duration::from_secs(5), "fillings")?;
    Ok(format!("n = 3..14 isometric and simplicial in {:?}", start.elapsed()))
}

fn prescribed_edgewidth() -> Outcome {
    let mut lines = Vec::new();
    for (name, map) in [("K7/torus", catalog::k7_torus()), ("K6/projective", catalog::k6_projective())] {
        for k in 3..=5 {
            let start = Instant::now();
            let r = build_prescribed_edgewidth(&map, 0, k).map_err(|e| format!("{name} k={k}: {e}"))?;
            ensure(r.h.is_simplicial(), || format!("{name} k={k}: not simplicial"))?;
            let boundary = r.disk_boundary();
            let walk = CycleWalk::from_vertices(&r.h, &boundary).ok_or("disk boundary is not a cycle")?;
            ensure(boundary.len() == k && walk.is_simple(&r.h), || format!("{name} k={k}: D is not a simple k-gon"))?;
            let brute = edgewidth_bruteforce(&r.h, k + 1);
            ensure(brute == Some(k), || format!("{name} k={k}: brute force edgewidth {brute:?}"))?;
            ensure(verify_minor_model(&map, &r.h, &r.model), || format!("{name} k={k}: minor model"))?;
            within(start, Duration::from_secs(60), &format!("{name} k={k}"))?;
            lines.push(format!("{name} k={k} {:.1?}", start.elapsed()));
        }
    }
    Ok(lines.join(", "))
}

/// One random surgery or filling step; `None` if the drawn step does not
/// apply to this map.
fn random_step(map: &EmbeddedGraph, rng: &mut ChaCha8Rng) -> Option<EmbeddedGraph> {
    let faces = map.face_table();
    let face = rng.gen_range(0..faces.len());
    let len = faces.walks[face].len();
    match rng.gen_range(0..6) {
        0 => map.subdivide_edge(rng.gen_range(0..map.edge_count())).ok().map(|r| r.0),
        1 => map.add_vertex_in_face(face, rng.gen_range(0..len)).ok().map(|r| r.0),
        2 if len >= 2 => {
            let i = rng.gen_range(0..len);
            let j = (i + rng.gen_range(1..len)) % len;
            map.add_edge_in_face(face, i, j).ok()
        }
        3 => map.star_face(face).ok().map(|r| r.0),
        4 => map.add_loop_in_face(face, rng.gen_range(0..len)).ok().map(|r| r.0),
        _ if len >= 3 => {
            let disk = isometric_filling_seeded(len, rng.gen()).ok()?;
            map.glue_disk(face, &disk, rng.gen_range(0..len)).ok().map(|r| r.0)
        }
        _ => None,
    }
}

fn surface_bookkeeping() -> Outcome {
    let expected = [
        ("tetrahedron", catalog::tetrahedron(), 2),
        ("K7/torus", catalog::k7_torus(), 0),
        ("K6/projective", catalog::k6_projective(), 1),
    ];
    for (name, map, chi) in &expected {
        let got = map.classify_surface().map_err(|e| e.to_string())?.chi;
        ensure(got == *chi, || format!("chi({name}) = {got}, expected {chi}"))?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut steps = 0;
    for trial in 0..120 {
        let (_, base, chi) = &expected[trial % 3];
        let mut map = base.clone();
        for _ in 0..6 {
            if let Some(next) = random_step(&map, &mut rng) {
                let got = next.classify_surface().map_err(|e| format!("trial {trial}: {e}"))?.chi;
                ensure(got == *chi, || format!("trial {trial}: chi changed to {got}"))?;
                map = next;
                steps += 1;
            }
        }
    }
    Ok(format!("chi 2/0/1 exact; 120 random sequences, {steps} steps, chi preserved"))
}

fn spectral_exactness() -> Outcome {
    for n in 2..=10 {
        let op = SchrodingerOperator::negative_adjacency_plus_identity(&SimpleGraph::complete(n));
        let basis = kernel_exact(&op);
        ensure(basis.corank() == n - 1, || format!("K{n}: corank {}", basis.corank()))?;
        for v in &basis.vectors {
            ensure(op.apply(v).iter().all(BigRational::is_zero), || format!("K{n}: nonzero residual"))?;
        }
        let r = one_negative_report(&op, DEFAULT_TOL).map_err(|e| format!("K{n}: {e}"))?;
        ensure(r.passes, || format!("K{n}: one-negative check failed: {r:?}"))?;
        let rel = (r.lambda1 + n as f64).abs() / n as f64;
        ensure(rel < 1e-9, || format!("K{n}: lambda1 {} (rel err {rel:e})", r.lambda1))?;
    }
    Ok("K2..K10: corank n-1, zero residuals, lambda1 = -n to 1e-9".into())
}

fn plus_minus_and_nodal() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut instances, mut vectors, mut minimal) = (0, 0, 0);
    let mut draws = 0;
    while instances < 200 {
        draws += 1;
        ensure(draws < 2000, || format!("only {instances} instances in {draws} draws"))?;
        let n = rng.gen_range(4..=12);
        let g = SimpleGraph::random_connected(n, rng.gen_range(0.25..0.7), &mut rng);
        let Some(pattern) = random_sign_pattern(&g, &mut rng) else { continue };
        let seed = rng.gen();
        let (op, f) = designed_kernel_instance(&g, &pattern, seed).map_err(|e| format!("instance {instances}: {e}"))?;
        ensure(check_one_negative(&op) == Ok(true), || format!("instance {instances}: not one-negative"))?;
        ensure(op.apply(&f.values).iter().all(BigRational::is_zero), || "designed vector not in kernel".into())?;
        let basis = kernel_exact(&op);
        let mut candidates: Vec<SignedVector> = basis.vectors.iter().cloned().map(SignedVector::new).collect();
        candidates.push(f.clone());
        for v in &candidates {
            vectors += 1;
            ensure(check_plus_minus(&g, v), || format!("instance {instances}: plus-minus fails for {:?}", v.signs()))?;
            let m = minimize_support(&basis, v, &[]);
            minimal += 1;
            ensure(check_nodal(&g, &m), || format!("instance {instances}: minimal vector {:?} not nodal", m.signs()))?;
        }
        instances += 1;
    }
    Ok(format!("{instances} instances, {vectors} kernel vectors plus-minus, {minimal} minimal vectors nodal"))
}

fn components(nodes: usize, edges: impl Iterator<Item = [usize; 2]>) -> usize {
    let mut uf: Vec<usize> = (0..nodes).collect();
    fn find(uf: &mut [usize], mut x: usize) -> usize {
        while uf[x] != x {
            uf[x] = uf[uf[x]];
            x = uf[x];
        }
        x
    }
    for [a, b] in edges {
        let (ra, rb) = (find(&mut uf, a), find(&mut uf, b));
        uf[ra] = rb;
    }
    (0..nodes).filter(|&x| find(&mut uf, x) == x).count()
}

/// Sign vector with two separate solid fans at one vertex of degree >= 6
/// and random signs elsewhere.
fn multi_fan_vector(map: &EmbeddedGraph, rng: &mut ChaCha8Rng) -> Option<Vec<i64>> {
    let n = map.vertex_count();
    let candidates: Vec<usize> = (0..n).filter(|&v| map.degree(v) >= 6).collect();
    let v = *candidates.choose(rng)?;
    let ring: Vec<usize> = map.rotation(v).iter().map(|&d| map.head(d)).collect();
    let m = ring.len();
    let mut f: Vec<i64> = (0..n).map(|_| if rng.gen_bool(0.5) { rng.gen_range(1..4) } else { -rng.gen_range(1..4) }).collect();
    let s = rng.gen_range(0..m);
    let at = |i: usize| ring[(s + i) % m];
    f[v] = 0;
    for i in [0, 1, 3, 4] {
        f[at(i)] = 0;
    }
    f[at(2)] = 1;
    f[at(m - 1)] = -1;
    if m > 5 {
        f[at(5)] = if f[at(5)] == 0 { 1 } else { f[at(5)] };
    }
    Some(f)
}

/// Isometric filling of an n-cycle with the outer face starred: a
/// triangulated sphere.
fn starred_sphere(n: usize) -> Result<EmbeddedGraph, String> {
    let sphere = isometric_filling_seeded(n, 1)
        .map_err(|e| e.to_string())?
        .to_sphere_map()
        .map_err(|e| e.to_string())?;
    let outer = sphere.disk_face(&sphere.face_table()).ok_or("no outer face")?;
    Ok(sphere.star_face(outer).map_err(|e| e.to_string())?.0)
}

fn blowup_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let refined = build_prescribed_edgewidth(&catalog::k7_torus(), 0, 3).map_err(|e| e.to_string())?;
    let hosts: Vec<EmbeddedGraph> = vec![
        catalog::k7_torus(),
        catalog::k6_projective(),
        refined.h_prime.clone(),
        starred_sphere(10)?,
    ];
    let (mut trials, mut multi_fan, mut splits) = (0, 0, 0);
    for round in 0..160 {
        let host = &hosts[round % hosts.len()];
        let n = host.vertex_count();
        let values = if round % 2 == 0 {
            match multi_fan_vector(host, &mut rng) {
                Some(v) => v,
                None => continue,
            }
        } else {
            let p0 = rng.gen_range(0.2..0.8);
            (0..n).map(|_| if rng.gen_bool(p0) { 0 } else if rng.gen_bool(0.5) { 1 } else { -1 }).collect()
        };
        let f = SignedVector::from_integers(&values);
        let z: ZeroComplex = build_zero_complex(host, &f).map_err(|e| e.to_string())?;
        let zb: BlownUpComplex = blowup(host, &z);
        ensure(zb.euler_characteristic() == z.euler_characteristic(), || format!("round {round}: blowup changed chi"))?;
        let before = components(z.nodes.len(), z.edges.iter().map(|e| e.0));
        ensure(zb.component_count() == before, || format!("round {round}: components {before} -> {}", zb.component_count()))?;
        let gamma = contract_2d(&zb, &[]).map_err(|e| e.to_string())?;
        ensure(gamma.euler_characteristic() >= z.euler_characteristic(), || format!("round {round}: chi(Gamma) < chi(Z)"))?;
        let degree_sum: usize = gamma.degrees().iter().sum();
        ensure(degree_sum == 2 * gamma.edges.len(), || "handshake".into())?;
        trials += 1;
        if !zb.records.is_empty() {
            multi_fan += 1;
            splits += zb.records.len();
        }
    }
    ensure(trials >= 100 && multi_fan >= 20, || format!("{trials} trials, {multi_fan} with singular vertices"))?;
    Ok(format!("{trials} zero complexes ({multi_fan} with singular vertices, {splits} splits): chi and components preserved"))
}

fn end_to_end() -> Outcome {
    let start = Instant::now();
    let run = run_pipeline(&catalog::k7_torus(), 0, 3, &OperatorSource::Designed { seed: 1 }).map_err(|e| e.to_string())?;
    let r = &run.report;
    let failed: Vec<&str> = r.checks.iter().filter(|c| !c.holds).map(|c| c.name.as_str()).collect();
    ensure(failed.is_empty(), || format!("failed checks: {failed:?}"))?;
    ensure(r.chi_s == 0 && r.deg_vk >= 3 && r.min_degree_gamma >= 2, || format!("{r:?}"))?;
    ensure(r.chi_s == r.chi_z + r.chi_p + r.chi_n, || "chi identity".into())?;
    ensure(
        r.boundary_components_of_k.iter().all(|b| b.contractible == Some(false)),
        || "a boundary component of K is contractible".into(),
    )?;
    ensure(run.f.values.iter().zip(run.f.signs()).all(|(x, s)| x.is_zero() == (s == 0)), || "sign mismatch".into())?;
    let boundary = run.refined.disk_boundary();
    ensure(boundary.iter().all(|&d| run.f.values[d].is_zero()), || "f does not vanish on the disk boundary".into())?;
    within(start, Duration::from_secs(120), "torus run")?;
    Ok(format!(
        "torus k=3: chi(Z)={} chi(P)={} chi(N)={} chi(Gamma)={} deg(v_K)={} corank={}, all {} checks in {:.1?}",
        r.chi_z,
        r.chi_p,
        r.chi_n,
        r.chi_gamma,
        r.deg_vk,
        r.corank,
        r.checks.len(),
        start.elapsed()
    ))
}

fn theorem_table() -> Outcome {
    let k7 = check_bound(known_mu("K7").ok_or("no K7 entry")?, 0).map_err(|e| e.to_string())?;
    ensure(k7.holds && k7.slack == 1, || format!("K7 on torus: {k7:?}"))?;
    let k6 = check_bound(known_mu("K6").ok_or("no K6 entry")?, 1).map_err(|e| e.to_string())?;
    ensure(k6.holds && k6.slack == 0, || format!("K6 on projective plane: {k6:?}"))?;
    ensure(!check_bound(8, 0).map_err(|e| e.to_string())?.holds, || "mu=8 on torus accepted".into())?;
    for (chi, h) in [(2, 4), (0, 7), (1, 6)] {
        let got = heawood_number(chi).map_err(|e| e.to_string())?;
        ensure(got == h, || format!("heawood({chi}) = {got}"))?;
    }
    ensure(nodal::heawood_number(3).is_err(), || "heawood accepted chi = 3".into())?;
    Ok("K7/torus slack 1, K6/projective slack 0, heawood 4/7/6".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 isometric fillings", isometric_fillings),
        ("2 prescribed edgewidth", prescribed_edgewidth),
        ("3 surface bookkeeping", surface_bookkeeping),
        ("4 spectral exactness", spectral_exactness),
        ("5 plus-minus and nodal", plus_minus_and_nodal),
        ("6 blowup and contraction", blowup_invariants),
        ("7 end-to-end torus chain", end_to_end),
        ("8 bound and heawood table", theorem_table),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (name, check) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(detail) => {
                failures += 1;
                println!("FAIL {name}: {detail}");
            }
        }
    }
    println!("{} of 8 criteria passed", 8 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
