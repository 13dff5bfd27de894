//! Acceptance suite: one test per headline claim, each printing a
//! single PASS/FAIL line (visible with `--nocapture`) and enforcing its
//! runtime budget. Run with
//!
//!   cargo test -p minent --test acceptance -- --test-threads=1 --nocapture
//!
//! The `s1_variant` check is a known failure: the constant von Neumann
//! red line lands at crossings ≈ 0.1065 / 0.1596, outside the ±0.01
//! windows around the reference values 0.096 / 0.112 that the
//! p-dependent default variant does reproduce. It is kept faithful to
//! its stated tolerance rather than widened to match behaviour.

use std::time::Instant;

use minent::certify::concentration_threshold;
use minent::channels::{apply_standard, random_channel, special_input, tensor_channels};
use minent::construction::{
    explicit_channels_paper_weights, explicit_channels_projector, explicit_shape, subspace_r,
    subspace_s,
};
use minent::entropy::{min_output_rank, renyi_entropy_from_spectrum, RenyiOrder};
use minent::experiments::{
    certify_pair, lemma1_sweep, random_pair_sweep, verify_construction,
};
use minent::qmath::rng::{gaussian_vector, seeded_rng};
use minent::qmath::{
    inner_product, maximally_entangled, BipartiteShape, PureVector,
};
use minent::scan::{refine_crossing, violation_scan, RedVariant, ScanOptions};

fn report(id: &str, passed: bool, elapsed: f64, detail: &str) {
    println!(
        "ACCEPTANCE {id}: {} ({detail}) [{elapsed:.2}s]",
        if passed { "PASS" } else { "FAIL" }
    );
}

#[test]
fn criterion_1_structural_suite() {
    let t = Instant::now();
    let checks = verify_construction(
        explicit_shape(),
        subspace_r().basis(),
        subspace_s().basis(),
        200,
        7,
    );
    let ortho = checks.iter().find(|c| c.name == "basis_pairwise_orthogonality").unwrap();
    let dim_r = checks.iter().find(|c| c.name == "dim_r").unwrap();
    let dim_s = checks.iter().find(|c| c.name == "dim_s").unwrap();
    let cj = checks.iter().find(|c| c.name == "cj_pair_orthogonality").unwrap();
    let elapsed = t.elapsed().as_secs_f64();
    let passed = ortho.passed && dim_r.passed && dim_s.passed && cj.passed && elapsed < 1.0;
    report(
        "1 structural",
        passed,
        elapsed,
        &format!(
            "max inner {:.2e} <= 1e-12, dims {}x{}, tr(rho sigma^T) {:.2e} <= 1e-14",
            ortho.value, dim_r.value, dim_s.value, cj.value
        ),
    );
    assert!(ortho.passed && ortho.value <= 1e-12);
    assert!(dim_r.passed && dim_s.passed);
    assert!(cj.passed && cj.value <= 1e-14);
    assert!(elapsed < 1.0, "structural suite took {elapsed:.2}s");
}

#[test]
fn criterion_2_rank_claims() {
    let t = Instant::now();
    let (n1, n2) = explicit_channels_projector().unwrap();

    let mut lambdas = Vec::new();
    for (ch, seed) in [(&n1, 5u64), (&n2, 6u64)] {
        let mr = min_output_rank(ch, 24, seed, 1e-9, &[]).unwrap();
        assert_eq!(mr.rank, 3, "single-copy min output rank");
        let (cert, _) = minent::experiments::certify_channel(ch, 16, seed).unwrap();
        assert!(cert.lambda > 0.0, "certified lambda {}", cert.lambda);
        assert!(cert.checker_passed);
        assert!(cert.residual <= 1e-8);
        lambdas.push(cert.lambda);
    }

    let joint = tensor_channels(&n1, &n2).unwrap();
    let input = special_input(&n1, &n2).unwrap();
    let out = joint.as_channel().apply_pure(&input).unwrap();
    let ninth = out.eigenvalues()[0].abs();
    let rank = out.rank_eps(1e-9).unwrap();
    let phi = maximally_entangled(3);
    let overlap = inner_product(phi.amplitudes(), &out.matrix().mul_vec(phi.amplitudes())).norm();

    let elapsed = t.elapsed().as_secs_f64();
    let passed = rank == 8 && ninth <= 1e-10 && overlap <= 1e-12 && elapsed < 30.0;
    report(
        "2 rank claims",
        passed,
        elapsed,
        &format!(
            "ranks 3/3 certified (lambda {:.6}, {:.6}), joint rank {rank}, ninth {ninth:.2e}, overlap {overlap:.2e}",
            lambdas[0], lambdas[1]
        ),
    );
    assert_eq!(rank, 8);
    assert!(ninth <= 1e-10);
    assert!(overlap <= 1e-12);
    assert!(elapsed < 30.0, "rank claims took {elapsed:.2}s");
}

#[test]
fn criterion_3_crossing_reproduction() {
    let t = Instant::now();
    let defaults = ScanOptions::default();
    let (p1, p2) = explicit_channels_projector().unwrap();
    let proj = violation_scan(&p1, &p2, &defaults).unwrap();
    let proj_crossing = proj.crossing.expect("projector crossing exists");

    let (w1, w2) = explicit_channels_paper_weights().unwrap();
    let weighted = violation_scan(&w1, &w2, &defaults).unwrap();
    let weighted_crossing = weighted.crossing.expect("weighted crossing exists");

    let elapsed = t.elapsed().as_secs_f64();
    let ok_proj = (proj_crossing - 0.096).abs() <= 0.02;
    let ok_weighted = (weighted_crossing - 0.112).abs() <= 0.02;
    let ok_order = weighted_crossing > proj_crossing;
    let passed = ok_proj && ok_weighted && ok_order && elapsed < 600.0;
    report(
        "3 crossings (default variant)",
        passed,
        elapsed,
        &format!(
            "projector {proj_crossing:.4} in 0.096±0.02, weighted {weighted_crossing:.4} in 0.112±0.02, weighted > projector {ok_order}"
        ),
    );
    assert!(ok_proj, "projector crossing {proj_crossing}");
    assert!(ok_weighted, "weighted crossing {weighted_crossing}");
    assert!(ok_order);
    assert!(elapsed < 600.0, "scans took {elapsed:.2}s");
}

/// Known failure, kept at its target tolerance rather than widened:
/// with the red line frozen at the von Neumann entropy of the joint
/// output, the measured crossings are ≈ 0.1065 (projector) and
/// ≈ 0.1596 (weighted), outside 0.096±0.01 and 0.112±0.01. The
/// p-dependent default red line reproduces the reference values; see
/// the README test notes.
#[test]
fn criterion_3_s1_variant_tightened_tolerance() {
    let t = Instant::now();
    let opts = ScanOptions { red_variant: RedVariant::S1, ..ScanOptions::default() };
    let (p1, p2) = explicit_channels_projector().unwrap();
    let proj = violation_scan(&p1, &p2, &opts).unwrap();
    let proj_crossing = proj.crossing.expect("projector crossing exists");

    let (w1, w2) = explicit_channels_paper_weights().unwrap();
    let weighted = violation_scan(&w1, &w2, &opts).unwrap();
    let weighted_crossing = weighted.crossing.expect("weighted crossing exists");

    let elapsed = t.elapsed().as_secs_f64();
    let ok_proj = (proj_crossing - 0.096).abs() <= 0.01;
    let ok_weighted = (weighted_crossing - 0.112).abs() <= 0.01;
    report(
        "3 crossings (s1 variant, ±0.01)",
        ok_proj && ok_weighted,
        elapsed,
        &format!("projector {proj_crossing:.4} vs 0.096±0.01, weighted {weighted_crossing:.4} vs 0.112±0.01"),
    );
    assert!(ok_proj, "s1 projector crossing {proj_crossing} outside 0.096±0.01");
    assert!(ok_weighted, "s1 weighted crossing {weighted_crossing} outside 0.112±0.01");
}

#[test]
fn criterion_4_threshold_formulas() {
    let t = Instant::now();
    let conc = concentration_threshold(3);
    let conc_expect = 1.0 / (1.0 + 18.0 * std::f64::consts::LN_2);
    let ok_conc = (conc - conc_expect).abs() <= 1e-12;

    let c = 1.0 / 6.0;
    let closed = minent::certify::certified_violation_threshold(c, c, 3, 8)
        .unwrap()
        .unwrap()
        .p_star;
    let tlog = (9.0f64 / 8.0).log2();
    let closed_expect = tlog / (2.0 + tlog);
    let ok_closed = (closed - closed_expect).abs() <= 1e-6;

    let (n1, n2) = explicit_channels_projector().unwrap();
    let (_, _, threshold) = certify_pair(&n1, &n2, 16, 3).unwrap();
    let p_star = threshold.expect("certified violation exists").p_star;
    let ok_range = (1e-3..=1e-1).contains(&p_star);

    let elapsed = t.elapsed().as_secs_f64();
    report(
        "4 thresholds",
        ok_conc && ok_closed && ok_range,
        elapsed,
        &format!(
            "concentration {conc:.12} (Δ {:.1e}), closed-form {closed:.8} vs {closed_expect:.8}, certified p* {p_star:.5} in [1e-3, 1e-1]",
            (conc - conc_expect).abs()
        ),
    );
    assert!(ok_conc);
    assert!(ok_closed);
    assert!(ok_range, "certified p_star {p_star}");
}

#[test]
fn criterion_5_product_vector_sweep() {
    let t = Instant::now();
    let records = lemma1_sweep(explicit_shape(), &[6, 7], 3000, 50, 1e-6, 200).unwrap();
    let hits6 = records.iter().filter(|r| r.d_e == 6 && r.detected).count();
    let d7: Vec<_> = records.iter().filter(|r| r.d_e == 7).collect();
    let hits7 = d7.iter().filter(|r| r.detected).count();
    let minors_ok = d7
        .iter()
        .filter(|r| r.detected)
        .all(|r| r.witness_max_minor.unwrap_or(1.0) <= 1e-8);
    let elapsed = t.elapsed().as_secs_f64();
    let passed = hits6 == 0 && hits7 >= 48 && minors_ok && elapsed < 300.0;
    report(
        "5 product-vector sweep",
        passed,
        elapsed,
        &format!("d_E=6: {hits6}/50 detections, d_E=7: {hits7}/50 with minor-verified witnesses"),
    );
    assert_eq!(hits6, 0, "false product detection below the generic threshold");
    assert!(hits7 >= 48, "only {hits7}/50 detections at d_E = 7");
    assert!(minors_ok);
    assert!(elapsed < 300.0, "sweep took {elapsed:.2}s");
}

#[test]
fn criterion_6_random_orthogonal_pairs() {
    let t = Instant::now();
    let records = random_pair_sweep(explicit_shape(), 2024, 50, true).unwrap();
    let ortho_ok = records.iter().all(|r| r.cj_orthogonality <= 1e-14);
    let joint_zero = records
        .iter()
        .filter(|r| r.joint_ninth_eigenvalue.abs() <= 1e-10)
        .count();
    let certified = records
        .iter()
        .filter(|r| {
            let (c1, c2) = r.certified.as_ref().unwrap();
            c1.lambda > 0.0 && c2.lambda > 0.0 && c1.checker_passed && c2.checker_passed
        })
        .count();
    let elapsed = t.elapsed().as_secs_f64();
    let passed = ortho_ok && joint_zero == 50 && certified >= 45;
    report(
        "6 random pairs",
        passed,
        elapsed,
        &format!("orthogonality 50/50, joint zero {joint_zero}/50, certified {certified}/50"),
    );
    assert!(ortho_ok);
    assert_eq!(joint_zero, 50);
    assert!(certified >= 45, "certified only {certified}/50");
}

#[test]
fn criterion_7_property_suites() {
    let t = Instant::now();
    let mut parts: Vec<(&str, bool)> = Vec::new();

    // Entropy monotone in p: 100 random spectra over a 50-point grid.
    let mut ok = true;
    for stream in 0..100 {
        let mut rng = seeded_rng(71_001, stream);
        let mut spec: Vec<f64> = gaussian_vector(&mut rng, 6).iter().map(|z| z.norm_sqr()).collect();
        let s: f64 = spec.iter().sum();
        spec.iter_mut().for_each(|x| *x /= s);
        let mut prev = f64::INFINITY;
        for k in 0..50 {
            let p = 0.01 + 0.06 * k as f64;
            let v = renyi_entropy_from_spectrum(&spec, RenyiOrder::new(p).unwrap(), 1e-12);
            ok &= v <= prev + 1e-10;
            prev = v;
        }
    }
    parts.push(("entropy monotone", ok));

    // Additivity on product spectra.
    let mut ok = true;
    for stream in 0..100 {
        let mut rng = seeded_rng(71_002, stream);
        let norm = |mut v: Vec<f64>| -> Vec<f64> {
            let s: f64 = v.iter().sum();
            v.iter_mut().for_each(|x| *x /= s);
            v
        };
        let a = norm(gaussian_vector(&mut rng, 4).iter().map(|z| z.norm_sqr()).collect());
        let b = norm(gaussian_vector(&mut rng, 3).iter().map(|z| z.norm_sqr()).collect());
        let mut prod = Vec::new();
        for x in &a {
            for y in &b {
                prod.push(x * y);
            }
        }
        for p in [0.2, 0.8, 1.0, 2.0] {
            let o = RenyiOrder::new(p).unwrap();
            let lhs = renyi_entropy_from_spectrum(&prod, o, 1e-12);
            let rhs = renyi_entropy_from_spectrum(&a, o, 1e-12)
                + renyi_entropy_from_spectrum(&b, o, 1e-12);
            ok &= (lhs - rhs).abs() <= 1e-9;
        }
    }
    parts.push(("product additivity", ok));

    // Trace preservation and positivity of channel outputs.
    let mut ok = true;
    let ch = random_channel(BipartiteShape::new(4, 3).unwrap(), 71_003).unwrap();
    let (x1, _) = explicit_channels_projector().unwrap();
    for stream in 0..100 {
        for channel in [&ch, &x1] {
            let v = PureVector::from_unnormalized(&gaussian_vector(
                &mut seeded_rng(71_004, stream),
                4,
            ))
            .unwrap();
            let eigs = channel.apply_pure_eigenvalues(&v).unwrap();
            let tr: f64 = eigs.iter().sum();
            ok &= (tr - 1.0).abs() <= 1e-10 && eigs[0] >= -1e-12;
        }
    }
    parts.push(("TP/PSD outputs", ok));

    // The two application routes agree.
    let mut ok = true;
    let omega = x1.standard_cj();
    for stream in 0..100 {
        let v = PureVector::from_unnormalized(&gaussian_vector(&mut seeded_rng(71_005, stream), 4))
            .unwrap();
        let gen = x1.apply_pure(&v).unwrap();
        let std = apply_standard(&omega, x1.shape(), &v.density()).unwrap();
        ok &= gen.matrix().sub(&std).max_abs() <= 1e-10;
    }
    parts.push(("CJ route equivalence", ok));

    // SDP sandwich with dual re-verification on 100 random operators.
    let mut ok = true;
    for seed in 0..100u64 {
        let shape = if seed % 5 == 0 {
            BipartiteShape::new(4, 3).unwrap()
        } else {
            BipartiteShape::new(3, 2).unwrap()
        };
        let ch = random_channel(shape, 71_100 + seed).unwrap();
        let omega = ch.standard_cj();
        let cert = minent::certify::ppt_lower_bound(&omega, shape).unwrap();
        let check = minent::certify::verify_certificate(&omega, shape, &cert).unwrap();
        let sep = minent::certify::seesaw_separable_min(&omega, shape, 16, seed).unwrap();
        ok &= cert.dual_value <= cert.primal_value + 1e-8;
        ok &= cert.primal_value <= sep + 1e-8;
        ok &= check.passed;
    }
    parts.push(("SDP sandwich + recheck", ok));

    // Crossing points are invariant under a common rescaling of both
    // curves (log-base change): synthetic monotone pairs plus one real
    // channel instance.
    let mut ok = true;
    for stream in 0..100u64 {
        let mut rng = seeded_rng(71_200, stream);
        let a = 0.5 + gaussian_vector(&mut rng, 1)[0].norm_sqr();
        let b = 2.0 + gaussian_vector(&mut rng, 1)[0].norm_sqr();
        let target = 0.02 + 0.2 * gaussian_vector(&mut rng, 1)[0].norm_sqr().min(1.0);
        // gap(p) = a·(p − target) + b·(p − target)³: single root at target.
        let gap = |p: f64| a * (p - target) + b * (p - target).powi(3);
        let bits = refine_crossing(1e-3, 0.9, 1e-7, |p| Ok(gap(p))).unwrap();
        let nats =
            refine_crossing(1e-3, 0.9, 1e-7, |p| Ok(gap(p) * std::f64::consts::LN_2)).unwrap();
        ok &= (bits - nats).abs() <= 1e-6;
    }
    parts.push(("crossing base invariance", ok));

    let elapsed = t.elapsed().as_secs_f64();
    let all = parts.iter().all(|(_, p)| *p);
    let detail: Vec<String> = parts
        .iter()
        .map(|(n, p)| format!("{n}: {}", if *p { "ok" } else { "FAIL" }))
        .collect();
    report("7 property suites", all, elapsed, &detail.join(", "));
    for (name, passed) in parts {
        assert!(passed, "property family failed: {name}");
    }
}
