//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p gammalab --test acceptance -- --nocapture` to see
//! the report.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::f64::consts::PI;
use std::time::Instant;

use gammalab::fundamental_sets::{
    affine_closure, closure_growth_bound, complex_reduce_trace, in_complex_strip, in_leaf_union, in_quarter_set,
    landau_construct, landau_exact_measure, landau_lemma_decompose, quarter_set_trace, ratio, stern_independent_count,
    totient, trace_evaluate, Rational, DEFAULT_DEPTH_CAP, DEFAULT_NODE_BUDGET, DEFAULT_TRACE_BUDGET,
};
use gammalab::identities::{nonvanishing_scan_with, relative_residual, verify_grid, IdentityId, SampleSpec};
use gammalab::mellin::{mellin_transform, rmt_residual, PhiSpec};
use gammalab::numerics::{c64, gamma, gamma_integral, sin_pi, Complex64, QuadratureSpec};
use gammalab::schlomilch::{
    binomial_identity_check, euler_transform_residual, gauss_second_summation_residual, generalized_lhs,
    generalized_series, schlomilch_finite_lhs, schlomilch_finite_rhs, Hyp2F1Params,
};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn rel(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm()
}

fn identity_suite() -> Verdict {
    let start = Instant::now();
    let mut ids = vec![
        IdentityId::Functional,
        IdentityId::Reflection,
        IdentityId::Duplication,
        IdentityId::Comb,
    ];
    ids.extend((2..=6).map(IdentityId::Multiplication));
    ids.extend((1..=6).map(IdentityId::Sine));
    ids.extend((0..=8).map(IdentityId::Cosine));
    let mut worst = (0.0f64, String::new());
    let mut all = true;
    for (i, id) in ids.iter().enumerate() {
        let spec = SampleSpec::random(200, id.default_region(), 1000 + i as u64);
        match verify_grid(*id, &spec, 1e-10) {
            Ok(r) => {
                all &= r.pass && r.sample_count == 200;
                if r.max_relative_residual > worst.0 {
                    worst = (r.max_relative_residual, id.to_string());
                }
            }
            Err(e) => {
                all = false;
                worst = (f64::INFINITY, format!("{id}: {e}"));
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(
        all && secs < 10.0,
        format!("{} identities x 200 samples, worst {:.2e} ({}), {:.2} s", ids.len(), worst.0, worst.1, secs),
    )
}

fn gamma_oracle() -> Verdict {
    let mut r = rng(2);
    let spec = QuadratureSpec::half_line(1e-12);
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let z = c64(r.gen_range(0.5..=5.0), r.gen_range(-2.0..=2.0));
        let e = match (gamma_integral(z, &spec), gamma(z)) {
            (Ok(q), Ok(g)) => rel(q, g),
            _ => f64::INFINITY,
        };
        worst = worst.max(e);
    }
    verdict(worst < 1e-8, format!("20 points, worst relative error {worst:.2e}"))
}

fn schlomilch_finite() -> Verdict {
    let mut r = rng(3);
    let mut worst = 0.0f64;
    let mut worst_dup = 0.0f64;
    for m in 0..=6u32 {
        for _ in 0..50 {
            let z = c64(r.gen_range(m as f64 + 0.2..m as f64 + 10.0), r.gen_range(-2.0..=2.0));
            let e = match (schlomilch_finite_lhs(m, z), schlomilch_finite_rhs(m, z)) {
                (Ok(l), Ok(rr)) => relative_residual(l, rr),
                _ => f64::INFINITY,
            };
            worst = worst.max(e);
            if m == 0 {
                let d = match (schlomilch_finite_lhs(0, z), gamma(z)) {
                    (Ok(l), Ok(g)) => relative_residual(l, g),
                    _ => f64::INFINITY,
                };
                worst_dup = worst_dup.max(d);
            }
        }
    }
    verdict(
        worst < 1e-9 && worst_dup < 1e-12,
        format!("m = 0..6 x 50, worst {worst:.2e}; m = 0 against duplication {worst_dup:.2e}"),
    )
}

fn binomial() -> Verdict {
    let mut bad = Vec::new();
    for m in 0..=20 {
        for l in 0..=20 {
            let (lhs, rhs, eq) = binomial_identity_check(m, l);
            if !eq || lhs != rhs {
                bad.push((m, l));
            }
        }
    }
    verdict(bad.is_empty(), format!("441 cases, {} unequal {:?}", bad.len(), bad))
}

fn generalized() -> Verdict {
    let mut r = rng(5);
    let mut worst = 0.0f64;
    let mut max_terms = 0;
    let mut n = 0;
    while n < 100 {
        let w: f64 = r.gen_range(0.1..=3.0);
        let z: f64 = r.gen_range(0.1..=3.0);
        let s = w + z - 0.5;
        if (s - s.round()).abs() < 1e-2 {
            continue;
        }
        n += 1;
        let (wc, zc) = (c64(w, 0.0), c64(z, 0.0));
        let e = match (generalized_series(wc, zc, 1e-15, 500), generalized_lhs(wc, zc)) {
            (Ok(sr), Ok(closed)) if sr.converged => {
                max_terms = max_terms.max(sr.terms_used);
                relative_residual(sr.value, closed)
            }
            _ => f64::INFINITY,
        };
        worst = worst.max(e);
    }
    // w = (z+m+1)/2, z' = (z−m)/2 turns the series into the finite sum
    let mut spec_worst = 0.0f64;
    for m in 0..=4u32 {
        for k in 0..5 {
            let z = c64(m as f64 + 1.3 + 0.7 * k as f64, 0.4 - 0.2 * k as f64);
            let w = (z + m as f64 + 1.0) * 0.5;
            let zp = (z - m as f64) * 0.5;
            let e = match (
                generalized_series(w, zp, 1e-15, 500),
                schlomilch_finite_rhs(m, z),
                generalized_lhs(w, zp),
                schlomilch_finite_lhs(m, z),
            ) {
                (Ok(sr), Ok(fr), Ok(gl), Ok(fl)) => relative_residual(sr.value, fr).max(relative_residual(gl, fl)),
                _ => f64::INFINITY,
            };
            spec_worst = spec_worst.max(e);
        }
    }
    verdict(
        worst < 1e-8 && max_terms <= 500 && spec_worst < 1e-10,
        format!("100 pairs, worst {worst:.2e} in at most {max_terms} terms; specialization m <= 4 worst {spec_worst:.2e}"),
    )
}

fn hypergeometric() -> Verdict {
    let mut r = rng(6);
    let mut euler = 0.0f64;
    let mut n = 0;
    while n < 50 {
        let (a, b, c) = (r.gen_range(-2.0..2.0), r.gen_range(-2.0..2.0), r.gen_range(0.3..3.0));
        let Ok(p) = Hyp2F1Params::real(a, b, c) else { continue };
        n += 1;
        euler = euler.max(euler_transform_residual(&p).unwrap_or(f64::INFINITY));
    }
    let mut gauss = 0.0f64;
    let mut n = 0;
    while n < 50 {
        let a = c64(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
        let b = c64(r.gen_range(-2.0..2.0), r.gen_range(-1.0..1.0));
        let Ok(e) = gauss_second_summation_residual(a, b, 1e-16) else { continue };
        n += 1;
        gauss = gauss.max(e);
    }
    verdict(
        euler < 1e-10 && gauss < 1e-10,
        format!("50 sets each: Euler transformation {euler:.2e}, Gauss second summation {gauss:.2e}"),
    )
}

fn landau() -> Verdict {
    let mut ok = true;
    let mut notes = Vec::new();
    let half = ratio(1, 2);
    match landau_construct(&half, DEFAULT_NODE_BUDGET) {
        Ok(fs) => {
            let conserved = fs.lemmas.iter().all(|l| l.conserves_measure() && l.i_is_large(&half));
            ok &= fs.t == 11 && fs.measure < half && conserved;
            notes.push(format!(
                "δ=1/2 forest: t={}, measure {}, {} lemmas conserved={}",
                fs.t,
                fs.measure,
                fs.lemmas.len(),
                conserved
            ));
        }
        Err(e) => {
            ok = false;
            notes.push(format!("δ=1/2 forest failed: {e}"));
        }
    }
    let mut r = rng(7);
    for d in [ratio(1, 2), ratio(1, 10), ratio(1, 50)] {
        match landau_exact_measure(&d) {
            Ok(m) => {
                ok &= m.measure < d;
                notes.push(format!("δ={}: t={}, measure/δ = {:.4}", d, m.t, (&m.measure / &d).to_f64().unwrap_or(f64::NAN)));
            }
            Err(e) => {
                ok = false;
                notes.push(format!("δ={d}: {e}"));
            }
        }
        // lemma-level conservation on random dyadic subintervals of (0, 1]
        for _ in 0..50 {
            let a: i64 = r.gen_range(0..1024);
            let b: i64 = r.gen_range(a + 1..=1024);
            let (alpha, beta) = (ratio(a, 1024), ratio(b, 1024));
            match landau_lemma_decompose(&alpha, &beta, &d) {
                Ok(dec) => {
                    let total = dec.js.iter().fold(dec.i.len(), |acc, j| acc + j.len());
                    let large = dec.i.len() * Rational::from_integer(4.into()) > &d * (&beta - &alpha);
                    ok &= total == &beta - &alpha && large;
                }
                Err(_) => ok = false,
            }
        }
    }
    verdict(ok, notes.join("; "))
}

fn tracers() -> Verdict {
    let mut ok = true;
    let fs = match landau_construct(&ratio(1, 2), DEFAULT_NODE_BUDGET) {
        Ok(fs) => fs,
        Err(e) => return verdict(false, format!("construction failed: {e}")),
    };
    let mut r = rng(8);
    let mut real_worst = 0.0f64;
    for _ in 0..100 {
        let q: i64 = r.gen_range(1..=1_000_000);
        let x = ratio(q, 1_000_000);
        match trace_evaluate(&x, &fs) {
            Ok((v, t)) => {
                let g = gamma(c64(x.to_f64().unwrap(), 0.0)).unwrap().re;
                real_worst = real_worst.max(((v - g) / g).abs());
                ok &= t.validate(&in_leaf_union(&fs)).is_ok() && rel(t.replay().unwrap(), t.value) <= 1e-12;
            }
            Err(_) => ok = false,
        }
    }
    let mut quarter_worst = 0.0f64;
    let mut n = 0;
    while n < 100 {
        let x: f64 = r.gen_range(0.0..0.5);
        if x == 0.0 || (x - 1.0 / 3.0).abs() < 1e-6 {
            continue;
        }
        n += 1;
        match quarter_set_trace(x, DEFAULT_DEPTH_CAP) {
            Ok((v, t)) => {
                let g = gamma(c64(x, 0.0)).unwrap().re;
                quarter_worst = quarter_worst.max(((v - g) / g).abs());
                ok &= t.validate(&in_quarter_set).is_ok();
            }
            Err(_) => ok = false,
        }
    }
    let mut complex_worst = 0.0f64;
    for _ in 0..50 {
        let re = 1.0 - r.gen_range(0.0..1.0);
        let z = c64(re, r.gen_range(-8.0..=8.0));
        match complex_reduce_trace(z, &fs, DEFAULT_TRACE_BUDGET) {
            Ok((v, t)) => {
                complex_worst = complex_worst.max(rel(v, gamma(z).unwrap()));
                ok &= t.validate(&in_complex_strip(&fs)).is_ok();
            }
            Err(_) => ok = false,
        }
    }
    verdict(
        ok && real_worst < 1e-9 && quarter_worst < 1e-9 && complex_worst < 1e-8,
        format!("landau {real_worst:.2e}, quarter {quarter_worst:.2e}, complex {complex_worst:.2e}; traces validated={ok}"),
    )
}

fn stern() -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    for m in 3..=12u32 {
        let got = stern_independent_count(m).map(|v| v as u64).unwrap_or(u64::MAX);
        let want = totient(m as u64) / 2;
        ok &= got == want;
        detail.push(format!("{m}:{got}/{want}"));
    }
    verdict(ok, format!("independent/φ(m)/2 = {}", detail.join(" ")))
}

fn rmt() -> Verdict {
    let q = QuadratureSpec::half_line(1e-10);
    let mut worst = (0.0f64, String::new());
    let mut one_worst = 0.0f64;
    for id in ["one", "geom:2", "geom:1/3", "exp", "log1p"] {
        let spec: PhiSpec = id.parse().unwrap();
        for k in 1..=9 {
            let s = k as f64 / 10.0;
            if s >= spec.eta {
                continue;
            }
            let e = rmt_residual(&spec, s).unwrap_or(f64::INFINITY);
            if e > worst.0 {
                worst = (e, format!("{id} at s={s}"));
            }
            if id == "one" {
                let m = mellin_transform(&spec, s, &q).unwrap_or(f64::NAN);
                let want = PI / sin_pi(s);
                one_worst = one_worst.max(((m - want) / want).abs());
            }
        }
    }
    verdict(
        worst.0 < 1e-7 && one_worst < 1e-7,
        format!("worst {:.2e} ({}); φ≡1 against π/sin πs {one_worst:.2e}", worst.0, worst.1),
    )
}

fn sharpness() -> Verdict {
    let mut r = rng(11);
    let mut ok = true;
    let mut sizes = Vec::new();
    for _ in 0..20 {
        let count = r.gen_range(1..=3);
        let pts: BTreeSet<Rational> = (0..count)
            .map(|_| ratio(r.gen_range(1..=20), r.gen_range(1..=12)))
            .collect();
        let depth = r.gen_range(0..=2u32);
        let max_n = r.gen_range(1..=3u32);
        match affine_closure(&pts, depth, max_n, 1_000_000) {
            Ok(out) => {
                let bound = pts.len() as u64 * closure_growth_bound(max_n).pow(depth);
                ok &= out.len() as u64 <= bound && out.iter().all(|p| *p > Rational::zero());
                ok &= affine_closure(&pts, 0, max_n, 1_000_000).map_or(false, |o| o == pts);
                sizes.push(format!("{}/{}", out.len(), bound));
            }
            Err(_) => ok = false,
        }
    }
    verdict(ok, format!("20 instances, size/bound {}", sizes.join(" ")))
}

fn nonvanishing() -> Verdict {
    let scan = nonvanishing_scan_with((-5.5, 5.5), (-3.0, 3.0), 0.05, 0.05);
    let Ok((min, at)) = scan else {
        return verdict(false, "scan produced no points");
    };
    // real axis on the same grid, then a dense oracle scan around the minimum
    let Ok((rmin, rat)) = nonvanishing_scan_with((0.05, 5.5), (0.0, 0.0), 0.05, 0.05) else {
        return verdict(false, "real-axis scan produced no points");
    };
    let (dense_min, dense_at) = (0..=200_000)
        .map(|i| 1.0 + i as f64 * 5e-6)
        .map(|x| (gamma(c64(x, 0.0)).unwrap().re, x))
        .fold((f64::INFINITY, 0.0), |b, c| if c.0 < b.0 { c } else { b });
    let pass = min > 0.0
        && (rat.re - 1.4616).abs() <= 0.05
        && (rmin - 0.8856).abs() <= 1e-3
        && (dense_at - 1.4616).abs() < 1e-4
        && (dense_min - 0.8856).abs() <= 1e-3
        && rmin >= dense_min;
    verdict(
        pass,
        format!(
            "min |Γ| = {min:.3e} at {at}; real-axis grid min {rmin:.6} at {:.2}, dense {dense_min:.6} at {dense_at:.5}",
            rat.re
        ),
    )
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Verdict); 12] = [
        ("identity suite", identity_suite),
        ("gamma vs quadrature oracle", gamma_oracle),
        ("Schlömilch finite formula", schlomilch_finite),
        ("binomial corollary", binomial),
        ("generalized theorem", generalized),
        ("2F1 machinery", hypergeometric),
        ("Landau construction", landau),
        ("tracers", tracers),
        ("Stern / Legendre count", stern),
        ("master theorem", rmt),
        ("sharpness closure", sharpness),
        ("non-vanishing scan", nonvanishing),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let v = f();
        println!(
            "criterion {:>2} {} {name}: {} [{:.1} s]",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            v.detail,
            start.elapsed().as_secs_f64()
        );
        if !v.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
