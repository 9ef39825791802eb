//! Self-check suites: seeded, small, and exact wherever the domain allows.

use clap::ValueEnum;
use hyperbm::dependence::{check_witness, pair_dependence_exact, rank_feasibility, DependenceNotion, MatrixFamily};
use hyperbm::inverse::{pair_invertible, recover_outer_inverse, sandwich_check, scaling_pair, unit_probes};
use hyperbm::nullity::{hyper_nullity_necessity, hyper_nullity_sufficiency, CompletionOptions};
use hyperbm::product::{bm_product, delta_t, general_bm_product, identity_pair, kronecker_delta};
use hyperbm::random::{random_hypermatrix, random_nonzero_matrix, RandomScalar};
use hyperbm::rank::{bm_rank_exhaustive, cp_rank_exhaustive, rank_upper_min, DecompositionTriple};
use hyperbm::{Hypermatrix, PrimeField, Rational, RationalField, Ring};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    All,
    Products,
    Transposes,
    Rank,
    Dependence,
    Inverse,
    Nullity,
}

type Check = Result<String, String>;

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn dims(r: &mut ChaCha8Rng) -> [usize; 3] {
    [r.random_range(1..=3), r.random_range(1..=3), r.random_range(1..=3)]
}

fn identity_law(r: &mut ChaCha8Rng) -> Check {
    let d = RationalField;
    for _ in 0..20 {
        let s @ [m, n, p] = dims(r);
        let a = random_hypermatrix::<Rational, _>(s, &d, r);
        let (j0, j1) = identity_pair(m, n, p, &d);
        if bm_product(&j0, &a, &j1).map_err(e)? != a {
            return Err(format!("Prod(J0, A, J1) != A at {s:?}"));
        }
    }
    Ok("20 instances".into())
}

fn delta_sum(r: &mut ChaCha8Rng) -> Check {
    let d = RationalField;
    for _ in 0..20 {
        let [n0, n1, n2] = dims(r);
        let l = r.random_range(1..=3);
        let a0 = random_hypermatrix::<Rational, _>([n0, l, n2], &d, r);
        let a1 = random_hypermatrix::<Rational, _>([n0, n1, l], &d, r);
        let a2 = random_hypermatrix::<Rational, _>([l, n1, n2], &d, r);
        let p = bm_product(&a0, &a1, &a2).map_err(e)?;
        let mut acc = Hypermatrix::zeros([n0, n1, n2], &d);
        for t in 0..l {
            acc = acc.add(&general_bm_product(&a0, &a1, &a2, &delta_t(l, t, &d).map_err(e)?).map_err(e)?).map_err(e)?;
        }
        if acc != p || general_bm_product(&a0, &a1, &a2, &kronecker_delta(l, &d)).map_err(e)? != p {
            return Err("background product law broken".into());
        }
    }
    Ok("20 triples".into())
}

fn transposes(r: &mut ChaCha8Rng) -> Check {
    let d = RationalField;
    for _ in 0..20 {
        let [n0, n1, n2] = dims(r);
        let l = r.random_range(1..=3);
        let x = random_hypermatrix::<Rational, _>([n0, l, n2], &d, r);
        let y = random_hypermatrix::<Rational, _>([n0, n1, l], &d, r);
        let z = random_hypermatrix::<Rational, _>([l, n1, n2], &d, r);
        let p = bm_product(&x, &y, &z).map_err(e)?;
        if p.transpose_pow(3) != p {
            return Err("A^T^3 != A".into());
        }
        if bm_product(&y.transpose(), &z.transpose(), &x.transpose()).map_err(e)? != p.transpose() {
            return Err("product transpose law broken".into());
        }
    }
    Ok("20 triples".into())
}

fn min_bound(r: &mut ChaCha8Rng) -> Check {
    let d = RationalField;
    for _ in 0..20 {
        let s = dims(r);
        let a = random_hypermatrix::<Rational, _>(s, &d, r);
        let cert = rank_upper_min(&a).map_err(e)?;
        cert.verify(&a).map_err(e)?;
        if cert.r() != s.into_iter().min().unwrap_or(0) {
            return Err(format!("min-side certificate has {} terms at {s:?}", cert.r()));
        }
    }
    Ok("20 certificates".into())
}

fn delta_gap() -> Check {
    let f = PrimeField::new(2).map_err(e)?;
    let a = delta_t(2, 0, &f).map_err(e)?.add(&delta_t(2, 1, &f).map_err(e)?).map_err(e)?;
    let bm = bm_rank_exhaustive(&a, 10_000_000).map_err(e)?;
    let cp = cp_rank_exhaustive(&a, 10_000_000).map_err(e)?;
    if (bm.r(), cp.r()) != (1, 2) {
        return Err(format!("BM-rank {} and CP-rank {}, expected 1 and 2", bm.r(), cp.r()));
    }
    Ok("Δ over GF(2), n=2: BM-rank 1, CP-rank 2".into())
}

fn hyperdet_dependence(r: &mut ChaCha8Rng) -> Check {
    let d = RationalField;
    for _ in 0..10 {
        let b0 = random_nonzero_matrix::<Rational, _>(2, 2, &d, r);
        let u: Vec<Rational> = (0..2).map(|_| Rational::sample_nonzero(&d, r)).collect();
        let v: Vec<Rational> = (0..2).map(|_| Rational::sample_nonzero(&d, r)).collect();
        let b1 = b0.scale_rows_cols(&u, &v);
        let fam = MatrixFamily::new(vec![b0, b1]).map_err(e)?;
        let w = pair_dependence_exact(&fam).map_err(e)?.ok_or("rescaled pair reported independent")?;
        check_witness(&fam, &w, DependenceNotion::Pivoted, None).map_err(e)?;
    }
    match (rank_feasibility(3, 3, 2), rank_feasibility(4, 4, 2)) {
        (Ok(false), Ok(true)) => Ok("10 rescaled pairs; feasibility (3,3,2) false, (4,4,2) true".into()),
        other => Err(format!("feasibility predicate gave {other:?}")),
    }
}

fn inverse(r: &mut ChaCha8Rng) -> Check {
    let d = RationalField;
    for _ in 0..10 {
        let [m, n, p] = dims(r);
        let pair = scaling_pair(&random_nonzero_matrix::<Rational, _>(m, p, &d, r), &random_nonzero_matrix::<Rational, _>(p, n, &d, r)).map_err(e)?;
        if !pair_invertible(&pair).invertible {
            return Err("scaling pair reported singular".into());
        }
        let inv = recover_outer_inverse(&pair).map_err(e)?;
        if !sandwich_check(&pair, &inv, &unit_probes([m, n, p], &d)).map_err(e)?.holds {
            return Err("recovered inverse fails the sandwich identity".into());
        }
    }
    Ok("10 scaling pairs".into())
}

fn nullity(r: &mut ChaCha8Rng) -> Check {
    let d = RationalField;
    let opts = CompletionOptions::default();
    for _ in 0..10 {
        let [m, n, _] = dims(r);
        let p = 2;
        let pair = scaling_pair(&random_nonzero_matrix::<Rational, _>(m, p, &d, r), &random_nonzero_matrix::<Rational, _>(p, n, &d, r)).map_err(e)?;
        let v = Hypermatrix::from_fn([m, n, p], &d, |_, _, t| if t == 0 { Rational::sample_nonzero(&d, r) } else { Rational::zero(&d) });
        let a = pair.act(&v).map_err(e)?;
        let dec = DecompositionTriple::new(pair.a.clone(), v, pair.b.clone(), vec![0]).map_err(e)?;
        let cert = hyper_nullity_necessity(&a, &dec, &opts).map_err(e)?;
        cert.verify(&a).map_err(e)?;
        let back = hyper_nullity_sufficiency(&a, &cert.pair, &cert.zero_slices).map_err(e)?;
        if cert.nullity() != 1 || back.r() != 1 || back.reconstruct().map_err(e)? != a {
            return Err("rank-1 round trip broke".into());
        }
    }
    Ok("10 rank-1 round trips".into())
}

pub fn run(suite: Suite, seed: u64) -> Value {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut checks: Vec<(&str, Check)> = Vec::new();
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Products) {
        checks.push(("identity_pair_law", identity_law(&mut r)));
        checks.push(("background_sum_law", delta_sum(&mut r)));
    }
    if want(Suite::Transposes) {
        checks.push(("transpose_laws", transposes(&mut r)));
    }
    if want(Suite::Rank) {
        checks.push(("min_side_certificates", min_bound(&mut r)));
        checks.push(("bm_cp_rank_gap", delta_gap()));
    }
    if want(Suite::Dependence) {
        checks.push(("pair_dependence", hyperdet_dependence(&mut r)));
    }
    if want(Suite::Inverse) {
        checks.push(("scaling_inverses", inverse(&mut r)));
    }
    if want(Suite::Nullity) {
        checks.push(("nullity_round_trip", nullity(&mut r)));
    }
    let pass = checks.iter().all(|(_, c)| c.is_ok());
    let checks: Vec<Value> = checks
        .into_iter()
        .map(|(name, c)| match c {
            Ok(detail) => json!({"name": name, "pass": true, "detail": detail}),
            Err(detail) => json!({"name": name, "pass": false, "detail": detail}),
        })
        .collect();
    let suite = suite.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default();
    json!({"suite": suite, "seed": seed, "pass": pass, "checks": checks})
}
