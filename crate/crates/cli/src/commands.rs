use std::path::Path;

use clap::ValueEnum;
use hyperbm::dependence::{
    check_witness, combination_residual, exhaustive_search, is_dependent_exact, is_dependent_numeric, low_rank_relation, numeric_search,
    pair_dependence_exact, DependenceNotion, DiagonalWitness, LowRankRelation, MatrixFamily,
};
use hyperbm::inverse::{pair_invertible, recover_outer_inverse, sandwich_check, unit_probes};
use hyperbm::io::{self, AnyHypermatrix};
use hyperbm::nullity::{nullity_direct_search, nullity_from_decomposition, nullity_via_rank_exact, nullity_via_rank_numeric, CompletionOptions};
use hyperbm::product::{bm_product, general_bm_product};
use hyperbm::rank::{bm_rank_exhaustive, generic_rank_pipeline, rank_upper_min};
use hyperbm::util::combinations;
use hyperbm::{Complex, Fp, Hypermatrix, Rational, Scalar, ScalarDomain};
use serde_json::{json, Value};

use crate::{CliError, Notion, NullityStrategy, RankStrategy, RunConfig};

type Out = Result<Value, CliError>;

fn label<E: ValueEnum>(v: E) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

fn read_json(path: &Path) -> Result<Value, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError { code: 1, kind: "io", message: format!("{}: {e}", path.display()) })?;
    serde_json::from_str(&text).map_err(|e| CliError::parse(format!("{}: {e}", path.display())))
}

fn load_any(path: &Path, cfg: &RunConfig) -> Result<AnyHypermatrix, CliError> {
    Ok(AnyHypermatrix::from_json(&read_json(path)?, cfg.domain)?)
}

/// Loads a hypermatrix in a domain already fixed by another input.
fn load_as<T: Scalar>(path: &Path, d: &T::Domain) -> Result<Hypermatrix<T>, CliError> {
    let v = read_json(path)?;
    io::resolve_domain(&v, Some(T::describe(d)))?;
    Ok(io::hypermatrix_from_json(&v, d)?)
}

fn notion_of(n: Notion) -> DependenceNotion {
    match n {
        Notion::Pivoted => DependenceNotion::Pivoted,
        Notion::Nontrivial => DependenceNotion::Nontrivial,
    }
}

fn notion_label(n: DependenceNotion) -> &'static str {
    match n {
        DependenceNotion::Pivoted => "pivoted",
        DependenceNotion::Nontrivial => "nontrivial",
    }
}

fn wrong_domain(what: &str, need: &str, got: ScalarDomain) -> CliError {
    CliError::parse(format!("{what} needs a {need} domain, input is {}", got.label()))
}

// ---------------------------------------------------------------- prod

fn prod_typed<T: Scalar>(a0: &Hypermatrix<T>, rest: [&Path; 2], background: Option<&Path>) -> Out {
    let d = a0.domain();
    let (a1, a2) = (load_as::<T>(rest[0], d)?, load_as::<T>(rest[1], d)?);
    let p = match background {
        None => bm_product(a0, &a1, &a2)?,
        Some(b) => general_bm_product(a0, &a1, &a2, &load_as::<T>(b, d)?)?,
    };
    Ok(io::hypermatrix_to_json(&p))
}

pub fn prod(cfg: &RunConfig, inputs: [&Path; 3], background: Option<&Path>) -> Out {
    let rest = [inputs[1], inputs[2]];
    match load_any(inputs[0], cfg)? {
        AnyHypermatrix::Rational(a) => prod_typed(&a, rest, background),
        AnyHypermatrix::Gf(a) => prod_typed(&a, rest, background),
        AnyHypermatrix::Complex(a) => prod_typed(&a, rest, background),
    }
}

// ---------------------------------------------------------------- rank

fn min_bound<T: Scalar>(a: &Hypermatrix<T>) -> Out {
    let cert = rank_upper_min(a)?;
    cert.verify(a)?;
    Ok(io::certificate_to_json(&cert))
}

pub fn rank(cfg: &RunConfig, input: &Path, strategy: RankStrategy) -> Out {
    let a = load_any(input, cfg)?;
    let mut out = match (strategy, &a) {
        (RankStrategy::MinBound, AnyHypermatrix::Rational(h)) => min_bound(h)?,
        (RankStrategy::MinBound, AnyHypermatrix::Gf(h)) => min_bound(h)?,
        (RankStrategy::MinBound, AnyHypermatrix::Complex(h)) => min_bound(h)?,
        (RankStrategy::ExhaustiveGf, AnyHypermatrix::Gf(h)) => {
            let cert = bm_rank_exhaustive(h, cfg.budget)?;
            cert.verify(h)?;
            io::certificate_to_json(&cert)
        }
        (RankStrategy::ExhaustiveGf, other) => return Err(wrong_domain("exhaustive-gf", "gf:q", other.domain())),
        (RankStrategy::GenericPipeline, AnyHypermatrix::Complex(h)) => {
            let rep = generic_rank_pipeline(h, &cfg.solver, cfg.tau)?;
            rep.certificate.verify(h)?;
            let mut v = io::certificate_to_json(&rep.certificate);
            v["rewrites"] = json!(rep.rewrites.iter().map(|r| r.tau).collect::<Vec<_>>());
            v["stalls"] = json!(rep.stalls.iter().map(|&(tau, ell)| json!({"tau": tau, "ell": ell})).collect::<Vec<_>>());
            v
        }
        (RankStrategy::GenericPipeline, other) => return Err(wrong_domain("generic-pipeline", "complex", other.domain())),
    };
    out["strategy"] = json!(label(strategy));
    Ok(out)
}

// ---------------------------------------------------------------- dependence

fn witness_report<T: Scalar>(f: &MatrixFamily<T>, w: &DiagonalWitness<T>, notion: DependenceNotion, tol: Option<f64>) -> Result<Value, CliError> {
    let residual = check_witness(f, w, notion, tol)?;
    Ok(io::witness_to_json(w, residual))
}

/// Searches `size`-subsets of depth slices with `test`; the first dependent subset wins.
fn scan<T: Scalar>(
    h: &Hypermatrix<T>,
    size: usize,
    notion: DependenceNotion,
    tol: Option<f64>,
    mut test: impl FnMut(&MatrixFamily<T>) -> hyperbm::Result<Option<DiagonalWitness<T>>>,
) -> Out {
    let p = h.shape()[2];
    if size == 0 || size > p {
        return Err(CliError::from(hyperbm::Error::Precondition(format!("subset size {size} must be in 1..={p}"))));
    }
    let fam = MatrixFamily::from_depth_slices(h);
    let mut searched = 0u64;
    for subset in combinations(p, size) {
        searched += 1;
        let sub = fam.subset(&subset);
        if let Some(w) = test(&sub)? {
            return Ok(json!({"dependent": true, "slices": subset, "witness": witness_report(&sub, &w, notion, tol)?, "subsets_searched": searched}));
        }
    }
    Ok(json!({"dependent": false, "subsets_searched": searched}))
}

fn relation<T: Scalar>(
    h: &Hypermatrix<T>,
    triple: &Path,
    search: impl FnMut(&MatrixFamily<T>) -> hyperbm::Result<Option<DiagonalWitness<T>>>,
) -> Out {
    let dec = io::triple_from_json(&read_json(triple)?, h.domain())?;
    Ok(match low_rank_relation(h, &dec, search)? {
        LowRankRelation::ZeroSlice { k } => json!({"dependent": true, "zero_slice": k}),
        LowRankRelation::Dependent { slices, terms, witness, .. } => {
            let fam = MatrixFamily::from_depth_slices(h).subset(&terms);
            let residual = combination_residual(&fam, &witness)?.frob_norm();
            json!({"dependent": true, "slices": slices, "terms": terms, "witness": io::witness_to_json(&witness, residual)})
        }
    })
}

fn rational_pair_only(f: &MatrixFamily<Rational>, notion: DependenceNotion) -> hyperbm::Result<Option<DiagonalWitness<Rational>>> {
    if notion != DependenceNotion::Pivoted || f.len() != 2 {
        return Err(hyperbm::Error::Precondition(format!(
            "exact rational dependence is decided for pivoted pairs only, got {} members under {}",
            f.len(),
            notion_label(notion)
        )));
    }
    pair_dependence_exact(f)
}

pub fn dependence(cfg: &RunConfig, input: &Path, size: Option<usize>, notion: Notion, triple: Option<&Path>) -> Out {
    let notion = notion_of(notion);
    let a = load_any(input, cfg)?;
    let size = size.unwrap_or(match &a {
        AnyHypermatrix::Rational(h) => h.shape()[2],
        AnyHypermatrix::Gf(h) => h.shape()[2],
        AnyHypermatrix::Complex(h) => h.shape()[2],
    });
    let solver = cfg.solver;
    let budget = cfg.budget;
    let mut out = match (&a, triple) {
        (AnyHypermatrix::Rational(h), None) => scan(h, size, notion, None, |f| rational_pair_only(f, notion))?,
        (AnyHypermatrix::Gf(h), None) => scan(h, size, notion, None, |f| is_dependent_exact(f, notion, budget))?,
        (AnyHypermatrix::Complex(h), None) => scan(h, size, notion, Some(solver.tol), |f| Ok(is_dependent_numeric(f, notion, &solver)))?,
        (AnyHypermatrix::Rational(h), Some(t)) => relation(h, t, |f| rational_pair_only(f, notion))?,
        (AnyHypermatrix::Gf(h), Some(t)) => relation(h, t, exhaustive_search(notion, budget))?,
        (AnyHypermatrix::Complex(h), Some(t)) => relation(h, t, numeric_search(notion, solver))?,
    };
    out["notion"] = json!(notion_label(notion));
    Ok(out)
}

// ---------------------------------------------------------------- inverse pairs

fn inverse_typed<T: Scalar>(v: &Value, d: &T::Domain) -> Out {
    let pair = io::pair_from_json::<T>(v, d)?;
    let rep = pair_invertible(&pair);
    if !rep.invertible {
        return Ok(io::inverse_report_to_json::<T>(&rep, None, None));
    }
    let inv = recover_outer_inverse(&pair)?;
    let check = sandwich_check(&pair, &inv, &unit_probes([pair.m(), pair.n(), pair.p()], d))?;
    if !check.holds {
        return Err(CliError::from(hyperbm::Error::Verification(format!("recovered inverse misses the sandwich identity by {:.3e}", check.residual))));
    }
    Ok(io::inverse_report_to_json(&rep, Some(&inv), Some(check.residual)))
}

pub fn inverse_pair(cfg: &RunConfig, input: &Path) -> Out {
    let v = read_json(input)?;
    let sd = io::pair_domain(&v, cfg.domain)?;
    match sd {
        ScalarDomain::Rational => inverse_typed::<Rational>(&v, &Rational::domain_from(&sd)?),
        ScalarDomain::PrimeField { .. } => inverse_typed::<Fp>(&v, &Fp::domain_from(&sd)?),
        ScalarDomain::ComplexFloat { .. } => inverse_typed::<Complex>(&v, &Complex::domain_from(&sd)?),
    }
}

// ---------------------------------------------------------------- nullity

fn from_triple<T: Scalar + hyperbm::random::RandomScalar>(h: &Hypermatrix<T>, triple: &Path, opts: &CompletionOptions) -> Out {
    let dec = io::triple_from_json(&read_json(triple)?, h.domain())?;
    let cert = nullity_from_decomposition(h, &dec, opts)?;
    cert.verify(h)?;
    Ok(io::nullity_to_json(&cert))
}

pub fn nullity(cfg: &RunConfig, input: &Path, strategy: NullityStrategy, triple: Option<&Path>) -> Out {
    let a = load_any(input, cfg)?;
    let opts = CompletionOptions { seed: cfg.solver.seed, ..CompletionOptions::default() };
    let mut out = match (strategy, &a, triple) {
        (NullityStrategy::DirectSearch, AnyHypermatrix::Gf(h), _) => {
            let cert = nullity_direct_search(h, cfg.budget)?;
            cert.verify(h)?;
            io::nullity_to_json(&cert)
        }
        (NullityStrategy::DirectSearch, other, _) => return Err(wrong_domain("direct-search", "gf:q", other.domain())),
        (NullityStrategy::ViaRank, AnyHypermatrix::Rational(h), Some(t)) => from_triple(h, t, &opts)?,
        (NullityStrategy::ViaRank, AnyHypermatrix::Gf(h), Some(t)) => from_triple(h, t, &opts)?,
        (NullityStrategy::ViaRank, AnyHypermatrix::Complex(h), Some(t)) => from_triple(h, t, &opts)?,
        (NullityStrategy::ViaRank, AnyHypermatrix::Gf(h), None) => {
            let cert = nullity_via_rank_exact(h, cfg.budget, &opts)?;
            cert.verify(h)?;
            io::nullity_to_json(&cert)
        }
        (NullityStrategy::ViaRank, AnyHypermatrix::Complex(h), None) => {
            let cert = nullity_via_rank_numeric(h, &cfg.solver, &opts)?;
            cert.verify(h)?;
            io::nullity_to_json(&cert)
        }
        (NullityStrategy::ViaRank, AnyHypermatrix::Rational(_), None) => {
            return Err(CliError::from(hyperbm::Error::Precondition(
                "via-rank over the rationals needs a decomposition (--triple); exact rational rank is not searched".into(),
            )))
        }
    };
    out["strategy"] = json!(label(strategy));
    Ok(out)
}
