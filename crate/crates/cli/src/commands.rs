//! One function per subcommand, each returning verdicts, metrics and a result payload.

use gaplab_core::census::{
    kronecker_census, nn_census_with, section5_cloud, section5_example, theorem4_extract, NnMethod, PointCloud,
};
use gaplab_core::extremal::{
    ap_witness, behrend_scan, behrend_set, exact_ap_free, greedy_ap_free, lattice_projection, prop1_build,
    prop1_forced_subset_check, APFreeSet, EXACT_AP_LIMIT,
};
use gaplab_core::gaps::{
    fractional_orbit, greedy_max_distinct, spectrum, theorem1_check, three_gap_check, threek_gap_check, APUnionSpec,
    CircularSet, WrapPolicy,
};
use gaplab_core::generators::{decompose, neighbour_gaps, verify_generation, Side};
use gaplab_core::kissing::{hexagon, kissing_check, kissing_check_generic, max_configuration_on_grid};
use gaplab_core::sampling::{random_cloud, random_i64s, rng};
use gaplab_core::sumset::{
    difference_set, doubling_ratio, int_sumset_count, minimal_difference_cover, sumset, Domain, FiniteExactSet,
};
use gaplab_core::{Error, Rational, TorusPoint, TorusVector};
use serde_json::json;

use crate::cli::*;
use crate::report::{Outcome, Verdict};

pub type CmdResult = Result<Outcome, Error>;

fn circle(points: &[Rational], wrap: WrapPolicy) -> Result<CircularSet, Error> {
    CircularSet::new(points.iter().map(|x| TorusPoint::new(x.clone())), wrap)
}

fn cloud(rows: &[Vec<Rational>]) -> Result<PointCloud, Error> {
    let pts = rows.iter().map(|r| TorusVector::from_rationals(r.iter().cloned())).collect::<Result<Vec<_>, _>>()?;
    PointCloud::new(pts)
}

fn values(set: &CircularSet) -> Vec<&Rational> {
    set.points().iter().map(TorusPoint::value).collect()
}

/// `⌈√m⌉` for small `m`.
fn ceil_sqrt(m: u64) -> u64 {
    let mut r = (m as f64).sqrt() as u64;
    while r * r > m {
        r -= 1;
    }
    while r * r < m {
        r += 1;
    }
    r
}

pub fn orbit(a: &OrbitArgs) -> CmdResult {
    let s = fractional_orbit(&a.alpha, a.n)?;
    let mut o = Outcome::default();
    o.metric("points", s.len());
    let labels = s.labels().unwrap_or(&[]);
    let rows: Vec<_> = s.points().iter().zip(labels).map(|(p, l)| json!({"n": l, "point": p})).collect();
    o.result(rows);
    Ok(o)
}

fn parse_arm(s: &str) -> Result<(TorusPoint, u64), Error> {
    let bad = || Error::Parse(format!("arm {s:?} is not of the form beta:len"));
    let (beta, len) = s.split_once(':').ok_or_else(bad)?;
    let beta: Rational = beta.parse()?;
    let len: u64 = len.trim().parse().map_err(|_| bad())?;
    if len == 0 {
        return Err(Error::OutOfRange(format!("arm {s:?} has length 0")));
    }
    Ok((TorusPoint::new(beta), len))
}

pub fn gaps(a: &GapsArgs) -> CmdResult {
    let wrap = if a.no_wrap { WrapPolicy::ExcludeWrap } else { WrapPolicy::IncludeWrap };
    let mut o = Outcome::default();
    match (&a.alpha, a.n, &a.points) {
        (_, _, Some(points)) => {
            let set = circle(&points.0, wrap)?;
            let sp = spectrum(&set)?;
            o.metric("points", set.len());
            o.metric("distinct_gaps", sp.distinct_count());
            o.result(sp);
        }
        (Some(alpha), Some(n), None) => {
            let rep = three_gap_check(alpha, n)?;
            let sp = spectrum(&fractional_orbit(alpha, n)?.with_wrap(wrap))?;
            o.verdict(Verdict::new("three_gaps", rep.distinct.len() <= 3, rep.distinct.len(), "<=", 3).or_counterexample(|| {
                json!({"alpha": alpha, "n": n, "gaps": rep.distinct})
            }));
            o.verdict(Verdict::new("gaps_match_reference", rep.unmatched.is_empty(), rep.unmatched.len(), "==", 0).or_counterexample(
                || json!({"alpha": alpha, "n": n, "unmatched": rep.unmatched, "reference": rep.reference}),
            ));
            o.metric("distinct_gaps", rep.distinct.len());
            o.result(json!({"three_gap": rep, "spectrum": sp}));
        }
        (Some(alpha), None, None) if !a.arm.is_empty() => {
            let arms = a.arm.iter().map(|s| parse_arm(s)).collect::<Result<Vec<_>, _>>()?;
            let spec = APUnionSpec { alpha: alpha.clone(), arms };
            let rep = threek_gap_check(&spec)?;
            o.verdict(
                Verdict::new("at_most_3k_gaps", rep.pass, rep.distinct.len(), "<=", rep.bound)
                    .or_counterexample(|| json!({"spec": spec, "points": spec.points().ok(), "gaps": rep.distinct})),
            );
            o.metric("distinct_gaps", rep.distinct.len());
            o.result(rep);
        }
        _ => return Err(Error::DegenerateInput("give --alpha with --n or --arm, or --points".into())),
    }
    Ok(o)
}

pub fn greedy(a: &OrbitArgs) -> CmdResult {
    let b = fractional_orbit(&a.alpha, a.n)?;
    let g = greedy_max_distinct(&b)?;
    let got = spectrum(&g.set)?.distinct_count() as u64;
    let lower = ceil_sqrt(2 * a.n).saturating_sub(1);
    let t1 = theorem1_check(&g.set, &b)?;
    let mut o = Outcome::default();
    let witness = || json!({"alpha": a.alpha, "n": a.n, "a": values(&g.set)});
    o.verdict(Verdict::new("greedy_lower_bound", got >= lower, got, ">=", format!("ceil(sqrt(2N))-1 = {lower}")).or_counterexample(witness));
    let d = got.saturating_sub(1);
    o.verdict(Verdict::new("upper_bound_sq", d * d <= 8 * a.n, d * d, "<=", 8 * a.n).or_counterexample(witness));
    o.verdict(Verdict::new("distinct_gap_bound", t1.pass, &t1.lhs, "<=", &t1.rhs).or_counterexample(witness));
    o.metric("subset_size", g.set.len());
    o.metric("distinct_gaps", got);
    o.metric("positions_within_bound", g.positions_within_bound());
    o.result(json!({"subset": values(&g.set), "positions": g.positions, "bound": t1}));
    Ok(o)
}

fn domain(d: DomainArg) -> Domain {
    match d {
        DomainArg::Integers => Domain::Integers,
        DomainArg::Rationals => Domain::Rationals,
        DomainArg::Torus => Domain::Torus,
    }
}

pub fn sumset_cmd(a: &SumsetArgs, seed: u64) -> CmdResult {
    let mut o = Outcome::default();
    if let Some(n) = a.random {
        let mut r = rng(seed);
        let xs: Vec<i128> = random_i64s(&mut r, n).into_iter().map(i128::from).collect();
        let ys: Vec<i128> = random_i64s(&mut r, n).into_iter().map(i128::from).collect();
        let count = int_sumset_count(&xs, &ys);
        o.metric("a_len", n);
        o.metric("b_len", n);
        o.metric("sumset_len", count);
        o.result(json!({"sumset_len": count}));
        return Ok(o);
    }
    let dom = domain(a.domain);
    let first = a.a.as_ref().expect("clap enforces --a");
    let x = FiniteExactSet::new(dom, first.0.iter().cloned())?;
    let y = match &a.b {
        Some(b) => FiniteExactSet::new(dom, b.0.iter().cloned())?,
        None => x.clone(),
    };
    let out = if a.difference { difference_set(&x, &y)? } else { sumset(&x, &y)? };
    o.metric("a_len", x.len());
    o.metric("b_len", y.len());
    o.metric(if a.difference { "difference_len" } else { "sumset_len" }, out.len());
    if a.b.is_none() && !a.difference {
        o.metric("doubling", doubling_ratio(&x)?);
    }
    if dom != Domain::Torus && !x.is_empty() && !y.is_empty() {
        let floor = x.len() + y.len() - 1;
        o.verdict(Verdict::new("size_lower_bound", out.len() >= floor, out.len(), ">=", floor));
    }
    if a.elements {
        o.result(out);
    }
    Ok(o)
}

pub fn cover(a: &CoverArgs) -> CmdResult {
    let b = FiniteExactSet::new(Domain::Torus, a.b.0.iter().cloned())?;
    let c = minimal_difference_cover(&b)?;
    let ok = c.verify(&b)?;
    let mut o = Outcome::default();
    o.verdict(Verdict::holds("certificate_covers_differences", ok).or_counterexample(|| json!({"b": b, "c": c.cover})));
    o.metric("b_len", b.len());
    o.metric("c_len", c.cover.len());
    o.metric("exact", c.exact);
    o.metric("doubling", doubling_ratio(&b)?);
    o.result(c);
    Ok(o)
}

pub fn generators(a: &GeneratorsArgs) -> CmdResult {
    let b = circle(&a.b.0, WrapPolicy::IncludeWrap)?;
    let c_points = match &a.c {
        Some(c) => c.0.clone(),
        None => minimal_difference_cover(&b.to_exact_set())?.cover.elements().to_vec(),
    };
    let c = circle(&c_points, WrapPolicy::IncludeWrap)?;
    let mut o = Outcome::default();
    o.metric("b_len", b.len());
    o.metric("c_len", c.len());
    if let Some(target) = &a.target {
        let side = match a.side {
            SideArg::Minus => Side::Minus,
            SideArg::Plus => Side::Plus,
        };
        let report = neighbour_gaps(&b, &c)?;
        let cert = decompose(target, &b, &c, side)?;
        let ok = cert.verify(&report);
        o.verdict(Verdict::holds("certificate_checks", ok).or_counterexample(|| json!({"b": values(&b), "c": values(&c), "certificate": cert})));
        o.metric("parts", cert.parts.len());
        o.metric("depth", cert.depth);
        o.result(json!({"generators": report, "certificate": cert}));
    } else {
        let rep = verify_generation(&b, &c)?;
        let witness = || json!({"b": values(&b), "c": values(&c), "failures": rep.failures});
        o.verdict(Verdict::new("every_difference_decomposed", rep.failures.is_empty(), rep.failures.len(), "==", 0).or_counterexample(witness));
        o.verdict(Verdict::holds("oracle_agrees", rep.oracle_minus == rep.differences && rep.oracle_plus == rep.differences));
        o.verdict(Verdict::holds("generators_generate_each_other", rep.cross_generation));
        o.verdict(Verdict::new("depth_bound", rep.depth_within_bound, rep.max_depth, "<=", rep.b_len));
        o.metric("differences", rep.differences);
        o.metric("r_minus_len", rep.r_minus.len());
        o.metric("r_plus_len", rep.r_plus.len());
        o.metric("max_depth", rep.max_depth);
        o.result(rep);
    }
    Ok(o)
}

fn ap_free(n: i64, method: ApMethodArg) -> Result<APFreeSet, Error> {
    match method {
        ApMethodArg::Behrend => Ok(behrend_set(n)),
        ApMethodArg::Exact => exact_ap_free(n),
        ApMethodArg::Greedy => Ok(greedy_ap_free(n)),
    }
}

pub fn behrend(a: &BehrendArgs) -> CmdResult {
    if a.n < 1 {
        return Err(Error::OutOfRange(format!("N = {} must be positive", a.n)));
    }
    let s = ap_free(a.n, a.method)?;
    let witness = ap_witness(&s.elements);
    let mut o = Outcome::default();
    o.verdict(Verdict::holds("progression_free", witness.is_none()).or_counterexample(|| json!({"progression": witness})));
    o.metric("size", s.len());
    o.metric("density", s.len() as f64 / a.n as f64);
    let params = if a.method == ApMethodArg::Behrend { behrend_scan(a.n) } else { None };
    let elements = if a.elements { Some(&s.elements) } else { None };
    o.result(json!({"method": s.method, "params": params, "elements": elements}));
    Ok(o)
}

pub fn prop1(a: &Prop1Args) -> CmdResult {
    if a.n < 1 {
        return Err(Error::OutOfRange(format!("N = {} must be positive", a.n)));
    }
    let s = match &a.s {
        Some(s) => APFreeSet::supplied(a.n, s.0.iter().copied())?,
        None => {
            let mut s = if a.n <= EXACT_AP_LIMIT { exact_ap_free(a.n)? } else { behrend_set(a.n) };
            s.elements.truncate(a.n as usize / 2);
            s
        }
    };
    let inst = prop1_build(a.n, &s)?;
    let rep = prop1_forced_subset_check(&inst)?;
    let witness = || json!({"n": a.n, "s": s.elements, "b": inst.b});
    let mut o = Outcome::default();
    o.verdict(Verdict::new("b_size", inst.b.len() as i64 == a.n, inst.b.len(), "==", a.n).or_counterexample(witness));
    o.verdict(Verdict::new("small_sumset", inst.sumset_len as i64 <= 10 * a.n, inst.sumset_len, "<=", 10 * a.n).or_counterexample(witness));
    o.verdict(Verdict::holds("unique_representations", rep.all_unique).or_counterexample(witness));
    o.verdict(Verdict::holds("forced_subset", rep.pass).or_counterexample(witness));
    o.metric("s_len", s.len());
    o.metric("x", inst.x);
    o.metric("sumset_len", inst.sumset_len);
    o.metric("min_cover_len", rep.min_cover_len);
    o.result(json!({"instance": inst, "forced": rep}));
    Ok(o)
}

pub fn lattice(a: &LatticeArgs) -> CmdResult {
    let ns = a
        .ns
        .0
        .iter()
        .map(|&n| u64::try_from(n).ok().filter(|&n| n > 0).ok_or_else(|| Error::OutOfRange(format!("side length {n} must be positive"))))
        .collect::<Result<Vec<_>, _>>()?;
    let p = lattice_projection(&a.alphas.0, &ns)?;
    let mut o = Outcome::default();
    let witness = || json!({"alphas": p.alphas, "ns": p.ns, "b": values(&p.b), "c": values(&p.c)});
    o.verdict(Verdict::holds("corners_cover_differences", p.covers).or_counterexample(witness));
    o.verdict(Verdict::new("corner_count", p.corners_within_bound, p.c.len(), "<=", p.corner_bound));
    o.metric("b_len", p.b.len());
    o.metric("sumset_len", p.sumset_len);
    o.metric("doubling", &p.doubling);
    o.metric("doubling_within_2k", p.doubling_within_2k);
    o.result(p);
    Ok(o)
}

pub fn nn_census_cmd(a: &CloudArgs, seed: u64) -> CmdResult {
    let c = match (&a.points, a.random) {
        (Some(p), _) => cloud(&p.0)?,
        (None, Some(n)) => {
            if a.dim == 0 || a.q < 2 {
                return Err(Error::OutOfRange(format!("need dim >= 1 and q >= 2, got dim {} q {}", a.dim, a.q)));
            }
            random_cloud(&mut rng(seed), n, a.dim, a.q)
        }
        (None, None) => return Err(Error::DegenerateInput("give --points or --random".into())),
    };
    let mut o = Outcome::default();
    let report = match a.method {
        NnMethodArg::Grid => nn_census_with(&c, NnMethod::Grid)?,
        NnMethodArg::Brute => nn_census_with(&c, NnMethod::Brute)?,
        NnMethodArg::Both => {
            let g = nn_census_with(&c, NnMethod::Grid)?;
            let b = nn_census_with(&c, NnMethod::Brute)?;
            let first = g.records.iter().zip(&b.records).position(|(x, y)| x != y);
            o.verdict(Verdict::holds("grid_matches_brute", first.is_none()).or_counterexample(|| {
                let i = first.unwrap_or(0);
                json!({"point": c.points()[i], "grid": g.records[i], "brute": b.records[i]})
            }));
            g
        }
    };
    o.metric("points", c.len());
    o.metric("dim", c.dim());
    o.metric("census", report.size());
    let records = if a.records { Some(&report.records) } else { None };
    o.result(json!({"census": report.census, "records": records}));
    Ok(o)
}

pub fn kronecker(a: &KroneckerArgs) -> CmdResult {
    let rep = kronecker_census(&a.alphas.0, a.n)?;
    let mut o = Outcome::default();
    let witness = || json!({"alphas": rep.alphas, "n": rep.n, "d": rep.d_set, "order_prefix": rep.order_prefix});
    o.verdict(Verdict::holds("census_in_best_approximations", rep.contained_with_ties).or_counterexample(witness));
    o.verdict(Verdict::new("census_size", rep.d_set.len() <= 2 * rep.ell_with_ties, rep.d_set.len(), "<=", 2 * rep.ell_with_ties));
    o.metric("census", rep.d_set.len());
    o.metric("ell", rep.ell);
    o.metric("strict_containment", rep.contained);
    o.metric("ratio_to_4_3_pow_d", rep.ratio);
    o.result(rep);
    Ok(o)
}

pub fn kissing(a: &KissingArgs) -> CmdResult {
    let mut o = Outcome::default();
    let planar_max = |d: usize| match d {
        1 => Some(2),
        2 => Some(6),
        _ => None,
    };
    if let Some(q) = a.grid {
        let g = max_configuration_on_grid(a.dim, q)?;
        if let Some(m) = planar_max(a.dim) {
            o.verdict(Verdict::new("grid_maximum", g.max_k <= m, g.max_k, "<=", m).or_counterexample(|| json!({"witness": g.witness})));
        }
        o.metric("max_k", g.max_k);
        o.metric("vertices", g.vertices);
        o.result(g);
    } else {
        let rep = match (&a.points, &a.hexagon) {
            (Some(p), _) => {
                let c = cloud(&p.0)?;
                kissing_check(c.points())?
            }
            (None, Some(r)) => kissing_check_generic(&hexagon(r))?,
            (None, None) => return Err(Error::DegenerateInput("give --points, --hexagon or --grid".into())),
        };
        let witness = || json!({"pairwise": rep.pairwise_violation, "angular": rep.angular_violation});
        o.verdict(Verdict::holds("valid_configuration", rep.pass).or_counterexample(witness));
        o.metric("k", rep.k);
        o.result(rep);
    }
    Ok(o)
}

pub fn extract(a: &ExtractArgs) -> CmdResult {
    let (cloud_a, eps) = match (&a.points, a.m) {
        (Some(p), _) => (cloud(&p.0)?, a.epsilon.clone()),
        (None, Some(m)) => {
            if m == 0 {
                return Err(Error::OutOfRange("m must be positive".into()));
            }
            (section5_cloud(m)?, Some(a.epsilon.clone().unwrap_or_else(|| Rational::new(1, 2 * m as i64))))
        }
        (None, None) => return Err(Error::DegenerateInput("give --points or --m".into())),
    };
    let eps = eps.ok_or_else(|| Error::DegenerateInput("--epsilon is required with --points".into()))?;
    let b = match &a.b {
        Some(b) => cloud(&b.0)?,
        None => cloud_a.clone(),
    };
    let t = theorem4_extract(&cloud_a, &b, &eps, &a.kappa)?;
    let mut o = Outcome::default();
    let witness = || json!({"a": cloud_a.points(), "b": b.points(), "epsilon": eps});
    o.verdict(
        Verdict::new("kept_fraction", t.size_ok, t.a_prime.len(), ">=", format!("(1 - {}) * {}", t.epsilon, t.a_len)).or_counterexample(witness),
    );
    o.verdict(Verdict::new("census_bound", t.census_ok, t.census_a_prime, "<=", format!("{} * {}", t.n, t.l)).or_counterexample(witness));
    o.verdict(Verdict::holds("rounds_consistent", t.theta_monotone && t.per_round_ok).or_counterexample(witness));
    o.metric("a_len", t.a_len);
    o.metric("a_prime_len", t.a_prime.len());
    o.metric("census_a", t.census_a);
    o.metric("census_a_prime", t.census_a_prime);
    o.metric("upsilon_bound_holds", t.upsilon_bound_holds);
    o.metric("kappa_hat", &t.kappa_hat);
    o.result(t);
    Ok(o)
}

pub fn example5(a: &Example5Args) -> CmdResult {
    if a.m == 0 {
        return Err(Error::OutOfRange("m must be positive".into()));
    }
    let ex = section5_example(a.m)?;
    let m = a.m as usize;
    let mut o = Outcome::default();
    o.verdict(Verdict::new("census_at_least_m", ex.census >= m, ex.census, ">=", m));
    o.verdict(Verdict::new("small_sumset", ex.sumset_len < 4 * m * m, ex.sumset_len, "<", 4 * m * m));
    o.metric("a_len", ex.a_len);
    o.metric("sumset_len", ex.sumset_len);
    o.metric("census", ex.census);
    o.metric("census_over_m_log_2m", ex.census as f64 / (m as f64 * (2.0 * m as f64).ln()));
    o.result(ex);
    Ok(o)
}
