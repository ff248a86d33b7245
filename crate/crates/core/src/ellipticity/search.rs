//! Certificate search over discrete branch data.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_parameters, verify_certificate, Decision, EllipticityCertificate, EllipticityError,
    IrreducibleCurveData, Refutation, RefutationTag, Verdict, SEARCH_SCOPE,
};
use crate::ids::{fresh, EdgeId, PointLabel};
use crate::smooth_cover::{
    partitions_into, BranchDatum, Fiber, HurwitzOracle, OracleError, Preimage,
};

/// One shape of candidate: the shared-fiber block and the group sizes, with
/// the ramification profile of each group.
#[derive(Clone, Debug)]
struct Candidate {
    delta0: usize,
    /// Per group, the indices of its nodes (a partition of `d`).
    profiles: Vec<Vec<u32>>,
}

/// Partitions of `n` into exactly `k` parts, or the empty partition for `n = k = 0`.
fn sizes(n: usize, k: usize) -> Vec<Vec<u32>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    partitions_into(n as u32, k)
}

fn product(lists: &[Vec<Vec<u32>>]) -> Vec<Vec<Vec<u32>>> {
    lists.iter().fold(vec![vec![]], |acc, options| {
        acc.into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |o| {
                    let mut next = prefix.clone();
                    next.push(o.clone());
                    next
                })
            })
            .collect()
    })
}

/// Candidates for one `h′`, in increasing `δ_0`, then group sizes in
/// descending lexicographic order, then index profiles likewise.
fn candidates(delta: usize, s: usize, d: u32) -> Vec<Candidate> {
    let mut out = Vec::new();
    for delta0 in 0..=delta {
        for group_sizes in sizes(delta - delta0, s) {
            if group_sizes.iter().any(|&m| m > d) {
                continue;
            }
            let options: Vec<Vec<Vec<u32>>> = group_sizes
                .iter()
                .map(|&m| partitions_into(d, m as usize))
                .collect();
            for profiles in product(&options) {
                out.push(Candidate { delta0, profiles });
            }
        }
    }
    out
}

type CandidateDatum = (BranchDatum, Vec<Vec<EdgeId>>, Vec<(PointLabel, PointLabel)>);

/// Builds the datum of a candidate: shared-fiber nodes in unramified fibers
/// of their own, group branches filling their two fibers, and the simple
/// branch points Riemann–Hurwitz asks for. `None` if no number of simple
/// points balances it.
fn datum_for(
    curve: &IrreducibleCurveData,
    d: u32,
    h_prime: u32,
    cand: &Candidate,
) -> Option<CandidateDatum> {
    let g = i64::from(curve.normalization_genus());
    let group_ram: i64 = cand
        .profiles
        .iter()
        .map(|p| 2 * (i64::from(d) - p.len() as i64))
        .sum();
    let extra = 2 * g - 2 - i64::from(d) * (2 * i64::from(h_prime) - 2) - group_ram;
    if extra < 0 {
        return None;
    }

    let mut taken: BTreeSet<String> = curve
        .branch_labels()
        .iter()
        .map(|l| l.as_str().to_owned())
        .collect();
    let mut name = |base: String| {
        let n = fresh(&base, |x| taken.contains(x));
        taken.insert(n.clone());
        PointLabel::new(n)
    };
    let nodes = curve.nodes();
    let mut fibers = Vec::new();
    for n in &nodes[..cand.delta0] {
        let mut pre: Vec<Preimage> = n
            .branches
            .iter()
            .map(|l| Preimage::labeled(l.clone(), 1))
            .collect();
        pre.extend((2..d).map(|_| Preimage::unlabeled(1)));
        fibers.push(Fiber::new(name(format!("x.{}", n.id)), pre));
    }
    let mut groups = Vec::new();
    let mut pairs = Vec::new();
    let mut next = cand.delta0;
    for (k, profile) in cand.profiles.iter().enumerate() {
        let members = &nodes[next..next + profile.len()];
        next += profile.len();
        let q1 = name(format!("q{}.1", k + 1));
        let q2 = name(format!("q{}.2", k + 1));
        for (side, q) in [&q1, &q2].into_iter().enumerate() {
            let pre = members
                .iter()
                .zip(profile)
                .map(|(n, &e)| Preimage::labeled(n.branches[side].clone(), e))
                .collect();
            fibers.push(Fiber::new(q.clone(), pre));
        }
        groups.push(members.iter().map(|n| n.id.clone()).collect());
        pairs.push((q1, q2));
    }
    for i in 0..extra {
        let mut pre = vec![Preimage::unlabeled(2)];
        pre.extend((2..d).map(|_| Preimage::unlabeled(1)));
        fibers.push(Fiber::new(name(format!("b{i}")), pre));
    }
    let datum = BranchDatum::new(d, curve.normalization_genus(), h_prime, fibers);
    Some((datum, groups, pairs))
}

/// Result of searching one `h′`.
enum Branch {
    Found(EllipticityCertificate, Vec<Refutation>),
    Refuted(Vec<Refutation>),
    OutOfBounds(Vec<Refutation>, OracleError),
}

fn search_h_prime(
    curve: &IrreducibleCurveData,
    d: u32,
    h: u32,
    h_prime: u32,
    oracle: &HurwitzOracle,
    filter: &dyn Fn(&Candidate) -> bool,
) -> Result<Branch, EllipticityError> {
    let s = (h - h_prime) as usize;
    let at = Some(h_prime);
    let delta = curve.delta();
    if s > delta {
        return Ok(Branch::Refuted(vec![Refutation::new(
            at,
            RefutationTag::S,
            format!("s = {s} nonempty groups need at least {s} nodes, the curve has {delta}"),
        )]));
    }
    let all = candidates(delta, s, d);
    let cands: Vec<&Candidate> = all.iter().filter(|c| filter(c)).collect();
    if cands.is_empty() {
        return Ok(Branch::Refuted(vec![Refutation::new(
            at,
            RefutationTag::B,
            format!("no way to split {delta} nodes into a shared-fiber block and {s} groups of at most {d} nodes"),
        )]));
    }
    let mut rh_failures = 0usize;
    let mut monodromy: Vec<String> = Vec::new();
    let mut out_of_bounds: Option<OracleError> = None;
    for cand in cands {
        let Some((datum, groups, point_pairs)) = datum_for(curve, d, h_prime, cand) else {
            rh_failures += 1;
            continue;
        };
        match oracle.is_realizable(&datum) {
            Ok(Some(witness)) => {
                let cert = EllipticityCertificate {
                    cover: datum,
                    delta0: cand.delta0,
                    groups,
                    point_pairs,
                    witness,
                };
                let report = verify_certificate(curve, d, h, &cert)?;
                assert!(
                    report.valid,
                    "search produced an invalid certificate: {:?}",
                    report.refutations
                );
                return Ok(Branch::Found(cert, summarize(at, rh_failures, &monodromy)));
            }
            Ok(None) => monodromy.push(describe(&datum)),
            Err(e @ OracleError::SearchBoundExceeded(_)) => {
                out_of_bounds.get_or_insert(e);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let refutations = summarize(at, rh_failures, &monodromy);
    Ok(match out_of_bounds {
        Some(e) => {
            let mut r = refutations;
            r.push(Refutation::new(at, RefutationTag::Bounds, e.to_string()));
            Branch::OutOfBounds(r, e)
        }
        None => Branch::Refuted(refutations),
    })
}

fn describe(b: &BranchDatum) -> String {
    let types: Vec<String> = b
        .branch_fibers()
        .map(|f| {
            let t: Vec<String> = f.cycle_type().iter().map(u32::to_string).collect();
            format!("({})", t.join(","))
        })
        .collect();
    format!(
        "degree {} onto genus {}: {} not realizable",
        b.degree,
        b.target_genus,
        types.join(" ")
    )
}

fn summarize(at: Option<u32>, rh_failures: usize, monodromy: &[String]) -> Vec<Refutation> {
    let mut out = Vec::new();
    if rh_failures > 0 {
        out.push(Refutation::new(
            at,
            RefutationTag::Rh,
            format!("{rh_failures} candidate(s) need negative extra ramification"),
        ));
    }
    out.extend(
        monodromy
            .iter()
            .map(|m| Refutation::new(at, RefutationTag::Monodromy, m.clone())),
    );
    out
}

fn run(
    curve: &IrreducibleCurveData,
    d: u32,
    h: u32,
    h_primes: Vec<u32>,
    oracle: &HurwitzOracle,
    filter: &(dyn Fn(&Candidate) -> bool + Sync),
) -> Result<Verdict, EllipticityError> {
    check_parameters(d, h)?;
    let branches: Vec<Result<Branch, EllipticityError>> = h_primes
        .par_iter()
        .map(|&hp| search_h_prime(curve, d, h, hp, oracle, filter))
        .collect();
    let mut refutations = Vec::new();
    let mut bound_error = None;
    // Branches are in enumeration order; the first hit wins.
    for b in branches {
        match b? {
            Branch::Found(cert, r) => {
                refutations.extend(r);
                return Ok(Verdict {
                    decision: Decision::CertifiedYes,
                    certificate: Some(cert),
                    refutations,
                    scope: SEARCH_SCOPE.into(),
                });
            }
            Branch::Refuted(r) => refutations.extend(r),
            Branch::OutOfBounds(r, e) => {
                refutations.extend(r);
                bound_error.get_or_insert(e);
            }
        }
    }
    if let Some(e) = bound_error {
        return Err(e.into());
    }
    Ok(Verdict {
        decision: Decision::NoCertificateFound,
        certificate: None,
        refutations,
        scope: SEARCH_SCOPE.into(),
    })
}

/// Searches for a certificate of (d,h)-ellipticity, trying `h′ = 0, …, h`.
///
/// This decides whether SOME irreducible curve with the given normalization
/// genus and number of nodes is (d,h)-elliptic: branch points and node
/// branches are placed freely. Shared-fiber nodes go to unramified fibers of
/// their own and the remaining ramification is made of simple branch points.
pub fn decide(
    curve: &IrreducibleCurveData,
    d: u32,
    h: u32,
    oracle: &HurwitzOracle,
) -> Result<Verdict, EllipticityError> {
    run(curve, d, h, (0..=h).collect(), oracle, &|_| true)
}

/// The two ways a one-node curve can be (d,h)-elliptic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OneNodeRoute {
    /// `h′ = h`, both branches in one fiber.
    SharedFiber,
    /// `h′ = h − 1`, branches over distinct points, totally ramified.
    TotallyRamified,
}

/// [`decide_one_node_via`] trying the shared-fiber route first.
pub fn decide_one_node(
    curve: &IrreducibleCurveData,
    d: u32,
    h: u32,
    oracle: &HurwitzOracle,
) -> Result<Verdict, EllipticityError> {
    let a = decide_one_node_via(curve, d, h, OneNodeRoute::SharedFiber, oracle)?;
    if a.decision == Decision::CertifiedYes {
        return Ok(a);
    }
    let mut b = decide_one_node_via(curve, d, h, OneNodeRoute::TotallyRamified, oracle)?;
    let mut refutations = a.refutations;
    refutations.append(&mut b.refutations);
    b.refutations = refutations;
    Ok(b)
}

/// Tests a single route for a curve with exactly one node.
pub fn decide_one_node_via(
    curve: &IrreducibleCurveData,
    d: u32,
    h: u32,
    route: OneNodeRoute,
    oracle: &HurwitzOracle,
) -> Result<Verdict, EllipticityError> {
    if curve.delta() != 1 {
        return Err(EllipticityError::InvalidCurve(format!(
            "expected one node, found {}",
            curve.delta()
        )));
    }
    check_parameters(d, h)?;
    match route {
        OneNodeRoute::SharedFiber => run(curve, d, h, vec![h], oracle, &|c| c.delta0 == 1),
        OneNodeRoute::TotallyRamified => run(curve, d, h, vec![h - 1], oracle, &|c| {
            c.delta0 == 0 && c.profiles == [vec![d]]
        }),
    }
}
