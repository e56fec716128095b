mod common;

use std::process::ExitCode;
use std::time::Instant;

use kacdepth::algebra::{LaurentPoly, Rat, RatFunc, TSeries};
use kacdepth::catalog::catalog;
use kacdepth::complex::{build_order_complex, is_shelling, lex_shelling, positivity_certificate, verify_thm41};
use kacdepth::finite_ring::{OElem, TruncRing, DEFAULT_GUARD};
use kacdepth::moment::{normalized_zero_fiber, stack_e_series, verify_exp_identity, verify_generic_fiber, FiberMode};
use kacdepth::plethysm::{adams, pleth_exp, pleth_log};
use kacdepth::quiver::Quiver;
use kacdepth::rank::{closed_rank2, closed_rank3, one_vertex_kac, verify_tables};
use kacdepth::toric::{asymptotic_A, asymptotic_B, brute_toric_A, cd_census, cd_kac, census_polynomial, wyss_kac};
use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

fn formula_agreement() -> Outcome {
    let family = catalog(4, 6);
    let mut checked = 0;
    for q in &family {
        for alpha in 1..=4 {
            let w = wyss_kac(q, alpha).map_err(e)?;
            let c = cd_kac(q, alpha).map_err(e)?;
            ensure(w == c, || format!("{} alpha={alpha}: wyss {w} vs cd {c}", q.to_json_string()))?;
            checked += 1;
        }
    }
    Ok(format!("{} quivers, {checked} polynomials", family.len()))
}

fn oracle_equivalence() -> Outcome {
    let family: Vec<Quiver> = catalog(3, 3);
    let mut checked = 0;
    for q in &family {
        for p in [2u32, 3] {
            for alpha in 1..=2 {
                let w = wyss_kac(q, alpha).map_err(e)?.eval_int(p as i64).map_err(e)?;
                let b = brute_toric_A(q, p, alpha, DEFAULT_GUARD).map_err(e)?;
                ensure(w == Rat::from_integer(b.into()), || {
                    format!("{} p={p} alpha={alpha}: formula {w} vs brute {b}", q.to_json_string())
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{} quivers, {checked} counts", family.len()))
}

fn commuting_pairs_f2() -> u64 {
    let mul = |a: [u8; 4], b: [u8; 4]| {
        [
            (a[0] * b[0] + a[1] * b[2]) % 2,
            (a[0] * b[1] + a[1] * b[3]) % 2,
            (a[2] * b[0] + a[3] * b[2]) % 2,
            (a[2] * b[1] + a[3] * b[3]) % 2,
        ]
    };
    let all: Vec<[u8; 4]> = (0..16u8).map(|m| [m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1]).collect();
    let mut n = 0;
    for &x in &all {
        for &y in &all {
            if mul(x, y) == mul(y, x) {
                n += 1;
            }
        }
    }
    n
}

fn exp_identity() -> Outcome {
    let family = catalog(2, 3);
    let mut checked = 0;
    for q in &family {
        let bound = vec![1; q.nvertices()];
        for p in [2u32, 3] {
            for alpha in 1..=2 {
                let r = verify_exp_identity(q, p, alpha, &bound, DEFAULT_GUARD).map_err(e)?;
                ensure(r.holds, || format!("{} p={p} alpha={alpha}: {:?}", q.to_json_string(), r.entries))?;
                checked += 1;
            }
        }
    }
    let r = verify_exp_identity(&Quiver::loops(1), 2, 1, &[2], DEFAULT_GUARD).map_err(e)?;
    let entry = r.entries.iter().find(|x| x.rank == [2]).ok_or("missing rank-2 entry")?;
    let oracle = commuting_pairs_f2();
    ensure(r.holds && entry.equal, || format!("jordan rank 2: {:?}", r.entries))?;
    ensure(entry.fiber_count == oracle, || format!("fiber {} vs commuting pairs {oracle}", entry.fiber_count))?;
    Ok(format!("{} quivers, {checked} identities; commuting pairs over F_2 = {oracle}", family.len()))
}

fn generic_fiber() -> Outcome {
    let a2 = Quiver::new(2, vec![(0, 1)]).unwrap();
    let cases = [(&a2, 3u32, 1u32), (&a2, 3, 2), (&Quiver::kronecker(2), 5, 1)];
    for (q, p, alpha) in cases {
        let r = verify_generic_fiber(q, &[1, 1], &[1, -1], p, alpha, DEFAULT_GUARD).map_err(e)?;
        ensure(r.equal, || format!("{} p={p} alpha={alpha}: {} vs {}", q.to_json_string(), r.lhs, r.rhs))?;
    }
    Ok(format!("{} cases", cases.len()))
}

fn positivity_a() -> Outcome {
    let family: Vec<Quiver> = catalog(4, 5).into_iter().filter(|q| q.is_two_connected()).collect();
    for q in &family {
        let r = verify_thm41(q).map_err(e)?;
        ensure(r.holds, || format!("{}: {} vs {}", q.to_json_string(), r.asymptotic, r.hilbert_side))?;
        let c = positivity_certificate(q).map_err(e)?;
        ensure(c.matches_hilbert && c.single_denominator_matches, || format!("{}: certificate {}", q.to_json_string(), c.total))?;
    }
    let all = catalog(4, 5);
    for q in &all {
        let delta = build_order_complex(q).map_err(e)?;
        let s = lex_shelling(&delta).map_err(|err| format!("{}: {err}", q.to_json_string()))?;
        ensure(is_shelling(&s.facets), || format!("{}: not a shelling", q.to_json_string()))?;
    }
    Ok(format!("{} two-connected quivers; {} complexes shelled", family.len(), all.len()))
}

fn rel_a_vs_b() -> Outcome {
    let family: Vec<Quiver> = catalog(4, 5).into_iter().filter(|q| q.is_two_connected()).collect();
    for q in &family {
        let n = q.nvertices() as u32;
        let factor = RatFunc::new(LaurentPoly::q_pow(1), LaurentPoly::q_pow_minus_one(1)).unwrap().pow(n - 1);
        let a = asymptotic_A(q).map_err(e)?;
        let b = asymptotic_B(q).map_err(e)?;
        ensure(&b * &factor == a, || format!("{}: A={a} B={b}", q.to_json_string()))?;
    }
    let k2 = Quiver::kronecker(2);
    let target = asymptotic_B(&k2).map_err(e)?.eval_int(2).map_err(e)?;
    let mut errors = Vec::new();
    for alpha in 1..=4 {
        let v = normalized_zero_fiber(&k2, 2, alpha, 1 << 26).map_err(e)?;
        errors.push((v - &target).abs());
    }
    ensure(errors.windows(2).all(|w| w[1] < w[0]), || format!("errors not decreasing: {errors:?}"))?;
    let shown: Vec<String> = errors.iter().map(|x| x.to_string()).collect();
    Ok(format!("{} quivers; B(2)={target}, errors {}", family.len(), shown.join(", ")))
}

fn rank_tables() -> Outcome {
    let t = verify_tables().map_err(e)?;
    for row in &t.rows {
        ensure(row.recursion_matches && row.closed_matches, || {
            format!("g={} alpha={}: expected {} got {} / {}", row.g, row.alpha, row.expected, row.recursion, row.closed)
        })?;
    }
    ensure(t.rows.len() == 15 && t.all_match, || "table mismatch".into())?;
    for g in 1..=3 {
        for alpha in 1..=5 {
            let r2 = RatFunc::from_poly(one_vertex_kac(g, 2, alpha).map_err(e)?);
            let r3 = RatFunc::from_poly(one_vertex_kac(g, 3, alpha).map_err(e)?);
            ensure(closed_rank2(g, alpha).map_err(e)? == r2, || format!("rank 2 closed form g={g} alpha={alpha}"))?;
            ensure(closed_rank3(g, alpha).map_err(e)? == r3, || format!("rank 3 closed form g={g} alpha={alpha}"))?;
        }
    }
    for g in 1..=4 {
        for alpha in 1..=6 {
            let a = one_vertex_kac(g, 2, alpha).map_err(e)?;
            ensure(a.has_nonnegative_coeffs(), || format!("negative coefficient in A_{{{g},2,{alpha}}} = {a}"))?;
        }
    }
    Ok("15 table rows, 30 closed forms, 24 rank-2 polynomials".into())
}

fn stratum_positivity() -> Outcome {
    let family = catalog(4, 6);
    let mut strata = 0usize;
    for q in &family {
        for alpha in 1..=4 {
            let census = cd_census(q, alpha).map_err(e)?;
            ensure(census.iter().all(|s| s.n_t >= 0), || format!("{} alpha={alpha}: negative n_T", q.to_json_string()))?;
            let poly = census_polynomial(&census);
            ensure(poly.has_nonnegative_coeffs(), || format!("{}: {poly}", q.to_json_string()))?;
            strata += census.len();
        }
    }
    Ok(format!("{strata} strata"))
}

const CASES: usize = 1000;

fn property_suites() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b61_6364);
    for i in 0..CASES {
        let bound: Vec<u32> = if i % 2 == 0 { vec![4] } else { vec![2, 2] };
        let f = common::random_series(&mut rng, &bound);
        let g = common::random_series(&mut rng, &bound);
        let m = rng.gen_range(1..=3);
        let lhs = adams(&f.mul(&g), m).map_err(e)?;
        let rhs = adams(&f, m).map_err(e)?.mul(&adams(&g, m).map_err(e)?);
        ensure(lhs == rhs, || format!("case {i}: Adams not multiplicative"))?;
        ensure(adams(&f.add(&g), m).map_err(e)? == adams(&f, m).map_err(e)?.add(&adams(&g, m).map_err(e)?), || {
            format!("case {i}: Adams not additive")
        })?;
        let ef = pleth_exp(&f).map_err(e)?;
        let eg = pleth_exp(&g).map_err(e)?;
        ensure(pleth_exp(&f.add(&g)).map_err(e)? == ef.mul(&eg), || format!("case {i}: Exp(f+g) != Exp f Exp g"))?;
        ensure(pleth_log(&ef).map_err(e)? == f, || format!("case {i}: Log Exp f != f"))?;
        let one_plus = TSeries::one(bound.clone()).add(&f);
        ensure(pleth_exp(&pleth_log(&one_plus).map_err(e)?).map_err(e)? == one_plus, || format!("case {i}: Exp Log != id"))?;
    }
    let rings: Vec<TruncRing> = [(2u32, 1u32), (2, 3), (3, 2), (5, 2), (7, 1), (2, 4)]
        .iter()
        .map(|&(p, a)| TruncRing::new(p, a).unwrap())
        .collect();
    for i in 0..CASES {
        let r = &rings[i % rings.len()];
        let n = r.size() as u64;
        let pick = |rng: &mut ChaCha8Rng| OElem::from_index(r.p(), r.alpha(), rng.gen_range(0..n));
        let (a, b, c) = (pick(&mut rng), pick(&mut rng), pick(&mut rng));
        let add = |x: &OElem, y: &OElem| x.add(y).unwrap();
        let mul = |x: &OElem, y: &OElem| x.mul(y).unwrap();
        let zero = OElem::zero(r.p(), r.alpha());
        let one = OElem::one(r.p(), r.alpha());
        let ok = add(&add(&a, &b), &c) == add(&a, &add(&b, &c))
            && mul(&mul(&a, &b), &c) == mul(&a, &mul(&b, &c))
            && add(&a, &b) == add(&b, &a)
            && mul(&a, &b) == mul(&b, &a)
            && mul(&a, &add(&b, &c)) == add(&mul(&a, &b), &mul(&a, &c))
            && add(&a, &zero) == a
            && mul(&a, &one) == a
            && add(&a, &a.neg()) == zero
            && (!a.is_unit() || mul(&a, &a.inv().unwrap()) == one);
        let (ia, ib) = (a.index() as u16, b.index() as u16);
        let tables = r.mul(ia, ib) as u64 == mul(&a, &b).index() && r.add(ia, ib) as u64 == add(&a, &b).index();
        ensure(ok && tables, || format!("case {i}: ring axioms fail for {a:?}, {b:?}, {c:?}"))?;
    }
    for i in 0..CASES {
        let q = common::random_quiver(&mut rng, 5, 8);
        let k = common::kirchhoff(&q);
        let count = q.spanning_trees().map(|t| t.len()).unwrap_or(0);
        ensure(k == Rat::from_integer(count.into()), || format!("case {i}: {} trees vs Kirchhoff {k}", count))?;
    }
    for i in 0..CASES {
        let q = common::random_connected_quiver(&mut rng, 4, 6);
        let alpha = rng.gen_range(1..=3);
        let perm = common::random_perm(&mut rng, q.narrows());
        let p = q.permute_arrows(&perm).map_err(e)?;
        ensure(cd_kac(&q, alpha).map_err(e)? == cd_kac(&p, alpha).map_err(e)?, || {
            format!("case {i}: {} changes under {perm:?}", q.to_json_string())
        })?;
    }
    Ok(format!("{CASES} cases each for lambda-ring laws, ring axioms, matrix-tree, arrow order"))
}

fn e_series() -> Outcome {
    let family = catalog(2, 3);
    let mut checked = 0;
    for q in &family {
        for alpha in 1..=2 {
            for mode in [FiberMode::Zero, FiberMode::Generic] {
                let r = stack_e_series(q, alpha, mode, 10).map_err(e)?;
                ensure(r.equal, || format!("{} alpha={alpha} {mode:?}: {:?} vs {:?}", q.to_json_string(), r.lhs, r.rhs))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} expansions agree to z^-10"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("1 formula cross-agreement", formula_agreement),
        ("2 oracle equivalence", oracle_equivalence),
        ("3 exponential identity", exp_identity),
        ("4 generic fiber count", generic_fiber),
        ("5 asymptotic positivity and shelling", positivity_a),
        ("6 relation between A and B", rel_a_vs_b),
        ("7 rank tables", rank_tables),
        ("8 stratum positivity", stratum_positivity),
        ("9 property suites", property_suites),
        ("9b stack E-series", e_series),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let t = Instant::now();
        let out = run();
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("PASS criterion {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
