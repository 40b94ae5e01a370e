//! Acceptance suite. Prints one PASS/FAIL line per criterion; run with
//! `cargo test -p nilspan --test acceptance -- --nocapture`.

use std::time::{Duration, Instant};

use nilspan::criterion::{check_criterion, enumerate_valid_q, Branch};
use nilspan::exactmat::poly_eval;
use nilspan::jordan::{
    is_semisimple, jordan_chevalley, jordan_matrix, jordan_partition, partitions_of, predicted_poly_partition,
};
use nilspan::oracle::{exhaustive_check, DEFAULT_BUDGET};
use nilspan::witness::{build_zab, falsify, witness_neighbor};
use nilspan::{ExactMatrix, FieldSpec, Poly, QSet, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LIMIT_CHAR2: Duration = Duration::from_secs(60);
const LIMIT_GF5: Duration = Duration::from_secs(120);
const LIMIT_POLY_CELLS: Duration = Duration::from_secs(30);
const LIMIT_COMPLETENESS: Duration = Duration::from_secs(300);

const POLYS_PER_MK: usize = 20;
const GEOMETRIC_CASES: usize = 500;
const COMMUTING_PAIRS: usize = 200;
const INDEX_PAIRS: usize = 100;
const CHEVALLEY_MATRICES: usize = 200;
const ADDITIVITY_PAIRS: usize = 50;

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Option<Duration>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T>(r: nilspan::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

// ---------------------------------------------------------------- oracles

/// Jordan type from the rank sequence of powers, largest cell first.
fn partition_by_ranks(x: &ExactMatrix) -> Vec<usize> {
    let n = x.n();
    let mut ranks = vec![n];
    let mut p = x.clone();
    while ranks.len() <= n + 1 {
        let r = p.rank();
        ranks.push(r);
        if r == 0 {
            break;
        }
        p = &p * x;
    }
    let at_least = |s: usize| ranks[s - 1] - ranks[s];
    let mut parts = Vec::new();
    for s in (1..ranks.len()).rev() {
        let next = if s + 1 < ranks.len() { at_least(s + 1) } else { 0 };
        parts.extend(std::iter::repeat_n(s, at_least(s) - next));
    }
    parts
}

fn power_is_zero(x: &ExactMatrix, m: usize) -> bool {
    x.power(m as u32).is_zero()
}

/// Index of nilpotency by direct powering.
fn index(x: &ExactMatrix) -> usize {
    (0..=x.n()).find(|&k| power_is_zero(x, k)).expect("nilpotent")
}

fn closed_form(m: usize, k: usize) -> Vec<usize> {
    let (q, r) = (m / k, m % k);
    let mut parts = vec![q + 1; r];
    parts.extend(std::iter::repeat_n(q, k - r));
    parts.retain(|&s| s > 0);
    parts
}

fn random_scalar(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    match spec.size() {
        Some(q) => spec.element(rng.gen_range(0..q)),
        None => Scalar::rational(rng.gen_range(-9..=9), rng.gen_range(1..=4)),
    }
}

fn random_nonzero(spec: &FieldSpec, rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let s = random_scalar(spec, rng);
        if !s.is_zero() {
            return s;
        }
    }
}

fn random_matrix(spec: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> ExactMatrix {
    ExactMatrix::from_fn(spec, n, |_, _| random_scalar(spec, rng))
}

fn random_invertible(spec: &FieldSpec, n: usize, rng: &mut ChaCha8Rng) -> (ExactMatrix, ExactMatrix) {
    loop {
        let p = random_matrix(spec, n, rng);
        if let Some(inv) = p.inverse() {
            return (p, inv);
        }
    }
}

fn random_central(x: &ExactMatrix, rng: &mut ChaCha8Rng) -> ExactMatrix {
    let spec = x.spec();
    x.centralizer_basis()
        .iter()
        .fold(ExactMatrix::zeros(spec, x.n()), |acc, b| {
            &acc + &b.scale(&random_scalar(spec, rng))
        })
}

/// Polynomial with zero constant term of degree below `deg`.
fn random_nil_poly(spec: &FieldSpec, deg: usize, rng: &mut ChaCha8Rng) -> Poly {
    let mut c = vec![spec.zero()];
    c.extend((1..deg).map(|_| random_scalar(spec, rng)));
    Poly::new(spec, c)
}

fn fields(names: &[&str]) -> Vec<FieldSpec> {
    names.iter().map(|s| s.parse().expect("field")).collect()
}

// ---------------------------------------------------------------- criteria

fn oracle_agreement(n: usize, char: u64, specs: &[FieldSpec], expected: &[QSet]) -> Check {
    let accepted = ok(enumerate_valid_q(n, char))?;
    ensure!(
        accepted == expected,
        "accepted sets {:?}",
        accepted.iter().map(QSet::braces).collect::<Vec<_>>()
    );
    let mut witnessed = 0;
    for q in QSet::all_subsets(n) {
        let verdict = ok(check_criterion(n, char, &q))?.accepted();
        for spec in specs {
            let r = ok(exhaustive_check(n, spec, &q, DEFAULT_BUDGET))?;
            ensure!(
                r.passed() == verdict,
                "{} over {spec}: oracle {} vs criterion {verdict}",
                q.braces(),
                r.passed()
            );
        }
        match (verdict, ok(falsify(n, char, &q))?) {
            (true, None) => {}
            (false, Some(w)) => {
                ok(w.verify(&q))?;
                witnessed += 1;
            }
            (v, w) => return Err(format!("{}: verdict {v}, witness {}", q.braces(), w.is_some())),
        }
    }
    Ok(format!("{} accepted, {witnessed} witnessed", accepted.len()))
}

fn c1_char2() -> Check {
    let expected: Vec<QSet> = ["-", "2", "2,3", "2,4", "2,3,4"]
        .iter()
        .map(|s| QSet::parse(4, s).unwrap())
        .collect();
    oracle_agreement(4, 2, &fields(&["GF(2)", "GF(4)"]), &expected)
}

fn c2_gf5() -> Check {
    let expected: Vec<QSet> = ["-", "2,3", "2,3,4"]
        .iter()
        .map(|s| QSet::parse(4, s).unwrap())
        .collect();
    let summary = oracle_agreement(4, 0, &fields(&["GF(5)"]), &expected)?;
    let w = ok(falsify(4, 0, &QSet::parse(4, "2").unwrap()))?.ok_or("no witness for {2}")?;
    ensure!(w.violating_size == 3, "{{2}} violating size {}", w.violating_size);
    Ok(summary)
}

fn c3_showcase() -> Check {
    let q = QSet::parse(6, "2,3,5").unwrap();
    let r3 = ok(check_criterion(6, 3, &q))?;
    ensure!(r3.accepted(), "char 3 rejects");
    let m0 = r3.m0.ok_or("no m0")?;
    ensure!(m0.value == 3 && m0.branch == Branch::CharPower(1), "m0 = {m0:?}");
    ensure!(!ok(check_criterion(6, 0, &q))?.accepted(), "char 0 accepts");

    let w = ok(ok(witness_neighbor(3, 6, 0))?.against(&q))?;
    let g7 = FieldSpec::prime(7).unwrap();
    ensure!(w.field == g7, "field {}", w.field);
    let cell = ExactMatrix::nilpotent_cell(&g7, 3);
    ensure!(w.x == ExactMatrix::block_diag(&g7, &[cell.clone(), cell]), "x is not Z");
    ensure!(
        w.y == ok(build_zab(3, &g7.one(), &g7.from_int(2), &g7))?,
        "y is not Z_(1,2)"
    );
    ensure!(w.a == g7.one() && w.b == g7.one(), "coefficients {:?} {:?}", w.a, w.b);
    for m in [&w.x, &w.y] {
        ensure!(
            partition_by_ranks(m) == [3, 3],
            "member partition {:?}",
            partition_by_ranks(m)
        );
    }
    ensure!(w.x.commutes_with(&w.y), "x and y do not commute");
    let combo = w.combination();
    ensure!(
        combo.n() - combo.rank() == 2,
        "combination defect {}",
        combo.n() - combo.rank()
    );
    ensure!(
        partition_by_ranks(&combo) == [4, 2],
        "combination {:?}",
        partition_by_ranks(&combo)
    );
    ok(w.verify(&q))?;
    Ok("char 3 accepts with m0 = 3, char 0 witnessed over GF(7) by (4,2)".into())
}

fn c4_poly_cells() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut cases = 0;
    for spec in fields(&["Q", "GF(3)"]) {
        for m in 1..=10 {
            let cell = ExactMatrix::nilpotent_cell(&spec, m);
            for k in 1..=m {
                let predicted = ok(predicted_poly_partition(m, k))?;
                ensure!(
                    predicted.parts() == closed_form(m, k),
                    "closed form ({m},{k}): {predicted}"
                );
                if k == 1 {
                    ensure!(predicted.parts() == [m], "k = 1 gives {predicted}");
                }
                for _ in 0..POLYS_PER_MK {
                    let mut c = vec![spec.zero(); k];
                    c.push(random_nonzero(&spec, &mut rng));
                    c.extend((k + 1..m + 2).map(|_| random_scalar(&spec, &mut rng)));
                    let fx = ok(poly_eval(&Poly::new(&spec, c), &cell))?;
                    ensure!(m - fx.rank() == m.min(k), "defect over {spec} for ({m},{k})");
                    ensure!(
                        ok(jordan_partition(&fx))? == predicted,
                        "partition over {spec} for ({m},{k})"
                    );
                    ensure!(
                        partition_by_ranks(&fx) == predicted.parts(),
                        "rank oracle over {spec} for ({m},{k})"
                    );
                    cases += 1;
                }
            }
        }
    }
    Ok(format!("{cases} polynomials"))
}

fn c5_geometric() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for spec in fields(&["Q", "GF(7)", "GF(4)"]) {
        for _ in 0..GEOMETRIC_CASES {
            let k = rng.gen_range(1..=20u64);
            let a = random_scalar(&spec, &mut rng);
            let b = loop {
                let b = random_scalar(&spec, &mut rng);
                if b != a {
                    break b;
                }
            };
            let s = ok(spec.geometric_sum(k, &a, &b))?;
            let lhs = spec.mul(&s, &spec.sub(&a, &b));
            let rhs = spec.sub(&spec.pow(&a, k), &spec.pow(&b, k));
            ensure!(
                lhs == rhs,
                "k = {k}, a = {}, b = {} over {spec}",
                spec.format(&a),
                spec.format(&b)
            );
        }
    }
    Ok(format!("{GEOMETRIC_CASES} cases per field"))
}

fn c6_stratification() -> Check {
    let mut counted = 0;
    for spec in fields(&["GF(7)", "GF(9)"]) {
        let size = spec.size().unwrap();
        for m in [2usize, 3] {
            for ia in 1..size {
                for ib in 1..size {
                    let (a, b) = (spec.element(ia), spec.element(ib));
                    let s = (0..m).fold(spec.zero(), |acc, i| {
                        spec.add(
                            &acc,
                            &spec.mul(&spec.pow(&a, i as u64), &spec.pow(&b, (m - 1 - i) as u64)),
                        )
                    });
                    let z = ok(build_zab(m, &a, &b, &spec))?;
                    let expected = if s.is_zero() { vec![m, m] } else { vec![m + 1, m - 1] };
                    let got = partition_by_ranks(&z);
                    ensure!(got == expected, "Z over {spec}, m = {m}, a = {ia}, b = {ib}: {got:?}");
                    ensure!(2 * m - z.rank() == 2, "defect of Z over {spec}");
                    counted += 1;
                }
            }
        }
    }
    Ok(format!("{counted} blocks"))
}

/// Commuting pair in dimension `n` with `X^m = Y^m = 0`, conjugated by a
/// random invertible matrix.
fn commuting_nil_pair(spec: &FieldSpec, n: usize, m: usize, rng: &mut ChaCha8Rng) -> (ExactMatrix, ExactMatrix) {
    let types: Vec<_> = partitions_of(n).into_iter().filter(|p| p.max_part() <= m).collect();
    loop {
        let p = &types[rng.gen_range(0..types.len())];
        let x = jordan_matrix(p, n, spec).unwrap();
        let y = if rng.gen_bool(0.5) {
            poly_eval(&random_nil_poly(spec, m, rng), &x).unwrap()
        } else {
            jordan_chevalley(&random_central(&x, rng)).unwrap().1
        };
        if !power_is_zero(&y, m) {
            continue;
        }
        let (c, ci) = random_invertible(spec, n, rng);
        return (&(&c * &x) * &ci, &(&c * &y) * &ci);
    }
}

fn check_spans(spec: &FieldSpec, x: &ExactMatrix, y: &ExactMatrix, m: usize, rng: &mut ChaCha8Rng) -> Check {
    ensure!(x.commutes_with(y), "pair does not commute");
    ensure!(power_is_zero(x, m) && power_is_zero(y, m), "pair escapes index {m}");
    for _ in 0..6 {
        let (a, b) = (random_scalar(spec, rng), random_scalar(spec, rng));
        let z = ok(x.combination(&a, y, &b))?;
        ensure!(power_is_zero(&z, m), "(aX + bY)^{m} != 0 over {spec}\n{x}\n{y}");
    }
    Ok(String::new())
}

fn c7_large_index() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let specs = fields(&["Q", "GF(2)", "GF(3)", "GF(4)", "GF(5)"]);
    for i in 0..COMMUTING_PAIRS {
        let spec = &specs[i % specs.len()];
        let n = rng.gen_range(2..=6);
        let m = rng.gen_range(n / 2 + 1..=n);
        let (x, y) = commuting_nil_pair(spec, n, m, &mut rng);
        check_spans(spec, &x, &y, m, &mut rng)?;
    }
    let specs = fields(&["GF(2)", "GF(4)"]);
    for i in 0..COMMUTING_PAIRS {
        let spec = &specs[i % 2];
        let m = [2, 4][i / 2 % 2];
        let n = rng.gen_range(m..=6);
        let (x, y) = commuting_nil_pair(spec, n, m, &mut rng);
        check_spans(spec, &x, &y, m, &mut rng)?;
    }
    Ok(format!(
        "{COMMUTING_PAIRS} pairs with m > n/2, {COMMUTING_PAIRS} in characteristic 2"
    ))
}

fn c8_index_values() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let specs = fields(&["Q", "GF(2)", "GF(3)", "GF(5)"]);
    let (mut found, mut tries) = (0, 0);
    while found < INDEX_PAIRS {
        tries += 1;
        ensure!(tries < 100 * INDEX_PAIRS, "only {found} qualifying pairs generated");
        let spec = &specs[tries % specs.len()];
        let n = rng.gen_range(3..=8);
        let m = rng.gen_range((n + 3) / 2..=n);
        let rest: Vec<_> = partitions_of(n - m).into_iter().filter(|p| p.max_part() <= m).collect();
        let mut parts = vec![m];
        if !rest.is_empty() {
            parts.extend_from_slice(rest[rng.gen_range(0..rest.len())].parts());
        }
        let x = jordan_matrix(&nilspan::Partition::new(parts).unwrap(), n, spec).unwrap();
        let k = rng.gen_range(1..=m.min(3));
        let mut c = vec![spec.zero(); k];
        c.push(random_nonzero(spec, &mut rng));
        c.extend((k + 1..m).map(|_| random_scalar(spec, &mut rng)));
        let fx = ok(poly_eval(&Poly::new(spec, c), &x))?;
        let small = jordan_chevalley(&random_central(&x, &mut rng)).unwrap().1;
        let y = &fx + &small.scale(&random_scalar(spec, &mut rng));
        ensure!(y.commutes_with(&x), "perturbed Y does not commute");
        let h = index(&y);
        if index(&x) != m || h <= n - m + 2 {
            continue;
        }
        ensure!(
            (1..=m).any(|p| m.div_ceil(p) == h),
            "h(Y) = {h} with h(X) = {m}, n = {n} over {spec}"
        );
        found += 1;
    }
    Ok(format!("{found} pairs from {tries} draws"))
}

fn c9_chevalley() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for spec in fields(&["Q", "GF(2)", "GF(3)", "GF(4)"]) {
        for i in 0..CHEVALLEY_MATRICES {
            let n = rng.gen_range(1..=6);
            let x = if i % 2 == 0 {
                random_matrix(&spec, n, &mut rng)
            } else {
                // Repeated eigenvalues, so the nilpotent part is usually nonzero.
                let blocks: Vec<_> = partitions_of(n)[rng.gen_range(0..partitions_of(n).len())]
                    .parts()
                    .iter()
                    .map(|&s| ExactMatrix::jordan_cell(&spec, &spec.from_int(rng.gen_range(0..2)), s))
                    .collect();
                let (c, ci) = random_invertible(&spec, n, &mut rng);
                &(&c * &ExactMatrix::block_diag(&spec, &blocks)) * &ci
            };
            let (s, nil) = ok(jordan_chevalley(&x))?;
            ensure!(&s + &nil == x, "X_s + X_n != X over {spec}");
            ensure!(s.commutes_with(&nil), "parts do not commute over {spec}");
            ensure!(power_is_zero(&nil, n), "X_n not nilpotent over {spec}");
            ensure!(is_semisimple(&s), "X_s not semisimple over {spec}\n{x}");
        }
        for _ in 0..ADDITIVITY_PAIRS {
            let n = rng.gen_range(1..=5);
            let x = random_matrix(&spec, n, &mut rng);
            let y = if rng.gen_bool(0.5) {
                poly_eval(
                    &Poly::new(&spec, (0..3).map(|_| random_scalar(&spec, &mut rng)).collect()),
                    &x,
                )
                .unwrap()
            } else {
                random_central(&x, &mut rng)
            };
            let (xs, xn) = ok(jordan_chevalley(&x))?;
            let (ys, yn) = ok(jordan_chevalley(&y))?;
            let (ss, sn) = ok(jordan_chevalley(&(&x + &y)))?;
            ensure!(
                ss == &xs + &ys && sn == &xn + &yn,
                "additivity fails over {spec}\n{x}\n{y}"
            );
        }
    }
    Ok(format!(
        "{CHEVALLEY_MATRICES} matrices and {ADDITIVITY_PAIRS} commuting pairs per field"
    ))
}

fn c10_completeness() -> Check {
    let mut sets = 0;
    for char in [0, 2, 3] {
        for n in 1..=8 {
            for q in QSet::all_subsets(n) {
                let accepted = ok(check_criterion(n, char, &q))?.accepted();
                match ok(falsify(n, char, &q))? {
                    None => ensure!(
                        accepted,
                        "n = {n}, char {char}, {}: rejected but no witness",
                        q.braces()
                    ),
                    Some(w) => {
                        ensure!(
                            !accepted,
                            "n = {n}, char {char}, {}: accepted but witnessed",
                            q.braces()
                        );
                        ok(w.verify(&q))?;
                        ensure!(
                            partition_by_ranks(&w.combination()) == w.combo_partition.parts(),
                            "combination type"
                        );
                    }
                }
                sets += 1;
            }
        }
    }
    Ok(format!("{sets} (n, char, Q) cases"))
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        (
            "criterion and exhaustive oracle agree in characteristic 2, n = 4",
            c1_char2,
            Some(LIMIT_CHAR2),
        ),
        (
            "criterion and exhaustive oracle agree over GF(5), n = 4",
            c2_gf5,
            Some(LIMIT_GF5),
        ),
        ("Q = {2,3,5}, n = 6 depends on the characteristic", c3_showcase, None),
        (
            "defect and Jordan type of f(J) for m <= 10",
            c4_poly_cells,
            Some(LIMIT_POLY_CELLS),
        ),
        ("S_k(a,b)(a - b) = a^k - b^k", c5_geometric, None),
        ("Jordan types of Z_(a,b) over GF(7) and GF(9)", c6_stratification, None),
        ("(aX + bY)^m = 0 for commuting X^m = Y^m = 0", c7_large_index, None),
        (
            "h(Y) = ceil(m/p) for large-index commuting pairs",
            c8_index_values,
            None,
        ),
        ("Jordan-Chevalley decomposition and additivity", c9_chevalley, None),
        (
            "falsify is complete for n <= 8, char 0, 2, 3",
            c10_completeness,
            Some(LIMIT_COMPLETENESS),
        ),
    ];
    let mut failed = Vec::new();
    for (i, (name, run, limit)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let mut result = run();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if took > limit {
                result = Err(format!("took {took:.1?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                println!("FAIL {:>2} {name}: {why} ({took:.2?})", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
