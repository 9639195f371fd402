//! One line per acceptance criterion.  Runs without the libtest harness so
//! the report is always printed; exits nonzero when any criterion fails.

use glq_ekr::bruteforce::{build_graph, max_independent, verify_extremal};
use glq_ekr::chartab::label::check_strata;
use glq_ekr::chartab::{hook_degree, symmetrize, CharacterTable, Symmetrized, Tower};
use glq_ekr::cyclotomic::Cyclotomic;
use glq_ekr::ekr::*;
use glq_ekr::gfq::{build_field, FieldTable, Poly};
use glq_ekr::glq::GroupData;
use glq_ekr::partitions::gl_order;
use glq_ekr::scheme::{eigenvalue_matrix, idempotent_check, Idempotents};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;
use std::process::Command;
use std::time::{Duration, Instant};

type Check = Result<String, String>;

macro_rules! ensure {
    ($c:expr, $($fmt:tt)+) => {
        if !$c {
            return Err(format!($($fmt)+));
        }
    };
}

fn field(q: u64) -> FieldTable {
    build_field(q).unwrap()
}

fn tower(f: &FieldTable, n: usize) -> Result<Tower, String> {
    Tower::build(f, n, None, 250_000, None).map_err(|e| e.to_string())
}

fn rat(a: i64, b: i64) -> Cyclotomic {
    Cyclotomic::from_rational(1, &BigRational::new(a.into(), b.into()))
}

fn same(a: &Cyclotomic, b: &Cyclotomic) -> bool {
    (a - b).is_zero()
}

struct Inst {
    f: FieldTable,
    tw: Tower,
    n: usize,
}

impl Inst {
    fn new(q: u64, n: usize) -> Result<Inst, String> {
        let f = field(q);
        let tw = tower(&f, n)?;
        Ok(Inst { f, tw, n })
    }
    fn table(&self) -> &CharacterTable {
        self.tw.table(self.n).unwrap()
    }
    fn sym(&self) -> Symmetrized {
        symmetrize(self.table(), &self.f).unwrap()
    }
    fn h(&self, t: usize) -> HTable {
        select_h(&self.f, self.n, t, HChoice::Least).unwrap()
    }
}

fn c1_classes() -> Check {
    let start = Instant::now();
    for (q, n) in [(2, 2), (3, 2), (2, 3), (2, 4), (3, 3)] {
        let g = GroupData::build(&field(q), n, 250_000).map_err(|e| e.to_string())?;
        let sum: u64 = g.classes().iter().map(|c| c.size).sum();
        ensure!(BigInt::from(sum) == gl_order(n, q), "GL({n},{q}) sizes sum to {sum}");
        ensure!(g.order() as u64 == sum, "GL({n},{q}) enumerated {} elements", g.order());
        for c in g.classes() {
            ensure!(c.size == c.counted, "GL({n},{q}) class {}: formula {} counted {}", c.index, c.size, c.counted);
        }
    }
    let el = start.elapsed();
    ensure!(el <= Duration::from_secs(120), "took {el:?}");
    Ok(format!("5 groups in {:.2?}", el))
}

fn sorted_degrees(t: &CharacterTable) -> Vec<u64> {
    let mut d = t.degrees().to_vec();
    d.sort_unstable();
    d
}

/// Towers covering every table through GL(4,2).
const TOWERS: [(u64, usize); 4] = [(2, 4), (3, 3), (4, 2), (5, 2)];

fn c2_tables() -> Check {
    let start = Instant::now();
    let gl23 = Inst::new(3, 2)?;
    ensure!(sorted_degrees(gl23.table()) == [1, 1, 2, 2, 2, 3, 3, 4], "GL(2,3) degrees {:?}", sorted_degrees(gl23.table()));
    let gl32 = Inst::new(2, 3)?;
    ensure!(sorted_degrees(gl32.table()) == [1, 3, 3, 6, 7, 8], "GL(3,2) degrees {:?}", sorted_degrees(gl32.table()));
    let mut count = 0;
    for (q, n) in TOWERS {
        let f = field(q);
        let tw = tower(&f, n)?;
        for k in 1..=n {
            let t = tw.table(k).unwrap();
            t.verify_orthogonality().map_err(|e| format!("GL({k},{q}): {e}"))?;
            count += 1;
        }
        if (q, n) == (2, 4) {
            ensure!(tw.table(4).unwrap().num_classes() == 14, "GL(4,2) class count");
        }
    }
    let el = start.elapsed();
    ensure!(el <= Duration::from_secs(300), "took {el:?}");
    Ok(format!("{count} tables orthogonal in {:.2?}", el))
}

fn c3_hooks() -> Check {
    let mut rows = 0;
    for (q, n) in TOWERS {
        let f = field(q);
        let tw = tower(&f, n)?;
        for k in 1..=n {
            let t = tw.table(k).unwrap();
            for (r, l) in t.labels().ok_or("unlabeled table")?.iter().enumerate() {
                ensure!(
                    hook_degree(l, q as usize) == BigInt::from(t.degrees()[r]),
                    "GL({k},{q}) {l}: hook {} vs {}",
                    hook_degree(l, q as usize),
                    t.degrees()[r]
                );
                rows += 1;
            }
        }
    }
    Ok(format!("{rows} rows, zero mismatches"))
}

fn c4_zeta() -> Check {
    let g = Inst::new(2, 3)?;
    let t = g.table();
    let mult = t.decompose(&t.zeta_character(&g.f, 1, 0)).map_err(|e| e.to_string())?;
    let mut got: Vec<(u64, i64)> = mult.iter().enumerate().filter(|(_, &m)| m != 0).map(|(r, &m)| (t.degrees()[r], m)).collect();
    got.sort();
    ensure!(got == [(1, 1), (6, 1)], "ζ^(1,0) constituents {got:?}");
    let mut strata = 0;
    for (q, n) in TOWERS {
        let f = field(q);
        let tw = tower(&f, n)?;
        for k in 1..=n {
            let t = tw.table(k).unwrap();
            check_strata(&f, t).map_err(|e| format!("GL({k},{q}): {e}"))?;
            let sym = symmetrize(t, &f).map_err(|e| e.to_string())?;
            for lvl in (0..).take_while(|&l| 2 * l < k) {
                let h = select_h(&f, k, lvl, HChoice::Least).map_err(|e| e.to_string())?;
                sigma_pi_sets(&f, t, &sym, &h, lvl).map_err(|e| format!("GL({k},{q}) t={lvl}: {e}"))?;
                strata += 1;
            }
        }
    }
    Ok(format!("constituents (1,1) at degrees 1, 6; {strata} strata sets agree"))
}

fn c5_qt() -> Check {
    let mut qs = Vec::new();
    for n in [3, 4] {
        let g = Inst::new(2, n)?;
        let sym = g.sym();
        let h = g.h(1);
        let st = sigma_pi_sets(&g.f, g.table(), &sym, &h, 1).map_err(|e| e.to_string())?;
        let qt = build_qt_direct(&sym, &st, n).map_err(|e| e.to_string())?;
        let red = build_st_reduced(&g.f, &[g.tw.table(1).unwrap()], &h, 1).map_err(|e| e.to_string())?;
        ensure!(compare_qt(&qt, &red.q).equal, "GL({n},2) reduced path differs");
        let s_check = check_s_against_table(&g.f, g.table(), &h, &red).map_err(|e| e.to_string())?;
        ensure!(s_check.passed(), "GL({n},2) S disagrees with the table: {s_check:?}");
        qs.push(qt);
    }
    let e = qs[0].integer_entries().ok_or("non-integral Q_1")?;
    ensure!(e == [[1, 1], [-1, 0]], "Q_1 = {e:?}");
    let det = qs[0].det.as_ref().ok_or("no determinant")?;
    ensure!(same(det, &Cyclotomic::one(1)) || same(det, &Cyclotomic::from_int(1, -1)), "det {det:?}");
    let d = compare_qt(&qs[0], &qs[1]);
    ensure!(d.equal, "GL(3,2) and GL(4,2) differ: {d:?}");
    Ok("Q_1 = [[1,1],[-1,0]], det 1, equal across n = 3, 4 and the reduced path".into())
}

fn c6_weights() -> Check {
    let g = Inst::new(2, 3)?;
    let sym = g.sym();
    let eig = eigenvalue_matrix(&sym, &g.f).map_err(|e| e.to_string())?;
    let h = g.h(1);
    let st1 = sigma_pi_sets(&g.f, g.table(), &sym, &h, 1).map_err(|e| e.to_string())?;
    let ws = solve_weights(&g.f, &eig, &st1, 3, 1, Mode::Points).map_err(|e| e.to_string())?;
    ensure!(ws.residual_zero && ws.passed(), "points system unsolved");
    ensure!(same(&ws.target, &rat(-1, 6)), "η = {:?}", ws.target);
    let ws_vals: Vec<&Cyclotomic> = ws.weights.iter().map(|w| &w.w).collect();
    ensure!(ws_vals.len() == 2 && same(ws_vals[0], &rat(1, 48)) && ws_vals[1].is_zero(), "w = {ws_vals:?}");
    let x1 = Poly::linear(1, &g.f);
    let zero_at = &ws.weights[1].sigma;
    ensure!(zero_at.get(&x1).to_string() == "(1)", "zero weight sits at {zero_at}");
    ensure!(ws.vanishing_holds == Some(true), "vanishing row");

    let st0 = sigma_pi_sets(&g.f, g.table(), &sym, &h, 0).map_err(|e| e.to_string())?;
    let wsp = solve_weights(&g.f, &eig, &st0, 3, 1, Mode::Spaces).map_err(|e| e.to_string())?;
    ensure!(wsp.residual_zero && wsp.passed(), "spaces system unsolved");
    ensure!(same(&wsp.target, &rat(-1, 6)), "ε = {:?}", wsp.target);
    ensure!(wsp.implied_row_holds == Some(true), "implied (n-t,t) row fails");
    Ok("w = (1/48, 0), η = ε = -1/6, residual 0".into())
}

fn c7_bounds() -> Check {
    let g = Inst::new(2, 3)?;
    let sym = g.sym();
    let eig = eigenvalue_matrix(&sym, &g.f).map_err(|e| e.to_string())?;
    let h = g.h(1);
    for mode in [Mode::Points, Mode::Spaces] {
        let lvl = if mode == Mode::Points { 1 } else { 0 };
        let st = sigma_pi_sets(&g.f, g.table(), &sym, &h, lvl).map_err(|e| e.to_string())?;
        let ws = solve_weights(&g.f, &eig, &st, 3, 1, mode).map_err(|e| e.to_string())?;
        let b = bound_report(&eig, &ws, 2, 3).map_err(|e| e.to_string())?;
        ensure!(same(&b.independent.bound, &Cyclotomic::from_int(1, 24)), "{mode} bound {:?}", b.independent.bound);
        ensure!(b.independent_equal && b.closed_form == "24", "{mode} closed form {}", b.closed_form);
    }
    let mut found = Vec::new();
    for (q, n, mode, want) in [
        (2, 3, Mode::Spaces, 24usize),
        (2, 2, Mode::Points, 2),
        (3, 2, Mode::Points, 6),
        (2, 3, Mode::Points, 24),
    ] {
        let start = Instant::now();
        let grp = GroupData::build(&field(q), n, 1000).map_err(|e| e.to_string())?;
        let gr = build_graph(&grp, 1, mode).map_err(|e| e.to_string())?;
        let r = max_independent(&gr, &grp, Some(Duration::from_secs(60)));
        let el = start.elapsed();
        let formula: u64 = (1..n).map(|i| q.pow(n as u32) - q.pow(i as u32)).product();
        ensure!(r.exact && r.witness_verified, "GL({n},{q}) {mode} search incomplete");
        ensure!(r.max_size == want && want as u64 == formula, "GL({n},{q}) {mode}: {} vs {want}", r.max_size);
        ensure!(el <= Duration::from_secs(60), "GL({n},{q}) {mode} took {el:?}");
        found.push(r.max_size.to_string());
    }
    Ok(format!("Hoffman 24 in both modes; maxima {}", found.join(", ")))
}

fn c8_tail() -> Check {
    let g = Inst::new(2, 3)?;
    let sym = g.sym();
    let eig = eigenvalue_matrix(&sym, &g.f).map_err(|e| e.to_string())?;
    let st = sigma_pi_sets(&g.f, g.table(), &sym, &g.h(1), 1).map_err(|e| e.to_string())?;
    let ws = solve_weights(&g.f, &eig, &st, 3, 1, Mode::Points).map_err(|e| e.to_string())?;
    let tail = tail_check(&g.f, &eig, &ws, 3);
    ensure!(tail.targets_exact, "targeted rows off");
    let class_of = |deg: u64| -> Option<(EigenClass, Cyclotomic)> {
        tail.rows
            .iter()
            .find(|r| sym.row_of(&r.lambda).is_some_and(|l| sym.psi_degrees[l] == deg))
            .map(|r| (r.class, r.p.clone()))
    };
    let (st8, p8) = class_of(8).ok_or("no Steinberg row")?;
    ensure!(st8 == EigenClass::Strict && same(&p8, &rat(1, 8)), "Steinberg {st8:?} {p8:?}");
    let (st7, p7) = class_of(7).ok_or("no degree-7 row")?;
    ensure!(st7 == EigenClass::Strict && p7.is_zero(), "degree 7 {st7:?} {p7:?}");
    ensure!(tail.strict == 2, "{} strict rows", tail.strict);
    ensure!(tail.violations.len() == 1, "{} violations", tail.violations.len());
    let v = tail.rows.iter().find(|r| r.class == EigenClass::Violation).ok_or("no violation row")?;
    let vl = sym.row_of(&v.lambda).ok_or("violation row unknown")?;
    ensure!(sym.chi_degrees[vl] == 3 && same(&v.p, &rat(-1, 6)), "violation {} at {:?}", v.lambda, v.p);
    Ok(format!("strict 1/8 and 0; violation {} at -1/6", v.lambda))
}

fn c9_span() -> Check {
    let g = Inst::new(2, 3)?;
    let sym = g.sym();
    let grp = GroupData::build(&g.f, 3, 1000).map_err(|e| e.to_string())?;
    let ids = Idempotents::build(&grp, g.table(), &sym).map_err(|e| e.to_string())?;
    for mode in [Mode::Points, Mode::Spaces] {
        let r = span_check(&grp, g.table(), &sym, &ids, 1, mode).map_err(|e| e.to_string())?;
        ensure!(r.rank == 37 && r.passed(), "GL(3,2) {mode}: rank {} {r:?}", r.rank);
        let cons = span_constituents(&g.f, &sym, 3, 1, mode);
        let gr = build_graph(&grp, 1, mode).map_err(|e| e.to_string())?;
        let wit = max_independent(&gr, &grp, Some(Duration::from_secs(60)));
        ensure!(wit.exact && wit.max_size == 24, "{mode} witness");
        for (what, set) in [("witness", wit.witness.clone()), ("coset", standard_coset(&grp, 1, mode))] {
            let res = projection_residual(&grp, &ids, &cons, &set);
            ensure!(res.iter().all(Cyclotomic::is_zero), "{mode} {what} leaves the span");
        }
        let rep = verify_extremal(&grp, &gr, &wit.witness, Some((&ids, &cons)));
        ensure!(rep.passed(), "{mode} extremal {rep:?}");
    }
    let g2 = Inst::new(2, 2)?;
    let grp2 = GroupData::build(&g2.f, 2, 1000).map_err(|e| e.to_string())?;
    let sym2 = g2.sym();
    let ids2 = Idempotents::build(&grp2, g2.table(), &sym2).map_err(|e| e.to_string())?;
    let r2 = span_check(&grp2, g2.table(), &sym2, &ids2, 1, Mode::Points).map_err(|e| e.to_string())?;
    ensure!(r2.rank == 5 && r2.passed(), "GL(2,2) rank {}", r2.rank);
    Ok("rank(M_1) = 37 on GL(3,2), 5 on GL(2,2); witness and coset project exactly".into())
}

fn c10_idempotents() -> Check {
    let mut done = Vec::new();
    for (q, n) in [(2, 2), (3, 2), (2, 3), (4, 2), (5, 2)] {
        let g = Inst::new(q, n)?;
        let sym = g.sym();
        let grp = GroupData::build(&g.f, n, 1000).map_err(|e| e.to_string())?;
        ensure!(grp.order() <= 500, "GL({n},{q}) too large");
        let eig = eigenvalue_matrix(&sym, &g.f).map_err(|e| e.to_string())?;
        let r = idempotent_check(&grp, g.table(), &sym, &eig).map_err(|e| e.to_string())?;
        ensure!(
            r.passed() && r.idempotent && r.orthogonal && r.eigenvectors,
            "GL({n},{q}): {:?}",
            r.failures
        );
        done.push(format!("|G|={}", grp.order()));
    }
    Ok(done.join(", "))
}

fn c11_estimates() -> Check {
    let mut n_checks = 0;
    for (q, n) in [(2, 3), (2, 4), (3, 3)] {
        let f = field(q);
        let h = select_h(&f, n, 1, HChoice::Least).map_err(|e| e.to_string())?;
        let r = estimates_check(&f, n, 1, &h).map_err(|e| e.to_string())?;
        ensure!(r.passed() && r.failures == 0, "GL({n},{q}): {} failures", r.failures);
        n_checks += r.classes.len() + r.degrees.len();
    }
    Ok(format!("{n_checks} exact comparisons, zero failures"))
}

fn verify_run(threads: usize, args: &[&str]) -> Result<Vec<String>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_glq"))
        .arg("verify")
        .args(args)
        .args(["--no-cache", "--threads", &threads.to_string()])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "exit {:?} with {threads} threads", out.status.code());
    let text = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    text.lines()
        .map(|l| {
            let v: Value = serde_json::from_str(l).map_err(|e| e.to_string())?;
            let stamp = v["meta"]["timestamp"].as_str().ok_or("missing timestamp")?;
            Ok(l.replace(stamp, "T"))
        })
        .collect()
}

fn c12_determinism() -> Check {
    let mut lines = 0;
    for args in [["--q", "2", "--n", "3", "--t", "1"], ["--q", "3", "--n", "2", "--t", "1"]] {
        let a = verify_run(1, &args)?;
        let b = verify_run(4, &args)?;
        ensure!(a == b, "reports differ for {args:?}");
        lines += a.len();
    }
    Ok(format!("{lines} documents identical across 1 and 4 threads"))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 12] = [
        ("group classes", c1_classes),
        ("character tables", c2_tables),
        ("hook degrees", c3_hooks),
        ("zeta decomposition", c4_zeta),
        ("Q_t", c5_qt),
        ("weight system", c6_weights),
        ("bounds", c7_bounds),
        ("tail report", c8_tail),
        ("span", c9_span),
        ("idempotents", c10_idempotents),
        ("estimates", c11_estimates),
        ("determinism", c12_determinism),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let el = start.elapsed();
        match r {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{el:.2?}]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{el:.2?}]", i + 1)
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
