use glq_ekr::chartab::{symmetrize, CharacterTable, Symmetrized, Tower};
use glq_ekr::cyclotomic::Cyclotomic;
use glq_ekr::ekr::*;
use glq_ekr::gfq::{build_field, FieldTable};
use glq_ekr::glq::GroupData;
use glq_ekr::scheme::{eigenvalue_matrix, Idempotents};
use num_rational::BigRational;

struct Inst {
    field: FieldTable,
    tower: Tower,
    n: usize,
}

impl Inst {
    fn new(q: u64, n: usize) -> Inst {
        let field = build_field(q).unwrap();
        let tower = Tower::build(&field, n, None, 250_000, None).unwrap();
        Inst { field, tower, n }
    }
    fn table(&self) -> &CharacterTable {
        self.tower.table(self.n).unwrap()
    }
    fn sym(&self) -> Symmetrized {
        symmetrize(self.table(), &self.field).unwrap()
    }
    fn levels(&self, t: usize) -> Vec<&CharacterTable> {
        (1..=t).map(|l| self.tower.table(l).unwrap()).collect()
    }
}

fn rat(a: i64, b: i64) -> Cyclotomic {
    Cyclotomic::from_rational(1, &BigRational::new(a.into(), b.into()))
}

fn same(a: &Cyclotomic, b: &Cyclotomic) -> bool {
    (a - b).is_zero()
}

#[test]
fn gl32_strata_and_qt() {
    let g = Inst::new(2, 3);
    let sym = g.sym();
    let h = select_h(&g.field, 3, 1, HChoice::Least).unwrap();
    let st = sigma_pi_sets(&g.field, g.table(), &sym, &h, 1).unwrap();
    assert!(st.pair_mode);
    assert_eq!(st.sigma.len(), 2);
    assert_eq!(st.pi.len(), 2);
    assert_eq!(st.pi_sizes["0,0"], 1);
    assert_eq!(st.pi_sizes["1,0"], 1);
    let labels: Vec<String> = st.pi.iter().map(|r| r.lambda.to_string()).collect();
    assert_eq!(labels, vec!["{X+1:(3)}", "{X+1:(2,1)}"]);
    assert_eq!(st.sigma.iter().filter(|c| c.fixes_t_tuple).count(), 1);

    let qt = build_qt_direct(&sym, &st, 3).unwrap();
    assert_eq!(qt.integer_entries().unwrap(), vec![vec![1, 1], vec![-1, 0]]);
    assert_eq!(qt.rank, 2);
    assert!(same(qt.det.as_ref().unwrap(), &Cyclotomic::one(1)));

    let red = build_st_reduced(&g.field, &g.levels(1), &h, 1).unwrap();
    assert!(compare_qt(&qt, &red.q).equal);
    let s_check = check_s_against_table(&g.field, g.table(), &h, &red).unwrap();
    assert!(s_check.passed(), "{s_check:?}");
}

#[test]
fn gl42_qt_matches_gl32() {
    let g3 = Inst::new(2, 3);
    let g4 = Inst::new(2, 4);
    let h3 = select_h(&g3.field, 3, 1, HChoice::Least).unwrap();
    let h4 = select_h(&g4.field, 4, 1, HChoice::Least).unwrap();
    let s3 = g3.sym();
    let s4 = g4.sym();
    let q3 = build_qt_direct(&s3, &sigma_pi_sets(&g3.field, g3.table(), &s3, &h3, 1).unwrap(), 3).unwrap();
    let q4 = build_qt_direct(&s4, &sigma_pi_sets(&g4.field, g4.table(), &s4, &h4, 1).unwrap(), 4).unwrap();
    let d = compare_qt(&q3, &q4);
    assert!(d.equal, "{d:?}");
    let red = build_st_reduced(&g4.field, &g4.levels(1), &h4, 1).unwrap();
    assert!(compare_qt(&q4, &red.q).equal);
    assert!(check_s_against_table(&g4.field, g4.table(), &h4, &red).unwrap().passed());
}

#[test]
fn qt_zero_is_one_by_one() {
    let g = Inst::new(2, 3);
    let sym = g.sym();
    let h = select_h(&g.field, 3, 1, HChoice::Least).unwrap();
    let st = sigma_pi_sets(&g.field, g.table(), &sym, &h, 0).unwrap();
    let q0 = build_qt_direct(&sym, &st, 3).unwrap();
    assert_eq!(q0.integer_entries().unwrap(), vec![vec![1]]);
}

#[test]
fn gl32_weights_tail_and_bounds() {
    let g = Inst::new(2, 3);
    let sym = g.sym();
    let eig = eigenvalue_matrix(&sym, &g.field).unwrap();
    let h = select_h(&g.field, 3, 1, HChoice::Least).unwrap();
    let st1 = sigma_pi_sets(&g.field, g.table(), &sym, &h, 1).unwrap();
    let ws = solve_weights(&g.field, &eig, &st1, 3, 1, Mode::Points).unwrap();
    assert!(ws.passed());
    assert!(same(&ws.target, &rat(-1, 6)));
    assert!(same(&ws.weights[0].w, &rat(1, 48)));
    assert!(ws.weights[1].w.is_zero());
    assert_eq!(ws.vanishing_holds, Some(true));

    let tail = tail_check(&g.field, &eig, &ws, 3);
    assert!(tail.targets_exact);
    assert_eq!(tail.strict, 2);
    assert_eq!(tail.violations.len(), 1);
    let find = |s: &str| tail.rows.iter().find(|r| r.lambda.to_string() == s).unwrap();
    assert!(same(&find("{X+1:(1,1,1)}").p, &rat(1, 8)));
    assert_eq!(find("{X+1:(1,1,1)}").class, EigenClass::Strict);
    assert!(find("{X+1:(1), X^2+X+1:(1)}").p.is_zero());
    assert!(same(&tail.rows.iter().find(|r| r.class == EigenClass::Violation).unwrap().p, &rat(-1, 6)));

    let b = bound_report(&eig, &ws, 2, 3).unwrap();
    assert!(b.independent_equal && b.cross_equal && b.p_min_is_target);
    assert_eq!(b.closed_form, "24");
    assert_eq!(b.attaining.len(), 2);

    let st0 = sigma_pi_sets(&g.field, g.table(), &sym, &h, 0).unwrap();
    let wsp = solve_weights(&g.field, &eig, &st0, 3, 1, Mode::Spaces).unwrap();
    assert!(wsp.passed());
    assert_eq!(wsp.implied_row_holds, Some(true));
    assert!(same(&wsp.weights[0].w, &rat(1, 48)));
    let bs = bound_report(&eig, &wsp, 2, 3).unwrap();
    assert!(bs.independent_equal);
    assert!(same(&bs.independent.bound, &Cyclotomic::from_int(1, 24)));
}

#[test]
fn gl32_span() {
    let g = Inst::new(2, 3);
    let sym = g.sym();
    let grp = GroupData::build(&g.field, 3, 1000).unwrap();
    let ids = Idempotents::build(&grp, g.table(), &sym).unwrap();
    for mode in [Mode::Points, Mode::Spaces] {
        let r = span_check(&grp, g.table(), &sym, &ids, 1, mode).unwrap();
        assert_eq!(r.rank, 37, "{mode}");
        assert!(r.passed(), "{r:?}");
    }
    let cons = span_constituents(&g.field, &sym, 3, 1, Mode::Points);
    let coset = standard_coset(&grp, 1, Mode::Points);
    assert!(projection_residual(&grp, &ids, &cons, &coset).iter().all(Cyclotomic::is_zero));
    let not_coset = vec![grp.identity()];
    assert!(!projection_residual(&grp, &ids, &cons, &not_coset).iter().all(Cyclotomic::is_zero));
}

#[test]
fn gl22_span_rank() {
    let g = Inst::new(2, 2);
    let sym = g.sym();
    let grp = GroupData::build(&g.field, 2, 1000).unwrap();
    let ids = Idempotents::build(&grp, g.table(), &sym).unwrap();
    let r = span_check(&grp, g.table(), &sym, &ids, 1, Mode::Points).unwrap();
    assert_eq!((r.columns, r.rank), (9, 5));
    assert!(r.passed());
}

#[test]
fn gl33_full_pipeline() {
    let g = Inst::new(3, 3);
    let sym = g.sym();
    let eig = eigenvalue_matrix(&sym, &g.field).unwrap();
    for choice in [HChoice::Least, HChoice::Greatest] {
        let h = select_h(&g.field, 3, 1, choice).unwrap();
        let st = sigma_pi_sets(&g.field, g.table(), &sym, &h, 1).unwrap();
        let qt = build_qt_direct(&sym, &st, 3).unwrap();
        let red = build_st_reduced(&g.field, &g.levels(1), &h, 1).unwrap();
        assert!(compare_qt(&qt, &red.q).equal);
        assert!(check_s_against_table(&g.field, g.table(), &h, &red).unwrap().passed());
        let ws = solve_weights(&g.field, &eig, &st, 3, 1, Mode::Points).unwrap();
        assert!(ws.passed());
        assert!(same(&ws.target, &rat(-1, 25)));
        let tail = tail_check(&g.field, &eig, &ws, 3);
        assert!(tail.targets_exact);
    }
}
