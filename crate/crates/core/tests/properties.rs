use glq_ekr::bruteforce::{build_graph, IntersectionGraph};
use glq_ekr::chartab::{symmetrize, Symmetrized, Tower};
use glq_ekr::cyclotomic::Cyclotomic;
use glq_ekr::ekr::{projection_residual, span_constituents, standard_coset, Mode};
use glq_ekr::gfq::{build_field, FieldTable};
use glq_ekr::glq::GroupData;
use glq_ekr::scheme::Idempotents;
use proptest::prelude::*;
use std::sync::OnceLock;

struct Gl32 {
    field: FieldTable,
    tower: Tower,
    group: GroupData,
    sym: Symmetrized,
    ids: Idempotents,
    points: IntersectionGraph,
    spaces: IntersectionGraph,
}

fn gl32() -> &'static Gl32 {
    static G: OnceLock<Gl32> = OnceLock::new();
    G.get_or_init(|| {
        let field = build_field(2).unwrap();
        let tower = Tower::build(&field, 3, None, 250_000, None).unwrap();
        let group = GroupData::build(&field, 3, 1000).unwrap();
        let table = tower.table(3).unwrap();
        let sym = symmetrize(table, &field).unwrap();
        let ids = Idempotents::build(&group, table, &sym).unwrap();
        let points = build_graph(&group, 1, Mode::Points).unwrap();
        let spaces = build_graph(&group, 1, Mode::Spaces).unwrap();
        Gl32 { field, tower, group, sym, ids, points, spaces }
    })
}

fn rank_of_difference(g: &Gl32, x: u32, y: u32) -> usize {
    let f = &g.field;
    g.group.matrix(x).sub(&g.group.matrix(y), f).rank(f)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn point_graph_matches_rank(x in 0u32..168, y in 0u32..168) {
        let g = gl32();
        let intersect = rank_of_difference(g, x, y) <= 2;
        prop_assert_eq!(g.points.adjacent(x, y), x != y && !intersect);
        prop_assert_eq!(g.points.adjacent(x, y), g.points.adjacent(y, x));
    }

    #[test]
    fn point_intersecting_implies_space_intersecting(x in 0u32..168, y in 0u32..168) {
        let g = gl32();
        if x != y && !g.points.adjacent(x, y) {
            prop_assert!(!g.spaces.adjacent(x, y));
        }
    }

    #[test]
    fn coset_translates_lie_in_span(a in 0u32..168, b in 0u32..168, spaces in any::<bool>()) {
        let g = gl32();
        let mode = if spaces { Mode::Spaces } else { Mode::Points };
        let cons = span_constituents(&g.field, &g.sym, 3, 1, mode);
        let set: Vec<u32> = standard_coset(&g.group, 1, mode)
            .into_iter()
            .map(|c| g.group.mul(g.group.mul(a, c), b))
            .collect();
        let res = projection_residual(&g.group, &g.ids, &cons, &set);
        prop_assert!(res.iter().all(Cyclotomic::is_zero));
    }

    #[test]
    fn zeta_multiplicities_are_characters(t in 0usize..=3, i in 0i64..1) {
        let g = gl32();
        let table = g.tower.table(3).unwrap();
        let zeta = table.zeta_character(&g.field, t, i);
        let mult = table.decompose(&zeta).unwrap();
        prop_assert!(mult.iter().all(|&m| m >= 0));
        let dim: i64 = mult.iter().zip(table.degrees()).map(|(&m, &d)| m * d as i64).sum();
        let tuples: i64 = (0..t).map(|k| 8 - (1 << k)).product();
        prop_assert_eq!(dim, tuples);
    }
}
