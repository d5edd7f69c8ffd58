use ahomotopy::format::{
    parse_graph, parse_grid, parse_map, parse_path, parse_report, write_graph, write_grid, write_map,
    write_path, write_report,
};
use ahomotopy::{
    certify_no_cone_map, count_homomorphisms, enumerate_homomorphisms, exponential_graph, net_winding, Cone,
    Graph, GraphMap, HomotopyGrid, Limits, StablePath, Vertex,
};
use proptest::prelude::*;

fn cycle(n: usize) -> Graph {
    Graph::cycle(n).unwrap()
}

fn walk(n: usize, start: Vertex, steps: &[i8]) -> Vec<Vertex> {
    let mut w = vec![start % n];
    for &s in steps {
        let last = *w.last().unwrap();
        w.push((last as i64 + s as i64).rem_euclid(n as i64) as usize);
    }
    w
}

// A closed walk with no stalls: the free steps, then straight back home.
fn loop_without_stalls(n: usize, steps: &[bool]) -> Vec<Vertex> {
    let signed: Vec<i8> = steps.iter().map(|&up| if up { 1 } else { -1 }).collect();
    let mut w = walk(n, 0, &signed);
    while *w.last().unwrap() != 0 {
        let last = *w.last().unwrap();
        w.push((last + 1) % n);
    }
    w
}

// A word one step away from `a` with the same endpoints, if the random
// choices allow one.
fn neighbour_word(g: &Graph, a: &[Vertex], choices: &[usize]) -> Option<Vec<Vertex>> {
    let mut b = vec![a[0]];
    for i in 1..a.len() - 1 {
        let prev = b[i - 1];
        let options: Vec<_> = g
            .closed_neighborhood(a[i])
            .iter()
            .copied()
            .filter(|&x| g.near(prev, x))
            .collect();
        b.push(options[choices[i] % options.len()]);
    }
    if a.len() > 1 {
        let last = a[a.len() - 1];
        if !g.near(b[b.len() - 1], last) {
            return None;
        }
        b.push(last);
    }
    Some(b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn one_step_moves_keep_net_winding(
        n in 5usize..9,
        start in 0usize..9,
        steps in prop::collection::vec(-1i8..=1, 0..14),
        choices in prop::collection::vec(0usize..3, 16),
    ) {
        let g = cycle(n);
        let a = walk(n, start, &steps);
        if let Some(b) = neighbour_word(&g, &a, &choices) {
            prop_assert!(a.iter().zip(&b).all(|(&x, &y)| g.near(x, y)));
            prop_assert_eq!(net_winding(n, &a), net_winding(n, &b));
        }
    }

    #[test]
    fn mapping_never_lengthens(
        n in 3usize..7,
        m in 3usize..7,
        pick in any::<prop::sample::Index>(),
        start in 0usize..7,
        steps in prop::collection::vec(-1i8..=1, 0..12),
    ) {
        let (src, tgt) = (cycle(n), cycle(m));
        let homs = enumerate_homomorphisms(&src, &tgt, &Limits::default()).unwrap();
        let f = &homs[pick.index(homs.len())];
        let p = StablePath::new(&src, &walk(n, start, &steps)).unwrap();
        let image = p.map(f).unwrap();
        prop_assert!(image.active_length() <= p.active_length());
        prop_assert_eq!(image.endpoints(), (f.apply(p.start()), f.apply(p.end())));
    }

    #[test]
    fn canonical_words_have_no_outer_stalls(
        n in 3usize..8,
        start in 0usize..8,
        steps in prop::collection::vec(-1i8..=1, 0..12),
    ) {
        let p = StablePath::new(&cycle(n), &walk(n, start, &steps)).unwrap();
        let w = p.word();
        if w.len() > 1 {
            prop_assert_ne!(w[0], w[1]);
            prop_assert_ne!(w[w.len() - 2], w[w.len() - 1]);
        }
        prop_assert_eq!(p.reverse().reverse(), p.clone());
        prop_assert_eq!(p.padded(w.len() + 3)[..w.len()].to_vec(), w.to_vec());
    }

    #[test]
    fn decomposition_glues_back(
        n in 5usize..8,
        steps in prop::collection::vec(any::<bool>(), 1..10),
        raw in prop::collection::vec(0usize..64, 3),
    ) {
        let g = cycle(n);
        let word = loop_without_stalls(n, &steps);
        let k = word.len() - 1;
        let mut marks = [0, raw[0] % (k + 1), raw[1] % (k + 1), raw[2] % (k + 1)];
        marks.sort_unstable();
        let cone = Cone::new(&g, StablePath::new(&g, &word).unwrap(), marks).unwrap();
        let d = cone.decompose();
        let glued = Cone::from_quadruple(&d.p1, &d.p2, &d.q1, &d.q2, cone.marked_vertices()).unwrap();
        prop_assert_eq!(glued, cone);
    }

    #[test]
    fn graph_and_map_text_round_trip(
        n in 1usize..9,
        pairs in prop::collection::vec((0usize..9, 0usize..9), 0..20),
        comment in any::<bool>(),
    ) {
        let edges: Vec<_> = pairs.into_iter().filter(|&(u, v)| u < n && v < n && u != v).collect();
        let g = Graph::new(n, &edges).unwrap();
        let mut text = write_graph(&g);
        if comment {
            text.insert_str(0, "# generated\n");
        }
        prop_assert_eq!(parse_graph(&text).unwrap(), g.clone());

        for f in [GraphMap::identity(&g), GraphMap::constant(&g, &cycle(4), n % 4).unwrap()] {
            let back = parse_map(&write_map(&f)).unwrap().to_map(f.source(), f.target()).unwrap();
            prop_assert_eq!(back, f);
        }
    }

    #[test]
    fn path_and_grid_text_round_trip(
        n in 3usize..8,
        start in 0usize..8,
        steps in prop::collection::vec(-1i8..=1, 0..12),
        extra in 0usize..4,
    ) {
        let g = cycle(n);
        let p = StablePath::new(&g, &walk(n, start, &steps)).unwrap();
        prop_assert_eq!(StablePath::new(&g, &parse_path(&write_path(&p)).unwrap()).unwrap(), p.clone());
        let grid = HomotopyGrid::degenerate(&p, p.word().len() + extra);
        let back = HomotopyGrid::new(&g, parse_grid(&write_grid(&grid)).unwrap()).unwrap();
        prop_assert_eq!(back, grid);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn adjunction_and_symmetry(f in 0usize..6, g in 0usize..6, h in 0usize..6) {
        let small = [
            Graph::path(0),
            Graph::path(1),
            Graph::path(2),
            cycle(3),
            cycle(4),
            Graph::discrete(2),
        ];
        let (f, g, h) = (&small[f], &small[g], &small[h]);
        let limits = Limits::default();
        let left = count_homomorphisms(&f.box_product(g), h, &limits).unwrap();
        let swapped = count_homomorphisms(&g.box_product(f), h, &limits).unwrap();
        let right = count_homomorphisms(f, &exponential_graph(g, h, &limits).unwrap(), &limits).unwrap();
        prop_assert_eq!(left, swapped);
        prop_assert_eq!(left, right);
    }
}

#[test]
fn report_text_round_trip() {
    let cone = Cone::identity_cycle(5, [0, 1, 2, 3]).unwrap();
    let report = certify_no_cone_map(&cone, &Limits::default()).unwrap();
    let back = parse_report(&write_report(&report)).unwrap();
    assert_eq!(back, report);
    back.verify(&cone, &Limits::default()).unwrap();
}
