use ahomotopy::{
    certify_no_cone_map, enumerate_homomorphisms, mark_columns, obstruction_cone, search_cone_maps,
    verify_cone_map, winding_number, Cone, ConeMap, ConeMapDefect, Graph, GraphMap, HomotopyGrid, Limits,
    Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid(g: &Graph, rows: Vec<Vec<usize>>) -> HomotopyGrid {
    HomotopyGrid::new(g, rows).unwrap()
}

#[test]
fn glued_squares_give_a_cone_map() {
    let c5 = Graph::cycle(5).unwrap();
    let source = Cone::identity_cycle(5, [0, 1, 2, 4]).unwrap();
    let target = Cone::identity_cycle(5, [0, 1, 2, 4]).unwrap();
    let rotate = GraphMap::new(c5.clone(), c5.clone(), vec![1, 2, 3, 4, 0]).unwrap();

    let t1 = grid(&c5, vec![vec![1, 2], vec![0, 1]]);
    let t2 = grid(&c5, vec![vec![3, 2], vec![2, 1]]);
    let u2 = grid(&c5, vec![vec![3, 4, 0], vec![2, 3, 4]]);
    let u1 = grid(&c5, vec![vec![1, 0], vec![0, 4]]);
    let whole = t1
        .hconcat(&t2.hreverse())
        .and_then(|g| g.hconcat(&u2))
        .and_then(|g| g.hconcat(&u1.hreverse()))
        .unwrap();
    assert_eq!(whole.row(0), &[1, 2, 3, 4, 0, 1]);
    assert_eq!(whole.row(1), &[0, 1, 2, 3, 4, 0]);

    let cm = ConeMap::new(rotate, target, whole);
    assert_eq!(verify_cone_map(&source, &cm), Verdict::Valid);
    assert_eq!(mark_columns(&source, &cm), Some([0, 1, 2, 4]));
}

#[test]
fn wrong_target_cycle_is_rejected() {
    let c5 = Graph::cycle(5).unwrap();
    let source = Cone::identity_cycle(5, [0, 1, 2, 4]).unwrap();
    let target = Cone::identity_cycle(5, [0, 1, 2, 4]).unwrap();
    let id = GraphMap::identity(&c5);
    // bottom row is not the target cycle
    let g = grid(&c5, vec![vec![0, 1, 2, 3, 4, 0], vec![0, 1, 2, 3, 4, 4]]);
    let cm = ConeMap::new(id, target, g);
    assert!(matches!(
        verify_cone_map(&source, &cm),
        Verdict::Invalid(ConeMapDefect::BottomRow)
    ));
}

// Every cone map found between small cones carries equal windings.
#[test]
fn found_cone_maps_preserve_winding() {
    let limits = Limits::default();
    let cases = [
        (Cone::identity_cycle(5, [0, 1, 2, 4]).unwrap(), Cone::identity_cycle(5, [0, 1, 2, 4]).unwrap()),
        (Cone::identity_cycle(5, [0, 1, 2, 4]).unwrap(), Cone::identity_cycle(5, [0, 1, 3, 4]).unwrap()),
        (Cone::identity_cycle(6, [0, 1, 3, 5]).unwrap(), Cone::identity_cycle(6, [0, 2, 3, 5]).unwrap()),
        (Cone::identity_cycle(5, [0, 1, 2, 3]).unwrap(), Cone::identity_cycle(5, [0, 0, 0, 0]).unwrap()),
    ];
    let mut seen = 0;
    for (source, target) in &cases {
        let target_winding = winding_number(target.cycle()).unwrap().turns();
        for cm in search_cone_maps(source, target, 4, 8, &limits).unwrap() {
            assert_eq!(verify_cone_map(source, &cm), Verdict::Valid);
            let image = source.cycle().map(cm.map()).unwrap();
            assert_eq!(winding_number(&image).unwrap().turns(), target_winding);
            seen += 1;
        }
    }
    eprintln!("{seen} cone maps checked");
    assert!(seen > 0, "the cases should contain cone maps");
}

// A row one step from `prev`, each cell drawn from what its neighbours allow.
fn random_next_row(g: &Graph, prev: &[usize], rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut row: Vec<usize> = Vec::with_capacity(prev.len());
    for &above in prev {
        let options: Vec<usize> = g
            .closed_neighborhood(above)
            .iter()
            .copied()
            .filter(|&x| row.last().is_none_or(|&left| g.near(left, x)))
            .collect();
        row.push(options[rng.gen_range(0..options.len())]);
    }
    row
}

// Random single-cell changes to valid cone maps into the obstruction cone's
// relatives never produce a cone map the certificate would rule out.
#[test]
fn perturbations_never_beat_the_certificate() {
    let limits = Limits::default();
    let source = Cone::identity_cycle(5, [0, 1, 2, 3]).unwrap();
    let target = obstruction_cone(&source);
    assert!(certify_no_cone_map(&source, &limits).unwrap().is_certified());

    let homs = enumerate_homomorphisms(source.apex(), target.apex(), &limits).unwrap();
    let n = target.apex().num_vertices();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20_000 {
        let f = homs[rng.gen_range(0..homs.len())].clone();
        let height = rng.gen_range(2..6);
        let width = rng.gen_range(6..10);
        let top = source.cycle().map(&f).unwrap().padded(width);
        let bottom = target.cycle().padded(width);
        let mut cells = vec![top];
        while cells.len() + 1 < height {
            cells.push(random_next_row(target.apex(), cells.last().unwrap(), &mut rng));
        }
        cells.push(bottom);
        for _ in 0..rng.gen_range(0..3) {
            let (r, c) = (rng.gen_range(0..height), rng.gen_range(0..width));
            cells[r][c] = rng.gen_range(0..n);
        }
        let Ok(g) = HomotopyGrid::unchecked(target.apex(), cells) else {
            continue;
        };
        let cm = ConeMap::new(f, target.clone(), g);
        assert!(!verify_cone_map(&source, &cm).is_valid());
    }
}
