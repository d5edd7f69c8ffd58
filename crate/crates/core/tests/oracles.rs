use ahomotopy::{
    are_homotopic, count_homomorphisms, enumerate_homomorphisms, is_graph_map, ExponentialGraph, Graph,
    GraphMap, Limits, MapHomotopy, Vertex,
};
use petgraph::unionfind::UnionFind;

fn family() -> Vec<(String, Graph)> {
    let mut out: Vec<_> = (0..=3).map(|n| (format!("I{n}"), Graph::path(n))).collect();
    out.extend((3..=6).map(|n| (format!("C{n}"), Graph::cycle(n).unwrap())));
    out
}

// Every assignment in lexicographic order, kept if it is a graph map.
fn brute_force(src: &Graph, tgt: &Graph) -> Vec<Vec<Vertex>> {
    let n = src.num_vertices();
    let m = tgt.num_vertices();
    let total = m.pow(n as u32);
    let mut out = Vec::new();
    let mut a = vec![0; n];
    for code in 0..total {
        let mut c = code;
        for slot in a.iter_mut().rev() {
            *slot = c % m;
            c /= m;
        }
        if src.edges().iter().all(|&(u, v)| tgt.near(a[u], a[v])) {
            out.push(a.clone());
        }
    }
    out
}

#[test]
fn pruned_enumeration_matches_filtering() {
    let limits = Limits::default();
    for (fname, f) in family() {
        for (gname, g) in family() {
            let naive = brute_force(&f, &g);
            let pruned: Vec<_> = enumerate_homomorphisms(&f, &g, &limits)
                .unwrap()
                .into_iter()
                .map(|h| h.assignment().to_vec())
                .collect();
            assert_eq!(pruned, naive, "Hom({fname}, {gname})");
            assert_eq!(
                count_homomorphisms(&f, &g, &limits).unwrap(),
                naive.len() as u128,
                "count Hom({fname}, {gname})"
            );
            for a in naive.iter().take(20) {
                assert!(is_graph_map(&f, &g, a).unwrap());
            }
        }
    }
}

#[test]
fn homotopy_matches_exponential_components() {
    let limits = Limits::default();
    for (fname, f) in family() {
        for (gname, g) in family() {
            let exp = ExponentialGraph::new(&f, &g, &limits).unwrap();
            let mut uf = UnionFind::<usize>::new(exp.len());
            for &(u, v) in exp.graph().edges() {
                uf.union(u, v);
            }
            // a fixed spread of pairs keeps the BFS count modest
            let step = (exp.len() / 7).max(1);
            let picks: Vec<usize> = (0..exp.len()).step_by(step).collect();
            for &i in &picks {
                for &j in &picks {
                    let (a, b) = (exp.map(i), exp.map(j));
                    let same = uf.equiv(i, j);
                    match are_homotopic(&a, &b, &limits).unwrap() {
                        MapHomotopy::Yes(trace) => {
                            assert!(same, "{fname}->{gname}: {i} ~ {j} but in different components");
                            trace.validate().unwrap();
                            assert_eq!((trace.start(), trace.end()), (&a, &b));
                        }
                        MapHomotopy::No => {
                            assert!(!same, "{fname}->{gname}: {i} !~ {j} but in one component")
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn identity_components_of_cycles() {
    let limits = Limits::default();
    for n in 3..=6 {
        let c = Graph::cycle(n).unwrap();
        let exp = ExponentialGraph::new(&c, &c, &limits).unwrap();
        let mut uf = UnionFind::<usize>::new(exp.len());
        for &(u, v) in exp.graph().edges() {
            uf.union(u, v);
        }
        let id = exp.index_of(GraphMap::identity(&c).assignment()).unwrap();
        let k = exp.index_of(&vec![0; n]).unwrap();
        assert_eq!(uf.equiv(id, k), n <= 4, "C{n}");
    }
}
