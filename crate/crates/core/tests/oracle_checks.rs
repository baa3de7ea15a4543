use scarsim_core::operators::{
    build_deformed_pxp_first_order, build_full_pxp, build_global_squeeze_generator, build_local_squeeze_generator,
    build_pxp, SqueezeTarget,
};
use scarsim_core::oracle::{brute_force_basis, dense_full_pxp, dense_pxz_perturbation};
use scarsim_core::{BipartiteGraph, ConstrainedBasis, Partition, SparseOperator, C};

fn irregular() -> BipartiteGraph {
    let partition = (0..10).map(|v| if v % 2 == 0 { Partition::A } else { Partition::B }).collect();
    let edges = vec![(0, 1), (0, 3), (0, 9), (2, 3), (4, 5), (4, 1), (6, 7), (8, 9), (8, 5), (2, 7), (6, 1)];
    BipartiteGraph::custom(partition, edges).unwrap()
}

fn dense_of(op: &SparseOperator<f64>) -> Vec<C<f64>> {
    let n = op.dim();
    let mut out = vec![C::new(0.0, 0.0); n * n];
    for (r, c, v) in op.entries().unwrap() {
        out[r * n + c] += v;
    }
    out
}

#[test]
fn bases_match_brute_force() {
    let mut graphs = vec![BipartiteGraph::torus(4, 4).unwrap(), irregular()];
    graphs.extend((1..=10).map(|s| BipartiteGraph::complete_bipartite(s).unwrap()));
    for g in graphs {
        let fast = ConstrainedBasis::new(&g).unwrap();
        assert_eq!(fast.configs(), brute_force_basis(&g).unwrap().configs());
    }
}

#[test]
fn constrained_pxp_is_the_restricted_dense_operator() {
    for g in [BipartiteGraph::ring(10).unwrap(), irregular(), BipartiteGraph::complete_bipartite(5).unwrap()] {
        let basis = ConstrainedBasis::new(&g).unwrap();
        let h = dense_of(&build_pxp(&g, &basis, 1.7).unwrap());
        let oracle = dense_full_pxp(&g, 1.7).unwrap();
        let d = basis.dim();
        for (r, &cr) in basis.configs().iter().enumerate() {
            for (c, &cc) in basis.configs().iter().enumerate() {
                assert_eq!(h[r * d + c], oracle.get(cr as usize, cc as usize), "graph {:?}", g.kind());
            }
        }
    }
}

#[test]
fn full_space_pxp_matches_dense() {
    let g = BipartiteGraph::ring(8).unwrap();
    let h = dense_of(&build_full_pxp(&g, 1.0).unwrap());
    let oracle = dense_full_pxp(&g, 1.0).unwrap();
    for r in 0..256 {
        for c in 0..256 {
            assert_eq!(h[r * 256 + c], oracle.get(r, c));
        }
    }
}

#[test]
fn deformation_is_pxp_minus_pxz() {
    let chi = 0.1;
    for n in [8, 10] {
        let g = BipartiteGraph::ring(n).unwrap();
        let basis = ConstrainedBasis::new(&g).unwrap();
        let d = basis.dim();
        let deformed = dense_of(&build_deformed_pxp_first_order(&g, &basis, 1.0, chi).unwrap());
        let plain = dense_of(&build_pxp(&g, &basis, 1.0).unwrap());
        let v = dense_pxz_perturbation(&g).unwrap();
        for (r, &cr) in basis.configs().iter().enumerate() {
            for (c, &cc) in basis.configs().iter().enumerate() {
                let expect = plain[r * d + c] - v.get(cr as usize, cc as usize) * (chi / 2.0);
                assert!((deformed[r * d + c] - expect).norm() < 1e-15);
            }
        }
    }
}

/// Dense `sigma^+_j` on `n` sites, with `sigma^+|0> = |1>`.
fn sigma_plus(n: usize, j: usize) -> Vec<f64> {
    let dim = 1 << n;
    let mut m = vec![0.0; dim * dim];
    for c in 0..dim {
        if c >> j & 1 == 0 {
            m[(c | 1 << j) * dim + c] = 1.0;
        }
    }
    m
}

fn matmul(a: &[f64], b: &[f64], dim: usize) -> Vec<f64> {
    let mut out = vec![0.0; dim * dim];
    for i in 0..dim {
        for k in 0..dim {
            let x = a[i * dim + k];
            if x != 0.0 {
                for j in 0..dim {
                    out[i * dim + j] += x * b[k * dim + j];
                }
            }
        }
    }
    out
}

/// `(chi/2)(S^2 - (S^dag)^2)` from a dense raising operator `S`.
fn squeeze_from(s: &[f64], chi: f64, dim: usize) -> Vec<f64> {
    let s2 = matmul(s, s, dim);
    (0..dim * dim).map(|i| chi / 2.0 * (s2[i] - s2[(i % dim) * dim + i / dim])).collect()
}

fn assert_generator_eq(op: &SparseOperator<f64>, dense: &[f64]) {
    let got = dense_of(op);
    for (g, e) in got.iter().zip(dense) {
        assert!((g.re - e).abs() < 1e-14 && g.im == 0.0);
    }
}

#[test]
fn global_squeeze_matches_collective_spin() {
    let chi = 0.37;
    for g in [BipartiteGraph::ring(8).unwrap(), irregular()] {
        let n = g.n_vertices();
        let dim = 1 << n;
        let mut s = vec![0.0; dim * dim];
        for j in g.vertices_in(Partition::A) {
            s.iter_mut().zip(sigma_plus(n, j)).for_each(|(x, y)| *x += y);
        }
        let op = build_global_squeeze_generator(SqueezeTarget::Lattice(&g), chi).unwrap();
        assert_generator_eq(&op, &squeeze_from(&s, chi, dim));
    }
}

#[test]
fn local_squeeze_matches_neighbour_spins() {
    let chi = 0.6;
    for g in [BipartiteGraph::ring(8).unwrap(), irregular()] {
        let n = g.n_vertices();
        let dim = 1 << n;
        let nbrs = g.neighbors();
        let mut total = vec![0.0; dim * dim];
        for i in g.vertices_in(Partition::B) {
            let mut s = vec![0.0; dim * dim];
            for &j in &nbrs[i] {
                s.iter_mut().zip(sigma_plus(n, j)).for_each(|(x, y)| *x += 0.5 * y);
            }
            total.iter_mut().zip(squeeze_from(&s, chi, dim)).for_each(|(x, y)| *x += y);
        }
        let op = build_local_squeeze_generator(&g, chi).unwrap();
        assert_generator_eq(&op, &total);
    }
}
