use super::{Spectrum, C64};

/// A group of eigenvalues closer than the clustering tolerance, linked
/// transitively.
#[derive(Debug, Clone, PartialEq)]
pub struct Cluster {
    /// Arithmetic mean of the members.
    pub value: C64,
    pub multiplicity: usize,
    /// Indices into the spectrum, ascending.
    pub members: Vec<usize>,
}

pub fn cluster_eigenvalues(eig: &Spectrum, tol: f64) -> Vec<Cluster> {
    cluster_values(eig.values(), tol)
}

/// Clusters ordered by their smallest member index.
pub fn cluster_values(values: &[C64], tol: f64) -> Vec<Cluster> {
    let n = values.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (values[i] - values[j]).norm() < tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = clusters.len();
            clusters.push(Cluster { value: C64::new(0.0, 0.0), multiplicity: 0, members: Vec::new() });
        }
        clusters[slot[root]].members.push(i);
    }
    for cl in &mut clusters {
        cl.multiplicity = cl.members.len();
        cl.value = cl.members.iter().map(|&i| values[i]).sum::<C64>() / cl.multiplicity as f64;
    }
    clusters
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::pauli;
    use crate::matcore::{c, diag, normal_eigendecomposition, ToleranceConfig};
    use proptest::prelude::*;

    #[test]
    fn near_equal_values_merge() {
        let cl = cluster_values(&[c(1.0, 0.0), c(1.0 + 1e-12, 0.0), c(2.0, 0.0)], 1e-8);
        assert_eq!(cl.len(), 2);
        assert_eq!(cl[0].multiplicity, 2);
        assert!((cl[0].value - c(1.0, 0.0)).norm() < 1e-11);
        assert_eq!(cl[1].members, vec![2]);
    }

    #[test]
    fn quarter_turns_are_singletons() {
        let u = diag(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]);
        let s = normal_eigendecomposition(&u, &ToleranceConfig::default()).unwrap();
        let cl = cluster_eigenvalues(&s, 1e-8);
        assert_eq!(cl.len(), 4);
        assert!(cl.iter().all(|x| x.multiplicity == 1));
    }

    #[test]
    fn zz_has_two_doubles() {
        let s = normal_eigendecomposition(&pauli::zz(), &ToleranceConfig::default()).unwrap();
        let cl = cluster_eigenvalues(&s, 1e-8);
        assert_eq!(cl.iter().map(|x| x.multiplicity).collect::<Vec<_>>(), vec![2, 2]);
    }

    #[test]
    fn chains_close_transitively() {
        let cl = cluster_values(&[c(0.0, 0.0), c(0.6e-8, 0.0), c(1.2e-8, 0.0)], 1e-8);
        assert_eq!(cl.len(), 1);
    }

    proptest! {
        #[test]
        fn clustering_ignores_input_order(
            raw in proptest::collection::vec((0usize..5, -1e-10f64..1e-10), 1..9),
            rot in 0usize..9,
        ) {
            let values: Vec<C64> = raw.iter().map(|&(k, jitter)| c(k as f64 + jitter, 0.0)).collect();
            let mut shuffled = values.clone();
            let len = shuffled.len();
            shuffled.rotate_left(rot % len);
            shuffled.reverse();
            let summary = |v: &[C64]| {
                let mut s: Vec<(i64, usize)> = cluster_values(v, 1e-8)
                    .iter()
                    .map(|cl| ((cl.value.re * 1e6).round() as i64, cl.multiplicity))
                    .collect();
                s.sort();
                s
            };
            prop_assert_eq!(summary(&values), summary(&shuffled));
            prop_assert_eq!(cluster_values(&values, 1e-8).iter().map(|cl| cl.multiplicity).sum::<usize>(), len);
        }
    }
}
