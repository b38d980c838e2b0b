//! Cross-check of the kernel-based divisible-class search against a plain
//! enumeration of 8-element curve subsets.

use k3pencil::catalog::{CaseId, Catalog};
use k3pencil::lattice::{search_divisible_classes, IntLattice};
use num_traits::ToPrimitive;

/// All 0/1 vectors `c` of support 8 with `G c ≡ 0 (mod 2)` and `cᵀGc ≡ 0 (mod 8)`,
/// i.e. `c/2` is integral against every curve and has even square.
fn brute_force_even_eights(l: &IntLattice) -> Vec<Vec<i64>> {
    let r = l.rank();
    let g: Vec<Vec<i64>> =
        (0..r).map(|i| (0..r).map(|j| l.gram().get(i, j).to_i64().unwrap()).collect()).collect();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..8).collect();
    loop {
        let integral = (0..r).all(|i| idx.iter().map(|&j| g[i][j]).sum::<i64>() % 2 == 0);
        if integral {
            let sq: i64 = idx.iter().flat_map(|&a| idx.iter().map(move |&b| (a, b))).map(|(a, b)| g[a][b]).sum();
            if sq % 8 == 0 {
                let mut c = vec![0; r];
                for &j in &idx {
                    c[j] = 1;
                }
                out.push(c);
            }
        }
        // next 8-subset in lexicographic order
        let Some(k) = (0..8).rev().find(|&k| idx[k] < r - 8 + k) else { break };
        idx[k] += 1;
        for m in k + 1..8 {
            idx[m] = idx[m - 1] + 1;
        }
    }
    out.sort();
    out
}

fn curve_lattice(n: u32) -> IntLattice {
    let catalog = Catalog::bundled().unwrap();
    k3pencil::lattice::gram_from_config(&catalog.generic_config(n).unwrap())
}

#[test]
fn search_matches_enumeration_for_p2() {
    for n in [6, 8, 12] {
        let l = curve_lattice(n);
        let mut searched = search_divisible_classes(&l, 2);
        searched.sort();
        assert_eq!(searched, brute_force_even_eights(&l), "n = {n}");
    }
}

#[test]
fn stored_glue_is_among_the_candidates() {
    let catalog = Catalog::bundled().unwrap();
    for (n, p) in [(6, 3), (8, 2)] {
        let l = curve_lattice(n);
        let found = search_divisible_classes(&l, p);
        for glue in catalog.glue_classes(CaseId::generic(n)).unwrap() {
            let c = glue.coefficients(&l).unwrap();
            let neg: Vec<i64> = c.iter().map(|x| -x).collect();
            assert!(found.contains(&c) || found.contains(&neg), "n = {n}: {glue} not found");
        }
    }
}

#[test]
fn no_divisible_classes_for_degree_twelve() {
    let l = curve_lattice(12);
    assert!(search_divisible_classes(&l, 2).is_empty());
    assert!(search_divisible_classes(&l, 3).is_empty());
}
