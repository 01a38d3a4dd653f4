//! Brute-force reference computations, independent of the closed formulas
//! and closure algorithms used elsewhere.

use crate::order::Frame;

/// Largest frame for which all set partitions are scanned.
pub const MAX_ORACLE_SIZE: usize = 9;

/// Every equivalence relation on the frame compatible with `∧` and `∨`,
/// found by scanning all set partitions. Each is returned as its class-label
/// array in restricted-growth form (`label[0] = 0`, labels appear in order).
pub fn all_congruence_partitions(frame: &Frame) -> Vec<Vec<usize>> {
    let n = frame.size();
    assert!(n <= MAX_ORACLE_SIZE, "partition scan limited to {MAX_ORACLE_SIZE} elements");
    let mut out = Vec::new();
    let mut label = vec![0usize; n];
    fn go(frame: &Frame, k: usize, used: usize, label: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let n = frame.size();
        if k == n {
            if is_compatible(frame, label) {
                out.push(label.clone());
            }
            return;
        }
        for l in 0..=used {
            label[k] = l;
            go(frame, k + 1, used.max(l + 1), label, out);
        }
    }
    if n > 0 {
        go(frame, 1, 1, &mut label, &mut out);
    }
    out
}

/// Is the partition given by `label` a lattice congruence?
pub fn is_compatible(frame: &Frame, label: &[usize]) -> bool {
    let n = frame.size();
    for x in 0..n {
        for y in x + 1..n {
            if label[x] != label[y] {
                continue;
            }
            for z in 0..n {
                if label[frame.meet(x, z)] != label[frame.meet(y, z)]
                    || label[frame.join(x, z)] != label[frame.join(y, z)]
                {
                    return false;
                }
            }
        }
    }
    true
}

/// The least congruence containing `pairs`, as the smallest compatible
/// partition that relates each pair.
pub fn least_congruence_containing(frame: &Frame, pairs: &[(usize, usize)]) -> Vec<usize> {
    least_containing_in(&all_congruence_partitions(frame), pairs)
}

/// As [`least_congruence_containing`], choosing among precomputed
/// congruence partitions.
pub fn least_containing_in(partitions: &[Vec<usize>], pairs: &[(usize, usize)]) -> Vec<usize> {
    let candidates: Vec<&Vec<usize>> = partitions
        .iter()
        .filter(|l| pairs.iter().all(|&(a, b)| l[a] == l[b]))
        .collect();
    let refines = |p: &[usize], q: &[usize]| {
        (0..p.len()).all(|x| (0..p.len()).all(|y| p[x] != p[y] || q[x] == q[y]))
    };
    candidates
        .iter()
        .find(|p| candidates.iter().all(|q| refines(p, q)))
        .map(|p| p.to_vec())
        .expect("compatible partitions containing a relation form a complete lattice")
}

/// Restricted-growth labels of a relation given as a class key per element.
pub fn labels_of<K: PartialEq>(keys: &[K]) -> Vec<usize> {
    let mut reps: Vec<&K> = Vec::new();
    keys.iter()
        .map(|k| match reps.iter().position(|r| *r == k) {
            Some(i) => i,
            None => {
                reps.push(k);
                reps.len() - 1
            }
        })
        .collect()
}
