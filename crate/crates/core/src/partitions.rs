//! Integer partitions: the index set of the PBW basis in each degree.

/// All partitions of `d` as non-increasing part lists, in reverse lexicographic
/// order (`[d]` first).
pub fn partitions(d: u32) -> Vec<Vec<u32>> {
    fn go(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            go(rest - part, part, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// `p(0), ..., p(d)` by the usual dynamic program over part sizes.
pub fn partition_counts(d: u32) -> Vec<u64> {
    let n = d as usize;
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for m in part..=n {
            p[m] += p[m - part];
        }
    }
    p
}
