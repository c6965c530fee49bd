//! Exhaustive combinatorial enumerators: combinations, set partitions and
//! naturally labeled posets.

/// Visits every k-subset of `0..n` in lexicographic order. The visitor
/// returns `true` to stop early; the function reports whether it stopped.
pub fn for_each_combination<F>(n: usize, k: usize, mut visit: F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    if k > n {
        return false;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if visit(&idx) {
            return true;
        }
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return false;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All set partitions of `0..n` as restricted growth strings: `rgs[i]` is
/// the block of element `i`, blocks numbered by first occurrence.
pub fn set_partitions(n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for b in 0..=max + 1 {
            cur[i] = b;
            rec(i + 1, max.max(b), cur, out);
        }
    }
    if n == 0 {
        out.push(Vec::new());
        return out;
    }
    // element 0 is always in block 0
    rec(1, 0, &mut cur, &mut out);
    out
}

/// Bell numbers by the triangle recurrence, for cross-checking partition counts.
pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            let v = next.last().unwrap() + x;
            next.push(v);
        }
        row = next;
    }
    row[0]
}

/// Strict-order matrices of every naturally labeled poset on `n` points
/// (`lt[i][j]` implies `i < j`). Each poset arises exactly once, by adding
/// the points in index order with an arbitrary down-set as strict lower set.
pub fn naturally_labeled_posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let mut out = Vec::new();
    let mut lt = vec![vec![false; n]; n];
    fn rec(k: usize, n: usize, lt: &mut Vec<Vec<bool>>, out: &mut Vec<Vec<Vec<bool>>>) {
        if k == n {
            out.push(lt.clone());
            return;
        }
        // candidate strict lower sets of point k: down-sets of 0..k
        for mask in 0u64..(1u64 << k) {
            let closed = (0..k).all(|j| {
                mask & (1 << j) == 0 || (0..j).all(|i| !lt[i][j] || mask & (1 << i) != 0)
            });
            if !closed {
                continue;
            }
            for i in 0..k {
                lt[i][k] = mask & (1 << i) != 0;
            }
            rec(k + 1, n, lt, out);
        }
        for row in lt.iter_mut().take(k) {
            row[k] = false;
        }
    }
    rec(0, n, &mut lt, &mut out);
    out
}
