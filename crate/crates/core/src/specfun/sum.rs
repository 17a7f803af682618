use rug::Float;

/// Terms per leaf block of the reduction tree.
pub const BLOCK: usize = 64;

/// Fixed-order sum: blocks of [`BLOCK`] terms summed left to right, block sums
/// combined pairwise by a balanced binary tree.
///
/// The association order depends only on `terms.len()`, so the result is
/// bit-identical however the terms were produced.
pub fn block_tree_sum(terms: &[Float], prec: u32) -> Float {
    let mut level: Vec<Float> = terms
        .chunks(BLOCK)
        .map(|chunk| {
            let mut acc = Float::new(prec);
            for t in chunk {
                acc += t;
            }
            acc
        })
        .collect();
    if level.is_empty() {
        return Float::new(prec);
    }
    while level.len() > 1 {
        level = level
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => Float::with_val(prec, a + b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    level.pop().expect("non-empty")
}
