use crate::error::{Error, Result};
use crate::model::{utility_vector, Allocation, Instance, UtilityKind, UtilityVector};

/// Upper bound on the number of allocations enumerated.
const MAX_ALLOCATIONS: u128 = 20_000_000;

/// Leximin-best allocation found by trying every way of giving each
/// resource to some agent or to nobody. Ties keep the first allocation in
/// enumeration order.
pub fn brute_force_leximin(instance: &Instance) -> Result<(Allocation, UtilityVector)> {
    instance.require_kind(UtilityKind::MaxAtomic)?;
    let n = instance.num_agents();
    let m = instance.num_resources();
    let total = (n as u128 + 1).checked_pow(m as u32).unwrap_or(u128::MAX);
    if total > MAX_ALLOCATIONS {
        return Err(Error::TooLarge(format!(
            "{} agents and {} resources give {}^{} allocations",
            n,
            m,
            n + 1,
            m
        )));
    }

    // digit value n encodes "unallocated"
    let mut digits = vec![0usize; m];
    let decode = |digits: &[usize]| {
        Allocation::from_owners(digits.iter().map(|&d| (d < n).then_some(d)).collect())
    };

    let first = decode(&digits);
    let mut best_vec = utility_vector(instance, &first)?;
    let mut best_sorted = best_vec.sorted();
    let mut best = first;

    loop {
        let mut k = 0;
        while k < m && digits[k] == n {
            digits[k] = 0;
            k += 1;
        }
        if k == m {
            break;
        }
        digits[k] += 1;
        let alloc = decode(&digits);
        let vec = utility_vector(instance, &alloc)?;
        let sorted = vec.sorted();
        if sorted > best_sorted {
            best_sorted = sorted;
            best_vec = vec;
            best = alloc;
        }
    }
    Ok((best, best_vec))
}
