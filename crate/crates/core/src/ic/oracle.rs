//! Brute-force `IC` for small domains, independent of the solver: every
//! down-set is enumerated directly and a breadth-first search over unions
//! finds the fewest injective down-sets covering the domain.

use crate::space::SpaceMap;

use super::IcValue;

/// Largest domain the oracle accepts.
pub const MAX_POINTS: usize = 20;

/// `None` when the domain is too large.
pub fn brute_force_ic(f: &SpaceMap) -> Option<IcValue> {
    let space = f.domain();
    let n = space.len();
    if n > MAX_POINTS {
        return None;
    }
    if n == 0 {
        return Some(IcValue::Finite(1));
    }
    let down: Vec<u32> = (0..n)
        .map(|y| (0..n).filter(|&x| space.leq(x, y)).fold(0u32, |m, x| m | 1 << x))
        .collect();
    let mut injective_opens = Vec::new();
    for mask in 1u32..(1u32 << n) {
        let open = (0..n).all(|y| mask >> y & 1 == 0 || down[y] & !mask == 0);
        if !open {
            continue;
        }
        let mut images: Vec<usize> = (0..n).filter(|&x| mask >> x & 1 == 1).map(|x| f.apply(x)).collect();
        let len = images.len();
        images.sort_unstable();
        images.dedup();
        if images.len() == len {
            injective_opens.push(mask);
        }
    }
    let full = (1u32 << n) - 1;
    let mut dist = vec![u8::MAX; 1 << n];
    dist[0] = 0;
    let mut frontier = vec![0u32];
    let mut steps = 0u8;
    while !frontier.is_empty() {
        steps += 1;
        let mut next = Vec::new();
        for &m in &frontier {
            for &u in &injective_opens {
                let v = m | u;
                if dist[v as usize] == u8::MAX {
                    dist[v as usize] = steps;
                    if v == full {
                        return Some(IcValue::Finite(steps as usize));
                    }
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    Some(IcValue::Infinite)
}
