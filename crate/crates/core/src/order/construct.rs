//! Frames built from posets: down-set frames and free frames on
//! meet-semilattices.

use super::frame::Frame;
use super::poset::Poset;
use crate::error::{Error, Result};
use crate::DEFAULT_BUDGET;

/// A finite meet-semilattice with a top element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeetSemilattice {
    poset: Poset,
    meet: Vec<usize>,
    top: usize,
}

impl MeetSemilattice {
    pub fn from_poset(poset: Poset) -> Result<Self> {
        let n = poset.size();
        let top = (0..n)
            .find(|&t| poset.down(t).count_ones(..) == n)
            .ok_or(Error::NotALattice {
                a: 0,
                b: 0,
                missing: "greatest element",
            })?;
        let mut meet = vec![0; n * n];
        for a in 0..n {
            for b in 0..n {
                let lower: Vec<usize> = (0..n).filter(|&c| poset.leq(c, a) && poset.leq(c, b)).collect();
                let glb = lower
                    .iter()
                    .copied()
                    .find(|&c| lower.iter().all(|&d| poset.leq(d, c)))
                    .ok_or(Error::NotALattice { a, b, missing: "meet" })?;
                meet[a * n + b] = glb;
            }
        }
        Ok(MeetSemilattice { poset, meet, top })
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn size(&self) -> usize {
        self.poset.size()
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size() + b]
    }

    pub fn top(&self) -> usize {
        self.top
    }
}

/// Down-sets of `poset` ordered by inclusion, listed by increasing bit value.
pub fn downset_frame(poset: &Poset) -> Result<Frame> {
    downset_frame_with_budget(poset, DEFAULT_BUDGET)
}

pub fn downset_frame_with_budget(poset: &Poset, budget: u64) -> Result<Frame> {
    // The down-set count is bounded by 2^n; only enumerate when that bound,
    // or the actual count, fits.
    if poset.size() >= 64 || (1u64 << poset.size()) > budget {
        let count = count_downsets(poset, budget);
        if count > budget {
            return Err(Error::SizeBudgetExceeded {
                predicted: count,
                budget,
            });
        }
    }
    let sets = poset.downsets();
    let order = Poset::from_relation(sets.len(), |i, j| sets[i].is_subset(&sets[j]))?;
    Frame::from_poset(order)
}

/// Counts down-sets, stopping once the count passes `cap`.
fn count_downsets(poset: &Poset, cap: u64) -> u64 {
    fn go(poset: &Poset, order: &[usize], k: usize, chosen: &mut Vec<bool>, cap: u64) -> u64 {
        if k == order.len() {
            return 1;
        }
        let a = order[k];
        let mut total = go(poset, order, k + 1, chosen, cap);
        if total > cap {
            return total;
        }
        if poset.down(a).ones().all(|b| b == a || chosen[b]) {
            chosen[a] = true;
            total += go(poset, order, k + 1, chosen, cap);
            chosen[a] = false;
        }
        total
    }
    let order = poset.linear_extension().to_vec();
    go(poset, &order, 0, &mut vec![false; poset.size()], cap)
}

/// Finite subsets of `k` generators under reverse inclusion; element `i` is
/// the subset with bit mask `i`, so `0` (the empty set) is the top.
pub fn free_meet_semilattice(k: usize) -> Result<MeetSemilattice> {
    if k > 6 {
        return Err(Error::SizeBudgetExceeded {
            predicted: 1u64 << k.min(63),
            budget: 64,
        });
    }
    let n = 1usize << k;
    let poset = Poset::from_relation(n, |s, t| s & t == t)?;
    MeetSemilattice::from_poset(poset)
}

/// The free frame on a meet-semilattice: its frame of down-sets.
pub fn free_frame_on_semilattice(s: &MeetSemilattice) -> Result<Frame> {
    downset_frame(s.poset())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn antichain_downsets_form_square() {
        let f = downset_frame(&Poset::antichain(2)).unwrap();
        assert_eq!(f.size(), 4);
        assert!(f.is_boolean());
    }

    #[test]
    fn free_frame_on_one_generator_is_three_chain() {
        let s = free_meet_semilattice(1).unwrap();
        assert_eq!(s.size(), 2);
        assert_eq!(s.top(), 0);
        let f = free_frame_on_semilattice(&s).unwrap();
        assert_eq!(f.size(), 3);
        assert_eq!(f.poset().covers().len(), 2);
    }

    #[test]
    fn free_frame_on_two_generators() {
        let s = free_meet_semilattice(2).unwrap();
        assert_eq!(s.meet(1, 2), 3);
        // down-sets of the four-element Boolean poset
        assert_eq!(free_frame_on_semilattice(&s).unwrap().size(), 6);
    }

    #[test]
    fn empty_poset_gives_trivial_frame() {
        let f = downset_frame(&Poset::antichain(0)).unwrap();
        assert_eq!(f.size(), 1);
        assert_eq!(f.bottom(), f.top());
    }

    #[test]
    fn budget_enforced() {
        let err = downset_frame_with_budget(&Poset::antichain(8), 100).unwrap_err();
        assert!(matches!(err, Error::SizeBudgetExceeded { budget: 100, .. }));
        assert_eq!(count_downsets(&Poset::chain(5), 1000), 6);
    }
}
