use proptest::prelude::*;
use zerosum::group::enumerate_groups;
use zerosum::partition::*;
use zerosum::{verify_partition, AbelianGroup, Element};

/// Does `ground` contain disjoint zero-sum subsets of the given sizes?
/// Plain subset recursion over bitmasks.
fn oracle(group: &AbelianGroup, ground: &[Element], sizes: &[usize]) -> bool {
    fn rec(group: &AbelianGroup, ground: &[Element], sizes: &[usize], used: u32) -> bool {
        let Some((&r, rest)) = sizes.split_first() else {
            return true;
        };
        let free: Vec<usize> = (0..ground.len()).filter(|&i| used >> i & 1 == 0).collect();
        subsets(&free, r).into_iter().any(|pick| {
            let sum = group.sum_of(pick.iter().map(|&i| ground[i]));
            sum.is_zero()
                && rec(
                    group,
                    ground,
                    rest,
                    pick.iter().fold(used, |m, &i| m | 1 << i),
                )
        })
    }
    rec(group, ground, sizes, 0)
}

fn subsets(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = subsets(&items[1..], k);
    for mut s in subsets(&items[1..], k - 1) {
        s.insert(0, items[0]);
        out.push(s);
    }
    out
}

fn multisets(total: usize, min: usize, max_parts: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for t in 1..=total {
        for p in integer_partitions(t, min) {
            if p.len() <= max_parts {
                out.push(p);
            }
        }
    }
    out
}

#[test]
fn agrees_with_brute_force_on_small_groups() {
    let mut checked = 0;
    for spec in enumerate_groups(10) {
        let g = AbelianGroup::from_spec(&spec).unwrap();
        for (ground, members) in [
            (Ground::NonZero, g.elements().skip(1).collect::<Vec<_>>()),
            (Ground::All, g.elements().collect()),
        ] {
            for sizes in multisets(members.len(), 1, 4) {
                let seq = SizeSequence::new(sizes.clone()).unwrap();
                let expected = oracle(&g, &members, &sizes);
                match zero_sum_partition(&g, &ground, &seq, &Budget::default()) {
                    Ok(s) => {
                        assert!(
                            expected,
                            "{g} {sizes:?}: solver found a partition the oracle missed"
                        );
                        verify_partition(&g, &ground, &sizes, &s.partition).unwrap();
                    }
                    Err(PartitionError::NoPartition(_)) => {
                        assert!(!expected, "{g} {ground:?} {sizes:?}: false infeasibility")
                    }
                    Err(e) => panic!("{g} {sizes:?}: {e}"),
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 500);
}

#[test]
fn subset_ground() {
    let g = AbelianGroup::new(&[3, 3]).unwrap();
    let members: Vec<Element> = g.elements().filter(|e| e.index() % 2 == 1).collect();
    for sizes in multisets(members.len(), 2, 3) {
        let seq = SizeSequence::new(sizes.clone()).unwrap();
        let ground = Ground::Subset(members.clone());
        let got = zero_sum_partition(&g, &ground, &seq, &Budget::default());
        assert_eq!(got.is_ok(), oracle(&g, &members, &sizes), "{sizes:?}");
    }
}

#[test]
fn feasibility_agreement_up_to_order_16() {
    for spec in enumerate_groups(16) {
        let g = AbelianGroup::from_spec(&spec).unwrap();
        let n = g.order();
        if n < 3 {
            continue;
        }
        let feasible_group = n % 2 == 1 || g.involutions().len() == 3;
        for sizes in integer_partitions(n - 1, 2) {
            let seq = SizeSequence::new(sizes.clone()).unwrap();
            assert_eq!(feasible_zeng(&g, &seq), Ok(feasible_group));
            let r = zero_sum_partition(&g, &Ground::NonZero, &seq, &Budget::default());
            if feasible_group {
                assert!(r.is_ok(), "{g} {sizes:?}");
            } else if g.involutions().len() == 1 {
                assert_eq!(
                    r,
                    Err(PartitionError::NoPartition(Certificate::NonzeroTotal))
                );
            }
        }
    }
}

#[test]
fn large_parts_variant_matches_generic_solver() {
    for f in [
        &[2u64, 2, 4][..],
        &[2, 2, 2, 2],
        &[2, 8],
        &[4, 4],
        &[2, 2, 6],
        &[2, 2, 2, 3],
    ] {
        let g = AbelianGroup::new(f).unwrap();
        let n = g.order();
        for ground in [Ground::NonZero, Ground::All] {
            let total = if ground == Ground::All { n } else { n - 1 };
            for sizes in integer_partitions(total, 4) {
                let seq = SizeSequence::new(sizes.clone()).unwrap();
                if zero_sum_partition(&g, &ground, &seq, &Budget::default()).is_err() {
                    continue;
                }
                if sizes.iter().all(|&r| r == 4) && ground == Ground::NonZero {
                    continue;
                }
                let s = partition_large_parts(&g, &ground, &seq, &Budget::default())
                    .unwrap_or_else(|e| panic!("{g} {sizes:?}: {e}"));
                verify_partition(&g, &ground, &sizes, &s.partition).unwrap();
            }
        }
    }
}

#[test]
fn conjecture_holds_for_small_groups() {
    for spec in enumerate_groups(16) {
        let g = AbelianGroup::from_spec(&spec).unwrap();
        if g.involutions().len() <= 1 {
            assert!(check_conjecture(&g, &Budget::default()).is_err());
            continue;
        }
        let report = check_conjecture(&g, &Budget::default()).unwrap();
        assert_eq!(report.successes(), report.outcomes.len(), "{g}");
    }
}

proptest! {
    #[test]
    fn returned_partitions_verify(
        which in 0usize..6,
        raw in prop::collection::vec(2usize..7, 1..5),
        all in any::<bool>(),
    ) {
        let f: &[u64] = [&[11u64][..], &[3, 3], &[2, 6], &[13], &[4, 4], &[15]][which];
        let g = AbelianGroup::new(f).unwrap();
        let ground = if all { Ground::All } else { Ground::NonZero };
        let seq = SizeSequence::new(raw.clone()).unwrap();
        match zero_sum_partition(&g, &ground, &seq, &Budget::default()) {
            Ok(s) => prop_assert!(verify_partition(&g, &ground, &raw, &s.partition).is_ok()),
            Err(PartitionError::NoPartition(_)) => {}
            Err(e) => prop_assert!(false, "{e}"),
        }
    }

    #[test]
    fn output_order_follows_input_order(perm in Just(vec![2usize, 3, 4, 5]).prop_shuffle()) {
        let g = AbelianGroup::new(&[17]).unwrap();
        let seq = SizeSequence::new(perm.clone()).unwrap();
        let s = zero_sum_partition(&g, &Ground::NonZero, &seq, &Budget::default()).unwrap();
        let lens: Vec<usize> = s.partition.parts().iter().map(Vec::len).collect();
        prop_assert_eq!(lens, perm);
    }
}
