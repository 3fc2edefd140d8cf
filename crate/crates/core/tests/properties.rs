//! Randomized structural properties: exact-measure conservation under
//! refinement, and successor/predecessor inversion on random towers.

use num::rational::BigRational;
use num::{BigInt, One};
use proptest::prelude::*;

use pascal_bratteli::diagram::{Diagram, Vertex};
use pascal_bratteli::measures::{bernoulli_cylinder, BernoulliParam};
use pascal_bratteli::orders::{ExtremeKind, OrderAssignment};
use pascal_bratteli::vershik::{predecessor, successor, PredecessorResult, SuccessorResult};

fn bernoulli_params() -> impl Strategy<Value = BernoulliParam> {
    (2u32..=60).prop_flat_map(|den| {
        (1u32..den).prop_map(move |num| {
            BernoulliParam::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
                .expect("0 < num/den < 1")
        })
    })
}

proptest! {
    /// A cylinder's mass is exactly the sum of its two refinements, and each
    /// level's masses sum to exactly 1, for any parameter and vertex.
    #[test]
    fn bernoulli_mass_is_conserved(param in bernoulli_params(), i in 0i64..12, j in 0i64..12) {
        let d = Diagram::pascal(25);
        let v = Vertex::pascal(i, j);
        let mass = bernoulli_cylinder(&param, v);
        let refined: BigRational = d
            .children(v)
            .unwrap()
            .iter()
            .map(|e| bernoulli_cylinder(&param, e.range))
            .sum();
        prop_assert_eq!(&refined, &mass);

        let level = v.level;
        let level_total: BigRational = d
            .vertices_at_level(level)
            .map(|w| {
                BigRational::from_integer(BigInt::from(d.path_count(w).unwrap()))
                    * bernoulli_cylinder(&param, w)
            })
            .sum();
        prop_assert_eq!(level_total, BigRational::one());
    }

    /// Walking forward with the successor map and back with the predecessor
    /// map returns to the minimal path, for any vertex and step count.
    #[test]
    fn successor_predecessor_invert(i in 0i64..6, j in 0i64..6, steps in 0usize..20) {
        let d = Diagram::pascal(12);
        let order = OrderAssignment::canonical(&d);
        let start = order
            .extreme_finite_path(Vertex::pascal(i, j), ExtremeKind::Min)
            .unwrap();
        let mut forward = vec![start.clone()];
        let mut cur = start;
        for _ in 0..steps {
            match successor(&order, &cur).unwrap() {
                SuccessorResult::Next(next) => {
                    forward.push(next.clone());
                    cur = next;
                }
                SuccessorResult::MaximalAtDepth => break,
            }
        }
        for _ in 0..forward.len() - 1 {
            match predecessor(&order, &cur).unwrap() {
                PredecessorResult::Prev(prev) => cur = prev,
                PredecessorResult::MinimalAtDepth => {
                    prop_assert!(false, "hit the minimal path too early");
                    unreachable!()
                }
            }
        }
        prop_assert_eq!(&cur, &forward[0]);
    }
}
