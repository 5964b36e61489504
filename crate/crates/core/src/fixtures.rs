//! Small reference instances used by tests, docs and the CLI.

use crate::profile::{BallotEntry, ConditionalBallot, Profile};

/// The three co-author profile over `work`, `multiple`, `coauthor`, as
/// shipped in `examples/coauthors.json`.
pub const COAUTHORS_JSON: &str = include_str!("../examples/coauthors.json");

/// Issue order: work (0), multiple (1), coauthor (2).
pub fn coauthors() -> Profile {
    const T: bool = true;
    const F: bool = false;
    let v1 = ConditionalBallot::new(vec![
        BallotEntry::unconditional(0, &[T]),
        BallotEntry::conditional(1, &[0], &[(&[F], F), (&[T], T)]),
        BallotEntry::conditional(2, &[1], &[(&[T], F), (&[F], T)]),
    ])
    .with_name("v1");
    let v2 = ConditionalBallot::new(vec![
        BallotEntry::unconditional(0, &[F]),
        BallotEntry::unconditional(1, &[F, T]),
        BallotEntry::conditional(
            2,
            &[0, 1],
            &[(&[T, T], F), (&[F, T], F), (&[T, F], T), (&[F, F], F)],
        ),
    ])
    .with_name("v2");
    let v3 = ConditionalBallot::new(vec![
        BallotEntry::unconditional(0, &[T]),
        BallotEntry::unconditional(1, &[T]),
        BallotEntry::conditional(
            2,
            &[0, 1],
            &[
                (&[T, T], T),
                (&[T, T], F),
                (&[F, T], T),
                (&[F, T], F),
                (&[T, F], T),
                (&[T, F], F),
                (&[F, F], F),
            ],
        ),
    ])
    .with_name("v3");
    Profile::new(["work", "multiple", "coauthor"], vec![v1, v2, v3]).expect("static profile")
}

/// Two issues `x` (0) and `y` (1). Voter A approves `x = false` and, on `y`,
/// only `{x = false : y = false}`; voter B approves `x = true` and `y = false`
/// unconditionally. The optimum is `(false, false)` with cost 1.
pub fn pendant_pair() -> Profile {
    let a = ConditionalBallot::new(vec![
        BallotEntry::unconditional(0, &[false]),
        BallotEntry::conditional(1, &[0], &[(&[false], false)]),
    ])
    .with_name("A");
    let b = ConditionalBallot::new(vec![
        BallotEntry::unconditional(0, &[true]),
        BallotEntry::unconditional(1, &[false]),
    ])
    .with_name("B");
    Profile::new(["x", "y"], vec![a, b]).expect("static profile")
}
