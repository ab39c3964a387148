//! Global (Needleman–Wunsch) sequence alignment with a configurable scheme.

use serde::Serialize;

use crate::scalar::Scalar;

/// Column scores. `first_only` scores a column holding an item of the first
/// sequence against a gap, `second_only` the reverse. Without a
/// `substitution` score, unequal items can never share a column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlignScheme<T> {
    pub matched: T,
    pub substitution: Option<T>,
    pub first_only: T,
    pub second_only: T,
}

impl<T: Scalar> AlignScheme<T> {
    /// Classic scheme: match 2, mismatch −1, gap −0.5 on either side.
    pub fn standard() -> Self {
        AlignScheme {
            matched: T::lit(2.0),
            substitution: Some(T::lit(-1.0)),
            first_only: T::lit(-0.5),
            second_only: T::lit(-0.5),
        }
    }

    /// Concept scheme with the reference as the first sequence: a missed
    /// reference concept is a −0.5 gap, a summary concept with no
    /// counterpart a −1.0 mismatch, matches score 2.
    pub fn concept() -> Self {
        AlignScheme {
            matched: T::lit(2.0),
            substitution: None,
            first_only: T::lit(-0.5),
            second_only: T::lit(-1.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Column {
    Match(usize, usize),
    Substitute(usize, usize),
    FirstOnly(usize),
    SecondOnly(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Alignment<T> {
    pub score: T,
    pub columns: Vec<Column>,
}

impl<T> Alignment<T> {
    fn count(&self, f: impl Fn(&Column) -> bool) -> usize {
        self.columns.iter().filter(|c| f(c)).count()
    }

    pub fn matches(&self) -> usize {
        self.count(|c| matches!(c, Column::Match(..)))
    }

    pub fn substitutions(&self) -> usize {
        self.count(|c| matches!(c, Column::Substitute(..)))
    }

    pub fn first_only(&self) -> usize {
        self.count(|c| matches!(c, Column::FirstOnly(_)))
    }

    pub fn second_only(&self) -> usize {
        self.count(|c| matches!(c, Column::SecondOnly(_)))
    }
}

fn max_of<T: Scalar>(options: impl IntoIterator<Item = Option<T>>) -> T {
    options
        .into_iter()
        .flatten()
        .fold(None, |best: Option<T>, v| match best {
            Some(b) if b >= v => Some(b),
            _ => Some(v),
        })
        .expect("at least one move")
}

/// Highest-scoring global alignment. Traceback prefers diagonal moves, then
/// first-only columns, so the reported columns are deterministic.
pub fn needleman_wunsch<T: Scalar, S: PartialEq>(a: &[S], b: &[S], scheme: &AlignScheme<T>) -> Alignment<T> {
    let (n, m) = (a.len(), b.len());
    let diag = |i: usize, j: usize| -> Option<T> {
        if a[i] == b[j] {
            Some(scheme.matched)
        } else {
            scheme.substitution
        }
    };
    let mut dp = vec![vec![T::zero(); m + 1]; n + 1];
    for i in 1..=n {
        dp[i][0] = dp[i - 1][0] + scheme.first_only;
    }
    for j in 1..=m {
        dp[0][j] = dp[0][j - 1] + scheme.second_only;
    }
    for i in 1..=n {
        for j in 1..=m {
            dp[i][j] = max_of([
                diag(i - 1, j - 1).map(|s| dp[i - 1][j - 1] + s),
                Some(dp[i - 1][j] + scheme.first_only),
                Some(dp[i][j - 1] + scheme.second_only),
            ]);
        }
    }

    let mut columns = Vec::with_capacity(n + m);
    let (mut i, mut j) = (n, m);
    while i > 0 || j > 0 {
        if i > 0 && j > 0 {
            if let Some(s) = diag(i - 1, j - 1) {
                if dp[i][j] == dp[i - 1][j - 1] + s {
                    columns.push(if a[i - 1] == b[j - 1] {
                        Column::Match(i - 1, j - 1)
                    } else {
                        Column::Substitute(i - 1, j - 1)
                    });
                    i -= 1;
                    j -= 1;
                    continue;
                }
            }
        }
        if i > 0 && (j == 0 || dp[i][j] == dp[i - 1][j] + scheme.first_only) {
            columns.push(Column::FirstOnly(i - 1));
            i -= 1;
        } else {
            columns.push(Column::SecondOnly(j - 1));
            j -= 1;
        }
    }
    columns.reverse();
    Alignment {
        score: dp[n][m],
        columns,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn self_alignment_scores_twice_the_length() {
        let a = ["x", "y", "z", "x"];
        let r = needleman_wunsch(&a, &a, &AlignScheme::<f64>::standard());
        assert_eq!(r.score, 8.0);
        assert_eq!(r.matches(), 4);
    }

    #[test]
    fn empty_second_sequence_is_all_gaps() {
        let a = [1, 2, 3];
        let r = needleman_wunsch::<f64, i32>(&a, &[], &AlignScheme::concept());
        assert_eq!(r.score, -1.5);
        assert_eq!(r.first_only(), 3);
    }

    #[test]
    fn concept_blocks_from_the_worked_example() {
        let r1 = ["presently", "horse", "come", "camel", "monday", "morning", "saddle horse back"];
        let s1 = ["presently", "horse", "come", "camel"];
        let a = needleman_wunsch(&r1, &s1, &AlignScheme::<Ratio<i64>>::concept());
        assert_eq!((a.matches(), a.second_only(), a.first_only()), (4, 0, 3));
        assert_eq!(a.score, Ratio::new(13, 2));

        let r2 = ["horse", "say", "camel o camel", "come", "work", "animal"];
        let s2 = ["horse", "say", "do", "work"];
        let b = needleman_wunsch(&r2, &s2, &AlignScheme::<Ratio<i64>>::concept());
        assert_eq!((b.matches(), b.second_only(), b.first_only()), (3, 1, 3));
        assert_eq!(a.score + b.score, Ratio::from(10));
    }

    #[test]
    fn columns_replay_to_the_score() {
        let a = ['a', 'b', 'c', 'a'];
        let b = ['b', 'a', 'c'];
        let s = AlignScheme::<f64>::standard();
        let r = needleman_wunsch(&a, &b, &s);
        let replay: f64 = r
            .columns
            .iter()
            .map(|c| match c {
                Column::Match(..) => s.matched,
                Column::Substitute(..) => s.substitution.unwrap(),
                Column::FirstOnly(_) => s.first_only,
                Column::SecondOnly(_) => s.second_only,
            })
            .sum();
        assert_eq!(replay, r.score);
    }
}
