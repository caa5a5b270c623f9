//! Closed-form `D⁻¹` assembly against dense inversion of `D`.

use std::fmt::Write as _;
use std::time::Instant;

use mwspec_core::graph::{random_tree, Seed, WeightProfile};
use mwspec_core::operators::{build_distance_matrix, distance_inverse_closed_form};

/// Rows whose two inverses disagree by more than this are marked INVALID.
pub const AGREEMENT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub s: usize,
    pub t_closed_form: f64,
    pub t_dense: f64,
    pub max_rel_err: f64,
}

impl BenchRow {
    pub fn speedup(&self) -> f64 {
        self.t_dense / self.t_closed_form.max(f64::MIN_POSITIVE)
    }

    pub fn valid(&self) -> bool {
        self.max_rel_err <= AGREEMENT_TOL
    }
}

/// Times both paths on one seeded random tree. The distance matrix is built
/// outside the dense timing; the closed form is timed from the tree.
pub fn bench_one(n: usize, s: usize, seed: u64) -> mwspec_core::Result<BenchRow> {
    let tree = random_tree(n, s, Seed(seed), &WeightProfile::default())?;
    let d = build_distance_matrix(&tree);

    let start = Instant::now();
    let closed = distance_inverse_closed_form(&tree)?;
    let t_closed_form = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let dense = d.inverse()?;
    let t_dense = start.elapsed().as_secs_f64();

    let max_rel_err = closed.matrix().rel_diff(dense.matrix())?;
    Ok(BenchRow {
        n,
        s,
        t_closed_form,
        t_dense,
        max_rel_err,
    })
}

pub const CSV_HEADER: &str = "n,s,t_closed_form,t_dense,speedup,max_rel_err,status";

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let status = if r.valid() { "OK" } else { "INVALID" };
        let _ = writeln!(
            out,
            "{},{},{:.6e},{:.6e},{:.3},{:.3e},{status}",
            r.n,
            r.s,
            r.t_closed_form,
            r.t_dense,
            r.speedup(),
            r.max_rel_err
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_sizes_agree() {
        for (n, s) in [(2, 1), (2, 3), (10, 2), (40, 2)] {
            let row = bench_one(n, s, 5).unwrap();
            assert!(row.valid(), "{row:?}");
        }
    }

    #[test]
    fn csv_marks_invalid_rows() {
        let rows = [
            BenchRow {
                n: 2,
                s: 1,
                t_closed_form: 1e-6,
                t_dense: 2e-6,
                max_rel_err: 0.0,
            },
            BenchRow {
                n: 3,
                s: 1,
                t_closed_form: 1e-6,
                t_dense: 2e-6,
                max_rel_err: 1e-3,
            },
        ];
        let csv = to_csv(&rows);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].ends_with(",OK"));
        assert!(lines[2].ends_with(",INVALID"));
    }
}
