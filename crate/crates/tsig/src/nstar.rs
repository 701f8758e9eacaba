//! The `n!` versus `n*` table.

use num_bigint::BigUint;
use tsig_core::combinatorics::{factorial, n_star};
use tsig_core::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NStarRow {
    pub n: usize,
    pub permutations: BigUint,
    pub orders: BigUint,
}

/// Rows for `2..=max_n`.
pub fn nstar_rows(max_n: usize) -> Result<Vec<NStarRow>, Error> {
    if max_n < 2 {
        return Err(Error::Argument(format!("the table starts at n = 2, got {max_n}")));
    }
    (2..=max_n).map(|n| Ok(NStarRow { n, permutations: factorial(n), orders: n_star(n)? })).collect()
}

/// `28091567595` → `28,091,567,595`.
pub fn with_thousands(v: &BigUint) -> String {
    let digits = v.to_string();
    let mut out = String::with_capacity(digits.len() + digits.len() / 3);
    for (i, ch) in digits.chars().enumerate() {
        if i > 0 && (digits.len() - i).is_multiple_of(3) {
            out.push(',');
        }
        out.push(ch);
    }
    out
}

/// One `n | n! | n*` line per row under a header.
pub fn render_table(rows: &[NStarRow]) -> String {
    let mut out = String::from("n | n! | n*\n");
    for r in rows {
        out.push_str(&format!("{} | {} | {}\n", r.n, with_thousands(&r.permutations), with_thousands(&r.orders)));
    }
    out
}
