//! Coefficients of the symmetrized homotopy `h_n^Σ`.
//!
//! The coefficient of a term with `k − 1` factors `π` in `h_n^Σ` is `a_{n,k}`, the Leibniz
//! harmonic triangle. Both constructions are exact and agree.

use rhtkit::q::fmt_q;
use rhtkit::transfer::LeibnizTriangle;

pub fn main() {
    let rec = LeibnizTriangle::recursive(10);
    let closed = LeibnizTriangle::closed(10);
    assert_eq!(rec, closed);

    for (n, row) in rec.rows.iter().enumerate().take(7) {
        let cells: Vec<String> = row.iter().map(fmt_q).collect();
        println!(
            "{:>width$}{}",
            "",
            cells.join("  "),
            width = 2 * (7 - n - 1)
        );
    }
    // a row sums to 1 only at n = 1; the alternating-free identity is Σ_k C(n−1,k−1)·a_{n,k} = 1
    for n in 1..=10 {
        let mut s = rhtkit::q::q(0);
        for k in 1..=n {
            s += rhtkit::q::binomial(n as u64 - 1, k as u64 - 1) * rec.get(n, k);
        }
        assert_eq!(s, rhtkit::q::q(1));
    }
    println!("recursion and closed form agree through n = 10");
}
