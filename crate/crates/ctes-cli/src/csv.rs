//! CSV renderers. Floats use the shortest round-trip representation, so a
//! re-parsed file reproduces the sample values bit for bit.

use std::fmt::Write;

use ctes_core::interferogram::rescaled_abscissa;
use ctes_core::{FactorRun, Interferogram};

/// One interferogram: header `o_xi,xi,xi_N,intensity`, rows in ascending
/// `o_xi`. The `xi_N` column is empty when no target is bound.
pub fn interferogram_csv(ig: &Interferogram, target: Option<u64>, scale: u64) -> String {
    let mut out = String::from("o_xi,xi,xi_N,intensity\n");
    for &(o_xi, intensity) in ig.samples() {
        let xi = o_xi / ig.x();
        match target {
            Some(n) => {
                let xi_n = rescaled_abscissa(n, scale, ig.x(), o_xi);
                writeln!(out, "{o_xi},{xi},{xi_n},{intensity}").unwrap();
            }
            None => writeln!(out, "{o_xi},{xi},,{intensity}").unwrap(),
        }
    }
    out
}

/// A curlicue scan: header `zeta,intensity`.
pub fn curlicue_csv(points: &[(f64, f64)]) -> String {
    let mut out = String::from("zeta,intensity\n");
    for &(zeta, intensity) in points {
        writeln!(out, "{zeta},{intensity}").unwrap();
    }
    out
}

/// All recordings of a factoring run, prefixed with the interferogram index.
pub fn factor_run_csv(run: &FactorRun) -> String {
    let mut out = String::from("interferogram,o_xi,xi,xi_N,intensity\n");
    let n = run.report.n >> run.report.stripped_twos;
    let s = run.report.s;
    for (index, ig) in run.interferograms.iter().enumerate() {
        for &(o_xi, intensity) in ig.samples() {
            let xi = o_xi / ig.x();
            let xi_n = rescaled_abscissa(n, s, ig.x(), o_xi);
            writeln!(out, "{index},{o_xi},{xi},{xi_n},{intensity}").unwrap();
        }
    }
    out
}
