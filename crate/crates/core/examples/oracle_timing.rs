//! Rough cost measurements for the cobar oracle at candidate windows.

use std::time::Instant;

use motivic_sseq::algebra::builtin::CoefficientField;
use motivic_sseq::cobar::{e_n, e_qn, ext_in_window};
use motivic_sseq::grading::DegreeWindow;

fn time(label: &str, h: &motivic_sseq::cobar::HopfAlgebroidData, w: &DegreeWindow) {
    let t0 = Instant::now();
    let table = ext_in_window(h, w).unwrap();
    let total: usize = table.values().map(|g| g.dim).sum();
    println!("{label}: {:>8.2?}  ({} degrees, total dim {total})", t0.elapsed(), table.len());
}

fn main() {
    let r = CoefficientField::R;
    time("E(Q_3)/R default", &e_qn(3, r), &DegreeWindow::standard());
    time("E(0)/R   default", &e_n(0, r), &DegreeWindow::standard());
    for (st_hi, s_hi) in [(12, 5), (12, 4), (14, 4)] {
        let w = DegreeWindow::from_ranges((0, st_hi), (-12, 12), (0, s_hi));
        time(&format!("E(2)/R   stems 0-{st_hi}, s 0-{s_hi}"), &e_n(2, r), &w);
    }
}
