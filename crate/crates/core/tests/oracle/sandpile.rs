/// Topples one cell at a time, always the first unstable cell in row-major
/// order. Returns (grains, topplings, distinct toppled cells, dissipated).
pub fn relax_row_major(w: usize, h: usize, th: u64, mut g: Vec<u64>) -> (Vec<u64>, u64, u64, u64) {
    let mut topplings = 0;
    let mut dissipated = 0;
    let mut touched = vec![false; w * h];
    while let Some(i) = g.iter().position(|&v| v >= th) {
        g[i] -= th;
        topplings += 1;
        touched[i] = true;
        let (r, c) = (i / w, i % w);
        let mut kept = 0;
        for (dr, dc) in [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)] {
            let (nr, nc) = (r as i64 + dr, c as i64 + dc);
            if nr >= 0 && nc >= 0 && (nr as usize) < h && (nc as usize) < w {
                g[nr as usize * w + nc as usize] += 1;
                kept += 1;
            }
        }
        dissipated += th - kept;
    }
    let area = touched.iter().filter(|&&t| t).count() as u64;
    (g, topplings, area, dissipated)
}
