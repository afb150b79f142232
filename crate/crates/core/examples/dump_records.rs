use diolab::exponents::{build_inhom_records, sample_theta, InhomBuildConfig};
use diolab::numbers::CfSpec;
use diolab::precision::PrecisionContext;
use diolab::system::{Orientation, SystemSpec};

fn stats(rec: &diolab::exponents::InhomRecordSequence) -> Vec<f64> {
    // pairs (logX_{k+1}, -logD_k)
    let items = &rec.items;
    let mut pairs: Vec<(f64, f64)> = items
        .windows(2)
        .map(|w| ((w[1].norm as f64).log2(), -w[0].dist.log2_abs()))
        .collect();
    let last = items.last().unwrap();
    if rec.x_max > last.norm {
        pairs.push(((rec.x_max as f64).log2(), -last.dist.log2_abs()));
    }
    let wlen = (pairs.len().div_ceil(2)).max(5).min(pairs.len());
    let win = &pairs[pairs.len() - wlen..];
    let ratios: Vec<f64> = win.iter().map(|(lx, ld)| ld / lx).collect();
    let mut sorted = ratios.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let s1 = *sorted.last().unwrap();
    let s2 = sorted[0];
    let s3 = sorted[sorted.len() / 2];
    // total span slope over window
    let s4 = (win.last().unwrap().1 - win[0].1) / (win.last().unwrap().0 - win[0].0 + 1e-12);
    let s5 = pairs.last().unwrap().1 / pairs.last().unwrap().0;
    // thinned regression: one pair per 0.7 in logX, over ALL pairs
    let mut thin: Vec<(f64, f64)> = Vec::new();
    for &(lx, ld) in &pairs {
        if thin.last().map(|(plx, _)| lx - plx > 0.7).unwrap_or(true) {
            thin.push((lx, ld));
        }
    }
    let n = thin.len() as f64;
    let mx = thin.iter().map(|p| p.0).sum::<f64>() / n;
    let my = thin.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = thin.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = thin.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let s6 = sxy / sxx;
    // thinned min over tail of thinned
    let tl = (thin.len().div_ceil(2)).max(5).min(thin.len());
    let twin = &thin[thin.len() - tl..];
    let s7 = twin.iter().map(|(lx, ld)| ld / lx).fold(f64::INFINITY, f64::min);
    let s8 = {
        let mut v: Vec<f64> = twin.iter().map(|(lx, ld)| ld / lx).collect();
        v.sort_by(|a, b| a.partial_cmp(b).unwrap());
        v[v.len() / 2]
    };
    vec![s1, s2, s3, s4, s5, s6, s7, s8]
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = v.len();
    if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) }
}

fn main() {
    let ctx = PrecisionContext::for_enumeration_bound(1_000_000);
    let xi = CfSpec::fibonacci(1, 2);
    for (name, orient, target) in [("row", Orientation::Row, 1.618), ("col", Orientation::Column, 0.382)] {
        let sys = SystemSpec::powers(xi.clone(), 2, orient).realize(&ctx).unwrap();
        let mut stream = diolab::rng::Stream::new(11, 0x7417);
        let m = sys.m();
        let cfg = InhomBuildConfig::guided(100_000, InhomBuildConfig::default_exhaustive_bound(m));
        let mut all: Vec<Vec<f64>> = vec![Vec::new(); 8];
        let t0 = std::time::Instant::now();
        for _ in 0..20 {
            let theta = sample_theta(sys.n(), ctx.scale(), &mut stream);
            let rec = build_inhom_records(&sys, &theta, &cfg).unwrap();
            for (i, s) in stats(&rec).into_iter().enumerate() {
                all[i].push(s);
            }
        }
        println!("{name}: target {target} time {:?}", t0.elapsed());
        let names = ["max", "min", "medratio", "spanslope", "closing", "thinreg", "thinmin", "thinmed"];
        for (i, n2) in names.iter().enumerate() {
            println!("  {n2:10} median={:.4} (dev {:+.3})", median(all[i].clone()), median(all[i].clone()) - target);
        }
    }
}
