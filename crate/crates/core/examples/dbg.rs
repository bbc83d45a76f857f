use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let t = Instant::now();
    let e = p1sheaf::audit::audit_stratum_sharp(0);
    println!("sharp: {:?} ({})", t.elapsed(), e.len());
    let t = Instant::now();
    let e = p1sheaf::audit::audit_stratum_flat(0);
    println!("flat: {:?} ({})", t.elapsed(), e.len());
    let t = Instant::now();
    let e = p1sheaf::audit::audit_stratum_sp(0);
    println!("sp: {:?} ({})", t.elapsed(), e.len());
    let t = Instant::now();
    let e = p1sheaf::audit::audit_m0_general(0);
    println!("m0: {:?} ({})", t.elapsed(), e.len());
    let t = Instant::now();
    let r = p1sheaf::audit::run_all(0);
    println!("run_all: {:?}, verdict {}", t.elapsed(), r.verdict);
    println!("total: {:?}", t0.elapsed());
}
