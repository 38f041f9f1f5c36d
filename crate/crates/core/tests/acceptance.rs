use std::process::ExitCode;
use std::time::Instant;

use g2kit::checks::{criterion, CheckConfig, CRITERIA};

fn main() -> ExitCode {
    let cfg = CheckConfig::default();
    let t = cfg.tol;
    println!(
        "tolerances: expsum {:e}  bessel {:e}  ode {:e} (step {:e})  collapse {:e}  phase {:e}  mellin {:e}  multinomial {:e}  gamma {:e}",
        t.expsum, t.bessel, t.ode, t.ode_step, t.collapse, t.phase, t.mellin, t.multinomial, t.gamma
    );
    let mut failed = 0;
    for (n, name) in CRITERIA {
        let start = Instant::now();
        let rep = criterion(n, &cfg);
        let ms = start.elapsed().as_millis();
        let status = if rep.passed() { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {status}  {name}: {} cases, {} failures ({ms} ms)", rep.cases, rep.failures.len());
        for f in rep.failures.iter().take(5) {
            println!("    {}: {}", f.case, f.detail);
        }
        if !rep.passed() {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
