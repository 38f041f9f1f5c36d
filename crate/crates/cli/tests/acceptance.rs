use std::process::{Command, ExitCode, Output};
use std::time::Instant;

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2kit")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Option<Value> {
    serde_json::from_slice(&o.stdout).ok()
}

fn report(name: &str, ok: bool, detail: String, failed: &mut usize) {
    println!("{} {name}{}", if ok { "PASS" } else { "FAIL" }, if detail.is_empty() { detail } else { format!(": {detail}") });
    if !ok {
        *failed += 1;
    }
}

fn main() -> ExitCode {
    let mut failed = 0;
    for n in 1..=10 {
        let start = Instant::now();
        let o = run(&["verify", "--criterion", &n.to_string()]);
        let v = json(&o);
        let ok = o.status.code() == Some(0) && v.as_ref().is_some_and(|v| v["failures"].as_array().is_some_and(|f| f.is_empty()));
        let cases = v.as_ref().map(|v| v["cases"].clone()).unwrap_or(Value::Null);
        let suite = v.as_ref().and_then(|v| v["suite"].as_str().map(String::from)).unwrap_or_default();
        report(
            &format!("criterion {n:>2}"),
            ok,
            format!("{suite}, {cases} cases ({} ms)", start.elapsed().as_millis()),
            &mut failed,
        );
    }

    let o = run(&["verify", "--suite", "lie"]);
    let cases = json(&o).and_then(|v| v["cases"].as_u64()).unwrap_or(0);
    report("verify --suite lie", o.status.code() == Some(0) && cases >= 14 * 14 * 14, format!("{cases} cases"), &mut failed);

    let o = run(&["verify", "--suite", "zeta", "--p", "5", "--type", "split"]);
    report("verify --suite zeta --p 5 --type split", o.status.code() == Some(0), String::new(), &mut failed);

    let o = run(&["verify", "--suite", "nosuch"]);
    report("verify --suite nosuch exits 2", o.status.code() == Some(2), String::new(), &mut failed);

    let o = run(&["table", "subrings", "--p", "5", "--fmax", "0,1,-1,0", "--max-val", "2"]);
    let n = json(&o).and_then(|v| v["classes"].as_array().map(|c| c.len())).unwrap_or(0);
    report("table subrings", o.status.code() == Some(0) && n > 0, format!("{n} classes"), &mut failed);

    let o = run(&["table", "crident", "--p", "7", "--type", "inert", "--max-content", "3"]);
    let rows = json(&o).and_then(|v| v["rows"].as_array().cloned()).unwrap_or_default();
    let ok = !rows.is_empty() && rows.iter().all(|r| r["lhs"] == r["rhs"]);
    report("table crident", o.status.code() == Some(0) && ok, format!("{} rows", rows.len()), &mut failed);

    let args = ["table", "whittaker", "--n", "2", "--w", "0,1,-1,0", "--grid", "3"];
    let (a, b) = (run(&args), run(&args));
    let pts = json(&a).and_then(|v| v["grid"].as_array().map(|g| g.len())).unwrap_or(0);
    report("table whittaker", a.status.code() == Some(0) && pts == 9, format!("{pts} points"), &mut failed);
    report("identical flags give identical output", a.stdout == b.stdout, String::new(), &mut failed);

    let o = run(&["table", "dirichlet", "--primes", "5:split,7:inert", "--bound", "35"]);
    report("table dirichlet", o.status.code() == Some(0) && json(&o).is_some(), String::new(), &mut failed);

    let o = run(&["whittaker", "--n", "2", "--w", "0,1,-1,0", "--x", "0.1", "--y", "1.3", "--scale", "0.7", "--json"]);
    let comps = json(&o).and_then(|v| v["components"].as_array().map(|c| c.len())).unwrap_or(0);
    report("whittaker --json", o.status.code() == Some(0) && comps == 5, format!("{comps} components"), &mut failed);

    let o = run(&["odecheck", "--n", "2", "--w", "0,1,-1,0", "--step", "1e-4"]);
    report("odecheck", o.status.code() == Some(0), String::new(), &mut failed);

    let o = run(&["expsum", "--p", "5", "--k", "2", "--r", "1", "--fmax", "0,1,-1,0"]);
    report("expsum", o.status.code() == Some(0), String::new(), &mut failed);

    let o = run(&["whittaker", "--n", "2", "--w", "0,0,0,0"]);
    report("zero character exits 2", o.status.code() == Some(2), String::new(), &mut failed);

    let o = run(&["verify", "--suite", "so7", "--tol-expsum", "0"]);
    report("tolerance flag parses", o.status.code() == Some(0), String::new(), &mut failed);

    let o = run(&["verify", "--criterion", "7", "--tol-expsum", "0"]);
    report("zero tolerance fails with exit 1", o.status.code() == Some(1), String::new(), &mut failed);

    for s in ["bessel", "mellin", "multinomial", "jnu"] {
        let o = run(&["archcheck", "--suite", s]);
        report(&format!("archcheck --suite {s}"), o.status.code() == Some(0), String::new(), &mut failed);
    }

    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} checks failed");
        ExitCode::FAILURE
    }
}
