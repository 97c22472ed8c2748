use ffl::arith::suite::identity_suite;
use ffl::error::Error;
use ffl::exact::to_json_15sig;
use ffl::FieldSpec;

pub fn run(spec: FieldSpec, max_degree: usize, json: bool) -> Result<bool, Error> {
    let report = identity_suite(spec, max_degree)?;
    if json {
        println!("{}", to_json_15sig(&report)?);
    } else {
        println!(
            "identity suite: q = {}, max degree = {} ({:.2}s)",
            report.q, report.max_degree, report.elapsed_seconds
        );
        for check in &report.checks {
            println!(
                "  [{}] {:<55} {}",
                if check.pass { "pass" } else { "FAIL" },
                check.name,
                check.detail
            );
        }
        println!("  character-sum measurements:");
        for cs in &report.char_sums {
            println!(
                "    deg f = {}, n = {}: S = {:>6} over {:>7} primes, normalized {:.6}",
                cs.f_degree, cs.n, cs.sum, cs.prime_count, cs.normalized
            );
        }
        println!(
            "overall: {}",
            if report.all_pass { "pass" } else { "FAIL" }
        );
    }
    Ok(report.all_pass)
}
