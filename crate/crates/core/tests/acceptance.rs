//! Acceptance suite. Prints one line per criterion and exits nonzero if any
//! criterion fails.

use std::collections::BTreeSet;
use std::net::{TcpListener, TcpStream};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::thread;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thl_recon::bounds::{asymptotic_rates, chromatic_bounds, sphere_size};
use thl_recon::codes::{bh_sequence, bh_width};
use thl_recon::gf2::{BitVector, Field};
use thl_recon::maps::{map_f, map_m};
use thl_recon::oracle::{gen_instance, oracle_symdiff};
use thl_recon::params::{Params, ParamsSpec};
use thl_recon::protocol::{
    digest_len, memory_pair, session_run, Outcome, ProtocolError, SessionStats, TcpTransport, Transport,
    FRAME_OVERHEAD,
};
use thl_recon::recon1::{decode1, digest1_cost_bits, encode1};
use thl_recon::recont::{decode_t, digest_t_cost_bits, encode_t};

const TRIALS: u64 = 1000;
const MAX_COMMON: u64 = 50;
const GRID_1_SECONDS: f64 = 120.0;
const GRID_2_SECONDS: f64 = 300.0;
const BOUNDS_SECONDS: f64 = 30.0;
const HALF_GAP: f64 = 1.189;
const HALF_GAP_TOL: f64 = 1e-3;
const SESSIONS: u64 = 100;
const SESSION_SECONDS: f64 = 60.0;

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Binary entropy, computed here independently of the library.
fn h2(x: f64) -> f64 {
    let t = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    t(x) + t(1.0 - x)
}

/// Runs `trials` generated instances per grid point in parallel and counts
/// exact recoveries.
fn exactness_grid(specs: Vec<ParamsSpec>, single: bool, seed_base: u64) -> Result<(usize, u64, u64, f64), String> {
    let start = Instant::now();
    let results: Vec<Result<(u64, u64), String>> = thread::scope(|s| {
        let handles: Vec<_> = specs
            .iter()
            .enumerate()
            .map(|(pi, spec)| {
                s.spawn(move || -> Result<(u64, u64), String> {
                    let p = spec.build().map_err(|e| format!("{spec:?}: {e}"))?;
                    let mut exact = 0;
                    for i in 0..TRIALS {
                        let seed = seed_base + pi as u64 * 1_000_003 + i;
                        let inst = gen_instance(&p, seed, (i % (MAX_COMMON + 1)) as usize)
                            .map_err(|e| format!("{spec:?} seed {seed}: {e}"))?;
                        let got = if single {
                            let (da, db) = (encode1(&p, &inst.a), encode1(&p, &inst.b));
                            da.and_then(|da| decode1(&p, &da, &db?))
                        } else {
                            let (da, db) = (encode_t(&p, &inst.a), encode_t(&p, &inst.b));
                            da.and_then(|da| decode_t(&p, &da, &db?))
                        };
                        if got.as_ref() == Ok(&oracle_symdiff(&inst.a, &inst.b)) {
                            exact += 1;
                        }
                    }
                    Ok((exact, TRIALS))
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker")).collect()
    });
    let mut exact = 0;
    let mut total = 0;
    let mut errors = Vec::new();
    for r in results {
        match r {
            Ok((e, t)) => {
                exact += e;
                total += t;
            }
            Err(e) => errors.push(e),
        }
    }
    if !errors.is_empty() {
        return Err(errors.join("; "));
    }
    Ok((specs.len(), exact, total, start.elapsed().as_secs_f64()))
}

fn criterion_1() -> Check {
    let mut specs = Vec::new();
    for n in [15, 31, 63, 127] {
        for ell in 1..=3 {
            for h in 2..=4 {
                specs.push(ParamsSpec::new(n, 1, h, ell, vec![]));
            }
        }
    }
    let (points, exact, total, secs) = exactness_grid(specs, true, 1)?;
    ensure(exact == total, || format!("{exact}/{total} exact over {points} grid points"))?;
    ensure(secs < GRID_1_SECONDS, || format!("took {secs:.1} s"))?;
    Ok(format!("{points} grid points, {exact}/{total} exact, {secs:.1} s"))
}

fn criterion_2() -> Check {
    let mut specs = Vec::new();
    for n in [63, 127] {
        for (t, h, ell) in [(2, 2, 1), (2, 3, 2), (3, 2, 1)] {
            specs.push(ParamsSpec::with_default_index(n, t, h, ell));
        }
    }
    let (points, exact, total, secs) = exactness_grid(specs, false, 7_000_000_000)?;
    ensure(exact == total, || format!("{exact}/{total} exact over {points} grid points"))?;
    ensure(secs < GRID_2_SECONDS, || format!("took {secs:.1} s"))?;
    Ok(format!("{points} grid points, {exact}/{total} exact, {secs:.1} s"))
}

fn criterion_3() -> Check {
    let mut worst = 0.0f64;
    let mut example = 0;
    for n in [63, 127] {
        for ell in 1..=3 {
            for h in 2..=4 {
                let p = ParamsSpec::new(n, 1, h, ell, vec![]).build().map_err(|e| e.to_string())?;
                let bits = digest1_cost_bits(&p);
                let estimate = n as f64 + ((h - 1) * ell) as f64 * ((n as f64).log2() + 1.0);
                let baseline = h * (n + 1);
                ensure(bits as f64 <= 2.0 * estimate, || {
                    format!("n={n} h={h} ell={ell}: {bits} bits > 2 x {estimate:.1}")
                })?;
                ensure(bits < baseline, || format!("n={n} h={h} ell={ell}: {bits} bits >= baseline {baseline}"))?;
                worst = worst.max(bits as f64 / estimate);
                if (n, h, ell) == (127, 4, 1) {
                    example = bits;
                }
            }
        }
    }
    Ok(format!(
        "18 points with n >= 63, max measured/estimate {worst:.3}; n=127 h=4 ell=1: {example} bits vs baseline 512"
    ))
}

fn criterion_4() -> Check {
    let mut worst = 0.0f64;
    for n in [63, 127] {
        for (t, h, ell) in [(2, 2, 1), (2, 3, 2), (3, 2, 1)] {
            let p = ParamsSpec::with_default_index(n, t, h, ell).build().map_err(|e| e.to_string())?;
            let bits = digest_t_cost_bits(&p);
            let estimate = (t * t * n) as f64 + (2 * t * h * (ell + t)) as f64 * (n as f64).log2();
            ensure(bits as f64 <= 2.0 * estimate, || {
                format!("n={n} t={t} h={h} ell={ell}: {bits} bits > 2 x {estimate:.1}")
            })?;
            worst = worst.max(bits as f64 / estimate);
        }
    }
    let p = ParamsSpec::with_default_index(127, 2, 4, 1).build().map_err(|e| e.to_string())?;
    let bits = digest_t_cost_bits(&p);
    ensure(bits < 2 * 4 * 128, || format!("n=127 t=2 h=4 ell=1: {bits} bits >= 1024"))?;
    Ok(format!("6 points, max measured/estimate {worst:.3}; n=127 t=2 h=4 ell=1: {bits} bits vs baseline 1024"))
}

fn criterion_5() -> Check {
    let start = Instant::now();
    let mut count = 0;
    for n in 2..=63usize {
        for t in 1..=3 {
            for h in 1..=4 {
                for ell in (1..=3).filter(|&l| l < n) {
                    let (lo, up) = chromatic_bounds(n, t, h, ell, None).map_err(|e| e.to_string())?;
                    ensure(lo <= up, || format!("n={n} t={t} h={h} ell={ell}: {lo} > {up}"))?;
                    count += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < BOUNDS_SECONDS, || format!("took {secs:.1} s"))?;
    Ok(format!("{count} grid points with lower <= upper, {secs:.2} s"))
}

fn criterion_6() -> Check {
    let lambdas: Vec<f64> = (1..=49).map(|i| i as f64 / 100.0).collect();
    for eta in [0.0, 0.05, 0.1] {
        let mut prev: Option<(f64, f64)> = None;
        for &lambda in &lambdas {
            let (lo, up) = asymptotic_rates(2, lambda, eta).map_err(|e| e.to_string())?;
            let want_lo = h2(lambda / 2.0) - eta;
            let want_up = 2.0 * (h2(lambda) - eta);
            ensure((lo - want_lo).abs() < 1e-12 && (up - want_up).abs() < 1e-12, || {
                format!("lambda={lambda} eta={eta}: curves ({lo}, {up}) differ from direct evaluation")
            })?;
            ensure(lo <= up, || format!("lambda={lambda} eta={eta}: lower {lo} > upper {up}"))?;
            if let Some((plo, pup)) = prev {
                ensure(lo > plo && up > pup, || format!("not increasing at lambda={lambda} eta={eta}"))?;
            }
            prev = Some((lo, up));
        }
    }
    let (lo, up) = asymptotic_rates(2, 0.5 - 1e-9, 0.0).map_err(|e| e.to_string())?;
    let gap = up - lo;
    let oracle = 2.0 - h2(0.25);
    ensure((gap - HALF_GAP).abs() < HALF_GAP_TOL && (gap - oracle).abs() < 1e-6, || {
        format!("gap at lambda=0.5 is {gap:.6}, expected {HALF_GAP} (direct {oracle:.6})")
    })?;
    Ok(format!("3 x 49 curve points ordered and increasing; gap at lambda=0.5 is {gap:.4}"))
}

fn property_one() -> Result<usize, String> {
    let mut pairs = 0;
    for ell in 1..=2 {
        let p = ParamsSpec::new(15, 1, 2, ell, vec![]).build().map_err(|e| e.to_string())?;
        let m: Vec<usize> = (0..1u64 << 15)
            .map(|x| map_m(&p, &BitVector::from_u64(15, x)).expect("15 bits"))
            .collect();
        for x in 0..1usize << 15 {
            for i in 0..15 {
                let y = x ^ (1 << i);
                ensure(m[x] != m[y], || format!("ell={ell}: {x:015b} and {y:015b} collide"))?;
                pairs += 1;
                if ell == 2 {
                    for j in i + 1..15 {
                        let z = y ^ (1 << j);
                        ensure(m[x] != m[z], || format!("ell=2: {x:015b} and {z:015b} collide"))?;
                        pairs += 1;
                    }
                }
            }
        }
    }
    Ok(pairs)
}

/// True when some nonempty subset of at most `k` values xors to zero.
fn has_small_zero_sum(vals: &[u64], k: usize) -> bool {
    fn rec(vals: &[u64], start: usize, left: usize, acc: u64, used: usize) -> bool {
        if used > 0 && acc == 0 {
            return true;
        }
        if left == 0 {
            return false;
        }
        (start..vals.len()).any(|i| rec(vals, i + 1, left - 1, acc ^ vals[i], used + 1))
    }
    rec(vals, 0, k, 0, 0)
}

fn property_three() -> Result<usize, String> {
    let mut cases = 0;
    for t in 1..=2 {
        for k in 1..=6 {
            let p = ParamsSpec::new(63, t, 2, 1, (1..=k).collect()).build().map_err(|e| e.to_string())?;
            let vals: Vec<u64> = (0..1u64 << k)
                .map(|x| map_f(&p, &BitVector::from_u64(k, x)).expect("k bits").to_u64())
                .collect();
            ensure(!has_small_zero_sum(&vals, 2 * t), || format!("t={t} |I|={k}: zero f-sum"))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn bh_exhaustive() -> Result<usize, String> {
    let mut cases = 0;
    for m in 2..=32 {
        for h in 1..=3 {
            let field = Field::new(bh_width(m, h)).map_err(|e| e.to_string())?;
            let seq = bh_sequence(m, h, &field).map_err(|e| e.to_string())?;
            let vals: Vec<u64> = (0..m).map(|i| seq.get(i).to_u64()).collect();
            ensure(!has_small_zero_sum(&vals, h), || format!("m={m} h={h}: zero subset sum"))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn sphere_sandwich() -> Result<usize, String> {
    let mut cases = 0;
    for n in 1..=128usize {
        let mut row = vec![1u128];
        for _ in 0..n {
            let mut next = vec![1u128; row.len() + 1];
            for i in 1..row.len() {
                next[i] = row[i - 1] + row[i];
            }
            row = next;
        }
        let mut v: u128 = 0;
        for k in 0..=n / 2 {
            v += row[k];
            let got = sphere_size(2, n, k);
            ensure(got == v.into(), || format!("V({n},{k}) = {got}, expected {v}"))?;
            let nh = n as f64 * h2(k as f64 / n as f64);
            let lv = (v as f64).log2();
            ensure(nh - ((n + 1) as f64).log2() <= lv + 1e-9 && lv <= nh + 1e-9, || {
                format!("sandwich fails at n={n} k={k}")
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn criterion_7() -> Check {
    let p1 = property_one()?;
    let p3 = property_three()?;
    let bh = bh_exhaustive()?;
    let sw = sphere_sandwich()?;
    Ok(format!(
        "M collisions: {p1} pairs clean; f-sums: {p3} (t,|I|) cases; B_h: {bh} (m,h) cases; sphere sandwich: {sw} (n,k) cases"
    ))
}

fn session_specs() -> Vec<ParamsSpec> {
    vec![
        ParamsSpec::new(31, 1, 2, 1, vec![]),
        ParamsSpec::new(63, 1, 3, 2, vec![]),
        ParamsSpec::new(127, 1, 4, 1, vec![]),
        ParamsSpec::with_default_index(63, 2, 2, 1),
        ParamsSpec::with_default_index(63, 2, 3, 2),
        ParamsSpec::with_default_index(127, 3, 2, 1),
    ]
}

type SessionResult = Result<(BTreeSet<BitVector>, SessionStats), String>;

fn pair_run<T: Transport + Send>(
    mut a: T,
    mut b: T,
    pa: &Params,
    pb: &Params,
    sa: &BTreeSet<BitVector>,
    sb: &BTreeSet<BitVector>,
) -> (Result<(BTreeSet<BitVector>, SessionStats), (ProtocolError, SessionStats)>, Result<(BTreeSet<BitVector>, SessionStats), (ProtocolError, SessionStats)>) {
    thread::scope(|s| {
        let hb = s.spawn(move || session_run(&mut b, pb, sb).map_err(|e| (e.error, e.stats)));
        let ra = session_run(&mut a, pa, sa).map_err(|e| (e.error, e.stats));
        (ra, hb.join().expect("peer thread"))
    })
}

fn tcp_pair() -> Result<(TcpTransport, TcpTransport), String> {
    let listener = TcpListener::bind("127.0.0.1:0").map_err(|e| e.to_string())?;
    let addr = listener.local_addr().map_err(|e| e.to_string())?;
    let client = TcpStream::connect(addr).map_err(|e| e.to_string())?;
    let (server, _) = listener.accept().map_err(|e| e.to_string())?;
    for s in [&client, &server] {
        s.set_read_timeout(Some(Duration::from_secs(20))).map_err(|e| e.to_string())?;
    }
    Ok((TcpTransport::new(client), TcpTransport::new(server)))
}

fn check_stats(p: &Params, st: &SessionStats) -> Result<(), String> {
    let payload = st.digest_payload.as_ref().ok_or("no digest sent")?;
    ensure(payload.len() == digest_len(p), || "digest payload length".into())?;
    ensure(payload.len() == digest_cost_bytes(p), || "digest length differs from cost".into())?;
    ensure(st.frames_sent == 2, || format!("{} frames sent", st.frames_sent))?;
    let expected = 2 * FRAME_OVERHEAD + 32 + payload.len();
    ensure(st.bytes_sent == expected && st.bytes_received == expected, || {
        format!("bytes sent {} / received {}, expected {expected}", st.bytes_sent, st.bytes_received)
    })?;
    ensure(st.outcome == Outcome::Success, || format!("outcome {:?}", st.outcome))
}

/// Cost bits rounded up to bytes, each Digest1 component separately.
fn digest_cost_bytes(p: &Params) -> usize {
    match p.single() {
        Some(s) => s.comp.redundancy().div_ceil(8) + (digest1_cost_bits(p) - s.comp.redundancy()).div_ceil(8),
        None => digest_t_cost_bits(p).div_ceil(8),
    }
}

fn criterion_8() -> Check {
    let start = Instant::now();
    let specs = session_specs();
    let built: Vec<Params> = specs.iter().map(|s| s.build().expect("session params")).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x7468_6c72);
    let mut elements = 0;
    for i in 0..SESSIONS {
        let which = rng.gen_range(0..built.len());
        let p = &built[which];
        let inst = gen_instance(p, rng.gen(), rng.gen_range(0..=MAX_COMMON as usize)).map_err(|e| e.to_string())?;
        let (ma, mb) = memory_pair();
        let (mem_a, mem_b) = pair_run(ma, mb, p, p, &inst.a, &inst.b);
        let (ta, tb) = tcp_pair()?;
        let (tcp_a, tcp_b) = pair_run(ta, tb, p, p, &inst.a, &inst.b);
        let fail = |side: &str, r: &Result<(BTreeSet<BitVector>, SessionStats), (ProtocolError, SessionStats)>| -> SessionResult {
            r.as_ref().map(|(d, s)| (d.clone(), s.clone())).map_err(|(e, _)| format!("session {i} {side}: {e}"))
        };
        let (mem_a, mem_b, tcp_a, tcp_b) = (fail("mem A", &mem_a)?, fail("mem B", &mem_b)?, fail("tcp A", &tcp_a)?, fail("tcp B", &tcp_b)?);
        for (d, st) in [&mem_a, &mem_b, &tcp_a, &tcp_b] {
            ensure(*d == inst.delta, || format!("session {i}: wrong difference"))?;
            check_stats(p, st).map_err(|e| format!("session {i}: {e}"))?;
        }
        ensure(mem_a.1.digest_payload == tcp_a.1.digest_payload && mem_b.1.digest_payload == tcp_b.1.digest_payload, || {
            format!("session {i}: digest bytes differ between transports")
        })?;
        elements += inst.delta.len();
    }
    let mut mismatches = 0;
    for (x, y) in [(0, 1), (3, 4), (2, 5), (1, 2)] {
        let (pa, pb) = (&built[x], &built[y]);
        let empty = BTreeSet::new();
        let (ma, mb) = memory_pair();
        let (ra, rb) = pair_run(ma, mb, pa, pb, &empty, &empty);
        for r in [ra, rb] {
            let (e, st) = r.err().ok_or("mismatched params reconciled")?;
            ensure(matches!(e, ProtocolError::ParamMismatch), || format!("mismatch gave {e}"))?;
            ensure(st.outcome == Outcome::ParamMismatch && st.digest_payload.is_none(), || {
                "digest sent after fingerprint mismatch".into()
            })?;
            ensure(st.frames_received == 1, || "read past HELLO after mismatch".into())?;
        }
        mismatches += 1;
    }
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < SESSION_SECONDS, || format!("took {secs:.1} s"))?;
    Ok(format!(
        "{SESSIONS} sessions over memory and TCP agree ({elements} difference elements), {mismatches} mismatches aborted before DIGEST, {secs:.1} s"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("single-block exactness", criterion_1),
        ("multi-block exactness", criterion_2),
        ("single-block digest size", criterion_3),
        ("multi-block digest size", criterion_4),
        ("exact bounds ordering", criterion_5),
        ("rate curve shape", criterion_6),
        ("exhaustive property suites", criterion_7),
        ("protocol sessions", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!("{}/{} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
