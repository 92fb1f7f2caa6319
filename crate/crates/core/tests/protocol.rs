use std::collections::BTreeSet;
use std::thread;

use thl_recon::gf2::BitVector;
use thl_recon::oracle::{gen_instance, oracle_symdiff};
use thl_recon::params::{Params, ParamsSpec};
use thl_recon::protocol::{
    element_from_hex, memory_pair, session_run, session_run_asymmetric, Frame, MsgType, Outcome, Role, SessionStats,
    FRAME_OVERHEAD,
};

fn example_pair() -> (Params, BTreeSet<BitVector>, BTreeSet<BitVector>) {
    let p = ParamsSpec::new(31, 1, 2, 3, vec![]).build().unwrap();
    let set = |xs: &[&str]| xs.iter().map(|x| element_from_hex(31, x).unwrap()).collect();
    (p, set(&["00000000", "b8000000"]), set(&["00000000", "c8000000"]))
}

type Side = (BTreeSet<BitVector>, SessionStats);

fn symmetric(p: &Params, a: &BTreeSet<BitVector>, b: &BTreeSet<BitVector>) -> (Side, Side) {
    let (mut ta, mut tb) = memory_pair();
    thread::scope(|sc| {
        let ha = sc.spawn(|| session_run(&mut ta, p, a).unwrap());
        let hb = sc.spawn(|| session_run(&mut tb, p, b).unwrap());
        (ha.join().unwrap(), hb.join().unwrap())
    })
}

#[test]
fn example_difference_reaches_both_hosts() {
    let (p, a, b) = example_pair();
    let ((da, sa), (db, sb)) = symmetric(&p, &a, &b);
    let want = oracle_symdiff(&a, &b);
    assert_eq!(want.len(), 2);
    assert_eq!(da, want);
    assert_eq!(db, want);
    assert_eq!(sa.outcome, Outcome::Success);
    assert_eq!(sa.frames_sent, 2);
    assert_eq!(sa.bytes_sent, sb.bytes_received);
    let payload = sa.digest_payload.as_ref().unwrap();
    assert_eq!(sa.bytes_sent, 2 * FRAME_OVERHEAD + 32 + payload.len());
    assert!(payload.len() * 8 >= p.digest_bits());
    assert!(payload.len() * 8 < p.digest_bits() + 16);
}

#[test]
fn identical_sets_give_nothing() {
    let (p, a, _) = example_pair();
    let ((da, _), (db, _)) = symmetric(&p, &a, &a);
    assert!(da.is_empty() && db.is_empty());
}

#[test]
fn multi_block_sessions_match_the_oracle() {
    let p = ParamsSpec::with_default_index(63, 2, 3, 2).build().unwrap();
    for seed in 0..10 {
        let inst = gen_instance(&p, seed, 30).unwrap();
        let ((da, _), (db, _)) = symmetric(&p, &inst.a, &inst.b);
        assert_eq!(da, inst.delta, "seed {seed}");
        assert_eq!(db, inst.delta, "seed {seed}");
    }
}

#[test]
fn asymmetric_session_delivers_the_result() {
    let (p, a, b) = example_pair();
    let (mut ts, mut tr) = memory_pair();
    let ((ds, ss), (dr, sr)) = thread::scope(|sc| {
        let hs = sc.spawn(|| session_run_asymmetric(&mut ts, &p, &a, Role::Sender).unwrap());
        let hr = sc.spawn(|| session_run_asymmetric(&mut tr, &p, &b, Role::Receiver).unwrap());
        (hs.join().unwrap(), hr.join().unwrap())
    });
    assert_eq!(ds, oracle_symdiff(&a, &b));
    assert_eq!(dr, ds);
    assert!(sr.digest_payload.is_none());
    assert_eq!(ss.bytes_received, sr.bytes_sent);
    assert_eq!(ss.frames_received, 2);
}

#[test]
fn frames_are_deterministic() {
    let (p, a, b) = example_pair();
    let ((_, s1), _) = symmetric(&p, &a, &b);
    let ((_, s2), _) = symmetric(&p, &a, &b);
    assert_eq!(s1.digest_payload, s2.digest_payload);
    let f = Frame::new(MsgType::Digest, s1.digest_payload.unwrap());
    let bytes = f.encode();
    assert_eq!(&bytes[..4], b"THLR");
    assert_eq!(bytes[4], 0x01);
    assert_eq!(bytes[5], 0x02);
    assert_eq!(u32::from_be_bytes(bytes[6..10].try_into().unwrap()) as usize, f.payload.len());
    assert_eq!(Frame::decode(&bytes).unwrap(), f);
}

#[test]
fn mismatched_parameters_are_refused_on_both_sides() {
    let (p, a, _) = example_pair();
    let q = ParamsSpec::new(31, 1, 2, 2, vec![]).build().unwrap();
    let (mut ta, mut tb) = memory_pair();
    let (ra, rb) = thread::scope(|sc| {
        let ha = sc.spawn(|| session_run(&mut ta, &p, &a).map(|_| ()));
        let hb = sc.spawn(|| session_run(&mut tb, &q, &a).map(|_| ()));
        (ha.join().unwrap(), hb.join().unwrap())
    });
    for r in [ra, rb] {
        let e = r.unwrap_err();
        assert_eq!(e.stats.outcome, Outcome::ParamMismatch);
        assert!(e.stats.digest_payload.is_none());
    }
}
