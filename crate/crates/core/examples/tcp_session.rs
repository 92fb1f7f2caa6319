//! A full one-round session over TCP loopback: each side sends HELLO and
//! DIGEST, then decodes locally.

use std::net::{TcpListener, TcpStream};
use std::thread;

use thl_recon::oracle::gen_instance;
use thl_recon::params::ParamsSpec;
use thl_recon::protocol::{session_run, TcpTransport};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = ParamsSpec::with_default_index(63, 2, 3, 2).build()?;
    let inst = gen_instance(&params, 11, 25)?;

    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?;
    let server_params = params.clone();
    let server_set = inst.b.clone();
    let server = thread::spawn(move || {
        let (stream, _) = listener.accept().expect("accept");
        session_run(&mut TcpTransport::new(stream), &server_params, &server_set)
    });

    let (delta, stats) = session_run(&mut TcpTransport::new(TcpStream::connect(addr)?), &params, &inst.a)?;
    let (peer_delta, _) = server.join().expect("server thread")?;

    assert_eq!(delta, peer_delta);
    assert_eq!(delta, inst.delta);
    println!("both hosts recovered {} elements", delta.len());
    println!(
        "sent {} bytes in {} frames ({} digest bits, {} for plain transfer)",
        stats.bytes_sent, stats.frames_sent, stats.digest_bits, stats.baseline_bits
    );
    Ok(())
}
