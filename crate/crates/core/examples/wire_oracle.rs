//! Serves a formula over the line-delimited JSON protocol on a local TCP
//! port and learns from it as if it were an external model.

use std::io::BufReader;
use std::net::TcpListener;
use std::thread;

use horn_envelope::learner::EnvelopeLearner;
use horn_envelope::oracle::{wire, Endpoint, ExactEquivalence, FormulaOracle, Session, WireOracle};
use horn_envelope::text::{parse_formula, render_metaclauses};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let (u, phi) = parse_formula("vars: a b c d e\na b -> c\nc d ->\n-> a e\n")?;

    let listener = TcpListener::bind("127.0.0.1:0")?;
    let addr = listener.local_addr()?;
    let names = u.names().to_vec();
    let served = phi.clone();
    let server = thread::spawn(move || {
        let (conn, _) = listener.accept().expect("client connects");
        let reader = BufReader::new(conn.try_clone().expect("clone socket"));
        wire::serve(&mut FormulaOracle::new(served), &names, reader, conn)
    });

    let endpoint: Endpoint = format!("tcp:{addr}").parse()?;
    let client = WireOracle::connect(&endpoint, u.names())?;
    println!("connected to {addr}, pipelining: {}", client.peer_supports_pipelining());
    let mut mq = Session::new(client);
    let mut eq = ExactEquivalence::horn(phi)?;
    let res = EnvelopeLearner::new().run(&u, &mut mq, &mut eq)?;
    print!("{}", render_metaclauses(res.horn(), &u));
    println!("{} membership queries sent over the wire", mq.stats().calls);

    mq.into_inner().close()?;
    let stats = server.join().expect("server thread")?;
    println!(
        "server answered {} queries, {} protocol errors",
        stats.queries, stats.errors
    );
    Ok(())
}
