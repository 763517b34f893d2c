//! Newline-delimited JSON protocol for membership oracles living in another
//! process (a classifier server, a stub) over stdio or TCP.
//!
//! ```text
//! → {"type":"hello","vars":["a","b"]}
//! ← {"type":"ready","vars":["a","b"]}
//! → {"type":"membership","id":1,"model":[1,0]}
//! ← {"type":"answer","id":1,"label":"negative"}
//! → {"type":"bye"}
//! ```

use std::io::{BufRead, BufReader, Write};
use std::net::TcpStream;
use std::process::{Child, Command, Stdio};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Label, MembershipOracle, OracleError};
use crate::logic::Model;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Frame {
    Hello {
        vars: Vec<String>,
    },
    Ready {
        vars: Vec<String>,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        pipelining: bool,
    },
    Membership {
        id: u64,
        model: Vec<u8>,
    },
    Answer {
        id: u64,
        label: Label,
    },
    Bye,
    Error {
        reason: String,
    },
}

fn write_frame<W: Write + ?Sized>(w: &mut W, frame: &Frame) -> std::io::Result<()> {
    let line = serde_json::to_string(frame).expect("frames serialize");
    w.write_all(line.as_bytes())?;
    w.write_all(b"\n")?;
    w.flush()
}

fn read_line<R: BufRead + ?Sized>(r: &mut R) -> Result<Option<String>, OracleError> {
    let mut line = String::new();
    if r.read_line(&mut line)? == 0 {
        return Ok(None);
    }
    Ok(Some(line.trim_end().to_string()))
}

fn parse_frame(raw: &str) -> Result<Frame, OracleError> {
    serde_json::from_str(raw).map_err(|e| OracleError::Protocol {
        message: e.to_string(),
        raw: raw.to_string(),
    })
}

/// Where an external oracle lives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoint {
    /// A shell command; the oracle speaks the protocol on its stdin/stdout.
    Command(String),
    /// `host:port` of a listening oracle.
    Tcp(String),
}

impl FromStr for Endpoint {
    type Err = OracleError;

    /// `tcp:HOST:PORT` or `cmd:COMMAND`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(addr) = s.strip_prefix("tcp:") {
            Ok(Endpoint::Tcp(addr.to_string()))
        } else if let Some(cmd) = s.strip_prefix("cmd:") {
            Ok(Endpoint::Command(cmd.to_string()))
        } else {
            Err(OracleError::Config(format!(
                "endpoint `{s}` must start with `tcp:` or `cmd:`"
            )))
        }
    }
}

/// Client side of the protocol, usable as a [`MembershipOracle`].
pub struct WireOracle {
    vars: Vec<String>,
    reader: Box<dyn BufRead + Send>,
    writer: Box<dyn Write + Send>,
    next_id: u64,
    pipelining: bool,
    child: Option<Child>,
    closed: bool,
}

impl WireOracle {
    pub fn connect(endpoint: &Endpoint, vars: &[String]) -> Result<Self, OracleError> {
        match endpoint {
            Endpoint::Tcp(addr) => {
                let stream = TcpStream::connect(addr)?;
                stream.set_nodelay(true)?;
                let reader = BufReader::new(stream.try_clone()?);
                Self::handshake(Box::new(reader), Box::new(stream), vars, None)
            }
            Endpoint::Command(cmd) => {
                let mut child = Command::new("sh")
                    .arg("-c")
                    .arg(cmd)
                    .stdin(Stdio::piped())
                    .stdout(Stdio::piped())
                    .spawn()?;
                let stdin = child.stdin.take().expect("piped stdin");
                let stdout = child.stdout.take().expect("piped stdout");
                Self::handshake(Box::new(BufReader::new(stdout)), Box::new(stdin), vars, Some(child))
            }
        }
    }

    /// Runs the protocol over an existing reader/writer pair.
    pub fn over<R, W>(reader: R, writer: W, vars: &[String]) -> Result<Self, OracleError>
    where
        R: BufRead + Send + 'static,
        W: Write + Send + 'static,
    {
        Self::handshake(Box::new(reader), Box::new(writer), vars, None)
    }

    fn handshake(
        mut reader: Box<dyn BufRead + Send>,
        mut writer: Box<dyn Write + Send>,
        vars: &[String],
        child: Option<Child>,
    ) -> Result<Self, OracleError> {
        write_frame(&mut writer, &Frame::Hello { vars: vars.to_vec() })?;
        let raw = read_line(&mut reader)?.ok_or_else(|| {
            OracleError::Transport(std::io::Error::new(
                std::io::ErrorKind::UnexpectedEof,
                "oracle closed the connection during the handshake",
            ))
        })?;
        let pipelining = match parse_frame(&raw)? {
            Frame::Ready {
                vars: theirs,
                pipelining,
            } => {
                if theirs != vars {
                    return Err(OracleError::Config(format!(
                        "universe mismatch: client has {} variables, oracle declares {}",
                        vars.len(),
                        theirs.len()
                    )));
                }
                pipelining
            }
            Frame::Error { reason } => return Err(OracleError::Config(reason)),
            _ => {
                return Err(OracleError::Protocol {
                    message: "expected a ready frame".into(),
                    raw,
                })
            }
        };
        Ok(WireOracle {
            vars: vars.to_vec(),
            reader,
            writer,
            next_id: 1,
            pipelining,
            child,
            closed: false,
        })
    }

    /// Whether the peer advertised request pipelining. Queries are still
    /// issued one at a time.
    pub fn peer_supports_pipelining(&self) -> bool {
        self.pipelining
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Sends `bye` and waits for a spawned oracle process to exit.
    pub fn close(mut self) -> Result<(), OracleError> {
        self.shutdown()
    }

    fn shutdown(&mut self) -> Result<(), OracleError> {
        if self.closed {
            return Ok(());
        }
        self.closed = true;
        let sent = write_frame(&mut self.writer, &Frame::Bye);
        // dropping our end of the pipe lets a stdio child see EOF
        self.writer = Box::new(std::io::sink());
        if let Some(mut child) = self.child.take() {
            child.wait()?;
        }
        sent.map_err(Into::into)
    }
}

impl Drop for WireOracle {
    fn drop(&mut self) {
        let _ = self.shutdown();
    }
}

impl MembershipOracle for WireOracle {
    fn width(&self) -> usize {
        self.vars.len()
    }

    fn membership(&mut self, x: &Model) -> Result<Label, OracleError> {
        if x.width() != self.vars.len() {
            return Err(crate::logic::LogicError::WidthMismatch {
                expected: self.vars.len(),
                found: x.width(),
            }
            .into());
        }
        let id = self.next_id;
        self.next_id += 1;
        let model = x.to_bools().into_iter().map(u8::from).collect();
        write_frame(&mut self.writer, &Frame::Membership { id, model })?;
        let raw = read_line(&mut self.reader)?.ok_or_else(|| {
            OracleError::Transport(std::io::Error::new(
                std::io::ErrorKind::UnexpectedEof,
                "oracle closed the connection",
            ))
        })?;
        match parse_frame(&raw)? {
            Frame::Answer { id: got, label } if got == id => Ok(label),
            Frame::Answer { id: got, .. } => Err(OracleError::Protocol {
                message: format!("answer for request {got}, expected {id}"),
                raw,
            }),
            Frame::Error { reason } => Err(OracleError::Protocol { message: reason, raw }),
            _ => Err(OracleError::Protocol {
                message: "expected an answer frame".into(),
                raw,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ServeStats {
    pub queries: u64,
    pub errors: u64,
}

/// Server side: answers queries from `oracle` until `bye` or end of input.
///
/// Malformed frames get an error frame and the session continues; a hello
/// with a different universe is answered with an error frame and ends it.
pub fn serve<O, R, W>(oracle: &mut O, vars: &[String], mut reader: R, mut writer: W) -> Result<ServeStats, OracleError>
where
    O: MembershipOracle + ?Sized,
    R: BufRead,
    W: Write,
{
    let mut stats = ServeStats::default();
    let mut greeted = false;
    let mut last_id = 0u64;
    let fail = |w: &mut W, stats: &mut ServeStats, reason: String| -> Result<(), OracleError> {
        stats.errors += 1;
        write_frame(w, &Frame::Error { reason })?;
        Ok(())
    };
    while let Some(raw) = read_line(&mut reader)? {
        if raw.trim().is_empty() {
            continue;
        }
        let frame = match parse_frame(&raw) {
            Ok(f) => f,
            Err(e) => {
                fail(&mut writer, &mut stats, format!("malformed frame: {e}"))?;
                continue;
            }
        };
        match frame {
            Frame::Hello { vars: theirs } => {
                if theirs != vars {
                    let reason = format!(
                        "universe mismatch: oracle has {} variables, client sent {}",
                        vars.len(),
                        theirs.len()
                    );
                    fail(&mut writer, &mut stats, reason.clone())?;
                    return Err(OracleError::Config(reason));
                }
                greeted = true;
                write_frame(
                    &mut writer,
                    &Frame::Ready {
                        vars: vars.to_vec(),
                        pipelining: false,
                    },
                )?;
            }
            Frame::Membership { id, model } => {
                if !greeted {
                    fail(&mut writer, &mut stats, "membership before hello".into())?;
                } else if id <= last_id {
                    fail(&mut writer, &mut stats, format!("request id {id} is not increasing"))?;
                } else if model.len() != vars.len() || model.iter().any(|b| *b > 1) {
                    last_id = id;
                    fail(
                        &mut writer,
                        &mut stats,
                        format!("model must be {} bits of 0/1", vars.len()),
                    )?;
                } else {
                    last_id = id;
                    let bits: Vec<bool> = model.iter().map(|b| *b == 1).collect();
                    let label = oracle.membership(&Model::from_bools(&bits))?;
                    stats.queries += 1;
                    write_frame(&mut writer, &Frame::Answer { id, label })?;
                }
            }
            Frame::Bye => break,
            _ => fail(&mut writer, &mut stats, "unexpected frame type".into())?,
        }
    }
    Ok(stats)
}
