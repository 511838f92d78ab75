use std::io::{BufRead, BufReader, Write};
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::thread;
use std::time::{Duration, Instant};

use super::protocol::END;
use super::AdapterError;

struct Running {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<String>,
}

impl Drop for Running {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

enum Failure {
    Timeout,
    Fatal(AdapterError),
}

/// One backend subprocess in strict request/response lockstep.
pub struct ProcessChannel {
    command: String,
    timeout: Duration,
    running: Option<Running>,
}

impl ProcessChannel {
    pub fn spawn(command: &str, timeout: Duration) -> Result<ProcessChannel, AdapterError> {
        let mut channel = ProcessChannel {
            command: command.to_string(),
            timeout,
            running: None,
        };
        channel.ensure_running()?;
        Ok(channel)
    }

    fn ensure_running(&mut self) -> Result<&mut Running, AdapterError> {
        if self.running.is_none() {
            let mut child = Command::new("sh")
                .arg("-c")
                .arg(&self.command)
                .stdin(Stdio::piped())
                .stdout(Stdio::piped())
                .stderr(Stdio::null())
                .spawn()
                .map_err(|e| AdapterError::Unavailable(format!("cannot start `{}`: {e}", self.command)))?;
            let stdin = child.stdin.take().expect("piped stdin");
            let stdout = child.stdout.take().expect("piped stdout");
            let (tx, rx) = mpsc::channel();
            thread::spawn(move || {
                for line in BufReader::new(stdout).lines() {
                    let Ok(l) = line else { break };
                    if tx.send(l).is_err() {
                        break;
                    }
                }
            });
            self.running = Some(Running {
                child,
                stdin,
                lines: rx,
            });
        }
        Ok(self.running.as_mut().expect("just started"))
    }

    fn attempt(&mut self, line: &str) -> Result<Vec<String>, Failure> {
        let timeout = self.timeout;
        let command = self.command.clone();
        let running = self.ensure_running().map_err(Failure::Fatal)?;
        let written = writeln!(running.stdin, "{line}").and_then(|_| running.stdin.flush());
        if let Err(e) = written {
            return Err(Failure::Fatal(AdapterError::Unavailable(format!(
                "`{command}` is not accepting requests: {e}"
            ))));
        }
        let deadline = Instant::now() + timeout;
        let mut reply = Vec::new();
        loop {
            let left = deadline.saturating_duration_since(Instant::now());
            match running.lines.recv_timeout(left) {
                Ok(l) if l == END => {
                    reply.push(l);
                    return Ok(reply);
                }
                Ok(l) => reply.push(l),
                Err(RecvTimeoutError::Timeout) => return Err(Failure::Timeout),
                Err(RecvTimeoutError::Disconnected) if reply.is_empty() => {
                    return Err(Failure::Fatal(AdapterError::Unavailable(format!(
                        "`{command}` exited without replying"
                    ))))
                }
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(Failure::Fatal(AdapterError::Protocol(
                        "reply stream ended before END".into(),
                    )))
                }
            }
        }
    }

    /// Sends one request line and returns the reply lines including `END`.
    /// A timed-out request restarts the backend and is retried once.
    pub fn exchange(&mut self, line: &str) -> Result<Vec<String>, AdapterError> {
        for _ in 0..2 {
            match self.attempt(line) {
                Ok(reply) => return Ok(reply),
                Err(Failure::Timeout) => self.running = None,
                Err(Failure::Fatal(e)) => {
                    self.running = None;
                    return Err(e);
                }
            }
        }
        Err(AdapterError::Timeout {
            ms: self.timeout.as_millis() as u64,
        })
    }
}
