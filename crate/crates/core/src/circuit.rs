// SPDX-License-Identifier: Apache-2.0

//! Gate sequences, their evaluation, and the circuit text format.
//!
//! Text is a whitespace-separated list of terms such as `TOF(c,d,b)`. In each
//! term every wire but the last is a control and the last wire is the target.
//! The leftmost gate is applied to the input first.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::gate::{Gate, WIRE_NAMES};
use crate::perm::{compose, Perm, WirePerm};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Circuit {
    gates: Vec<Gate>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitParseError {
    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: &'static str },
    #[error("unknown gate {name:?} at byte {pos}")]
    UnknownGate { pos: usize, name: String },
    #[error("{name} at byte {pos} takes {expected} wires, found {found}")]
    Arity { pos: usize, name: String, expected: usize, found: usize },
    #[error("unknown wire {wire:?} at byte {pos}")]
    UnknownWire { pos: usize, wire: char },
    #[error("control wire repeated at byte {pos}")]
    RepeatedControl { pos: usize },
    #[error("target wire is also a control at byte {pos}")]
    TargetInControls { pos: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitBytesError {
    #[error("circuit bytes truncated")]
    Truncated,
    #[error("invalid gate byte {0:#04x}")]
    BadGate(u8),
}

impl Circuit {
    pub fn new() -> Circuit {
        Circuit::default()
    }

    pub fn from_gates(gates: Vec<Gate>) -> Circuit {
        Circuit { gates }
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Appends all gates of `other` after this circuit's gates.
    pub fn extend(&mut self, other: &Circuit) {
        self.gates.extend_from_slice(&other.gates);
    }

    /// The permutation computed by the circuit.
    pub fn eval(&self) -> Perm {
        self.gates
            .iter()
            .fold(Perm::IDENTITY, |acc, g| compose(acc, g.to_perm()))
    }

    /// Gates in reverse order; computes the inverse function.
    pub fn reversed(&self) -> Circuit {
        Circuit { gates: self.gates.iter().rev().copied().collect() }
    }

    /// Every gate relabeled by `sigma`; computes `self.eval().conjugate(sigma)`.
    pub fn conjugated(&self, sigma: WirePerm) -> Circuit {
        Circuit { gates: self.gates.iter().map(|g| g.conjugate(sigma)).collect() }
    }

    /// Length-prefixed gate bytes: `u16` little-endian count, then one byte per gate.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 + self.gates.len());
        out.extend_from_slice(&(self.gates.len() as u16).to_le_bytes());
        out.extend(self.gates.iter().map(|g| g.to_byte()));
        out
    }

    /// Decodes one circuit from the front of `bytes`, returning it and the
    /// number of bytes consumed.
    pub fn from_bytes(bytes: &[u8]) -> Result<(Circuit, usize), CircuitBytesError> {
        let len_bytes = bytes.get(..2).ok_or(CircuitBytesError::Truncated)?;
        let n = u16::from_le_bytes([len_bytes[0], len_bytes[1]]) as usize;
        let body = bytes.get(2..2 + n).ok_or(CircuitBytesError::Truncated)?;
        let gates = body
            .iter()
            .map(|&b| Gate::from_byte(b).ok_or(CircuitBytesError::BadGate(b)))
            .collect::<Result<Vec<_>, _>>()?;
        Ok((Circuit { gates }, 2 + n))
    }
}

impl From<Vec<Gate>> for Circuit {
    fn from(gates: Vec<Gate>) -> Self {
        Circuit { gates }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, g) in self.gates.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{g}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Circuit[{self}]")
    }
}

impl FromStr for Circuit {
    type Err = CircuitParseError;

    fn from_str(s: &str) -> Result<Circuit, CircuitParseError> {
        parse_circuit(s)
    }
}

pub fn format_circuit(c: &Circuit) -> String {
    c.to_string()
}

pub fn parse_circuit(text: &str) -> Result<Circuit, CircuitParseError> {
    Parser { text, bytes: text.as_bytes(), pos: 0 }.circuit()
}

struct Parser<'a> {
    text: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8, expected: &'static str) -> Result<(), CircuitParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(CircuitParseError::Syntax { pos: self.pos, expected })
        }
    }

    fn circuit(mut self) -> Result<Circuit, CircuitParseError> {
        let mut gates = Vec::new();
        loop {
            self.skip_ws();
            if self.pos == self.bytes.len() {
                return Ok(Circuit { gates });
            }
            gates.push(self.gate()?);
        }
    }

    fn gate(&mut self) -> Result<Gate, CircuitParseError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(CircuitParseError::Syntax { pos: start, expected: "gate name" });
        }
        let name = &self.text[start..self.pos];
        let arity = match name.to_ascii_uppercase().as_str() {
            "NOT" => 1,
            "CNOT" => 2,
            "TOF" => 3,
            "TOF4" => 4,
            _ => return Err(CircuitParseError::UnknownGate { pos: start, name: name.to_string() }),
        };
        self.expect(b'(', "'('")?;
        let mut wires = Vec::with_capacity(4);
        loop {
            self.skip_ws();
            let wpos = self.pos;
            let c = match self.peek() {
                Some(c) if c.is_ascii_alphabetic() => c as char,
                _ => return Err(CircuitParseError::Syntax { pos: wpos, expected: "wire name" }),
            };
            let w = WIRE_NAMES
                .iter()
                .position(|&n| n == c.to_ascii_lowercase())
                .ok_or(CircuitParseError::UnknownWire { pos: wpos, wire: c })?;
            self.pos += 1;
            wires.push((w as u8, wpos));
            self.skip_ws();
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b')') => {
                    self.pos += 1;
                    break;
                }
                _ => return Err(CircuitParseError::Syntax { pos: self.pos, expected: "',' or ')'" }),
            }
        }
        if wires.len() != arity {
            return Err(CircuitParseError::Arity {
                pos: start,
                name: name.to_string(),
                expected: arity,
                found: wires.len(),
            });
        }
        let (target, tpos) = wires[arity - 1];
        let mut controls = 0u8;
        for &(w, wpos) in &wires[..arity - 1] {
            if controls & (1 << w) != 0 {
                return Err(CircuitParseError::RepeatedControl { pos: wpos });
            }
            controls |= 1 << w;
        }
        if controls & (1 << target) != 0 {
            return Err(CircuitParseError::TargetInControls { pos: tpos });
        }
        Ok(Gate::new(target, controls).expect("validated above"))
    }
}
