//! Text syntax:
//!
//! ```text
//! node  := label | "tau" | op "(" node ("," node)+ ")"
//! op    := "->" | "X" | "+" | "*"
//! label := bare | "'" any-but-quote "'"
//! ```
//!
//! An operator symbol only acts as an operator when followed by `(`.

use super::{NodeLabel, Operator, ProcessTree, Shape};
use crate::error::{Error, Result};
use crate::label::ActivityLabel;

pub(super) fn parse_tree_text(text: &str) -> Result<ProcessTree> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
    };
    let shape = parser.node()?;
    parser.skip_ws();
    if parser.pos != parser.chars.len() {
        return Err(parser.error("trailing input"));
    }
    ProcessTree::from_shape(shape)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::Parse {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn node(&mut self) -> Result<Shape> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.error("expected a node")),
            Some('\'') => {
                self.pos += 1;
                let begin = self.pos;
                while self.peek().is_some_and(|c| c != '\'') {
                    self.pos += 1;
                }
                if self.peek().is_none() {
                    return Err(self.error("unterminated quoted label"));
                }
                let label: String = self.chars[begin..self.pos].iter().collect();
                self.pos += 1;
                let activity = ActivityLabel::new(&label).map_err(|_| Error::Parse {
                    position: start,
                    message: format!("invalid activity label `{label}`"),
                })?;
                Ok(Shape::Leaf(NodeLabel::Activity(activity)))
            }
            Some(c) if is_delimiter(c) => Err(self.error(&format!("unexpected `{c}`"))),
            Some(_) => {
                while self.peek().is_some_and(|c| !is_delimiter(c) && !c.is_whitespace()) {
                    self.pos += 1;
                }
                let token: String = self.chars[start..self.pos].iter().collect();
                self.skip_ws();
                if self.peek() == Some('(') {
                    let op = Operator::from_symbol(&token).ok_or_else(|| Error::Parse {
                        position: start,
                        message: format!("unknown operator `{token}`"),
                    })?;
                    self.pos += 1;
                    let mut children = vec![self.node()?];
                    loop {
                        self.skip_ws();
                        match self.peek() {
                            Some(',') => {
                                self.pos += 1;
                                children.push(self.node()?);
                            }
                            Some(')') => {
                                self.pos += 1;
                                break;
                            }
                            _ => return Err(self.error("expected `,` or `)`")),
                        }
                    }
                    if op == Operator::Loop && children.len() != 2 {
                        return Err(Error::Arity {
                            position: start,
                            message: format!("loop needs exactly 2 children, got {}", children.len()),
                        });
                    }
                    if children.len() < 2 {
                        return Err(Error::Arity {
                            position: start,
                            message: format!("operator `{token}` needs at least 2 children"),
                        });
                    }
                    Ok(Shape::Op(op, children))
                } else if token == "tau" || token == "τ" {
                    Ok(Shape::Leaf(NodeLabel::Tau))
                } else {
                    let activity = ActivityLabel::new(&token).map_err(|_| Error::Parse {
                        position: start,
                        message: format!("invalid activity label `{token}`"),
                    })?;
                    Ok(Shape::Leaf(NodeLabel::Activity(activity)))
                }
            }
        }
    }
}

fn is_delimiter(c: char) -> bool {
    matches!(c, '(' | ')' | ',' | '\'')
}

/// Quotes a label when the bare form would not parse back to it.
pub(super) fn quote_label(label: &str) -> String {
    let bare_ok =
        !label.chars().any(|c| is_delimiter(c) || c.is_whitespace()) && Operator::from_symbol(label).is_none();
    if bare_ok {
        label.to_string()
    } else {
        format!("'{label}'")
    }
}
