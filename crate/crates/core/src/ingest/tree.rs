//! Reader for Penn-style bracketed trees.
//!
//! A leaf is `(TAG surface)`; a group holding child groups is an internal
//! node, optionally labeled. Tags and surfaces are runs of characters that
//! are neither whitespace nor parentheses. The parser is iterative, so
//! nesting depth is bounded only by memory.

use thiserror::Error;

/// Preterminal tag of empty elements (traces, null pronouns).
pub const EMPTY_CATEGORY_TAG: &str = "-NONE-";

/// Parse failure, positioned by byte offset into the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("unbalanced parentheses at byte {0}")]
    UnbalancedParens(usize),
    #[error("group at byte {0} has no leaves")]
    EmptyGroup(usize),
    #[error("group at byte {0} mixes child groups and bare tokens")]
    MixedContent(usize),
    #[error("token outside any bracketed tree at byte {0}")]
    StrayToken(usize),
}

impl TreeError {
    pub fn offset(&self) -> usize {
        match *self {
            TreeError::UnbalancedParens(o)
            | TreeError::EmptyGroup(o)
            | TreeError::MixedContent(o)
            | TreeError::StrayToken(o) => o,
        }
    }
}

/// 1-based line and column (in chars) of a byte offset.
pub fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, col)
}

/// A terminal of a parsed tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeToken {
    pub surface: String,
    pub is_empty_category: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tree {
    Leaf { tag: String, surface: String },
    Node { label: Option<String>, children: Vec<Tree> },
}

impl Tree {
    /// Leaves in left-to-right order.
    pub fn tokens(&self) -> Vec<TreeToken> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(node) = stack.pop() {
            match node {
                Tree::Leaf { tag, surface } => out.push(TreeToken {
                    surface: surface.clone(),
                    is_empty_category: tag == EMPTY_CATEGORY_TAG,
                }),
                Tree::Node { children, .. } => stack.extend(children.iter().rev()),
            }
        }
        out
    }

    pub fn leaf_count(&self) -> usize {
        self.tokens().len()
    }
}

enum Lexeme<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn lex(text: &str) -> impl Iterator<Item = (usize, Lexeme<'_>)> {
    let mut rest = text.char_indices().peekable();
    std::iter::from_fn(move || loop {
        let (pos, c) = rest.next()?;
        match c {
            '(' => return Some((pos, Lexeme::Open)),
            ')' => return Some((pos, Lexeme::Close)),
            c if c.is_whitespace() => continue,
            _ => {
                let mut end = pos + c.len_utf8();
                while let Some(&(p, c)) = rest.peek() {
                    if c == '(' || c == ')' || c.is_whitespace() {
                        break;
                    }
                    end = p + c.len_utf8();
                    rest.next();
                }
                return Some((pos, Lexeme::Atom(&text[pos..end])));
            }
        }
    })
}

struct Frame {
    open: usize,
    label: Option<String>,
    atoms: Vec<String>,
    children: Vec<Tree>,
}

impl Frame {
    fn close(self) -> Result<Tree, TreeError> {
        let Frame {
            open,
            label,
            mut atoms,
            children,
        } = self;
        match (label, atoms.len(), children.is_empty()) {
            (Some(tag), 1, true) => Ok(Tree::Leaf {
                tag,
                surface: atoms.pop().unwrap_or_default(),
            }),
            (label, 0, false) => Ok(Tree::Node { label, children }),
            (_, 0, true) => Err(TreeError::EmptyGroup(open)),
            _ => Err(TreeError::MixedContent(open)),
        }
    }
}

/// Parses every top-level bracketed tree in `text`. Empty or
/// whitespace-only input yields no trees.
pub fn parse_trees(text: &str) -> Result<Vec<Tree>, TreeError> {
    let mut trees = Vec::new();
    let mut stack: Vec<Frame> = Vec::new();
    for (pos, lexeme) in lex(text) {
        match lexeme {
            Lexeme::Open => stack.push(Frame {
                open: pos,
                label: None,
                atoms: Vec::new(),
                children: Vec::new(),
            }),
            Lexeme::Close => {
                let frame = stack.pop().ok_or(TreeError::UnbalancedParens(pos))?;
                let tree = frame.close()?;
                match stack.last_mut() {
                    Some(parent) => parent.children.push(tree),
                    None => trees.push(tree),
                }
            }
            Lexeme::Atom(atom) => {
                let frame = stack.last_mut().ok_or(TreeError::StrayToken(pos))?;
                if frame.label.is_none() && frame.atoms.is_empty() && frame.children.is_empty() {
                    frame.label = Some(atom.to_string());
                } else {
                    frame.atoms.push(atom.to_string());
                }
            }
        }
    }
    match stack.last() {
        Some(open) => Err(TreeError::UnbalancedParens(open.open)),
        None => Ok(trees),
    }
}
