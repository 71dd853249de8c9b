//! Box notation for terminals.
//!
//! Each box is a bordered rectangle with its label in the top edge, its
//! referents on the first row and its conditions below a divider, one per
//! line. Complex conditions draw their boxes inline: `¬`, `◇` and `□` in
//! front of the embedded box, `⇒` between the two halves of an implication.
//! Segments of a segmented box sit side by side above their relations. The
//! main box comes first, then each presupposition box in label order.

use crate::clause::Term;
use crate::corpus::ClausalForm;
use crate::referee::{build_box_structure, infer_variable_types, BoxStructure, Condition, DrsBox, StructureError};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum BoxStyle {
    #[default]
    Unicode,
    Ascii,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RenderOptions {
    pub style: BoxStyle,
    /// Side-by-side layouts wider than this are stacked instead.
    pub width: Option<usize>,
}

struct Glyphs {
    top_left: char,
    top_right: char,
    bottom_left: char,
    bottom_right: char,
    horizontal: char,
    vertical: char,
    divider_left: char,
    divider_right: char,
    not: &'static str,
    pos: &'static str,
    nec: &'static str,
    imp: &'static str,
}

const UNICODE: Glyphs = Glyphs {
    top_left: '┌',
    top_right: '┐',
    bottom_left: '└',
    bottom_right: '┘',
    horizontal: '─',
    vertical: '│',
    divider_left: '├',
    divider_right: '┤',
    not: "¬",
    pos: "◇",
    nec: "□",
    imp: "⇒",
};

const ASCII: Glyphs = Glyphs {
    top_left: '+',
    top_right: '+',
    bottom_left: '+',
    bottom_right: '+',
    horizontal: '-',
    vertical: '|',
    divider_left: '+',
    divider_right: '+',
    not: "NOT",
    pos: "<>",
    nec: "[]",
    imp: "=>",
};

/// Lines of equal width.
#[derive(Clone, Debug)]
struct Block {
    lines: Vec<String>,
    width: usize,
}

fn width_of(s: &str) -> usize {
    s.chars().count()
}

fn pad(s: &str, width: usize) -> String {
    let mut out = s.to_string();
    out.extend(std::iter::repeat_n(' ', width.saturating_sub(width_of(s))));
    out
}

impl Block {
    fn text(s: String) -> Block {
        Block {
            width: width_of(&s),
            lines: vec![s],
        }
    }

    fn from_lines(lines: Vec<String>) -> Block {
        let width = lines.iter().map(|l| width_of(l)).max().unwrap_or(0);
        Block {
            lines: lines.iter().map(|l| pad(l, width)).collect(),
            width,
        }
    }

    fn height(&self) -> usize {
        self.lines.len()
    }

    /// Places blocks left to right, top-aligned, `gap` spaces apart.
    fn beside(blocks: &[Block], gap: usize) -> Block {
        let height = blocks.iter().map(Block::height).max().unwrap_or(0);
        let lines = (0..height)
            .map(|row| {
                let parts: Vec<String> = blocks
                    .iter()
                    .map(|b| b.lines.get(row).cloned().unwrap_or_else(|| " ".repeat(b.width)))
                    .collect();
                parts.join(&" ".repeat(gap))
            })
            .collect();
        Block::from_lines(lines)
    }

    fn stacked(blocks: &[Block]) -> Block {
        Block::from_lines(blocks.iter().flat_map(|b| b.lines.iter().cloned()).collect())
    }

    /// A short marker on the middle row of `self`, to its left.
    fn prefixed(self, marker: &str) -> Block {
        let mid = self.height() / 2;
        let blank = " ".repeat(width_of(marker));
        let lines = self
            .lines
            .into_iter()
            .enumerate()
            .map(|(i, l)| format!("{} {l}", if i == mid { marker } else { &blank }))
            .collect();
        Block::from_lines(lines)
    }
}

fn term(t: &Term) -> String {
    match t {
        Term::Variable(v) => v.to_string(),
        Term::Constant(c) => c.clone(),
    }
}

fn comparison_symbol(name: &str, style: BoxStyle) -> Option<&'static str> {
    let unicode = style == BoxStyle::Unicode;
    Some(match name {
        "EQU" => "=",
        "TPR" | "LES" => "<",
        "LEQ" if unicode => "≤",
        "LEQ" => "<=",
        "NEQ" if unicode => "≠",
        "NEQ" => "!=",
        "APX" if unicode => "≈",
        "APX" => "~",
        _ => return None,
    })
}

struct Renderer<'a> {
    structure: &'a BoxStructure,
    options: RenderOptions,
    glyphs: &'static Glyphs,
}

impl Renderer<'_> {
    fn fits(&self, block: &Block) -> bool {
        self.options.width.is_none_or(|w| block.width <= w)
    }

    /// Side by side if that fits the width, stacked otherwise.
    fn arrange(&self, blocks: &[Block], gap: usize) -> Block {
        let beside = Block::beside(blocks, gap);
        if self.fits(&beside) {
            beside
        } else {
            Block::stacked(blocks)
        }
    }

    fn frame(&self, label: &str, header: Option<String>, body: Vec<Block>) -> Block {
        let g = self.glyphs;
        let inner = header
            .iter()
            .map(|h| width_of(h))
            .chain(body.iter().map(|b| b.width))
            .chain(std::iter::once(width_of(label)))
            .max()
            .unwrap_or(0);
        let h = |n: usize| g.horizontal.to_string().repeat(n);
        let mut lines = vec![format!("{}{}{label}{}{}", g.top_left, h(1), h(inner + 1 - width_of(label)), g.top_right)];
        let row = |s: &str| format!("{} {} {}", g.vertical, pad(s, inner), g.vertical);
        if let Some(header) = header {
            lines.push(row(&header));
            lines.push(format!("{}{}{}", g.divider_left, h(inner + 2), g.divider_right));
        }
        for block in &body {
            lines.extend(block.lines.iter().map(|l| row(l)));
        }
        lines.push(format!("{}{}{}", g.bottom_left, h(inner + 2), g.bottom_right));
        Block::from_lines(lines)
    }

    fn render_box(&self, label: &crate::clause::Variable) -> Block {
        match self.structure.get(label) {
            Some(DrsBox::Simple(b)) => {
                let header = b.referents.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ");
                let body = b.conditions.iter().map(|c| self.condition(c)).collect();
                self.frame(label.as_str(), Some(header), body)
            }
            Some(DrsBox::Segmented(s)) => {
                let members: Vec<Block> = s.members.iter().map(|m| self.render_box(m)).collect();
                let mut body = Vec::new();
                if !members.is_empty() {
                    body.push(self.arrange(&members, 1));
                }
                body.extend(
                    s.relations
                        .iter()
                        .map(|r| Block::text(format!("{}({},{})", r.relation, r.left, r.right))),
                );
                self.frame(label.as_str(), None, body)
            }
            // a box label with no clauses of its own
            None => self.frame(label.as_str(), Some(String::new()), Vec::new()),
        }
    }

    fn condition(&self, c: &Condition) -> Block {
        let g = self.glyphs;
        match c {
            Condition::Concept { synset, referent } => Block::text(format!("{synset}({referent})")),
            Condition::Role { name, left, right } => Block::text(format!("{name}({},{})", term(left), term(right))),
            Condition::Comparison { name, left, right } => Block::text(match comparison_symbol(name, self.options.style) {
                Some(sym) => format!("{} {sym} {}", term(left), term(right)),
                None => format!("{name}({},{})", term(left), term(right)),
            }),
            Condition::Not(b) => self.render_box(b).prefixed(g.not),
            Condition::Pos(b) => self.render_box(b).prefixed(g.pos),
            Condition::Nec(b) => self.render_box(b).prefixed(g.nec),
            Condition::Imp(a, b) => {
                let (a, b) = (self.render_box(a), self.render_box(b));
                let arrow = Block::from_lines(
                    (0..a.height().max(b.height()))
                        .map(|i| if i == a.height() / 2 { g.imp.to_string() } else { String::new() })
                        .collect(),
                );
                let beside = Block::beside(&[a.clone(), arrow, b.clone()], 1);
                if self.fits(&beside) {
                    beside
                } else {
                    Block::stacked(&[a, Block::text(g.imp.to_string()), b])
                }
            }
            Condition::Prp { referent, label } => self.render_box(label).prefixed(&format!("{referent}:")),
        }
    }
}

/// Draws the main box followed by its presupposition boxes.
pub fn render_boxes(structure: &BoxStructure, options: RenderOptions) -> String {
    let renderer = Renderer {
        structure,
        options,
        glyphs: match options.style {
            BoxStyle::Unicode => &UNICODE,
            BoxStyle::Ascii => &ASCII,
        },
    };
    let mut out = String::new();
    for (i, label) in std::iter::once(&structure.main).chain(&structure.presuppositions).enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for line in renderer.render_box(label).lines {
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
    out
}

/// Builds the box structure of a form and renders it.
pub fn render_form(form: &ClausalForm, options: RenderOptions) -> Result<String, StructureError> {
    // type conflicts make the form invalid; render what can be read off
    let typing = infer_variable_types(form).unwrap_or_default();
    let structure = build_box_structure(form, &typing)?;
    Ok(render_boxes(&structure, options))
}
