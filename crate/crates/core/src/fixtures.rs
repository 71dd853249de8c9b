//! Sample documents in the corpus file format.
//!
//! Used throughout the tests and the guide. `EVERYTHING_NEW_GOLD` introduces
//! `t1` in `b0`, the box holding its time concept.

/// "Tom isn't afraid of anything." Negation plus a presupposed name.
pub const TOM_AFRAID: &str = r#"Tom isn't afraid of anything.

b1 REF x1
b1 male "n.02" x1
b1 Name x1 "tom"
b2 REF t1
b2 EQU t1 "now"
b2 time "n.08" t1
b2 NOT b3
b3 REF s1
b3 Time s1 t1
b3 Experiencer s1 x1
b3 afraid "a.01" s1
b3 Stimulus s1 x2
b3 REF x2
b3 entity "n.01" x2
"#;

/// "He played the piano and she sang." A segmented box with two segments.
pub const PIANO_SANG: &str = r#"He played the piano and she sang.

b6 DRS b1
b6 DRS b4
b2 REF x1
b5 REF x3
b2 male "n.02" x1
b5 female "n.02" x3
b1 REF e1
b4 REF e2
b1 play "v.03" e1
b4 sing "v.01" e2
b1 Agent e1 x1
b4 Agent e2 x3
b1 Theme e1 x2
b4 Time e2 t2
b3 REF x2
b4 REF t2
b3 piano "n.01" x2
b4 TPR t2 "now"
b1 REF t1
b4 time "n.08" t2
b1 time "n.08" t1
b6 CONTINUATION b1 b4
b1 TPR t1 "now"
b1 Time e1 t1
"#;

/// "He put all his money in the box." Implication with nested presuppositions
/// and token alignments.
pub const HIS_MONEY: &str = r#"He put all his money in the box.

b1 REF x1 % He [0...2] his [11...14]
b1 male "n.02" x1 % He [0...2] his [11...14]
b2 REF t1 % put [3...6]
b2 TPR t1 "now" % put [3...6]
b2 time "n.08" t1 % put [3...6]
b5 REF e1 % put [3...6]
b5 Agent e1 x1 % put [3...6]
b5 Theme e1 x2 % put [3...6]
b5 Time e1 t1 % put [3...6]
b5 put "v.01" e1 % put [3...6]
b2 IMP b3 b5 % all [7...10]
b3 REF x2 % all [7...10]
b3 PartOf x2 x3 % all [7...10]
b3 entity "n.01" x2 % all [7...10]
b4 REF x3 % his [11...14]
b4 Owner x3 x1 % his [11...14]
b4 money "n.01" x3 % money [15...20]
b5 Destination e1 x4 % in [21...23]
b6 REF x4 % the [24...27]
b6 box "n.01" x4 % box [28...31]
"#;

/// "Nick Leeson was arrested for collapse of Barings Bank PLC." Multi-word
/// constants joined with `~`.
pub const NICK_LEESON: &str = r#"Nick Leeson was arrested for collapse of Barings Bank PLC.

b1 REF x1
b1 Name x1 "nick~leeson"
b1 male "n.02" x1
b2 REF t1
b2 TPR t1 "now"
b2 Time e1 t1
b2 time "n.08" t1
b2 REF e1
b2 Patient e1 x1
b2 arrest "v.01" e1
b2 Theme e1 x2
b2 REF x2
b2 collapse "n.04" x2
b2 Patient x2 x3
b3 REF x3                      %
b3 Name x3 "barings~bank~plc"
b3 company "n.01" x3
"#;

/// A parser's output for "Everything is new".
pub const EVERYTHING_NEW_SYSTEM: &str = r#"Everything is new

b3 IMP b2 b1
b2 REF x1
b2 every "n.01" x1
b1 REF x2
b1 Agent x2 x1
b1 new "a.01" x2
b1 Time x2 x3
b0 REF x3
b0 time "n.08" x3
b3 REF x0
"#;

/// The gold analysis of "Everything is new".
pub const EVERYTHING_NEW_GOLD: &str = r#"Everything is new

b0 IMP b1 b2
b1 REF x1
b1 entity "n.01" x1
b2 REF s1
b2 Theme s1 x1
b2 new "a.01" s1
b2 Time s1 t1
b0 REF t1
b0 time "n.08" t1
b0 EQU t1 "now"
"#;

pub const ALL: [&str; 6] = [
    TOM_AFRAID,
    PIANO_SANG,
    HIS_MONEY,
    NICK_LEESON,
    EVERYTHING_NEW_SYSTEM,
    EVERYTHING_NEW_GOLD,
];

/// Parses one of the constants above.
pub fn load(text: &str) -> crate::ClausalForm {
    crate::corpus::parse_document(text).expect("fixture parses")
}
