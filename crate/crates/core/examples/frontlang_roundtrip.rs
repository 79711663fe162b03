//! Parse a front description, print it back in canonical form, and show
//! what a parse error looks like.
//!
//! `cargo run --example frontlang_roundtrip`

use engel::frontlang;

const SOURCE: &str = "
# a circle with a ripple
generator ripple { x: cos(1) + 0.1 cos(4); y: sin(1) - 1e-2 sin(5); }
script nudge {
    deform at=0.3 width=0.05 dy=0.2;
    swallowtail_birth at=0.7 width=0.05 frames=32;
    balance;
}
";

fn main() {
    let doc = frontlang::parse(SOURCE).expect("valid document");
    let text = frontlang::emit(&doc);
    print!("{text}");
    assert_eq!(frontlang::parse(&text).unwrap(), doc);
    for m in doc.script("nudge").unwrap().to_moves(64).unwrap() {
        println!("# {:?}", m);
    }

    for bad in ["generator g { x: cos(1) y: sin(1); }", "script s { twist at=0.1; }", "generator g { x: cos(1.5); y: 0; }"] {
        match frontlang::parse(bad) {
            Ok(_) => println!("accepted: {bad}"),
            Err(e) => println!("{bad}\n  -> {e}"),
        }
    }
}
