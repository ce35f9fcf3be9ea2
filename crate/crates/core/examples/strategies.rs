//! Local and batched scheduling reach the same answers on programs with
//! negative loops, though their forests may be built in a different order.

use hybrid_mknf::slg::{Engine, Strategy};
use hybrid_mknf::symbols::SymbolTable;
use hybrid_mknf::{parse_program, parse_query};

pub fn main() {
    let mut syms = SymbolTable::new();
    let program = parse_program(
        "move(a,b). move(b,a). move(b,c). move(c,d).
         win(X) :- move(X,Y), not win(Y).",
        &mut syms,
    )
    .unwrap();
    let goal = parse_query("win(X)", &mut syms).unwrap();
    let mut tables = Vec::new();
    for strategy in [Strategy::Local, Strategy::Batched] {
        let mut engine = Engine::new(&program, strategy);
        let answers = engine.answers(goal.body[0].atom()).unwrap();
        println!("{strategy:?}:");
        for (a, v) in &answers {
            println!("  {} {}", a.display(&syms), v.as_str());
        }
        tables.push(engine.answer_table());
    }
    assert_eq!(tables[0], tables[1]);
}
