//! Evolve the encoded Bell state of the 3-qubit repetition code block by
//! block and print every block, then the entropies behind the CI.

use qci::codes::repetition_code;
use qci::frame::{complete_frame, transform_channel, RegisterMap};
use qci::pauli::depolarizing_channel;
use qci::state::{initial_bell_state, StateLayout};

fn main() -> qci::Result<()> {
    let code = repetition_code(3)?;
    let frame = complete_frame(&code)?;
    let n = code.n();
    let map = RegisterMap::data_only(n);
    let mut state = initial_bell_state(&StateLayout::full(&code, 0));
    for q in 0..n {
        let channel = transform_channel(&frame, &depolarizing_channel(q, 0.1, n)?, &map)?;
        state.apply_channel(&channel)?;
    }
    println!("{} blocks of side {}:", state.n_nonzero_blocks(), state.block_dim());
    print!("{}", state.debug_dump()?);

    let reduced = state.trace_out_reference()?;
    let ci = state.coherent_information()?;
    println!("\nafter tracing out the reference: {} blocks of side {}", reduced.n_nonzero_blocks(), reduced.block_dim());
    println!("S(Q) = {:.6}  S(RQ) = {:.6}  CI = {:.6} bits", ci.s_q, ci.s_rq, ci.ci_bits);
    Ok(())
}
