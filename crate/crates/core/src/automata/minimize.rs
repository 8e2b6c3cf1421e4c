use std::collections::HashMap;

use super::{Dfa, SemiAutomaton, State};

/// Minimal complete DFA for `L(d)`, by Moore-style partition refinement over
/// the reachable part.
///
/// States of the result are numbered in BFS order from the initial state, so
/// two DFAs for the same language minimize to structurally equal values.
pub fn minimize(d: &Dfa) -> Dfa {
    let k = d.base().num_symbols();
    let reachable = d.reachable_order();

    // class id per original state; usize::MAX for unreachable
    let mut class = vec![usize::MAX; d.num_states()];
    for &q in &reachable {
        class[q] = usize::from(d.is_final(q));
    }
    let mut num_classes = {
        let has_final = reachable.iter().any(|&q| d.is_final(q));
        let has_non_final = reachable.iter().any(|&q| !d.is_final(q));
        if has_final && has_non_final {
            2
        } else {
            // collapse to a single class 0
            for &q in &reachable {
                class[q] = 0;
            }
            1
        }
    };

    loop {
        let mut signatures: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![usize::MAX; d.num_states()];
        for &q in &reachable {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[q]);
            sig.extend((0..k).map(|x| class[d.step(q, x)]));
            let fresh = signatures.len();
            next[q] = *signatures.entry(sig).or_insert(fresh);
        }
        let refined = signatures.len();
        class = next;
        if refined == num_classes {
            break;
        }
        num_classes = refined;
    }

    // renumber classes in BFS order from the initial class
    let rep: Vec<State> = {
        let mut rep = vec![usize::MAX; num_classes];
        for &q in &reachable {
            if rep[class[q]] == usize::MAX {
                rep[class[q]] = q;
            }
        }
        rep
    };
    let mut order = vec![usize::MAX; num_classes];
    let mut queue = vec![class[d.initial()]];
    order[class[d.initial()]] = 0;
    let mut i = 0;
    while i < queue.len() {
        let c = queue[i];
        i += 1;
        for x in 0..k {
            let t = class[d.step(rep[c], x)];
            if order[t] == usize::MAX {
                order[t] = queue.len();
                queue.push(t);
            }
        }
    }

    let mut delta = vec![0; num_classes * k];
    let mut finals = Vec::new();
    for (new, &c) in queue.iter().enumerate() {
        for x in 0..k {
            delta[new * k + x] = order[class[d.step(rep[c], x)]];
        }
        if d.is_final(rep[c]) {
            finals.push(new);
        }
    }
    let base = SemiAutomaton::new(d.alphabet().clone(), num_classes, delta)
        .expect("class table is well formed");
    Dfa::new(base, 0, finals).expect("class indices in range")
}
