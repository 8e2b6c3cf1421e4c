//! Acceptance suite: one line per criterion, non-zero exit on any failure.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use commsync::automata::{equivalent, minimize, Alphabet, Dfa, SemiAutomaton, StateSet, Word};
use commsync::commutative::{
    commutative_automaton, decompose, decomposition_member, decomposition_to_dfa, Decomposition, ShuffleComponent,
};
use commsync::gadgets::{
    np_gadget_case_i, np_gadget_case_ii, pspace_gadget, sync_into_subset, unary_intersection_nonempty, GadgetOutput,
    NpGadgetInput, PspaceGadgetInput,
};
use commsync::random;
use commsync::solvers::{exact_constrained, greedy_sync, solve_auto, solve_exact_decomposition, SolverConfig};
use commsync::unary::{unary_set_synchronizes, UnaryComponent};
use commsync::vectors::{
    classify, classify_constraint, component_vectors, maximal_vectors, normalize_infinite, parse_vector,
    vector_of, ComplexityClass, VectorSet,
};

type Check = Result<String, String>;

fn vs(items: &[&str]) -> VectorSet {
    VectorSet::from_vectors(items.iter().map(|t| parse_vector(t).unwrap()).collect()).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn reference_examples() -> Check {
    use ComplexityClass::*;
    let cases: [(&[&str], ComplexityClass); 9] = [
        (&["2,inf,0"], NpComplete),
        (&["1,inf,1"], NpComplete),
        (&["2,inf,0", "1,2,inf"], NpComplete),
        (&["2,inf,0", "inf,1,inf"], PspaceComplete),
        (&["1,inf,0"], PolyTime),
        (&["inf,0,inf"], PolyTime),
        (&["2,inf,inf,0", "inf,inf,inf,0", "0,1,inf,1"], NpComplete),
        (&["2,inf,0", "inf,inf,0"], PolyTime),
        (&["inf,2,0"], NpComplete),
    ];
    for (items, want) in cases {
        let got = classify(&vs(items));
        ensure(got == want, || format!("{items:?}: got {got}, want {want}"))?;
    }
    let max = maximal_vectors(&vs(&["inf,1,0", "inf,2,1", "1,0,0"]));
    ensure(max == vs(&["inf,2,1"]), || format!("maximal vectors {max:?}"))?;
    Ok(format!("{} classifications and 1 maximal-vector set exact", cases.len()))
}

fn commutative_automaton_law() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut tested = 0;
    let mut attempts = 0;
    while tested < 200 {
        attempts += 1;
        ensure(attempts < 100_000, || "could not generate enough small DFAs".into())?;
        let k = rng.gen_range(1..=3);
        let comps = rng.gen_range(1..=3);
        let dec = random::decomposition(&mut rng, k, comps, 3, 0.4);
        let d = minimize(&decomposition_to_dfa(&dec).map_err(|e| e.to_string())?);
        if d.num_states() > 6 {
            continue;
        }
        let copies = rng.gen_range(0..3);
        let junk = rng.gen_range(0..2);
        let scrambled = random::scramble(&mut rng, &d, copies, junk);
        let c = commutative_automaton(&scrambled).map_err(|e| e.to_string())?;
        ensure(equivalent(c.dfa(), &scrambled).unwrap(), || {
            format!("commutative automaton differs for {}", dec.to_json())
        })?;
        let back = decomposition_to_dfa(&decompose(&scrambled.to_partial()).unwrap()).unwrap();
        ensure(equivalent(&back, &d).unwrap(), || format!("decomposition round trip differs for {}", dec.to_json()))?;
        tested += 1;
    }

    // Σ⁺ over two letters
    let plus = SemiAutomaton::from_maps(Alphabet::letters(2).unwrap(), &[vec![1, 1], vec![1, 1]])
        .unwrap()
        .with_initial(0, vec![1])
        .unwrap();
    let c = commutative_automaton(&minimize(&plus)).unwrap();
    let (n, f) = (c.dfa().num_states(), c.dfa().finals().len());
    ensure(n == 4 && f == 3, || format!("Σ⁺ gives {n} states, {f} final"))?;
    Ok(format!("{tested} scrambled DFAs equivalent; Σ⁺ has 4 states, 3 final"))
}

fn solver_agreement() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let config = SolverConfig::default();
    let mut yes = 0;
    let mut routes: BTreeMap<&'static str, usize> = BTreeMap::new();
    for i in 0..600 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=3);
        let sa = random::semi_automaton(&mut rng, n, k);
        let comps = rng.gen_range(1..=3);
        let dec = random::decomposition(&mut rng, k, comps, 3, 0.5);
        let auto = solve_auto(&sa, &dec, &config).map_err(|e| format!("instance {i}: {e}"))?;
        let exact = solve_exact_decomposition(&sa, &dec, &config).map_err(|e| format!("instance {i}: {e}"))?;
        ensure(auto.is_yes() == exact.is_yes(), || {
            format!("instance {i}: auto {} vs exact {}", auto.is_yes(), exact.is_yes())
        })?;
        *routes.entry(auto.method().as_str()).or_default() += 1;
        if let Some(w) = auto.witness() {
            ensure(sa.synchronizes(w) && decomposition_member(&dec, w), || format!("instance {i}: bad witness"))?;
            yes += 1;
        }
    }
    Ok(format!("600 instances agree ({yes} yes), 0 disagreements, methods {routes:?}"))
}

fn simplification_soundness() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let config = SolverConfig::default();
    for i in 0..400 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=3);
        let sa = random::semi_automaton(&mut rng, n, k);
        let comps = rng.gen_range(1..=4);
        let dec = random::decomposition(&mut rng, k, comps, 3, 0.5);
        let base = solve_exact_decomposition(&sa, &dec, &config).map_err(|e| e.to_string())?.is_yes();

        let normalized = solve_exact_decomposition(&sa, &normalize_infinite(&dec), &config)
            .map_err(|e| e.to_string())?
            .is_yes();
        ensure(base == normalized, || format!("instance {i}: normalization changed the answer"))?;

        let max = maximal_vectors(&vector_of(&dec));
        let kept: Vec<ShuffleComponent> = dec
            .components()
            .iter()
            .zip(component_vectors(&dec))
            .filter(|(_, v)| max.contains(v))
            .map(|(c, _)| c.clone())
            .collect();
        let pruned = Decomposition::new(dec.alphabet().clone(), kept).unwrap();
        let pruned = solve_exact_decomposition(&sa, &pruned, &config).map_err(|e| e.to_string())?.is_yes();
        ensure(base == pruned, || format!("instance {i}: dropping dominated components changed the answer"))?;
    }
    Ok("400 instances unchanged under both simplifications".into())
}

fn unary_images() -> Check {
    let alphabet = Alphabet::letters(1).unwrap();
    let mut checks = 0u64;
    for n in 1..=6usize {
        let total = n.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let map: Vec<usize> = (0..n)
                .map(|_| {
                    let t = c % n;
                    c /= n;
                    t
                })
                .collect();
            let sa = SemiAutomaton::from_maps(alphabet.clone(), std::slice::from_ref(&map)).unwrap();
            for bits in 1..(1u64 << n) {
                // oracle: iterate the image up to exponent 2^n
                let mut s = bits;
                let mut any = s.count_ones() == 1;
                for _ in 0..(1u64 << n) {
                    let mut t = 0u64;
                    for (q, &to) in map.iter().enumerate() {
                        if s >> q & 1 == 1 {
                            t |= 1 << to;
                        }
                    }
                    s = t;
                    any |= s.count_ones() == 1;
                }
                let claimed = unary_set_synchronizes(&sa, StateSet::from_bits(bits), 0).unwrap();
                ensure(any == claimed, || format!("map {map:?} subset {bits:b}"))?;
                checks += 1;
            }
        }
    }
    Ok(format!("{checks} (automaton, subset) pairs, exhaustive n ≤ 6"))
}

fn power_set_reaches_singleton(sa: &SemiAutomaton) -> Option<usize> {
    let start = sa.full_set();
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([(start, 0)]);
    while let Some((s, d)) = queue.pop_front() {
        if s.len() == 1 {
            return Some(d);
        }
        for x in 0..sa.num_symbols() {
            let t = sa.step_set(s, x);
            if seen.insert(t) {
                queue.push_back((t, d + 1));
            }
        }
    }
    None
}

fn greedy_agreement() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut yes = 0;
    for i in 0..10_000 {
        let n = rng.gen_range(1..=6);
        let k = rng.gen_range(1..=2);
        let sa = random::semi_automaton(&mut rng, n, k);
        let oracle = power_set_reaches_singleton(&sa);
        let greedy = greedy_sync(&sa);
        ensure(oracle.is_some() == greedy.is_some(), || format!("instance {i}: answers differ"))?;
        if let Some(w) = greedy {
            ensure(sa.synchronizes(&w), || format!("instance {i}: witness does not synchronize"))?;
            ensure(w.len() <= n * n * n, || format!("instance {i}: length {} > n³", w.len()))?;
            yes += 1;
        }
    }
    Ok(format!("10000 automata agree ({yes} synchronizing), all witnesses ≤ n³"))
}

fn all_unary_dfas(max_states: usize) -> Vec<Dfa> {
    let mut out = Vec::new();
    for n in 1..=max_states {
        for code in 0..n.pow(n as u32) {
            let mut c = code;
            let next: Vec<usize> = (0..n)
                .map(|_| {
                    let t = c % n;
                    c /= n;
                    t
                })
                .collect();
            for mask in 0..(1u32 << n) {
                let finals = (0..n).filter(|&q| mask >> q & 1 == 1).collect();
                out.push(commsync::gadgets::unary_dfa(next.clone(), finals).unwrap());
            }
        }
    }
    out
}

fn gadget_answer(g: &GadgetOutput) -> Result<bool, String> {
    let b = decomposition_to_dfa(&g.constraint).map_err(|e| e.to_string())?.to_partial();
    Ok(exact_constrained(&g.automaton, &b, &SolverConfig::default())
        .map_err(|e| e.to_string())?
        .is_yes())
}

fn np_reduction() -> Check {
    let dfas = all_unary_dfas(3);
    let mut tuples: Vec<Vec<Dfa>> = dfas.iter().map(|d| vec![d.clone()]).collect();
    for a in &dfas {
        for b in &dfas {
            tuples.push(vec![a.clone(), b.clone()]);
        }
    }
    let mut yes = 0;
    for automata in &tuples {
        let inter = unary_intersection_nonempty(automata).map_err(|e| e.to_string())?.is_some();
        yes += usize::from(inter);
        let inp = NpGadgetInput {
            automata: automata.clone(),
            m: 2,
            pinning: None,
        };
        let g1 = np_gadget_case_i(&inp).map_err(|e| e.to_string())?;
        ensure(gadget_answer(&g1)? == inter, || format!("case (i) mismatch, intersection {inter}"))?;
        let g2 = np_gadget_case_ii(&NpGadgetInput { m: 1, ..inp }).map_err(|e| e.to_string())?;
        ensure(gadget_answer(&g2)? == inter, || format!("case (ii) mismatch, intersection {inter}"))?;
    }
    Ok(format!("{} tuples ({yes} non-empty), both cases agree", tuples.len()))
}

fn pspace_reduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut yes = 0;
    let samples = 2500;
    for i in 0..samples {
        let n = rng.gen_range(1..=5);
        let sa = random::semi_automaton(&mut rng, n, 2);
        let subset = random::subset(&mut rng, n);
        let oracle = sync_into_subset(&sa, subset).map_err(|e| e.to_string())?.is_some();
        yes += usize::from(oracle);
        let g = pspace_gadget(&PspaceGadgetInput {
            automaton: sa,
            subset,
            m: 1,
            pinning: None,
        })
        .map_err(|e| e.to_string())?;
        ensure(gadget_answer(&g)? == oracle, || format!("instance {i}: gadget disagrees with oracle {oracle}"))?;
    }
    Ok(format!("{samples} instances ({yes} yes) agree"))
}

fn pipeline() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..150 {
        let k = rng.gen_range(1..=4);
        let count = rng.gen_range(1..=4);
        let set = random::vector_set(&mut rng, k, count, 3, 0.4);
        let dec = set.to_decomposition(&Alphabet::letters(k).unwrap()).unwrap();
        let d = decomposition_to_dfa(&dec).map_err(|e| e.to_string())?;
        let report = classify_constraint(&d.to_partial()).map_err(|e| e.to_string())?;
        ensure(report.complexity == classify(&set), || {
            format!("set {i}: direct {} vs pipeline {}", classify(&set), report.complexity)
        })?;
    }

    let big = Decomposition::new(
        Alphabet::letters(4).unwrap(),
        vec![ShuffleComponent::new(vec![
            UnaryComponent::star(),
            UnaryComponent::star(),
            UnaryComponent::star(),
            UnaryComponent::singleton(3),
        ])],
    )
    .unwrap();
    let d = decomposition_to_dfa(&big).unwrap();
    ensure(d.num_states() == 40, || format!("timing DFA has {} states", d.num_states()))?;
    let started = Instant::now();
    let report = classify_constraint(&d.to_partial()).map_err(|e| e.to_string())?;
    let took = started.elapsed();
    ensure(report.complexity == ComplexityClass::PspaceComplete, || "40-state DFA misclassified".into())?;
    ensure(took < Duration::from_secs(5), || format!("40-state pipeline took {took:?}"))?;
    Ok(format!("150 vector sets agree; 4-letter 40-state DFA in {took:.2?}"))
}

fn ideal_property() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut instances = 0;
    while instances < 100 {
        let n = rng.gen_range(2..=8);
        let sa = random::semi_automaton(&mut rng, n, 2);
        let Some(w) = greedy_sync(&sa) else { continue };
        for _ in 0..10 {
            let random_word = |rng: &mut ChaCha8Rng| {
                let len = rng.gen_range(0..6);
                Word::new((0..len).map(|_| rng.gen_range(0..2)).collect())
            };
            let u = random_word(&mut rng);
            let v = random_word(&mut rng);
            let uwv = u.concat(&w).concat(&v);
            ensure(sa.synchronizes(&uwv), || format!("uwv fails to synchronize for n = {n}"))?;
        }
        instances += 1;
    }
    Ok("100 instances × 10 extensions synchronize".into())
}

type Criterion = (&'static str, Duration, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("reference classification regression", Duration::from_secs(1), reference_examples),
        ("commutative automaton accepts the same language", Duration::from_secs(10), commutative_automaton_law),
        ("dispatching solver agrees with exhaustive search", Duration::from_secs(60), solver_agreement),
        ("normalization and dominated-component removal are sound", Duration::from_secs(60), simplification_soundness),
        ("unary singleton images appear by exponent n-1", Duration::from_secs(30), unary_images),
        ("greedy synchronization matches power-set search", Duration::from_secs(60), greedy_agreement),
        ("NP reductions match unary intersection", Duration::from_secs(120), np_reduction),
        ("PSPACE reduction matches subset synchronization", Duration::from_secs(120), pspace_reduction),
        ("vector and automaton classification agree", Duration::from_secs(60), pipeline),
        ("synchronizing words stay synchronizing under extension", Duration::from_secs(5), ideal_property),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let took = started.elapsed();
        let outcome = match outcome {
            Ok(detail) if took > *limit => Err(format!("{detail}, but took {took:.2?} > {limit:?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {:>2} {name}: {detail} ({took:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2} {name}: {why} ({took:.2?})", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
