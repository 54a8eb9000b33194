use middle_curve::cli::{CurveFile, MiddleFile, ScsFile};
use middle_curve::error::Error;
use middle_curve::frechet::{
    continuous_frechet_decision, discrete_frechet, discrete_frechet_decision,
};
use middle_curve::geometry::{Curve, CurveSet, Point};
use middle_curve::middle::{verify, BruteForce, ProvenancedCurve, Variant, VertexRef};
use middle_curve::reduction::{
    decode_middle_to_sequence, encode_sequence, supersequence_to_middle, supersequence_values,
    ReductionInstance, ScsInstance,
};
use proptest::prelude::*;

fn int_curve(id: &str, d: usize, max_len: usize) -> impl Strategy<Value = Curve> {
    let id = id.to_string();
    prop::collection::vec(prop::collection::vec(-5i32..=5, d), 1..=max_len).prop_map(move |pts| {
        Curve::new(
            id.clone(),
            pts.into_iter()
                .map(|p| Point::new(p.into_iter().map(f64::from).collect()).unwrap())
                .collect(),
        )
        .unwrap()
    })
}

fn int_set(max_n: usize, d: usize, max_len: usize) -> impl Strategy<Value = CurveSet> {
    prop::collection::vec(
        prop::collection::vec(prop::collection::vec(-3i32..=3, d), 1..=max_len),
        1..=max_n,
    )
    .prop_map(|curves| {
        CurveSet::new(
            curves
                .into_iter()
                .enumerate()
                .map(|(i, pts)| {
                    Curve::new(
                        format!("P{}", i + 1),
                        pts.into_iter()
                            .map(|p| Point::new(p.into_iter().map(f64::from).collect()).unwrap())
                            .collect(),
                    )
                    .unwrap()
                })
                .collect(),
        )
        .unwrap()
    })
}

fn letters(max_len: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(prop::bool::ANY, 1..=max_len)
        .prop_map(|v| v.into_iter().map(|b| if b { 'B' } else { 'A' }).collect())
}

/// Subsequence of `s` keeping the positions selected by `mask`, or `None`
/// if nothing is kept.
fn subsequence(s: &str, mask: &[bool]) -> Option<String> {
    let out: String = s
        .chars()
        .zip(mask.iter().cycle())
        .filter(|(_, &k)| k)
        .map(|(c, _)| c)
        .collect();
    (!out.is_empty()).then_some(out)
}

fn is_subsequence(s: &str, sup: &str) -> bool {
    let mut it = sup.chars();
    s.chars().all(|c| it.any(|d| d == c))
}

/// Whether every position of `sstar` can be assigned to some sequence so
/// that each sequence is matched in order to the positions assigned to it.
fn positions_covered(seqs: &[String], sstar: &str) -> bool {
    let t = sstar.len();
    let letters: Vec<char> = sstar.chars().collect();
    {
        fn embeddings(s: &[char], sup: &[char], from: usize) -> Vec<u32> {
            if s.is_empty() {
                return vec![0];
            }
            let mut out = Vec::new();
            for i in from..sup.len() {
                if sup[i] == s[0] {
                    for rest in embeddings(&s[1..], sup, i + 1) {
                        out.push(rest | 1 << i);
                    }
                }
            }
            out
        }
        let per: Vec<Vec<u32>> = seqs
            .iter()
            .map(|s| embeddings(&s.chars().collect::<Vec<_>>(), &letters, 0))
            .collect();
        let full = (1u32 << t) - 1;
        let mut reach = vec![0u32];
        for options in &per {
            let mut next: Vec<u32> = reach
                .iter()
                .flat_map(|r| options.iter().map(move |o| r | o))
                .collect();
            next.sort_unstable();
            next.dedup();
            reach = next;
        }
        reach.contains(&full)
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn discrete_frechet_is_symmetric_and_decides_at_its_value(
        p in int_curve("p", 2, 6),
        q in int_curve("q", 2, 6),
    ) {
        let pq = discrete_frechet(&p, &q).unwrap();
        let qp = discrete_frechet(&q, &p).unwrap();
        prop_assert_eq!(pq.squared, qp.squared);
        prop_assert!(pq.witness.is_valid_for(p.len(), q.len()));
        prop_assert!(discrete_frechet_decision(&p, &q, pq.value).unwrap());
        if pq.value > 0.0 {
            prop_assert!(!discrete_frechet_decision(&p, &q, pq.value - 1e-6).unwrap());
        }
    }

    #[test]
    fn continuous_is_bounded_by_discrete(p in int_curve("p", 1, 5), q in int_curve("q", 1, 5)) {
        let value = discrete_frechet(&p, &q).unwrap().value;
        prop_assert!(continuous_frechet_decision(&p, &q, value).unwrap());
    }

    #[test]
    fn continuous_decision_is_monotone(p in int_curve("p", 2, 4), q in int_curve("q", 2, 4), delta in 0.0f64..6.0) {
        if continuous_frechet_decision(&p, &q, delta).unwrap() {
            prop_assert!(continuous_frechet_decision(&p, &q, delta + 0.5).unwrap());
        }
    }

    #[test]
    fn variants_form_a_hierarchy(
        ps in int_set(3, 1, 4),
        picks in prop::collection::vec((0usize..3, 0usize..4), 1..=4),
        delta in 0u32..=6,
    ) {
        let refs: Vec<VertexRef> = picks
            .iter()
            .map(|&(c, k)| {
                let curve = &ps.curves()[c % ps.len()];
                VertexRef::new(curve.id(), k % curve.len() + 1)
            })
            .collect();
        let m = ProvenancedCurve::resolve(refs, &ps).unwrap();
        let delta = f64::from(delta) / 2.0;
        let r = verify(&m, &ps, delta, Variant::Restricted).unwrap();
        let o = verify(&m, &ps, delta, Variant::Ordered).unwrap();
        let u = verify(&m, &ps, delta, Variant::Unordered).unwrap();
        prop_assert!(!r || o);
        prop_assert!(!o || u);
    }

    #[test]
    fn solver_witnesses_verify_and_optimum_is_tight(ps in int_set(3, 1, 3), ell in 1usize..=3) {
        let solver = BruteForce::default();
        for v in Variant::ALL {
            let best = solver.optimize(&ps, ell, v).unwrap();
            let Some(radius) = best.radius else { continue };
            let m = best.witness.unwrap();
            prop_assert!(m.len() <= ell);
            prop_assert!(verify(&m, &ps, radius, v).unwrap());
            if radius > 0.0 {
                prop_assert!(!solver.solve(&ps, radius - 1e-6, ell, v).unwrap().feasible);
            }
            let at = solver.solve(&ps, radius, ell, v).unwrap();
            prop_assert!(at.feasible);
            prop_assert!(verify(at.witness.as_ref().unwrap(), &ps, radius, v).unwrap());
        }
    }

    #[test]
    fn encoded_curves_alternate_gadgets(s in letters(4), t in 0usize..=4) {
        let c = encode_sequence(&s, t).unwrap();
        let xs = c.scalars();
        prop_assert_eq!(xs.len(), s.len() * (4 * t + 5));
        prop_assert!(xs.iter().all(|&x| (-3.0..=3.0).contains(&x) && x.fract() == 0.0));
        // Letter gadgets are exactly the runs of |x| >= 2.
        let mut gadgets = Vec::new();
        let mut i = 0;
        while i < xs.len() {
            if xs[i].abs() >= 2.0 {
                gadgets.push(xs[i..i + 3].to_vec());
                i += 3;
            } else {
                i += 1;
            }
        }
        let expected: Vec<Vec<f64>> = s
            .chars()
            .map(|ch| if ch == 'A' { vec![-2.0, -3.0, -2.0] } else { vec![2.0, 3.0, 2.0] })
            .collect();
        prop_assert_eq!(gadgets, expected);
    }

    #[test]
    fn supersequence_round_trip(
        sstar in letters(4),
        masks in prop::collection::vec(prop::collection::vec(prop::bool::ANY, 1..=4), 1..=3),
    ) {
        let seqs: Vec<String> = masks.iter().filter_map(|m| subsequence(&sstar, m)).collect();
        prop_assume!(!seqs.is_empty());
        let t = sstar.len();
        let a = sstar.chars().filter(|&c| c == 'A').count();
        let inst = ScsInstance::new(seqs.clone(), t).unwrap();
        let ri = ReductionInstance::new(&inst, a, t - a).unwrap();

        // Restricted provenance needs every letter of s* to be used by some
        // sequence. It can still be missing then: the buffer vertex between
        // letters owned by different sequences may have no source that can
        // be matched to itself, e.g. S = {A, B} with s* = BA.
        let covered = positions_covered(&seqs, &sstar);
        match supersequence_to_middle(&sstar, &ri) {
            Ok(m) => {
                prop_assert!(covered);
                prop_assert_eq!(m.curve().scalars(), supersequence_values(&sstar).unwrap());
                prop_assert!(verify(&m, ri.curve_set(), 1.0, Variant::Restricted).unwrap());
                for g in ri.curve_set() {
                    prop_assert!(continuous_frechet_decision(m.curve(), g, 1.0).unwrap());
                }
            }
            Err(e) => prop_assert!(matches!(e, Error::Precondition(_))),
        }

        // The same curve with any provenance is an unordered middle curve,
        // and decoding it gives back s*.
        // When G has vertices at both letter positions the same curve with
        // any provenance is an unordered middle curve, and decoding it gives
        // back s*.
        let values = supersequence_values(&sstar).unwrap();
        let refs: Option<Vec<VertexRef>> = values
            .iter()
            .map(|&x| {
                ri.g().iter().find_map(|c| {
                    c.scalars().iter().position(|&y| y == x).map(|k| VertexRef::new(c.id(), k + 1))
                })
            })
            .collect();
        let Some(refs) = refs else { return Ok(()) };
        let m = ProvenancedCurve::resolve(refs, ri.curve_set());
        if let Ok(m) = m {
            prop_assert!(verify(&m, ri.curve_set(), 1.0, Variant::Unordered).unwrap());
            let decoded = decode_middle_to_sequence(m.curve(), a, t - a).unwrap();
            prop_assert_eq!(decoded.len(), t);
            prop_assert_eq!(&decoded, &sstar);
            for s in &seqs {
                prop_assert!(is_subsequence(s, &decoded));
            }
        }
    }

    #[test]
    fn curve_files_round_trip(ps in int_set(3, 2, 4)) {
        let text = CurveFile::from_curves(&ps).unwrap().to_json().unwrap();
        let back = CurveFile::parse(&text).unwrap();
        prop_assert_eq!(back.to_curve_set().unwrap(), ps);
        prop_assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn float_curve_files_round_trip(xs in prop::collection::vec(-1e6f64..1e6, 1..6)) {
        let ps = CurveSet::new(vec![Curve::from_scalars("x", &xs).unwrap()]).unwrap();
        let back = CurveFile::parse(&CurveFile::from_curves(&ps).unwrap().to_json().unwrap()).unwrap();
        prop_assert_eq!(back.to_curve_set().unwrap(), ps);
    }

    #[test]
    fn middle_files_round_trip(ps in int_set(2, 1, 3), delta in 0.0f64..10.0, k in 0usize..3) {
        let c = &ps.curves()[0];
        let m = ProvenancedCurve::resolve(vec![VertexRef::new(c.id(), k % c.len() + 1)], &ps).unwrap();
        for v in Variant::ALL {
            let file = MiddleFile::new(&m, delta, v).unwrap();
            let text = file.to_json().unwrap();
            let back = MiddleFile::parse(&text).unwrap();
            prop_assert_eq!(&back, &file);
            prop_assert_eq!(back.refs(), m.refs().to_vec());
            prop_assert_eq!(back.delta().unwrap(), delta);
            prop_assert_eq!(back.variant().unwrap(), v);
        }
    }

    #[test]
    fn scs_files_round_trip(seqs in prop::collection::vec(letters(3), 1..=3), t in 0usize..6) {
        let file = ScsFile { sequences: seqs, t };
        let back = ScsFile::parse(&file.to_json().unwrap()).unwrap();
        prop_assert_eq!(&back, &file);
        prop_assert!(back.instance().is_ok());
    }
}

#[test]
fn formula_curve_for_letters_from_different_sequences_is_not_restricted() {
    let inst = ScsInstance::new(["A", "B"], 2).unwrap();
    let ri = ReductionInstance::new(&inst, 1, 1).unwrap();
    assert!(supersequence_to_middle("AB", &ri).is_err());
    assert!(supersequence_to_middle("BA", &ri).is_err());
    let (_, restricted) =
        middle_curve::reduction::reduction_equivalence(&inst, Variant::Restricted).unwrap();
    assert!(restricted);
}
