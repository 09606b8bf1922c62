use num_bigint::BigUint;
use proptest::prelude::*;

use stanley_grid::fractal;
use stanley_grid::greedy::build_partition;
use stanley_grid::grid;
use stanley_grid::radix::{add_two, evaluate, represent, sub_two, DigitString, ExactRational, RationalBase};
use stanley_grid::witness::witness;

fn ternary_string(max_len: usize) -> impl Strategy<Value = DigitString> {
    proptest::collection::vec(0u8..3, 1..=max_len).prop_map(|d| DigitString::from_digits(d).canonical())
}

fn coprime_base() -> impl Strategy<Value = RationalBase> {
    (2u32..12, 1u32..12).prop_filter_map("p > q, coprime", |(p, q)| RationalBase::new(p, q).ok())
}

proptest! {
    #[test]
    fn represent_then_evaluate(bytes in proptest::collection::vec(any::<u8>(), 0..24), base in coprime_base()) {
        let n = BigUint::from_bytes_be(&bytes);
        let w = represent(&n, base);
        prop_assert!(w.is_canonical());
        prop_assert!(w.max_digit().unwrap() < base.p() as u8);
        let value = evaluate(&w, base).unwrap();
        prop_assert_eq!(value, ExactRational::from_integer(n));
    }

    #[test]
    fn carry_rule_steps_by_two(w in ternary_string(30)) {
        let next = add_two(&w).unwrap();
        prop_assert!(next.is_canonical());
        let h = RationalBase::THREE_HALVES;
        prop_assert_eq!(evaluate(&next, h).unwrap(), evaluate(&w, h).unwrap() + 2);
        prop_assert_eq!(sub_two(&next), Some(w));
    }

    #[test]
    fn three_routes_to_the_row(w in ternary_string(16)) {
        let walked = grid::row_of(&w).unwrap();
        prop_assert_eq!(grid::locate(&w).unwrap().row, walked);
        prop_assert_eq!(fractal::row_by_zoom(&w), Some(walked));
        prop_assert_eq!(fractal::locate_by_zoom(&w), grid::locate(&w).unwrap());
    }

    #[test]
    fn located_cell_holds_the_string(w in ternary_string(12)) {
        let at = grid::locate(&w).unwrap();
        prop_assert_eq!(grid::cell(at), w);
    }

    #[test]
    fn witnesses_validate(w in ternary_string(40), pick in any::<u64>()) {
        let row = fractal::row_by_zoom(&w).unwrap();
        prop_assume!(row > 0);
        let j = pick % row;
        let found = witness(&w, j).unwrap();
        let (c, d, x) = (
            found.c.value_in_integer_base(3),
            found.d.value_in_integer_base(3),
            w.value_in_integer_base(3),
        );
        prop_assert!(c < d);
        prop_assert_eq!(&c + &x, &d * 2u32);
        prop_assert_eq!(fractal::row_by_zoom(&found.c), Some(j));
        prop_assert_eq!(fractal::row_by_zoom(&found.d), Some(j));
    }

    #[test]
    fn sieve_rows_extend(small in 1u64..600, extra in 1u64..600) {
        let short = build_partition(small).unwrap();
        let long = build_partition(small + extra).unwrap();
        for (i, row) in short.rows().iter().enumerate() {
            prop_assert_eq!(row.as_slice(), &long.row(i)[..row.len()]);
        }
    }
}
