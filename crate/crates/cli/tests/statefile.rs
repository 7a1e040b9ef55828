use eraserlab::statefile::{parse_state, render_state, StateFileError};
use eraserlab_core::random::{random_state, seeded};
use proptest::prelude::*;

proptest! {
    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>(), n in 1usize..=8) {
        let s = random_state(n, &mut seeded(seed));
        prop_assert_eq!(parse_state(&render_state(&s)).unwrap(), s);
    }

    #[test]
    fn dropping_or_adding_lines_is_rejected(seed in any::<u64>(), n in 1usize..=4, extra in any::<bool>()) {
        let text = render_state(&random_state(n, &mut seeded(seed)));
        let mut lines: Vec<&str> = text.lines().collect();
        if extra {
            lines.push("0 0");
        } else {
            lines.pop();
        }
        let mangled = lines.join("\n");
        let rejected = matches!(parse_state(&mangled), Err(StateFileError::Format { .. }));
        prop_assert!(rejected);
    }

    #[test]
    fn scaled_states_are_rejected(seed in any::<u64>(), scale in prop_oneof![0.5f64..0.99999, 1.00001f64..2.0]) {
        let s = random_state(2, &mut seeded(seed));
        let mut text = String::from("qubits 2\n");
        for a in s.amplitudes() {
            text.push_str(&format!("{} {}\n", a.re * scale, a.im * scale));
        }
        let rejected = matches!(parse_state(&text), Err(StateFileError::NotNormalized(_)));
        prop_assert!(rejected);
    }

    #[test]
    fn garbage_never_panics(text in "\\PC{0,120}") {
        let _ = parse_state(&text);
    }
}
