#![no_main]

use libfuzzer_sys::fuzz_target;
use qmimo::quantizer::{distortion_factor, QuantizerSpec};

fuzz_target!(|text: &str| {
    if let Ok((spec, rho)) = QuantizerSpec::parse_table(text) {
        // Anything the parser accepts must be a structurally sound grid.
        assert!(rho.is_finite() && (0.0..1.0).contains(&rho));
        assert_eq!(spec.levels().len(), 1 << spec.b());
        assert_eq!(spec.thresholds().len(), (1 << spec.b()) - 1);
        for probe in [-1e300, -2.5, -1.0, 0.0, 1e-9, 0.7, 3.0, 1e300] {
            let q = spec.quantize_normalized(probe);
            assert!(spec.levels().contains(&q));
        }
        // The rendered form must survive a second pass whenever the
        // recomputed distortion is representable (grids with astronomically
        // large levels overflow it, and the render embeds that value).
        let fresh = distortion_factor(&spec);
        if fresh.is_finite() && (0.0..1.0).contains(&fresh) {
            let (again, _) = QuantizerSpec::parse_table(&spec.to_table()).unwrap();
            assert_eq!(spec, again);
        }
    }
});
