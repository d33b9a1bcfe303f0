#![no_main]

use libfuzzer_sys::fuzz_target;
use qmimo::harness::parse_csv_points;
use qmimo::harness::BerPoint;

// Bitwise image of a point; NaN-safe, unlike PartialEq.
fn key(p: &BerPoint) -> [u64; 11] {
    [
        p.snr_db_per_bit.to_bits(),
        p.gamma0.to_bits(),
        p.gamma_q0.to_bits(),
        p.bits_sent,
        p.bit_errors,
        p.ber_numerical.to_bits(),
        p.ber_analytical_full.to_bits(),
        p.ber_analytical_twoterm.to_bits(),
        p.channel_draws,
        p.channel_redraws,
        u64::from(p.saturated),
    ]
}

fuzz_target!(|text: &str| {
    // Parsing must never panic, and must be a pure function of the text.
    match (parse_csv_points(text), parse_csv_points(text)) {
        (Ok(a), Ok(b)) => {
            let ka: Vec<_> = a.iter().map(key).collect();
            let kb: Vec<_> = b.iter().map(key).collect();
            assert_eq!(ka, kb);
        }
        (Err(_), Err(_)) => {}
        _ => panic!("parse result not deterministic"),
    }
});
