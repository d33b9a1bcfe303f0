#![no_main]

use libfuzzer_sys::fuzz_target;
use num_complex::Complex64;
use qmimo::modem::Constellation;

// Hard-decision slicing must be total: any float input, including NaN and
// infinities, maps to some valid label sequence.
fuzz_target!(|data: &[u8]| {
    if data.is_empty() {
        return;
    }
    let m = [4usize, 16, 64][(data[0] % 3) as usize];
    let c = Constellation::new(m).unwrap();
    let symbols: Vec<Complex64> = data[1..]
        .chunks_exact(16)
        .map(|ch| {
            let re = f64::from_le_bytes(ch[..8].try_into().unwrap());
            let im = f64::from_le_bytes(ch[8..].try_into().unwrap());
            Complex64::new(re, im)
        })
        .collect();
    let bits = c.demodulate_hard(&symbols);
    assert_eq!(bits.len(), symbols.len() * (m.trailing_zeros() as usize));
    assert!(bits.iter().all(|b| *b <= 1));
});
