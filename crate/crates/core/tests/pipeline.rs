mod common;

use eogmark::features::BlinkDetectorConfig;
use eogmark::format::{self, SignalFile};
use eogmark::pipeline::{embed, extract, verify};
use eogmark::Region;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn embed_extract_verify_through_files() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let cfg = BlinkDetectorConfig::default();
    for trial in 0..1000 {
        let carrier = common::micro(&common::random_blinky(&mut rng));
        // Regions anywhere in the baseline before the first blink.
        let region = Region::new(rng.gen_range(0..=8) * 2, 128).unwrap();
        let embedded = embed(&carrier, region, None, cfg).unwrap();

        let text = format::write_quantized(&embedded.watermarked, Some(&embedded.header));
        let SignalFile::Quantized {
            signal,
            watermark: Some(header),
        } = format::parse(&text, None).unwrap()
        else {
            panic!("trial {trial}: expected watermarked file");
        };
        assert_eq!(signal, embedded.watermarked);
        assert_eq!(header, embedded.header);

        let extracted = extract(&signal, &header).unwrap();
        assert_eq!(extracted.restored, carrier, "trial {trial}");
        assert_eq!(extracted.bits, embedded.bits, "trial {trial}");

        let report = verify(&signal, &header, Some(&carrier)).unwrap();
        assert!(report.passed(), "trial {trial}: {report:?}");
    }
}

#[test]
fn detector_settings_travel_with_the_file() {
    let mut rng = StdRng::seed_from_u64(3);
    let carrier = common::micro(&common::random_blinky(&mut rng));
    let cfg = BlinkDetectorConfig::new(3.5, 0.4).unwrap();
    let embedded = embed(&carrier, Region::default(), None, cfg).unwrap();
    let text = format::write_quantized(&embedded.watermarked, Some(&embedded.header));
    assert!(text.contains("#detector 3.5 0.4\n"));
    let SignalFile::Quantized {
        signal,
        watermark: Some(header),
    } = format::parse(&text, None).unwrap()
    else {
        panic!("expected watermarked file");
    };
    assert_eq!(header.detector, cfg);
    assert!(verify(&signal, &header, None).unwrap().passed());
}
