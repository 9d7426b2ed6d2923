use iontrap::program::{parse_program, DurationUnit, PulseProgramFile, PulseRecord, RegisterHeader};
use proptest::prelude::*;

const CORPUS: &[&str] = &[
    "register N=1 eta=0.5 cutoff=4\n",
    "register N=1 eta=0.5 cutoff=4\npulse ion=0 k=0 phase=0 dur=0per_omega\n",
    "register N=2 eta=0.4819 cutoff=4\npulse ion=0 k=1 phase=pi/2 dur=3pi/2per_omega\n",
    "# comment only first\nregister N=1 eta=0.9692 cutoff=4\n",
    "register cutoff=6 eta=0.25 N=3\npulse dur=1per_omega phase=pi k=0 ion=2\n",
    "register N=1 eta=0.1 cutoff=2 omega_rad_s=879645.943\npulse ion=0 k=1 phase=0 dur=1.5e-5seconds\n",
    "  register   N=2   eta=0.7  cutoff=3  \n\n\npulse ion=1 k=0 phase=-pi/2 dur=2per_omega\n",
    "register N=1 eta=0.5 cutoff=4 # trailing comment\npulse ion=0 k=0 phase=0.5*pi dur=1e2per_omega #x\n",
    "register N=8 eta=0.05 cutoff=2\npulse ion=7 k=1 phase=+1.25 dur=+0.5per_omega\n",
    "register N=1 eta=0.999 cutoff=32\npulse ion=0 k=0 phase=2*pi dur=pi/4per_omega\n",
    "register N=2 eta=0.4819 cutoff=4\npulse ion=0 k=1 phase=pi/2 dur=5.1per_omega\npulse ion=1 k=1 phase=pi/2 dur=58.57per_omega\npulse ion=0 k=1 phase=pi/2 dur=3.05per_omega\n",
    "register N=1 eta=0.3 cutoff=4\npulse ion=0 k=0 phase=1 dur=1per_omega\npulse ion=0 k=0 phase=2 dur=2per_omega\npulse ion=0 k=0 phase=3 dur=3per_omega\npulse ion=0 k=0 phase=4 dur=4per_omega\n",
    "register N=1 eta=0.3 cutoff=4\npulse ion=0 k=0 phase=0.1 dur=.5per_omega\n",
    "register N=1 eta=0.3 cutoff=4\npulse ion=0 k=0 phase=1E-3 dur=2.E1per_omega\n",
    "register N=3 eta=0.6 cutoff=4 omega_rad_s=1e6\npulse ion=0 k=0 phase=0 dur=1e-6seconds\npulse ion=1 k=0 phase=0 dur=2per_omega\n",
    "register N=1 eta=0.3 cutoff=4\r\npulse ion=0 k=0 phase=0 dur=1per_omega\r\n",
    "\tregister\tN=1\teta=0.3\tcutoff=4\n",
    "register N=1 eta=0.3 cutoff=4\npulse ion=0 k=0 phase=7pi/4 dur=0.25pi/1per_omega\n",
    "register N=2 eta=0.9064 cutoff=5\npulse ion=1 k=1 phase=-0 dur=0per_omega\n",
    "register N=4 eta=0.2355 cutoff=4\npulse ion=3 k=0 phase=-3.5 dur=123456.789per_omega\n",
    "register N=1 eta=0.5 cutoff=4 omega_rad_s=6.283185307179586e5\npulse ion=0 k=1 phase=pi dur=0seconds\n",
    "#a\n#b\n#c\nregister N=1 eta=0.5 cutoff=4\n#d\npulse ion=0 k=0 phase=0 dur=1per_omega\n#e\n",
];

#[test]
fn corpus_parses_and_canonical_form_is_idempotent() {
    assert!(CORPUS.len() >= 20);
    for text in CORPUS {
        let parsed = parse_program(text).unwrap_or_else(|e| panic!("{text:?}: {e}"));
        let canonical = parsed.to_canonical();
        let reparsed = parse_program(&canonical).unwrap();
        assert_eq!(parsed, reparsed, "{text:?}");
        assert_eq!(canonical, reparsed.to_canonical());
    }
}

#[test]
fn rejected_corpus() {
    let bad = [
        ("register N=0 eta=0.5 cutoff=4", 1),
        ("register N=1 eta=1.5 cutoff=4", 1),
        ("register N=1 eta=0.5 cutoff=1", 1),
        ("register N=1 eta=0.5 cutoff=4 omega_rad_s=-1", 1),
        ("register N=1 eta=0.5 cutoff=4 N=2", 1),
        ("register N=1 eta=abc cutoff=4", 1),
        ("register N=1 eta=0.5 cutoff=4 color=red", 1),
        ("register N=1 eta=0.5 cutoff=4\npulse ion=0 k=0 phase=0", 2),
        ("register N=1 eta=0.5 cutoff=4\npulse ion=0 k=0 phase=0 dur=1", 2),
        ("register N=1 eta=0.5 cutoff=4\npulse ion=0 k=0 phase=pi/0 dur=1per_omega", 2),
        ("register N=1 eta=0.5 cutoff=4\n\npulse ion=-1 k=0 phase=0 dur=1per_omega", 3),
        ("register N=1 eta=0.5 cutoff=4\npulse ion=0 k=0 phase=0 dur=1per_omega extra", 2),
    ];
    for (text, line) in bad {
        let err = parse_program(text).expect_err(text);
        assert_eq!(err.line(), line, "{text}: {err}");
    }
}

fn header() -> impl Strategy<Value = RegisterHeader> {
    (1usize..=8, 0.001f64..0.999, 2usize..=32, proptest::option::of(1.0f64..1e7))
        .prop_map(|(n_ions, eta, cutoff, omega_rad_s)| RegisterHeader { n_ions, eta, cutoff, omega_rad_s })
}

fn file() -> impl Strategy<Value = PulseProgramFile> {
    header().prop_flat_map(|h| {
        let record = (0..h.n_ions, 0u32..=1, -10.0f64..10.0, 0.0f64..1e3, any::<bool>()).prop_map(
            move |(ion, k, phase, duration, secs)| PulseRecord {
                ion,
                k,
                phase,
                duration,
                unit: if secs && h.omega_rad_s.is_some() {
                    DurationUnit::Seconds
                } else {
                    DurationUnit::PerOmega
                },
            },
        );
        proptest::collection::vec(record, 0..12)
            .prop_map(move |pulses| PulseProgramFile { header: h, pulses })
    })
}

proptest! {
    #[test]
    fn generated_files_round_trip(f in file()) {
        let text = f.to_canonical();
        let parsed = parse_program(&text).unwrap();
        prop_assert_eq!(&parsed, &f);
        prop_assert_eq!(parsed.to_canonical(), text);
    }
}
