use smoothwig_cli::config::{CaseStudy, ExperimentConfig, InitialCondition};

const SMALL: &str = r#"
eps = 0.5
t_final = 0.2
dt = 0.01
output = "out/small"

[potential]
kind = "free"
coefficients = []

[smoothing]
sigma_x = 0.5
sigma_k = 0.5
spectrogram_sigma_x = 1.0

[initial_condition]
kind = "gaussian_sum"
amplitude = 1.0

[grid]
field_step = 0.0625
field_points = 256
x_range = [-4.0, 4.0]
k_range = [-6.0, 6.0]
resolution = 64
"#;

#[test]
fn case_defaults_round_trip_through_toml() {
    for c in [CaseStudy::Free, CaseStudy::Harmonic, CaseStudy::Uniform] {
        let cfg = ExperimentConfig::case_study(c);
        let back = ExperimentConfig::from_toml(&cfg.to_toml()).unwrap();
        assert_eq!(back, cfg, "{}", c.name());
        // and the serialized text is stable
        assert_eq!(back.to_toml(), cfg.to_toml());
    }
}

#[test]
fn small_config_parses_with_defaults_filled() {
    let cfg = ExperimentConfig::from_toml(SMALL).unwrap();
    assert_eq!(cfg.seed_tolerance, 1e-8);
    assert_eq!(cfg.snapshot_times(), vec![0.0, 0.025, 0.05, 0.1, 0.2]);
    assert!(matches!(cfg.initial_condition, InitialCondition::GaussianSum { packets: None, .. }));
    assert_eq!(cfg.packets().len(), 3);
    let g = cfg.phase_space_grid().unwrap();
    assert_eq!(g.shape().1, 64);
    assert_eq!(cfg.output_axis().unwrap().count(), 256);
}

#[test]
fn unknown_key_reports_line_and_column() {
    let text = SMALL.replace("resolution = 64", "resolution = 64\nbogus = 1");
    let e = ExperimentConfig::from_toml(&text).unwrap_err().to_string();
    let line = text.lines().position(|l| l.starts_with("bogus")).unwrap() + 1;
    assert!(e.contains(&format!("line {line}, column 1")), "{e}");
    assert!(e.contains("bogus"), "{e}");
}

#[test]
fn type_error_reports_position() {
    let text = SMALL.replace("dt = 0.01", "dt = \"fast\"");
    let e = ExperimentConfig::from_toml(&text).unwrap_err().to_string();
    assert!(e.contains("line 4"), "{e}");
}

#[test]
fn invalid_values_name_the_field() {
    let cases = [
        ("eps = 0.5", "eps = -0.5", "eps"),
        ("dt = 0.01", "dt = 0.0", "dt"),
        ("sigma_x = 0.5", "sigma_x = -1.0", "smoothing.sigma_x"),
        ("spectrogram_sigma_x = 1.0", "spectrogram_sigma_x = 0.0", "smoothing.spectrogram_sigma_x"),
        ("resolution = 64", "resolution = 4", "grid.resolution"),
        ("x_range = [-4.0, 4.0]", "x_range = [4.0, -4.0]", "grid.x_range"),
        ("x_range = [-4.0, 4.0]", "x_range = [-40.0, 4.0]", "grid.x_range"),
        ("t_final = 0.2", "t_final = 0.2\nsnapshots = [0.1, 0.05]", "snapshots"),
        ("resolution = 64", "resolution = 64\noutput_step = 0.1", "grid.output_step"),
    ];
    for (from, to, field) in cases {
        let text = SMALL.replace(from, to);
        let e = ExperimentConfig::from_toml(&text).unwrap_err();
        assert_eq!(e.field, field, "{to}: {e}");
    }
}

#[test]
fn hermite_and_file_initial_conditions_parse() {
    let h = SMALL.replace(
        "kind = \"gaussian_sum\"\namplitude = 1.0",
        "kind = \"hermite\"\nn = 3\nomega = 2.0\namplitude = 1.0",
    );
    let cfg = ExperimentConfig::from_toml(&h).unwrap();
    assert!(matches!(cfg.initial_condition, InitialCondition::Hermite { n: 3, .. }));
    let f = SMALL.replace("kind = \"gaussian_sum\"\namplitude = 1.0", "kind = \"file\"\npath = \"u0.csv\"");
    let cfg = ExperimentConfig::from_toml(&f).unwrap();
    assert!(matches!(cfg.initial_condition, InitialCondition::File { .. }));
}

#[test]
fn load_prefixes_the_path() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.toml");
    std::fs::write(&p, SMALL.replace("eps = 0.5", "eps = -1.0")).unwrap();
    let e = ExperimentConfig::load(&p).unwrap_err();
    assert_eq!(e.field, "eps");
    assert!(e.message.contains("bad.toml"));
    assert!(ExperimentConfig::load(&dir.path().join("missing.toml")).is_err());
}
