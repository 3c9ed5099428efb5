use num_complex::Complex64;
use proptest::prelude::*;
use smoothwig::io::{
    decode_field, decode_phase_space, encode_field, encode_phase_space, read_csv, read_field, read_phase_space,
    write_field, write_field_csv, write_phase_space, write_profile_csv,
};
use smoothwig::phasespace::{FieldKind, PhaseSpaceField, PhaseSpaceGrid};
use smoothwig::{Axis, ComplexField1D};

#[test]
fn files_round_trip_through_disk() {
    let dir = tempfile::tempdir().unwrap();
    let a = Axis::new(-1.5, 0.25, 13).unwrap();
    let f = ComplexField1D::from_fn(a, |x| Complex64::new(x.sin(), x * x));
    let p = dir.path().join("sub/f.psf1");
    write_field(&p, &f).unwrap();
    assert_eq!(read_field(&p).unwrap(), f);

    let grid = PhaseSpaceGrid::new(a, Axis::new(3.0, 0.5, 7).unwrap());
    let w = PhaseSpaceField::from_fn(grid, FieldKind::Spectrogram, |x, k| x * 10.0 + k);
    let q = dir.path().join("w.psf2");
    write_phase_space(&q, &w).unwrap();
    let back = read_phase_space(&q).unwrap();
    assert_eq!(back, w);
    assert_eq!(back.at(2, 3), w.grid().x_axis().at(2) * 10.0 + w.grid().k_axis().at(3));

    let c = dir.path().join("f.csv");
    write_field_csv(&c, &f).unwrap();
    let (h, rows) = read_csv(&c).unwrap();
    assert_eq!(h, vec!["x", "re", "im"]);
    assert_eq!(rows.len(), 13);
    assert_eq!(rows[3], vec![a.at(3), f.values()[3].re, f.values()[3].im]);

    let m = dir.path().join("m.csv");
    write_profile_csv(&m, "k", &a, &vec![1.0; 13]).unwrap();
    assert_eq!(read_csv(&m).unwrap().0, vec!["k", "value"]);
    // no temporary files left behind
    let leftovers = std::fs::read_dir(dir.path()).unwrap().filter(|e| {
        e.as_ref().unwrap().file_name().to_string_lossy().contains(".tmp")
    });
    assert_eq!(leftovers.count(), 0);
}

proptest! {
    #[test]
    fn binary_formats_are_lossless(
        start in -1e3f64..1e3, step in 1e-6f64..10.0,
        vals in proptest::collection::vec(proptest::num::f64::NORMAL, 4..64),
        kind in 0u32..3,
    ) {
        let n = vals.len() / 2;
        let a = Axis::new(start, step, n).unwrap();
        let f = ComplexField1D::new(a, (0..n).map(|i| Complex64::new(vals[2 * i], vals[2 * i + 1])).collect()).unwrap();
        prop_assert_eq!(decode_field(&encode_field(&f)).unwrap(), f);

        let grid = PhaseSpaceGrid::new(Axis::new(start, step, 2).unwrap(), Axis::new(-start, step * 2.0, n).unwrap());
        let arr = ndarray::Array2::from_shape_fn((2, n), |(i, j)| vals[i * n + j]);
        let w = PhaseSpaceField::new(grid, arr, FieldKind::from_tag(kind).unwrap()).unwrap();
        prop_assert_eq!(decode_phase_space(&encode_phase_space(&w)).unwrap(), w);
    }
}
