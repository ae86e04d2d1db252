mod common;

#[test]
fn svg_goldens_are_byte_identical() {
    for (name, same) in common::check_goldens() {
        assert!(
            same,
            "{name} differs from its golden (rerun with LAMINA_BLESS=1 after review)"
        );
    }
}
