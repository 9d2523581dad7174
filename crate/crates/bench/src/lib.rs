//! Shared fixtures for the pipeline benchmarks.

use shiftframe::generators::{family_theorem_3, GeneratorFamily};
use shiftframe::spline::spline_family;

/// Three-generator bump configuration with the gap condition satisfied; the
/// bump-side scan workload.
pub fn bump_family() -> GeneratorFamily {
    family_theorem_3(&[0, 2, 4], 0.2).unwrap()
}

/// Spline triple of orders 1..3 on the unit box; the spline-side workload.
pub fn spline_triple() -> GeneratorFamily {
    spline_family(1, 3, 1.0).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(bump_family().r(), 3);
        assert_eq!(spline_triple().r(), 3);
    }
}
