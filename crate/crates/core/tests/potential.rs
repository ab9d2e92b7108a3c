use lerw_core::potential::*;
use std::f64::consts::PI;
use std::sync::OnceLock;

fn table() -> &'static PotentialTable {
    static T: OnceLock<PotentialTable> = OnceLock::new();
    T.get_or_init(|| PotentialTable::new(512))
}

#[test]
fn diagonal_matches_closed_form() {
    let t = table();
    for n in 0..=512u64 {
        let v = t.raw(n as i64, n as i64).unwrap();
        assert!((v - diagonal_closed_form(n)).abs() < 1e-12, "n={n}");
    }
}

#[test]
fn delta_property_everywhere() {
    let t = table();
    assert!((t.laplacian_at(0, 0).unwrap() - 1.0).abs() < 1e-12);
    let mut worst = 0.0f64;
    for x in 0..512i64 {
        for y in 0..=x {
            if x == 0 && y == 0 {
                continue;
            }
            worst = worst.max(t.laplacian_at(x, y).unwrap().abs());
        }
    }
    assert!(worst < 1e-9, "max |Δa| off the origin = {worst}");
}

#[test]
fn dihedral_symmetry_and_minimum() {
    let t = table();
    for (x, y) in [(3, 1), (7, 5), (100, 37), (0, 12)] {
        let v = t.raw(x, y).unwrap();
        for (a, b) in [(y, x), (-x, y), (x, -y), (-y, -x), (-y, x)] {
            assert_eq!(t.raw(a, b).unwrap(), v);
        }
    }
    for x in 0..=60 {
        for y in 0..=x {
            assert!(t.raw(x, y).unwrap() >= 0.0);
        }
    }
}

#[test]
fn radial_growth_along_axes_and_diagonal() {
    let t = table();
    for n in 0..512 {
        assert!(t.raw(n + 1, 0).unwrap() > t.raw(n, 0).unwrap());
        assert!(t.raw(n + 1, n + 1).unwrap() > t.raw(n, n).unwrap());
    }
}

#[test]
fn doubling_radius_is_stable() {
    let small = PotentialTable::new(256);
    let t = table();
    let mut worst = 0.0f64;
    for x in 0..=200 {
        for y in 0..=x {
            worst = worst.max((small.raw(x, y).unwrap() - t.raw(x, y).unwrap()).abs());
        }
    }
    assert!(worst < 1e-9, "{worst}");
}

/// Independent oracle: the classical expansion
/// `a(z) = (log|z| + γ + (3/2) log 2)/2π - cos 4θ/(24π|z|^2) + O(|z|^-4)`.
#[test]
fn asymptotic_expansion_oracle() {
    let t = table();
    for (x, y) in [(40i64, 0i64), (60, 11), (90, 90), (150, 70), (400, 3)] {
        let r = ((x * x + y * y) as f64).sqrt();
        let th = (y as f64).atan2(x as f64);
        let pred = (r.ln() + EULER_GAMMA + 1.5 * 2f64.ln()) / (2.0 * PI)
            - (4.0 * th).cos() / (24.0 * PI * r * r);
        let got = t.raw(x, y).unwrap();
        assert!((got - pred).abs() * r.powi(4) < 0.05, "({x},{y}) {got} {pred}");
    }
}

#[test]
fn residual_scans() {
    let t = table();
    let (global, at) = t.residual_bound_scan(1.0, 200.0).unwrap();
    assert!((global - 0.017205).abs() < 5e-6, "{global}");
    assert_eq!(at, (3, 0));
    // Beyond |z| = 10 the residual sits near its limit 1/(24π).
    let (far, at) = t.residual_bound_scan(10.0, 200.0).unwrap();
    assert_eq!(at, (10, 0));
    assert!((far - 0.013565).abs() < 5e-6, "{far}");
    assert!((far - 1.0 / (24.0 * PI)).abs() < 5e-4);
    let (small, _) = t.residual_bound_scan(2.0, 3.0).unwrap();
    assert!(small.is_finite());
    let n = 7i64;
    let (d, _) = t.residual_bound_scan(n as f64 * 2f64.sqrt() - 1e-9, n as f64 * 2f64.sqrt() + 1e-9).unwrap();
    let closed = (diagonal_closed_form(n as u64) + asymptotic_offset()
        - ((n as f64) * 2f64.sqrt()).ln() / (2.0 * PI))
        .abs()
        * (2 * n * n) as f64;
    assert!((d - closed).abs() < 1e-10);
}

#[test]
fn val_c1_is_reported_quantity() {
    // Printed expression evaluates near -0.0171; informational.
    assert!((val_c1() + 0.0171).abs() < 1e-3);
}

#[test]
fn half_integer_extension_harmonic_off_nearest_points() {
    let t = table();
    for s in [HalfIntegerPoint::new(1, 0), HalfIntegerPoint::new(1, 1), HalfIntegerPoint::new(-3, 4)] {
        let near = s.nearest_integers();
        for wx in -20..20i64 {
            for wy in -20..20i64 {
                if near.contains(&(wx, wy)) {
                    continue;
                }
                let f = |x: i64, y: i64| {
                    // A(s, ·) evaluated at w, i.e. averages of a(t - w)
                    t.potential_half(s, (x, y), Normalization::Asymptotic).unwrap()
                };
                let lap = f(wx + 1, wy) + f(wx - 1, wy) + f(wx, wy + 1) + f(wx, wy - 1)
                    - 4.0 * f(wx, wy);
                assert!(lap.abs() < 1e-12, "{s:?} at ({wx},{wy}): {lap}");
            }
        }
    }
}

#[test]
fn csv_dump_shape() {
    let t = PotentialTable::new(4);
    let mut buf = Vec::new();
    t.write_csv(&mut buf, Normalization::Raw).unwrap();
    let s = String::from_utf8(buf).unwrap();
    assert_eq!(s.lines().count(), 1 + 15);
    assert!(s.starts_with("x,y,a\n0,0,"));
}
