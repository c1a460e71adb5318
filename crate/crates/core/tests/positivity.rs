use crjet_core::identities::check_positivity;

#[test]
fn full_grid() {
    let start = std::time::Instant::now();
    let r = check_positivity(100, 199);
    println!("{} points in {:?}", r.grid_points, start.elapsed());
    assert!(r.passed, "{:?}", r.failures.first());
    assert_eq!(r.grid_points, 100 * 199);
}
