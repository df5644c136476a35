use mcg_core::groups;
use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let h3 = groups::h3_reflection().unwrap();
    let classes = groups::generating_reflection_orbit_classes(&h3, 60, 1000);
    println!("h3 classes (size, genus): {:?} in {:?}", classes, t0.elapsed());

    let t0 = Instant::now();
    let k = groups::klein_reflection().unwrap();
    let classes = groups::generating_reflection_orbit_classes(&k, 48, 1000);
    println!("klein classes: {:?} in {:?}", classes, t0.elapsed());

    let t0 = Instant::now();
    let v = groups::build_group("valentiner").unwrap();
    if let groups::GroupEntry::Mat(v) = &*v {
        let classes = groups::generating_reflection_orbit_classes(v, 360, 1000);
        println!("valentiner classes: {:?} in {:?}", classes, t0.elapsed());
    }
}
