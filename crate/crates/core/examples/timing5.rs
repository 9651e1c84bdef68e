use relcat_core::*;
use relcat_core::backend::{tables, ObjectRef};
use std::time::Instant;
fn main() {
    let z2 = ObjectRef::fingrp(&tables::cyclic(2)).unwrap();
    let ind = frobenius::indiscrete(&z2).unwrap(); // carrier 4
    let t_obj = frobenius::tensor_structure(&ind, &ind).unwrap(); // carrier 16
    let prod = backend::product(ind.carrier(), t_obj.carrier()).unwrap(); // 64
    let t = Instant::now();
    let subs = backend::enumerate_subobjects(&prod, 1_000_000).unwrap();
    println!("subgroups of the 64-elt cube: {} in {:?}", subs.len(), t.elapsed());
    let z4 = ObjectRef::fingrp(&tables::cyclic(4)).unwrap();
    let f_c = frobenius::group_structure(&z4).unwrap();
    let target = frobenius::tensor_structure(&ind, &f_c).unwrap(); // carrier 16
    let prod2 = backend::product(ind.carrier(), target.carrier()).unwrap(); // 64
    let t = Instant::now();
    let subs2 = backend::enumerate_subobjects(&prod2, 1_000_000).unwrap();
    println!("subgroups of Z2^4 x Z4: {} in {:?}", subs2.len(), t.elapsed());
}
