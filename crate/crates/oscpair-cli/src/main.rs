fn main() {
    println!("oscpair placeholder");
}
