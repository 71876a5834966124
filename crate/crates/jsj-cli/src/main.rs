fn main() {
    println!("tgg");
}
