fn main() {
    // placeholder; wired to the verify module later
}
