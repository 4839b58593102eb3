fn main() {
    // Subcommands land together with the library surface they drive.
}
