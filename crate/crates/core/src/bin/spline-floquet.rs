fn main() -> std::process::ExitCode {
    spline_floquet::cli::main()
}
