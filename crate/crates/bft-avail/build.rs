fn main() {
    // LAPACK/BLAS provider: link the system OpenBLAS (no *-src backend crate).
    // rustc-link-arg puts -lopenblas at the end of the link line, after all rlibs.
    println!("cargo:rustc-link-arg=-lopenblas");
}
