use std::io::{self, Write};

fn main() {
    let code = {
        let (stdout, stderr) = (io::stdout(), io::stderr());
        let (mut out, mut err) = (stdout.lock(), stderr.lock());
        let code = knotgeo_cli::run(std::env::args_os(), &mut out, &mut err);
        let _ = out.flush();
        code
    };
    std::process::exit(code);
}
