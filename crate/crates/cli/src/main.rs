use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let code = qforms_cli::run(std::env::args_os().skip(1), &mut stdout.lock(), &mut stderr.lock());
    ExitCode::from(code as u8)
}
