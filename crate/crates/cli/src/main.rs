use std::process::ExitCode;

fn main() -> ExitCode {
    let code = ablation_heat_cli::run(std::env::args_os());
    ExitCode::from(code as u8)
}
