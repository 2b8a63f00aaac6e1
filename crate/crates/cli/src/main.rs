use std::process::ExitCode;

fn main() -> ExitCode {
    let mut stdout = std::io::stdout().lock();
    match ringwalk_cli::execute(std::env::args_os(), &mut stdout) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let ringwalk_cli::CliError::Usage(msg) = &e {
                eprint!("{msg}");
            } else {
                eprintln!("ringwalk: {e}");
            }
            eprintln!("{}", e.machine_line());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
