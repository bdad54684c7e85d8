use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let result =
        qrw_cli::parse_args(&args).and_then(|config| qrw_cli::execute(&config, &args[1..]));
    match result {
        Ok(Some(body)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(body.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Ok(None) => ExitCode::SUCCESS,
        Err(qrw_cli::CliError::Info(msg)) => {
            print!("{msg}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
