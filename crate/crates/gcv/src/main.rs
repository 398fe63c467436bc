use std::process::ExitCode;

use clap::Parser;
use gcv::cli::{Args, Format};

fn main() -> ExitCode {
    let args = Args::parse();
    let format = args.format();
    match gcv::run(&args) {
        Ok(report) => {
            print!("{}", gcv::render(&report, format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let text = gcv::render_error(&e, format);
            if format == Format::Json {
                print!("{text}");
            } else {
                eprint!("{text}");
            }
            ExitCode::from(e.exit_code as u8)
        }
    }
}
