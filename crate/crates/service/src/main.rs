use std::net::SocketAddr;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use judge_core::scenario::Case;
use judge_service::{router, AppState};

#[derive(Debug, Parser)]
#[command(name = "judge-service", version, about = "Serve what-if evaluation of one case over HTTP")]
struct Args {
    /// Case file to serve.
    #[arg(long, value_name = "PATH")]
    case: PathBuf,
    #[arg(long, value_name = "HOST:PORT", default_value = "127.0.0.1:8080")]
    listen: SocketAddr,
    /// Directory with the built console, served at `/`.
    #[arg(long = "static", value_name = "DIR")]
    static_dir: Option<PathBuf>,
}

#[tokio::main]
async fn main() -> ExitCode {
    let args = Args::parse();
    // A case that does not load is fatal: refuse to start.
    let case = match Case::load(&args.case) {
        Ok(case) => case,
        Err(e) => {
            eprintln!("judge-service: {e}");
            return ExitCode::from(2);
        }
    };
    let listener = match tokio::net::TcpListener::bind(args.listen).await {
        Ok(listener) => listener,
        Err(e) => {
            eprintln!("judge-service: cannot listen on {}: {e}", args.listen);
            return ExitCode::from(2);
        }
    };
    eprintln!("judge-service: serving case {} on http://{}", case.id(), args.listen);
    let app = router(AppState::new(case), args.static_dir);
    match axum::serve(listener, app).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("judge-service: {e}");
            ExitCode::FAILURE
        }
    }
}
