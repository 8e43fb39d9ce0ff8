use clap::Parser;

use holedstar_server::{app, AppState};

#[derive(Debug, Parser)]
#[command(name = "holedstar-server", version, about = "Render service for the tuning frontend")]
struct Args {
    /// Address to listen on.
    #[arg(long, env = "HOLEDSTAR_BIND", default_value = "127.0.0.1:8080")]
    bind: String,
}

#[tokio::main]
async fn main() {
    let args = Args::parse();
    let listener = match tokio::net::TcpListener::bind(&args.bind).await {
        Ok(l) => l,
        Err(e) => {
            eprintln!("error: cannot bind {}: {e}", args.bind);
            std::process::exit(4);
        }
    };
    eprintln!("listening on http://{}", args.bind);
    if let Err(e) = axum::serve(listener, app(AppState::default())).await {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
