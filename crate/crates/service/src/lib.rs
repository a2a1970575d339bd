//! HTTP JSON API: register problems, open sessions, append and inspect
//! valid domains.

mod error;
mod routes;
mod store;

pub use error::ApiError;
pub use routes::router;
pub use store::{Snapshot, Store};

use std::future::Future;
use std::sync::Arc;

/// Serves the API on `listener` until `shutdown` resolves, then writes
/// every session snapshot.
pub async fn serve(
    listener: tokio::net::TcpListener,
    store: Arc<Store>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(store.clone()))
        .with_graceful_shutdown(shutdown)
        .await?;
    store.flush().await
}
