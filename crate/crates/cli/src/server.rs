//! HTTP/1.1 transport over the pure request handler.

use std::sync::Arc;

use axum::body::Bytes;
use axum::extract::State;
use axum::http::{header, Method, StatusCode, Uri};
use axum::response::IntoResponse;
use axum::Router;
use tokio::net::TcpListener;

use crate::service::Service;

async fn dispatch(State(svc): State<Arc<Service>>, method: Method, uri: Uri, body: Bytes) -> impl IntoResponse {
    let r = tokio::task::spawn_blocking(move || svc.handle_request(method.as_str(), uri.path(), &body))
        .await
        .expect("handler does not panic");
    let status = StatusCode::from_u16(r.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    (status, [(header::CONTENT_TYPE, r.content_type)], r.body)
}

pub fn router(svc: Arc<Service>) -> Router {
    Router::new().fallback(dispatch).with_state(svc)
}

/// Serves until the listener fails.
pub async fn serve(listener: TcpListener, svc: Arc<Service>) -> std::io::Result<()> {
    axum::serve(listener, router(svc)).await
}
