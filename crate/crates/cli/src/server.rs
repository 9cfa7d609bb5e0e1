//! HTTP service under `/api/v1`. Stateless: every request is an independent
//! computation, run on the blocking pool.

use axum::body::Bytes;
use axum::extract::rejection::BytesRejection;
use axum::extract::DefaultBodyLimit;
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::Router;
use serde_json::json;

use crate::{analyze, dominate, render_report, to_json_line, weights, AnalysisRequest, ApiError, MAX_BODY_BYTES, MAX_N};

pub fn router() -> Router {
    let api = Router::new()
        .route("/analyze", post(analyze_handler))
        .route("/dominate", post(dominate_handler))
        .route("/weights", post(weights_handler))
        .route("/health", get(health));
    Router::new()
        .nest("/api/v1", api)
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
}

pub async fn serve(addr: std::net::SocketAddr) -> std::io::Result<()> {
    let listener = tokio::net::TcpListener::bind(addr).await?;
    eprintln!("listening on http://{}", listener.local_addr()?);
    axum::serve(listener, router()).await
}

fn json_response(status: StatusCode, body: String) -> Response {
    (status, [(header::CONTENT_TYPE, "application/json")], body).into_response()
}

fn error_response(e: ApiError) -> Response {
    let status = StatusCode::from_u16(e.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    json_response(status, e.to_json())
}

fn read_request(body: Result<Bytes, BytesRejection>) -> Result<AnalysisRequest, ApiError> {
    let bytes = body.map_err(|rej| ApiError {
        status: rej.status().as_u16(),
        error: if rej.status() == StatusCode::PAYLOAD_TOO_LARGE {
            "payload_too_large"
        } else {
            "invalid_request"
        },
        message: rej.body_text(),
        details: Some(json!({ "max_bytes": MAX_BODY_BYTES })),
    })?;
    AnalysisRequest::from_json(&bytes)
}

async fn compute<F>(body: Result<Bytes, BytesRejection>, work: F) -> Response
where
    F: FnOnce(&AnalysisRequest) -> Result<String, ApiError> + Send + 'static,
{
    let req = match read_request(body) {
        Ok(r) => r,
        Err(e) => return error_response(e),
    };
    match tokio::task::spawn_blocking(move || work(&req)).await {
        Ok(Ok(body)) => json_response(StatusCode::OK, body),
        Ok(Err(e)) => error_response(e),
        Err(join) => error_response(ApiError {
            status: 500,
            error: "internal_error",
            message: join.to_string(),
            details: None,
        }),
    }
}

async fn analyze_handler(body: Result<Bytes, BytesRejection>) -> Response {
    compute(body, |req| analyze(req, Some(MAX_N)).map(|r| render_report(&r))).await
}

async fn dominate_handler(body: Result<Bytes, BytesRejection>) -> Response {
    compute(body, |req| dominate(req, Some(MAX_N)).map(|r| to_json_line(&r))).await
}

async fn weights_handler(body: Result<Bytes, BytesRejection>) -> Response {
    compute(body, |req| weights(req, Some(MAX_N)).map(|r| to_json_line(&r))).await
}

async fn health() -> Response {
    json_response(
        StatusCode::OK,
        to_json_line(&json!({ "status": "ok", "version": env!("CARGO_PKG_VERSION") })),
    )
}
