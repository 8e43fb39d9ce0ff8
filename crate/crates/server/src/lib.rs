//! HTTP front end for the renderer.
//!
//! * `POST /render` takes a config document (the same key-value text the
//!   CLI reads with `--config`) and answers with the encoded image. The
//!   format comes from `?format=png|ppm`, else the `format` key, else PNG.
//! * `GET /presets` returns the preset catalog as JSON.
//!
//! Errors are JSON objects `{"error": ..., "field": ...}`: 400 for invalid
//! settings, 422 when `function` does not parse (with `position`), 413 when
//! the size or iteration count is above the limits.

use std::collections::HashMap;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{middleware, Json, Router};
use serde_json::{json, Value};

use holedstar_core::funcexpr::{builtin_presets, GermPreset};
use holedstar_core::raster::{
    encode_image, render_image, ConfigError, ImageFormat, Limits, RenderSettings,
};

/// Failure of a request, with its HTTP status and JSON body.
#[derive(Debug, Clone, PartialEq)]
pub struct ApiError {
    pub status: StatusCode,
    pub body: Value,
}

impl ApiError {
    fn bad_request(field: Option<&str>, message: String) -> Self {
        Self {
            status: StatusCode::BAD_REQUEST,
            body: json!({ "error": message, "field": field }),
        }
    }

    fn internal(message: String) -> Self {
        Self {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            body: json!({ "error": message }),
        }
    }
}

impl From<ConfigError> for ApiError {
    fn from(err: ConfigError) -> Self {
        match &err {
            ConfigError::Function(parse) => Self {
                status: StatusCode::UNPROCESSABLE_ENTITY,
                body: json!({
                    "error": err.to_string(),
                    "field": "function",
                    "position": parse.position(),
                }),
            },
            _ => Self::bad_request(err.field(), err.to_string()),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(self.body)).into_response()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rendered {
    pub format: ImageFormat,
    pub bytes: Vec<u8>,
}

impl IntoResponse for Rendered {
    fn into_response(self) -> Response {
        ([(header::CONTENT_TYPE, self.format.content_type())], self.bytes).into_response()
    }
}

/// Validate a config document and render it. Limits are checked before
/// any pixel is computed.
pub fn render_document(
    text: &str,
    format: Option<&str>,
    limits: &Limits,
) -> Result<Rendered, ApiError> {
    let settings = RenderSettings::from_text(text)?;
    let format = match format {
        Some(f) => f
            .parse::<ImageFormat>()
            .map_err(|m| ApiError::bad_request(Some("format"), m))?,
        None => settings.format.unwrap_or(ImageFormat::Png),
    };
    let config = settings.resolve()?;
    limits.check(&config).map_err(|e| ApiError {
        status: StatusCode::PAYLOAD_TOO_LARGE,
        body: json!({ "error": e.to_string(), "field": e.field, "limit": e.limit }),
    })?;
    let image = render_image(&config);
    let bytes = encode_image(&image, format).map_err(|e| ApiError::internal(e.to_string()))?;
    Ok(Rendered { format, bytes })
}

fn preset_json(p: &GermPreset) -> Value {
    let d = &p.defaults;
    let [left, right, top, bottom] = d.viewport;
    json!({
        "name": p.name,
        "expression": p.source,
        "fixed_point": [p.fixed_point.re, p.fixed_point.im],
        "notes": p.notes,
        "theta_terms": p.theta_terms,
        "defaults": {
            "method": d.method.name(),
            "viewport": { "left": left, "right": right, "top": top, "bottom": bottom },
            "branches": d.branches,
            "hole_radius": d.hole_radius,
            "iters": d.iters,
            "branch_multiple": d.branch_multiple,
        },
    })
}

/// The preset catalog together with the limits renders must respect.
pub fn catalog(limits: &Limits) -> Value {
    let presets: Vec<Value> = builtin_presets().iter().map(preset_json).collect();
    json!({
        "presets": presets,
        "limits": {
            "max_width": limits.max_width,
            "max_height": limits.max_height,
            "max_iters": limits.max_iters,
        },
    })
}

#[derive(Debug, Clone, Copy, Default)]
pub struct AppState {
    pub limits: Limits,
}

async fn render_handler(
    State(state): State<AppState>,
    Query(query): Query<HashMap<String, String>>,
    body: Bytes,
) -> Result<Rendered, ApiError> {
    let text = String::from_utf8(body.to_vec())
        .map_err(|_| ApiError::bad_request(None, "request body is not UTF-8".into()))?;
    let format = query.get("format").cloned();
    tokio::task::spawn_blocking(move || render_document(&text, format.as_deref(), &state.limits))
        .await
        .map_err(|e| ApiError::internal(format!("render task failed: {e}")))?
}

async fn presets_handler(State(state): State<AppState>) -> Json<Value> {
    Json(catalog(&state.limits))
}

async fn allow_any_origin(mut response: Response) -> Response {
    response.headers_mut().insert(
        header::ACCESS_CONTROL_ALLOW_ORIGIN,
        HeaderValue::from_static("*"),
    );
    response
}

pub fn app(state: AppState) -> Router {
    Router::new()
        .route("/render", post(render_handler))
        .route("/presets", get(presets_handler))
        .layer(middleware::map_response(allow_any_origin))
        .with_state(state)
}
