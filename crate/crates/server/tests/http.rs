use axum::body::Body;
use axum::http::{header, Request, StatusCode};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

use holedstar_core::raster::{decode_ppm, Limits};
use holedstar_server::{app, catalog, render_document, AppState};

async fn send(req: Request<Body>) -> (StatusCode, Option<String>, Vec<u8>) {
    let resp = app(AppState::default()).oneshot(req).await.unwrap();
    let status = resp.status();
    let ctype = resp
        .headers()
        .get(header::CONTENT_TYPE)
        .map(|v| v.to_str().unwrap().to_string());
    let bytes = resp.into_body().collect().await.unwrap().to_bytes().to_vec();
    (status, ctype, bytes)
}

fn post(uri: &str, body: &str) -> Request<Body> {
    Request::post(uri).body(Body::from(body.to_string())).unwrap()
}

fn json(bytes: &[u8]) -> Value {
    serde_json::from_slice(bytes).unwrap()
}

#[tokio::test]
async fn flower4_renders_png() {
    let (status, ctype, bytes) = send(post("/render", "preset = flower4\nsize = 64x64\n")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("image/png"));
    assert_eq!(&bytes[..8], b"\x89PNG\r\n\x1a\n");
}

#[tokio::test]
async fn ppm_via_query() {
    let (status, ctype, bytes) = send(post("/render?format=ppm", "size = 20x10\n")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("image/x-portable-pixmap"));
    let img = decode_ppm(&bytes).unwrap();
    assert_eq!((img.width(), img.height()), (20, 10));
}

#[tokio::test]
async fn ppm_via_body_key() {
    let (status, ctype, _) = send(post("/render", "format = ppm\nsize = 8x8\n")).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("image/x-portable-pixmap"));
}

#[tokio::test]
async fn zero_branches_is_400_naming_branches() {
    let (status, _, bytes) = send(post("/render", "branches = 0\n")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    let body = json(&bytes);
    assert_eq!(body["field"], "branches");
    assert!(body["error"].as_str().unwrap().contains("branches"));
}

#[tokio::test]
async fn unknown_key_and_bad_format_are_400() {
    let (status, _, bytes) = send(post("/render", "colour = red\n")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json(&bytes)["field"], "colour");
    let (status, _, bytes) = send(post("/render?format=gif", "size = 8x8\n")).await;
    assert_eq!(status, StatusCode::BAD_REQUEST);
    assert_eq!(json(&bytes)["field"], "format");
}

#[tokio::test]
async fn function_parse_error_is_422_with_position() {
    let (status, _, bytes) = send(post("/render", "function = z+\n")).await;
    assert_eq!(status, StatusCode::UNPROCESSABLE_ENTITY);
    let body = json(&bytes);
    assert_eq!(body["field"], "function");
    assert_eq!(body["position"], 2);
}

#[tokio::test]
async fn limits_are_413() {
    for doc in ["size = 2049x10\n", "size = 10x4096\n", "iters = 1000001\n"] {
        let (status, _, bytes) = send(post("/render", doc)).await;
        assert_eq!(status, StatusCode::PAYLOAD_TOO_LARGE, "{doc}");
        assert!(json(&bytes)["limit"].is_number());
    }
}

#[test]
fn limit_check_precedes_rendering() {
    // a 1x1 cap rejects even a trivial render before any compute happens
    let limits = Limits {
        max_width: 1,
        max_height: 1,
        max_iters: 1,
    };
    let err = render_document("size = 2x1\n", None, &limits).unwrap_err();
    assert_eq!(err.status, StatusCode::PAYLOAD_TOO_LARGE);
    assert_eq!(err.body["field"], "width");
    assert!(render_document("size = 1x1\niters = 1\n", None, &limits).is_ok());
}

#[tokio::test]
async fn identical_requests_identical_bytes() {
    let doc = "preset = hedgehog-q\nsize = 48x48\npalette = random\nseed = 3\noutput = filled\n";
    let reqs = (0..4).map(|_| send(post("/render", doc)));
    let results = futures_join(reqs.collect()).await;
    for r in &results[1..] {
        assert_eq!(r.2, results[0].2);
    }
}

async fn futures_join(
    reqs: Vec<impl std::future::Future<Output = (StatusCode, Option<String>, Vec<u8>)> + Send + 'static>,
) -> Vec<(StatusCode, Option<String>, Vec<u8>)> {
    let handles: Vec<_> = reqs.into_iter().map(tokio::spawn).collect();
    let mut out = Vec::new();
    for h in handles {
        out.push(h.await.unwrap());
    }
    out
}

#[tokio::test]
async fn presets_catalog() {
    let (status, ctype, bytes) = send(Request::get("/presets").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(ctype.as_deref(), Some("application/json"));
    let body = json(&bytes);
    let presets = body["presets"].as_array().unwrap();
    let find = |name: &str| presets.iter().find(|p| p["name"] == name).unwrap().clone();
    let hq = find("hedgehog-q");
    assert_eq!(hq["theta_terms"], serde_json::json!([3, 10, 20000]));
    assert_eq!(hq["defaults"]["branches"], 12);
    assert_eq!(hq["defaults"]["hole_radius"], 0.09);
    let f5 = find("flower5");
    assert_eq!(f5["defaults"]["branch_multiple"], 4);
    assert_eq!(f5["defaults"]["branches"].as_u64().unwrap() % 4, 0);
    assert!(f5["defaults"]["viewport"]["left"].is_number());
    assert_eq!(body["limits"]["max_iters"], 1_000_000);
}

#[tokio::test]
async fn presets_twice_identical() {
    let get = || Request::get("/presets").body(Body::empty()).unwrap();
    let (_, _, a) = send(get()).await;
    let (_, _, b) = send(get()).await;
    assert_eq!(a, b);
    assert_eq!(a, serde_json::to_vec(&catalog(&Limits::default())).unwrap());
}

#[tokio::test]
async fn cors_header_present() {
    let resp = app(AppState::default())
        .oneshot(Request::get("/presets").body(Body::empty()).unwrap())
        .await
        .unwrap();
    assert_eq!(resp.headers()[header::ACCESS_CONTROL_ALLOW_ORIGIN], "*");
}

#[tokio::test]
async fn wrong_method_and_path() {
    let (status, _, _) = send(Request::get("/render").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::METHOD_NOT_ALLOWED);
    let (status, _, _) = send(Request::get("/nope").body(Body::empty()).unwrap()).await;
    assert_eq!(status, StatusCode::NOT_FOUND);
}
