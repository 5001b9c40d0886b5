//! Read-only HTTP API over a loaded snapshot.
//!
//! | route | response |
//! |---|---|
//! | `GET /api/stats` | extraction counts, entity counts, provenance |
//! | `GET /api/search?q=&kind=&limit=` | matching entities |
//! | `GET /api/{resources,tasks,developers}/{id}/context?k=` | context view |
//! | `GET /api/entities/{kind}/{id}` | the stored entity |
//! | `GET /api/schemas/{name}` | JSON schema of a response body |
//!
//! Ids containing `/` (resource paths) are percent-encoded as `%2F`.
//! Every error is a JSON [`ApiError`] body.

use std::collections::HashMap;
use std::io;
use std::net::{IpAddr, Ipv4Addr, SocketAddr};
use std::path::PathBuf;
use std::sync::Arc;

use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use devctx_core::query::{context_for, search_entities, QueryError};
use devctx_core::store::snapshot::{load_snapshot, SnapshotError};
use devctx_core::{EntityKind, ExtractionReport, QueryConfig, RelationKind, Store};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;
use tokio::net::TcpListener;
use tower_http::cors::CorsLayer;

pub const DEFAULT_PORT: u16 = 7878;
pub const DEFAULT_K: usize = 10;
pub const DEFAULT_SEARCH_LIMIT: usize = 20;

/// Published response schemas, by file name.
pub const SCHEMAS: [(&str, &str); 5] = [
    ("context_view.json", include_str!("../schemas/context_view.json")),
    ("stats.json", include_str!("../schemas/stats.json")),
    ("search.json", include_str!("../schemas/search.json")),
    ("entity.json", include_str!("../schemas/entity.json")),
    ("error.json", include_str!("../schemas/error.json")),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorStatus {
    BadRequest,
    NotFound,
    Internal,
}

#[derive(Debug, Clone, Serialize)]
pub struct ApiError {
    pub status: ErrorStatus,
    pub message: String,
    pub detail: String,
}

impl ApiError {
    fn new(status: ErrorStatus, message: impl Into<String>, detail: impl Into<String>) -> Self {
        Self {
            status,
            message: message.into(),
            detail: detail.into(),
        }
    }

    fn bad_request(message: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(ErrorStatus::BadRequest, message, detail)
    }

    fn not_found(message: impl Into<String>, detail: impl Into<String>) -> Self {
        Self::new(ErrorStatus::NotFound, message, detail)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let code = match self.status {
            ErrorStatus::BadRequest => StatusCode::BAD_REQUEST,
            ErrorStatus::NotFound => StatusCode::NOT_FOUND,
            ErrorStatus::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        };
        (code, Json(self)).into_response()
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        match e {
            QueryError::NotFound { kind, ref id } => {
                ApiError::not_found(format!("{kind} not found"), format!("no {kind} with id `{id}`"))
            }
            QueryError::EmptyQuery => ApiError::bad_request("empty query", e.to_string()),
        }
    }
}

/// Shared, immutable serving state.
pub struct AppState {
    pub store: Store,
    pub query: QueryConfig,
    stats: Value,
}

impl AppState {
    pub fn new(store: Store, query: QueryConfig) -> Self {
        let stats = stats_json(&store);
        Self { store, query, stats }
    }
}

/// The `/api/stats` body.
pub fn stats_json(store: &Store) -> Value {
    let mut body = serde_json::to_value(ExtractionReport::from_store(store)).expect("report serializes");
    let counts = store.counts();
    let obj = body.as_object_mut().expect("report is an object");
    obj.insert(
        "entities".into(),
        json!({
            "developers": counts.developers,
            "resources": counts.resources,
            "revisions": counts.revisions,
            "tasks": counts.tasks,
        }),
    );
    obj.insert(
        "explicit".into(),
        json!({
            "authored_revision": store.relations_of_kind(RelationKind::AuthoredRevision).count(),
            "assigned_task": store.relations_of_kind(RelationKind::AssignedTask).count(),
        }),
    );
    obj.insert(
        "provenance".into(),
        serde_json::to_value(store.provenance()).expect("provenance serializes"),
    );
    body
}

pub fn router(state: Arc<AppState>, cors: bool) -> Router {
    let router = Router::new()
        .route("/api/stats", get(stats))
        .route("/api/search", get(search))
        .route("/api/resources/{id}/context", get(resource_context))
        .route("/api/tasks/{id}/context", get(task_context))
        .route("/api/developers/{id}/context", get(developer_context))
        .route("/api/entities/{kind}/{id}", get(entity))
        .route("/api/schemas/{name}", get(schema))
        .fallback(|| async { ApiError::not_found("no such endpoint", "see /api/stats, /api/search, /api/{kind}s/{id}/context") })
        .with_state(state);
    if cors {
        router.layer(CorsLayer::permissive())
    } else {
        router
    }
}

async fn stats(State(state): State<Arc<AppState>>) -> Json<Value> {
    Json(state.stats.clone())
}

fn parse_number(params: &HashMap<String, String>, name: &str, default: usize) -> Result<usize, ApiError> {
    match params.get(name) {
        None => Ok(default),
        Some(raw) => raw
            .parse()
            .map_err(|_| ApiError::bad_request(format!("invalid `{name}`"), format!("`{raw}` is not a non-negative integer"))),
    }
}

async fn search(
    State(state): State<Arc<AppState>>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Json<Value>, ApiError> {
    let q = params.get("q").map(String::as_str).unwrap_or_default();
    let kind_name = params.get("kind").map(String::as_str).unwrap_or("any");
    let kind = match kind_name {
        "any" => None,
        "developer" | "resource" | "task" => EntityKind::parse(kind_name),
        other => {
            return Err(ApiError::bad_request(
                "invalid `kind`",
                format!("`{other}` is not one of developer, resource, task, any"),
            ))
        }
    };
    let limit = parse_number(&params, "limit", DEFAULT_SEARCH_LIMIT)?;
    let results = search_entities(&state.store, q, kind, limit)?;
    Ok(Json(json!({
        "query": q,
        "kind": kind_name,
        "limit": limit,
        "results": results,
    })))
}

fn context(state: &AppState, kind: EntityKind, id: &str, params: &HashMap<String, String>) -> Result<Response, ApiError> {
    let k = parse_number(params, "k", DEFAULT_K)?;
    let view = context_for(&state.store, kind, id, k, &state.query)?;
    Ok(([(header::CONTENT_TYPE, "application/json")], view.to_json()).into_response())
}

async fn resource_context(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    context(&state, EntityKind::Resource, &id, &params)
}

async fn task_context(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    context(&state, EntityKind::Task, &id, &params)
}

async fn developer_context(
    State(state): State<Arc<AppState>>,
    Path(id): Path<String>,
    Query(params): Query<HashMap<String, String>>,
) -> Result<Response, ApiError> {
    context(&state, EntityKind::Developer, &id, &params)
}

async fn entity(
    State(state): State<Arc<AppState>>,
    Path((kind, id)): Path<(String, String)>,
) -> Result<Json<Value>, ApiError> {
    let kind = EntityKind::parse(&kind).ok_or_else(|| {
        ApiError::bad_request(
            "invalid entity kind",
            format!("`{kind}` is not one of developer, resource, revision, task"),
        )
    })?;
    let store = &state.store;
    let value = match kind {
        EntityKind::Developer => store.developer(&id).map(serde_json::to_value),
        EntityKind::Resource => store.resource(&id).map(serde_json::to_value),
        EntityKind::Revision => store.revision(&id).map(serde_json::to_value),
        EntityKind::Task => store.task(&id).map(serde_json::to_value),
    };
    match value {
        Some(Ok(v)) => Ok(Json(v)),
        Some(Err(e)) => Err(ApiError::new(ErrorStatus::Internal, "serialization failed", e.to_string())),
        None => Err(ApiError::not_found(format!("{kind} not found"), format!("no {kind} with id `{id}`"))),
    }
}

async fn schema(Path(name): Path<String>) -> Result<Response, ApiError> {
    SCHEMAS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, body)| ([(header::CONTENT_TYPE, "application/schema+json")], *body).into_response())
        .ok_or_else(|| ApiError::not_found("no such schema", format!("`{name}` is not published")))
}

#[derive(Debug, Clone)]
pub struct ServeConfig {
    pub snapshot: PathBuf,
    pub bind: IpAddr,
    pub port: u16,
    pub cors: bool,
    pub query: QueryConfig,
}

impl Default for ServeConfig {
    fn default() -> Self {
        Self {
            snapshot: PathBuf::new(),
            bind: IpAddr::V4(Ipv4Addr::LOCALHOST),
            port: DEFAULT_PORT,
            cors: true,
            query: QueryConfig::default(),
        }
    }
}

#[derive(Debug, Error)]
pub enum ServeError {
    #[error("cannot load snapshot {path}: {source}")]
    Snapshot {
        path: PathBuf,
        #[source]
        source: SnapshotError,
    },
    #[error("cannot listen on {addr}: {source}")]
    Bind {
        addr: SocketAddr,
        #[source]
        source: io::Error,
    },
    #[error("server failed: {0}")]
    Io(#[from] io::Error),
}

/// Loads the snapshot and binds the listener; both failures surface here,
/// before any request is served.
pub async fn prepare(cfg: &ServeConfig) -> Result<(TcpListener, Router), ServeError> {
    let store = load_snapshot(&cfg.snapshot).map_err(|source| ServeError::Snapshot {
        path: cfg.snapshot.clone(),
        source,
    })?;
    let addr = SocketAddr::new(cfg.bind, cfg.port);
    let listener = TcpListener::bind(addr)
        .await
        .map_err(|source| ServeError::Bind { addr, source })?;
    let app = router(Arc::new(AppState::new(store, cfg.query.clone())), cfg.cors);
    Ok((listener, app))
}

/// Runs the service on a fresh runtime until the process is stopped.
/// `on_ready` receives the bound address once requests are accepted.
pub fn run(cfg: &ServeConfig, on_ready: impl FnOnce(SocketAddr)) -> Result<(), ServeError> {
    let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
    runtime.block_on(async {
        let (listener, app) = prepare(cfg).await?;
        on_ready(listener.local_addr()?);
        axum::serve(listener, app).await?;
        Ok(())
    })
}
