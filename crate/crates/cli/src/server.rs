//! JSON service under `/api/v1`: game sessions against the engine plus
//! read-only pattern, section and overlay endpoints.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, RwLock};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, Query, State};
use axum::http::{header, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;
use uuid::Uuid;

use chocolate_core::nim_pass::overlay;
use chocolate_core::sierpinski::{half_section, integer_section};
use chocolate_core::{best_move, formats, Axis, Cell, Error, GameState, Move, Outcome, Pattern, Player};

use crate::Method;

pub const MAX_GAME_SIDE: u32 = 1024;
pub const MAX_PATTERN_SIDE: u32 = 512;
pub const MAX_SECTION_ORDER: u32 = 10;
pub const MAX_OVERLAY_SIDE: u32 = 48;

#[derive(Debug)]
pub struct ApiError {
    status: StatusCode,
    message: String,
}

impl ApiError {
    fn new(status: StatusCode, message: impl Into<String>) -> Self {
        ApiError {
            status,
            message: message.into(),
        }
    }

    fn bad_request(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::BAD_REQUEST, message)
    }

    fn not_found(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::NOT_FOUND, message)
    }

    fn conflict(message: impl Into<String>) -> Self {
        ApiError::new(StatusCode::CONFLICT, message)
    }
}

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::Domain(_) | Error::Parse { .. } => StatusCode::BAD_REQUEST,
            Error::Capacity { .. } => StatusCode::UNPROCESSABLE_ENTITY,
            Error::IllegalMove { .. } | Error::NoMove => StatusCode::CONFLICT,
        };
        ApiError::new(status, e.to_string())
    }
}

impl From<JsonRejection> for ApiError {
    fn from(e: JsonRejection) -> Self {
        ApiError::bad_request(e.body_text())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.status, Json(json!({ "error": self.message }))).into_response()
    }
}

type ApiResult<T> = Result<T, ApiError>;

fn capacity(what: &'static str, value: u32, limit: u32) -> ApiResult<()> {
    if value > limit {
        return Err(Error::Capacity {
            what,
            value: value.into(),
            limit: limit.into(),
        }
        .into());
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Ply {
    pub player: Player,
    pub axis: Axis,
    pub cut: u32,
}

#[derive(Debug)]
struct Session {
    initial: GameState,
    state: GameState,
    history: Vec<Ply>,
    created: SystemTime,
    expires: SystemTime,
}

impl Session {
    fn play(&mut self, mv: Move) -> Result<(), Error> {
        let player = self.state.mover;
        self.state = self.state.apply_move(mv)?;
        self.history.push(Ply {
            player,
            axis: mv.axis,
            cut: mv.cut,
        });
        Ok(())
    }

    /// Let the engine move if it is its turn. Returns the move it made.
    fn engine_reply(&mut self) -> Result<Option<Move>, Error> {
        if self.state.mover != Player::Engine || self.state.is_terminal() {
            return Ok(None);
        }
        let mv = best_move(&self.state)?;
        self.play(mv)?;
        Ok(Some(mv))
    }

    fn view(&self, id: Uuid) -> GameView {
        GameView {
            id,
            initial: self.initial,
            state: self.state,
            legal_moves: self.state.legal_moves(),
            history: self.history.clone(),
            classification: classify(&self.state),
            winner: self.state.winner(),
            created_at: unix_secs(self.created),
            expires_at: unix_secs(self.expires),
        }
    }
}

fn classify(s: &GameState) -> Outcome {
    if s.nim_value() == 0 {
        Outcome::P
    } else {
        Outcome::N
    }
}

fn unix_secs(t: SystemTime) -> u64 {
    t.duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs())
}

#[derive(Debug, Serialize)]
pub struct GameView {
    pub id: Uuid,
    pub initial: GameState,
    pub state: GameState,
    pub legal_moves: Vec<Move>,
    pub history: Vec<Ply>,
    /// P when the player to move loses against best play.
    pub classification: Outcome,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub winner: Option<Player>,
    pub created_at: u64,
    pub expires_at: u64,
}

/// Shared service state. Each session has its own lock, so moves in
/// different games never wait on each other.
#[derive(Debug)]
pub struct AppState {
    sessions: RwLock<HashMap<Uuid, Arc<Mutex<Session>>>>,
    ttl: Duration,
}

impl AppState {
    pub fn new(ttl: Duration) -> Self {
        AppState {
            sessions: RwLock::new(HashMap::new()),
            ttl,
        }
    }

    /// Drop expired sessions; returns how many were removed.
    pub fn purge(&self) -> usize {
        let now = SystemTime::now();
        let mut sessions = self.sessions.write().unwrap();
        let before = sessions.len();
        sessions.retain(|_, s| s.lock().unwrap().expires > now);
        before - sessions.len()
    }

    pub fn len(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn session(&self, id: &str) -> ApiResult<(Uuid, Arc<Mutex<Session>>)> {
        let unknown = || ApiError::not_found(format!("no game {id:?}"));
        let id = Uuid::parse_str(id).map_err(|_| unknown())?;
        let session = self.sessions.read().unwrap().get(&id).cloned().ok_or_else(unknown)?;
        if session.lock().unwrap().expires <= SystemTime::now() {
            self.sessions.write().unwrap().remove(&id);
            return Err(unknown());
        }
        Ok((id, session))
    }
}

pub fn router(state: Arc<AppState>) -> Router {
    let api = Router::new()
        .route("/games", post(create_game))
        .route("/games/{id}", get(get_game))
        .route("/games/{id}/moves", post(post_move))
        .route("/patterns/{m}", get(get_pattern))
        .route("/patterns/{m}/svg", get(get_pattern_svg))
        .route("/sierpinski/{n}/{m}", get(get_section))
        .route("/nimpass/{m}", get(get_overlay))
        .with_state(state);
    Router::new().nest("/api/v1", api)
}

/// Serve until interrupted, purging idle sessions in the background.
pub async fn serve(host: &str, port: u16, ttl: Duration) -> std::io::Result<()> {
    let state = Arc::new(AppState::new(ttl));
    let purger = Arc::clone(&state);
    tokio::spawn(async move {
        let mut tick = tokio::time::interval(ttl.clamp(Duration::from_secs(1), Duration::from_secs(60)));
        loop {
            tick.tick().await;
            purger.purge();
        }
    });
    let listener = tokio::net::TcpListener::bind((host, port)).await?;
    eprintln!("listening on http://{}/api/v1", listener.local_addr()?);
    axum::serve(listener, router(state))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

#[derive(Debug, Deserialize)]
struct CreateGame {
    m: u32,
    n: Option<u32>,
    poison: Option<Cell>,
    #[serde(default)]
    engine_first: bool,
}

async fn create_game(
    State(app): State<Arc<AppState>>,
    body: Result<Json<CreateGame>, JsonRejection>,
) -> ApiResult<(StatusCode, Json<GameView>)> {
    let Json(req) = body?;
    let (w, h) = (req.m, req.n.unwrap_or(req.m));
    if w < 1 || h < 1 {
        return Err(ApiError::bad_request("board sides must be at least 1"));
    }
    capacity("board side", w.max(h), MAX_GAME_SIDE)?;
    let poison = req.poison.unwrap_or_else(|| {
        let mut rng = rand::thread_rng();
        Cell::new(rng.gen_range(1..=w), rng.gen_range(1..=h))
    });
    let mover = if req.engine_first { Player::Engine } else { Player::Human };
    let initial = GameState::new(w, h, poison, mover)?;
    let now = SystemTime::now();
    let mut session = Session {
        initial,
        state: initial,
        history: Vec::new(),
        created: now,
        expires: now + app.ttl,
    };
    session.engine_reply()?;
    let id = Uuid::new_v4();
    let view = session.view(id);
    app.sessions.write().unwrap().insert(id, Arc::new(Mutex::new(session)));
    Ok((StatusCode::CREATED, Json(view)))
}

async fn get_game(State(app): State<Arc<AppState>>, Path(id): Path<String>) -> ApiResult<Json<GameView>> {
    let (id, session) = app.session(&id)?;
    let mut s = session.lock().unwrap();
    s.expires = SystemTime::now() + app.ttl;
    Ok(Json(s.view(id)))
}

#[derive(Debug, Deserialize)]
struct MoveRequest {
    axis: Axis,
    cut: u32,
    /// Number of plies the client has seen; a mismatch means the request is stale.
    ply: Option<usize>,
}

#[derive(Debug, Serialize)]
struct MoveResponse {
    human_move: Move,
    /// State right after the human move.
    after_human: GameState,
    #[serde(skip_serializing_if = "Option::is_none")]
    engine_move: Option<Move>,
    #[serde(flatten)]
    game: GameView,
}

async fn post_move(
    State(app): State<Arc<AppState>>,
    Path(id): Path<String>,
    body: Result<Json<MoveRequest>, JsonRejection>,
) -> ApiResult<Json<MoveResponse>> {
    let (id, session) = app.session(&id)?;
    let Json(req) = body?;
    let mv = Move {
        axis: req.axis,
        cut: req.cut,
    };
    // The whole exchange happens under the session lock, so a response is
    // always one consistent snapshot and rejected moves leave no trace.
    let mut s = session.lock().unwrap();
    if let Some(ply) = req.ply {
        if ply != s.history.len() {
            return Err(ApiError::conflict(format!(
                "stale move: client saw {ply} plies, game has {}",
                s.history.len()
            )));
        }
    }
    if s.state.is_terminal() {
        return Err(ApiError::conflict("the game is over"));
    }
    if s.state.mover != Player::Human {
        return Err(ApiError::conflict("it is not your turn"));
    }
    if !s.state.is_legal(mv) {
        return Err(Error::IllegalMove {
            mv,
            reason: format!("the bar is {}x{}", s.state.w, s.state.h),
        }
        .into());
    }
    s.play(mv)?;
    let after_human = s.state;
    let engine_move = s.engine_reply()?;
    s.expires = SystemTime::now() + app.ttl;
    Ok(Json(MoveResponse {
        human_move: mv,
        after_human,
        engine_move,
        game: s.view(id),
    }))
}

fn parse_side(raw: &str, what: &str) -> ApiResult<u32> {
    let v: u32 = raw
        .parse()
        .map_err(|_| ApiError::bad_request(format!("{what} must be a positive integer, got {raw:?}")))?;
    if v < 1 {
        return Err(ApiError::bad_request(format!("{what} must be at least 1")));
    }
    Ok(v)
}

#[derive(Debug, Deserialize)]
struct PatternQuery {
    method: Option<String>,
}

fn pattern_for(raw_m: &str, method: Option<&str>) -> ApiResult<Pattern> {
    let m = parse_side(raw_m, "m")?;
    capacity("pattern side", m, MAX_PATTERN_SIDE)?;
    let method = match method.unwrap_or("xor") {
        "xor" => Method::Xor,
        "recursive" => Method::Recursive,
        "ca" => Method::Ca,
        other => return Err(ApiError::bad_request(format!("unknown method {other:?}"))),
    };
    Ok(method.pattern(m)?)
}

fn cell_pairs(p: &Pattern) -> Vec<[u32; 2]> {
    p.cells().into_iter().map(|c| [c.i, c.j]).collect()
}

async fn get_pattern(
    Path(m): Path<String>,
    Query(q): Query<PatternQuery>,
) -> ApiResult<Json<serde_json::Value>> {
    let p = pattern_for(&m, q.method.as_deref())?;
    Ok(Json(json!({ "m": p.side(), "g": p.len(), "cells": cell_pairs(&p) })))
}

async fn get_pattern_svg(Path(m): Path<String>) -> ApiResult<Response> {
    let p = pattern_for(&m, None)?;
    Ok(([(header::CONTENT_TYPE, "image/svg+xml")], formats::pattern_to_svg(&p)).into_response())
}

#[derive(Debug, Deserialize)]
struct SectionQuery {
    #[serde(default)]
    half: bool,
}

async fn get_section(
    Path((n, m)): Path<(String, String)>,
    Query(q): Query<SectionQuery>,
) -> ApiResult<Json<serde_json::Value>> {
    let n: u32 = n
        .parse()
        .map_err(|_| ApiError::bad_request(format!("n must be a non-negative integer, got {n:?}")))?;
    let m: i64 = m
        .parse()
        .map_err(|_| ApiError::bad_request(format!("m must be an integer, got {m:?}")))?;
    capacity("section order", n, MAX_SECTION_ORDER)?;
    let sec = if q.half { half_section(n, m)? } else { integer_section(n, m)? };
    let diamonds: Vec<_> = sec
        .diamonds
        .iter()
        .map(|d| json!({ "cx_num": d.cx, "cy_num": d.cy, "r_num": d.r, "den": sec.den }))
        .collect();
    Ok(Json(json!({
        "n": n,
        "m": m,
        "half": q.half,
        "count": diamonds.len(),
        "diamonds": diamonds,
    })))
}

async fn get_overlay(Path(m): Path<String>) -> ApiResult<Json<serde_json::Value>> {
    let m = parse_side(&m, "m")?;
    capacity("overlay side", m, MAX_OVERLAY_SIDE)?;
    let o = overlay(m)?;
    Ok(Json(json!({ "m": m, "blue": cell_pairs(&o.blue), "red": cell_pairs(&o.red) })))
}
