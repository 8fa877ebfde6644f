mod support;

use axum::http::{Method, StatusCode};
use serde_json::{json, Value};

use deontix_core::annotation::{Annotation, AnnotationKind, Connective, Document, DocumentKind, Span};
use support::{fixture, Gateway};

fn term(id: &str, s: usize, e: usize, name: &str) -> Annotation {
    Annotation::new(id, Span::new(s, e), AnnotationKind::term(name, &[]))
}

fn comp(id: &str, s: usize, e: usize, c: Connective) -> Annotation {
    Annotation::new(id, Span::new(s, e), AnnotationKind::Composite { connective: c })
}

fn law(id: &str, body: &str, annotations: Vec<Annotation>) -> Value {
    let mut d = Document::new(id, id, body, DocumentKind::Legislation);
    d.annotations = annotations;
    serde_json::to_value(d).unwrap()
}

#[tokio::test]
async fn create_read_update_delete() {
    let g = Gateway::new(4);
    let doc = serde_json::to_value(fixture("article-1")).unwrap();
    let (s, created) = g.post_json("/documents", &doc).await;
    assert_eq!(s, StatusCode::CREATED);
    assert_eq!(created["revision"], 1);

    let (s, read) = g.get("/documents/article-1").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(read, created);
    assert_eq!(read["document"], doc);

    let (s, again) = g.post_json("/documents", &doc).await;
    assert_eq!((s, again["code"].as_str()), (StatusCode::CONFLICT, Some("already_exists")));

    let mut edited = doc.clone();
    edited["title"] = json!("Article 1 (amended)");
    let (s, updated) = g
        .put_json("/documents/article-1", &json!({"revision": 1, "document": edited}))
        .await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(updated["revision"], 2);
    assert_eq!(updated["createdAt"], created["createdAt"]);

    let (s, stale) = g
        .put_json("/documents/article-1", &json!({"revision": 1, "document": edited}))
        .await;
    assert_eq!((s, stale["code"].as_str()), (StatusCode::CONFLICT, Some("stale_revision")));

    let (s, listing) = g.get("/documents").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(listing[0]["id"], "article-1");
    assert_eq!(listing[0]["revision"], 2);

    let (s, _) = g.call(Method::DELETE, "/documents/article-1", None).await;
    assert_eq!(s, StatusCode::NO_CONTENT);
    let (s, gone) = g.get("/documents/article-1").await;
    assert_eq!((s, gone["code"].as_str()), (StatusCode::NOT_FOUND, Some("not_found")));
    let (s, _) = g.call(Method::DELETE, "/documents/article-1", None).await;
    assert_eq!(s, StatusCode::NOT_FOUND);
}

#[tokio::test]
async fn update_must_target_the_same_id() {
    let g = Gateway::new(4);
    g.post_json("/documents", &law("a", "p", vec![])).await;
    let (s, e) = g
        .put_json("/documents/a", &json!({"revision": 1, "document": law("b", "p", vec![])}))
        .await;
    assert_eq!((s, e["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("id_mismatch")));
}

#[tokio::test]
async fn validation_errors_carry_codes_and_positions() {
    let g = Gateway::new(4);
    let overlapping = law(
        "x",
        "smoking in cars",
        vec![term("a1", 0, 10, "smoke"), term("a2", 5, 15, "car")],
    );
    let (s, e) = g.post_json("/documents", &overlapping).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(e["code"], "overlap_error");
    assert!(e["annotation"].is_string());

    let (s, e) = g.call(Method::POST, "/documents", Some(b"{\n  \"id\": 3,".to_vec())).await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(e["code"], "invalid_document");
    assert_eq!(e["line"], 2);
    assert!(e["column"].as_u64().unwrap() > 0);

    let (s, e) = g.post_json("/documents", &law("../up", "p", vec![])).await;
    assert_eq!((s, e["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("invalid_id")));

    let (s, e) = g.get("/documents/nope/formalization").await;
    assert_eq!((s, e["code"].as_str()), (StatusCode::NOT_FOUND, Some("not_found")));
}

#[tokio::test]
async fn fixture_reasoning_endpoints() {
    let g = Gateway::with_fixtures().await;

    let (s, r) = g.post("/documents/article-1/consistency").await;
    assert_eq!(s, StatusCode::OK, "{r}");
    assert_eq!(r["consistency"]["status"], "consistent");
    assert_eq!(r["formulas"].as_array().unwrap().len(), 2);

    let (s, r) = g.post("/documents/article-1/independence").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(r["report"]["consistent"], true);
    for f in r["report"]["perFormula"].as_array().unwrap() {
        assert_eq!(f["status"], "independent", "{f}");
    }

    let (_, r) = g.post("/queries/case-1/exec?legislation=article-1").await;
    assert_eq!(r["verdict"], "counter_satisfiable");
    assert!(r["countermodel"].is_object());
    let (_, r) = g.post("/queries/case-2/exec?legislation=article-1").await;
    assert_eq!(r["verdict"], "valid");
    assert!(r["certificate"].is_object());

    let (s, r) = g.post("/documents/article-1/tests").await;
    assert_eq!(s, StatusCode::OK);
    assert_eq!(r["summary"], json!({"total": 2, "passed": 2, "failed": 0, "skipped": 2}));
    let (_, r) = g.post("/documents/article-1/tests?queries=test-scenario-2").await;
    assert_eq!(r["summary"]["total"], 1);

    let (_, v) = g.get("/documents/article-1/vocabulary").await;
    assert_eq!(v["entries"].as_array().unwrap().len(), 7);
    let (_, f) = g.get("/documents/article-1/formalization").await;
    assert_eq!(f["formulas"][0]["name"], "Article 1 #1");

    let (s, x) = g.get("/documents/article-1/export?query=case-2").await;
    assert_eq!(s, StatusCode::OK);
    assert!(x["cnf"].as_str().unwrap().contains("negated_conjecture"));

    let (_, n) = g.get("/vocabulary/auto-name?text=Smoking%20Area").await;
    assert_eq!(n["name"], "smoking_area");
    let (_, n) = g.get("/vocabulary/auto-name?text=smoke").await;
    assert_eq!(n["name"], "smoke_2");
}

#[tokio::test]
async fn inconsistent_and_dependent_theories() {
    let g = Gateway::new(4);
    let clash = law(
        "clash",
        "do p. never p.",
        vec![
            comp("a1", 0, 5, Connective::Ob),
            term("a2", 3, 4, "p"),
            comp("a3", 6, 14, Connective::Fb),
            term("a4", 12, 13, "p"),
        ],
    );
    g.post_json("/documents", &clash).await;
    let (_, r) = g.post("/documents/clash/consistency").await;
    assert_eq!(r["consistency"]["status"], "inconsistent");
    assert!(r["consistency"]["certificate"].is_object());

    let twice = law(
        "twice",
        "do p. do p.",
        vec![
            comp("a1", 0, 5, Connective::Ob),
            term("a2", 3, 4, "p"),
            comp("a3", 6, 11, Connective::Ob),
            term("a4", 9, 10, "p"),
        ],
    );
    g.post_json("/documents", &twice).await;
    let (_, r) = g.post("/documents/twice/independence").await;
    for f in r["report"]["perFormula"].as_array().unwrap() {
        assert_eq!(f["status"], "dependent");
    }

    g.post_json("/documents", &law("empty", "nothing", vec![])).await;
    let (_, r) = g.post("/documents/empty/independence").await;
    assert_eq!(r["report"]["perFormula"], json!([]));
}

#[tokio::test]
async fn query_errors() {
    let g = Gateway::with_fixtures().await;
    let mut goalless = fixture("case-1");
    goalless.id = "goalless".into();
    goalless.annotations.retain(|a| !matches!(a.kind, AnnotationKind::Goal));
    g.post_json("/documents", &serde_json::to_value(goalless).unwrap()).await;
    let (s, e) = g.post("/queries/goalless/exec?legislation=article-1").await;
    assert_eq!((s, e["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("missing_goal")));

    let (s, e) = g.post("/queries/case-1/exec").await;
    assert_eq!((s, e["code"].as_str()), (StatusCode::BAD_REQUEST, Some("missing_parameter")));
    let (s, e) = g.post("/queries/case-1/exec?legislation=missing").await;
    assert_eq!(s, StatusCode::NOT_FOUND, "{e}");

    // adult/1 used with no arguments clashes with the article.
    let clash = law("arity", "adults", vec![term("a1", 0, 6, "adult")]);
    let mut q: Document = serde_json::from_value(clash).unwrap();
    q.id = "arity-q".into();
    q.kind = DocumentKind::Query;
    q.annotations.push(Annotation::new("g", Span::new(0, 6), AnnotationKind::Goal));
    q.annotations.push(Annotation::new("f", Span::new(0, 6), AnnotationKind::Composite { connective: Connective::Ob }));
    let (s, e) = g.post_json("/documents", &serde_json::to_value(q).unwrap()).await;
    assert_eq!(s, StatusCode::CREATED, "{e}");
    let (s, e) = g.post("/queries/arity-q/exec?legislation=article-1").await;
    assert_eq!((s, e["code"].as_str()), (StatusCode::UNPROCESSABLE_ENTITY, Some("arity_conflict")));

    let (s, e) = g.post("/queries/case-1/exec?legislation=article-1&ms=0").await;
    assert_eq!((s, e["code"].as_str()), (StatusCode::BAD_REQUEST, Some("invalid_limits")));
    let (s, _) = g.post("/queries/case-1/exec?legislation=article-1&depth=x").await;
    assert_eq!(s, StatusCode::BAD_REQUEST);
}

#[tokio::test]
async fn limits_are_echoed() {
    let g = Gateway::with_fixtures().await;
    let (_, r) = g.post("/queries/case-2/exec?legislation=article-1&depth=12&ms=2000&atoms=300").await;
    assert_eq!(r["limitsUsed"], json!({"maxDepth": 12, "timeBudgetMs": 2000, "maxGroundAtoms": 300}));
}

#[tokio::test]
async fn prover_cap_rejects_without_queueing() {
    let g = Gateway::with_fixtures().await;
    let slots = g.state.prover_slots();
    let held = slots.clone().acquire_many_owned(4).await.unwrap();
    let (s, e) = g.post("/documents/article-1/consistency").await;
    assert_eq!((s, e["code"].as_str()), (StatusCode::SERVICE_UNAVAILABLE, Some("busy")));
    let (s, _) = g.post("/queries/case-2/exec?legislation=article-1").await;
    assert_eq!(s, StatusCode::SERVICE_UNAVAILABLE);
    // Reads do not need a prover slot.
    let (s, _) = g.get("/documents/article-1/formalization").await;
    assert_eq!(s, StatusCode::OK);
    drop(held);
    let (s, _) = g.post("/documents/article-1/consistency").await;
    assert_eq!(s, StatusCode::OK);
}

#[tokio::test]
async fn compile_errors_are_reported_before_any_prover_run() {
    let g = Gateway::new(1);
    // An And box around a single term stores fine but cannot compile.
    let broken = law(
        "broken",
        "p only",
        vec![comp("a1", 0, 6, Connective::And), term("a2", 0, 1, "p")],
    );
    let (s, _) = g.post_json("/documents", &broken).await;
    assert_eq!(s, StatusCode::CREATED);
    let _held = g.state.prover_slots().acquire_owned().await.unwrap();
    let (s, e) = g.post("/documents/broken/consistency").await;
    assert_eq!(s, StatusCode::UNPROCESSABLE_ENTITY);
    assert_eq!(e["code"], "arity_error");
    assert_eq!(e["annotation"], "a1");
}

#[tokio::test]
async fn endpoints_are_deterministic() {
    let g = Gateway::with_fixtures().await;
    for uri in [
        "/documents/article-1/independence",
        "/queries/case-1/exec?legislation=article-1",
        "/documents/article-1/tests",
    ] {
        let (_, a) = g.post(uri).await;
        let (_, b) = g.post(uri).await;
        assert_eq!(
            deontix_cli::reports::without_timings(a),
            deontix_cli::reports::without_timings(b),
            "{uri}"
        );
    }
}
