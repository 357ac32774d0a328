"""HTTP JSON surface over the session store.

Read-only over snapshots: filtering creates new snapshots, nothing mutates
an existing one, so identical requests against an unchanged snapshot return
identical bodies. Localhost-oriented, no auth; anonymize before serving.
"""

from __future__ import annotations

import json

from fastapi import Body, FastAPI, Form, HTTPException, UploadFile
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from . import discover, social, stats
from .exports import MetricMismatchError, dotted_chart_csv, export_dot
from .filters import pipeline_from_list
from .ingest import ColumnMapping, MissingColumnError, MissingPolicy, parse_csv
from .replay import replay_stream
from .stats import UnknownCategoryError
from .store import SessionStore, Snapshot
from .xes import XesParseError, import_xes

API = "/api/v1"


def _snapshot(store: SessionStore, log_id: str) -> Snapshot:
    snap = store.get(log_id)
    if snap is None:
        raise HTTPException(status_code=404, detail=f"unknown snapshot {log_id!r}")
    return snap


def _semantic(exc: Exception) -> HTTPException:
    return HTTPException(status_code=422, detail=str(exc))


def create_app(store: SessionStore | None = None) -> FastAPI:
    store = store if store is not None else SessionStore()
    app = FastAPI(title="flowbench", version="0.1.0")
    app.state.store = store
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.post(API + "/logs")
    async def upload_log(file: UploadFile, config: str | None = Form(default=None)):
        data = await file.read()
        filename = file.filename or ""
        cfg = {}
        if config:
            try:
                cfg = json.loads(config)
            except json.JSONDecodeError as exc:
                raise HTTPException(status_code=400, detail=f"config is not JSON: {exc}")
        try:
            if filename.endswith(".xes") or cfg.get("format") == "xes":
                log = import_xes(data)
                report = None
            else:
                if "mapping" not in cfg:
                    raise HTTPException(
                        status_code=400, detail="CSV upload needs a config with a mapping"
                    )
                mapping = ColumnMapping.from_dict(cfg["mapping"])
                policy = MissingPolicy(mode=cfg.get("policy", "keep_as_na"))
                log, report = parse_csv(
                    data, mapping, policy, name=cfg.get("name", filename or "log")
                )
        except XesParseError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except MissingColumnError as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except (KeyError, ValueError) as exc:
            raise HTTPException(status_code=400, detail=f"bad config: {exc}")
        snap = store.put(log, ingest_report=report)
        return snap.to_dict()

    @app.get(API + "/logs/{log_id}/summary")
    def summary(log_id: str):
        snap = _snapshot(store, log_id)
        return stats.summarize(snap.log).to_dict()

    @app.get(API + "/logs/{log_id}/frequency")
    def frequency(log_id: str, dim: str = "activity"):
        snap = _snapshot(store, log_id)
        try:
            rows = stats.frequency_table(snap.log, dimension=dim)
        except ValueError as exc:
            raise _semantic(exc)
        return {"dimension": dim, "rows": [r.to_dict() for r in rows]}

    @app.get(API + "/logs/{log_id}/overtime")
    def overtime(log_id: str, unit: str = "events", bucket: str = "month"):
        snap = _snapshot(store, log_id)
        try:
            series = stats.over_time(snap.log, unit=unit, bucket=bucket)
        except ValueError as exc:
            raise _semantic(exc)
        return {"unit": unit, "bucket": bucket, "series": [p.to_dict() for p in series]}

    @app.get(API + "/logs/{log_id}/variants")
    def variants(log_id: str):
        snap = _snapshot(store, log_id)
        return {"variants": [v.to_dict() for v in stats.variants(snap.log)]}

    @app.get(API + "/logs/{log_id}/distribution")
    def distribution(log_id: str):
        snap = _snapshot(store, log_id)
        return stats.per_case_distribution(snap.log).to_dict()

    @app.get(API + "/logs/{log_id}/quality")
    def quality(log_id: str):
        snap = _snapshot(store, log_id)
        return stats.quality_report(snap.log, snap.ingest_report).to_dict()

    @app.get(API + "/logs/{log_id}/dotted")
    def dotted(log_id: str, x: str = "absolute", sort: str = "first_event_time", cat: str = "activity"):
        snap = _snapshot(store, log_id)
        try:
            chart = stats.dotted_chart(snap.log, x_mode=x, sort=sort, category=cat)
        except (UnknownCategoryError, ValueError) as exc:
            raise _semantic(exc)
        return chart.to_dict()

    @app.post(API + "/logs/{log_id}/filter")
    def apply_filters(log_id: str, body: dict = Body(...)):
        snap = _snapshot(store, log_id)
        items = body.get("pipeline")
        if not isinstance(items, list):
            raise HTTPException(status_code=400, detail='body needs a "pipeline" list')
        try:
            pipeline = pipeline_from_list(items)
        except (KeyError, ValueError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=f"bad filter spec: {exc}")
        filtered = pipeline.apply(snap.log)
        out = store.put(
            filtered, parent=snap.key, pipeline=tuple(json.dumps(i, sort_keys=True) for i in items)
        )
        return out.to_dict()

    @app.get(API + "/logs/{log_id}/dfg")
    def dfg(log_id: str, activities: float = 1.0, paths: float = 1.0, metric: str = "frequency"):
        snap = _snapshot(store, log_id)
        if metric not in ("frequency", "mean_duration", "total_duration"):
            raise _semantic(MetricMismatchError(metric, "Dfg"))
        graph = discover.build_dfg(snap.log)
        try:
            graph = discover.simplify_dfg(graph, activities, paths)
        except ValueError as exc:
            raise _semantic(exc)
        return {"metric": metric, **graph.to_dict()}

    @app.get(API + "/logs/{log_id}/alpha")
    def alpha(log_id: str):
        snap = _snapshot(store, log_id)
        return discover.alpha_miner(snap.log).to_dict()

    @app.get(API + "/logs/{log_id}/deps")
    def deps(log_id: str):
        snap = _snapshot(store, log_id)
        return discover.dependency_matrix(snap.log).to_dict()

    @app.get(API + "/logs/{log_id}/clusters")
    def clusters(log_id: str, threshold: float = 0.5):
        snap = _snapshot(store, log_id)
        try:
            groups = discover.cooccurrence_clusters(snap.log, threshold)
        except ValueError as exc:
            raise _semantic(exc)
        return {"threshold": threshold, "clusters": [sorted(g) for g in groups]}

    @app.get(API + "/logs/{log_id}/social")
    def social_net(log_id: str, kind: str = "handover", metric: str = "joint_cases", bands: int = 5):
        snap = _snapshot(store, log_id)
        try:
            net = _build_social(snap, kind, metric)
            return net.to_dict(bands=bands)
        except ValueError as exc:
            raise _semantic(exc)

    @app.get(API + "/logs/{log_id}/replay")
    def replay(log_id: str):
        snap = _snapshot(store, log_id)
        return replay_stream(snap.log).to_dict()

    @app.get(API + "/logs/{log_id}/export")
    def export(
        log_id: str,
        object: str = "dfg",
        format: str = "json",
        metric: str | None = None,
        activities: float = 1.0,
        paths: float = 1.0,
        kind: str = "handover",
        x: str = "absolute",
        sort: str = "first_event_time",
        cat: str = "activity",
        threshold: float = 0.5,
    ):
        snap = _snapshot(store, log_id)
        try:
            if object == "dfg":
                graph = discover.simplify_dfg(discover.build_dfg(snap.log), activities, paths)
                if format == "dot":
                    return PlainTextResponse(export_dot(graph, metric or "frequency"))
                if format == "json":
                    return graph.to_dict()
            elif object == "alpha":
                net = discover.alpha_miner(snap.log)
                if format == "dot":
                    return PlainTextResponse(export_dot(net, metric or "frequency"))
                if format == "json":
                    return net.to_dict()
            elif object == "social":
                net = _build_social(snap, kind, "joint_cases")
                if format == "dot":
                    return PlainTextResponse(export_dot(net, metric or "weight"))
                if format == "json":
                    return net.to_dict()
            elif object == "dotted":
                chart = stats.dotted_chart(snap.log, x_mode=x, sort=sort, category=cat)
                if format == "csv":
                    return PlainTextResponse(dotted_chart_csv(chart), media_type="text/csv")
                if format == "json":
                    return chart.to_dict()
            elif object == "deps" and format == "json":
                return discover.dependency_matrix(snap.log).to_dict()
            elif object == "clusters" and format == "json":
                groups = discover.cooccurrence_clusters(snap.log, threshold)
                return {"threshold": threshold, "clusters": [sorted(g) for g in groups]}
        except (MetricMismatchError, UnknownCategoryError, ValueError) as exc:
            raise _semantic(exc)
        raise HTTPException(
            status_code=400, detail=f"unsupported export object={object!r} format={format!r}"
        )

    return app


def _build_social(snap: Snapshot, kind: str, metric: str):
    if kind == "handover":
        return social.handover(snap.log)
    if kind == "subcontract":
        return social.subcontract(snap.log)
    if kind == "working_together":
        return social.working_together(snap.log, metric=metric)
    raise ValueError(f"unknown social network kind {kind!r}")


def serve(store: SessionStore, bind: str = "127.0.0.1:8000") -> None:
    """Run the API (blocking)."""
    import uvicorn

    host, _, port = bind.partition(":")
    uvicorn.run(create_app(store), host=host or "127.0.0.1", port=int(port or "8000"), log_level="warning")
