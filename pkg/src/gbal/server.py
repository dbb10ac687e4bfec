"""HTTP/JSON service exposing one labeling session to the browser UI.

A single session per process; reads are free, label submissions and loop
advancement are serialized behind one lock. Every response carries the
session's config hash so a client can detect that it is talking to a
different run than the one it loaded.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from .session import StaleIterationError

__all__ = ["create_app"]


class LabelItem(BaseModel):
    id: int
    cls: int = Field(alias="class")


class LabelSubmission(BaseModel):
    iteration: int
    labels: list[LabelItem]


def create_app(session, ui_dir=None):
    """Build the FastAPI app around an ActiveLearningSession.

    The session must already be constructed; :meth:`start` is called here
    if the caller has not done so. Pass ``ui_dir`` to serve the built
    frontend statically at the root path.
    """
    app = FastAPI(title="graph batch active learning", docs_url=None,
                  redoc_url=None)
    lock = threading.Lock()
    chash = session.config.config_hash()
    if not session.started:
        session.start()

    class_names = session.config.class_names
    if class_names is None:
        class_names = tuple(f"class {c}" for c in range(session.n_classes))

    def session_view():
        return {
            "iteration": session.iteration,
            "labeled_count": session.n_labeled,
            "budget": session.budget_target,
            "done": session.done,
            "accuracy_history": [h.to_json_dict() for h in session.history],
            "config_hash": chash,
        }

    @app.get("/api/session")
    def get_session():
        with lock:
            return session_view()

    @app.get("/api/query")
    def get_query():
        with lock:
            if session.pending is None:
                return {"iteration": session.iteration, "ids": [],
                        "done": session.done, "features_preview": [],
                        "config_hash": chash}
            ids = [int(i) for i in session.pending.ids]
            preview = []
            if session.features is not None:
                preview = [[float(v) for v in session.features[i][:2]]
                           for i in ids]
            return {"iteration": session.pending.iteration, "ids": ids,
                    "done": session.done, "features_preview": preview,
                    "config_hash": chash}

    @app.post("/api/labels")
    def post_labels(body: LabelSubmission):
        with lock:
            answers = {item.id: item.cls for item in body.labels}
            try:
                advanced = session.submit_labels(answers,
                                                 iteration=body.iteration)
            except StaleIterationError as exc:
                raise HTTPException(status_code=409, detail=str(exc))
            except KeyError as exc:
                raise HTTPException(status_code=409,
                                    detail=exc.args[0] if exc.args else str(exc))
            except ValueError as exc:
                raise HTTPException(status_code=400, detail=str(exc))
            out = session_view()
            out["advanced"] = advanced
            return out

    @app.get("/api/classes")
    def get_classes():
        return {"classes": [{"id": c, "name": name}
                            for c, name in enumerate(class_names)],
                "config_hash": chash}

    @app.get("/api/points/{point_id}")
    def get_point(point_id: int):
        with lock:
            if not 0 <= point_id < session.graph.n_nodes:
                raise HTTPException(status_code=404,
                                    detail=f"no point {point_id}")
            features = None
            if session.features is not None:
                features = [float(v) for v in session.features[point_id]]
            labeled = point_id in session.labels
            return {"id": point_id, "features": features,
                    "labeled": labeled,
                    "class": session.labels.get(point_id),
                    "image_url": None, "config_hash": chash}

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
