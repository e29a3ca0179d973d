"""HTTP scoring service.

Wire protocol (shared with the debate engine's oracle client):

* ``POST /score`` with ``{"property": "qed", "smiles": [...]}`` returns
  ``{"scores": [...], "errors": [...]}``, both aligned with the request;
  per-molecule failures carry a null score and an error string without
  disturbing the other slots.
* ``GET /health`` returns the advertised property list and scorer versions.

Request handling is stateless; scorers are built once at startup and shared
read-only across workers.
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import __version__
from .config import ServiceConfig
from .scorers import build_scorers

__all__ = ["create_app"]


class ScoreRequest(BaseModel):
    property: str
    smiles: list[str] = Field(default_factory=list)


def create_app(config: ServiceConfig | None = None) -> FastAPI:
    config = config or ServiceConfig()
    scorers = build_scorers(config)  # fail-fast: refuses to start on bad config
    app = FastAPI(title="molecular property oracle", version=__version__)

    @app.get("/health")
    def health() -> dict:
        return {
            "status": "ok",
            "properties": sorted(scorers),
            "versions": {name: scorer.version for name, scorer in sorted(scorers.items())},
            "max_batch": config.max_batch,
        }

    @app.post("/score")
    def score(request: ScoreRequest):
        scorer = scorers.get(request.property)
        if scorer is None:
            return JSONResponse(
                status_code=400,
                content={
                    "error": f"unknown property {request.property!r}",
                    "properties": sorted(scorers),
                },
            )
        if len(request.smiles) > config.max_batch:
            return JSONResponse(
                status_code=400,
                content={
                    "error": f"batch of {len(request.smiles)} exceeds "
                    f"max_batch={config.max_batch}"
                },
            )
        scores: list[float | None] = []
        errors: list[str | None] = []
        for smiles in request.smiles:
            try:
                scores.append(scorer.score(smiles))
                errors.append(None)
            except Exception as exc:
                scores.append(None)
                errors.append(str(exc))
        return {"scores": scores, "errors": errors}

    return app
