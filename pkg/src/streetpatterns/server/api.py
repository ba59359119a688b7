"""HTTP JSON API consumed by the exploration frontend.

POST /api/routes                          query -> annotated route set
GET  /api/patterns                        pattern catalog
PUT  /api/patterns/{id}                   rename and/or recolor one pattern
GET  /api/routes/{rid}/{side}/images      samples near a marker position
GET  /api/regions                         served region descriptors

Responses are canonical JSON (sorted keys, compact separators), so an
identical query always returns a byte-identical body.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.staticfiles import StaticFiles

from .. import jsonio
from ..geo import GeoPoint
from .service import ProviderUnavailable, QueryError, RegionService, RouteQuery


def _json_response(payload, status_code: int = 200) -> Response:
    return Response(
        content=jsonio.canonical_dumps(payload) + "\n",
        status_code=status_code,
        media_type="application/json",
    )


def _error(status_code: int, message: str) -> Response:
    return _json_response({"error": message}, status_code)


def create_app(service: RegionService, ui_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="streetpatterns", docs_url=None, redoc_url=None)

    @app.get("/api/regions")
    def regions():
        return _json_response([service.region_descriptor()])

    @app.get("/api/patterns")
    def patterns():
        try:
            return _json_response(service.patterns_payload())
        except QueryError as exc:
            return _error(409, str(exc))

    @app.put("/api/patterns/{pattern_id}")
    async def update_pattern(pattern_id: int, request: Request):
        body = await request.json()
        name = body.get("name")
        color = body.get("color")
        if name is None and color is None:
            return _error(400, "nothing to update: pass name and/or color")
        try:
            return _json_response(service.update_pattern(pattern_id, name, color))
        except KeyError:
            return _error(404, f"unknown pattern id {pattern_id}")
        except ValueError as exc:
            status = 409 if "already used" in str(exc) else 400
            return _error(status, str(exc))

    @app.post("/api/routes")
    async def routes(request: Request):
        body = await request.json()
        try:
            query = RouteQuery(
                origin=GeoPoint(*body["origin"]),
                destination=GeoPoint(*body["destination"]),
                region=body.get("region", service.dataset.manifest.region),
                seg_len_m=float(body.get("seg_len_m", RouteQuery.seg_len_m)),
            )
        except (KeyError, TypeError, ValueError) as exc:
            return _error(400, f"malformed query: {exc}")
        try:
            return _json_response(service.query_routes(query))
        except QueryError as exc:
            return _error(400, str(exc))
        except KeyError as exc:
            return _error(404, f"unknown region {exc}")
        except ProviderUnavailable as exc:
            return _error(502, str(exc))

    @app.get("/api/routes/{route_id}/{side}/images")
    def route_images(route_id: str, side: str, at_m: float = 0.0, window: int = 4):
        try:
            return _json_response(service.route_images(route_id, side, at_m, window))
        except QueryError as exc:
            return _error(400, str(exc))
        except KeyError:
            return _error(404, f"unknown route {route_id}/{side}; query routes first")

    if ui_dir is not None:
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
