"""Accept problem documents as application/x-yaml request bodies."""

from typing import Callable

from fastapi import Request, Response
from ruamel.yaml.error import YAMLError
from starlette.middleware.base import BaseHTTPMiddleware

from core.yaml_utils import yaml_helper

YAML_MEDIA_TYPE = "application/x-yaml"


class YAMLMiddleware(BaseHTTPMiddleware):
    """Parse YAML bodies into ``request.state.yaml_data``."""

    async def dispatch(self, request: Request, call_next: Callable) -> Response:
        if request.headers.get("content-type", "").startswith(YAML_MEDIA_TYPE):
            body = await request.body()
            if body:
                try:
                    request.state.yaml_data = yaml_helper.decode(body.decode("utf-8"))
                except (YAMLError, UnicodeDecodeError) as e:
                    return Response(content=f"Invalid YAML: {e}", status_code=400, media_type="text/plain")
        return await call_next(request)
