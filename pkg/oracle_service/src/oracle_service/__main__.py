"""Run the service: python -m oracle_service [--config FILE] [--port N]."""

from __future__ import annotations

import argparse

import uvicorn

from .app import create_app
from .config import ServiceConfig


def main() -> None:
    parser = argparse.ArgumentParser(prog="oracle-service")
    parser.add_argument("--config", default=None, help="service config JSON")
    parser.add_argument("--host", default=None)
    parser.add_argument("--port", type=int, default=None)
    args = parser.parse_args()
    config = ServiceConfig.from_file(args.config) if args.config else ServiceConfig()
    if args.host is not None:
        config.host = args.host
    if args.port is not None:
        config.port = args.port
    uvicorn.run(create_app(config), host=config.host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
