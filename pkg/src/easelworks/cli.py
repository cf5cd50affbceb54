"""Command line entry points: serve the engine, compile a spec headlessly,
seed a demo document."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .compiler import Compiler
from .config import EngineConfig
from .easelspec import EaselSpec


class _DictAsset:
    """AssetLike over a plain JSON record (for headless compilation)."""

    def __init__(self, asset_id: str, record: dict):
        self.asset_id = asset_id
        self.kind = record.get("kind", "image")
        self.blob = record["blob"]
        self.dims = tuple(record["dims"]) if record.get("dims") else None
        self.control_maps = dict(record.get("control_maps") or {})
        self.caption = record.get("caption")


@click.group()
def main():
    """Canvas generation engine."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None, help="JSON config file")
@click.option("--data-dir", default=None, help="override data directory")
@click.option("--backend", default=None, type=click.Choice(["mock", "remote"]), help="backend mode")
@click.option("--backend-url", default=None, help="remote backend base URL")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8911, show_default=True)
def serve(config_path, data_dir, backend, backend_url, host, port):
    """Run the engine HTTP service."""
    import uvicorn

    from .engine import Engine
    from .service import create_app

    config = EngineConfig.load(config_path)
    if data_dir:
        config.data_dir = data_dir
    if backend:
        config.backend_mode = backend
    if backend_url:
        config.backend_url = backend_url
    engine = Engine(config)
    app = create_app(engine)
    try:
        uvicorn.run(app, host=host, port=port, log_level="warning")
    finally:
        engine.close()


@main.command("compile")
@click.argument("spec_path", type=click.Path(exists=True))
@click.option("-o", "out_path", type=click.Path(), default=None, help="write graph JSON here instead of stdout")
def compile_cmd(spec_path, out_path):
    """Compile an easel spec file into canonical workflow JSON.

    The file holds either the spec itself or {"spec": ..., "assets": {id:
    {blob, kind, dims, control_maps}}} when the spec references assets.
    """
    doc = json.loads(Path(spec_path).read_text())
    spec_dict = doc.get("spec", doc)
    assets = {aid: _DictAsset(aid, rec) for aid, rec in (doc.get("assets") or {}).items()}
    graph = Compiler().compile(EaselSpec.from_dict(spec_dict), assets.get)
    data = graph.canonical()
    if out_path:
        Path(out_path).write_bytes(data + b"\n")
        click.echo(f"wrote {out_path} ({graph.digest()[:12]})")
    else:
        sys.stdout.buffer.write(data + b"\n")


@main.command("demo-seed")
@click.option("--data-dir", default="./engine-data", show_default=True)
@click.option("--name", default="demo", show_default=True)
def demo_seed(data_dir, name):
    """Create a seeded demo document in the data directory."""
    from .demo import seed_demo_document
    from .engine import Engine

    config = EngineConfig.load(None)
    config.data_dir = data_dir
    engine = Engine(config)
    try:
        doc = seed_demo_document(engine, name=name)
        click.echo(json.dumps({"document_id": doc.doc_id, "name": doc.name}))
    finally:
        engine.close()


if __name__ == "__main__":
    main()
