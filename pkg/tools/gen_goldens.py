"""Regenerate the checked-in golden workflow files from the fixture corpus.

Run after intentionally changing templates or compiler mappings, then
review the diff:  python tools/gen_goldens.py
"""

import json
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "tests"))

from corpus import QUICK_OP_SEED, build_corpus, fixture_specs, quick_op_fixtures  # noqa: E402

from easelworks.canonical import canonical_bytes  # noqa: E402
from easelworks.compiler import Compiler  # noqa: E402

GOLDEN_DIR = ROOT / "tests" / "goldens"


def main():
    GOLDEN_DIR.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as td:
        corpus = build_corpus(Path(td) / "blobs")
        compiler = Compiler()
        for name, spec in fixture_specs(corpus).items():
            graph = compiler.compile(spec, corpus.resolve)
            (GOLDEN_DIR / f"easel_{name}.json").write_bytes(graph.canonical() + b"\n")
            print(f"easel_{name}: {graph.digest()[:12]} ({len(graph.nodes)} nodes)")
        for name, op_kind, asset_key, prompt in quick_op_fixtures(corpus):
            asset = corpus.assets[asset_key]
            plan = compiler.compile_quick_op(
                op_kind, asset, prompt, seed=QUICK_OP_SEED, resolve=corpus.resolve, blob_loader=corpus.blobs.get
            )
            if plan.graph is not None:
                (GOLDEN_DIR / f"quick_{name}.json").write_bytes(plan.graph.canonical() + b"\n")
                print(f"quick_{name}: {plan.graph.digest()[:12]} ({len(plan.graph.nodes)} nodes)")
            else:
                payload = canonical_bytes(plan.local) + b"\n"
                (GOLDEN_DIR / f"quick_{name}.local.json").write_bytes(payload)
                print(f"quick_{name}: local result ({len(payload)} bytes)")
        # stencil with precomputed maps resolves locally; lock that too
        plan = compiler.compile_quick_op(
            "stencil", corpus.assets["forest"], None, seed=QUICK_OP_SEED,
            resolve=corpus.resolve, blob_loader=corpus.blobs.get,
        )
        assert plan.local is not None
        (GOLDEN_DIR / "quick_stencil_cached.local.json").write_bytes(canonical_bytes(plan.local) + b"\n")
        print("quick_stencil_cached: local result")


if __name__ == "__main__":
    main()
