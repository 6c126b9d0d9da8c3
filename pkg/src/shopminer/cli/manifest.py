"""Atomic output writing and run manifests.

Every subcommand writes its artifacts through ``atomic_write_*`` (temp file
in the target directory, then rename) and finishes with a manifest recording
the config hash, master seed and input hashes, which is enough to reproduce
any artifact.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from pathlib import Path

from shopminer import __version__
from shopminer.lda.kernel import BACKEND

MANIFEST_SCHEMA = "shopminer.manifest.v1"


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def atomic_write_bytes(path, data: bytes) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name + ".tmp")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def atomic_write_text(path, text: str) -> Path:
    return atomic_write_bytes(path, text.encode("utf-8"))


def write_manifest(
    out_dir,
    command: str,
    config,
    inputs: dict[str, Path] | None = None,
    outputs: list[Path] | None = None,
    extra: dict | None = None,
) -> Path:
    manifest = {
        "schema": MANIFEST_SCHEMA,
        "command": command,
        "package_version": __version__,
        "kernel_backend": BACKEND,
        "created_at": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "master_seed": config.seed,
        "config_sha256": sha256_bytes(config.canonical_json().encode("utf-8")),
        "inputs": {
            name: {"path": str(p), "sha256": sha256_file(p)}
            for name, p in (inputs or {}).items()
        },
        "outputs": sorted(str(p) for p in (outputs or [])),
    }
    if extra:
        manifest["extra"] = extra
    path = Path(out_dir) / f"manifest_{command}.json"
    atomic_write_text(path, json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path
