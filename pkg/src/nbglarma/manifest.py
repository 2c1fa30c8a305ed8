"""Run manifests: resolved config, checksums, and re-run verification.

Every CLI command writes manifest.json next to its outputs with the
fully resolved configuration and a sha256 per artifact. Re-running from
the manifest must reproduce outputs byte-for-byte; the one declared
exception is a wall-clock column in benchmark output, which is listed
under volatile_columns and hashed with those cells blanked.
"""

import csv
import hashlib
import io
import json
import os
import tempfile

from .errors import InputError

MANIFEST_NAME = "manifest.json"


def sha256_file(path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(65536), b""):
            h.update(chunk)
    return h.hexdigest()


def canonical_sha256(path, volatile_columns) -> str:
    """sha256 of the CSV with the volatile columns blanked out."""
    with open(path, "r", newline="", encoding="utf-8") as fh:
        table = list(csv.reader(fh))
    if not table:
        return sha256_file(path)
    drop = [i for i, name in enumerate(table[0]) if name in volatile_columns]
    for row in table[1:]:
        for i in drop:
            row[i] = ""
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(table)
    return hashlib.sha256(buf.getvalue().encode("utf-8")).hexdigest()


def output_entry(path, volatile_columns=()) -> dict:
    entry = {"sha256": sha256_file(path)}
    if volatile_columns:
        entry["volatile_columns"] = list(volatile_columns)
        entry["canonical_sha256"] = canonical_sha256(path, volatile_columns)
    return entry


def write_manifest(out_dir, command: str, config: dict, seed, inputs: dict,
                   outputs: dict, duration_s: float) -> str:
    """Atomically write manifest.json into out_dir; returns its path."""
    data = {
        "command": command,
        "config": config,
        "seed": seed,
        "inputs": {str(p): sha256_file(p) for p in inputs},
        "outputs": outputs,
        "duration_s": duration_s,
    }
    path = os.path.join(out_dir, MANIFEST_NAME)
    fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=".manifest-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2, sort_keys=True)
            fh.write("\n")
        os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)
    return path


def load_manifest(path) -> dict:
    if os.path.isdir(path):
        path = os.path.join(path, MANIFEST_NAME)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read manifest {path}: {exc}") from exc


def compare_outputs(manifest: dict, new_dir) -> list[str]:
    """Checksum mismatches between manifest outputs and files in new_dir."""
    problems = []
    for name, entry in manifest["outputs"].items():
        candidate = os.path.join(new_dir, name)
        if not os.path.exists(candidate):
            problems.append(f"{name}: missing from {new_dir}")
            continue
        if "canonical_sha256" in entry:
            got = canonical_sha256(candidate, entry["volatile_columns"])
            want = entry["canonical_sha256"]
        else:
            got = sha256_file(candidate)
            want = entry["sha256"]
        if got != want:
            problems.append(f"{name}: checksum {got[:12]}.. != recorded {want[:12]}..")
    return problems
