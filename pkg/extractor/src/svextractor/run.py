"""Extraction job runner and CLI.

Walks a region's samples.jsonl in id order, loads each referenced image,
and emits:

* ``masks/<id:06d>.png`` — 8-bit label mask, pixel value = class id
* ``cat19.vivf``       — per-image category histogram (fraction per class)
* ``latent.vivf``      — backbone latent vectors
* ``extraction_log.json`` — skipped ids, per-file status, abort reason

Unreadable or missing images are skipped: their matrix rows stay zero so
row index keeps equaling sample id. A latent-dimension change mid-run
aborts the job (nonzero exit from the CLI) after writing the log.
"""

from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import click
import numpy as np
from PIL import Image

from . import vivfout
from .backends import CLASS_NAMES, SegmentationBackend, load_backend

LOG_FILE = "extraction_log.json"
MASKS_DIR = "masks"


class ExtractionAborted(RuntimeError):
    pass


@dataclass(frozen=True)
class ExtractionJob:
    region_dir: Path
    model: str = "toy"
    batch_size: int = 8
    device: str = "cpu"


def _read_samples(region_dir: Path) -> list[dict]:
    samples_path = region_dir / "samples.jsonl"
    if not samples_path.exists():
        raise ExtractionAborted(f"{samples_path} not found")
    records = []
    with open(samples_path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                records.append(json.loads(line))
    records.sort(key=lambda r: r["id"])
    if [r["id"] for r in records] != list(range(len(records))):
        raise ExtractionAborted("sample ids are not dense 0..n-1")
    return records


def _category_row(mask: np.ndarray) -> np.ndarray:
    counts = np.bincount(mask.ravel().astype(np.int64), minlength=len(CLASS_NAMES))
    return counts / float(mask.size)


def run_extraction(job: ExtractionJob, backend: SegmentationBackend | None = None) -> dict:
    """Run the job; returns the log document (also written to disk)."""
    region_dir = Path(job.region_dir)
    records = _read_samples(region_dir)
    if backend is None:
        backend = load_backend(job.model, device=job.device)

    masks_dir = region_dir / MASKS_DIR
    masks_dir.mkdir(exist_ok=True)

    n = len(records)
    cat19 = np.zeros((n, len(CLASS_NAMES)), dtype=np.float64)
    latent: np.ndarray | None = None
    log: dict = {"model": job.model, "samples": n, "skipped": [], "aborted": None}

    pending: list[tuple[int, np.ndarray]] = []

    def flush() -> None:
        nonlocal latent
        if not pending:
            return
        results = backend.segment_batch([rgb for _, rgb in pending])
        for (sid, _), (mask, vector) in zip(pending, results):
            if latent is None:
                latent = np.zeros((n, vector.shape[0]), dtype=np.float64)
            elif vector.shape[0] != latent.shape[1]:
                log["aborted"] = (
                    f"latent dimension drifted from {latent.shape[1]} "
                    f"to {vector.shape[0]} at id {sid}"
                )
                _write_log(region_dir, log)
                raise ExtractionAborted(log["aborted"])
            Image.fromarray(mask.astype(np.uint8), mode="L").save(masks_dir / f"{sid:06d}.png")
            cat19[sid] = _category_row(mask)
            latent[sid] = vector
        pending.clear()

    for record in records:
        sid = record["id"]
        path = record.get("image_path")
        if not path:
            log["skipped"].append({"id": sid, "reason": "no image path"})
            continue
        image_path = region_dir / path
        try:
            with Image.open(image_path) as img:
                rgb = np.asarray(img.convert("RGB"))
        except (OSError, ValueError) as exc:
            log["skipped"].append({"id": sid, "reason": f"unreadable: {exc}"})
            continue
        pending.append((sid, rgb))
        if len(pending) >= job.batch_size:
            flush()
    flush()

    if latent is None:
        latent = np.zeros((n, backend.latent_dim), dtype=np.float64)

    vivfout.write_matrix(region_dir / "cat19.vivf", vivfout.KIND_CATEGORY19, cat19)
    vivfout.write_matrix(region_dir / "latent.vivf", vivfout.KIND_LATENT, latent)
    log["latent_dim"] = int(latent.shape[1])
    log["extracted"] = n - len(log["skipped"])
    _write_log(region_dir, log)
    return log


def _write_log(region_dir: Path, log: dict) -> None:
    (region_dir / LOG_FILE).write_text(
        json.dumps(log, sort_keys=True, separators=(",", ":")) + "\n", encoding="utf-8"
    )


@click.command()
@click.option("--region", "region_dir", type=click.Path(exists=True), required=True)
@click.option("--model", default="toy", show_default=True,
              help="'toy' or 'torch:<checkpoint.pt>'")
@click.option("--batch", "batch_size", type=int, default=8, show_default=True)
@click.option("--device", default="cpu", show_default=True)
def main(region_dir, model, batch_size, device):
    """Run feature extraction over a region's street-view images."""
    job = ExtractionJob(
        region_dir=Path(region_dir), model=model, batch_size=batch_size, device=device
    )
    try:
        log = run_extraction(job)
    except ExtractionAborted as exc:
        click.echo(f"aborted: {exc}", err=True)
        sys.exit(2)
    click.echo(
        f"extracted {log['extracted']}/{log['samples']} images "
        f"(latent dim {log['latent_dim']}, {len(log['skipped'])} skipped)"
    )


if __name__ == "__main__":
    main()
