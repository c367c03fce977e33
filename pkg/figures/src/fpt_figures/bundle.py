"""Figure bundle contract: a manifest plus one CSV per data series.

The manifest is a flat `key = value` file. Recognized keys:

    figure = <id>
    panels = <count>
    axis.x.scale / axis.y.scale = linear | log
    axis.x.label / axis.y.label = <text>
    series.<name>.file  = <relative csv path>
    series.<name>.style = solid | dashed | dotted | dashdot | markers | plus
    series.<name>.panel = <1-based panel index>
    marker.<tag>.<kind> = <value>          (informational threshold rows)

Series CSVs carry a header row and two numeric columns (x, y), or three
columns (x, y, marker kind) for style `markers`.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

VALID_SCALES = {"linear", "log"}
VALID_STYLES = {"solid", "dashed", "dotted", "dashdot", "markers", "plus"}


class BundleError(ValueError):
    """The bundle directory violates the manifest/CSV contract."""


@dataclass
class Series:
    name: str
    path: Path
    style: str
    panel: int
    x: np.ndarray = field(default=None, repr=False)
    y: np.ndarray = field(default=None, repr=False)
    kinds: list[str] | None = field(default=None, repr=False)


@dataclass
class FigureBundle:
    figure: str
    panels: int
    x_scale: str
    y_scale: str
    x_label: str
    y_label: str
    series: list[Series]
    markers: dict[str, float]


def _parse_manifest(path: Path) -> dict[str, str]:
    entries: dict[str, str] = {}
    for line_no, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise BundleError(f"{path}:{line_no}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        entries[key.strip()] = value.strip()
    return entries


def _load_series_csv(series: Series) -> None:
    with open(series.path, newline="") as fh:
        rows = list(csv.reader(fh))
    if len(rows) < 2:
        raise BundleError(f"{series.path}: no data rows")
    body = rows[1:]
    try:
        series.x = np.array([float(r[0]) for r in body])
        series.y = np.array([float(r[1]) for r in body])
    except (ValueError, IndexError) as exc:
        raise BundleError(f"{series.path}: malformed numeric columns: {exc}") from exc
    if len(body[0]) >= 3:
        series.kinds = [r[2] for r in body]


def load_bundle(directory: str | Path) -> FigureBundle:
    """Parse and validate a bundle directory; every series file must load."""
    directory = Path(directory)
    manifest_path = directory / "manifest.txt"
    if not manifest_path.exists():
        raise BundleError(f"missing manifest: {manifest_path}")
    entries = _parse_manifest(manifest_path)

    x_scale = entries.get("axis.x.scale", "linear")
    y_scale = entries.get("axis.y.scale", "linear")
    for scale in (x_scale, y_scale):
        if scale not in VALID_SCALES:
            raise BundleError(f"invalid axis scale {scale!r}")

    names = sorted(
        {key.split(".")[1] for key in entries if key.startswith("series.") and key.endswith(".file")}
    )
    if not names:
        raise BundleError("bundle declares no series")
    series: list[Series] = []
    missing: list[str] = []
    for name in names:
        style = entries.get(f"series.{name}.style", "solid")
        if style not in VALID_STYLES:
            raise BundleError(f"series {name}: invalid style {style!r}")
        path = directory / entries[f"series.{name}.file"]
        if not path.exists():
            missing.append(str(path))
            continue
        item = Series(
            name=name,
            path=path,
            style=style,
            panel=int(entries.get(f"series.{name}.panel", "1")),
        )
        _load_series_csv(item)
        series.append(item)
    if missing:
        raise BundleError("missing series files: " + ", ".join(missing))

    markers = {
        key[len("marker.") :]: float(value) for key, value in entries.items() if key.startswith("marker.")
    }
    return FigureBundle(
        figure=entries.get("figure", directory.name),
        panels=int(entries.get("panels", "1")),
        x_scale=x_scale,
        y_scale=y_scale,
        x_label=entries.get("axis.x.label", "x"),
        y_label=entries.get("axis.y.label", "y"),
        series=series,
        markers=markers,
    )
