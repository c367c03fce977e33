"""Render a figure bundle to an image.

Strictly read-only over its inputs: solid curves for computed data, dashed
and dotted lines for the pre-computed asymptote series, square/circle/plus
markers where the bundle says so. No numbers are recomputed here, so the
plotted theory curves are exactly the ones the solver wrote.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .bundle import BundleError, FigureBundle, Series, load_bundle

_LINESTYLES = {"solid": "-", "dashed": "--", "dotted": ":", "dashdot": "-."}
_MARKER_SHAPES = {"square": "s", "circle": "o", "plus": "+"}


def _draw_series(ax, item: Series) -> None:
    if item.style in _LINESTYLES:
        ax.plot(item.x, item.y, linestyle=_LINESTYLES[item.style], label=item.name)
        return
    if item.style == "plus":
        ax.plot(item.x, item.y, linestyle="none", marker="+", markersize=7, label=item.name)
        return
    # per-row marker kinds (threshold locations)
    for kind in sorted(set(item.kinds or ["circle"])):
        shape = _MARKER_SHAPES.get(kind, "o")
        xs = [x for x, k in zip(item.x, item.kinds or []) if k == kind] or item.x
        ys = [y for y, k in zip(item.y, item.kinds or []) if k == kind] or item.y
        ax.plot(xs, ys, linestyle="none", marker=shape, markersize=9, fillstyle="none", label=f"{item.name}:{kind}")


def render(bundle: FigureBundle, out_path: str | Path, dpi: int = 150) -> Path:
    """Draw every series of the bundle into one image file."""
    out_path = Path(out_path)
    fig, axes = plt.subplots(1, bundle.panels, figsize=(6.0 * bundle.panels, 4.5), squeeze=False)
    for panel in range(1, bundle.panels + 1):
        ax = axes[0][panel - 1]
        for item in bundle.series:
            if item.panel == panel:
                _draw_series(ax, item)
        ax.set_xscale(bundle.x_scale)
        ax.set_yscale(bundle.y_scale)
        ax.set_xlabel(bundle.x_label)
        ax.set_ylabel(bundle.y_label)
        ax.legend(fontsize=7)
        ax.set_title(f"{bundle.figure} (panel {panel})" if bundle.panels > 1 else bundle.figure)
    fig.tight_layout()
    out_path.parent.mkdir(parents=True, exist_ok=True)
    # fixed metadata keeps repeated renders byte-identical
    fig.savefig(out_path, dpi=dpi, metadata={"Software": "fpt-figures"})
    plt.close(fig)
    return out_path


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="fpt-render", description=__doc__)
    parser.add_argument("--bundle", type=Path, required=True, help="bundle directory (manifest + CSVs)")
    parser.add_argument("--out", type=Path, required=True, help="output image path (.png)")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        bundle = load_bundle(args.bundle)
    except BundleError as exc:
        print(f"bundle error: {exc}", file=sys.stderr)
        return 1
    render(bundle, args.out, dpi=args.dpi)
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
