"""Writing experiment reports: JSON, a CSV table of classes and PNG figures."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import List, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .jets import FiltrationProfile  # noqa: E402
from .pipeline import ExperimentReport  # noqa: E402

CSV_FIELDS = ["class", "p", "point_mod_p", "size", "D", "form", "status"]


def class_rows(report: ExperimentReport) -> List[dict]:
    rows = []
    for i, o in enumerate(report.outcomes):
        rows.append({
            "class": i,
            "p": o.p,
            "point_mod_p": ":".join(map(str, o.point_mod_p)),
            "size": len(o.members),
            "D": "" if o.degree is None else o.degree,
            "form": "" if o.form is None else str(o.form),
            "status": "covered" if o.ok else "failed",
        })
    if not report.singular.is_empty:
        rows.append({"class": "singular", "p": "", "point_mod_p": "",
                     "size": len(report.singular.covered_points),
                     "D": report.singular.degree_used, "form": str(report.singular.form),
                     "status": "covered"})
    if report.part_one is not None:
        rows.append({"class": "part1", "p": "", "point_mod_p": "",
                     "size": len(report.part_one.covered_points),
                     "D": report.part_one.degree_used, "form": str(report.part_one.form),
                     "status": "covered"})
    return rows


def write_csv(report: ExperimentReport, path: Path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=CSV_FIELDS)
        w.writeheader()
        w.writerows(class_rows(report))
    return path


def plot_points(report: ExperimentReport, path: Path) -> Optional[Path]:
    """Affine picture of the enumerated points, colored by covering class."""
    pts = report.points
    if not pts or len(pts[0]) != 3:
        return None
    fig, ax = plt.subplots(figsize=(5, 5))
    owner = {}
    for i, o in enumerate(report.outcomes):
        for P in o.members:
            owner[P] = i
    xs, ys, cs = [], [], []
    for P in pts:
        x, y, z = P.coords
        if z == 0:
            continue
        xs.append(x / z)
        ys.append(y / z)
        cs.append(owner.get(P, -1))
    ax.scatter(xs, ys, c=cs, cmap="tab20", s=14, edgecolors="none")
    ax.set_xlabel("x/z")
    ax.set_ylabel("y/z")
    ax.set_title(f"{len(pts)} points, {report.total_forms} forms")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_degrees(report: ExperimentReport, path: Path) -> Path:
    """Class sizes against the degree at which each class was covered."""
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ok = [o for o in report.outcomes if o.ok]
    ax.scatter([len(o.members) for o in ok], [o.degree for o in ok], s=18, label="covered")
    bad = [o for o in report.outcomes if not o.ok]
    if bad:
        ax.scatter([len(o.members) for o in bad], [0] * len(bad), marker="x", color="red",
                   label="failed")
    ax.set_xlabel("class size")
    ax.set_ylabel("degree D")
    ax.legend(loc="best", frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def plot_profile(profile: FiltrationProfile, path: Path) -> Path:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ms = list(range(1, len(profile.dims) + 1))
    ax.bar(ms, profile.dims, color="0.4")
    ax.set_xlabel("m")
    ax.set_ylabel("k_m")
    ax.set_title(f"D = {profile.D}, R = {profile.R}, r_1 = {profile.r1}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return Path(path)


def write_report(report: ExperimentReport, out: Path) -> List[Path]:
    """Write ``out`` (JSON) plus ``.csv`` and ``.points.png``/``.degrees.png`` beside it."""
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(json.dumps(report.to_json(), indent=2))
    stem = out.with_suffix("")
    written = [out, write_csv(report, stem.with_suffix(".csv"))]
    p = plot_points(report, Path(f"{stem}.points.png"))
    if p is not None:
        written.append(p)
    written.append(plot_degrees(report, Path(f"{stem}.degrees.png")))
    return written


def write_profiles_csv(profiles: Sequence[FiltrationProfile], path: Path) -> Path:
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["D", "center", "m", "k_m"])
        for prof in profiles:
            for m, k in enumerate(prof.dims, start=1):
                w.writerow([prof.D, str(prof.center), m, k])
    return Path(path)
