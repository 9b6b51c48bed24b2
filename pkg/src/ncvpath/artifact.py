"""JSON documents for fitted paths, convexity reports and CV reports.

Floats are written with Python's shortest round-trip ``repr`` so reading
an artifact back reproduces every value bit for bit. Non-finite values
use the JSON extensions ``NaN``/``Infinity``.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .cd_logistic import ScaleMode
from .convexity import ConvexityReport
from .design import Family
from .path import LambdaGrid, PathResult
from .penalties import Penalty

PATH_FORMAT = "ncvpath-path"
CV_FORMAT = "ncvpath-cv"
VERSION = 1


class ArtifactError(ValueError):
    """An artifact file is missing fields or cannot be parsed."""


def _floats(a):
    return [float(x) for x in np.asarray(a).ravel()]


def _opt(x):
    return None if x is None else float(x)


def report_to_dict(report: ConvexityReport) -> dict:
    return {
        "lambda_star": _opt(report.lambda_star),
        "lambda_star_upper": _opt(report.lambda_star_upper),
        "lambda_star_inf": _opt(report.lambda_star_inf),
        "nonmonotone": report.nonmonotone,
        "records": [
            {
                "lambda": float(lam),
                "active": [int(j) for j in report.active[k]],
                "augmented": [int(j) for j in report.augmented[k]],
                "c_star": float(report.c_star[k]),
                "locally_convex": bool(report.locally_convex[k]),
            }
            for k, lam in enumerate(report.lambdas)
        ],
    }


def report_from_dict(d: dict, family: Family, penalty: Penalty, gamma: float) -> ConvexityReport:
    recs = d["records"]
    return ConvexityReport(
        lambdas=np.array([r["lambda"] for r in recs], dtype=float),
        active=[np.array(r["active"], dtype=int) for r in recs],
        augmented=[np.array(r["augmented"], dtype=int) for r in recs],
        c_star=np.array([r["c_star"] for r in recs], dtype=float),
        locally_convex=np.array([r["locally_convex"] for r in recs], dtype=bool),
        lambda_star=d["lambda_star"],
        lambda_star_upper=d["lambda_star_upper"],
        lambda_star_inf=d["lambda_star_inf"],
        family=family, penalty=penalty, gamma=gamma,
    )


def path_to_dict(path: PathResult, report: ConvexityReport | None = None,
                 feature_names=None, meta=None) -> dict:
    p = path.betas.shape[1]
    names = list(feature_names) if feature_names is not None else [f"x{j + 1}" for j in range(p)]
    doc = {
        "format": PATH_FORMAT,
        "version": VERSION,
        "family": path.family.value,
        "penalty": path.penalty.value,
        "gamma": float(path.gamma),
        "scale_mode": path.mode.value if path.mode is not None else None,
        "solver": path.solver,
        "lambda_max": float(path.grid.lambda_max),
        "lambda_min_ratio": float(path.grid.lambda_min_ratio),
        "grid": _floats(path.grid.values),
        "truncated": bool(path.truncated),
        "features": names,
    }
    doc.update(meta or {})
    doc["records"] = [
        {
            "lambda": float(path.lambdas[k]),
            "intercept": float(path.intercepts[k]),
            "betas": _floats(path.betas[k]),
            "std_betas": _floats(path.std_betas[k]),
            "iterations": int(path.iterations[k]),
            "objective": float(path.objective[k]),
            "converged": bool(path.converged[k]),
            "status": path.status[k],
            "min_denominator": (float(path.min_denominator[k])
                                if path.min_denominator is not None else None),
        }
        for k in range(len(path))
    ]
    doc["convexity"] = report_to_dict(report) if report is not None else None
    return doc


def path_from_dict(doc: dict) -> tuple[PathResult, ConvexityReport | None]:
    try:
        if doc.get("format") != PATH_FORMAT:
            raise ArtifactError(f"not a path artifact (format={doc.get('format')!r})")
        family = Family(doc["family"])
        penalty = Penalty(doc["penalty"])
        gamma = float(doc["gamma"])
        mode = ScaleMode(doc["scale_mode"]) if doc["scale_mode"] is not None else None
        recs = doc["records"]
        grid_values = np.array(doc["grid"], dtype=float)
        grid_values.setflags(write=False)
        grid = LambdaGrid(grid_values, float(doc["lambda_max"]), float(doc["lambda_min_ratio"]))
        p = len(doc["features"])
        betas = np.array([r["betas"] for r in recs], dtype=float).reshape(len(recs), p)
        path = PathResult(
            grid=grid, family=family, penalty=penalty, gamma=gamma, mode=mode,
            solver=doc["solver"],
            intercepts=np.array([r["intercept"] for r in recs], dtype=float),
            betas=betas,
            std_betas=np.array([r["std_betas"] for r in recs], dtype=float),
            iterations=np.array([r["iterations"] for r in recs], dtype=int),
            objective=np.array([r["objective"] for r in recs], dtype=float),
            converged=np.array([r["converged"] for r in recs], dtype=bool),
            status=[r["status"] for r in recs],
            truncated=bool(doc["truncated"]),
            min_denominator=np.array([np.nan if r.get("min_denominator") is None
                                      else r["min_denominator"] for r in recs], dtype=float),
        )
        report = None
        if doc.get("convexity") is not None:
            report = report_from_dict(doc["convexity"], family, penalty, gamma)
    except ArtifactError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ArtifactError(f"malformed path artifact: {exc!r}") from None
    return path, report


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=1) + "\n"


def load(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ArtifactError(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from None


def selection_to_dict(report, meta=None) -> dict:
    doc = {"format": CV_FORMAT, "version": VERSION}
    doc.update(meta or {})
    doc.update({
        "folds": report.folds,
        "seed": report.seed,
        "loss": report.loss,
        "chosen": dict(report.chosen),
        "fold_assignment": [int(f) for f in report.fold_assignment],
        "records": [
            {
                "lambda": float(report.lambdas[k]),
                "df": int(report.df[k]),
                "aic": float(report.aic[k]),
                "bic": float(report.bic[k]),
                "cv_error": float(report.cv_error[k]),
                "cv_se": float(report.cv_se[k]),
            }
            for k in range(len(report.lambdas))
        ],
    })
    return doc


def write_coef_table(fh, path: PathResult, feature_names) -> None:
    """Wide table: one row per lambda, intercept and one column per feature."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["lambda", "intercept", *feature_names])
    for k in range(len(path)):
        writer.writerow([repr(float(path.lambdas[k])), repr(float(path.intercepts[k])),
                         *(repr(float(b)) for b in path.betas[k])])
