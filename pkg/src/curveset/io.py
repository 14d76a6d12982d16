"""Line-delimited JSON datasets and coreset files."""

from __future__ import annotations

import json
import math
from datetime import datetime, timezone
from typing import Optional

import numpy as np

from . import __version__
from .clustering import ClusteringInstance
from .coreset import CoresetMeta, WeightedCoreset
from .geometry import Curve, CurvesetError, PointSet
from .metrics import MetricKind

TOOL = "curveset"
_KINDS = {"curve": Curve, "pointset": PointSet}


class DatasetError(CurvesetError):
    pass


def _parse_record(line: str, lineno: int) -> dict:
    try:
        rec = json.loads(line)
    except json.JSONDecodeError as exc:
        raise DatasetError(f"line {lineno}: invalid JSON ({exc.msg})") from None
    if not isinstance(rec, dict):
        raise DatasetError(f"line {lineno}: record must be an object")
    for key in ("id", "kind", "points"):
        if key not in rec:
            raise DatasetError(f"line {lineno}: missing field {key!r}")
    if rec["kind"] not in _KINDS:
        raise DatasetError(f"line {lineno}: unknown kind {rec['kind']!r}")
    return rec


def read_records(path) -> list[tuple[int, dict]]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if line.strip():
                out.append((lineno, _parse_record(line, lineno)))
    if not out:
        raise DatasetError(f"{path}: no records")
    return out


def record_object(rec: dict, lineno: int = 0):
    try:
        return _KINDS[rec["kind"]](rec["points"])
    except (CurvesetError, ValueError, TypeError) as exc:
        raise DatasetError(f"line {lineno}: bad points ({exc})") from None


def load_dataset(path, metric: MetricKind, k: int = 1, l: Optional[int] = None) -> ClusteringInstance:
    """Read a dataset file into an instance; ``l`` defaults to the largest object size."""
    records = read_records(path)
    kinds = {rec["kind"] for _, rec in records}
    if len(kinds) > 1:
        raise DatasetError(f"mixed kinds in dataset: {sorted(kinds)}")
    expected = "pointset" if metric is MetricKind.HAUSDORFF else "curve"
    if kinds.pop() != expected:
        raise DatasetError(f"metric {metric.value} needs {expected} records")
    objects, ids, weights = [], [], []
    dim = None
    for lineno, rec in records:
        obj = record_object(rec, lineno)
        if dim is None:
            dim = obj.dim
        elif obj.dim != dim:
            raise DatasetError(f"line {lineno}: dimension {obj.dim} differs from {dim}")
        objects.append(obj)
        ids.append(str(rec["id"]))
        weights.append(rec.get("weight"))
    present = [w is not None for w in weights]
    if any(present) and not all(present):
        raise DatasetError("weights must be given on all records or none")
    w = None
    if all(present):
        for (lineno, _), wt in zip(records, weights):
            if not isinstance(wt, (int, float)) or not math.isfinite(wt) or wt <= 0:
                raise DatasetError(f"line {lineno}: weight must be a positive number")
        w = np.array(weights, dtype=np.float64)
    m = max(len(o) for o in objects)
    return ClusteringInstance.create(objects, metric, k=k, l=l if l is not None else m,
                                     weights=w, ids=ids)


def save_dataset(inst: ClusteringInstance, path, with_weights: bool = True) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for obj_id, obj, w in zip(inst.ids, inst.objects, inst.weights):
            rec = {"id": obj_id, "kind": obj.kind, "points": obj.tolist()}
            if with_weights:
                rec["weight"] = float(w)
            fh.write(json.dumps(rec) + "\n")


def coreset_header(cs: WeightedCoreset, timestamp: bool = True) -> dict:
    m = cs.meta
    header = {
        "tool": TOOL,
        "version": __version__,
        "metric": m.metric.value,
        "k": m.k,
        "l": m.l,
        "eps": m.eps,
        "a": m.a,
        "S": m.S,
        "seed": m.seed,
        "size_constant": m.size_constant,
        "delta_exponent": m.delta_exponent,
        "alpha": m.alpha,
        "beta": m.beta,
        "opt_prime": m.opt_prime,
    }
    if timestamp:
        header["created"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return header


def save_coreset(cs: WeightedCoreset, path, timestamp: bool = True) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"header": coreset_header(cs, timestamp)}) + "\n")
        for obj, obj_id, idx, w, s in zip(cs.objects, cs.ids, cs.indices, cs.weights, cs.sens):
            rec = {"id": obj_id, "index": int(idx), "weight": float(w), "s": float(s),
                   "kind": obj.kind, "points": obj.tolist()}
            fh.write(json.dumps(rec) + "\n")


def load_coreset(path) -> WeightedCoreset:
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if ln.strip()]
    if not lines:
        raise DatasetError(f"{path}: empty coreset file")
    try:
        header = json.loads(lines[0])["header"]
        meta = CoresetMeta(a=int(header["a"]), S=float(header["S"]), eps=float(header["eps"]),
                           seed=int(header["seed"]), metric=MetricKind(header["metric"]),
                           k=int(header["k"]), l=int(header["l"]),
                           size_constant=float(header["size_constant"]),
                           delta_exponent=float(header["delta_exponent"]),
                           alpha=float(header["alpha"]), beta=float(header["beta"]),
                           opt_prime=float(header["opt_prime"]))
    except (KeyError, ValueError, TypeError, json.JSONDecodeError) as exc:
        raise DatasetError(f"line 1: bad coreset header ({exc})") from None
    objects, ids, idx, weights, sens = [], [], [], [], []
    for lineno, line in enumerate(lines[1:], start=2):
        rec = _parse_record(line, lineno)
        objects.append(record_object(rec, lineno))
        ids.append(str(rec["id"]))
        idx.append(int(rec.get("index", -1)))
        weights.append(float(rec["weight"]))
        sens.append(float(rec.get("s", math.nan)))
    if len(objects) != meta.a:
        raise DatasetError(f"header says a={meta.a} but file has {len(objects)} entries")
    w = np.array(weights)
    if np.any(w <= 0):
        raise DatasetError("coreset weights must be positive")
    return WeightedCoreset(tuple(objects), w, tuple(ids), np.array(idx, dtype=np.int64),
                           np.array(sens), meta)
