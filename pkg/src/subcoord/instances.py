"""Instance files: JSON documents describing an objective, a box and a budget.

Schema::

    {
      "name": "quad-n2",
      "objective": {"quadratic": {"c": [...], "Q": [[...], ...]}}
                 | {"concave_linear": {"w": [...], "kind": "one_minus_exp" | "sqrt_shift"}},
      "u": [...],
      "B": 1.0,
      "L_override": 0.5          # optional
    }

Matrices are row-major lists of rows.
"""
from __future__ import annotations

import json
from pathlib import Path

from .objectives import (
    ConcaveLinearObjective,
    ConcaveLinearSpec,
    QuadraticObjective,
    QuadraticSpec,
    make_concave_linear,
    make_submodular_quadratic,
)
from .problem import ProblemInstance


class InstanceError(ValueError):
    """Raised for unreadable or invalid instance files."""


def _objective(doc, u, L, strict):
    obj = doc.get("objective")
    if not isinstance(obj, dict) or len(obj) != 1:
        raise InstanceError("'objective' must be an object with exactly one of 'quadratic', 'concave_linear'")
    (tag, body), = obj.items()
    if not isinstance(body, dict):
        raise InstanceError(f"objective body for {tag!r} must be an object")
    if tag == "quadratic":
        spec = QuadraticSpec(body["c"], body["Q"])
        if strict:
            return make_submodular_quadratic(spec, u, smoothness=L)
        if len(spec.c) != len(u):
            raise InstanceError("upper bounds must match the quadratic dimension")
        return QuadraticObjective(spec.c, spec.Q, smoothness=L)
    if tag == "concave_linear":
        spec = ConcaveLinearSpec(body["w"], body.get("kind", "one_minus_exp"))
        if strict:
            return make_concave_linear(spec, u, smoothness=L)
        return ConcaveLinearObjective(spec.w, spec.kind, smoothness=L)
    raise InstanceError(f"unknown objective family {tag!r}")


def instance_from_dict(doc: dict, strict: bool = True) -> ProblemInstance:
    """Build a validated instance. ``strict=False`` skips the submodularity and
    monotonicity certificate for quadratics (used by the property checker)."""
    if not isinstance(doc, dict):
        raise InstanceError("instance document must be a JSON object")
    try:
        u = [float(v) for v in doc["u"]]
        B = float(doc["B"])
        L = doc.get("L_override")
        L = None if L is None else float(L)
        F = _objective(doc, u, L, strict)
        return ProblemInstance(F, u, B, str(doc.get("name", "")))
    except InstanceError:
        raise
    except KeyError as e:
        raise InstanceError(f"missing field {e.args[0]!r}") from None
    except (TypeError, ValueError) as e:
        raise InstanceError(str(e)) from None


def load_instance(path, strict: bool = True) -> ProblemInstance:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as e:
        raise InstanceError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise InstanceError(f"{path}: invalid JSON ({e})") from None
    if isinstance(doc, dict) and "name" not in doc:
        doc = {**doc, "name": path.stem}
    return instance_from_dict(doc, strict=strict)
