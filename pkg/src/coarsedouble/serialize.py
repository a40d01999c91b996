"""JSON (de)serialization for kernels and level functions.

Deserialized objects are revalidated on a probe window before use: kernels
rerun the axiom checks, level functions rerun the expanding-sequence checks.
"""

from __future__ import annotations

import math

from .double import (DeltaMetric, DoubleMetric, MaxMetric, MinGlueMetric,
                     PointMetric, check_axioms, compose, const_delta)
from .errors import DomainError
from .projection import (LevelFunction, delta_from_levels, join,
                         levels_from_expression, levels_from_subset, meet,
                         metric_from_levels, subset_metric, unit_levels,
                         zero_levels)
from .space import MetricSpace, Window, as_rational, set_from_json
from .verdicts import _iroot_ceil

PROBE_RADIUS = 8


def _expr_sqrt(p) -> int:
    v = abs(p[0]) + 1
    s = math.isqrt(v)
    return s if s * s == v else s + 1


def _expr_cbrt(p) -> int:
    return _iroot_ceil(abs(p[0]) + 1, 3)


def _expr_log2(p) -> int:
    return (abs(p[0]) + 1).bit_length()


EXPRESSIONS = {
    "ceil-sqrt": _expr_sqrt,
    "ceil-cbrt": _expr_cbrt,
    "log2": _expr_log2,
}


def expression_levels(space: MetricSpace, name: str) -> LevelFunction:
    if name not in EXPRESSIONS:
        raise DomainError(f"unknown expression {name!r} (known: {sorted(EXPRESSIONS)})")
    return levels_from_expression(space, name, EXPRESSIONS[name],
                                  payload={"kind": "expression", "expr": name})


def level_from_json(space: MetricSpace, doc, validate: bool = True) -> LevelFunction:
    kind = doc["kind"]
    if kind == "unit":
        lf = unit_levels(space)
    elif kind == "zero":
        lf = zero_levels(space, tuple(doc["x0"]) if "x0" in doc else None)
    elif kind == "subset":
        lf = levels_from_subset(space, set_from_json(doc["set"]))
    elif kind == "expression":
        lf = expression_levels(space, doc["expr"])
    elif kind in ("meet", "join"):
        parts = [level_from_json(space, d, validate=False) for d in doc["of"]]
        op = meet if kind == "meet" else join
        lf = parts[0]
        for p in parts[1:]:
            lf = op(lf, p)
    else:
        raise DomainError(f"unknown level-function kind {kind!r}")
    if validate:
        report = lf.validate(Window(PROBE_RADIUS))
        if not report["passed"]:
            raise DomainError(f"deserialized levels fail validation: {report}")
    return lf


def kernel_from_json(space: MetricSpace, doc, validate: bool = True) -> DoubleMetric:
    kind = doc["kind"]
    if kind == "zero_at":
        d = PointMetric(space, tuple(doc["x0"]))
    elif kind == "subset":
        d = subset_metric(space, set_from_json(doc["set"]))
    elif kind == "delta":
        delta_doc = doc["delta"]
        if delta_doc.get("kind") == "const":
            delta = const_delta(space, as_rational(delta_doc["value"]))
        elif delta_doc.get("kind") == "levels":
            delta = delta_from_levels(level_from_json(space, delta_doc["levels"],
                                                      validate=False))
        else:
            raise DomainError(f"unknown delta payload {delta_doc!r}")
        d = DeltaMetric(space, delta)
    elif kind == "max":
        parts = [kernel_from_json(space, p, validate=False) for p in doc["of"]]
        d = MaxMetric(*parts)
    elif kind == "min_glue":
        parts = [kernel_from_json(space, p, validate=False) for p in doc["of"]]
        d = MinGlueMetric(*parts)
    elif kind == "compose":
        parts = [kernel_from_json(space, p, validate=False) for p in doc["of"]]
        d = compose(*parts)
    else:
        raise DomainError(f"unknown kernel kind {kind!r}")
    if validate:
        report = check_axioms(d, Window(PROBE_RADIUS))
        required = ["positivity", "lower_bound", "triangle_cross_vs_base"]
        if d.coercive_c is not None:
            # non-coercive kinds (subset closed forms and their compositions)
            # do not promise the base-versus-cross triangle; everything else does
            required.append("triangle_base_vs_cross")
        bad = [name for name in required if not report.checks[name]["passed"]]
        if bad:
            raise DomainError(
                f"deserialized kernel fails axioms {bad}: {report.first_violation()}")
    return d


# -- compact command-line forms ----------------------------------------------


def parse_set(spec: str):
    """family[:arg[:arg]] shorthand, e.g. evens, powers:4, powers:4:2,
    halfline:-:0, multiples:3:1, tailplus."""
    parts = spec.split(":")
    fam = parts[0]
    if fam in ("evens", "odds", "squares"):
        from .space import set_family
        return set_family(fam)
    if fam == "powers":
        from .space import set_family
        base = int(parts[1])
        scale = int(parts[2]) if len(parts) > 2 else 1
        return set_family("powers", base=base, scale=scale)
    if fam == "multiples":
        from .space import set_family
        return set_family("multiples", k=int(parts[1]),
                          r=int(parts[2]) if len(parts) > 2 else 0)
    if fam == "halfline":
        from .space import set_family
        sign = -1 if parts[1] == "-" else 1
        bound = int(parts[2]) if len(parts) > 2 else 0
        return set_family("half_line", sign=sign, bound=bound)
    if fam == "tailplus":
        from .space import set_family
        return set_family("tail_plus")
    if fam == "tailminus":
        from .space import set_family
        return set_family("tail_minus")
    if fam == "points":
        pts = [tuple(int(c) for c in chunk.split(","))
               for chunk in parts[1].split(";")]
        from .space import PointSet
        return PointSet.from_points(pts)
    raise DomainError(f"unknown set spec {spec!r}")


def parse_levels(space: MetricSpace, spec: str) -> LevelFunction:
    """unit | zero[:coords] | subset:<set spec> | expr:<name> | ~subset for
    the complement of a set."""
    if spec == "unit":
        return unit_levels(space)
    if spec == "zero" or spec.startswith("zero:"):
        if ":" in spec:
            x0 = tuple(int(c) for c in spec.split(":", 1)[1].split(","))
            return zero_levels(space, x0)
        return zero_levels(space)
    if spec.startswith("expr:"):
        return expression_levels(space, spec.split(":", 1)[1])
    if spec.startswith("subset:"):
        return levels_from_subset(space, parse_set(spec.split(":", 1)[1]))
    if spec.startswith("~subset:"):
        return levels_from_subset(space, parse_set(spec.split(":", 1)[1]).complement())
    raise DomainError(f"unknown levels spec {spec!r}")


def parse_kernel(space: MetricSpace, spec: str) -> DoubleMetric:
    """zero[:coords] | subset:<set spec> | delta:<levels spec> | const:<v>."""
    if spec == "zero" or spec.startswith("zero:"):
        if ":" in spec:
            x0 = tuple(int(c) for c in spec.split(":", 1)[1].split(","))
            return PointMetric(space, x0)
        return PointMetric(space, space.basepoint)
    if spec.startswith("const:"):
        return DeltaMetric(space, const_delta(space, as_rational(spec.split(":", 1)[1])))
    if spec.startswith("subset:"):
        return subset_metric(space, parse_set(spec.split(":", 1)[1]))
    if spec.startswith("delta:"):
        return metric_from_levels(parse_levels(space, spec.split(":", 1)[1]))
    raise DomainError(f"unknown kernel spec {spec!r}")
