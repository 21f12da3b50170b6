"""Interactive synthesis of time-series pattern-detection programs.

From a seed chart of k points we build the non-strict inequality family
over the pairwise order of the seed values, learn the user's pattern as a
conjunction of comparisons, and emit a small standalone DSL program plus
an interpreter for it. Witness queries are rendered back as charts.
"""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from fractions import Fraction

from .core import Assignment, FamilyError, PredSet, as_rational
from .learner import LearnSession, Teacher, run_session
from .varineq import VarIneqFamily


@dataclass(frozen=True)
class Chart:
    """Ordered chart points; index i holds value values[i-1]."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) < 2:
            raise FamilyError("a chart needs at least 2 points")

    @property
    def k(self) -> int:
        return len(self.values)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["index", "value"])
        for i, v in enumerate(self.values, 1):
            w.writerow([i, _decimal_str(v)])
        return buf.getvalue()

    def to_jsonable(self) -> list[dict]:
        return [
            {"index": i, "value": _decimal_str(v)}
            for i, v in enumerate(self.values, 1)
        ]


def _decimal_str(v: Fraction) -> str:
    """Exact decimal rendering when possible, otherwise the fraction string."""
    if v.denominator == 1:
        return str(v.numerator)
    den, e2, e5 = v.denominator, 0, 0
    while den % 2 == 0:
        den //= 2
        e2 += 1
    while den % 5 == 0:
        den //= 5
        e5 += 1
    if den != 1:
        return f"{v.numerator}/{v.denominator}"
    digits = max(e2, e5)
    n = (v * 10**digits).numerator
    sign = "-" if n < 0 else ""
    s = str(abs(n)).rjust(digits + 1, "0")
    return f"{sign}{s[:-digits]}.{s[-digits:]}"


def chart_from_values(values) -> Chart:
    return Chart(tuple(as_rational(v) for v in values))


def chart_from_csv(text: str) -> Chart:
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise FamilyError("empty chart CSV")
    if [c.strip().lower() for c in rows[0]] != ["index", "value"]:
        raise FamilyError("chart CSV must start with an 'index,value' header")
    values: dict[int, Fraction] = {}
    for r in rows[1:]:
        if len(r) != 2:
            raise FamilyError(f"bad chart row {r!r}")
        idx = int(r[0])
        if idx in values:
            raise FamilyError(f"duplicate chart index {idx}")
        values[idx] = as_rational(r[1].strip())
    k = len(values)
    if sorted(values) != list(range(1, k + 1)):
        raise FamilyError("chart indices must be consecutive from 1")
    return Chart(tuple(values[i] for i in range(1, k + 1)))


def witness_to_chart(a: Assignment) -> Chart:
    return Chart(tuple(a))


def seed_family(chart: Chart) -> VarIneqFamily:
    """Non-strict family over all ordered pairs the seed chart satisfies."""
    k = chart.k
    pairs = [
        (i, j)
        for i in range(1, k + 1)
        for j in range(1, k + 1)
        if i != j and chart.values[i - 1] >= chart.values[j - 1]
    ]
    return VarIneqFamily(k, pairs, strict=False)


# ---------------------------------------------------------------------------
# the emitted DSL
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PatternProgram:
    k: int
    formula: PredSet
    pairs: tuple[tuple[int, int], ...]  # the formula's comparisons, canonical order
    source_text: str

    def sidecar(self) -> dict:
        return {
            "k": self.k,
            "formula": list(self.formula),
            "pairs": [list(p) for p in self.pairs],
        }


def emit_dsl(k: int, pairs) -> str:
    """Deterministic program text: k bindings, then one guarded alert."""
    lines = [f"EXTREME {i} AS v{i};" for i in range(1, k + 1)]
    pairs = sorted(tuple(p) for p in pairs)
    if not pairs:
        cond = "TRUE"
    else:
        cond = " AND ".join(f"v{i} >= v{j}" for i, j in pairs)
    lines.append(f"ALERT WHEN {cond};")
    return "\n".join(lines) + "\n"


_EXTREME_RE = re.compile(r"^EXTREME (\d+) AS v(\d+);$")
_CMP_RE = re.compile(r"^v(\d+) >= v(\d+)$")


def parse_dsl(text: str) -> tuple[int, list[tuple[int, int]]]:
    """Inverse of emit_dsl; raises FamilyError on malformed programs."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[-1].startswith("ALERT WHEN "):
        raise FamilyError("program must end with an ALERT WHEN line")
    k = 0
    for ln in lines[:-1]:
        m = _EXTREME_RE.match(ln)
        if not m or int(m.group(1)) != int(m.group(2)):
            raise FamilyError(f"bad binding line {ln!r}")
        k += 1
        if int(m.group(1)) != k:
            raise FamilyError("binding lines must cover 1..k in order")
    cond = lines[-1][len("ALERT WHEN ") :].rstrip()
    if not cond.endswith(";"):
        raise FamilyError("ALERT line must end with ';'")
    cond = cond[:-1].strip()
    if cond == "TRUE":
        return k, []
    pairs = []
    for part in cond.split(" AND "):
        m = _CMP_RE.match(part.strip())
        if not m:
            raise FamilyError(f"bad comparison {part!r}")
        i, j = int(m.group(1)), int(m.group(2))
        if not (1 <= i <= k and 1 <= j <= k) or i == j:
            raise FamilyError(f"comparison {part!r} out of range")
        pairs.append((i, j))
    return k, pairs


def run_dsl(text: str, chart: Chart) -> int:
    """Interpret a program on a chart of matching size.

    Extreme-point detection is stubbed as "the chart's k points": the
    bindings map index i straight to the i-th value.
    """
    k, pairs = parse_dsl(text)
    if chart.k != k:
        raise FamilyError(f"chart has {chart.k} points, program expects {k}")
    return int(all(chart.values[i - 1] >= chart.values[j - 1] for i, j in pairs))


# ---------------------------------------------------------------------------
# the pipeline
# ---------------------------------------------------------------------------

def program_from_formula(family: VarIneqFamily, formula: PredSet) -> PatternProgram:
    pairs = tuple(sorted(family.pairs[i] for i in formula))
    return PatternProgram(
        k=family.n,
        formula=formula,
        pairs=pairs,
        source_text=emit_dsl(family.n, pairs),
    )


def synthesize(chart: Chart, teacher: Teacher) -> tuple[PatternProgram, LearnSession]:
    """Seed, learn in conjunction mode, and emit the detection program."""
    family = seed_family(chart)
    session = run_session(family, teacher, "and")
    program = program_from_formula(family, session.result.members)
    k = chart.k
    if session.query_count > k * k:  # pragma: no cover - bound guard
        raise AssertionError(f"used {session.query_count} queries, bound is k^2={k * k}")
    return program, session


def save_program(program: PatternProgram, path, transcript_path=None) -> None:
    with open(path, "w") as fh:
        fh.write(program.source_text)
    sidecar = program.sidecar()
    if transcript_path is not None:
        sidecar["transcript"] = str(transcript_path)
    with open(str(path) + ".json", "w") as fh:
        json.dump(sidecar, fh, indent=2)
        fh.write("\n")
