"""Line-oriented task files.

One directive per line; ``#`` starts a comment::

    dimension 3
    order 6
    seed 0
    field V vector weight 0 = [x1^2 - x2^2 - x3^2, 2*x1*x2, 2*x1*x3]
    field phi form weight 1/2 = [x1, 0, x2]
    field T tensor weight 0 = [[x1*x2, 1, 0], [1, -x1*x2, 0], [0, 0, 0]]
    density f weight -1/2 = x1^2 + x2
    metric g = random            # or flat, or a matrix like a tensor field
    conformal Omega = 1 + x1^2   # or random; must equal 1 at the origin
    task verify-pairing first V f metric=g conformal=Omega

``weight`` may only follow the kind of a ``field`` or the name of a
``density``.  :func:`format_taskfile` prints the canonical form and
``parse_taskfile(format_taskfile(tf)) == tf``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..exact.poly import MultiPoly
from ..exact.scalar import Q, fmt_q
from .polyparse import ParseError, parse_polynomial

DEFAULT_ORDER = 6
DEFAULT_SEED = 0

FIELD_KINDS = ("vector", "form", "tensor")
BUILTIN_GEOMETRY = ("flat", "random")

PAIRING_INPUTS = {
    "first": ("vector", "density"),
    "second": ("tensor", "density"),
    "oneform": ("tensor", "form"),
    "yamabe": ("density",),
    "special-a": ("density",),
    "special-b": ("vector",),
    "special-c": ("density",),
    "special-d": ("tensor",),
    "special-e": ("tensor",),
    "inner": ("vector", "vector"),
    "factorization": ("tensor", "density"),
}

# verb -> (positional spec, allowed options); "*" means free-form positionals checked later
TASK_VERBS = {
    "verify-symmetry-first": (("vector",), ("w", "perturb")),
    "verify-symmetry-second": (("tensor",), ("perturb",)),
    "solve-ckt": ((), ("valence", "max-degree")),
    "verify-pairing": ("*", ("metric", "conformal", "perturb", "lambda")),
    "verify-transform": ("*", ("metric", "conformal")),
    "experiment-yamabe-ckt": ((), ("conformal", "weights", "sample")),
    "suite-all": ((), ()),
}

_RATIONAL = re.compile(r"[-+]?\d+(?:/\d+)?")
_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class FieldDecl:
    name: str
    kind: str
    weight: object
    components: tuple  # n polys, or n rows of n polys for tensors


@dataclass(frozen=True)
class DensityDecl:
    name: str
    weight: object
    poly: MultiPoly


@dataclass(frozen=True)
class MetricDecl:
    name: str
    kind: str  # flat | random | explicit
    entries: tuple | None = None


@dataclass(frozen=True)
class ConformalDecl:
    name: str
    kind: str  # poly | random
    poly: MultiPoly | None = None


@dataclass(frozen=True)
class TaskSpec:
    verb: str
    args: tuple = ()
    options: tuple = ()  # sorted (key, value) pairs

    def option(self, key, default=None):
        return dict(self.options).get(key, default)


@dataclass(frozen=True)
class TaskFile:
    n: int
    order: int = DEFAULT_ORDER
    seed: int = DEFAULT_SEED
    decls: tuple = ()
    tasks: tuple = field(default=())

    def lookup(self, name: str):
        for d in self.decls:
            if d.name == name:
                return d
        raise KeyError(name)


def parse_rational(text: str, line: int = 1, column: int = 1):
    if not _RATIONAL.fullmatch(text):
        raise ParseError(f"malformed rational {text!r}", line, column)
    p, _, q = text.partition("/")
    if q and int(q) == 0:
        raise ParseError("malformed rational: zero denominator", line, column)
    return Q(int(p), int(q)) if q else Q(int(p))


def _split_top(text: str, line: int, col: int):
    """Split ``[a, b, ...]`` into ``(item, column)`` pairs at depth one."""
    s = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (s.startswith("[") and s.endswith("]")):
        raise ParseError("expected a bracketed list", line, col + lead)
    items, depth, start = [], 0, 1
    for i, ch in enumerate(s):
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if depth < 0:
            raise ParseError("unbalanced brackets", line, col + lead + i)
        if (ch == "," and depth == 1) or (ch == "]" and depth == 0):
            items.append((s[start:i], col + lead + start))
            start = i + 1
    if depth != 0:
        raise ParseError("unbalanced brackets", line, col + lead + len(s))
    return items


class _Builder:
    def __init__(self):
        self.n = None
        self.order = DEFAULT_ORDER
        self.seed = DEFAULT_SEED
        self.decls = []
        self.tasks = []
        self.names = {}

    def need_n(self, line):
        if self.n is None:
            raise ParseError("'dimension' must come before declarations and tasks", line, 1)
        return self.n

    def declare(self, decl, kind, line, col):
        if decl.name in self.names or decl.name in BUILTIN_GEOMETRY:
            raise ParseError(f"name {decl.name!r} already declared", line, col)
        self.names[decl.name] = kind
        self.decls.append(decl)

    def poly(self, text, line, col):
        return parse_polynomial(text, self.need_n(line), line, col)

    def vector(self, text, line, col):
        items = _split_top(text, line, col)
        if len(items) != self.n:
            raise ParseError(f"expected {self.n} components, got {len(items)}", line, col)
        return tuple(self.poly(t, line, c) for t, c in items)

    def matrix(self, text, line, col):
        rows = _split_top(text, line, col)
        if len(rows) != self.n:
            raise ParseError(f"expected {self.n} rows, got {len(rows)}", line, col)
        out = tuple(self.vector(t, line, c) for t, c in rows)
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if out[a][b] != out[b][a]:
                    raise ParseError("matrix must be symmetric", line, col)
        return out


def _tokens(body: str, col0: int):
    return [(m.group(0), col0 + m.start()) for m in re.finditer(r"\S+", body)]


def _head(body: str, col0: int, line: int):
    """Split ``<head> = <rhs>`` and return head tokens and rhs with its column."""
    if "=" not in body:
        raise ParseError("expected '='", line, col0)
    i = body.index("=")
    return _tokens(body[:i], col0), body[i + 1:], col0 + i + 1


def _parse_weight(toks, line):
    """Consume an optional ``weight W`` pair; returns (weight, rest)."""
    if toks and toks[0][0] == "weight":
        if len(toks) < 2:
            raise ParseError("missing value after 'weight'", line, toks[0][1])
        return parse_rational(toks[1][0], line, toks[1][1]), toks[2:]
    return Q(0), toks


def parse_taskfile(text: str) -> TaskFile:
    b = _Builder()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body, 1)
        if not toks:
            continue
        word, wcol = toks[0]
        rest_col = wcol + len(word)
        rest = body[rest_col - 1:]
        _directive(b, word, wcol, rest, rest_col, toks, lineno)
    if b.n is None:
        raise ParseError("missing 'dimension' directive", 1, 1)
    return TaskFile(b.n, b.order, b.seed, tuple(b.decls), tuple(b.tasks))


def _directive(b: _Builder, word, wcol, rest, rest_col, toks, line):
    if word in ("dimension", "order", "seed"):
        if len(toks) != 2 or not toks[1][0].isdigit():
            if any(t == "weight" for t, _ in toks):
                raise ParseError(f"'weight' is not allowed in a {word} directive", line, wcol)
            raise ParseError(f"'{word}' takes one non-negative integer", line, wcol)
        value = int(toks[1][0])
        if word == "dimension":
            if b.n is not None:
                raise ParseError("dimension declared twice", line, wcol)
            if value < 1:
                raise ParseError("dimension must be positive", line, toks[1][1])
            b.n = value
        elif word == "order":
            b.order = value
        else:
            b.seed = value
        return
    if word == "field":
        b.need_n(line)
        head, rhs, rcol = _head(rest, rest_col, line)
        if len(head) < 2:
            raise ParseError("expected 'field NAME KIND [weight W] = ...'", line, wcol)
        (name, ncol), (kind, kcol) = head[0], head[1]
        if not _NAME.fullmatch(name):
            raise ParseError(f"bad name {name!r}", line, ncol)
        if kind == "weight":
            raise ParseError("'weight' must follow the field kind", line, kcol)
        if kind not in FIELD_KINDS:
            raise ParseError(f"unknown field kind {kind!r}", line, kcol)
        weight, extra = _parse_weight(head[2:], line)
        if extra:
            raise ParseError(f"unexpected {extra[0][0]!r}", line, extra[0][1])
        comps = b.matrix(rhs, line, rcol) if kind == "tensor" else b.vector(rhs, line, rcol)
        if kind == "tensor" and sum((comps[i][i] for i in range(b.n)), MultiPoly.zero(b.n)):
            raise ParseError("tensor fields must be trace-free", line, rcol)
        b.declare(FieldDecl(name, kind, weight, comps), kind, line, ncol)
        return
    if word == "density":
        b.need_n(line)
        head, rhs, rcol = _head(rest, rest_col, line)
        if not head:
            raise ParseError("expected 'density NAME [weight W] = POLY'", line, wcol)
        name, ncol = head[0]
        if not _NAME.fullmatch(name):
            raise ParseError(f"bad name {name!r}", line, ncol)
        weight, extra = _parse_weight(head[1:], line)
        if extra:
            raise ParseError(f"unexpected {extra[0][0]!r}", line, extra[0][1])
        b.declare(DensityDecl(name, weight, b.poly(rhs, line, rcol)), "density", line, ncol)
        return
    if word in ("metric", "conformal"):
        b.need_n(line)
        head, rhs, rcol = _head(rest, rest_col, line)
        if any(t == "weight" for t, _ in head):
            col = next(c for t, c in head if t == "weight")
            raise ParseError(f"'weight' is not allowed in a {word} declaration", line, col)
        if len(head) != 1:
            raise ParseError(f"expected '{word} NAME = ...'", line, wcol)
        name, ncol = head[0]
        if not _NAME.fullmatch(name):
            raise ParseError(f"bad name {name!r}", line, ncol)
        value = rhs.strip()
        if word == "metric":
            if value in BUILTIN_GEOMETRY:
                decl = MetricDecl(name, value)
            else:
                decl = MetricDecl(name, "explicit", b.matrix(rhs, line, rcol))
                if decl.entries and _det0(decl.entries) == 0:
                    raise ParseError("metric is singular at the origin", line, rcol)
        else:
            if value == "random":
                decl = ConformalDecl(name, "random")
            else:
                p = b.poly(rhs, line, rcol)
                if p.constant_term() != 1:
                    raise ParseError(
                        f"conformal factor must equal 1 at the origin, got {fmt_q(p.constant_term())}",
                        line, rcol,
                    )
                decl = ConformalDecl(name, "poly", p)
        b.declare(decl, word, line, ncol)
        return
    if word == "task":
        b.need_n(line)
        b.tasks.append(_parse_task(b, toks[1:], line, wcol))
        return
    raise ParseError(f"unknown directive {word!r}", line, wcol)


def _det0(entries) -> object:
    from ..exact.linalg import ExactMatrix, rank

    m = [[e.constant_term() for e in row] for row in entries]
    return 0 if rank(ExactMatrix(m)) < len(m) else 1


def _check_ref(b: _Builder, name, col, line, kinds):
    kind = b.names.get(name)
    if kind is None:
        raise ParseError(f"undeclared name {name!r}", line, col)
    if kind not in kinds:
        raise ParseError(f"{name!r} is a {kind}, expected {' or '.join(kinds)}", line, col)


def _parse_task(b: _Builder, toks, line, wcol) -> TaskSpec:
    if not toks:
        raise ParseError("task needs a verb", line, wcol)
    verb, vcol = toks[0]
    if verb not in TASK_VERBS:
        raise ParseError(f"unknown task {verb!r}", line, vcol)
    spec, allowed = TASK_VERBS[verb]
    args, opts = [], {}
    for t, c in toks[1:]:
        if "=" in t:
            k, _, v = t.partition("=")
            if k == "weight":
                raise ParseError("'weight' belongs in a field or density declaration", line, c)
            if k not in allowed:
                raise ParseError(f"option {k!r} not allowed for {verb}", line, c)
            if k in opts:
                raise ParseError(f"option {k!r} given twice", line, c)
            opts[k] = _canonical_option(b, k, v, line, c + len(k) + 1)
        else:
            if opts:
                raise ParseError("positional arguments must precede options", line, c)
            args.append((t, c))
    if verb == "verify-pairing":
        _check_pairing_args(b, args, line, vcol)
    elif verb == "verify-transform":
        _check_transform_args(b, args, line, vcol)
    else:
        if len(args) != len(spec):
            raise ParseError(f"{verb} takes {len(spec)} argument(s)", line, vcol)
        for (name, col), kind in zip(args, spec):
            _check_ref(b, name, col, line, (kind,))
    return TaskSpec(verb, tuple(a for a, _ in args), tuple(sorted(opts.items())))


def _check_pairing_args(b, args, line, vcol):
    if not args:
        raise ParseError("verify-pairing needs a pairing name", line, vcol)
    kind, kcol = args[0]
    if kind not in PAIRING_INPUTS:
        raise ParseError(f"unknown pairing {kind!r}", line, kcol)
    want = PAIRING_INPUTS[kind]
    if len(args) - 1 != len(want):
        raise ParseError(f"pairing {kind} takes {len(want)} input(s)", line, kcol)
    for (name, col), k in zip(args[1:], want):
        _check_ref(b, name, col, line, (k,))


def _check_transform_args(b, args, line, vcol):
    if not args or args[0][0] not in ("connection", "curvature", "yamabe"):
        raise ParseError("verify-transform needs connection FIELD, curvature or yamabe DENSITY", line, vcol)
    law, lcol = args[0]
    if law == "curvature":
        if len(args) != 1:
            raise ParseError("curvature takes no inputs", line, lcol)
        return
    if len(args) != 2:
        raise ParseError(f"{law} takes one input", line, lcol)
    kinds = ("density",) if law == "yamabe" else ("vector", "form", "tensor", "density")
    _check_ref(b, args[1][0], args[1][1], line, kinds)


def _canonical_option(b, key, value, line, col) -> str:
    if key in ("metric", "conformal"):
        if value in BUILTIN_GEOMETRY and not (key == "conformal" and value == "flat"):
            return value
        _check_ref(b, value, col, line, (key,))
        return value
    if key in ("w", "lambda"):
        return fmt_q(parse_rational(value, line, col))
    if key == "weights":
        parts = value.split(",")
        return ",".join(fmt_q(parse_rational(p, line, col)) for p in parts)
    if key in ("perturb", "valence", "max-degree", "sample"):
        if not value.isdigit():
            raise ParseError(f"option {key!r} takes a non-negative integer", line, col)
        if key == "valence" and value not in ("1", "2"):
            raise ParseError("valence must be 1 or 2", line, col)
        return str(int(value))
    raise ParseError(f"unknown option {key!r}", line, col)


# -- canonical printer ---------------------------------------------------------
def _fmt_list(polys) -> str:
    return "[" + ", ".join(str(p) for p in polys) + "]"


def _fmt_matrix(rows) -> str:
    return "[" + ", ".join(_fmt_list(r) for r in rows) + "]"


def format_taskfile(tf: TaskFile) -> str:
    lines = [f"dimension {tf.n}", f"order {tf.order}", f"seed {tf.seed}"]
    for d in tf.decls:
        if isinstance(d, FieldDecl):
            body = _fmt_matrix(d.components) if d.kind == "tensor" else _fmt_list(d.components)
            lines.append(f"field {d.name} {d.kind} weight {fmt_q(d.weight)} = {body}")
        elif isinstance(d, DensityDecl):
            lines.append(f"density {d.name} weight {fmt_q(d.weight)} = {d.poly}")
        elif isinstance(d, MetricDecl):
            body = d.kind if d.kind != "explicit" else _fmt_matrix(d.entries)
            lines.append(f"metric {d.name} = {body}")
        else:
            body = "random" if d.kind == "random" else str(d.poly)
            lines.append(f"conformal {d.name} = {body}")
    for t in tf.tasks:
        parts = ["task", t.verb, *t.args, *(f"{k}={v}" for k, v in t.options)]
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"
