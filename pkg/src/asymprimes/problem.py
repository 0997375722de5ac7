"""Problem descriptions: a JSON document describing a family and what to compute.

Example::

    {
      "name": "ux-in-Ax",
      "base": {"kind": "poly", "p": 2, "var": "u"},
      "R": ["x"],
      "S": ["x"],
      "family": {
        "type": "quotient",
        "M": {"twists": [1]},
        "N": {"twists": [0]},
        "inclusion": [["u*x"]]
      },
      "functors": [{"tensor": "A/(u)"}, {"tor": [1, "A/(u)"]}],
      "ideals": [["u"]],
      "tasks": ["ass_stability", "hilbert", "grade"],
      "options": {"window": [0, 20], "confirm": 4}
    }

A module is ``{"twists": [...], "rel_twists": [...], "matrix": [[...]]}``
with polynomial strings as entries.  A family is either ``{"type": "fg",
"module": ...}`` (over R) or the quotient form above; either may carry
``"quotient_by": {"module": ..., "images": [...]}`` and
``"split_extension": module`` to build further families from it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Any

from .base_ring import BaseRing, DomainError, Ideal
from .family import DegreewiseFamily, from_graded, quotient_by_fg, quotient_family, split_extension
from .fpmod import FPMap, FPModule
from .functors import CoherentFunctor
from .graded import GradedError, GradedMap, GradedModule, GradedRing
from .matrix import Matrix

TASKS = ("ass_stability", "hilbert", "grade", "functor_stability", "amao_check", "quasi_finite")


class ProblemError(ValueError):
    """All validation errors of a problem document, each with a location."""

    def __init__(self, errors: list[tuple[str, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{loc}: {msg}" if loc else msg for loc, msg in errors))


@dataclass(frozen=True)
class Options:
    lo: int = 0
    hi: int = 20
    W: int = 4
    K: int = 4
    holdout: int = 4
    seed: int = 0

    def to_dict(self) -> dict:
        return {
            "window": [self.lo, self.hi],
            "confirm": self.W,
            "sat": self.K,
            "holdout": self.holdout,
            "seed": self.seed,
        }

    def validate(self) -> list[str]:
        errs = []
        if self.lo > self.hi:
            errs.append(f"window [{self.lo}, {self.hi}] is empty")
        if self.W < 1:
            errs.append("confirm must be >= 1")
        if self.K < 1:
            errs.append("sat must be >= 1")
        if self.holdout < 0:
            errs.append("holdout must be >= 0")
        return errs


@dataclass
class ProblemDescription:
    name: str
    base: BaseRing
    R: GradedRing
    S: GradedRing
    family_spec: dict
    functor_specs: list
    ideal_specs: list
    tasks: tuple[str, ...]
    options: Options
    description: str = ""
    # built objects
    modules: dict = field(default_factory=dict, repr=False)
    functors: list = field(default_factory=list, repr=False)
    ideals: list = field(default_factory=list, repr=False)

    @property
    def is_quotient(self) -> bool:
        """A plain M ⊆ N instance (class 1, no further constructions)."""
        f = self.family_spec
        return f["type"] == "quotient" and "quotient_by" not in f and "split_extension" not in f

    def build_family(self, window_end: int) -> DegreewiseFamily:
        f = self.family_spec
        mods = self.modules
        if f["type"] == "fg":
            X = from_graded(mods["module"], window_end, label=self.name)
        else:
            X = quotient_family(mods["M"], mods["N"], mods["inclusion"], window_end, label=self.name)
        if "quotient_by" in f:
            X = quotient_by_fg(X, mods["quotient_by"], f["quotient_by"]["images"], label=self.name)
        if "split_extension" in f:
            X = split_extension(X, mods["split_extension"], label=self.name)
        return X

    def to_dict(self) -> dict:
        base = {"kind": self.base.kind, "p": self.base.p}
        if self.base.var is not None:
            base["var"] = self.base.var
        d: dict[str, Any] = {"name": self.name}
        if self.description:
            d["description"] = self.description
        d.update(
            {
                "base": base,
                "R": list(self.R.variables),
                "S": list(self.S.variables),
                "family": _canonical_family(self),
                "functors": self.functor_specs,
                "ideals": [[str(g) for g in J.gens] for J in self.ideals],
                "tasks": list(self.tasks),
                "options": self.options.to_dict(),
            }
        )
        return d

    def __eq__(self, other):
        if not isinstance(other, ProblemDescription):
            return NotImplemented
        return self.to_dict() == other.to_dict()


def _module_dict(G: GradedModule) -> dict:
    d: dict[str, Any] = {"twists": list(G.twists)}
    if G.rel_twists:
        d["rel_twists"] = list(G.rel_twists)
        d["matrix"] = G.render_matrix()
    return d


def _canonical_family(p: ProblemDescription) -> dict:
    f = p.family_spec
    mods = p.modules
    if f["type"] == "fg":
        out: dict[str, Any] = {"type": "fg", "module": _module_dict(mods["module"])}
    else:
        out = {
            "type": "quotient",
            "M": _module_dict(mods["M"]),
            "N": _module_dict(mods["N"]),
            "inclusion": mods["inclusion"].render_matrix(),
        }
    if "quotient_by" in f:
        out["quotient_by"] = {
            "module": _module_dict(mods["quotient_by"]),
            "images": [[str(p.base(c)) for c in v] for v in f["quotient_by"]["images"]],
        }
    if "split_extension" in f:
        out["split_extension"] = _module_dict(mods["split_extension"])
    return out


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


class _Collector:
    def __init__(self):
        self.errors: list[tuple[str, str]] = []

    def add(self, loc: str, msg: str):
        self.errors.append((loc, msg))

    def get(self, d: dict, key: str, loc: str, kind, required=True, default=None):
        if key not in d:
            if required:
                self.add(f"{loc}/{key}", "missing")
            return default
        v = d[key]
        if kind is int and isinstance(v, bool) or not isinstance(v, kind):
            self.add(f"{loc}/{key}", f"expected {_kind_name(kind)}")
            return default
        return v


def _kind_name(kind) -> str:
    if isinstance(kind, tuple):
        return " or ".join(_kind_name(k) for k in kind)
    return {int: "integer", str: "string", list: "list", dict: "object"}.get(kind, kind.__name__)


def parse_problem(text: str | dict) -> ProblemDescription:
    """Parse and validate a problem document; raises ProblemError listing every problem found."""
    if isinstance(text, dict):
        doc = text
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ProblemError([("", f"not valid JSON: {exc}")]) from None
    if not isinstance(doc, dict):
        raise ProblemError([("", "problem must be a JSON object")])
    c = _Collector()
    known = {"name", "description", "base", "R", "S", "family", "functors", "ideals", "tasks", "options"}
    for k in doc:
        if k not in known:
            c.add(f"/{k}", "unknown key")

    name = c.get(doc, "name", "", str, required=False, default="problem")
    description = c.get(doc, "description", "", str, required=False, default="")
    base = _parse_base(c, doc)
    Rv = c.get(doc, "R", "", list, default=[])
    Sv = c.get(doc, "S", "", list, required=False, default=None)
    if Sv is None:
        Sv = Rv
    for loc, vs in (("/R", Rv), ("/S", Sv)):
        for k, v in enumerate(vs):
            if not isinstance(v, str) or not v.isidentifier():
                c.add(f"{loc}/{k}", "variable names must be identifiers")
    for v in Rv:
        if v not in Sv:
            c.add("/R", f"R-variable {v} not in S")
    R = S = None
    if base is not None and not c.errors:
        try:
            R, S = GradedRing(base, tuple(Rv)), GradedRing(base, tuple(Sv))
        except GradedError as exc:
            c.add("/R", str(exc))

    opts = _parse_options(c, doc.get("options", {}))
    tasks = _parse_tasks(c, doc.get("tasks", list(TASKS)))
    fam = c.get(doc, "family", "", dict, default=None)
    modules: dict = {}
    if fam is not None and R is not None:
        modules = _parse_family(c, fam, R, S)

    functors, functor_specs = [], []
    fl = doc.get("functors", [])
    if not isinstance(fl, list):
        c.add("/functors", "expected list")
        fl = []
    if base is not None:
        for k, spec in enumerate(fl):
            F = _parse_functor(c, spec, base, f"/functors/{k}")
            if F is not None:
                functors.append(F)
                functor_specs.append(spec)

    ideals = []
    il = doc.get("ideals", [])
    if not isinstance(il, list):
        c.add("/ideals", "expected list")
        il = []
    if base is not None:
        for k, gens in enumerate(il):
            if not isinstance(gens, list) or not gens:
                c.add(f"/ideals/{k}", "an ideal is a nonempty list of generators")
                continue
            try:
                ideals.append(base.ideal(*[base(g) for g in gens]))
            except (ValueError, TypeError, DomainError) as exc:
                c.add(f"/ideals/{k}", str(exc))

    if c.errors:
        raise ProblemError(c.errors)
    p = ProblemDescription(name, base, R, S, fam, functor_specs, [], tasks, opts, description, modules, functors, ideals)
    if "amao_check" in tasks and not p.is_quotient:
        raise ProblemError([("/tasks", "amao_check requires M ⊆ N instance")])
    return p


def _parse_base(c: _Collector, doc: dict) -> BaseRing | None:
    b = c.get(doc, "base", "", dict, default=None)
    if b is None:
        return None
    kind = c.get(b, "kind", "/base", str)
    p = c.get(b, "p", "/base", int)
    var = c.get(b, "var", "/base", str, required=False, default="u")
    if kind is None or p is None:
        return None
    try:
        if kind == "field":
            return BaseRing.field(p)
        if kind == "poly":
            return BaseRing.poly(p, var)
        c.add("/base/kind", "expected 'field' or 'poly'")
    except ValueError as exc:
        c.add("/base", str(exc))
    return None


def _parse_options(c: _Collector, o) -> Options:
    if not isinstance(o, dict):
        c.add("/options", "expected object")
        return Options()
    known = {"window", "confirm", "sat", "holdout", "seed"}
    for k in o:
        if k not in known:
            c.add(f"/options/{k}", "unknown option")
    lo, hi = 0, 20
    if "window" in o:
        w = o["window"]
        if isinstance(w, list) and len(w) == 2 and all(isinstance(x, int) and not isinstance(x, bool) for x in w):
            lo, hi = w
        else:
            c.add("/options/window", "expected [lo, hi]")
    vals = {}
    for key in ("confirm", "sat", "holdout", "seed"):
        v = c.get(o, key, "/options", int, required=False, default=None)
        if v is not None:
            vals[key] = v
    opts = Options(lo, hi, vals.get("confirm", 4), vals.get("sat", 4), vals.get("holdout", 4), vals.get("seed", 0))
    for msg in opts.validate():
        c.add("/options", msg)
    return opts


def _parse_tasks(c: _Collector, tl) -> tuple[str, ...]:
    if tl == "all" or tl == ["all"]:
        return TASKS
    if not isinstance(tl, list):
        c.add("/tasks", "expected list")
        return ()
    out = []
    for k, t in enumerate(tl):
        if t not in TASKS:
            c.add(f"/tasks/{k}", f"unknown task {t!r}")
        elif t not in out:
            out.append(t)
    # canonical order = dependency order
    return tuple(t for t in TASKS if t in out)


def _parse_module(c: _Collector, d, ring: GradedRing, loc: str) -> GradedModule | None:
    if not isinstance(d, dict):
        c.add(loc, "expected module object")
        return None
    for k in d:
        if k not in ("twists", "rel_twists", "matrix"):
            c.add(f"{loc}/{k}", "unknown key")
    tw = c.get(d, "twists", loc, list, default=None)
    rt = c.get(d, "rel_twists", loc, list, required=False, default=[])
    mat = c.get(d, "matrix", loc, list, required=False, default=None)
    if tw is None:
        return None
    ok = True
    for key, lst in (("twists", tw), ("rel_twists", rt)):
        for k, a in enumerate(lst):
            if not isinstance(a, int) or isinstance(a, bool):
                c.add(f"{loc}/{key}/{k}", "expected integer")
                ok = False
    if mat is None:
        mat = [[] for _ in tw] if not rt else None
        if mat is None:
            c.add(f"{loc}/matrix", "missing")
            return None
    if len(mat) != len(tw) or any(not isinstance(r, list) or len(r) != len(rt) for r in mat):
        c.add(f"{loc}/matrix", f"expected a {len(tw)} x {len(rt)} matrix")
        return None
    parsed = []
    for i, row in enumerate(mat):
        prow = []
        for j, e in enumerate(row):
            try:
                prow.append(ring.parse(e if isinstance(e, (str, int)) else str(e)))
            except (GradedError, ValueError) as exc:
                c.add(f"{loc}/matrix/{i}/{j}", str(exc))
                ok = False
                prow.append({})
        parsed.append(prow)
    if not ok:
        return None
    for i, row in enumerate(parsed):
        for j, f in enumerate(row):
            from .graded import gp_degree

            deg = gp_degree(f)
            want = rt[j] - tw[i]
            if deg is not None and deg != want:
                c.add(
                    f"{loc}/matrix/{i}/{j}",
                    f"entry at row {i}, column {j} ({ring.render(f)}) is not homogeneous of degree {want}",
                )
                ok = False
    if not ok:
        return None
    return GradedModule(ring, tw, rt, parsed)


def _parse_family(c: _Collector, fam: dict, R: GradedRing, S: GradedRing) -> dict:
    mods: dict = {}
    kind = fam.get("type")
    known = {"type", "module", "M", "N", "inclusion", "quotient_by", "split_extension"}
    for k in fam:
        if k not in known:
            c.add(f"/family/{k}", "unknown key")
    if kind == "fg":
        m = _parse_module(c, fam.get("module"), R, "/family/module")
        if m is not None:
            mods["module"] = m
    elif kind == "quotient":
        M = _parse_module(c, fam.get("M"), R, "/family/M")
        N = _parse_module(c, fam.get("N"), S, "/family/N")
        inc = fam.get("inclusion")
        if M is not None and N is not None:
            if not isinstance(inc, list):
                c.add("/family/inclusion", "expected matrix")
            else:
                try:
                    mods["inclusion"] = GradedMap(M, N, inc)
                    mods["M"], mods["N"] = M, N
                except GradedError as exc:
                    c.add("/family/inclusion", str(exc))
    else:
        c.add("/family/type", "expected 'fg' or 'quotient'")
    if "quotient_by" in fam:
        q = fam["quotient_by"]
        if not isinstance(q, dict) or not isinstance(q.get("images"), list):
            c.add("/family/quotient_by", "expected {module, images}")
        else:
            D = _parse_module(c, q.get("module"), R, "/family/quotient_by/module")
            if D is not None:
                if len(q["images"]) != D.ngens:
                    c.add("/family/quotient_by/images", f"need one image per generator ({D.ngens})")
                mods["quotient_by"] = D
    if "split_extension" in fam:
        D = _parse_module(c, fam["split_extension"], R, "/family/split_extension")
        if D is not None:
            mods["split_extension"] = D
    return mods


def parse_fpmodule(base: BaseRing, spec) -> FPModule:
    """An A-module from a normal-form string or {"ngens", "relations"}."""
    if isinstance(spec, str):
        return FPModule.parse(base, spec)
    if isinstance(spec, dict):
        g = spec.get("ngens")
        rels = spec.get("relations", [])
        if not isinstance(g, int) or not isinstance(rels, list):
            raise ValueError("module needs integer ngens and a relations matrix")
        if not rels:
            return FPModule.free(base, g)
        m = Matrix.parse(base, rels)
        if m.nrows != g:
            raise ValueError(f"relations has {m.nrows} rows for {g} generators")
        return FPModule(base, g, m)
    raise ValueError("module spec must be a string or an object")


def _parse_functor(c: _Collector, spec, base: BaseRing, loc: str) -> CoherentFunctor | None:
    if not isinstance(spec, dict) or len(spec) != 1:
        c.add(loc, "a functor is a one-key object: hom, tensor, tor, ext or presentation")
        return None
    (kind, arg), = spec.items()
    try:
        if kind in ("hom", "tensor"):
            U = parse_fpmodule(base, arg)
            return CoherentFunctor.hom_from(U) if kind == "hom" else CoherentFunctor.tensor_with(U)
        if kind in ("tor", "ext"):
            if not (isinstance(arg, list) and len(arg) == 2 and isinstance(arg[0], int)):
                raise ValueError(f"{kind} takes [i, module]")
            U = parse_fpmodule(base, arg[1])
            return CoherentFunctor.tor(arg[0], U) if kind == "tor" else CoherentFunctor.ext(arg[0], U)
        if kind == "presentation":
            if not isinstance(arg, dict):
                raise ValueError("presentation takes {source, target, matrix}")
            V = parse_fpmodule(base, arg.get("source"))
            U = parse_fpmodule(base, arg.get("target"))
            mat = arg.get("matrix", [])
            m = Matrix.parse(base, mat, V.ngens) if mat else Matrix.zeros(base, U.ngens, V.ngens)
            return CoherentFunctor.presentation(FPMap(V, U, m))
        c.add(loc, f"unknown functor {kind!r}")
    except (ValueError, TypeError, DomainError) as exc:
        c.add(f"{loc}/{kind}", str(exc))
    return None


def dumps(doc) -> str:
    """JSON with lists of scalars kept on one line."""
    return _dump(doc, 0) + "\n"


def _dump(x, level: int) -> str:
    pad, inner = "  " * level, "  " * (level + 1)
    if isinstance(x, dict):
        if not x:
            return "{}"
        items = [f"{inner}{json.dumps(k, ensure_ascii=False)}: {_dump(v, level + 1)}" for k, v in x.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(x, list):
        if all(not isinstance(v, (dict, list)) for v in x) or all(
            isinstance(v, list) and all(not isinstance(w, (dict, list)) for w in v) for v in x
        ) and len(json.dumps(x, ensure_ascii=False)) <= 80:
            return json.dumps(x, ensure_ascii=False)
        items = [f"{inner}{_dump(v, level + 1)}" for v in x]
        return "[\n" + ",\n".join(items) + "\n" + pad + "]"
    return json.dumps(x, ensure_ascii=False)


def render_problem(p: ProblemDescription) -> str:
    return dumps(p.to_dict())


def load_problem(path) -> ProblemDescription:
    with open(path, encoding="utf-8") as fh:
        return parse_problem(fh.read())


def with_options(p: ProblemDescription, **changes) -> ProblemDescription:
    return replace(p, options=replace(p.options, **changes))
