"""Example catalog, config loading and the verification driver behind the CLI.

Every builtin entry is written in the same JSON config format users supply,
and goes through :func:`load_config`, so the builtin catalog doubles as a set
of config fixtures.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import jsonschema

from . import __version__
from .cecoh import build_complex, ring_invariants, ring_map_failure, ring_structure
from .errors import ConfigError, DerivationError, JacobiError, ModuleLawError, NonCommutingError, NotQSplitError, SolvcohError
from .exactla import RatMatrix, as_fraction, format_rational, inverse
from .groupcoh import compare_with_lie, wang_tower
from .grouphull import (
    DenseSubgroupData,
    declared_hirsch_length,
    is_zariski_dense_unipotent,
    polyrational_series,
    torus_density_check,
    torus_discreteness_check,
    unipotent_log,
)
from .liealg import LieAlgebra, LieModule, SemidirectPresentation, semidirect, validate_jacobi
from .report import Verdict
from .specseq import (
    abutment_check,
    comparison,
    decomposition_check,
    e2_identification,
    hs_filtration,
    page_multiplicativity_check,
    pages,
    phi_ring_map,
    restriction_injectivity,
    stabilization_page,
)

CHECKS = ("main", "decomposition", "spectral", "restriction", "c17")

_RATIONAL = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[+-]?\d+(\s*/\s*[1-9]\d*)?\s*$"},
    ]
}
_MATRIX = {"type": "array", "items": {"type": "array", "items": _RATIONAL}}
_NAMES = {"type": "array", "items": {"type": "string"}}

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["name", "unipotent"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "description": {"type": "string"},
        "unipotent": {
            "type": "object",
            "required": ["dim"],
            "additionalProperties": False,
            "properties": {
                "dim": {"type": "integer", "minimum": 0},
                "names": _NAMES,
                "brackets": {
                    "type": "array",
                    "items": {
                        "type": "array",
                        "minItems": 3,
                        "maxItems": 3,
                        "prefixItems": [
                            {"type": "integer", "minimum": 0},
                            {"type": "integer", "minimum": 0},
                            {"type": "array", "items": _RATIONAL},
                        ],
                    },
                },
            },
        },
        "torus": {
            "type": "object",
            "required": ["dim"],
            "additionalProperties": False,
            "properties": {
                "dim": {"type": "integer", "minimum": 0},
                "names": _NAMES,
                "derivations": {"type": "array", "items": _MATRIX},
            },
        },
        "module": {
            "oneOf": [
                {"const": "trivial"},
                {
                    "type": "object",
                    "required": ["dim", "u_action"],
                    "additionalProperties": False,
                    "properties": {
                        "dim": {"type": "integer", "minimum": 1},
                        "u_action": {"type": "array", "items": _MATRIX},
                        "t_action": {"type": "array", "items": _MATRIX},
                    },
                },
            ]
        },
        "subgroup": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "representation": {"type": "array", "items": _MATRIX},
                "delta_gens": {
                    "type": "array",
                    "items": {
                        "oneOf": [
                            _MATRIX,
                            {
                                "type": "object",
                                "required": ["log"],
                                "additionalProperties": False,
                                "properties": {"log": {"type": "array", "items": _RATIONAL}},
                            },
                        ]
                    },
                },
                "torus_gens": {"type": "array", "items": {"type": "array", "items": _RATIONAL}},
                "automorphisms": {"type": "array", "items": _MATRIX},
            },
        },
        "expected": {"type": "object"},
    },
}


def _pointer(path) -> str:
    return "/" + "/".join(str(p) for p in path) if path else ""


def _matrix(data) -> RatMatrix:
    return RatMatrix.of(data, len(data[0]) if data else 0)


@dataclass
class CatalogEntry:
    name: str
    hull: SemidirectPresentation
    subgroup: DenseSubgroupData
    module: LieModule | None
    expected: dict
    description: str = ""
    lie_side: bool = True
    lie_side_error: str | None = None
    certificates: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)

    @property
    def expected_fail(self) -> list:
        return list(self.expected.get("expected_fail", []))

    @cached_property
    def algebra(self) -> LieAlgebra:
        return semidirect(self.hull, validate=False)

    @property
    def u_dim(self) -> int:
        return self.hull.u.dim

    @property
    def trivial_module(self) -> bool:
        return self.module is None

    def to_config(self) -> dict:
        """Canonical config: fixed key order on output, rationals reduced."""
        cfg = {"name": self.name}
        if self.description:
            cfg["description"] = self.description
        u = self.hull.u
        cfg["unipotent"] = {
            "dim": u.dim,
            "names": list(u.basis_names),
            "brackets": [[i, j, [format_rational(x) for x in v]] for (i, j), v in u.brackets],
        }
        cfg["torus"] = {
            "dim": self.hull.t_dim,
            "names": list(self.hull.t_names),
            "derivations": [m.to_json() for m in self.hull.derivations],
        }
        if self.module is None:
            cfg["module"] = "trivial"
        else:
            cfg["module"] = {
                "dim": self.module.dim,
                "u_action": [m.to_json() for m in self.module.action[: u.dim]],
                "t_action": [m.to_json() for m in self.module.action[u.dim :]],
            }
        sub = {"delta_gens": [{"log": [format_rational(x) for x in v]} for v in self.subgroup.delta_logs]}
        sub["torus_gens"] = [[format_rational(x) for x in s] for s in self.subgroup.torus_gens]
        if self.subgroup.automorphisms:
            sub["automorphisms"] = [m.to_json() for m in self.subgroup.automorphisms]
        cfg["subgroup"] = sub
        if self.expected:
            cfg["expected"] = json.loads(json.dumps(self.expected, sort_keys=True))
        return cfg

    def summary(self) -> dict:
        return {
            "name": self.name,
            "description": self.description,
            "dim_u": self.u_dim,
            "dim_t": self.hull.t_dim,
            "module": "trivial" if self.module is None else f"dim {self.module.dim}",
            "expected_fail": self.expected_fail,
            "certificates": {k: v for k, v in sorted(self.certificates.items())},
        }


def parse_config(raw: dict) -> CatalogEntry:
    """Schema validation, then mathematical validation with pointer-tagged errors."""
    validator = jsonschema.Draft202012Validator(CONFIG_SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: (len(e.absolute_path), list(map(str, e.absolute_path))))
    if errors:
        err = max(errors, key=lambda e: len(e.absolute_path))
        raise ConfigError(_pointer(err.absolute_path), err.message)
    expected = raw.get("expected", {})
    allowed_fail = set(expected.get("expected_fail", []))
    udata = raw["unipotent"]
    n = udata["dim"]
    names = udata.get("names")
    if names is not None and len(names) != n:
        raise ConfigError("/unipotent/names", f"{len(names)} names for dimension {n}")
    for idx, (i, j, coeffs) in enumerate(udata.get("brackets", [])):
        if i >= n or j >= n:
            raise ConfigError(f"/unipotent/brackets/{idx}", f"index out of range for dimension {n}")
        if i >= j:
            raise ConfigError(f"/unipotent/brackets/{idx}", "brackets must be listed with i < j")
        if len(coeffs) != n:
            raise ConfigError(f"/unipotent/brackets/{idx}/2", f"expected {n} coefficients, got {len(coeffs)}")
    try:
        u = LieAlgebra.from_brackets(n, [tuple(b) for b in udata.get("brackets", [])], names)
    except SolvcohError as exc:
        raise ConfigError("/unipotent/brackets", str(exc)) from exc
    report = validate_jacobi(u)
    if not report.ok:
        raise ConfigError("/unipotent/brackets", str(JacobiError(report.triple, report.residual)))
    tdata = raw.get("torus", {"dim": 0})
    k = tdata["dim"]
    ders = tdata.get("derivations", [])
    if len(ders) != k:
        raise ConfigError("/torus/derivations", f"{len(ders)} derivations for torus dimension {k}")
    for a, D in enumerate(ders):
        if len(D) != n or any(len(r) != n for r in D):
            raise ConfigError(f"/torus/derivations/{a}", f"derivation must be {n}x{n}")
    hull = SemidirectPresentation(u, tuple(_matrix(D) for D in ders), tuple(tdata.get("names", ())))
    lie_side = True
    lie_error = None
    try:
        hull.validate()
    except NotQSplitError as exc:
        if "qsplit" not in allowed_fail:
            raise ConfigError("/torus/derivations", str(exc)) from exc
        lie_side = False
        lie_error = str(exc)
    except (DerivationError, NonCommutingError) as exc:
        raise ConfigError("/torus/derivations", str(exc)) from exc
    total = n + k
    module = None
    mdata = raw.get("module", "trivial")
    if mdata != "trivial":
        u_act = mdata["u_action"]
        t_act = mdata.get("t_action", [])
        m = mdata["dim"]
        if len(u_act) != n:
            raise ConfigError("/module/u_action", f"{len(u_act)} matrices for dim u = {n}")
        if len(t_act) != k:
            raise ConfigError("/module/t_action", f"{len(t_act)} matrices for dim t = {k}")
        for key, mats in (("u_action", u_act), ("t_action", t_act)):
            for idx, mat in enumerate(mats):
                if len(mat) != m or any(len(r) != m for r in mat):
                    raise ConfigError(f"/module/{key}/{idx}", f"matrix must be {m}x{m}")
        g = semidirect(hull, validate=False)
        module = LieModule(g, m, tuple(_matrix(x) for x in list(u_act) + list(t_act)))
        bad = module.law_failure()
        if bad is not None:
            raise ConfigError("/module", str(ModuleLawError(bad)))
        if lie_side:
            from .liealg import module_weights

            try:
                module_weights(list(module.action[n:]), m)
            except NotQSplitError as exc:
                raise ConfigError("/module/t_action", str(exc)) from exc
    sdata = raw.get("subgroup", {})
    rep = sdata.get("representation")
    logs = []
    for idx, gdef in enumerate(sdata.get("delta_gens", [])):
        if isinstance(gdef, dict):
            if len(gdef["log"]) != n:
                raise ConfigError(f"/subgroup/delta_gens/{idx}/log", f"expected {n} coordinates")
            logs.append(tuple(as_fraction(x) for x in gdef["log"]))
            continue
        if rep is None:
            raise ConfigError(f"/subgroup/delta_gens/{idx}", "matrix generators need subgroup.representation")
        if len(rep) != n:
            raise ConfigError("/subgroup/representation", f"{len(rep)} matrices for dim u = {n}")
        try:
            logs.append(unipotent_log(_matrix(gdef), [_matrix(r) for r in rep]))
        except SolvcohError as exc:
            raise ConfigError(f"/subgroup/delta_gens/{idx}", str(exc)) from exc
    torus_gens = sdata.get("torus_gens", [])
    for idx, s in enumerate(torus_gens):
        if len(s) != k:
            raise ConfigError(f"/subgroup/torus_gens/{idx}", f"expected {k} entries")
        if any(as_fraction(x) == 0 for x in s):
            raise ConfigError(f"/subgroup/torus_gens/{idx}", "torus entries must be nonzero")
    auts = sdata.get("automorphisms", [])
    for idx, A in enumerate(auts):
        if len(A) != n or any(len(r) != n for r in A):
            raise ConfigError(f"/subgroup/automorphisms/{idx}", f"automorphism must be {n}x{n}")
    try:
        sub = DenseSubgroupData(
            hull,
            tuple(logs),
            tuple(tuple(s) for s in torus_gens),
            tuple(_matrix(A) for A in auts),
            tuple(_matrix(r) for r in rep) if rep else None,
        )
    except SolvcohError as exc:
        raise ConfigError("/subgroup", str(exc)) from exc
    entry = CatalogEntry(raw["name"], hull, sub, module, expected, raw.get("description", ""), lie_side, lie_error, raw=raw)
    entry.certificates = compute_certificates(entry)
    return entry


def compute_certificates(entry: CatalogEntry) -> dict:
    sub = entry.subgroup
    out = {
        "jacobi": "YES",
        "qsplit": "YES" if entry.lie_side else "NO",
        "density": is_zariski_dense_unipotent(sub).verdict,
        "torus_density": torus_density_check(sub.torus_gens, entry.hull.t_dim).verdict,
        "discreteness": torus_discreteness_check(sub.torus_gens, entry.hull.t_dim).verdict,
    }
    if sub.automorphisms:
        out["torus_density"] = "N/A"
        out["discreteness"] = "N/A"
    return out


def load_config(path) -> CatalogEntry:
    text = Path(path).read_text(encoding="utf-8")
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return parse_config(raw)


def serialize(entry: CatalogEntry) -> str:
    return json.dumps(entry.to_config(), sort_keys=True, ensure_ascii=False, indent=2) + "\n"


# ------------------------------------------------------------------ builtins

E12 = [[0, 1], [0, 0]]
HEIS_REP = [
    [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 1], [0, 0, 0], [0, 0, 0]],
    [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
]
HEIS_X = [[1, 1, 0], [0, 1, 0], [0, 0, 1]]
HEIS_Y = [[1, 0, 0], [0, 1, 1], [0, 0, 1]]


def _bs_config(n: int, name: str | None = None, delta_step: int = 1, module=None, torus_gens=None, expected=None) -> dict:
    cfg = {
        "name": name or f"bs_hull{n}",
        "description": f"BS(1,{n}) = Z[1/{n}] x| Z inside Q x| Q",
        "unipotent": {"dim": 1, "names": ["u"], "brackets": []},
        "torus": {"dim": 1, "names": ["D"], "derivations": [[[1]]]},
        "module": module or "trivial",
        "subgroup": {
            "representation": [E12],
            "delta_gens": [[[1, delta_step], [0, 1]]],
            "torus_gens": torus_gens or [[n]],
        },
        "expected": expected
        or {"lie_dims": [1, 1, 0], "group_dims": [1, 1, 0], "hirsch_length": 2, "provenance": "DERIVED"},
    }
    return cfg


def _heis_config(n: int) -> dict:
    return {
        "name": f"heis_hull{n}",
        "description": f"H(Z) x| <delta_{n}> inside H(Q) x| Q, D = diag(1,2,1) on (x,z,y)",
        "unipotent": {"dim": 3, "names": ["x", "z", "y"], "brackets": [[0, 2, [0, 1, 0]]]},
        "torus": {"dim": 1, "names": ["D"], "derivations": [[[1, 0, 0], [0, 2, 0], [0, 0, 1]]]},
        "module": "trivial",
        "subgroup": {"representation": HEIS_REP, "delta_gens": [HEIS_X, HEIS_Y], "torus_gens": [[n]]},
        "expected": {"lie_dims": [1, 1, 0, 0, 0], "group_dims": [1, 1, 0, 0, 0], "hirsch_length": 4, "provenance": "DERIVED"},
    }


def abelian_config(n: int) -> dict:
    return {
        "name": f"abelian{n}",
        "description": f"Z^{n} inside Q^{n}",
        "unipotent": {"dim": n, "brackets": []},
        "torus": {"dim": 0, "derivations": []},
        "module": "trivial",
        "subgroup": {"delta_gens": [{"log": [1 if i == j else 0 for j in range(n)]} for i in range(n)], "torus_gens": []},
        "expected": {
            "lie_dims": [_binom(n, k) for k in range(n + 1)],
            "group_dims": [_binom(n, k) for k in range(n + 1)],
            "provenance": "TRIVIAL",
        },
    }


def _binom(n, k):
    from math import comb

    return comb(n, k)


def _multi_prime_config(primes) -> dict:
    ell = len(primes)
    cfg = _bs_config(
        primes[0],
        name=f"multi_prime{ell}",
        torus_gens=[[p] for p in primes],
        expected={
            "lie_dims": [1, 1, 0],
            "declared_hirsch_length": ell + 1,
            "expected_fail": ["discreteness"],
            "provenance": "PAPER",
        },
    )
    cfg["description"] = f"Z[1/{'*'.join(map(str, primes))}] x| Z^{ell}: torus part <{', '.join(map(str, primes))}> is not discrete"
    return cfg


BUILTIN_CONFIGS = [
    {
        "name": "h3",
        "description": "integer Heisenberg group H(Z) inside H(Q), basis (x, z, y)",
        "unipotent": {"dim": 3, "names": ["x", "z", "y"], "brackets": [[0, 2, [0, 1, 0]]]},
        "torus": {"dim": 0, "derivations": []},
        "module": "trivial",
        "subgroup": {"representation": HEIS_REP, "delta_gens": [HEIS_X, HEIS_Y], "torus_gens": []},
        "expected": {"lie_dims": [1, 2, 2, 1], "group_dims": [1, 2, 2, 1], "hirsch_length": 3, "provenance": "DERIVED"},
    },
    abelian_config(1),
    abelian_config(2),
    abelian_config(3),
    {
        "name": "abelian_t",
        "description": "Z x Z inside Q x Q with a weight-0 torus",
        "unipotent": {"dim": 1, "names": ["u"], "brackets": []},
        "torus": {"dim": 1, "names": ["D"], "derivations": [[[0]]]},
        "module": "trivial",
        "subgroup": {"delta_gens": [{"log": [1]}], "torus_gens": [[2]]},
        "expected": {"lie_dims": [1, 2, 1], "group_dims": [1, 2, 1], "hirsch_length": 2, "provenance": "TRIVIAL"},
    },
    _bs_config(2),
    _bs_config(3),
    _bs_config(5),
    _bs_config(
        2,
        name="bs_hull2_index2",
        delta_step=2,
        expected={"lie_dims": [1, 1, 0], "group_dims": [1, 1, 0], "hirsch_length": 2, "provenance": "DERIVED"},
    ),
    _bs_config(
        2,
        name="bs_hull2_weight",
        module={"dim": 2, "u_action": [E12], "t_action": [[[2, 0], [0, 1]]]},
        expected={"lie_dims": [0, 1, 1], "group_dims": [0, 1, 1], "hirsch_length": 2, "provenance": "DERIVED"},
    ),
    _heis_config(2),
    _heis_config(3),
    _multi_prime_config([2, 3]),
    _multi_prime_config([2, 3, 5]),
    {
        "name": "anosov_tower",
        "description": "Z^2 x|_A Z with A = [[2,1],[1,1]]; the torus direction is not Q-split",
        "unipotent": {"dim": 2, "brackets": []},
        "torus": {"dim": 1, "derivations": [[[2, 1], [1, 1]]]},
        "module": "trivial",
        "subgroup": {
            "delta_gens": [{"log": [1, 0]}, {"log": [0, 1]}],
            "torus_gens": [],
            "automorphisms": [[[2, 1], [1, 1]]],
        },
        "expected": {"group_dims": [1, 1, 1, 1], "hirsch_length": 3, "expected_fail": ["qsplit"], "provenance": "DERIVED"},
    },
]
BUILTIN_CONFIGS[3]["description"] = "Z^3 inside Q^3"
_bs_weight = next(c for c in BUILTIN_CONFIGS if c["name"] == "bs_hull2_weight")
_bs_weight["description"] = "BS(1,2) hull with the 2-dim module u -> E12, D -> diag(2,1)"
_bs_index = next(c for c in BUILTIN_CONFIGS if c["name"] == "bs_hull2_index2")
_bs_index["description"] = "bs_hull2 with Delta = 2Z, a finite-index subgroup"

_CACHE: dict = {}


def builtin_catalog() -> list:
    return [get_entry(cfg["name"]) for cfg in BUILTIN_CONFIGS]


def builtin_names() -> list:
    return [cfg["name"] for cfg in BUILTIN_CONFIGS]


def get_entry(name: str) -> CatalogEntry:
    if name not in _CACHE:
        cfg = next((c for c in BUILTIN_CONFIGS if c["name"] == name), None)
        if cfg is None:
            if name.startswith("abelian") and name[7:].isdigit():
                cfg = abelian_config(int(name[7:]))
            else:
                raise KeyError(name)
        _CACHE[name] = parse_config(json.loads(json.dumps(cfg)))
    return _CACHE[name]


# ------------------------------------------------------------------ reports


@dataclass
class VerificationReport:
    entry: str
    verdicts: list
    timings: dict
    version: str = __version__

    @property
    def passed(self) -> bool:
        applicable = [v for v in self.verdicts if v.status != "SKIPPED"]
        return bool(applicable) and all(v.passed for v in applicable) and not any(v.status == "SKIPPED" and v.witness.get("hypothesis_failed") for v in self.verdicts)

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self, timings: bool = True) -> dict:
        out = {
            "entry": self.entry,
            "status": self.status,
            "checks": [v.to_json() for v in self.verdicts],
            "version": self.version,
        }
        if timings:
            out["timings"] = self.timings
        return out


def _skip(check: str, hypothesis: str, reason: str) -> Verdict:
    v = Verdict.skipped(check, reason)
    v.witness = {"skipped_because": reason, "hypothesis_failed": hypothesis}
    return v


def hypothesis_verdicts(entry: CatalogEntry) -> list:
    sub = entry.subgroup
    out = [Verdict("jacobi", True, {"dim_u": entry.u_dim})]
    if entry.lie_side:
        out.append(Verdict("qsplit", True, {"derivations": entry.hull.t_dim}))
    else:
        out.append(Verdict("qsplit", False, {"error": entry.lie_side_error}))
    dens = is_zariski_dense_unipotent(sub)
    out.append(Verdict("density", dens.yes, dens.to_json()))
    if sub.automorphisms:
        return out
    tdens = torus_density_check(sub.torus_gens, entry.hull.t_dim)
    out.append(Verdict("torus_density", tdens.yes, tdens.to_json()))
    disc = torus_discreteness_check(sub.torus_gens, entry.hull.t_dim)
    witness = disc.to_json()
    if not disc.yes:
        witness["declared_hirsch_length"] = declared_hirsch_length(sub)
        witness["hull_dimension"] = entry.hull.dim
    out.append(Verdict("discreteness", disc.yes, witness))
    if disc.yes and len(sub.torus_gens) != entry.hull.t_dim:
        out.append(Verdict("torus_rank", False, {"torus_gens": len(sub.torus_gens), "dim_t": entry.hull.t_dim}))
    return out


def _failed_hypothesis(hyps: list) -> str | None:
    for v in hyps:
        if not v.passed:
            return v.check
    return None


def run_checks(entry: CatalogEntry, which: str = "all") -> VerificationReport:
    if which not in CHECKS + ("all",):
        raise ValueError(f"unknown check {which!r}")
    wanted = CHECKS if which == "all" else (which,)
    timings = {}
    verdicts = []
    t0 = time.perf_counter()
    hyps = hypothesis_verdicts(entry)
    timings["hypotheses"] = time.perf_counter() - t0
    verdicts.extend(hyps)
    lie_blocker = None if entry.lie_side else "qsplit"
    group_blocker = _failed_hypothesis(hyps)
    g = entry.algebra if entry.lie_side else None
    M = entry.module
    ss = None

    def spectral():
        nonlocal ss
        if ss is None:
            ss = pages(hs_filtration(g, M, entry.u_dim))
        return ss

    for check in wanted:
        t0 = time.perf_counter()
        if check == "main":
            verdicts.extend(_main_checks(entry, g, M, lie_blocker, group_blocker, spectral))
        elif check == "decomposition":
            if lie_blocker:
                verdicts.append(_skip("decomposition", lie_blocker, entry.lie_side_error or ""))
            else:
                verdicts.append(decomposition_check(g, M, entry.u_dim))
        elif check == "spectral":
            if lie_blocker:
                verdicts.append(_skip("spectral", lie_blocker, entry.lie_side_error or ""))
            else:
                verdicts.extend(_spectral_checks(entry, g, M, spectral()))
        elif check == "restriction":
            # invariants under t need no weight decomposition, so this runs without Q-splitness
            d = entry.subgroup if group_blocker is None else None
            verdicts.append(restriction_injectivity(entry.algebra, M, entry.u_dim, d))
        elif check == "c17":
            verdicts.extend(c17_checks(entry))
        timings[check] = time.perf_counter() - t0
    return VerificationReport(entry.name, verdicts, {k: round(v, 6) for k, v in timings.items()})


def _expected_verdict(entry: CatalogEntry, lie_dims, group_dims) -> Verdict:
    exp = entry.expected
    mismatches = {}
    if "lie_dims" in exp and lie_dims is not None and list(lie_dims) != list(exp["lie_dims"]):
        mismatches["lie_dims"] = {"expected": exp["lie_dims"], "got": list(lie_dims)}
    if "group_dims" in exp and group_dims is not None and list(group_dims) != list(exp["group_dims"]):
        mismatches["group_dims"] = {"expected": exp["group_dims"], "got": list(group_dims)}
    return Verdict("expected_values", not mismatches, mismatches or {"provenance": exp.get("provenance")})


def _main_checks(entry, g, M, lie_blocker, group_blocker, spectral) -> list:
    out = []
    lie_dims = build_complex(g, M).betti() if g is not None else None
    group_dims = None
    if group_blocker in (None, "qsplit"):
        model = wang_tower(entry.subgroup, M)
        group_dims = model.dims
        out.append(Verdict("group_model", True, model.to_json()))
    if lie_blocker or group_blocker:
        blocker = lie_blocker or group_blocker
        reason = entry.lie_side_error if lie_blocker else "certificate verdict is not YES"
        for name in ("compare_with_lie", "comparison", "phi_ring_map"):
            v = _skip(name, blocker, reason)
            if blocker == "discreteness":
                v.witness["declared_hirsch_length"] = declared_hirsch_length(entry.subgroup)
                v.witness["hull_dimension"] = entry.hull.dim
            out.append(v)
        out.append(_expected_verdict(entry, lie_dims, group_dims))
        return out
    out.append(compare_with_lie(wang_tower(entry.subgroup, M), g, M))
    out.append(comparison(spectral(), g, entry.subgroup, M).verdict)
    if M is None:
        out.append(phi_ring_map(g, entry.subgroup).verdict)
    else:
        out.append(Verdict.skipped("phi_ring_map", "ring structure needs trivial coefficients"))
    out.append(_expected_verdict(entry, lie_dims, group_dims))
    return out


def _spectral_checks(entry, g, M, ss) -> list:
    out = [e2_identification(ss, g, M, entry.u_dim), abutment_check(ss, g, M)]
    if M is None:
        out.append(page_multiplicativity_check(ss))
    else:
        out.append(Verdict.skipped("page_multiplicativity", "page products need trivial coefficients"))
    stab = stabilization_page(ss)
    bound = g.dim + 1
    out.append(Verdict("stabilization", stab is not None and stab <= bound, {"stable_from": stab, "bound": bound}))
    out.append(Verdict("pages", True, {"pages": ss.to_json()[:3]}))
    return out


# ------------------------------------------------------------------ C17

BS_FAMILY = ("bs_hull2", "bs_hull3", "bs_hull5")


def c17_pair(a: CatalogEntry, b: CatalogEntry) -> Verdict:
    """Fingerprints and an explicit ring isomorphism H*(Γ_a) → H*(Γ_b).

    The isomorphism is Φ_b ∘ Φ_a^{-1}, both Φ's coming from the common Lie
    algebra model.
    """
    pa = phi_ring_map(a.algebra, a.subgroup)
    pb = phi_ring_map(b.algebra, b.subgroup)
    if not (pa.verdict.passed and pb.verdict.passed):
        return Verdict(f"c17[{a.name},{b.name}]", False, {"pair": [a.name, b.name], "issue": "phi_ring_map failed"})
    if a.algebra != b.algebra:
        return Verdict(f"c17[{a.name},{b.name}]", False, {"pair": [a.name, b.name], "issue": "different Lie algebra models"})
    fa = ring_invariants(pa.group_ring)
    fb = ring_invariants(pb.group_ring)
    if fa != fb:
        return Verdict(f"c17[{a.name},{b.name}]", False, {"pair": [a.name, b.name], "fingerprints": [fa.to_json(), fb.to_json()]})
    maps = [mb @ inverse(ma) if ma.rows else RatMatrix.zeros(0, 0) for ma, mb in zip(pa.maps, pb.maps)]
    fail = ring_map_failure(pa.group_ring, pb.group_ring, maps)
    if fail is not None:
        return Verdict(f"c17[{a.name},{b.name}]", False, {"pair": [a.name, b.name], "isomorphism_failure": [str(x) for x in fail]})
    return Verdict(
        f"c17[{a.name},{b.name}]",
        True,
        {"pair": [a.name, b.name], "fingerprint": fa.to_json(), "isomorphism": [m.to_json() for m in maps]},
    )


def c17_checks(entry: CatalogEntry) -> list:
    if entry.name not in BS_FAMILY:
        return [Verdict.skipped("c17", "entry is not in the BS(1,n) family " + ", ".join(BS_FAMILY))]
    return [c17_pair(entry, get_entry(other)) for other in BS_FAMILY if other != entry.name]


# ------------------------------------------------------------------ cohomology


def cohomology_report(entry: CatalogEntry, max_degree: int | None = None) -> dict:
    out = {"entry": entry.name, "certificates": dict(sorted(entry.certificates.items()))}

    def cut(seq):
        seq = list(seq)
        return seq if max_degree is None else seq[: max_degree + 1]

    if entry.lie_side:
        c = build_complex(entry.algebra, entry.module)
        lie = {"dims": cut(c.betti())}
        if entry.module is None:
            lie["fingerprint"] = ring_invariants(ring_structure(c)).to_json()
        out["lie"] = lie
    else:
        out["lie"] = {"rejected": entry.lie_side_error}
    try:
        model = wang_tower(entry.subgroup, entry.module)
        group = model.to_json()
        group["dims"] = cut(group["dims"])
        out["group"] = group
    except SolvcohError as exc:
        out["group"] = {"rejected": str(exc)}
    try:
        out["polyrational_length"] = polyrational_series(entry.subgroup).length
    except SolvcohError:
        out["polyrational_length"] = None
    return out


def verify_many(names: list, which: str, jobs: int = 1) -> list:
    if jobs > 1 and len(names) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_verify_one, names, [which] * len(names)))
    return [_verify_one(n, which) for n in names]


def _verify_one(name: str, which: str) -> VerificationReport:
    return run_checks(get_entry(name), which)
