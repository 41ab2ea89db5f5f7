"""Job orchestration: dispatch, stabilization policy, caching, reports.

Every result row that carries a dimension also carries its certification
status and the window it was computed on.  Reports are deterministic:
identical inputs produce byte-identical documents apart from the timing
field, which is excluded from the content hash.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor

from .algebra import (
    PointedBimodule,
    is_connective,
    is_strict,
    regular_bimodule,
    restrict_bimodule,
)
from .complex import homology
from .free_construction import (
    TargetAlgebra,
    adjunction_card_check,
    free_functor_F,
    ideal_generation_check,
)
from .hochschild import bar_augmentation_check, der_hh_les, ext_group, der_group, hh_group
from .io import Environment, SchemaError
from .status import ScopeError, ValidationError, WindowError
from .theorems import (
    lemma_c_check,
    pi_map_alg,
    semifree_pi0,
    theorem_a_report,
    theorem_b_les_report,
)
from .version import ENGINE_VERSION

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_PARTIAL = 3
EXIT_SCOPE = 4


def _fmt_cert(cert):
    return cert.describe() if cert is not None else None


def _dim_entry(field, degree, dim, cert, window=None, reps=None):
    out = {"degree": degree, "dim": dim, "status": _fmt_cert(cert)}
    if window is not None:
        out["window"] = list(window)
    return out


def _job_degrees(job, default=(-2, 2)):
    degrees = job.get("degrees", list(default))
    if not (isinstance(degrees, list) and len(degrees) == 2):
        raise SchemaError("job.degrees", "expected [lo, hi]")
    return int(degrees[0]), int(degrees[1])


def _group_rows(field, maker, lo, hi):
    rows = []
    unstable = False
    for n in range(lo, hi + 1):
        g = maker(n)
        rows.append({"degree": n, "dim": g.dim, "status": g.certificate.describe()})
        if not g.certificate.is_certified():
            unstable = True
    return rows, unstable


def _les_payload(report):
    return {"title": report.title, "nodes": report.rows()}


def run_job(env: Environment, job: dict, stabilize: bool = True) -> dict:
    """Execute one job against the environment; returns the result payload."""
    op = job["op"]
    field = env.field
    cutoff = int(job.get("cutoff", 8))
    cap_l = int(job.get("L", 6))

    if op == "homology":
        name = job.get("module") or job.get("algebra")
        if name in env.modules:
            C = env.modules[name]
        else:
            C = env.resolve("algebras", name).underlying
        lo, hi = _job_degrees(job)
        res = homology(C, (lo, hi))
        return {
            "op": op,
            "status": "ok",
            "table": [
                {"degree": n, "dim": res.dim(n), "status": "EXACT", "window": [lo, hi]}
                for n in range(lo, hi + 1)
            ],
        }

    if op in ("hh", "der"):
        R = env.resolve("algebras", job["algebra"])
        coeff_name = job.get("coefficients", job["algebra"])
        if coeff_name == job["algebra"]:
            M = regular_bimodule(R)
        else:
            M = env.resolve("bimodules", coeff_name)
        lo, hi = _job_degrees(job)
        fn = hh_group if op == "hh" else der_group
        rows, unstable = _group_rows(
            field, lambda n: fn(R, M, n, cutoff=cutoff, stabilize=stabilize), lo, hi
        )
        return {"op": op, "status": "partial" if unstable else "ok", "table": rows}

    if op == "ext":
        R = env.resolve("algebras", job["algebra"])
        N = env.resolve("bimodules", job["module"])
        M = env.resolve("bimodules", job["coefficients"])
        lo, hi = _job_degrees(job)
        rows, unstable = _group_rows(
            field, lambda n: ext_group(R, N, M, n, cutoff=cutoff, stabilize=stabilize), lo, hi
        )
        return {"op": op, "status": "partial" if unstable else "ok", "table": rows}

    if op == "der-les":
        R = env.resolve("algebras", job["algebra"])
        coeff_name = job.get("coefficients", job["algebra"])
        M = regular_bimodule(R) if coeff_name == job["algebra"] else env.resolve("bimodules", coeff_name)
        lo, hi = _job_degrees(job)
        report = der_hh_les(R, M, (lo, hi), cutoff=cutoff)
        bad = report.not_exact_nodes()
        return {
            "op": op,
            "status": "ok" if not bad else "not-exact",
            "les": _les_payload(report),
        }

    if op == "bar-check":
        phi = env.resolve("maps", job["map"])
        lo, hi = _job_degrees(job, (-4, 2))
        ok, cert, dims = bar_augmentation_check(phi, cutoff=cutoff, window=(lo, hi))
        return {
            "op": op,
            "status": "ok" if cert.is_certified() else "partial",
            "quasi_iso": ok,
            "cone_homology": [
                {"degree": n, "dim": dims[n], "status": cert.describe(), "window": [lo, hi]}
                for n in sorted(dims)
            ],
        }

    if op == "pi":
        phi = env.resolve("maps", job["map"])
        n = int(job.get("n", 2))
        gens = env.modules.get(job["free_generators"]) if "free_generators" in job else None
        pg = pi_map_alg(phi, n, cutoff=cutoff, free_generators=gens)
        certified = pg.certificate.is_certified() and pg.dim is not None
        return {
            "op": op,
            "status": "ok" if certified else "partial",
            "pi": {
                "level": pg.level,
                "dim": pg.dim,
                "route": pg.route,
                "status": pg.certificate.describe(),
                "note": pg.note,
            },
        }

    if op == "les-check":
        phi = env.resolve("maps", job["map"])
        depth = int(job.get("depth", 3))
        gens = env.modules.get(job["free_generators"]) if "free_generators" in job else None
        report = theorem_b_les_report(phi, depth, cutoff=cutoff, free_generators=gens)
        bad = report.not_exact_nodes()
        undetermined = any(v.verdict == "UNDETERMINED" for v in report.verdicts)
        status = "not-exact" if bad else ("partial" if undetermined else "ok")
        return {"op": op, "status": status, "les": _les_payload(report)}

    if op == "theorem-a":
        R = env.resolve("algebras", job["algebra"])
        rep = theorem_a_report(R, cutoff=cutoff)
        return {
            "op": op,
            "status": "ok",
            "report": {
                "h_minus_1": rep.h_minus_1,
                "hh0_dim": rep.hh0_dim,
                "h0_dim": rep.h0_dim,
                "hh0_units": rep.hh0_units,
                "h0_units": rep.h0_units,
                "kernel_order": rep.kernel_order,
                "pi1_order": rep.pi1.group_order,
                "pi1_route": rep.pi1.route,
                "exact_at_units": rep.exact_at_units,
            },
        }

    if op == "lemma-c":
        R = env.resolve("algebras", job["algebra"])
        coeff_name = job.get("coefficients", job["algebra"])
        M = regular_bimodule(R) if coeff_name == job["algebra"] else env.resolve("bimodules", coeff_name)
        n = int(job.get("n", 2))
        rep = lemma_c_check(R, M, n, cutoff=cutoff)
        certified = all(c.is_certified() for c in rep.certificates)
        return {
            "op": op,
            "status": ("ok" if rep.equal else "not-equal") if certified else "partial",
            "report": {
                "n": rep.level,
                "corollary_route": rep.dim_a,
                "additivity_route": rep.dim_b,
                "derivation_route": rep.dim_c,
                "equal": rep.equal,
                "statuses": [c.describe() for c in rep.certificates],
            },
        }

    if op == "free-f":
        X = _pointed_from_job(env, job)
        lo, hi = _job_degrees(job)
        res = free_functor_F(X, cap_l, (lo, hi), stabilize=stabilize)
        return {
            "op": op,
            "status": "ok" if res.certificate.is_certified() else "partial",
            "dims": [
                {"degree": n, "dim": d, "status": res.certificate.describe(), "window": [lo, hi]}
                for n, d in sorted(res.dims.items())
            ],
        }

    if op == "adjunction-check":
        X = _pointed_from_job(env, job)
        A = env.resolve("algebras", job["target"])
        from_r = env.resolve("maps", job["from_r"])
        from_s = env.resolve("maps", job["from_s"])
        lo, hi = _job_degrees(job)
        rep = adjunction_card_check(X, TargetAlgebra(A, from_r, from_s), cap_l, (lo, hi))
        return {
            "op": op,
            "status": "ok" if rep.bijection else "mismatch",
            "pointed_maps": rep.pointed_maps,
            "algebra_maps": rep.algebra_maps,
            "bijection": rep.bijection,
        }

    if op == "ideal-gen-check":
        X = _pointed_from_job(env, job)
        lo, hi = _job_degrees(job)
        rep = ideal_generation_check(X, cap_l, (lo, hi))
        return {
            "op": op,
            "status": "ok" if rep.matches else "mismatch",
            "ideal_homology": {str(k): v for k, v in sorted(rep.ideal_homology.items())},
            "orbit_dims": {str(k): v for k, v in sorted(rep.orbit_dims.items())},
            "matches": rep.matches,
        }

    if op == "axiom3-smoke":
        phi = env.resolve("maps", job["map"]) if "map" in job else None
        if phi is None:
            S = env.resolve("algebras", job["algebra"])
            from .standard import identity_algebra_map

            phi = identity_algebra_map(S)
        S = phi.target
        disk_degree = int(job.get("disk_degree", 1))
        lo, hi = _job_degrees(job)
        from .algebra import direct_sum_bimodules, free_bimodule
        from .complex import disk_complex
        from .free_construction import axiom3_smoke
        from .linalg import SparseMatrix

        S_rs = restrict_bimodule(phi, regular_bimodule(S))
        D = free_bimodule(phi.source, disk_complex(field, disk_degree), S)
        X = PointedBimodule(direct_sum_bimodules(S_rs, D), {0: field.one()})
        proj = {}
        for n in sorted(X.base.underlying.dims):
            sdim = S_rs.underlying.dim(n)
            entries = [(i, i, field.one()) for i in range(sdim)]
            proj[n] = SparseMatrix.from_entries(field, sdim, X.base.underlying.dim(n), entries)
        S_pointed = PointedBimodule(S_rs, {0: field.one()})
        rep = axiom3_smoke(X, proj, S_pointed, cap_l, (lo, hi))
        status = "skipped" if rep.skipped else ("ok" if rep.quasi_iso else "not-exact")
        return {
            "op": op,
            "status": status,
            "distinguished": rep.distinguished,
            "quasi_iso": rep.quasi_iso,
            "detail": rep.detail,
        }

    if op == "lurie":
        S = env.resolve("algebras", job["algebra"])
        rep = semifree_pi0(S, int(job.get("cap", 4)))
        return {
            "op": op,
            "status": "ok" if rep.certificate.is_certified() else "partial",
            "associative_count": rep.associative_count,
            "commutative_count": rep.commutative_count,
            "blocks": list(rep.associative_blocks),
            "homology_blocks": list(rep.homology_blocks),
            "stabilization": rep.certificate.describe(),
        }

    raise SchemaError("job.op", f"unknown operation {op!r}")


def _pointed_from_job(env: Environment, job) -> PointedBimodule:
    """Resolve a pointed bimodule: either a named bimodule plus a point, or
    an algebra S seen through a map phi with the unit as point."""
    field = env.field
    if "bimodule" in job:
        M = env.resolve("bimodules", job["bimodule"])
        raw_point = job.get("point")
        if raw_point is None:
            point = {0: field.one()}
        else:
            point = {}
            for k, rawv in enumerate(raw_point):
                v = field.parse(str(rawv)) if field.kind == "rationals" else field.from_int(int(rawv))
                if v != field.zero():
                    point[k] = v
        return PointedBimodule(M, point)
    if "map" in job:
        phi = env.resolve("maps", job["map"])
        M = restrict_bimodule(phi, regular_bimodule(phi.target))
        return PointedBimodule(M, {0: field.one()})
    if "algebra" in job:
        S = env.resolve("algebras", job["algebra"])
        return PointedBimodule(regular_bimodule(S), {0: field.one()})
    raise SchemaError("job", "needs one of: bimodule, map, algebra")


# ---------------------------------------------------------------------------
# caching


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _payload_hash(payload) -> str:
    return hashlib.sha256(canonical_json(payload).encode()).hexdigest()


class FragmentCache:
    """Content-addressed job fragments; corrupt entries are recomputed."""

    def __init__(self, directory: str | None):
        self.directory = directory
        if directory:
            os.makedirs(directory, exist_ok=True)

    def key(self, env_doc, job) -> str:
        return _payload_hash({"engine": ENGINE_VERSION, "env": env_doc, "job": job})

    def get(self, key: str):
        if not self.directory:
            return None
        path = os.path.join(self.directory, f"{key}.json")
        try:
            with open(path, "r", encoding="utf-8") as fh:
                entry = json.load(fh)
        except (OSError, json.JSONDecodeError):
            return None
        payload = entry.get("payload")
        if entry.get("integrity") != _payload_hash(payload):
            return None  # tampered or corrupt: never trusted
        return payload

    def put(self, key: str, payload) -> None:
        if not self.directory:
            return
        entry = {"key": key, "integrity": _payload_hash(payload), "payload": payload}
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(canonical_json(entry))
            os.replace(tmp, os.path.join(self.directory, f"{key}.json"))
        except OSError:
            try:
                os.unlink(tmp)
            except OSError:
                pass


# ---------------------------------------------------------------------------
# the runner


def run_jobs(
    env: Environment,
    env_doc: dict,
    cache_dir: str | None = None,
    workers: int = 1,
    stabilize: bool = True,
) -> tuple[dict, int]:
    """Run every job; returns (report document, exit code)."""
    cache = FragmentCache(cache_dir)
    start = time.time()

    def one(job):
        key = cache.key(env_doc, {"job": job, "stabilize": stabilize})
        cached = cache.get(key)
        if cached is not None:
            return cached, None
        try:
            payload = run_job(env, job, stabilize=stabilize)
        except ScopeError as exc:
            return {"op": job.get("op"), "status": "scope-error", "error": str(exc)}, "scope"
        except (WindowError, ValidationError) as exc:
            return {"op": job.get("op"), "status": "error", "error": str(exc)}, "validation"
        cache.put(key, payload)
        return payload, None

    if workers > 1 and len(env.jobs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(one, env.jobs))
    else:
        outcomes = [one(job) for job in env.jobs]

    results = [payload for payload, _ in outcomes]
    flags = [flag for _, flag in outcomes]
    field_doc = {"kind": env.field.kind}
    if env.field.characteristic:
        field_doc["characteristic"] = env.field.characteristic
    body = {"field": field_doc, "results": results, "engine": ENGINE_VERSION}
    body["input_hash"] = _payload_hash({"env": env_doc, "jobs": env.jobs})
    report = dict(body)
    report["timing"] = {"total_seconds": round(time.time() - start, 6)}

    exit_code = EXIT_OK
    partial_statuses = {"partial", "not-exact", "mismatch", "not-equal"}
    if any(r.get("status") in partial_statuses for r in results):
        exit_code = EXIT_PARTIAL
    if any(r.get("status") == "error" for r in results):
        exit_code = EXIT_VALIDATION
    if "scope" in flags or any(r.get("status") == "scope-error" for r in results):
        exit_code = EXIT_SCOPE
    return report, exit_code


def strip_timing(report: dict) -> dict:
    out = dict(report)
    out.pop("timing", None)
    return out


def render_pretty(report: dict) -> str:
    """Plain-text table rendering of a report document."""
    lines = []
    field_doc = report.get("field", {})
    lines.append(f"field: {field_doc.get('kind')}"
                 + (f" (p = {field_doc['characteristic']})" if "characteristic" in field_doc else ""))
    for res in report.get("results", []):
        lines.append(f"-- {res.get('op')} [{res.get('status')}]")
        if "table" in res:
            for row in res["table"]:
                lines.append(
                    f"   degree {row['degree']:>3}: dim {row['dim']}  ({row['status']})"
                )
        if "les" in res:
            lines.append(f"   {res['les']['title']}")
            for node in res["les"]["nodes"]:
                dim = "?" if node["dim"] is None else node["dim"]
                lines.append(
                    f"   {node['name']:>14}: dim {dim:>3}  {node['verdict']:>12}"
                    + (f"  [{node['route']}]" if node.get("route") else "")
                )
        for key in (
            "quasi_iso",
            "pointed_maps",
            "algebra_maps",
            "bijection",
            "associative_count",
            "commutative_count",
            "matches",
            "error",
        ):
            if key in res:
                lines.append(f"   {key} = {res[key]}")
        if "report" in res:
            for k, v in res["report"].items():
                lines.append(f"   {k} = {v}")
        if "pi" in res:
            for k, v in res["pi"].items():
                lines.append(f"   {k} = {v}")
        if "dims" in res:
            for row in res["dims"]:
                lines.append(f"   degree {row['degree']:>3}: dim {row['dim']}  ({row['status']})")
    return "\n".join(lines)
