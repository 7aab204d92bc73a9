"""Verification harness: every identity, inequality and divergence test over
the operator zoo, collected into one deterministic JSON report.

Each check returns a status: ``pass``, ``fail`` (an asserted check broke)
or ``flagged`` (the configuration cannot resolve the question, for example a
radial floor too coarse to separate bounded from diverging constants).  The
exit code is 1 iff some check failed.
"""

from __future__ import annotations

import datetime as _dt
import math
from collections.abc import Callable

import numpy as np

from . import besov, calculus, gamma, gfs, peller, powerbound, zoo
from .config import RunConfig
from .errors import GfsError
from .funcs import Polynomial, random_polynomial
from .io import dumps
from .linalg import AmbientSpace, spectral_radius
from .quadrature import CircleRule, circle_integral

PASS, FAIL, FLAGGED = "pass", "fail", "flagged"


def _status(ok: bool) -> str:
    return PASS if ok else FAIL


def _rng(cfg: RunConfig, stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([cfg.seed, stream]))


def _grid(cfg: RunConfig) -> np.ndarray:
    return gfs.default_r_grid(cfg.r_min, cfg.r_max, cfg.grid_points,
                              extra=[1 + s for s in _floors(cfg)])


def _floors(cfg: RunConfig) -> tuple:
    return tuple(s for s in gfs.DIVERGENCE_FLOORS if s >= cfg.r_min * (1 - 1e-12))


def _contraction(rng, d, scale=1.0):
    A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return scale * A / np.linalg.norm(A, 2)


def _rel(a, b) -> float:
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / max(np.linalg.norm(b), 1e-300))


# ------------------------------------------------------------------ checks


def check_residue(cfg):
    rows = []
    for r in (1.1, 2.0, 5.0):
        res = circle_integral(lambda t, r=r: 1.0 / (r * r + 1 - 2 * r * np.cos(t)),
                              CircleRule(tol=cfg.circle_tol, n_max=cfg.circle_nmax))
        exact = 2 * np.pi / ((r + 1) * (r - 1))
        rows.append({"r": r, "value": float(res.value), "rel_error": abs(res.value - exact) / exact})
    worst = max(row["rel_error"] for row in rows)
    return {"status": _status(worst <= 1e-10), "max_rel_error": worst, "rows": rows}


def check_contour_forms(cfg):
    rng = _rng(cfg, 1)
    worst_forms = worst_horner = 0.0
    for _ in range(cfg.random_instances):
        d = int(rng.integers(2, 7))
        T = _contraction(rng, d, float(rng.uniform(0.3, 0.95)))
        m = int(rng.integers(0, 4))
        P = random_polynomial(rng, int(rng.integers(m, 9)), "flat")
        rho = float(rng.uniform(1.0, 1.6))
        rd = calculus.derivative_calculus_rd(P, m, T, rho).value
        ipp = calculus.derivative_calculus_ipp(P, m, T, rho).value
        hor = calculus.horner_calculus(P, m, T).value
        scale = max(np.linalg.norm(hor), 1.0)
        worst_forms = max(worst_forms, float(np.linalg.norm(rd - ipp)) / scale)
        worst_horner = max(worst_horner, float(max(np.linalg.norm(rd - hor),
                                                   np.linalg.norm(ipp - hor))) / scale)
    return {"status": _status(worst_forms <= 1e-9 and worst_horner <= 1e-8),
            "max_rel_rd_vs_ipp": worst_forms, "max_rel_vs_horner": worst_horner}


def check_monomial_recovery(cfg):
    rng = _rng(cfg, 2)
    T = _contraction(rng, 4, 0.8)
    worst = 0.0
    for n in range(0, 11):
        for m in range(1, 4):
            c = np.zeros(n + m + 1, dtype=complex)
            c[-1] = 1.0 / math.prod(range(n + 1, n + m + 1))
            got = calculus.derivative_calculus_ipp(Polynomial(c), m, T).value
            worst = max(worst, _rel(got, np.linalg.matrix_power(T, n)))
    return {"status": _status(worst <= 1e-8), "max_rel_error": worst}


def check_plancherel(cfg):
    rng = _rng(cfg, 3)
    worst = 0.0
    for _ in range(cfg.random_instances):
        d = int(rng.integers(2, 9))
        T = _contraction(rng, d)
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        for r in (1.5, 2.0, 4.0):
            res = powerbound.plancherel_check(T, r, x)
            worst = max(worst, res["gap"] / (1 + res["lhs"]))
    return {"status": _status(worst <= 1e-9), "max_scaled_gap": worst}


def _hilbert_zoo():
    out = {}
    for name, spec in zoo.default_zoo().items():
        T, space = zoo.build(spec)
        if space.is_hilbert and spectral_radius(T) <= 1 + 1e-12:
            out[name] = T
    return out


def check_quadratic_constants(cfg):
    rows = {}
    ok = True
    grid = _grid(cfg)
    for name, T in _hilbert_zoo().items():
        pb = powerbound.power_bound(T, cfg.horizon)
        if not pb.certified:
            rows[name] = {"certified": False}
            continue
        q = powerbound.hilbert_quadratic_constant(T, grid, samples=8, seed=cfg.seed)
        bound = 2 * np.pi * pb.M_upper ** 2
        holds = q["C_forward"].value <= bound * (1 + 1e-6)
        ok &= holds
        rows[name] = {"certified": True, "M": pb.M_upper, "C_forward": q["C_forward"].value,
                      "C_adjoint": q["C_adjoint"].value, "bound": bound, "holds": holds}
    return {"status": _status(ok), "operators": rows}


def check_cauchy_schwarz(cfg):
    rows = {}
    ok = True
    grid = _grid(cfg)
    for name, T in _hilbert_zoo().items():
        C = gfs.gfs_constant(T, 1, grid, cfg.gfs_samples, cfg.seed).value
        q = powerbound.hilbert_quadratic_constant(T, grid, samples=8, seed=cfg.seed)
        bound = math.sqrt(q["C_forward"].value * q["C_adjoint"].value)
        holds = C <= bound * 1.01
        ok &= holds
        rows[name] = {"gfs_C": C, "bound": bound, "holds": holds}
    return {"status": _status(ok), "operators": rows}


def check_ritt(cfg):
    rows = {}
    ok = True
    for d, angle in ((6, 0.8), (4, 1.2)):
        T = zoo.ritt_diagonal(d, angle)
        CR = zoo.ritt_constant(np.diag(T))
        est = gfs.gfs_constant(T, 1, _grid(cfg), cfg.gfs_samples, cfg.seed)
        top = max(v for _, v in est.meta["profile"])
        holds = top <= 2 * np.pi * CR * 1.01
        ok &= holds
        rows[f"ritt_{d}_{angle}"] = {"ritt_constant": CR, "max_normalized": top, "holds": holds}
    return {"status": _status(ok), "operators": rows}


def check_besov_representation(cfg):
    rng = _rng(cfg, 4)
    worst = 0.0
    for _ in range(max(2, cfg.random_instances // 3)):
        d = int(rng.integers(2, 6))
        T = _contraction(rng, d, 0.95)
        P = random_polynomial(rng, int(rng.integers(1, 16)), "harmonic")
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        xs = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        got = calculus.besov_apply(P, T, x, xs, radial_rule=calculus.RadialRule(tol=cfg.radial_tol))
        ref = complex(xs @ calculus.apply_polynomial(P, T) @ x)
        worst = max(worst, abs(got - ref) / max(abs(ref), 1e-300))
    return {"status": _status(worst <= 1e-6), "max_rel_error": worst}


def check_besov_closed_forms(cfg):
    worst = 0.0
    for N in range(1, 41):
        worst = max(worst, abs(besov.besov_norm(Polynomial.monomial(N)).total - 2.0))
    const = [abs(besov.besov_norm(Polynomial([c])).total - abs(c)) for c in (0.0, 1.0, -2.5, 3 - 4j)]
    return {"status": _status(worst <= 1e-9 and max(const) == 0.0),
            "max_monomial_error": worst, "max_constant_error": max(const)}


def check_derivative_bound(cfg):
    rng = _rng(cfg, 5)
    worst = 0.0
    for i in range(cfg.random_instances):
        P = random_polynomial(rng, int(rng.integers(1, 13)), besov.PROFILES[i % 3])
        for r in (1.25, 1.5, 2.0):
            res = besov.besov_of_derivative_bound_check(P, r)
            worst = max(worst, res["lhs"] / res["rhs"] if res["rhs"] else 0.0)
    return {"status": _status(worst <= 1 + 1e-8), "max_ratio": worst}


def check_log_degree(cfg):
    res = besov.log_degree_bound_check(cfg.log_degrees, cfg.log_samples, cfg.seed)
    return {"status": _status(res["holds"]), "slope": res["slope"], "bound": res["bound"],
            "max_ratio": [row["max_ratio"] for row in res["table"]]}


def check_peller_bound(cfg):
    rows = {}
    ok = True
    for name in ("diag_0.9", "cyclic_shift_4", "random_contraction_6"):
        T, _ = zoo.build(zoo.default_zoo()[name])
        C = gfs.gfs_constant(T, 1, _grid(cfg), cfg.gfs_samples, cfg.seed).value
        res = besov.peller_bound_check(T, C, degree_max=30, samples=cfg.holder_instances * 4,
                                       seed=cfg.seed)
        ok &= res["holds"]
        pc = besov.peller_type_constant(T, 30, cfg.log_samples, cfg.seed).value
        rows[name] = {"gfs_C": C, "peller_C": pc, **res}
    return {"status": _status(ok), "operators": rows}


def check_shift_witness(cfg):
    worst = 0.0
    for n in (4, 16, 64):
        for p in (4 / 3, 2.0, 4.0):
            w = gamma.shift_witness(n, p)
            worst = max(worst, abs(w["numerator"] / w["expected_numerator"] - 1),
                        abs(w["ratio"] / w["expected_ratio"] - 1))
    return {"status": _status(worst <= 1e-14), "max_rel_error": worst}


def check_gamma_holder(cfg):
    rng = _rng(cfg, 6)
    rows = {}
    ok = True
    for p in (4 / 3, 2.0, 4.0):
        fails = 0
        worst = 0.0
        for _ in range(cfg.holder_instances):
            d = int(rng.integers(2, 9))
            n = int(rng.integers(1, 4))
            X = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
            Xs = rng.standard_normal((n, d)) + 1j * rng.standard_normal((n, d))
            space = AmbientSpace.hilbert(d) if p == 2.0 else AmbientSpace.lp(d, p)
            res = gamma.gamma_holder_check(X, Xs, space, cfg.gamma_K,
                                           int(rng.integers(2**31)), dual_K=cfg.gamma_K,
                                           restarts=2)
            fails += not res["holds"]
            worst = max(worst, res["lhs"] / res["rhs"])
        ok &= fails == 0
        rows[f"{p:.4f}"] = {"failures": fails, "max_ratio": worst}
    return {"status": _status(ok), "spaces": rows}


def check_fourier_resolvent(cfg):
    rng = _rng(cfg, 7)
    worst = 0.0
    weight = 0.0
    for _ in range(cfg.random_instances):
        d = int(rng.integers(2, 13))
        T = _contraction(rng, d)
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        res = gamma.fourier_resolvent_check(T, float(rng.uniform(1.1, 3.0)), x, K=20)
        worst = max(worst, res["max_error"], res["positive_frequency"])
        weight = max(weight, res["weight_error"])
    return {"status": _status(worst <= 1e-10 and weight <= 1e-12),
            "max_error": worst, "max_weight_error": weight}


def check_peller_convolution(cfg):
    rng = _rng(cfg, 8)
    worst = 0.0
    N = 64
    for _ in range(cfg.random_instances):
        d = int(rng.integers(2, 7))
        T = _contraction(rng, d)
        u = random_polynomial(rng, int(rng.integers(0, 5)), "flat")
        v = random_polynomial(rng, int(rng.integers(0, 5)), "flat")
        c = np.zeros(N, dtype=complex)
        c[:9] = rng.standard_normal(9) + 1j * rng.standard_normal(9)
        c[-8:] = rng.standard_normal(8) + 1j * rng.standard_normal(8)
        f = np.fft.ifft(c) * N
        x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        xs = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        res = peller.peller_convolution_check(f, u, v, T, x, xs)
        worst = max(worst, res["gap"] / max(1.0, abs(res["lhs"])))
    return {"status": _status(worst <= 1e-9), "max_scaled_gap": worst}


def check_divergence(cfg):
    floors = _floors(cfg)
    if len(floors) < 2:
        return {"status": FLAGGED, "reason": "radial floor too coarse to classify growth",
                "floors": list(floors)}
    grid = _grid(cfg)
    cases = {"jordan_1_2": (zoo.jordan(1.0, 2), "diverging"),
             "diag_0.9": (zoo.diagonal([0.9, 0.9]), "bounded"),
             "cyclic_shift_4": (zoo.cyclic_shift(4), "bounded")}
    rows = {}
    ok = True
    for name, (T, expected) in cases.items():
        ests = {
            "gfs": gfs.gfs_constant(T, 1, grid, cfg.gfs_samples, cfg.seed, floors=floors),
            "dfc": gfs.dfc_constant(T, 1, grid, cfg.dfc_samples, cfg.seed, floors=floors),
            "gamma_gfs": gamma.gamma_gfs_estimate(T, 1, K=cfg.gamma_K, seed=cfg.seed,
                                                  floors=floors),
        }
        row = {}
        for key, est in ests.items():
            status = est.meta["growth"]["status"]
            good = ("diverging" in est.flags) if expected == "diverging" else status == "bounded"
            ok &= good
            row[key] = {"status": status, "values": est.meta["growth"]["values"], "ok": good}
        rows[name] = row
    return {"status": _status(ok), "floors": list(floors), "operators": rows}


def check_power_bounds(cfg):
    rows = {}
    for name, spec in zoo.default_zoo().items():
        T, space = zoo.build(spec)
        pb = powerbound.power_bound(T, cfg.horizon, space)
        rows[name] = {"M_measured": pb.M_measured, "certified": pb.certified,
                      "divergent": pb.divergent, "flags": pb.flags}
    ok = rows["jordan_1_2"]["divergent"] and rows["cyclic_shift_4"]["certified"]
    return {"status": _status(ok), "operators": rows}


def check_downward_induction(cfg):
    T = zoo.diagonal([0.5, -0.3j])
    res = gfs.downward_induction_check(T, 2, 1.5, samples=1, seed=cfg.seed)
    return {"status": _status(res["holds"]),
            "rows": [{k: row[k] for k in ("k", "lhs", "rhs")} for row in res["rows"]]}


def check_similarity(cfg):
    S = zoo.diagonal([0.9, 0.5, -0.4])
    U = np.array([[1, 0.5, 0], [0, 1, 0.25], [0, 0, 1]], dtype=complex)
    res = gfs.similarity_transfer_check(S, U, 1, r_grid=_grid(cfg), samples=cfg.gfs_samples,
                                        seed=cfg.seed)
    return {"status": _status(res["holds"]), "C_S": res["C_S"], "C_T": res["C_T"],
            "kappa": res["kappa"]}


def check_zoo(cfg):
    bad = []
    for name, spec in zoo.default_zoo().items():
        T, _ = zoo.build(spec)
        if spec.kind == "diagonal" and not np.array_equal(T, np.diag(np.diag(T))):
            bad.append(name)
        if spec.kind == "cyclic_shift":
            d = spec.params["d"]
            if not np.array_equal(T, np.roll(np.eye(d), 1, axis=1)):
                bad.append(name)
        if spec.kind == "random_contraction" and spectral_radius(T) > 1 + 1e-12:
            bad.append(name)
    return {"status": _status(not bad), "mismatches": bad}


CHECKS: dict[str, Callable[[RunConfig], dict]] = {
    "residue": check_residue,
    "contour_forms": check_contour_forms,
    "monomial_recovery": check_monomial_recovery,
    "plancherel": check_plancherel,
    "quadratic_constants": check_quadratic_constants,
    "cauchy_schwarz": check_cauchy_schwarz,
    "ritt": check_ritt,
    "besov_representation": check_besov_representation,
    "besov_closed_forms": check_besov_closed_forms,
    "derivative_bound": check_derivative_bound,
    "log_degree": check_log_degree,
    "peller_bound": check_peller_bound,
    "shift_witness": check_shift_witness,
    "gamma_holder": check_gamma_holder,
    "fourier_resolvent": check_fourier_resolvent,
    "peller_convolution": check_peller_convolution,
    "divergence": check_divergence,
    "power_bounds": check_power_bounds,
    "downward_induction": check_downward_induction,
    "similarity": check_similarity,
    "zoo": check_zoo,
}


def verify_all(config: RunConfig | None = None, only=None) -> tuple[int, dict]:
    """Run every check (or those named in ``only``) and build the report.

    Returns ``(exit_code, report)``.  Apart from the ``timestamp`` entry the
    report depends only on the configuration.
    """
    cfg = config or RunConfig()
    checks = {}
    for name, fn in CHECKS.items():
        if only and name not in only:
            continue
        try:
            checks[name] = fn(cfg)
        except GfsError as exc:
            checks[name] = {"status": FAIL, "error": f"{type(exc).__name__}: {exc}"}
    counts = {s: sum(c["status"] == s for c in checks.values()) for s in (PASS, FAIL, FLAGGED)}
    code = 1 if counts[FAIL] else 0
    report = {
        "config": cfg.to_dict(),
        "checks": checks,
        "summary": counts,
        "exit_code": code,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(),
    }
    return code, report


def report_text(report: dict, with_timestamp: bool = True) -> str:
    """Deterministic JSON text of a report, optionally without the timestamp."""
    body = dict(report) if with_timestamp else {k: v for k, v in report.items() if k != "timestamp"}
    return dumps(body)
