"""Deterministic verification suites.

Each suite replays a family of library invariants with a seeded generator
and returns a report of named cases, each comparing a measured number
against a bound.  Reports serialize to JSON with sorted keys, so two runs
with the same seed on the same build produce byte-identical output.
"""

from __future__ import annotations

import math
import platform
from dataclasses import dataclass, field

import numpy as np

from . import __version__, backend
from .apps import CKParams, ck_single_query, deutsch_jozsa, grover, grover_success_probability
from .gadget import (
    GadgetPlan,
    GadgetVariant,
    apply_gadget,
    eigen_ancilla,
    expected_phases,
    gadget_matrix,
    optimality_check,
    phase_transform,
    phase_transform_initialized,
    phase_transform_mixed,
)
from .oracles import (
    FunctionTable,
    OracleCounter,
    RealFunctionTable,
    delta_table,
    oracle_matrix,
    quantize,
)
from .state import (
    DensityOperator,
    RegisterLayout,
    StateVector,
    apply_on_segment,
    basis_state,
    mutual_information,
    partial_trace,
    purify,
    random_density,
    random_state,
    von_neumann_entropy,
)
from .transforms import (
    PrimitiveOp,
    apply_primitive,
    build,
    fourier_matrix,
    omega,
    omega_powers,
    phase_by_value_matrix,
    reflect_phase_matrix,
    translate_matrix,
)

SUITE_NAMES = ("primitives", "gadget", "phase-transform", "mixed", "optimality", "apps")

DEFAULT_TOLERANCES = {
    "primitives": {
        "unitary": 1e-10,
        "identity": 1e-10,
        "pauli": 1e-12,
        "fast_path": 1e-12,
        "exact": 0.0,
    },
    "gadget": {"identity": 1e-10, "pairwise": 1e-10, "state": 1e-10, "exact": 0.0},
    "phase-transform": {"amp": 1e-10, "eigen": 1e-12, "pauli": 1e-12, "exact": 0.0},
    "mixed": {
        "joint": 1e-9,
        "ancilla": 1e-9,
        "mutual_info": 1e-9,
        "purify": 1e-9,
        "entropy": 1e-12,
        "exact": 0.0,
    },
    "optimality": {"separation": 1e-6, "exact": 0.0},
    "apps": {
        "dj": 1e-9,
        "independence": 1e-10,
        "grover": 1e-9,
        "ck": 1e-9,
        "quantized": 5e-2,
        "exact": 0.0,
    },
}


@dataclass
class CaseResult:
    name: str
    measured: float
    bound: float
    passed: bool
    direction: str = "le"
    params: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "measured": self.measured,
            "bound": self.bound,
            "passed": self.passed,
            "direction": self.direction,
            "params": self.params,
        }


def _case(name, measured, bound, direction="le", **params) -> CaseResult:
    measured = float(measured)
    bound = float(bound)
    if direction == "le":
        ok = measured <= bound
    elif direction == "ge":
        ok = measured >= bound
    elif direction == "gt":
        ok = measured > bound
    else:
        raise ValueError(f"unknown direction {direction!r}")
    return CaseResult(name, measured, bound, bool(ok), direction, params)


@dataclass
class SuiteReport:
    suite: str
    seed: int
    tolerances: dict
    cases: list

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cases)

    @property
    def failed_cases(self) -> list:
        return [c for c in self.cases if not c.passed]

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "passed": self.passed,
            "tolerances": self.tolerances,
            "counts": {"total": len(self.cases), "failed": len(self.failed_cases)},
            "cases": [c.to_dict() for c in self.cases],
        }


def versions() -> dict:
    return {
        "phasekit": __version__,
        "numpy": np.__version__,
        "python": platform.python_version(),
        "backend": backend.active_backend(),
    }


def _random_amps(rng, dim):
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def _max_abs(a) -> float:
    return float(np.max(np.abs(a)))


def _unitary_dev(mat) -> float:
    return _max_abs(mat.conj().T @ mat - np.eye(mat.shape[0]))


# ---------------------------------------------------------------- primitives


def suite_primitives(seed: int, tol: dict) -> SuiteReport:
    cases = []
    rng = np.random.default_rng(seed)

    sample_dims = list(range(1, 65))
    worst = {"fourier": 0.0, "translate": 0.0, "phase": 0.0, "reflect": 0.0}
    for m in sample_dims:
        worst["fourier"] = max(worst["fourier"], _unitary_dev(fourier_matrix(m)))
        for p in {0, 1, m // 2, m - 1}:
            worst["translate"] = max(worst["translate"], _unitary_dev(translate_matrix(m, p)))
            worst["phase"] = max(worst["phase"], _unitary_dev(phase_by_value_matrix(m, p)))
            worst["reflect"] = max(worst["reflect"], _unitary_dev(reflect_phase_matrix(m, p)))
    for kind, dev in sorted(worst.items()):
        cases.append(_case(f"unitary/{kind}", dev, tol["unitary"], max_dim=64))

    idents = {
        "phase-from-fourier": 0.0,
        "reflect-from-fourier": 0.0,
        "reflect-hermitian": 0.0,
        "reflect-involution": 0.0,
        "translate-additive": 0.0,
        "phase-additive": 0.0,
        "double-fourier-reflects": 0.0,
    }
    for m in (2, 3, 4, 5, 8, 16):
        f = fourier_matrix(m)
        fh = f.conj().T
        eye = np.eye(m)
        for k in range(m):
            tk_dag = translate_matrix(m, k).conj().T
            idents["phase-from-fourier"] = max(
                idents["phase-from-fourier"],
                _max_abs(phase_by_value_matrix(m, k) - fh @ tk_dag @ f),
            )
            s = reflect_phase_matrix(m, k)
            idents["reflect-from-fourier"] = max(
                idents["reflect-from-fourier"], _max_abs(s - f @ tk_dag @ f)
            )
            idents["reflect-hermitian"] = max(
                idents["reflect-hermitian"], _max_abs(s - s.conj().T)
            )
            idents["reflect-involution"] = max(
                idents["reflect-involution"], _max_abs(s @ s - eye)
            )
        for z1 in range(m):
            for z2 in range(m):
                idents["translate-additive"] = max(
                    idents["translate-additive"],
                    _max_abs(
                        translate_matrix(m, z1) @ translate_matrix(m, z2)
                        - translate_matrix(m, z1 + z2)
                    ),
                )
                idents["phase-additive"] = max(
                    idents["phase-additive"],
                    _max_abs(
                        phase_by_value_matrix(m, z1) @ phase_by_value_matrix(m, z2)
                        - phase_by_value_matrix(m, z1 + z2)
                    ),
                )
        idents["double-fourier-reflects"] = max(
            idents["double-fourier-reflects"],
            _max_abs(f @ f - reflect_phase_matrix(m, 0)),
        )
    for name, dev in sorted(idents.items()):
        cases.append(_case(f"identity/{name}", dev, tol["identity"], dims="2,3,4,5,8,16"))

    sigma_x = np.array([[0, 1], [1, 0]], dtype=np.complex128)
    sigma_z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
    hadamard = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
    cases.append(_case("pauli/translate-is-x", _max_abs(translate_matrix(2, 1) - sigma_x), tol["pauli"]))
    cases.append(_case("pauli/phase-is-z", _max_abs(phase_by_value_matrix(2, 1) - sigma_z), tol["pauli"]))
    cases.append(_case("pauli/fourier-is-hadamard", _max_abs(fourier_matrix(2) - hadamard), tol["pauli"]))

    known = max(
        abs(omega(2, 1) - (-1.0)),
        abs(omega(4, 1) - 1j),
        abs(omega(4, 3) - (-1j)),
        abs(omega(8, 2) - 1j),
    )
    cases.append(_case("omega/known-values", known, tol["pauli"]))
    cases.append(
        _case(
            "omega/exponent-reduction",
            abs(omega(5, 7) - omega(5, 2)) + abs(omega(3, -1) - omega(3, 2)),
            tol["exact"],
        )
    )

    # fast paths against dense application on a three-segment register
    fast = {"fourier": 0.0, "fourier-inverse": 0.0, "translate": 0.0, "phase-by-value": 0.0, "reflect-phase": 0.0}
    for m in (2, 3, 4, 8, 12, 16):
        layout = RegisterLayout((("left", 3), ("mid", m), ("right", 2)))
        state = StateVector(layout, _random_amps(rng, layout.total_dim))
        for op in (
            PrimitiveOp.fourier(m),
            PrimitiveOp.fourier_inverse(m),
            PrimitiveOp.translate(m, m - 1),
            PrimitiveOp.phase_by_value(m, 1),
            PrimitiveOp.reflect_phase(m, m // 2),
        ):
            got = apply_primitive(state, "mid", op)
            ref = apply_on_segment(state, "mid", build(op))
            fast[op.kind] = max(fast[op.kind], _max_abs(got.amps - ref.amps))
    for kind, dev in sorted(fast.items()):
        cases.append(_case(f"fast-path/{kind}", dev, tol["fast_path"], dims="2,3,4,8,12,16"))

    # quantization: frozen values and the phase-error bound
    frozen = quantize(RealFunctionTable(4, np.array([0.0, 0.5, 0.3, 0.999])), 3)
    mism = int(np.sum(frozen.values != np.array([0, 4, 2, 7])))
    cases.append(_case("quantize/frozen-values", mism, tol["exact"], m_bits=3))
    for m_bits in range(1, 11):
        table = RealFunctionTable(64, rng.random(64))
        q = quantize(table, m_bits)
        exact = np.exp(2j * np.pi * table.values)
        approx = omega_powers(q.modulus, 1)[q.values]
        err = _max_abs(approx - exact)
        cases.append(
            _case(
                f"quantize/phase-bound/m{m_bits:02d}",
                err,
                2.0 * np.pi * 2.0 ** (-m_bits),
                domain=64,
            )
        )

    return SuiteReport("primitives", seed, tol, cases)


# -------------------------------------------------------------------- gadget


def suite_gadget(seed: int, tol: dict) -> SuiteReport:
    cases = []
    rng = np.random.default_rng(seed)
    variants = list(GadgetVariant)

    for m in (2, 4, 8, 16):
        ident_dev = {v: 0.0 for v in variants}
        pair_dev = 0.0
        inverse_dev = 0.0
        eye = np.eye(m)
        for k in range(m):
            for z in range(m):
                mats = [gadget_matrix(GadgetPlan(v, k, m), z) for v in variants]
                target = omega(m, k * z) * eye
                for v, g in zip(variants, mats):
                    ident_dev[v] = max(ident_dev[v], _max_abs(g - target))
                for i in range(len(mats)):
                    for j in range(i + 1, len(mats)):
                        pair_dev = max(pair_dev, _max_abs(mats[i] - mats[j]))
                inverse_dev = max(
                    inverse_dev,
                    _max_abs(
                        gadget_matrix(GadgetPlan(GadgetVariant.COMM_A, -k, m), z) @ mats[0] - eye
                    ),
                )
        for v in variants:
            cases.append(
                _case(f"matrix/identity/{v.value}/m{m:02d}", ident_dev[v], tol["identity"])
            )
        cases.append(_case(f"matrix/pairwise/m{m:02d}", pair_dev, tol["pairwise"]))
        cases.append(_case(f"matrix/inverse-pair/m{m:02d}", inverse_dev, tol["identity"]))

        state = StateVector(RegisterLayout((("a", m),)), _random_amps(rng, m))
        state_dev = 0.0
        for k in range(m):
            for z in range(m):
                for v in variants:
                    out = apply_gadget(state, "a", GadgetPlan(v, k, m), z)
                    state_dev = max(
                        state_dev, _max_abs(out.amps - omega(m, k * z) * state.amps)
                    )
        cases.append(_case(f"state/phase/m{m:02d}", state_dev, tol["state"]))

    degenerate = max(
        _max_abs(gadget_matrix(GadgetPlan(v, 0, 1), 0) - np.eye(1)) for v in variants
    )
    cases.append(_case("matrix/degenerate-m01", degenerate, tol["exact"]))

    return SuiteReport("gadget", seed, tol, cases)


# ----------------------------------------------------------- phase-transform


def suite_phase_transform(seed: int, tol: dict) -> SuiteReport:
    cases = []
    rng = np.random.default_rng(seed)
    variants = list(GadgetVariant)
    dims = (2, 4, 8)

    worst_restore = 0.0
    count_dev = 0
    sign_dev = 0
    for i in range(100):
        n = dims[i % 3]
        m = dims[(i // 3) % 3]
        variant = variants[i % 5]
        k = int(rng.integers(0, m))
        table = FunctionTable(n, m, rng.integers(0, m, size=n))
        ctl = _random_amps(rng, n)
        anc = _random_amps(rng, m)
        joint = StateVector(
            RegisterLayout((("c", n), ("a", m))), np.kron(ctl, anc)
        )
        counter = OracleCounter()
        out = phase_transform(joint, "c", "a", table, GadgetPlan(variant, k, m), counter)
        expected = np.kron(ctl * expected_phases(table, k), anc)
        worst_restore = max(worst_restore, _max_abs(out.amps - expected))
        count_dev = max(count_dev, abs(counter.calls - 2))
        if variant is GadgetVariant.S_FORM:
            if counter.signs != [1, 1]:
                sign_dev += 1
        elif sorted(counter.signs) != [-1, 1]:
            sign_dev += 1
    cases.append(_case("restore/max-amp-error", worst_restore, tol["amp"], instances=100))
    cases.append(_case("restore/oracle-calls", count_dev, tol["exact"], expected=2))
    cases.append(_case("restore/oracle-signs", sign_dev, tol["exact"]))

    # segments beyond control and ancilla stay untouched, wherever they sit
    extra_dev = 0.0
    for segs, order in (
        ((("c", 4), ("a", 4), ("w", 3)), "right"),
        ((("w", 3), ("c", 4), ("a", 4)), "left"),
        ((("a", 4), ("w", 3), ("c", 4)), "ancilla-first"),
    ):
        layout = RegisterLayout(segs)
        parts = {name: _random_amps(rng, dim) for name, dim in segs}
        amps = parts[segs[0][0]]
        for name, _ in segs[1:]:
            amps = np.kron(amps, parts[name])
        table = FunctionTable(4, 4, rng.integers(0, 4, size=4))
        out = phase_transform(
            StateVector(layout, amps), "c", "a",
            table, GadgetPlan(GadgetVariant.COMM_A, 3, 4),
        )
        phased = {**parts, "c": parts["c"] * expected_phases(table, 3)}
        expected = phased[segs[0][0]]
        for name, _ in segs[1:]:
            expected = np.kron(expected, phased[name])
        extra_dev = max(extra_dev, _max_abs(out.amps - expected))
    cases.append(_case("restore/extra-segments-untouched", extra_dev, tol["amp"]))

    # transforms with multipliers k1 then k2 compose to k1 + k2
    group_dev = 0.0
    for _ in range(10):
        m = 8
        n = 4
        k1 = int(rng.integers(0, m))
        k2 = int(rng.integers(0, m))
        table = FunctionTable(n, m, rng.integers(0, m, size=n))
        joint = StateVector(
            RegisterLayout((("c", n), ("a", m))),
            np.kron(_random_amps(rng, n), _random_amps(rng, m)),
        )
        two = phase_transform(
            phase_transform(joint, "c", "a", table, GadgetPlan(GadgetVariant.COMM_B, k1, m)),
            "c", "a", table, GadgetPlan(GadgetVariant.COMM_C, k2, m),
        )
        one = phase_transform(joint, "c", "a", table, GadgetPlan(GadgetVariant.COMM_A, k1 + k2, m))
        group_dev = max(group_dev, _max_abs(two.amps - one.amps))
    cases.append(_case("restore/multiplier-additive", group_dev, tol["amp"], instances=10))

    # the Fourier-mode ancilla turns translations into phases
    eigen_dev = 0.0
    for m in (2, 4, 8, 16):
        for k in range(m):
            psi = eigen_ancilla(m, k)
            for z in range(m):
                shifted = apply_primitive(psi, "a", PrimitiveOp.translate(m, z))
                eigen_dev = max(
                    eigen_dev, _max_abs(shifted.amps - omega(m, k * z) * psi.amps)
                )
    cases.append(_case("eigen/translation-relation", eigen_dev, tol["eigen"], dims="2,4,8,16"))

    # single-call pipeline on the prepared ancilla matches the two-call one
    single_dev = 0.0
    single_count_dev = 0
    for i in range(20):
        n = dims[i % 3]
        m = (2, 4, 8, 16)[i % 4]
        k = int(rng.integers(0, m))
        table = FunctionTable(n, m, rng.integers(0, m, size=n))
        ctl = _random_amps(rng, n)
        joint = StateVector(
            RegisterLayout((("c", n), ("a", m))),
            np.kron(ctl, eigen_ancilla(m, k).amps),
        )
        counter = OracleCounter()
        got = phase_transform_initialized(joint, "c", "a", table, k, counter)
        ref = phase_transform(joint, "c", "a", table, GadgetPlan(GadgetVariant.COMM_A, k, m))
        single_dev = max(single_dev, _max_abs(got.amps - ref.amps))
        single_count_dev = max(single_count_dev, abs(counter.calls - 1))
    cases.append(_case("eigen/single-call-match", single_dev, tol["amp"], instances=20))
    cases.append(_case("eigen/single-call-count", single_count_dev, tol["exact"], expected=1))

    # modulus-2 scheme written with dense Pauli factors
    pauli_dev = 0.0
    for n in (2, 4, 8):
        table = FunctionTable(n, 2, rng.integers(0, 2, size=n))
        joint = StateVector(
            RegisterLayout((("c", n), ("a", 2))),
            np.kron(_random_amps(rng, n), _random_amps(rng, 2)),
        )
        sz = np.kron(np.eye(n), np.diag([1.0, -1.0])).astype(np.complex128)
        uf = oracle_matrix(table)
        scheme = sz @ uf @ sz @ uf
        got = phase_transform(joint, "c", "a", table, GadgetPlan(GadgetVariant.COMM_A, 1, 2))
        pauli_dev = max(pauli_dev, _max_abs(got.amps - scheme @ joint.amps))
    cases.append(_case("pauli/composed-scheme", pauli_dev, tol["pauli"], dims="2,4,8"))

    # degenerate corners
    m, n = 4, 4
    table = FunctionTable(n, m, np.full(n, 3))
    joint = StateVector(
        RegisterLayout((("c", n), ("a", m))),
        np.kron(_random_amps(rng, n), _random_amps(rng, m)),
    )
    out = phase_transform(joint, "c", "a", table, GadgetPlan(GadgetVariant.COMM_D, 2, m))
    cases.append(
        _case(
            "corner/constant-table-global-phase",
            _max_abs(out.amps - omega(m, 2 * 3) * joint.amps),
            tol["amp"],
        )
    )
    out = phase_transform(joint, "c", "a", table, GadgetPlan(GadgetVariant.S_FORM, 0, m))
    cases.append(_case("corner/k-zero-identity", _max_abs(out.amps - joint.amps), tol["amp"]))

    return SuiteReport("phase-transform", seed, tol, cases)


# --------------------------------------------------------------------- mixed


def suite_mixed(seed: int, tol: dict) -> SuiteReport:
    cases = []
    rng = np.random.default_rng(seed)

    roundtrip_dev = 0.0
    rank_dev = 0
    order_dev = 0
    for i in range(10):
        dim = int(rng.integers(2, 7))
        rank = int(rng.integers(1, dim + 1))
        rho = random_density(dim, rank, int(rng.integers(0, 2**31)))
        pur = purify(rho)
        back = partial_trace(pur.joint, "ancilla")
        roundtrip_dev = max(roundtrip_dev, _max_abs(back.mat - rho.mat))
        rank_dev = max(rank_dev, abs(pur.rank - rank))
        rank_dev = max(rank_dev, abs(pur.joint.layout.dim("reference") - rank))
        if np.any(np.diff(pur.schmidt_coeffs) > 0):
            order_dev += 1
    cases.append(_case("purify/roundtrip", roundtrip_dev, tol["purify"], instances=10))
    cases.append(_case("purify/reference-rank", rank_dev, tol["exact"]))
    cases.append(_case("purify/coeffs-descending", order_dev, tol["exact"]))

    half = DensityOperator(np.eye(2) / 2)
    cases.append(
        _case(
            "entropy/maximally-mixed-ln2",
            abs(von_neumann_entropy(half) - math.log(2)),
            tol["entropy"],
        )
    )
    pure = DensityOperator(np.diag([1.0, 0.0]))
    cases.append(_case("entropy/pure-zero", von_neumann_entropy(pure), tol["entropy"]))
    cases.append(
        _case(
            "mutual-info/maximally-correlated",
            abs(mutual_information(purify(half).joint, ("ancilla", "reference")) - 2 * math.log(2)),
            tol["mutual_info"],
        )
    )
    product = basis_state(RegisterLayout((("ancilla", 2), ("reference", 2))), (0, 0))
    cases.append(
        _case("mutual-info/product-zero", mutual_information(product, ("ancilla", "reference")), tol["mutual_info"])
    )

    # local unitaries on either side leave mutual information alone
    invariance_dev = 0.0
    for _ in range(5):
        rho = random_density(4, 3, int(rng.integers(0, 2**31)))
        pur = purify(rho)
        before = mutual_information(pur.joint, ("ancilla", "reference"))
        qa, _ = np.linalg.qr(_random_amps(rng, 16).reshape(4, 4))
        qr_dim = pur.joint.layout.dim("reference")
        qr_mat, _ = np.linalg.qr(
            (rng.standard_normal((qr_dim, qr_dim)) + 1j * rng.standard_normal((qr_dim, qr_dim)))
        )
        rotated = apply_on_segment(pur.joint, "ancilla", qa)
        rotated = apply_on_segment(rotated, "reference", qr_mat)
        after = mutual_information(rotated, ("ancilla", "reference"))
        invariance_dev = max(invariance_dev, abs(after - before))
    cases.append(_case("mutual-info/local-unitary-invariance", invariance_dev, tol["mutual_info"], instances=5))

    joint_dev = 0.0
    anc_dev = 0.0
    mi_dev = 0.0
    fid_min = 1.0
    call_dev = 0
    variants = list(GadgetVariant)
    combos = [(m, rank) for m in (2, 4) for rank in range(1, m + 1)]
    instances = 25
    for idx in range(instances):
        m, rank = combos[idx % len(combos)]
        n = (2, 4, 8)[idx % 3]
        k = int(rng.integers(0, m))
        table = FunctionTable(n, m, rng.integers(0, m, size=n))
        ctl = StateVector(RegisterLayout((("c", n),)), _random_amps(rng, n))
        rho = random_density(m, rank, int(rng.integers(0, 2**31)))
        _, report = phase_transform_mixed(
            ctl, rho, table, GadgetPlan(variants[idx % 5], k, m)
        )
        joint_dev = max(joint_dev, report["joint_max_error"])
        anc_dev = max(anc_dev, report["ancilla_max_error"])
        mi_dev = max(mi_dev, report["mutual_info_drift"])
        fid_min = min(fid_min, report["restoration_fidelity"])
        call_dev = max(call_dev, abs(report["oracle_calls"] - 2))
    cases.append(_case("mixed/joint-error", joint_dev, tol["joint"], instances=instances))
    cases.append(_case("mixed/ancilla-error", anc_dev, tol["ancilla"], instances=instances))
    cases.append(_case("mixed/mutual-info-drift", mi_dev, tol["mutual_info"], instances=instances))
    cases.append(_case("mixed/restoration-fidelity", fid_min, 1.0 - 1e-9, direction="ge"))
    cases.append(_case("mixed/oracle-calls", call_dev, tol["exact"], expected=2))

    return SuiteReport("mixed", seed, tol, cases)


# ---------------------------------------------------------------- optimality


def suite_optimality(seed: int, tol: dict) -> SuiteReport:
    cases = []
    for m in range(2, 17):
        for k in range(1, m):
            report = optimality_check(m, k)
            cases.append(
                _case(
                    f"separation/m{m:02d}/k{k:02d}",
                    report["min_separation"],
                    tol["separation"],
                    direction="gt",
                    pairs=report["per_sign"]["+1"]["pairs"],
                )
            )
    try:
        optimality_check(4, 0)
        rejected = 1
    except ValueError:
        rejected = 0
    cases.append(_case("rejects-k-zero", rejected, tol["exact"]))
    return SuiteReport("optimality", seed, tol, cases)


# ---------------------------------------------------------------------- apps


def _balanced_tables(n: int) -> list:
    """All modulus-2 tables on range(n) with equal preimage sizes."""
    from itertools import combinations

    out = []
    for ones in combinations(range(n), n // 2):
        vals = np.zeros(n, dtype=np.int64)
        vals[list(ones)] = 1
        out.append(FunctionTable(n, 2, vals))
    return out


def _ck_reference(table: FunctionTable, params: CKParams) -> float:
    """Exact-phase run of the single-query search, no quantization, no oracle."""
    n = table.domain_size
    u = np.full(n, 1.0 / math.sqrt(n), dtype=np.complex128)
    psi = u * np.exp(1j * params.gamma * table.values)
    psi = psi + (np.exp(1j * params.beta) - 1.0) * u * (u.conj() @ psi)
    probs = np.abs(psi) ** 2
    return float(probs[table.values == 1].sum())


def _ck_quantization_envelope(table: FunctionTable, params: CKParams, m_bits: int) -> float:
    """Provable ceiling on |quantized success - exact success|.

    Each of the two imprinted diagonals differs from its exact counterpart
    by at most the worst per-entry phase gap, the state error adds them, and
    a probability differs from its neighbour by at most twice the state
    error (both norms are 1).
    """
    modulus = 1 << m_bits
    err = 0.0
    delta = np.zeros(table.domain_size)
    delta[params.l] = 1.0
    for base, angle in ((table.values.astype(np.float64), params.gamma), (delta, params.beta)):
        frac = np.mod(angle / (2.0 * math.pi) * base, 1.0)
        frac[frac >= 1.0] = 0.0
        q = np.minimum(np.floor(frac * modulus), modulus - 1)
        err += float(np.max(np.abs(np.exp(2j * np.pi * q / modulus) - np.exp(1j * angle * base))))
    return 2.0 * err


def suite_apps(seed: int, tol: dict) -> SuiteReport:
    cases = []
    rng = np.random.default_rng(seed)

    # constant vs balanced at domain size 4, across pure and mixed ancillas
    tables = [(f"balanced{i}", t, 0.0) for i, t in enumerate(_balanced_tables(4))]
    tables += [
        ("constant0", FunctionTable(4, 2, np.zeros(4, dtype=np.int64)), 1.0),
        ("constant1", FunctionTable(4, 2, np.ones(4, dtype=np.int64)), 1.0),
    ]
    ancillas = [random_state(2, int(rng.integers(0, 2**31))) for _ in range(10)]
    ancillas += [random_density(2, 2, int(rng.integers(0, 2**31))) for _ in range(3)]
    dj_dev = 0.0
    verdict_bad = 0
    indep_dev = 0.0
    call_dev = 0
    fid_min = 1.0
    for name, table, expected in tables:
        dists = []
        for anc in ancillas:
            v = deutsch_jozsa(table, anc)
            dj_dev = max(dj_dev, abs(v.p_zero - expected))
            want = "constant" if expected == 1.0 else "balanced"
            if v.verdict != want:
                verdict_bad += 1
            call_dev = max(call_dev, abs(v.oracle_calls - 2))
            fid_min = min(fid_min, v.ancilla_fidelity)
            dists.append(v.outcome_distribution)
        stacked = np.stack(dists)
        indep_dev = max(indep_dev, _max_abs(stacked - stacked[0]))
    cases.append(_case("dj/p-zero", dj_dev, tol["dj"], tables=len(tables), ancillas=13))
    cases.append(_case("dj/verdicts", verdict_bad, tol["exact"]))
    cases.append(_case("dj/ancilla-independence", indep_dev, tol["independence"]))
    cases.append(_case("dj/oracle-calls", call_dev, tol["exact"], expected=2))
    cases.append(_case("dj/ancilla-restored", fid_min, 1.0 - 1e-9, direction="ge"))

    # iterated search against the closed form
    grover_acct_dev = 0
    for n in (4, 8, 16, 64):
        for t in sorted({1, n // 4, n // 2}):
            marks = rng.choice(n, size=t, replace=False)
            vals = np.zeros(n, dtype=np.int64)
            vals[marks] = 1
            table = FunctionTable(n, 2, vals)
            dev = 0.0
            for iters in range(6):
                res = grover(table, iters, seed=int(rng.integers(0, 2**31)))
                dev = max(dev, abs(res.success_probability - grover_success_probability(n, t, iters)))
                grover_acct_dev = max(
                    grover_acct_dev,
                    abs(res.oracle_calls_marking - 2 * iters),
                    abs(res.oracle_calls_diffusion - 2 * iters),
                )
            cases.append(_case(f"grover/n{n:03d}/t{t:02d}", dev, tol["grover"], iterations="0..5"))
    cases.append(_case("grover/oracle-accounting", grover_acct_dev, tol["exact"]))
    empty = grover(FunctionTable(4, 2, np.zeros(4, dtype=np.int64)), 2)
    cases.append(
        _case(
            "grover/no-solution-note",
            0 if (empty.success_probability == 0.0 and empty.note) else 1,
            tol["exact"],
        )
    )

    # single-query search: quarter marked at the default angles succeeds exactly
    for n in (4, 8, 16):
        t = n // 4
        marks = rng.choice(n, size=t, replace=False)
        vals = np.zeros(n, dtype=np.int64)
        vals[marks] = 1
        table = FunctionTable(n, 2, vals)
        res = ck_single_query(table, CKParams(l=int(rng.integers(0, n))), m_bits=4,
                              seed=int(rng.integers(0, 2**31)))
        cases.append(_case(f"ck/quarter/n{n:03d}", abs(res.success_probability - 1.0), tol["ck"], t=t))
        ref = _ck_reference(table, CKParams())
        cases.append(
            _case(f"ck/m4-vs-exact/n{n:03d}", abs(res.success_probability - ref), tol["quantized"])
        )

    # angles that quantize exactly at 4 bits pin the pipeline to the reference
    n = 8
    vals = np.zeros(n, dtype=np.int64)
    vals[[1, 6]] = 1
    table = FunctionTable(n, 2, vals)
    right = CKParams(gamma=math.pi / 2.0, beta=math.pi / 2.0, l=5)
    res = ck_single_query(table, right, m_bits=4, seed=int(rng.integers(0, 2**31)))
    cases.append(
        _case(
            "ck/right-angles-exact",
            abs(res.success_probability - _ck_reference(table, right)),
            tol["ck"],
        )
    )

    # awkward angles stay inside the provable quantization envelope
    params = CKParams(gamma=2.0, beta=1.0, l=3)
    ref = _ck_reference(table, params)
    for m_bits in (4, 10):
        res = ck_single_query(table, params, m_bits=m_bits, seed=int(rng.integers(0, 2**31)))
        cases.append(
            _case(
                f"ck/awkward-angles-m{m_bits:02d}",
                abs(res.success_probability - ref),
                _ck_quantization_envelope(table, params, m_bits),
            )
        )

    zero = ck_single_query(table, CKParams(gamma=0.0, beta=0.0, l=0), m_bits=3)
    cases.append(
        _case("ck/zero-angles-uniform", abs(zero.success_probability - 2.0 / n), 1e-12)
    )
    cases.append(
        _case(
            "ck/oracle-accounting",
            abs(res.oracle_calls_marking - 2) + abs(res.oracle_calls_diffusion - 2),
            tol["exact"],
        )
    )

    return SuiteReport("apps", seed, tol, cases)


_SUITE_FUNCS = {
    "primitives": suite_primitives,
    "gadget": suite_gadget,
    "phase-transform": suite_phase_transform,
    "mixed": suite_mixed,
    "optimality": suite_optimality,
    "apps": suite_apps,
}


def merged_tolerances(suite: str, overrides: dict | None) -> dict:
    """Apply --tol overrides: plain names hit every suite, dotted names one suite."""
    tol = dict(DEFAULT_TOLERANCES[suite])
    for key, value in (overrides or {}).items():
        if "." in key:
            target, name = key.split(".", 1)
            if target == suite:
                if name not in tol:
                    raise ValueError(f"suite {suite!r} has no tolerance {name!r}")
                tol[name] = value
        elif key in tol:
            tol[key] = value
    return tol


def run_suite(name: str, seed: int, overrides: dict | None = None) -> SuiteReport:
    if name not in _SUITE_FUNCS:
        raise ValueError(f"unknown suite {name!r}; choices: {', '.join(SUITE_NAMES)}")
    return _SUITE_FUNCS[name](seed, merged_tolerances(name, overrides))


def run_verification(names, seed: int, overrides: dict | None = None) -> dict:
    reports = [run_suite(name, seed, overrides) for name in names]
    return {
        "command": "verify",
        "seed": seed,
        "passed": all(r.passed for r in reports),
        "suites": [r.to_dict() for r in reports],
        "versions": versions(),
    }
