"""Theorem-level verification suites over catalogs of instances.

Everything here reduces a statement about modules over the skew ring to an
exact finite computation and reports pass/fail per instance; the CLI `check`
command and the acceptance tests both drive these.
"""
from __future__ import annotations

import random

import numpy as np

from .duality import build_duality_context, check_duality_identities
from .errors import BudgetError
from .fmodule import LeftFModule, RightFModule, _FModule
from .generators import InstanceCatalog, sampled_modules
from .linalg import Subspace
from .report import Report


def stabilization_bound(M: RightFModule) -> tuple[int, bool]:
    """Bound on the image-chain stabilization index from the reduction pipeline.

    Alternates quotienting by the stable image and by the eventual
    annihilator; each step drops dimension, and a nonzero module with both
    parts trivial would contradict the stabilization theorem (reported via
    the flag rather than raised).
    """
    if M.is_zero():
        return 0, True
    stable, _ = M.stable_image()
    if not stable.is_zero():
        bound, ok = stabilization_bound(M.mod_stable_image())
        return bound, ok
    torsion, index = M.eventual_annihilator()
    if not torsion.is_zero():
        bound, ok = stabilization_bound(M.mod_eventual_annihilator())
        return bound + index, ok
    # both reductions trivial: the module must already be zero
    return 0, M.is_zero()


def check_stabilization(name: str, M: RightFModule, report: Report) -> None:
    """Direct image-chain stabilization versus the reduction pipeline."""
    e = M.divisibility_exponent()
    x = M.x_action
    constant_on = (x**e).image() == (x ** (e + 1)).image() == (x ** (e + 2)).image()
    bound, pipeline_ok = stabilization_bound(M)
    report.add(
        "image_chain_stabilizes",
        "the chain of images of powers of x stabilizes and stays constant",
        name,
        constant_on,
    )
    report.add(
        "stabilization_pipeline",
        "the reduction pipeline terminates and bounds the direct stabilization index",
        name,
        pipeline_ok and e <= bound,
        f"direct {e}, pipeline bound {bound}" if not (pipeline_ok and e <= bound) else "",
    )


def check_uniform_torsion_bound(name: str, H: LeftFModule, report: Report) -> None:
    """One exponent kills all x-torsion; exhaustive at small scale."""
    e = H.torsion_exponent()
    x = H.x_action
    ok = (x**e).kernel() == (x ** (e + 1)).kernel() == (x ** (e + 2)).kernel()
    if e > 0:
        ok = ok and (x ** (e - 1)).kernel() != (x**e).kernel()
    if H.algebra.p**H.dim <= 1 << 12:
        killer = x**e
        for v in Subspace.full(H.algebra.p, H.dim).vectors():
            torsion = any(
                not H.apply_x_power(v, j).any() for j in range(1, H.dim + 1)
            )
            if torsion and killer.apply(v).any():
                ok = False
                break
    report.add(
        "uniform_torsion_exponent",
        "every x-torsion element is killed by one uniform power of x",
        name,
        ok,
    )


def check_square_multiplier(name: str, M: RightFModule, report: Report) -> None:
    """If multiplication by s lands in Mx, its square lands in every Mx^k."""
    A = M.algebra
    if A.p**A.dim > 1 << 10 or M.is_zero():
        return
    image = M.x_action.image()
    x = M.x_action
    ok = True
    witnesses = 0
    for s in A.elements():
        rs = M.rho(s)
        if all(image.contains(col) for col in rs.data.T):
            witnesses += 1
            s2 = M.rho(A.mul(s, s))
            for k in range(1, M.dim + 2):
                imk = (x**k).image()
                if not all(imk.contains(col) for col in s2.data.T):
                    ok = False
                    break
        if not ok:
            break
    report.add(
        "square_multiplier_descends",
        "an element moving the module into Mx has its square move it into every Mx^k",
        name,
        ok,
        f"{witnesses} applicable elements" if ok else "",
    )


def check_localization(name: str, M: RightFModule, report: Report) -> None:
    """Localizing commutes with multiplying by powers of x, per idempotent factor."""
    A = M.algebra
    try:
        decomp = A.local_components()
    except BudgetError:
        return
    for idx in range(len(decomp.components)):
        local = M.localize(idx)
        eps = decomp.idempotents[idx]
        proj = M.rho(eps)
        part = proj.image()
        ok = True
        for k in range(1, M.dim + 2):
            # project M x^k into the factor and compare with (local) x^k
            projected = Subspace.from_vectors(
                A.p, M.dim, [proj.apply(col) for col in (M.x_action**k).data.T]
            )
            local_im = (local.x_action**k).image()
            lifted = Subspace.from_vectors(
                A.p,
                M.dim,
                [
                    (vec @ part.basis) % A.p if part.dim else np.zeros(M.dim, dtype=np.int64)
                    for vec in local_im.basis
                ],
            )
            if projected != lifted:
                ok = False
                break
        # the fraction rule: for units s of the factor, dividing by s commutes
        # with the x-action as ( m/s ) x = m s^(p-1) x / s
        comp = decomp.components[idx]
        if ok and comp.p**comp.dim <= 1 << 10:
            for s in comp.units():
                rs = local.rho(s)
                rs_inv = rs.inverse()
                s_pow = comp.power(s, comp.p - 1)
                lhs = rs_inv @ local.x_action @ local.rho(s_pow)
                rhs = local.x_action @ rs_inv
                if lhs != rhs:
                    ok = False
                    break
        report.add(
            "localization_commutes",
            "inverting everything outside a maximal ideal commutes with the x-action",
            f"{name}, component {idx}",
            ok,
        )


def module_suite(
    ctx,
    name: str,
    module: _FModule,
    rng: random.Random,
    report: Report,
    submodule_budget: int,
) -> None:
    """All per-module checks: duality identities plus the theorem suites."""
    inner = check_duality_identities(
        ctx, [(name, module)], rng, submodule_budget=submodule_budget
    )
    report.extend(inner)
    if module.side == "right":
        check_stabilization(name, module, report)
        check_square_multiplier(name, module, report)
        check_localization(name, module, report)
    else:
        check_uniform_torsion_bound(name, module, report)


def run_catalog_checks(
    catalog: InstanceCatalog,
    seed: int = 0,
    instances_per_algebra: int = 4,
) -> Report:
    """Validate a catalog and run every suite over it plus random instances."""
    report = Report()
    submodule_budget = catalog.budgets.get("submodule", 1 << 10)
    contexts: dict[str, object] = {}
    for alg_name, A in sorted(catalog.algebras.items()):
        A.validate()
        contexts[alg_name] = build_duality_context(A)
        report.add(
            "duality_context",
            "the dualizing module and its bimodule isomorphism exist and validate",
            alg_name,
            True,
        )
    rng = random.Random(seed)
    for mod_name, (alg_name, module) in sorted(catalog.modules.items()):
        module.validate()
        module_suite(
            contexts[alg_name], mod_name, module, rng, report, submodule_budget
        )
    for ideal_name, (alg_name, ideal) in sorted(catalog.ideals.items()):
        closure, exponent = ideal.frobenius_closure()
        again, _ = closure.frobenius_closure()
        steps = 0
        while ideal.algebra.p**steps < exponent:
            steps += 1
        ok = (
            ideal.space <= closure.space
            and again.space == closure.space
            and closure.frobenius_power(steps) == ideal.frobenius_power(steps)
        )
        report.add(
            "frobenius_closure_idempotent",
            "the Frobenius closure contains the ideal, is idempotent, and its "
            "test exponent works",
            ideal_name,
            ok,
        )
    for index, (alg_name, A) in enumerate(sorted(catalog.algebras.items())):
        samples = sampled_modules(
            A, seed=seed + index, per_side=instances_per_algebra, extras=False
        )
        for sub_name, module in samples:
            module_suite(
                contexts[alg_name],
                f"{alg_name}/{sub_name}",
                module,
                rng,
                report,
                submodule_budget,
            )
    return report
