"""Independent AC power-flow oracle.

Builds the nodal admittance matrix from MATPOWER-style arrays and solves the
mismatch equations with scipy's MINPACK hybr root finder (trust-region dogleg,
numerical Jacobian) -- a solution path deliberately different from the C++
Newton-Raphson implementation it is used to check.

Generator reactive limits are enforced MATPOWER-style: solve, convert the
worst violating PV bus to PQ at its binding limit, re-solve, repeat.
"""

import numpy as np
from scipy.optimize import root

PQ, PV, SLACK = 1, 2, 3


def build_ybus(case):
    bus = np.array(case["bus"], dtype=float)
    branch = np.array(case["branch"], dtype=float)
    base = case["baseMVA"]
    n = bus.shape[0]
    idx = {int(b[0]): i for i, b in enumerate(bus)}
    Y = np.zeros((n, n), dtype=complex)
    for row in branch:
        if int(row[10]) != 1:
            continue
        f, t = idx[int(row[0])], idx[int(row[1])]
        r, x, b = row[2], row[3], row[4]
        tap = row[8] if row[8] != 0 else 1.0
        shift = np.deg2rad(row[9])
        ys = 1.0 / complex(r, x)
        ybc = 1j * b / 2.0
        T = tap * np.exp(1j * shift)
        Y[f, f] += (ys + ybc) / (tap * tap)
        Y[t, t] += ys + ybc
        Y[f, t] += -ys / np.conj(T)
        Y[t, f] += -ys / T
    for i, row in enumerate(bus):
        Y[i, i] += complex(row[4], row[5]) / base
    return Y


def solve_pf(case, enforce_q_limits=True, start="case", tol=1e-11):
    """Returns dict with vm, va (deg), converged flag, bus qg, slack p."""
    bus = np.array(case["bus"], dtype=float)
    gen = np.array(case["gen"], dtype=float)
    base = case["baseMVA"]
    n = bus.shape[0]
    idx = {int(b[0]): i for i, b in enumerate(bus)}
    Y = build_ybus(case)

    btype = bus[:, 1].astype(int).copy()
    pinj = -bus[:, 2] / base
    qinj = -bus[:, 3] / base
    vset = np.ones(n)
    for row in gen:
        if int(row[7]) != 1:
            continue
        i = idx[int(row[0])]
        pinj[i] += row[1] / base
        if btype[i] == PQ:
            qinj[i] += row[2] / base
        vset[i] = row[5]

    # per-bus reactive capability for limit enforcement
    qmin = np.full(n, -np.inf)
    qmax = np.full(n, np.inf)
    for row in gen:
        if int(row[7]) != 1:
            continue
        i = idx[int(row[0])]
        if np.isinf(qmin[i]):
            qmin[i], qmax[i] = 0.0, 0.0
        qmin[i] += row[4] / base
        qmax[i] += row[3] / base

    if start == "flat":
        vm0 = np.where(btype != PQ, vset, 1.0)
        va0 = np.zeros(n)
    else:
        vm0 = np.where(btype != PQ, vset, bus[:, 7])
        va0 = np.deg2rad(bus[:, 8])

    def run(btyp, qfix, vm_init, va_init):
        nonslack = np.where(btyp != SLACK)[0]
        pq = np.where(btyp == PQ)[0]

        def mismatch(x):
            va = va_init.copy()
            vm = vm_init.copy()
            va[nonslack] = x[: len(nonslack)]
            vm[pq] = x[len(nonslack):]
            V = vm * np.exp(1j * va)
            S = V * np.conj(Y @ V)
            dp = pinj[nonslack] - S.real[nonslack]
            dq = qfix[pq] - S.imag[pq]
            return np.concatenate([dp, dq])

        x0 = np.concatenate([va_init[nonslack], vm_init[pq]])
        sol = root(mismatch, x0, method="hybr", tol=tol)
        va = va_init.copy()
        vm = vm_init.copy()
        va[nonslack] = sol.x[: len(nonslack)]
        vm[pq] = sol.x[len(nonslack):]
        ok = sol.success and np.max(np.abs(mismatch(sol.x))) < 1e-8
        return ok, vm, va

    btyp = btype.copy()
    qfix = qinj.copy()
    vm, va = vm0.copy(), va0.copy()
    switched = []
    for _ in range(n + 1):
        ok, vm, va = run(btyp, qfix, vm, va)
        if not ok:
            return {"converged": False, "switched": switched}
        if not enforce_q_limits:
            break
        V = vm * np.exp(1j * va)
        S = V * np.conj(Y @ V)
        qg = S.imag + bus[:, 3] / base  # generation needed at each bus
        worst, wviol = -1, 1e-7
        for i in np.where(btyp == PV)[0]:
            viol = max(qg[i] - qmax[i], qmin[i] - qg[i])
            if viol > wviol:
                worst, wviol = i, viol
        if worst < 0:
            break
        lim = qmax[worst] if qg[worst] > qmax[worst] else qmin[worst]
        btyp[worst] = PQ
        qfix[worst] = lim - bus[worst, 3] / base
        switched.append((int(bus[worst, 0]), lim * base))

    V = vm * np.exp(1j * va)
    S = V * np.conj(Y @ V)
    qg = np.where(btype != PQ, S.imag * base + bus[:, 3], 0.0)
    slack = np.where(btype == SLACK)[0]
    p_slack = float(np.sum(S.real[slack] * base + bus[slack, 2]))
    return {
        "converged": True,
        "vm": vm,
        "va_deg": np.rad2deg(va),
        "qg_mvar": qg,
        "p_slack_mw": p_slack,
        "switched": switched,
        "mismatch": float(np.max(np.abs((V * np.conj(Y @ V) - (pinj + 1j * qinj))[btype == PQ]))),
    }


def scaled(case, factor):
    import copy
    c = copy.deepcopy(case)
    for b in c["bus"]:
        b[2] *= factor
        b[3] *= factor
    return c


if __name__ == "__main__":
    from case_data import ALL_CASES
    for case in ALL_CASES:
        bus = np.array(case["bus"], dtype=float)
        r_noq = solve_pf(case, enforce_q_limits=False)
        r_q = solve_pf(case, enforce_q_limits=True)
        name = case["name"]
        if not r_q["converged"]:
            print(name, "DID NOT CONVERGE")
            continue
        has_ref = np.any(bus[:, 8] != 0)
        if has_ref:
            dv = np.max(np.abs(r_noq["vm"] - bus[:, 7]))
            da = np.max(np.abs(r_noq["va_deg"] - bus[:, 8]))
            print(f"{name}: transcription check (no qlim): max|dVm|={dv:.4f} "
                  f"max|dVa|={da:.3f} deg")
        dq = np.max(np.abs(r_q["vm"] - r_noq["vm"]))
        print(f"{name}: qlim switched={r_q['switched']} effect on vm={dq:.5f} "
              f"p_slack={r_q['p_slack_mw']:.2f} MW")
        r20 = solve_pf(scaled(case, 20.0), enforce_q_limits=True)
        print(f"{name}: 20x load converged={r20['converged']}")
