"""Emit the bundled case fixtures and power-flow reference solutions.

Pins the four test systems for reproducible dataset generation:
  * VM/VA bus columns are rewritten from the oracle's solved base state
    (reactive limits enforced), as solved case files conventionally are.
  * Branches with no thermal rating get one synthesized from the solved
    base flow (1.35 x apparent flow, rounded up to 5 MVA, floor 10).
  * Generators with no ramp data get RAMP_10 = max(PMAX/10, 1).
  * Per-case voltage limits are widened where the solved base state sits
    within 0.015 p.u. of the stock limit, so the unstressed system is not
    born violating its own operating range.

Run from scripts/: python3 make_fixtures.py
"""

import math
import numpy as np

from case_data import ALL_CASES
from pf_oracle import build_ybus, solve_pf, scaled


def branch_flows(case, vm, va_deg):
    bus = np.array(case["bus"], dtype=float)
    idx = {int(b[0]): i for i, b in enumerate(bus)}
    base = case["baseMVA"]
    V = vm * np.exp(1j * np.deg2rad(va_deg))
    out = []
    for row in case["branch"]:
        f, t = idx[int(row[0])], idx[int(row[1])]
        r, x, b = row[2], row[3], row[4]
        tap = row[8] if row[8] != 0 else 1.0
        shift = np.deg2rad(row[9])
        ys = 1.0 / complex(r, x)
        ybc = 1j * b / 2.0
        T = tap * np.exp(1j * shift)
        if int(row[10]) != 1:
            out.append((0.0, 0.0))
            continue
        i_f = ((ys + ybc) / (tap * tap)) * V[f] + (-ys / np.conj(T)) * V[t]
        i_t = (-ys / T) * V[f] + (ys + ybc) * V[t]
        sf = V[f] * np.conj(i_f) * base
        st = V[t] * np.conj(i_t) * base
        out.append((sf, st))
    return out


def fmt(x):
    if x == int(x) and abs(x) < 1e15:
        return str(int(x))
    return repr(round(x, 10))


def emit_case(case, sol):
    vm, va = sol["vm"], sol["va_deg"]
    flows = branch_flows(case, vm, va)

    vmax_stock = max(b[11] for b in case["bus"])
    vmin_stock = min(b[12] for b in case["bus"])
    vmax = vmax_stock
    vmin = vmin_stock
    if vm.max() > vmax_stock - 0.015:
        vmax = math.ceil((vm.max() + 0.015) * 100) / 100
    if vm.min() < vmin_stock + 0.015:
        vmin = math.floor((vm.min() - 0.015) * 100) / 100

    lines = []
    lines.append(f"function mpc = {case['name']}")
    lines.append(f"% Power flow data, {len(case['bus'])}-bus test system.")
    lines.append("% Solved base-case voltages in the bus table; thermal ratings")
    lines.append("% and ramp rates synthesized from the base solution where the")
    lines.append("% source tables carry none.")
    lines.append("mpc.version = '2';")
    lines.append("mpc.baseMVA = 100;")
    lines.append("")
    lines.append("%% bus data")
    lines.append("%\tbus_i\ttype\tPd\tQd\tGs\tBs\tarea\tVm\tVa\tbaseKV\tzone\tVmax\tVmin")
    lines.append("mpc.bus = [")
    for i, b in enumerate(case["bus"]):
        row = list(b)
        row[7] = round(float(vm[i]), 4)
        row[8] = round(float(va[i]), 3)
        row[11] = vmax
        row[12] = vmin
        lines.append("\t" + "\t".join(fmt(v) for v in row) + ";")
    lines.append("];")
    lines.append("")
    lines.append("%% generator data")
    lines.append("%\tbus\tPg\tQg\tQmax\tQmin\tVg\tmBase\tstatus\tPmax\tPmin\tPc1\tPc2\tQc1min\tQc1max\tQc2min\tQc2max\tramp_agc\tramp_10\tramp_30\tramp_q\tapf")
    lines.append("mpc.gen = [")
    for g in case["gen"]:
        ramp10 = max(round(g[8] / 10.0, 1), 1.0)
        row = list(g) + [0, 0, 0, 0, 0, 0, 0, ramp10, 0, 0, 0]
        lines.append("\t" + "\t".join(fmt(v) for v in row) + ";")
    lines.append("];")
    lines.append("")
    lines.append("%% branch data")
    lines.append("%\tfbus\ttbus\tr\tx\tb\trateA\trateB\trateC\tratio\tangle\tstatus")
    lines.append("mpc.branch = [")
    for k, br in enumerate(case["branch"]):
        row = list(br)
        if row[5] == 0:
            sf, st = flows[k]
            loading = max(abs(sf), abs(st))
            rate = max(5 * math.ceil(1.35 * loading / 5.0), 10)
            row[5] = rate
            row[6] = rate
            row[7] = rate
        lines.append("\t" + "\t".join(fmt(v) for v in row) + ";")
    lines.append("];")
    lines.append("")
    lines.append("%% generator cost data")
    lines.append("%\tmodel\tstartup\tshutdown\tn\tc2\tc1\tc0")
    lines.append("mpc.gencost = [")
    for gc in case["gencost"]:
        lines.append("\t" + "\t".join(fmt(v) for v in gc) + ";")
    lines.append("];")
    lines.append("")
    return "\n".join(lines)


def emit_reference(case, sol, diverged_at):
    lines = []
    lines.append(f"# reference power-flow solution: {case['name']}")
    lines.append("# produced by scripts/pf_oracle.py (scipy MINPACK hybr on the")
    lines.append("# mismatch equations, generator reactive limits enforced)")
    lines.append(f"# max_mismatch_pu {sol['mismatch']:.3e}")
    lines.append(f"# diverges_at_load_scale {diverged_at}")
    lines.append(f"p_slack_mw {sol['p_slack_mw']:.6f}")
    sw = " ".join(f"{b}:{q:.1f}" for b, q in sol["switched"])
    lines.append(f"pv_pq_switches {sw if sw else 'none'}")
    lines.append("# bus vm_pu va_deg qg_mvar")
    for i, b in enumerate(case["bus"]):
        lines.append(f"{int(b[0])} {sol['vm'][i]:.8f} {sol['va_deg'][i]:.8f} "
                     f"{sol['qg_mvar'][i]:.6f}")
    return "\n".join(lines) + "\n"


def main():
    import os
    here = os.path.dirname(os.path.abspath(__file__))
    cases_dir = os.path.join(here, "..", "data", "cases")
    ref_dir = os.path.join(here, "..", "data", "reference")
    os.makedirs(cases_dir, exist_ok=True)
    os.makedirs(ref_dir, exist_ok=True)

    for case in ALL_CASES:
        sol = solve_pf(case, enforce_q_limits=True)
        assert sol["converged"], case["name"]
        assert sol["mismatch"] < 1e-9, (case["name"], sol["mismatch"])

        s20 = solve_pf(scaled(case, 20.0), enforce_q_limits=True)
        assert not s20["converged"], f"{case['name']} unexpectedly solves at 20x"

        text = emit_case(case, sol)
        path = os.path.join(cases_dir, f"{case['name']}.m")
        with open(path, "w") as f:
            f.write(text)

        ref = emit_reference(case, sol, "20x")
        with open(os.path.join(ref_dir, f"{case['name']}_solution.txt"), "w") as f:
            f.write(ref)
        print(f"{case['name']}: vm in [{sol['vm'].min():.4f}, {sol['vm'].max():.4f}], "
              f"p_slack {sol['p_slack_mw']:.2f} MW, "
              f"switches {len(sol['switched'])}")


if __name__ == "__main__":
    main()
