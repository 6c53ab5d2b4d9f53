#!/usr/bin/env python3
"""Independent straight-line reimplementation of the N-1 reservoir sweep.

Shares no code with the C++ engine. The disruption cascade is a naive
"resolve the lowest-id imbalanced node until nothing changes" loop, the
LP stages go through HiGHS (scipy.optimize.linprog), and the equalizing QP
is solved with cvxpy and then polished on its active set with numpy.

Usage: sweep_oracle.py NETWORK.json [--reservoir NAME] [--check VALUE]
Prints per-scenario ratios and the unweighted mean, 17 significant digits.
"""
import argparse
import json
import sys

import cvxpy as cp
import numpy as np
from scipy.optimize import linprog

EPS = 1e-6


def load(path):
    doc = json.load(open(path))
    nodes = sorted(doc["nodes"], key=lambda d: d["id"])
    edges = sorted(doc["edges"], key=lambda d: d["id"])
    net = {
        "names": [d["name"] for d in nodes],
        "imax": np.array([float(d["max_inlet"]) for d in nodes]),
        "rmax": np.array([float(d["reservoir_capacity"]) for d in nodes]),
        "cmax": np.array([float(d["nominal_consumption"]) for d in nodes]),
        "tail": [d["from"] for d in edges],
        "head": [d["to"] for d in edges],
        "cap": np.array([float(d["capacity"]) for d in edges]),
    }
    nom_nodes = {d["id"]: d for d in doc["nom"]["nodes"]}
    nom_edges = {d["id"]: d for d in doc["nom"]["edges"]}
    n, m = len(nodes), len(edges)
    nom = {
        "I": np.array([float(nom_nodes[j]["inlet"]) for j in range(n)]),
        "R": np.zeros(n),
        "C": np.array([float(nom_nodes[j]["consumption"]) for j in range(n)]),
        "f": np.array([float(nom_edges[i]["flow"]) for i in range(m)]),
    }
    return net, nom


def residual(net, st, j):
    inflow = sum(st["f"][i] for i in range(len(net["cap"])) if net["head"][i] == j)
    outflow = sum(st["f"][i] for i in range(len(net["cap"])) if net["tail"][i] == j)
    return inflow + st["I"][j] + st["R"][j] - st["C"][j] - outflow


def disrupted(net, nom, failed_edge):
    st = {k: v.copy() for k, v in nom.items()}
    cap = net["cap"].copy()
    cap[failed_edge] = 0.0
    st["f"][failed_edge] = min(st["f"][failed_edge], cap[failed_edge])
    m = len(cap)
    while True:
        bad = [j for j in range(len(net["names"])) if abs(residual(net, st, j)) > EPS]
        if not bad:
            return st, cap
        j = bad[0]
        r = residual(net, st, j)
        ins = [i for i in range(m) if net["head"][i] == j]
        outs = [i for i in range(m) if net["tail"][i] == j]
        if r > 0:
            supply = st["I"][j] + st["R"][j] + sum(st["f"][i] for i in ins)
            k = (supply - r) / supply
            st["I"][j] *= k
            st["R"][j] *= k
            for i in ins:
                st["f"][i] *= k
        else:
            avail = st["I"][j] + st["R"][j] + sum(st["f"][i] for i in ins)
            st["C"][j] = min(st["C"][j], avail)
            rest = avail - st["C"][j]
            tot = sum(st["f"][i] for i in outs)
            for i in outs:
                st["f"][i] = st["f"][i] * rest / tot if tot > 0 else 0.0


def reachable(net, free, sources, outage):
    seen = set(sources)
    stack = list(sources)
    while stack:
        u = stack.pop()
        for i in range(len(free)):
            if net["tail"][i] == u and free[i] > EPS and net["head"][i] not in seen:
                seen.add(net["head"][i])
                stack.append(net["head"][i])
    return sorted(j for j in seen if outage[j] > EPS)


def restore(net, base, nom, cap, src_bound):
    n, m = len(net["names"]), len(cap)
    outage = np.maximum(nom["C"] - base["C"], 0.0)
    free = np.maximum(cap - base["f"], 0.0)
    sources = [j for j in range(n) if src_bound[j] > EPS]
    reach = reachable(net, free, sources, outage)
    cub = np.zeros(n)
    for j in reach:
        cub[j] = outage[j]
    nv = 2 * n + m
    # x = (s, c, f); conservation: s_j - c_j + in_j - out_j = 0
    A = np.zeros((n, nv))
    for j in range(n):
        A[j, j] = 1.0
        A[j, n + j] = -1.0
    for i in range(m):
        A[net["head"][i], 2 * n + i] += 1.0
        A[net["tail"][i], 2 * n + i] -= 1.0
    lb = np.zeros(nv)
    ub = np.concatenate([src_bound, cub, free])
    zero = np.zeros(n)
    if not reach:
        return zero, zero, np.zeros(m)
    obj1 = np.concatenate([np.zeros(n), -np.ones(n), np.zeros(m)])
    r1 = linprog(obj1, A_eq=A, b_eq=np.zeros(n), bounds=list(zip(lb, ub)), method="highs")
    assert r1.status == 0, r1.message
    total = -r1.fun
    if total <= 1e-12:
        return zero, zero, np.zeros(m)

    x = cp.Variable(nv)
    chain = [x[n + reach[k]] - x[n + reach[k + 1]] for k in range(len(reach) - 1)]
    objective = cp.sum_squares(cp.hstack(chain)) if chain else cp.Constant(0.0)
    cons = [A @ x == 0, x >= lb, x <= ub, cp.sum(x[n:2 * n]) == total]
    cp.Problem(cp.Minimize(objective), cons).solve(solver=cp.CLARABEL)
    c2 = polish(x.value, A, lb, ub, n, reach, total)

    lb3, ub3 = lb.copy(), ub.copy()
    lb3[n:2 * n] = c2
    ub3[n:2 * n] = c2
    obj3 = np.concatenate([np.zeros(2 * n), np.ones(m)])
    r3 = linprog(obj3, A_eq=A, b_eq=np.zeros(n), bounds=list(zip(lb3, ub3)), method="highs")
    assert r3.status == 0, r3.message
    x3 = r3.x
    return x3[:n], x3[n:2 * n], x3[2 * n:]


def polish(xv, A, lb, ub, n, reach, total):
    """Re-solve the equalizing QP exactly on the active set found by the IPM."""
    nv = len(xv)
    tol = 1e-6
    fixed = {}
    for k in range(nv):
        if ub[k] - lb[k] <= 1e-12 or xv[k] - lb[k] <= tol:
            fixed[k] = lb[k]
        elif ub[k] - xv[k] <= tol:
            fixed[k] = ub[k]
    free = [k for k in range(nv) if k not in fixed]
    H = np.zeros((nv, nv))
    for a, b in zip(reach, reach[1:]):
        ia, ib = n + a, n + b
        H[ia, ia] += 2
        H[ib, ib] += 2
        H[ia, ib] -= 2
        H[ib, ia] -= 2
    Aeq = np.vstack([A, np.concatenate([np.zeros(n), np.ones(n), np.zeros(nv - 2 * n)])])
    beq = np.concatenate([np.zeros(A.shape[0]), [total]])
    xf = np.array([fixed.get(k, 0.0) for k in range(nv)])
    Af = Aeq[:, free]
    rhs = beq - Aeq @ xf
    Hf = H[np.ix_(free, free)]
    p = Af.shape[0]
    K = np.block([[Hf, Af.T], [Af, np.zeros((p, p))]])
    sol = np.linalg.lstsq(K, np.concatenate([np.zeros(len(free)), rhs]), rcond=None)[0]
    x = xf.copy()
    x[free] = sol[: len(free)]
    c = x[n:2 * n]
    if np.abs(Aeq @ x - beq).max() > 1e-9 or abs(c.sum() - total) > 1e-9:
        print("warning: polish failed, keeping interior-point value", file=sys.stderr)
        return xv[n:2 * n]
    return c


def scenario(net, nom, e, reservoir):
    n = len(net["names"])
    dom, cap = disrupted(net, nom, e)
    s, c, f = restore(net, dom, nom, cap, np.maximum(net["imax"] - dom["I"], 0.0))
    rrom = {"I": dom["I"] + s, "R": dom["R"].copy(), "C": dom["C"] + c, "f": dom["f"] + f}
    rb = np.zeros(n)
    rb[reservoir] = net["rmax"][reservoir]
    s2, c2, f2 = restore(net, rrom, nom, cap, rb)
    raom_total = rrom["C"].sum() + c2.sum()
    outage = nom["C"].sum() - rrom["C"].sum()
    if outage <= EPS:
        return None
    return (raom_total - rrom["C"].sum()) / outage


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("network")
    ap.add_argument("--reservoir", default=None)
    ap.add_argument("--check", type=float, default=None)
    args = ap.parse_args()
    net, nom = load(args.network)
    reservoirs = [j for j in range(len(net["names"])) if net["rmax"][j] > 0]
    if args.reservoir is not None:
        reservoirs = [net["names"].index(args.reservoir)]
    status = 0
    for r in reservoirs:
        ratios = []
        for e in range(len(net["cap"])):
            ratio = scenario(net, nom, e, r)
            shown = "excluded" if ratio is None else "%.17g" % ratio
            print("reservoir %s edge %d ratio %s" % (net["names"][r], e, shown))
            if ratio is not None:
                ratios.append(ratio)
        mean = sum(ratios) / len(ratios)
        print("reservoir %s mean %.17g over %d scenarios" % (net["names"][r], mean, len(ratios)))
        if args.check is not None and abs(mean - args.check) > 1e-9:
            print("MISMATCH: expected %.17g" % args.check, file=sys.stderr)
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
