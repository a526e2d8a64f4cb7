#!/usr/bin/env python3
"""Fluctuation profile near an avoided crossing (J_l = 5, J_c = 3).

With unequal leg and diagonal couplings the rung-triplet number is no
longer conserved and level repulsion replaces true crossings.  Running the
reduction flow at a coupling inside the avoided-crossing region, the
percentage change p(i) of each tracked level over the last 10 eliminations
stays small down to N around 200 and grows below - the flow loses
stability much earlier than at a first-order point.

Runs a ~800-step flow; takes on the order of a minute.
"""
import os

from ladderflow import SU2, CouplingSet, fluctuation_p, run_flow

OUT = os.path.join(os.path.dirname(__file__), "output")
os.makedirs(OUT, exist_ok=True)

couplings = CouplingSet(J_t=6.6891, J_l=5.0, J_c=3.0)
print("running the reduction flow from N = 924 down to N = 100 ...")
traj = run_flow(SU2, 6, couplings, N_min=100, seed=0)

K = 10
profile = []
for r in traj.records:
    if r.N - K >= 100:
        profile.append((r.N, [fluctuation_p(traj, i, r.N, K)
                              for i in (1, 2, 3, 4)]))

print("\n   N     p1(%)    p2(%)    p3(%)    p4(%)")
for N, ps in profile:
    if N % 50 == 0:
        print(f"  {N:4d}  " + "  ".join(f"{p:7.3f}" for p in ps))

stable = [N for N, ps in profile if max(ps) < 2.0]
unstable = [N for N, ps in profile if max(ps) >= 2.0]
print(f"\nall levels quiet (max p < 2%) down to N = {min(stable)}")
if unstable:
    print(f"first dimension with p >= 2%: N = {max(unstable)}")

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:
    print("matplotlib not available; skipping the figure")
    raise SystemExit(0)

fig, ax = plt.subplots(figsize=(6, 4))
ns = [N for N, _ in profile]
for i in range(4):
    ax.plot(ns, [ps[i] for _, ps in profile], label=f"p{i+1}")
ax.axhline(2.0, color="gray", ls=":")
ax.set_xlabel("Hilbert-space dimension N")
ax.set_ylabel("level fluctuation p(i) [%]")
ax.invert_xaxis()
ax.legend()
fig.tight_layout()
path = os.path.join(OUT, "fluctuations_jl5_jc3.png")
fig.savefig(path, dpi=150)
print(f"wrote {path}")
