#!/usr/bin/env python3
"""Smoke tests for the sepball python module."""
import math

import sepball

failures = []


def check(name, cond):
    print(f"[{'ok' if cond else 'FAIL'}] {name}")
    if not cond:
        failures.append(name)


check("version", isinstance(sepball.__version__, str))

# radius table
rows = sepball.rho_table(5)
check("rho_3^2 = 16/19", rows[0]["rho_sq"] == (16, 19))
check("rho_4^2 = 32/53", rows[1]["rho_sq"] == (32, 53))
check("improvement 20/19", rows[0]["sq_ratio"] == (20, 19))
check("rho_3 value", abs(rows[0]["rho"] - math.sqrt(16 / 19)) < 1e-12)

# inclusion radii
check("inclusion radius 1/sqrt(3)",
      abs(sepball.inclusion_radius(4, 4, 1, 1) - 1 / math.sqrt(3)) < 1e-14)
check("exact 5/27", sepball.inclusion_radius_sq(16, 4, (1, 3), (5, 3)) == (5, 27))

# parameter conversions and the 3-qubit chain
rho = sepball.cone_to_ball_param(math.sqrt(2 / 17))
check("chain to sqrt(16/19)", abs(math.sqrt(8) * rho - math.sqrt(16 / 19)) < 1e-12)

# extremal element of the triple-ball polar
w, x = sepball.extremal_element()
norm_sq = sum(v * v for plane in w for row in plane for v in row)
check("extremal norm sqrt(7)", norm_sq == 7.0)
value, a, b, c = sepball.injective_norm(w, restarts=32, seed=3)
check("extremal injective norm 1", abs(value - 1.0) < 1e-9)
check("polar margin of 1.01 w", sepball.polar_margin(
    [[[1.01 * v for v in row] for row in plane] for plane in w], 32, 4) < -1e-3)

# pencil bound
check("pencil bound 7", sepball.pencil_norm_bound(3, 3, 0.0) == 7.0)
m1 = [[1, 0, 0], [0, -1, 0], [0, 0, -1]]
m2 = [[0, -1, 0], [-1, 0, 0], [0, 0, 0]]
m3 = [[0, 0, -1], [0, 0, 0], [-1, 0, 0]]
zero = [[0.0] * 3 for _ in range(3)]
margin, argmax = sepball.pencil_margin([0, 0, 0], [zero, m1, m2, m3], restarts=16, seed=5)
check("extremal pencil margin 0", abs(margin) < 1e-9)

# block spectrum
spectrum = sepball.block_spectrum(3.0, 1.0, [[2, 0], [0, 1]])
check("block spectrum", abs(spectrum[0] - (2 + math.sqrt(5))) < 1e-12)

# dual-cone calibration and the inequality families
d = sepball.calibrate_dual([[[1.0 if (i, j, k) == (1, 1, 1) else 0.0 for k in range(4)]
                             for j in range(4)] for i in range(4)], restarts=32, seed=6)
check("calibration shift 1", abs(d["shift"] - 1.0) < 1e-9)
terms = sepball.inequality_suite(d["tensor"])
check("inequalities hold", all(t["margin"] >= -1e-9 for t in terms))
check("tail mass bound present", any(t["rhs"] == 8.5 for t in terms))

# qubit states
n = 8
re = [1.0 if i == j else 0.0 for i in range(n) for j in range(n)]
im = [0.0] * (n * n)
coords = sepball.to_pauli(3, re, im)
check("pauli identity", abs(coords[0] - 2 ** 1.5) < 1e-12 and
      all(abs(v) < 1e-14 for v in coords[1:]))
check("psd margin of identity", abs(sepball.psd_margin(3, re, im) - 1.0) < 1e-12)

ghz = [0.0] * 64
for i, j in ((0, 0), (0, 7), (7, 0), (7, 7)):
    ghz[i * 8 + j] = 1.0
check("entangled projector fails PPT", min(sepball.ppt_margins(ghz, [0.0] * 64)) < -0.5)

sre, sim = sepball.sample_ball_state(3, math.sqrt(16 / 19), seed=7)
check("ball state keeps PPT", min(sepball.ppt_margins(sre, sim)) >= -1e-9)
e000 = [[[1.0 if (i, j, k) == (0, 0, 0) else 0.0 for k in range(4)]
         for j in range(4)] for i in range(4)]
check("root witness pairing", abs(sepball.witness_pairing(e000, re, im) - 2 ** 1.5) < 1e-12)

print(f"\n{len(failures)} failure(s)")
raise SystemExit(1 if failures else 0)
