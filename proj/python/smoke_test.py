"""End-to-end smoke test for the fsteer_py bindings.

Covers the Gaussian engine round trip, lattice-model observables, config
parsing/hashing, the deterministic ensemble runner, and the oracle battery.
Exits nonzero on the first failed assertion.
"""

import json
import math

import numpy as np

import fsteer_py as fs


def check(name: str, ok: bool) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {name}")
    if not ok:
        raise SystemExit(1)


# ---------------------------------------------------------------- randomness
check("derive_seed matches the frozen fixture",
      fs.RandomStream.derive_seed(42, 0) == 5139283748462763858)
rng = fs.RandomStream(7)
u = rng.uniform()
check("uniform draws lie in [0,1)", 0.0 <= u < 1.0 and rng.draws() == 1)

# ------------------------------------------------------------- Gaussian core
g = fs.product_state(4, [1, 0, 1, 0])
check("product state has the requested charge", fs.total_charge(g) == 2.0)
check("product state is pure", fs.purity_deviation(g) < 1e-14)

# Diagonal unitary leaves occupations alone.
phases = np.exp(1j * np.array([0.3, 1.1, 2.2, 0.5]))
g2 = fs.apply_unitary(g, np.diag(phases))
check("diagonal unitary preserves occupations",
      np.allclose(np.diag(g2), np.diag(g)))

# A two-mode rotation moves charge between modes but conserves the total.
theta = 0.4
t = np.eye(4, dtype=complex)
t[0, 0] = t[1, 1] = math.cos(theta)
t[0, 1] = 1j * math.sin(theta)
t[1, 0] = 1j * math.sin(theta)
g3 = fs.apply_unitary(g, t)
check("rotation conserves total charge",
      abs(fs.total_charge(g3) - 2.0) < 1e-12)
check("rotation keeps the state pure", fs.purity_deviation(g3) < 1e-12)

w = np.zeros(4, dtype=complex)
w[0] = 1.0
p1 = fs.occupation_expectation(g3, w)
check("rotated occupation matches cos^2", abs(p1 - math.cos(theta) ** 2) < 1e-12)

g4, prob = fs.measurement_update(g3, w, 1)
check("forced measurement returns the Born probability", abs(prob - p1) < 1e-12)
check("collapsed mode is definitely occupied",
      abs(fs.occupation_expectation(g4, w) - 1.0) < 1e-12)

g5, outcome, prob2 = fs.measure_occupation(g3, w, fs.RandomStream(3))
check("sampled measurement reports a consistent branch",
      (outcome in (0, 1)) and abs(prob2 - (p1 if outcome else 1 - p1)) < 1e-12)

g6, weight = fs.weak_measurement_update(g3, w, 0.7, +1)
check("weak outcome weight lies in (0,1)", 0.0 < weight < 1.0)
check("weak update keeps the state pure", fs.purity_deviation(g6) < 1e-10)

a = np.zeros(4, dtype=complex); a[0] = 1.0
b = np.zeros(4, dtype=complex); b[1] = 1.0
gs = fs.fswap(fs.product_state(4, [1, 0, 0, 0]), a, b)
check("fswap exchanges occupations",
      abs(gs[0, 0]) < 1e-12 and abs(gs[1, 1] - 1.0) < 1e-12)

# ----------------------------------------------------------- model + fields
L = 8
gci = fs.ground_state_correlation(L, 1.5)
check("ground state is half filled",
      abs(fs.total_charge(gci) - L * L) < 1e-9)
check("ground state is pure", fs.purity_deviation(gci) < 1e-10)
chern = fs.chern_real_space(gci, L)
check("ground-state Chern number is near -1", -1.1 < chern < -0.8)
marker = fs.chern_marker(gci, L)
check("marker field has one entry per site", len(marker) == L * L)
corr = fs.correlation_decay(gci, L)
check("correlations decay with distance", corr[1] > corr[L // 2] >= 0.0)
mi = fs.mutual_information(gci, L)
check("mutual information identity holds",
      abs(mi["s_a"] + mi["s_b"] - mi["s_ab"] - mi["mi"]) < 1e-9)

check("analytic relaxation time is size-independent",
      abs(fs.convergence_time(24, 1.0) - fs.convergence_time(48, 1.0)) < 1e-12)

# ------------------------------------------------------------ orchestration
cfg = {
    "kind": "steer",
    "seed": 7,
    "protocol": {"L": 4, "n_shell": -1, "cycles": 2, "trajectories": 2},
    "observables": {"mutual_information": True},
}
echo = json.loads(fs.parse_config(json.dumps(cfg)))
check("canonical echo materializes defaults", echo["protocol"]["alpha"] == 1.5)
h = fs.config_hash(json.dumps(cfg))
check("config hash is 16 hex digits",
      len(h) == 16 and all(c in "0123456789abcdef" for c in h))
check("execution fields do not perturb the hash",
      fs.config_hash(json.dumps({**cfg, "threads": 9, "out_dir": "x"})) == h)

schema = json.loads(fs.config_schema())
check("schema documents the lattice size", "protocol.L" in schema)

report_a = fs.run_ensemble(json.dumps(cfg), 1)
report_b = fs.run_ensemble(json.dumps(cfg), 2)
check("ensemble runs are worker-count independent", report_a == report_b)
rep = json.loads(report_a)
check("report embeds the config hash", rep["config_hash"] == h)
hygiene = rep["ensemble"]["hygiene"]
check("trajectories stay pure", hygiene["purity_max"] <= 1e-8)
check("charge is conserved", hygiene["charge_drift_max"] <= 1e-9)

battery = fs.oracle_selftest(25, 11)
check("oracle battery passes", battery["pass"] and
      max(battery["max_error"].values()) <= battery["tolerance"])

print("smoke test: all checks passed")
