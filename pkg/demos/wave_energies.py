"""Weighted energies along one damped-wave run (alpha = 0.5, beta = 1)."""

from __future__ import annotations

from decaylab.experiment import ExperimentConfig, simulate

config = ExperimentConfig(alpha=0.5, gamma=1.5, t_final=100.0, samples=12, heat=False)
result = simulate(config)
print(f"beta = {config.beta:g}; budget {result.budget:.6g}")
print(f"{'t':>8} {'E_dx':>12} {'E_dt':>12} {'dissip':>12} {'sum':>12} {'unweighted':>12}")
for s in result.samples:
    r = s.record
    total = r.e_dx + r.e_dt + r.dissip
    print(f"{r.t:8.2f} {r.e_dx:12.5g} {r.e_dt:12.5g} {r.dissip:12.5g} {total:12.5g} {s.unweighted:12.5g}")
