"""Damped wave vs the heat flow of u0 + r^alpha u1: the gap decays faster than either."""

from __future__ import annotations

from decaylab.diagnostics import fit_decay_rate
from decaylab.experiment import ExperimentConfig, simulate

config = ExperimentConfig(ic="bump:center=2,width=0.5,vel=1", t_final=200.0, samples=32)
result = simulate(config)
window = (50.0, 200.0)
for label, getter in [("heat orbit norm", lambda s: s.heat_norm), ("gap D", lambda s: s.gap),
                      ("unweighted energy", lambda s: s.unweighted)]:
    fit = fit_decay_rate([(s.record.t, getter(s)) for s in result.samples], window)
    print(f"{label:18s} slope {fit.slope:+.3f} on [{window[0]:g}, {window[1]:g}]")
print("reference heat rate:", -(config.dim - config.alpha) / (2 * (2 - config.alpha)))
