"""
Monte Carlo replication of the spiking experiment
=================================================

Each replicate draws a fresh SMOTE seed, spikes the lab set with synthetic
field-like spectra, selects a PLS model by AICc and validates on the real
field set. Medians and quartiles summarise the replicates.
"""

from spikecal import montecarlo as mc
from spikecal.benchmark import make_benchmark
from spikecal.smoter import SmoteParams

lab, field = make_benchmark(seed=0)
base = mc.run_baseline(lab, field)
print(f"unspiked: p={base.best_p}  validation RMSE {base.validation.rmse:.2f}  R2 {base.validation.r2:.2f}")

print("  N  k   p_med  val_RMSE median [q25, q75]")
for j, n in enumerate((100, 200, 300)):
    recs = mc.run_replicates(lab, field, SmoteParams(n, 5), reps=20, master_seed=j)
    agg = mc.aggregate(recs)
    med, q25, q75 = agg["val_rmse"]
    print(f"{n:3d}  5  {agg['best_p'][0]:6.1f}  {med:6.2f} [{q25:.2f}, {q75:.2f}]")

rep = mc.pick_representative(recs)
print(f"representative replicate at N=300: #{rep.replicate_index}, p={rep.best_p}, "
      f"validation R2 {rep.validation.r2:.2f}")
