"""Repeated stratified cross-validation with ERR against baselines.

Run:  python demos/03_cross_validation.py
The same run from the shell:
    varlex eval --config src/varlex/data/smoke.cfg --baselines gsrc,src --out runs/smoke
"""
import warnings

from varlex import ClassifierConfig, cross_validate_many, stratified_kfold
from varlex.evaluate import compare
from varlex.synthetic import make_benchmark

ds = make_benchmark(seed=0)
plan = stratified_kfold(ds, k=5, repeats=2, seed=0)
configs = {k: ClassifierConfig(k, "changing") for k in ("ipgsrc", "gsrc", "src")}

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    reports = cross_validate_many(ds, configs, plan)

compare(reports["ipgsrc"], {k: reports[k] for k in ("gsrc", "src")})
for kind, rep in reports.items():
    a = rep.aggregate
    print(f"{kind:7s} accuracy {a['accuracy_mean']:.3f} +/- {a['accuracy_std']:.3f}  "
          f"AUC {a['auc_mean']:.3f}  error-rate IQR {rep.box_stats['iqr']:.1f}")
print("ERR of IPGSRC vs baselines (%):", reports["ipgsrc"].err_vs)
