"""Classify held-out samples by projecting the training set onto them.

Run:  python demos/02_inverse_projection.py
"""
import warnings

import numpy as np

from varlex import build_dictionary, compute_ccr
from varlex.classify import ClassifierConfig, predict_from_dictionary
from varlex.synthetic import make_benchmark

ds = make_benchmark(seed=3)
test = np.r_[0:5, 30:35]
train = np.setdiff1d(np.arange(ds.n_samples), test)
X, Y = ds.values[:, train], ds.values[:, test]

# %% One dictionary serves every classifier kind.
vd = build_dictionary(X, ds.labels[train], Y, mode="changing")
print("S_X", vd.train_sparse.shape, "S_Y", vd.test_sparse.shape)

with warnings.catch_warnings():
    warnings.simplefilter("ignore")      # SRC often stops at max_iter
    runs = {k: predict_from_dictionary(vd, ClassifierConfig(k, "changing"))
            for k in ("ipgsrc", "iprc", "gsrc", "src")}

truth = ds.labels[test]
for kind, run in runs.items():
    pred = np.array([p.label for p in run.predictions])
    csi = np.mean([p.csi for p in run.predictions])
    print(f"{kind:7s} accuracy {np.mean(pred == truth):.2f}  mean CSI {csi:.3f}  "
          f"ADMM iterations {run.solution.iterations}")

# %% The CCR table behind the IPGSRC votes: one column per test sample.
ccr = compute_ccr(runs["ipgsrc"].solution.M, vd.groups).normalize()
np.set_printoptions(precision=3, suppress=True)
print(ccr.values)
