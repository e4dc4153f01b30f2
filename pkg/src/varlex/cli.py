"""``varlex`` command line: decompose, dict, solve, classify, eval, rank-genes, version.

Every option can be given as a flag or as a ``key = value`` line in a flat
config file (``--config``); a flag beats the file, the file beats the default.
Keys are the flag names with dashes or underscores.

Exit codes: 0 ok, 1 usage/config error, 2 data error, 3 non-convergence
under ``--strict``.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .classify import KINDS, ClassifierConfig, make_problem, predict_from_dictionary
from .dataset import (DataError, ExpressionDataset, impute_missing, load_expression_csv,
                      load_unlabeled_csv, snr_rank, snr_scores, stratified_kfold, write_matrix_csv)
from .dictionary import GroupStructure, VariationDictionary, build_dictionary
from .evaluate import compare, cross_validate_many
from .rpca import RpcaOptions, rpca_decompose
from .solver import SolverOptions, ipgsr_solve

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NONCONV = 0, 1, 2, 3


class UsageError(Exception):
    pass


class NotConverged(Exception):
    pass


def _lambda(text: str):
    return None if str(text).lower() == "auto" else float(text)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _path(text) -> Path:
    return Path(text)


def _optional_int(text):
    return None if str(text).lower() in ("", "none", "0", "all") else int(text)


@dataclass(frozen=True)
class Opt:
    type: object
    default: object
    help: str
    is_path: bool = False
    flag: bool = False      # store_true style switch


OPTIONS: dict[str, Opt] = {
    # io
    "input": Opt(_path, None, "matrix CSV", True),
    "labels": Opt(_path, None, "labels CSV (sample_id,label); optional with a LABEL row", True),
    "train": Opt(_path, None, "training matrix CSV", True),
    "train_labels": Opt(_path, None, "training labels CSV", True),
    "test": Opt(_path, None, "test matrix CSV", True),
    "dict": Opt(_path, None, "dictionary directory written by 'varlex dict'", True),
    "out": Opt(_path, Path("."), "output directory", True),
    "trace": Opt(_path, None, "trace CSV path (default <out>/trace.csv)", True),
    "history": Opt(_path, None, "history CSV path (default <out>/history.csv)", True),
    # data
    "impute": Opt(str, "zero", "missing values: none|zero|gene_mean|sample_mean"),
    "top_k": Opt(_optional_int, None, "keep the top-k SNR genes (none = all)"),
    "prescreen": Opt(str, "fold", "SNR prescreen scope for eval: fold|global"),
    # rpca
    "lambda": Opt(_lambda, None, "RPCA sparsity weight: auto or a number"),
    "rpca_tol": Opt(float, 1e-7, "RPCA relative residual tolerance"),
    "rpca_max_iter": Opt(int, 1000, "RPCA iteration cap"),
    "rho": Opt(float, 1.5, "RPCA penalty growth factor"),
    # solver
    "problem": Opt(str, "ipgsrc", "representation problem: " + "|".join(KINDS)),
    "kind": Opt(str, "ipgsrc", "classifier: " + "|".join(KINDS)),
    "baselines": Opt(str, "", "comma-separated kinds to compare against (ERR)"),
    "mode": Opt(str, "fixed", "dictionary mode: fixed|changing"),
    "per_sample": Opt(_bool, False, "changing mode: decompose each test sample on its own"),
    "weighting": Opt(str, "sqrt", "group weights: sqrt|unit"),
    "beta1": Opt(float, 1.0, "ADMM penalty for M = Z"),
    "beta2": Opt(float, 1.0, "ADMM penalty for the linear constraint"),
    "gamma": Opt(float, 1.618, "ADMM multiplier step length"),
    "noise_eps": Opt(float, 0.0, "allowed constraint residual norm"),
    "tol": Opt(float, None, "tolerance (RPCA for decompose, ADMM otherwise)"),
    "max_iter": Opt(int, None, "iteration cap (RPCA for decompose, ADMM otherwise)"),
    # eval
    "k": Opt(int, 10, "folds"),
    "repeats": Opt(int, 10, "cross-validation repeats"),
    "positive_class": Opt(int, None, "1-based positive class for ROC (default: last class)"),
    # common
    "seed": Opt(int, 0, "random seed (fold plans; recorded in every output)"),
    "jobs": Opt(int, 1, "parallel fold workers"),
    "strict": Opt(_bool, False, "exit 3 when an iterative method does not converge", flag=True),
    "dry_run": Opt(_bool, False, "print the resolved options and stop", flag=True),
}

COMMON = ["out", "seed", "jobs", "strict", "dry_run"]
RPCA_KEYS = ["lambda", "rpca_tol", "rpca_max_iter", "rho"]
SOLVER_KEYS = ["beta1", "beta2", "gamma", "noise_eps", "tol", "max_iter", "weighting"]
COMMANDS: dict[str, tuple[str, list[str], list[str]]] = {
    # name: (help, option keys, required keys)
    "decompose": ("RPCA of a matrix into low-rank and sparse parts",
                  ["input", "lambda", "tol", "max_iter", "rho", "trace"], ["input"]),
    "dict": ("build a variation dictionary",
             ["train", "train_labels", "test", "mode", "per_sample", "impute", *RPCA_KEYS],
             ["train", "test"]),
    "solve": ("solve a group-sparse representation problem on a dictionary",
              ["dict", "problem", "history", *SOLVER_KEYS], ["dict"]),
    "classify": ("classify test samples",
                 ["train", "train_labels", "test", "kind", "mode", "per_sample", "impute", "top_k",
                  *RPCA_KEYS, *SOLVER_KEYS], ["train", "test"]),
    "eval": ("repeated stratified cross-validation",
             ["input", "labels", "kind", "baselines", "mode", "per_sample", "impute", "top_k",
              "prescreen", "k", "repeats", "positive_class", *RPCA_KEYS, *SOLVER_KEYS],
             ["input"]),
    "rank-genes": ("rank genes by two-class SNR", ["input", "labels", "top_k", "impute"], ["input"]),
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="varlex", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("version", help="print the version")
    for name, (help_, keys, _) in COMMANDS.items():
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=Path, default=None, help="flat key=value config file")
        for key in [*keys, *COMMON]:
            opt = OPTIONS[key]
            flag = "--" + key.replace("_", "-")
            if opt.flag:
                p.add_argument(flag, dest=key, action="store_const", const=True, default=None,
                               help=opt.help)
            else:
                p.add_argument(flag, dest=key, default=None, metavar=key.upper(), help=opt.help)
    return parser


def read_config(path: Path) -> dict[str, str]:
    """Parse ``key = value`` lines; '#' starts a comment line."""
    if not path.is_file():
        raise UsageError(f"config file not found: {path}")
    out = {}
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def resolve(command: str, args: argparse.Namespace) -> dict:
    """Defaults < config file < flags, converted and validated."""
    keys = [*COMMANDS[command][1], *COMMON]
    values = {k: OPTIONS[k].default for k in keys}
    base = Path.cwd()
    from_file: dict[str, str] = {}
    if args.config is not None:
        from_file = read_config(args.config)
        unknown = sorted(set(from_file) - set(keys))
        if unknown:
            raise UsageError(f"{args.config}: unknown key(s) for '{command}': {', '.join(unknown)}")
    for k in keys:
        raw, origin = getattr(args, k), base
        if raw is None and k in from_file:
            # relative paths in a config file are relative to the file
            raw, origin = from_file[k], args.config.resolve().parent
        if raw is None:
            continue
        try:
            v = OPTIONS[k].type(raw)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"bad value for {k}: {raw!r} ({exc})") from None
        if OPTIONS[k].is_path and v is not None and not v.is_absolute():
            v = origin / v
        values[k] = v
    missing = [k for k in COMMANDS[command][2] if values.get(k) is None]
    if missing:
        raise UsageError(f"missing required option(s): {', '.join('--' + m.replace('_', '-') for m in missing)}")
    for k in keys:
        opt = OPTIONS[k]
        if opt.is_path and k not in ("out", "trace", "history") and values[k] is not None:
            if not values[k].exists():
                raise UsageError(f"path for {k} does not exist: {values[k]}")
    _validate(values)
    return values


def _validate(v: dict) -> None:
    checks = [
        ("kind", lambda x: x in KINDS), ("problem", lambda x: x in KINDS),
        ("mode", lambda x: x in ("fixed", "changing")),
        ("impute", lambda x: x in ("none", "zero", "gene_mean", "sample_mean")),
        ("prescreen", lambda x: x in ("fold", "global")),
        ("weighting", lambda x: x in ("sqrt", "unit")),
        ("jobs", lambda x: x >= 1), ("k", lambda x: x >= 2), ("repeats", lambda x: x >= 1),
        ("top_k", lambda x: x is None or x >= 1),
    ]
    for key, ok in checks:
        if key in v and not ok(v[key]):
            raise UsageError(f"invalid value for {key}: {v[key]!r}")
    if v.get("baselines"):
        bad = [b for b in _split(v["baselines"]) if b not in KINDS]
        if bad:
            raise UsageError(f"unknown baseline kind(s): {', '.join(bad)}")
    try:
        if "rpca_tol" in v:
            rpca_options(v)
        if "beta1" in v:
            solver_options(v)
        if "tol" in v and "beta1" not in v:
            _decompose_options(v)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _split(text: str) -> list[str]:
    return [s.strip().lower() for s in text.split(",") if s.strip()]


def rpca_options(v: dict) -> RpcaOptions:
    return RpcaOptions(lam=v["lambda"], rho=v["rho"], tol=v["rpca_tol"], max_iter=v["rpca_max_iter"])


def _decompose_options(v: dict) -> RpcaOptions:
    return RpcaOptions(lam=v["lambda"], rho=v["rho"],
                       tol=1e-7 if v["tol"] is None else v["tol"],
                       max_iter=1000 if v["max_iter"] is None else v["max_iter"])


def solver_options(v: dict) -> SolverOptions:
    return SolverOptions(beta1=v["beta1"], beta2=v["beta2"], gamma1=v["gamma"], gamma2=v["gamma"],
                         tol=1e-6 if v["tol"] is None else v["tol"],
                         max_iter=2000 if v["max_iter"] is None else v["max_iter"],
                         noise_eps=v["noise_eps"])


def classifier_config(v: dict, kind: str | None = None) -> ClassifierConfig:
    return ClassifierConfig(kind or v["kind"], v["mode"], rpca_options(v), solver_options(v),
                            v["weighting"], v["per_sample"])


# ---------------------------------------------------------------- helpers

def header(v: dict) -> str:
    return f"varlex {__version__} seed={v['seed']}"


def _write_csv(path: Path, v: dict, columns: list[str], rows) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {header(v)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(x) for x in row])


def _cell(x):
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return x


def _write_json(path: Path, v: dict, payload: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    payload = {"provenance": {"tool": "varlex", "version": __version__, "seed": v["seed"]}, **payload}
    path.write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def _load(path: Path, labels: Path | None, v: dict) -> ExpressionDataset:
    ds = load_expression_csv(path, labels)
    return _impute(ds, v)


def _impute(ds: ExpressionDataset, v: dict) -> ExpressionDataset:
    if ds.has_missing():
        if v["impute"] == "none":
            raise DataError("data has missing values; choose --impute zero|gene_mean|sample_mean")
        ds = impute_missing(ds, v["impute"])
    return ds


def _load_test(path: Path, train: ExpressionDataset, v: dict) -> tuple[list[str], np.ndarray]:
    genes, samples, values = load_unlabeled_csv(path)
    if set(genes) != set(train.gene_ids) or len(genes) != len(train.gene_ids):
        raise DataError(f"{path}: gene ids differ from the training matrix")
    pos = {g: i for i, g in enumerate(genes)}
    values = values[[pos[g] for g in train.gene_ids]]
    if np.isnan(values).any():
        if v["impute"] == "none":
            raise DataError("test data has missing values; choose an --impute strategy")
        tmp = ExpressionDataset(train.gene_ids, samples, values, np.ones(len(samples), int), ["x"])
        values = impute_missing(tmp, v["impute"]).values
    return samples, values


def _strict(v: dict, ok: bool, what: str) -> None:
    if not ok:
        msg = f"{what} did not converge"
        if v["strict"]:
            raise NotConverged(msg)
        print(f"warning: {msg}", file=sys.stderr)


# ---------------------------------------------------------------- commands

def cmd_decompose(v: dict) -> None:
    genes, samples, X = load_unlabeled_csv(v["input"])
    if np.isnan(X).any():
        raise DataError("decompose needs a complete matrix (no missing cells)")
    res = rpca_decompose(X, _decompose_options(v))
    out = v["out"]
    write_matrix_csv(out / "L.csv", genes, samples, res.low_rank, header=header(v))
    write_matrix_csv(out / "S.csv", genes, samples, res.sparse, header=header(v))
    _write_csv(v["trace"] or out / "trace.csv", v, ["iter", "residual", "rank", "nnz"],
               ((i, r, k, z) for i, (r, k, z) in enumerate(res.trace, 1)))
    print(f"rpca: {res.iterations} iterations, converged={res.converged}, "
          f"rank={res.ranks[-1]}, nnz={res.nnz[-1]}, lambda={res.lam!r}")
    _strict(v, res.converged, "RPCA")


def cmd_dict(v: dict) -> None:
    train = _load(v["train"], v["train_labels"], v)
    test_ids, Y = _load_test(v["test"], train, v)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        vd = build_dictionary(train.values, train.labels, Y, v["mode"], rpca_options(v),
                              train.n_classes, v["per_sample"])
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    write_dictionary(v["out"], vd, train, test_ids, v)
    _strict(v, not any("RPCA did not converge" in str(w.message) for w in caught), "RPCA")
    print(f"dictionary: {vd.train_sparse.shape[0]} genes, {vd.train_sparse.shape[1]} atoms, "
          f"{vd.test_sparse.shape[1]} test columns, mode={vd.mode}")


def write_dictionary(out: Path, vd: VariationDictionary, train: ExpressionDataset,
                     test_ids: list[str], v: dict) -> None:
    """Paired CSVs S_X.csv / S_Y.csv plus groups.json."""
    write_matrix_csv(out / "S_X.csv", train.gene_ids, train.sample_ids, vd.train_sparse, header=header(v))
    write_matrix_csv(out / "S_Y.csv", train.gene_ids, test_ids, vd.test_sparse, header=header(v))
    _write_json(out / "groups.json", v, {
        "mode": vd.mode,
        "class_names": train.class_names,
        **vd.groups.to_dict(),
        "train_norms": vd.train_norms.tolist(),
        "test_norms": vd.test_norms.tolist(),
        "train_degenerate": vd.train_degenerate.tolist(),
        "test_degenerate": vd.test_degenerate.tolist(),
    })


def read_dictionary(path: Path) -> tuple[VariationDictionary, list[str], list[str], dict]:
    genes, train_ids, SX = load_unlabeled_csv(path / "S_X.csv")
    genes_y, test_ids, SY = load_unlabeled_csv(path / "S_Y.csv")
    if genes != genes_y:
        raise DataError(f"{path}: S_X and S_Y gene ids differ")
    try:
        meta = json.loads((path / "groups.json").read_text(encoding="utf-8"))
        groups = GroupStructure.from_dict(meta)
    except (OSError, ValueError, KeyError) as exc:
        raise DataError(f"{path / 'groups.json'}: {exc}") from None
    if groups.class_of.size != SX.shape[1]:
        raise DataError(f"{path}: groups.json does not match S_X.csv")
    vd = VariationDictionary(
        SX, SY, groups, meta.get("mode", "fixed"),
        np.asarray(meta.get("train_norms", np.ones(SX.shape[1]))),
        np.asarray(meta.get("test_norms", np.ones(SY.shape[1]))),
        np.asarray(meta.get("train_degenerate", np.zeros(SX.shape[1], bool)), bool),
        np.asarray(meta.get("test_degenerate", np.zeros(SY.shape[1], bool)), bool))
    return vd, train_ids, test_ids, meta


def cmd_solve(v: dict) -> None:
    vd, train_ids, test_ids, _ = read_dictionary(v["dict"])
    kind = v["problem"]
    problem = make_problem(kind, vd, v["weighting"])
    sol = ipgsr_solve(problem, solver_options(v))
    rows, cols = (test_ids, train_ids) if kind in ("ipgsrc", "iprc") else (train_ids, test_ids)
    write_matrix_csv(v["out"] / "M.csv", rows, cols, sol.M, header=header(v))
    _write_csv(v["history"] or v["out"] / "history.csv", v, ["iter", "r_z", "r_feas", "objective"],
               ((i, *h) for i, h in enumerate(sol.history, 1)))
    print(f"{kind}: {sol.iterations} iterations, converged={sol.converged}, "
          f"consistent={sol.consistent}, objective={sol.objective!r}")
    _strict(v, sol.converged, "ADMM")


def cmd_classify(v: dict) -> None:
    train = _load(v["train"], v["train_labels"], v)
    test_ids, Y = _load_test(v["test"], train, v)
    if v["top_k"]:
        order, train = snr_rank(train, v["top_k"])
        Y = Y[order[: v["top_k"]]]
    cfg = classifier_config(v)
    vd = build_dictionary(train.values, train.labels, Y, cfg.mode, cfg.rpca, train.n_classes,
                          cfg.per_sample)
    run = predict_from_dictionary(vd, cfg)
    c = train.n_classes
    _write_csv(v["out"] / "predictions.csv", v,
               ["sample_id", "predicted", *[f"score_{j}" for j in range(1, c + 1)], "csi", "flags"],
               ((sid, train.class_names[p.label - 1], *p.scores.tolist(), p.csi, p.flags)
                for sid, p in zip(test_ids, run.predictions)))
    print(f"{cfg.kind}: classified {len(test_ids)} samples; solver converged={run.solution.converged}")
    _strict(v, run.solution.converged, "ADMM")


def cmd_eval(v: dict) -> None:
    ds = _load(v["input"], v["labels"], v)
    plan = stratified_kfold(ds, v["k"], v["repeats"], v["seed"])
    kinds = [v["kind"], *[b for b in _split(v["baselines"]) if b != v["kind"]]]
    configs = {k: classifier_config(v, k) for k in kinds}
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        reports = cross_validate_many(ds, configs, plan, v["top_k"], v["prescreen"],
                                      v["positive_class"], v["jobs"])
    main_report = reports[kinds[0]]
    if len(kinds) > 1:
        compare(main_report, {k: reports[k] for k in kinds[1:]})
    write_eval_outputs(v["out"], reports, kinds, ds, v)
    agg = main_report.aggregate
    print(f"{kinds[0]}: accuracy {agg['accuracy_mean']:.4f} +/- {agg['accuracy_std']:.4f} "
          f"over {agg['n_cells']} folds")
    for k in kinds[1:]:
        print(f"{k}: accuracy {reports[k].aggregate['accuracy_mean']:.4f}")
    nonconv = {k: r.aggregate["solver_nonconverged_cells"] for k, r in reports.items()}
    detail = ", ".join(f"{k} in {n} fold(s)" for k, n in nonconv.items() if n)
    _strict(v, not detail, f"ADMM ({detail})")


def write_eval_outputs(out: Path, reports, kinds, ds: ExpressionDataset, v: dict) -> None:
    main_report = reports[kinds[0]]
    payload = main_report.to_dict()
    payload.pop("provenance")
    payload["dataset"] = {"n_genes": ds.n_genes, "n_samples": ds.n_samples,
                          "class_names": ds.class_names}
    payload["baselines"] = {k: {"aggregate": reports[k].aggregate,
                                "box_stats": reports[k].box_stats,
                                "csi_summary": reports[k].csi_summary} for k in kinds[1:]}
    payload["csi_summary"] = {k: reports[k].csi_summary[k] for k in kinds}
    _write_json(out / "report.json", v, payload)
    _write_csv(out / "roc.csv", v, ["classifier", "fpr", "tpr"],
               ((k, x, y) for k in kinds for x, y in reports[k].roc))
    _write_csv(out / "folds.csv", v,
               ["classifier", "repeat", "fold", "n_test", "accuracy", "error_rate",
                "solver_converged", "solver_iterations"],
               ((k, f.repeat + 1, f.fold + 1, len(f.truth), f.accuracy, 100 * (1 - f.accuracy),
                 int(f.solver_converged), f.solver_iterations)
                for k in kinds for f in reports[k].per_fold))
    _write_csv(out / "csi.csv", v,
               ["classifier", "repeat", "fold", "sample_id", "truth", "predicted", "csi", "flags"],
               ((k, f.repeat + 1, f.fold + 1, ds.sample_ids[i], ds.class_names[t - 1],
                 ds.class_names[p - 1], c, fl)
                for k in kinds for f in reports[k].per_fold
                for i, t, p, c, fl in zip(f.test_idx, f.truth, f.predicted, f.csi, f.flags)))


def cmd_rank_genes(v: dict) -> None:
    ds = _load(v["input"], v["labels"], v)
    top_k = v["top_k"] or ds.n_genes
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        order, _ = snr_rank(ds, top_k)
        snr = snr_scores(ds.values, ds.labels)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    _write_csv(v["out"] / "ranked_genes.csv", v, ["rank", "gene_id", "snr"],
               ((r, ds.gene_ids[g], snr[g]) for r, g in enumerate(order[:top_k], 1)))
    print(f"ranked {ds.n_genes} genes; wrote top {top_k}")


HANDLERS = {"decompose": cmd_decompose, "dict": cmd_dict, "solve": cmd_solve,
            "classify": cmd_classify, "eval": cmd_eval, "rank-genes": cmd_rank_genes}


def _print_resolved(command: str, v: dict) -> None:
    print(f"# {header(v)} command={command}")
    for k in sorted(v):
        val = v[k]
        print(f"{k} = {'auto' if val is None and k == 'lambda' else ('' if val is None else val)}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_help(sys.stderr)
            return EXIT_USAGE
        if args.command == "version":
            print(__version__)
            return EXIT_OK
        v = resolve(args.command, args)
        if v["dry_run"]:
            _print_resolved(args.command, v)
            return EXIT_OK
        v["out"].mkdir(parents=True, exist_ok=True)
        HANDLERS[args.command](v)
        return EXIT_OK
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONV
    except (DataError, ValueError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
