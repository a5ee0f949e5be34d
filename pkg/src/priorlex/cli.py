"""Command-line front end.

Subcommands:

  eval-priors     word-level evaluation of every formula and the ensemble
                  against a gold lexicon, over repeated 70/30 splits
  build-lexicon   train on a gold lexicon and score every lemma#PoS of the
                  resource (or export a single formula's scores)
  eval-sentences  sentence-level scoring of one or more lexica on tagged
                  datasets
  inspect         show store statistics or one key's profile and scores
  coverage        token coverage of lexica over datasets

Every command is a pure function of (input files, flags, seed): reports
embed a provenance header (tool version, seed, input hashes) and contain no
timestamps, so reruns are byte-identical. Exit codes: 0 success, 1 usage
error, 2 data error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import __version__
from .ensemble import build_feature_matrix, model_to_text, predict, save_model, train_ensemble
from .errors import DataError
from .evalkit import (
    EvalReport,
    SplitPlan,
    accuracy,
    approx_randomization_test,
    cohen_kappa,
    fisher_z_test,
    mae,
    make_splits,
    paired_t_test,
    pearson,
)
from .formulae import (
    FEATURE_NAMES,
    FORMULA_IDS,
    all_formula_features,
    apply_formula,
    baseline_rnd,
    baseline_swnrnd,
    majority_class_label,
    map_polarity,
    read_lexicon,
    write_lexicon,
)
from .gold_lexica import GOLD_FORMATS, align_to_swn, filter_all_zero, load_gold
from .sentence_sa import (
    binarize_dataset,
    classify_sentence_majority,
    coverage,
    load_dataset,
    load_stoplist,
    score_sentence_avg,
)
from .stopwords import default_stoplist
from .swn_store import lemma_pos_keys, parse_swn_file


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 1, not argparse's 2
        self.print_usage(sys.stderr)
        raise SystemExit(f"{self.prog}: error: {message}") from None


def _file_sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()[:16]


def _provenance(command: str, seed, inputs: dict[str, Path], extra: dict | None = None) -> list[str]:
    lines = [f"priorlex {__version__}", f"command {command}"]
    if seed is not None:
        lines.append(f"seed {seed}")
    for name in sorted(inputs):
        path = Path(inputs[name])
        lines.append(f"input {name} {path.name} sha256:{_file_sha256(path)}")
    for key in sorted(extra or {}):
        lines.append(f"{key} {extra[key]}")
    return lines


def _write_report(path: Path, header: list[str], body: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    text = "".join(f"# {line}\n" for line in header) + body
    path.write_text(text, encoding="utf-8")


def _load_aligned_gold(args, store):
    raw = load_gold(args.gold, args.gold_format.replace("-", "_"))
    gold, report = align_to_swn(raw, store)
    gold, removed = filter_all_zero(gold, store)
    report.filtered_all_zero = removed
    return gold, report


# --------------------------------------------------------------------------
# eval-priors
# --------------------------------------------------------------------------

def _formula_predictions(X: np.ndarray, keys, store, seed: int, task: str) -> dict[str, np.ndarray]:
    """Split-independent prediction vector per baseline/formula system."""
    systems: dict[str, np.ndarray] = {}
    rnd = np.array([baseline_rnd(k, seed).value for k in keys])
    profiles = [store.profile(k) for k in keys]
    if task == "regression":
        systems["rnd"] = rnd
        for strategy in ("m", "d"):
            systems[f"swnrnd_{strategy}"] = np.array(
                [baseline_swnrnd(p, seed, strategy).value for p in profiles]
            )
        for fid in FORMULA_IDS:
            if fid == "uni":
                systems["uni"] = X[:, FEATURE_NAMES.index("uni")]
            else:
                systems[f"{fid}_m"] = X[:, FEATURE_NAMES.index(f"{fid}_m")]
                systems[f"{fid}_d"] = X[:, FEATURE_NAMES.index(f"{fid}_d")]
    else:
        sign = lambda v: np.where(np.asarray(v) >= 0, 1.0, -1.0)
        systems["rnd"] = sign(rnd)
        for strategy in ("m", "d"):
            systems[f"swnrnd_{strategy}"] = sign(
                [baseline_swnrnd(p, seed, strategy).value for p in profiles]
            )
        for fid in FORMULA_IDS:
            column = "uni" if fid == "uni" else f"{fid}_m"
            systems[fid] = sign(X[:, FEATURE_NAMES.index(column)])
    return systems


def cmd_eval_priors(args) -> int:
    out_dir = Path(args.output_dir)
    store = parse_swn_file(args.swn)
    gold, align_report = _load_aligned_gold(args, store)
    keys = sorted(gold.entries)
    if len(keys) < 50:
        raise DataError(f"only {len(keys)} aligned gold entries; need at least 50")
    task = "classification" if gold.kind == "binary" else "regression"

    fm = build_feature_matrix(keys, store)
    y = np.array([gold.entries[k] for k in keys])
    plan = make_splits(len(keys), SplitPlan(args.repeats, args.train_fraction, args.seed))
    systems = _formula_predictions(fm.X, keys, store, args.seed, task)

    metric_names = ("mae", "pearson") if task == "regression" else ("accuracy", "kappa")
    report = EvalReport(task, metric_names)
    per_repeat: dict[str, list[np.ndarray]] = {name: [] for name in systems}
    per_repeat["ensemble"] = []
    if task == "classification":
        per_repeat["majority_class"] = []
    selection_rows = []

    def evaluate(pred, gold_vec):
        if task == "regression":
            try:
                rho = pearson(pred, gold_vec)
            except ValueError:  # constant predictions on this split
                rho = float("nan")
            return {"mae": mae(pred, gold_vec), "pearson": rho}
        return {"accuracy": accuracy(pred, gold_vec), "kappa": cohen_kappa(pred, gold_vec)}

    values: dict[str, dict[str, list[float]]] = {}

    def record(system, pred, test):
        per_repeat[system].append(pred)
        for metric, value in evaluate(pred, y[test]).items():
            values.setdefault(system, {}).setdefault(metric, []).append(value)

    for rep, (train, test) in enumerate(plan.splits):
        for name, pred in systems.items():
            record(name, pred[test], test)
        if task == "classification":
            label = majority_class_label(y[train].astype(int))
            record("majority_class", np.full(test.size, float(label)), test)
        model, selection = train_ensemble(
            fm.X[train], y[train], task=task, seed=args.seed + rep,
            feature_selection=not args.no_feature_selection,
            resamples=args.resamples, folds=args.folds,
        )
        record("ensemble", predict(model, fm.X[test]), test)
        if selection is not None:
            selection_rows.append((rep, selection))

    order = ["rnd"]
    if task == "classification":
        order.append("majority_class")
    order += ["swnrnd_m", "swnrnd_d"]
    if task == "regression":
        for fid in FORMULA_IDS:
            order += ["uni"] if fid == "uni" else [f"{fid}_m", f"{fid}_d"]
    else:
        order += list(FORMULA_IDS)
    order.append("ensemble")
    for system in order:
        for metric in metric_names:
            report.add(system, metric, values[system][metric])

    inputs = {"swn": args.swn, "gold": args.gold}
    extra = {
        "task": task,
        "repeats": args.repeats,
        "aligned": len(keys),
        "alignment": "; ".join(align_report.lines()),
    }
    header = _provenance("eval-priors", args.seed, inputs, extra)
    _write_report(out_dir / "priors_metrics.tsv", header, report.to_tsv())
    _write_report(out_dir / "priors_metrics.txt", header, report.to_text())

    # pairwise paired t-test matrix on the primary metric's per-repeat values
    primary = metric_names[0]
    lines = ["system\t" + "\t".join(order)]
    for a in order:
        row = [a]
        for b in order:
            p = 1.0 if a == b else paired_t_test(values[a][primary], values[b][primary])
            row.append(f"{p:.6f}")
        lines.append("\t".join(row))
    _write_report(out_dir / "priors_significance_ttest.tsv", header,
                  "\n".join(lines) + "\n")

    if task == "classification":
        pooled_gold = np.concatenate([y[test] for _, test in plan.splits])
        pooled = {s: np.concatenate(per_repeat[s]) for s in order}
        lines = ["system\tp_vs_ensemble"]
        for system in order:
            if system == "ensemble":
                p = 1.0
            else:
                p = approx_randomization_test(
                    pooled[system], pooled["ensemble"], pooled_gold, accuracy,
                    iterations=args.randomization_iterations, seed=args.seed,
                )
            lines.append(f"{system}\t{p:.6f}")
        _write_report(out_dir / "priors_significance_randomization.tsv", header,
                      "\n".join(lines) + "\n")

    if selection_rows:
        lines = ["repeat\t" + "\t".join(FEATURE_NAMES)]
        for rep, sel in selection_rows:
            lines.append(f"{rep}\t" + "\t".join(f"{f:.3f}" for f in sel.frequencies))
            lines.append(f"{rep}_mask\t" + "\t".join("1" if b else "0" for b in sel.mask))
        _write_report(out_dir / "feature_selection.tsv", header, "\n".join(lines) + "\n")

    print(report.to_text(), end="")
    return 0


# --------------------------------------------------------------------------
# build-lexicon
# --------------------------------------------------------------------------

def cmd_build_lexicon(args) -> int:
    store = parse_swn_file(args.swn)
    all_keys = lemma_pos_keys(store)
    nonzero = set(lemma_pos_keys(store, only_nonzero=True))
    out_keys = [k for k in all_keys if k in nonzero] if args.nonzero_only else all_keys

    if args.formula:
        scores = {}
        for key in out_keys:
            out = apply_formula(args.formula, store.profile(key))
            scores[key] = map_polarity(out, args.strategy).value
        header = _provenance("build-lexicon", None, {"swn": args.swn},
                             {"formula": args.formula, "strategy": args.strategy,
                              "keys": len(scores)})
        write_lexicon(scores, args.output, header)
        print(f"wrote {len(scores)} entries to {args.output}")
        return 0

    if not args.gold:
        raise DataError("build-lexicon needs --gold (or --formula for a formula lexicon)")
    gold, align_report = _load_aligned_gold(args, store)
    task = "classification" if gold.kind == "binary" else "regression"
    train_keys = sorted(gold.entries)
    fm = build_feature_matrix(train_keys, store)
    y = np.array([gold.entries[k] for k in train_keys])
    model, selection = train_ensemble(
        fm.X, y, task=task, seed=args.seed,
        feature_selection=not args.no_feature_selection,
        resamples=args.resamples, folds=args.folds,
    )
    if args.model_output:
        save_model(model, args.model_output)

    scored_keys = sorted(nonzero)
    predictions = predict(model, build_feature_matrix(scored_keys, store).X)
    scores = {key: 0.0 for key in out_keys}
    for key, value in zip(scored_keys, predictions):
        if key in scores:
            scores[key] = float(value)
    merged = 0
    for key, value in gold.entries.items():
        if key in scores:
            scores[key] = value
            merged += 1

    model_hash = hashlib.sha256(model_to_text(model).encode()).hexdigest()[:16]
    header = _provenance(
        "build-lexicon", args.seed, {"swn": args.swn, "gold": args.gold},
        {
            "task": task,
            "keys": len(scores),
            "scored_nonzero": len(scored_keys),
            "gold_merged": merged,
            "model_sha256": model_hash,
            "selected_features": ("all" if selection is None
                                  else ",".join(n for n, b in zip(FEATURE_NAMES, selection.mask) if b)),
            "alignment": "; ".join(align_report.lines()),
        },
    )
    write_lexicon(scores, args.output, header)
    print(f"wrote {len(scores)} entries to {args.output} ({merged} from gold)")
    return 0


# --------------------------------------------------------------------------
# eval-sentences
# --------------------------------------------------------------------------

def _parse_named_paths(pairs) -> dict[str, Path]:
    named = {}
    for pair in pairs or ():
        name, sep, path = pair.partition("=")
        if not sep or not name or not path:
            raise DataError(f"expected NAME=PATH, got {pair!r}")
        named[name] = Path(path)
    return named


def _stoplist_variants(args):
    stoplist = (load_stoplist(args.stoplist) if args.stoplist else default_stoplist())
    if args.stopwords == "on":
        return [("stopwords_removed", stoplist)]
    if args.stopwords == "off":
        return [("all_tokens", None)]
    return [("all_tokens", None), ("stopwords_removed", stoplist)]


def _sentence_regression_row(dataset, lexicon, stoplist):
    cov = coverage(dataset, lexicon, stoplist)
    pred, gold, zeros = [], [], []
    for s in dataset:
        if s.gold is None:
            continue
        score = score_sentence_avg(s, lexicon, stoplist)
        zeros.append((0.0 if score is None else score, s.gold))
        if score is not None:
            pred.append(score)
            gold.append(s.gold)
    row = {
        "coverage": cov.token_coverage,
        "undecidable": cov.undecidable_sentences,
        "n_decided": len(pred),
    }
    try:
        row["pearson_decided"] = pearson(pred, gold)
    except ValueError:
        row["pearson_decided"] = float("nan")
    try:
        row["pearson_undecidable_zero"] = pearson([z for z, _ in zeros], [g for _, g in zeros])
    except ValueError:
        row["pearson_undecidable_zero"] = float("nan")
    return row


def _sentence_classification_row(dataset, lexicon, stoplist, undecidable, seed):
    labeled = [s for s in dataset if s.gold in (-1, 1)]
    decided_hits = total_hits = decided = 0
    rng_label = lambda s: 1 if baseline_rnd(s.sid, seed).value >= 0 else -1
    for s in labeled:
        label = classify_sentence_majority(s, lexicon, stoplist)
        if label is None and undecidable == "random":
            label = rng_label(s)
        if label is not None:
            decided += 1
            decided_hits += label == s.gold
            total_hits += label == s.gold
    n = len(labeled)
    return {
        "n_labeled": n,
        "undecided": n - decided,
        "accuracy_undecidable_wrong": total_hits / n if n else float("nan"),
        "accuracy_decided_only": decided_hits / decided if decided else float("nan"),
    }


def cmd_eval_sentences(args) -> int:
    lexica = {name: read_lexicon(path) for name, path in _parse_named_paths(args.lexicon).items()}
    if not lexica:
        raise DataError("need at least one --lexicon NAME=PATH")
    out_dir = Path(args.output_dir)
    variants = _stoplist_variants(args)

    for dataset_path in args.dataset:
        dataset = load_dataset(dataset_path)
        if not dataset:
            raise DataError(f"dataset {dataset_path} is empty")
        stem = Path(dataset_path).stem
        has_real_gold = any(s.gold is not None for s in dataset)
        binary = binarize_dataset(
            [s for s in dataset if s.gold is not None],
            neg_hi=args.neg_threshold, pos_lo=args.pos_threshold,
        ) if has_real_gold else []

        reg_rows: dict[tuple[str, str], dict] = {}
        cls_rows: dict[tuple[str, str], dict] = {}
        cls_preds: dict[tuple[str, str], np.ndarray] = {}
        for variant, stoplist in variants:
            for name, lexicon in lexica.items():
                reg_rows[(name, variant)] = _sentence_regression_row(dataset, lexicon, stoplist)
                if binary:
                    cls_rows[(name, variant)] = _sentence_classification_row(
                        binary, lexicon, stoplist, args.undecidable, args.seed)
                    preds = []
                    for s in binary:
                        label = classify_sentence_majority(s, lexicon, stoplist)
                        if label is None:
                            if args.undecidable == "random":
                                label = 1 if baseline_rnd(s.sid, args.seed).value >= 0 else -1
                            else:
                                label = -s.gold  # scored as wrong
                        preds.append(float(label))
                    cls_preds[(name, variant)] = np.array(preds)

        # significance against the best row of each variant
        for variant, _ in variants:
            decided = {n: reg_rows[(n, variant)] for n in lexica}
            valid = {n: r for n, r in decided.items() if r["n_decided"] > 3
                     and not np.isnan(r["pearson_decided"])}
            if len(valid) > 1:
                best = max(valid, key=lambda n: valid[n]["pearson_decided"])
                clip = lambda r: min(max(r, -1.0 + 1e-12), 1.0 - 1e-12)
                for name, row in valid.items():
                    row["p_fisher_vs_best"] = fisher_z_test(
                        clip(row["pearson_decided"]), row["n_decided"],
                        clip(valid[best]["pearson_decided"]), valid[best]["n_decided"],
                    ) if name != best else 1.0
            if binary:
                gold_vec = np.array([float(s.gold) for s in binary])
                best = max(lexica, key=lambda n: cls_rows[(n, variant)]["accuracy_undecidable_wrong"])
                for name in lexica:
                    cls_rows[(name, variant)]["p_randomization_vs_best"] = (
                        1.0 if name == best else approx_randomization_test(
                            cls_preds[(name, variant)], cls_preds[(best, variant)],
                            gold_vec, accuracy,
                            iterations=args.randomization_iterations, seed=args.seed)
                    )

        inputs = {"dataset": Path(dataset_path)}
        inputs.update({f"lexicon_{n}": p for n, p in _parse_named_paths(args.lexicon).items()})
        header = _provenance(
            "eval-sentences", args.seed, inputs,
            {"sentences": len(dataset), "binarized": len(binary),
             "neg_threshold": args.neg_threshold, "pos_threshold": args.pos_threshold,
             "undecidable": args.undecidable, "stopwords": args.stopwords},
        )
        lines = []
        reg_cols = ["coverage", "undecidable", "n_decided",
                    "pearson_decided", "pearson_undecidable_zero", "p_fisher_vs_best"]
        cls_cols = ["n_labeled", "undecided", "accuracy_undecidable_wrong",
                    "accuracy_decided_only", "p_randomization_vs_best"]
        lines.append("\t".join(["lexicon", "tokens"] + reg_cols + (cls_cols if binary else [])))
        for variant, _ in variants:
            for name in sorted(lexica):
                row = [name, variant]
                source = reg_rows[(name, variant)]
                row += [_fmt(source.get(c)) for c in reg_cols]
                if binary:
                    source = cls_rows[(name, variant)]
                    row += [_fmt(source.get(c)) for c in cls_cols]
                lines.append("\t".join(row))
        body = "\n".join(lines) + "\n"
        _write_report(out_dir / f"sentences_{stem}.tsv", header, body)
        print(body, end="")
    return 0


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


# --------------------------------------------------------------------------
# inspect / coverage
# --------------------------------------------------------------------------

def cmd_inspect(args) -> int:
    store = parse_swn_file(args.swn)
    print(f"synset entries    {len(store.entries)}")
    print(f"lemma#pos keys    {len(store)}")
    print(f"nonzero keys      {len(lemma_pos_keys(store, only_nonzero=True))}")
    print(f"skipped lines     {store.skipped_lines}")
    print(f"parse warnings    {len(store.warnings)}")
    if args.key:
        profile = store.profile(args.key.lower())
        if profile is None:
            raise DataError(f"key {args.key!r} not found")
        print(f"\n{args.key}")
        print(f"  pos scores {list(profile.pos_scores)}")
        print(f"  neg scores {list(profile.neg_scores)}")
        features = all_formula_features(profile)
        for fid in FORMULA_IDS:
            out = apply_formula(fid, profile)
            m = map_polarity(out, "m").value
            if fid == "uni":
                print(f"  {fid:<8} f=({out.f_pos:.6f}, {out.f_neg:.6f})  signed {m:+.6f}")
            else:
                d = map_polarity(out, "d").value
                print(f"  {fid:<8} f=({out.f_pos:.6f}, {out.f_neg:.6f})  m {m:+.6f}  d {d:+.6f}")
        assert len(features) == 27
    return 0


def cmd_coverage(args) -> int:
    lexica = {name: read_lexicon(path) for name, path in _parse_named_paths(args.lexicon).items()}
    if not lexica:
        raise DataError("need at least one --lexicon NAME=PATH")
    stoplist = None
    if args.stopwords == "on":
        stoplist = load_stoplist(args.stoplist) if args.stoplist else default_stoplist()
    print("dataset\tlexicon\tcoverage\tmatched\ttotal\tundecidable")
    for dataset_path in args.dataset:
        dataset = load_dataset(dataset_path)
        if not dataset:
            raise DataError(f"dataset {dataset_path} is empty")
        for name in sorted(lexica):
            cov = coverage(dataset, lexica[name], stoplist)
            print(f"{Path(dataset_path).stem}\t{name}\t{cov.token_coverage:.6f}"
                  f"\t{cov.matched_tokens}\t{cov.total_tokens}\t{cov.undecidable_sentences}")
    return 0


# --------------------------------------------------------------------------
# argument wiring
# --------------------------------------------------------------------------

# flags a command cannot run without; satisfiable via flags or --config
_REQUIRED = {
    "eval-priors": ("swn", "gold", "gold_format", "output_dir", "seed"),
    "build-lexicon": ("swn", "output"),
    "eval-sentences": ("dataset", "lexicon", "output_dir", "seed"),
    "inspect": ("swn",),
    "coverage": ("dataset", "lexicon"),
}


def _build_parser() -> tuple[_Parser, dict[str, _Parser]]:
    parser = _Parser(prog="priorlex", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"priorlex {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    subparsers: dict[str, _Parser] = {}

    def add(name, help, func):
        p = sub.add_parser(name, help=help)
        p.add_argument("--config", help="TOML file with flag defaults", dest="_config")
        p.set_defaults(func=func)
        subparsers[name] = p
        return p

    def common_learning(p):
        p.add_argument("--seed", type=int)
        p.add_argument("--repeats", type=int, default=5)
        p.add_argument("--train-fraction", type=float, default=0.7)
        p.add_argument("--folds", type=int, default=10)
        p.add_argument("--resamples", type=int, default=1000,
                       help="stability-selection resamples")
        p.add_argument("--no-feature-selection", action="store_true")
        p.add_argument("--randomization-iterations", type=int, default=10000)

    p = add("eval-priors", "evaluate formulae and ensemble on a gold lexicon", cmd_eval_priors)
    p.add_argument("--swn")
    p.add_argument("--gold")
    p.add_argument("--gold-format", choices=[f.replace("_", "-") for f in GOLD_FORMATS])
    p.add_argument("--output-dir")
    common_learning(p)

    p = add("build-lexicon", "score every lemma#PoS of the resource", cmd_build_lexicon)
    p.add_argument("--swn")
    p.add_argument("--gold")
    p.add_argument("--gold-format", default="generic-tsv",
                   choices=[f.replace("_", "-") for f in GOLD_FORMATS])
    p.add_argument("--output")
    p.add_argument("--model-output")
    p.add_argument("--formula", choices=FORMULA_IDS,
                   help="export one formula's scores instead of training")
    p.add_argument("--strategy", choices=("m", "d"), default="m")
    p.add_argument("--nonzero-only", action="store_true")
    p.add_argument("--seed", type=int)
    p.add_argument("--folds", type=int, default=10)
    p.add_argument("--resamples", type=int, default=1000)
    p.add_argument("--no-feature-selection", action="store_true")

    p = add("eval-sentences", "evaluate lexica on tagged sentence datasets", cmd_eval_sentences)
    p.add_argument("--dataset", action="append")
    p.add_argument("--lexicon", action="append", metavar="NAME=PATH")
    p.add_argument("--output-dir")
    p.add_argument("--seed", type=int)
    p.add_argument("--stopwords", choices=("on", "off", "both"), default="off")
    p.add_argument("--stoplist", help="stop-word file; default is the bundled list")
    p.add_argument("--neg-threshold", type=float, default=-0.5)
    p.add_argument("--pos-threshold", type=float, default=0.5)
    p.add_argument("--undecidable", choices=("wrong", "drop", "random"), default="wrong")
    p.add_argument("--randomization-iterations", type=int, default=10000)

    p = add("inspect", "show store statistics or one key's scores", cmd_inspect)
    p.add_argument("--swn")
    p.add_argument("--key")

    p = add("coverage", "token coverage of lexica over datasets", cmd_coverage)
    p.add_argument("--dataset", action="append")
    p.add_argument("--lexicon", action="append", metavar="NAME=PATH")
    p.add_argument("--stopwords", choices=("on", "off"), default="off")
    p.add_argument("--stoplist")
    return parser, subparsers


def _apply_config(argv: list[str], subparsers: dict[str, _Parser]) -> None:
    """Load --config TOML values as subcommand defaults; explicit flags win."""
    if "--config" not in argv:
        return
    at = argv.index("--config")
    if at + 1 >= len(argv):
        raise SystemExit("priorlex: error: --config needs a file path")
    config_path = Path(argv[at + 1])
    try:
        config = tomllib.loads(config_path.read_text(encoding="utf-8"))
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise SystemExit(f"priorlex: error: cannot load config {config_path}: {exc}")
    defaults = {k.replace("-", "_"): v for k, v in config.items()}
    for p in subparsers.values():
        p.set_defaults(**defaults)


def _check_required(args) -> None:
    missing = [name for name in _REQUIRED[args.command]
               if getattr(args, name, None) in (None, [])]
    if missing:
        flags = ", ".join("--" + n.replace("_", "-") for n in missing)
        raise SystemExit(f"priorlex {args.command}: error: missing required: {flags}")
    if args.command == "build-lexicon" and not args.formula:
        if not args.gold:
            raise SystemExit("priorlex build-lexicon: error: needs --gold or --formula")
        if args.seed is None:
            raise SystemExit("priorlex build-lexicon: error: training needs --seed")


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, subparsers = _build_parser()
    try:
        _apply_config(argv, subparsers)
        args = parser.parse_args(argv)
        _check_required(args)
    except SystemExit as exc:
        if exc.code in (0, None):
            return 0
        if isinstance(exc.code, str):
            print(exc.code, file=sys.stderr)
            return 1
        return 1 if exc.code else 0
    try:
        return args.func(args)
    except (DataError, ValueError) as exc:
        print(f"priorlex: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
