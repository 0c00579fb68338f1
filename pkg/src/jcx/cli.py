"""Command-line front end.

Subcommands mirror the pipeline stages: fit and generate wrap the text
model, jc measures the joint complexity of two concrete files, cnm
evaluates the expected prefix complexity of two fitted sources, kernel
and predict expose the regime classification and its growth law, and
montecarlo / curve / discriminate run the simulation harnesses that the
figure pipelines are built from.

Conventions shared by every subcommand:

- determinism: a master --seed fans out to per-trial generators through
  splitmix64, so output bytes do not depend on --threads or timing;
- tabular output is CSV (or JSON rows with --format json) written to
  --out or stdout; report-style output (jc, kernel, discriminate) is a
  single JSON object regardless of --format;
- all logarithms in emitted numbers are natural logs;
- exit codes: 0 success, 2 bad input, 3 numeric failure, 4 capacity.

The JCX_STATE_CAP environment variable raises or lowers the state-space
cap consulted by model estimation (default 4096).
"""

from __future__ import annotations

import argparse
import json
import math
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor

from . import asymptotics, factorindex, kernel, prefixcx, textmodel
from ._rng import splitmix64
from .errors import CapacityError, InputError, NumericError

CSV_COMMENT = "# value/err columns: natural-log conventions; see README"


# ---------------------------------------------------------------------------
# small IO helpers
# ---------------------------------------------------------------------------


def _read_tokens(path: str, tokenizer: str) -> list:
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if tokenizer == "bytes":
        return textmodel.tokenize(raw, "bytes")
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputError(f"{path} is not valid UTF-8; use --tokenizer bytes") from exc
    return textmodel.tokenize(text, tokenizer)


def _parse_grid(spec: str, what: str) -> list[int]:
    try:
        grid = [int(part) for part in spec.split(",") if part != ""]
    except ValueError as exc:
        raise InputError(f"{what} must be a comma-separated integer list, got {spec!r}") from exc
    if not grid:
        raise InputError(f"{what} is empty")
    if any(v < 1 for v in grid):
        raise InputError(f"{what} entries must be >= 1")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise InputError(f"{what} must be strictly increasing")
    return grid


def _open_out(path: str | None, binary: bool = False):
    if path is None or path == "-":
        return (sys.stdout.buffer if binary else sys.stdout), False
    try:
        return open(path, "wb" if binary else "w", encoding=None if binary else "utf-8"), True
    except OSError as exc:
        raise InputError(f"cannot open {path} for writing: {exc}") from exc


def _emit_rows(rows: list[dict], header: list[str], args, comment: str | None = None) -> None:
    """Write rows as CSV (default) or a JSON array, sorted upstream."""
    fh, close = _open_out(args.out)
    try:
        if args.format == "json":
            fh.write(json.dumps(rows, indent=2))
            fh.write("\n")
            return
        if comment is not None:
            fh.write(comment + "\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(row[k]) for k in header) + "\n")
    finally:
        if close:
            fh.close()


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _emit_report(obj: dict, args) -> None:
    fh, close = _open_out(args.out)
    try:
        fh.write(json.dumps(obj, indent=2))
        fh.write("\n")
    finally:
        if close:
            fh.close()


def _load_pair(args) -> tuple[textmodel.MarkovModel, textmodel.MarkovModel]:
    return textmodel.load(args.model1), textmodel.load(args.model2)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_fit(args) -> int:
    corpus = _read_tokens(args.corpus, args.tokenizer)
    model = textmodel.estimate(corpus, args.order, args.smoothing)
    textmodel.save(model, args.out_model)
    return 0


def cmd_generate(args) -> int:
    model = textmodel.load(args.model)
    symbols = textmodel.generate(model, args.length, splitmix64(args.seed, 0))
    rendered = textmodel.render(symbols)
    # exactly the sampled symbols, no trailing newline: files written here
    # feed jc and fit, where every byte is a token
    fh, close = _open_out(args.out, binary=isinstance(rendered, bytes))
    try:
        fh.write(rendered)
    finally:
        if close:
            fh.close()
    return 0


def cmd_jc(args) -> int:
    x = _read_tokens(args.fileX, args.tokenizer)
    y = _read_tokens(args.fileY, args.tokenizer)
    report = factorindex.joint_complexity(x, y)
    j = report.j_excl + 1 if args.include_empty else report.j_excl
    _emit_report(
        {
            "n": report.n,
            "m": report.m,
            "j": j,
            "d": report.d,
            "include_empty": bool(args.include_empty),
            "no_common_factor": report.no_common_factor,
        },
        args,
    )
    return 0


def cmd_cnm(args) -> int:
    m1, m2 = _load_pair(args)
    ns = _parse_grid(args.n, "--n")
    ms = _parse_grid(args.m, "--m") if args.m else ns
    methods = ["recurrence", "wordsum"] if args.method == "both" else [args.method]
    rows: list[dict] = []
    if "recurrence" in methods:
        cap = max(max(ns), max(ms))
        table = prefixcx.recurrence_c(m1, m2, cap)
        for n in ns:
            for m in ms:
                rows.append({"n": n, "m": m, "value": table.value(n, m),
                             "error_bound": 0.0, "method": "recurrence"})
    if "wordsum" in methods:
        cfg = prefixcx.WordSumConfig(tau=args.tau) if args.tau is not None else None
        for n in ns:
            for m in ms:
                res = prefixcx.word_sum_c(m1, m2, n, m, cfg)
                rows.append({"n": n, "m": m, "value": res.value,
                             "error_bound": res.error_bound, "method": "wordsum"})
    rows.sort(key=lambda r: (r["n"], r["m"], r["method"]))
    _emit_rows(rows, ["n", "m", "value", "error_bound", "method"], args)
    return 0


def cmd_kernel(args) -> int:
    m1, m2 = _load_pair(args)
    sol = kernel.solve_kernel(kernel.build_kernel(m1, m2))
    _emit_report(
        {
            "regime": sol.regime,
            "c1": sol.c1,
            "c2": sol.c2,
            "kappa": sol.kappa,
            "c0": sol.c0,
            "periodicity": {"kind": sol.periodicity.kind,
                            "periods": list(sol.periodicity.periods)},
            "gamma0": sol.gamma0,
        },
        args,
    )
    return 0


def cmd_predict(args) -> int:
    m1, m2 = _load_pair(args)
    K = kernel.build_kernel(m1, m2)
    sol = kernel.solve_kernel(K)
    profile = asymptotics.asymptotic_profile(K, sol)
    exponent = sol.kappa if sol.kappa is not None else sol.c0
    rows = []
    for n in _parse_grid(args.n, "--n"):
        value = asymptotics.evaluate_profile(profile, n)
        if args.q_terms:
            value += (n ** (sol.kappa or 0.0)) * asymptotics.q_truncated(
                profile, math.log(n), args.q_terms, args.q_terms
            )
        rows.append({"n": n, "regime": sol.regime, "prediction": value,
                     "kappa_or_c0": exponent})
    _emit_rows(rows, ["n", "regime", "prediction", "kappa_or_c0"], args)
    return 0


def _mc_point(m1, m2, n: int, trials: int, master: int, idx: int, threads: int):
    """Mean and standard error of J over `trials` generated pairs."""

    def one(t: int) -> int:
        base = 2 * (idx * trials + t)
        x = textmodel.generate(m1, n, splitmix64(master, base))
        y = textmodel.generate(m2, n, splitmix64(master, base + 1))
        return factorindex.joint_complexity(x, y).j_excl

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            values = list(pool.map(one, range(trials)))
    else:
        values = [one(t) for t in range(trials)]
    mean = statistics.fmean(values)
    err = statistics.stdev(values) / math.sqrt(trials) if trials > 1 else 0.0
    return mean, err


def cmd_montecarlo(args) -> int:
    m1, m2 = _load_pair(args)
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    rows = []
    for idx, n in enumerate(_parse_grid(args.n, "--n")):
        mean, err = _mc_point(m1, m2, n, args.trials, args.seed, idx, args.threads)
        rows.append({"n": n, "method": "exactMC", "value": mean, "err": err})
    rows.sort(key=lambda r: (r["n"], r["method"]))
    _emit_rows(rows, ["n", "method", "value", "err"], args, comment=CSV_COMMENT)
    return 0


def cmd_curve(args) -> int:
    m1, m2 = _load_pair(args)
    if args.trials < 1:
        raise InputError("--trials must be >= 1")
    ns = _parse_grid(args.n, "--n")
    K = kernel.build_kernel(m1, m2)
    sol = kernel.solve_kernel(K)
    profile = asymptotics.asymptotic_profile(K, sol)
    rows = []
    for idx, n in enumerate(ns):
        mean, err = _mc_point(m1, m2, n, args.trials, args.seed, idx, args.threads)
        rows.append({"n": n, "method": "exactMC", "value": mean, "err": err})
        res = prefixcx.word_sum_c(m1, m2, n, n)
        rows.append({"n": n, "method": "wordsum", "value": res.value,
                     "err": res.error_bound})
        rows.append({"n": n, "method": "predict",
                     "value": asymptotics.evaluate_profile(profile, n), "err": 0.0})
    rec_ns = [n for n in ns if n <= prefixcx.RECURRENCE_CAP]
    if rec_ns:
        table = prefixcx.recurrence_c(m1, m2, max(rec_ns))
        for n in rec_ns:
            rows.append({"n": n, "method": "recurrence", "value": table.value(n, n),
                         "err": 0.0})
    rows.sort(key=lambda r: (r["n"], r["method"]))
    _emit_rows(rows, ["n", "method", "value", "err"], args, comment=CSV_COMMENT)
    return 0


def cmd_discriminate(args) -> int:
    x = _read_tokens(args.fileX, args.tokenizer)
    y = _read_tokens(args.fileY, args.tokenizer)
    with open(args.fileX, "rb") as fh:
        bytes_x = fh.read()
    with open(args.fileY, "rb") as fh:
        bytes_y = fh.read()
    report = factorindex.joint_complexity(x, y)
    out = {
        "fileX": args.fileX,
        "fileY": args.fileY,
        "n": report.n,
        "m": report.m,
        "j": report.j_excl,
        "d": report.d,
        "strongly_same": bytes_x == bytes_y,
        "no_common_factor": report.no_common_factor,
    }
    if bytes_x == bytes_y:
        out["note"] = ("identical inputs: joint complexity grows quadratically "
                       "and d tends to 2 - 2 ln n/ln n, not to the Markov law")
    alphabet = sorted(set(x) | set(y))
    mx = textmodel.estimate(x, args.order, args.smoothing, alphabet=alphabet)
    my = textmodel.estimate(y, args.order, args.smoothing, alphabet=alphabet)
    sol = kernel.solve_kernel(kernel.build_kernel(mx, my))
    out["regime"] = sol.regime
    out["kappa"] = sol.kappa
    out["one_minus_kappa"] = None if sol.kappa is None else 1.0 - sol.kappa
    _emit_report(out, args)
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads for trial loops (default 1; output "
                             "is identical for any value)")
    common.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="tabular output format (reports are always JSON)")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    tok = dict(choices=("bytes", "chars", "ws"), default="chars",
               help="how to split input files into symbols: raw bytes, "
                    "Unicode characters, or whitespace-split tokens "
                    "(default chars)")

    p = argparse.ArgumentParser(
        prog="jcx",
        description="Joint string complexity toolkit: fit Markov sources, "
                    "measure and predict shared-factor growth.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    q = sub.add_parser("fit", parents=[common], help="estimate a Markov model from a corpus")
    q.add_argument("corpus", help="input text file")
    q.add_argument("--order", type=int, default=3, help="Markov order (default 3)")
    q.add_argument("--smoothing", type=float, default=0.0,
                   help="additive smoothing pseudo-count (default 0)")
    q.add_argument("--tokenizer", **tok)
    q.add_argument("--out-model", required=True, help="where to write the model JSON")
    q.set_defaults(func=cmd_fit)

    q = sub.add_parser("generate", parents=[common], help="sample text from a model")
    q.add_argument("--model", required=True, help="model JSON path")
    q.add_argument("--length", type=int, required=True, help="number of symbols")
    q.set_defaults(func=cmd_generate)

    q = sub.add_parser("jc", parents=[common],
                       help="joint complexity of two files (exact)")
    q.add_argument("fileX")
    q.add_argument("fileY")
    q.add_argument("--tokenizer", **tok)
    q.add_argument("--include-empty", action="store_true",
                   help="count the empty word as a common factor")
    q.set_defaults(func=cmd_jc)

    q = sub.add_parser("cnm", parents=[common],
                       help="expected prefix complexity C(n,m) of two sources")
    q.add_argument("--model1", required=True)
    q.add_argument("--model2", required=True)
    q.add_argument("--n", required=True, help="comma-separated n grid")
    q.add_argument("--m", default=None, help="comma-separated m grid (default: the n grid)")
    q.add_argument("--method", choices=("recurrence", "wordsum", "both"),
                   default="both")
    q.add_argument("--tau", type=float, default=None,
                   help="word-sum per-branch pruning threshold override")
    q.set_defaults(func=cmd_cnm)

    q = sub.add_parser("kernel", parents=[common],
                       help="classify the pair's asymptotic regime")
    q.add_argument("--model1", required=True)
    q.add_argument("--model2", required=True)
    q.set_defaults(func=cmd_kernel)

    q = sub.add_parser("predict", parents=[common],
                       help="closed-form asymptotic prediction of C(n,n)")
    q.add_argument("--model1", required=True)
    q.add_argument("--model2", required=True)
    q.add_argument("--n", required=True, help="comma-separated n grid")
    q.add_argument("--q-terms", type=int, default=0,
                   help="add the truncated periodic term with this lattice range")
    q.set_defaults(func=cmd_predict)

    q = sub.add_parser("montecarlo", parents=[common],
                       help="simulate E[J(n,n)] for two fitted sources")
    q.add_argument("--model1", required=True)
    q.add_argument("--model2", required=True)
    q.add_argument("--n", required=True, help="comma-separated n grid")
    q.add_argument("--trials", type=int, default=30)
    q.set_defaults(func=cmd_montecarlo)

    q = sub.add_parser("curve", parents=[common],
                       help="exactMC + wordsum + recurrence + predict in one CSV")
    q.add_argument("--model1", required=True)
    q.add_argument("--model2", required=True)
    q.add_argument("--n", required=True, help="comma-separated n grid")
    q.add_argument("--trials", type=int, default=30)
    q.set_defaults(func=cmd_curve)

    q = sub.add_parser("discriminate", parents=[common],
                       help="same-source test for two files")
    q.add_argument("fileX")
    q.add_argument("fileY")
    q.add_argument("--order", type=int, default=3,
                   help="Markov order for the per-file fits (default 3)")
    q.add_argument("--smoothing", type=float, default=0.0)
    q.add_argument("--tokenizer", **tok)
    q.set_defaults(func=cmd_discriminate)

    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
