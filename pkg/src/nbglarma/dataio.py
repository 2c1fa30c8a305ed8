"""CSV input/output with strict schemas.

All files use UTF-8, '\n' line endings, a header row and '.' as the
decimal separator. Readers reject malformed content with a diagnostic
naming the offending cell. Floats are written with repr (shortest
round-trip), so re-reading reproduces values bit-for-bit.
"""

import csv
import math

import numpy as np

from .errors import InputError


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])


def _read_table(path):
    try:
        with open(path, "r", newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            table = list(reader)
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8 ({exc})") from exc
    if not table:
        raise InputError(f"{path}: empty file, expected a header row")
    width = len(table[0])
    for i, row in enumerate(table[1:], start=2):
        if len(row) != width:
            raise InputError(
                f"{path}: line {i} has {len(row)} cells, header has {width}"
            )
    if len(table) < 2:
        raise InputError(f"{path}: no data rows below the header")
    return table


def _parse_float(path, line, column, text) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise InputError(
            f"{path}: line {line}, column {column!r}: {text!r} is not a number"
        ) from exc
    if not math.isfinite(value):
        raise InputError(
            f"{path}: line {line}, column {column!r}: non-finite value {text!r}"
        )
    return value


def write_design_csv(path, x) -> None:
    x = np.asarray(x)
    header = [f"x{j}" for j in range(x.shape[1])]
    write_csv(path, header, x)


def read_design_csv(path) -> np.ndarray:
    table = _read_table(path)
    header = table[0]
    out = np.empty((len(table) - 1, len(header)))
    for i, row in enumerate(table[1:], start=2):
        for j, cell in enumerate(row):
            out[i - 2, j] = _parse_float(path, i, header[j], cell)
    if not np.all(out[:, 0] == 1.0):
        bad = int(np.flatnonzero(out[:, 0] != 1.0)[0])
        raise InputError(
            f"{path}: line {bad + 2}, column {header[0]!r}: intercept column "
            f"must be constant 1, found {out[bad, 0]!r}"
        )
    return out


def write_counts_csv(path, y, names=None) -> None:
    y = np.asarray(y)
    if y.ndim == 1:
        y = y[:, None]
    if names is None:
        names = ["y"] if y.shape[1] == 1 else [f"y{k}" for k in range(y.shape[1])]
    write_csv(path, names, y)


def read_counts_csv(path):
    """Counts with one series per column. Returns (names, n x k int64 array)."""
    table = _read_table(path)
    names = table[0]
    out = np.empty((len(table) - 1, len(names)), dtype=np.int64)
    for i, row in enumerate(table[1:], start=2):
        for j, cell in enumerate(row):
            value = _parse_float(path, i, names[j], cell)
            if value != math.floor(value) or value < 0:
                raise InputError(
                    f"{path}: line {i}, column {names[j]!r}: counts must be "
                    f"nonnegative integers, found {cell!r}"
                )
            out[i - 2, j] = int(value)
    return names, out


def write_truth_csv(path, beta, gamma, alpha) -> None:
    rows = [("beta", k, v) for k, v in enumerate(np.asarray(beta))]
    rows += [("gamma", k + 1, v) for k, v in enumerate(np.asarray(gamma))]
    rows.append(("alpha", "", float(alpha)))
    write_csv(path, ["parameter", "index", "value"], rows)


def read_truth_csv(path):
    """Returns (beta, gamma, alpha) from a truth.csv file."""
    table = _read_table(path)
    beta, gamma, alpha = {}, {}, None
    for i, (param, index, value) in enumerate(table[1:], start=2):
        v = _parse_float(path, i, "value", value)
        if param == "beta":
            beta[int(index)] = v
        elif param == "gamma":
            gamma[int(index)] = v
        elif param == "alpha":
            alpha = v
        else:
            raise InputError(f"{path}: line {i}, column 'parameter': unknown {param!r}")
    if alpha is None:
        raise InputError(f"{path}: missing alpha row")
    beta_arr = np.array([beta[k] for k in sorted(beta)])
    gamma_arr = np.array([gamma[k] for k in sorted(gamma)])
    return beta_arr, gamma_arr, alpha


def benchmark_header(q_max: int) -> list[str]:
    return (["n", "q", "p", "alpha_true", "sparsity", "method", "threshold",
             "replicate", "tpr", "fpr", "tpr_minus_fpr"]
            + [f"gamma_hat_{k}" for k in range(1, q_max + 1)]
            + ["alpha_hat", "runtime_s", "status"])


def write_benchmark_csv(path, rows, q_max: int) -> None:
    """Tidy benchmark rows; gamma_hat is padded to q_max columns."""
    out = []
    for r in rows:
        gammas = list(r["gamma_hat"]) + [None] * (q_max - len(r["gamma_hat"]))
        out.append([r["n"], r["q"], r["p"], r["alpha_true"], r["sparsity"],
                    r["method"], r["threshold"], r["replicate"], r["tpr"],
                    r["fpr"], r["tpr_minus_fpr"], *gammas, r["alpha_hat"],
                    r["runtime_s"], r["status"]])
    write_csv(path, benchmark_header(q_max), out)


def write_summary_csv(path, summaries) -> None:
    header = ["n", "q", "p", "method", "threshold", "n_replicates", "n_ok",
              "tpr_mean", "tpr_sd", "fpr_mean", "fpr_sd",
              "tpr_minus_fpr_mean", "tpr_minus_fpr_sd",
              "runtime_s_mean", "runtime_s_sd"]
    write_csv(path, header, [[s[k] for k in header] for s in summaries])
