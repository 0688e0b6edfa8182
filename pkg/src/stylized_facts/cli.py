"""Command-line front end: ``stylized-facts analyze | synth | validate``.

Errors end the process with one JSON line on stderr and exit status 2 (input),
3 (computation) or 4 (configuration).
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import os
import sys
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from . import csvio
from .dependence import (
    abs_power_autocorr,
    fit_decay,
    pearson_autocorr,
    spearman_autocorr,
    with_permutation_bands,
)
from .errors import ConfigError, InputError, InsufficientData, StylizedFactsError
from .leverage import DetectionConfig, leverage_profile
from .rolling import AnalysisConfig, WindowSpec, format_regime_summary, regime_summary, run_windows
from .series import log_returns, moments, normalize, resample_locf
from .synth import DEFAULTS, GeneratorSpec, generate
from .tail import ccdf, fit_normalized_tail

ANALYSES = ("moments", "tail", "linear", "spearman", "abs", "decay", "leverage", "windows")
KINDS = ("ticks", "prices", "returns")


@dataclass
class RunConfig:
    input: str = "-"
    kind: str = "returns"
    delta_t: float | None = None
    max_lag: int = 100
    n_shuffles: int = 1000
    seed: int = 0
    fit_lo: int = 1
    fit_hi: int = 100
    window_len: int = 1600
    window_step: int = 200
    leverage_max_lag: int = 50
    events: str | None = None
    out: str = "results"
    only: tuple = ANALYSES

    def validate(self):
        def need(cond, msg):
            if not cond:
                raise ConfigError(msg)

        need(self.kind in KINDS, f"--kind must be one of {', '.join(KINDS)}")
        need(self.kind != "ticks" or self.delta_t is not None, "--delta-t is required for ticks")
        need(self.delta_t is None or self.delta_t > 0, "--delta-t must be positive")
        need(self.max_lag >= 1, "--max-lag must be at least 1")
        need(self.n_shuffles >= 100, "--n-shuffles must be at least 100")
        need(1 <= self.fit_lo < self.fit_hi, "need 1 <= --fit-lo < --fit-hi")
        need(self.fit_hi <= self.max_lag, "--fit-hi cannot exceed --max-lag")
        need(self.window_len >= 32, "--window-len must be at least 32")
        need(0 < self.window_step <= self.window_len, "need 0 < --window-step <= --window-len")
        need(self.leverage_max_lag >= 4, "--leverage-max-lag must be at least 4")
        self.only = tuple(self.only)
        unknown = set(self.only) - set(ANALYSES)
        need(not unknown, f"unknown --only item(s): {', '.join(sorted(unknown))}")
        need(bool(self.only), "--only is empty")
        return self

    def to_dict(self):
        d = dataclasses.asdict(self)
        d["only"] = list(self.only)
        return d


def _sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def load_returns(config):
    """Returns series for the configured input plus any intermediate grid."""
    if config.kind == "ticks":
        ticks = csvio.read_ticks(config.input)
        grid = resample_locf(ticks, config.delta_t)
        return log_returns(grid), grid
    if config.kind == "prices":
        grid = csvio.read_prices(config.input, config.delta_t)
        return log_returns(grid), grid
    return csvio.read_returns(config.input, config.delta_t), None


def _correlogram_rows(bundle):
    low = bundle.band_low if bundle.band_low is not None else [None] * len(bundle.lags)
    high = bundle.band_high if bundle.band_high is not None else [None] * len(bundle.lags)
    pv = bundle.p_values if bundle.p_values is not None else [None] * len(bundle.lags)
    return zip(bundle.lags, bundle.values, low, high, pv)


CORR_HEADER = ("lag", "value", "band_low", "band_high", "p_value")


def run_full_pipeline(config):
    """Run the requested analyses and write their artifacts under ``config.out``.

    Returns the manifest dictionary (also written as ``run_manifest.json``).
    """
    config.validate()
    out = csvio.ensure_dir(config.out)
    written = []

    def path(name):
        written.append(name)
        return os.path.join(out, name)

    if config.input == "-":
        data = sys.stdin.read()
        saved = os.path.join(out, "input.csv")
        with open(saved, "w") as fh:
            fh.write(data)
        config = dataclasses.replace(config, input=os.path.abspath(saved))
    elif not os.path.isfile(config.input):
        raise InputError(f"input file not found: {config.input}")
    else:
        config = dataclasses.replace(config, input=os.path.abspath(config.input))
    events = csvio.read_events(config.events) if config.events else []

    returns, grid = load_returns(config)
    x = returns.values
    only = set(config.only)
    full = only == set(ANALYSES)
    skipped = {}

    if full:
        if grid is not None:
            csvio.write_csv(path("grid.csv"), ("timestamp", "price"),
                            ((csvio.format_time(t), p) for t, p in grid))
        csvio.write_csv(path("returns.csv"), ("timestamp", "return"),
                        ((csvio.format_time(t), r) for t, r in zip(returns.times, x)))

    if "moments" in only:
        pop = moments(x)
        samp = moments(x, bias=False)
        csvio.write_json(path("moments.json"), {
            "count": pop.count,
            "mean": pop.mean,
            "std": pop.std_dev,
            "skewness": pop.skewness,
            "kurtosis": pop.kurtosis,
            "kurtosis_raw": pop.raw_kurtosis,
            "convention": "population (1/n) estimators, excess kurtosis",
            "sample": {
                "std": samp.std_dev,
                "skewness": samp.skewness,
                "kurtosis": samp.kurtosis,
                "kurtosis_raw": samp.raw_kurtosis,
            },
            "delta_t": returns.delta_t,
        })

    if "tail" in only:
        norm = normalize(returns)
        fit = fit_normalized_tail(norm)
        csvio.write_json(path("tailfit.json"), {**fit.to_dict(), "pooled": "abs",
                                               "mean_used": norm.mean_used,
                                               "sigma_used": norm.sigma_used})
        mags = np.abs(norm.values)
        c = ccdf(mags[mags > 0])
        csvio.write_csv(path("ccdf.csv"), ("value", "ccdf"), zip(c.sorted_values, c.ccdf))

    def banded(series, bundle):
        return with_permutation_bands(bundle, series, config.n_shuffles, seed=config.seed)

    if "linear" in only:
        lin = banded(x, pearson_autocorr(x, config.max_lag))
        csvio.write_csv(path("correlogram_linear.csv"), CORR_HEADER, _correlogram_rows(lin))

    if "spearman" in only:
        sp = spearman_autocorr(x, config.max_lag)
        csvio.write_csv(path("correlogram_spearman.csv"), CORR_HEADER, _correlogram_rows(sp))

    if "abs" in only or "decay" in only:
        abs_corr = {a: abs_power_autocorr(x, a, config.max_lag) for a in (1.0, 2.0)}
        if "abs" in only:
            for a, bundle in abs_corr.items():
                bundle = banded(np.abs(x) ** a, bundle)
                csvio.write_csv(path(f"correlogram_abs{a:g}.csv"), CORR_HEADER,
                                _correlogram_rows(bundle))
        if "decay" in only:
            fits = []
            for a, bundle in abs_corr.items():
                try:
                    fits.append(fit_decay(bundle, (config.fit_lo, config.fit_hi)).to_dict())
                except InsufficientData as exc:
                    fits.append({"alpha": a, "beta": None, "error": str(exc)})
            csvio.write_json(path("decay_fits.json"), fits)

    if "leverage" in only:
        det = DetectionConfig(max_lag=config.leverage_max_lag, n_shuffles=config.n_shuffles,
                              seed=config.seed)
        prof = leverage_profile(x, det)
        cum = dict(zip(range(prof.L_cum.size), prof.L_cum))
        csvio.write_csv(path("leverage.csv"), ("lag", "L", "L_cum"),
                        ((lag, v, cum.get(int(lag))) for lag, v in zip(prof.lags, prof.L)))
        csvio.write_json(path("leverage.json"), prof.summary())

    if "windows" in only:
        spec = WindowSpec(config.window_len, config.window_step)
        if len(returns) < spec.window_len and full:
            skipped["windows"] = f"series of length {len(returns)} shorter than one window"
        else:
            acfg = AnalysisConfig(detection=DetectionConfig(
                max_lag=30, n_shuffles=config.n_shuffles, seed=config.seed))
            reports = run_windows(returns, spec, acfg)
            header = ("start_time", "std", "skew", "kurt", "beta1", "beta2", "tau0", "flags")
            csvio.write_csv(path("windows.csv"), header,
                            ([csvio.format_time(r.start_time)]
                             + [r.as_dict()[k] for k in header[1:]] for r in reports))
            summary = regime_summary(reports, events)
            csvio.write_json(path("regime_summary.json"), summary)
            with open(path("regime_summary.txt"), "w") as fh:
                fh.write(format_regime_summary(summary))

    manifest = {
        "tool": "stylized-facts",
        "version": __version__,
        "created": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "config": config.to_dict(),
        "input_sha256": _sha256(config.input),
        "n_returns": len(returns),
        "delta_t": returns.delta_t,
        "outputs": written + ["run_manifest.json"],
        "skipped": skipped,
    }
    csvio.write_json(os.path.join(out, "run_manifest.json"), manifest)
    return manifest


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _only(text):
    return tuple(s.strip() for s in text.split(",") if s.strip())


def build_parser():
    p = _Parser(prog="stylized-facts", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="run the analyses on a tick, price or return file")
    a.add_argument("--config", help="re-run from a run_manifest.json")
    a.add_argument("--input", help="input CSV, '-' for stdin (default)")
    a.add_argument("--kind", choices=KINDS)
    a.add_argument("--delta-t", type=float, help="sampling interval in seconds")
    a.add_argument("--max-lag", type=int)
    a.add_argument("--n-shuffles", type=int)
    a.add_argument("--seed", type=int)
    a.add_argument("--fit-lo", type=int)
    a.add_argument("--fit-hi", type=int)
    a.add_argument("--window-len", type=int)
    a.add_argument("--window-step", type=int)
    a.add_argument("--leverage-max-lag", type=int)
    a.add_argument("--events", help="CSV of timestamp,label event markers")
    a.add_argument("--out", help="output directory (default: results)")
    a.add_argument("--only", type=_only, help=f"comma list from: {','.join(ANALYSES)}")

    s = sub.add_parser("synth", help="write a synthetic returns CSV")
    s.add_argument("--kind", required=True, choices=sorted(DEFAULTS))
    s.add_argument("--length", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--delta-t", type=float, default=18000.0)
    s.add_argument("--start-time", type=float, default=0.0)
    s.add_argument("--param", action="append", default=[], metavar="NAME=VALUE",
                   help="model parameter, repeatable (e.g. gamma=0.3)")
    s.add_argument("--out", default="-", help="output file, '-' for stdout")

    v = sub.add_parser("validate", help="report problems in an input file")
    v.add_argument("--input", required=True)
    v.add_argument("--kind", choices=KINDS, default="ticks")
    v.add_argument("--delta-t", type=float)
    return p


def _config_from_args(args):
    base = RunConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                stored = json.load(fh)["config"]
        except (OSError, ValueError, KeyError) as exc:
            raise InputError(f"cannot load manifest {args.config}: {exc}") from exc
        base = RunConfig(**{**stored, "only": tuple(stored.get("only", ANALYSES))})
    overrides = {f.name: getattr(args, f.name) for f in dataclasses.fields(RunConfig)
                 if getattr(args, f.name, None) is not None}
    return dataclasses.replace(base, **overrides)


def _synth(args):
    params = {}
    for item in args.param:
        name, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"--param expects NAME=VALUE, got {item!r}")
        try:
            params[name.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"--param value must be a number: {item!r}") from None
    spec = GeneratorSpec(args.kind, args.length, args.seed, params, args.delta_t, args.start_time)
    series = generate(spec)
    text = csvio.csv_text(("timestamp", "return"),
                          ((csvio.format_time(t), r) for t, r in zip(series.times, series.values)))
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        if args.command == "analyze":
            manifest = run_full_pipeline(_config_from_args(args))
            for name in manifest["outputs"]:
                print(os.path.join(manifest["config"]["out"], name))
        elif args.command == "synth":
            _synth(args)
        else:
            report = csvio.validate_input(args.input, args.kind, args.delta_t)
            sys.stdout.write(csvio.dumps_json(report))
            if report["violations"]:
                return InputError.exit_code
        return 0
    except StylizedFactsError as exc:
        code, kind, line, message = exc.exit_code, type(exc).__name__, getattr(exc, "line", None), str(exc)
    except Exception as exc:  # any other failure is still a computation error
        code, kind, line, message = 3, type(exc).__name__, None, str(exc)
    err = {"error": kind, "exit_code": code, "message": message}
    if line is not None:
        err["line"] = line
    sys.stderr.write(json.dumps(err) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
