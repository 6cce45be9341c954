"""Command line interface.

Exit codes: 0 success, 1 invalid arguments or unsatisfiable domain request,
2 coverage/resource refusal, 3 verification failure.  Errors print one line
to stderr: "ERROR <code>: <message>".  All output is deterministic for a
given command line (and for bit-identical runs across thread counts).
"""

from __future__ import annotations

import io
import json
import math
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import __version__, _kernels, bertrand, classify, cramer, special, stats
from .engine import Multiplier, PrimeTable, build_table
from .errors import (
    ChainStallError,
    CoverageError,
    IncompleteResultError,
    MemoryCapError,
    VerificationFailure,
)

_FORMATS = ("json", "csv", "bfile")


@dataclass(frozen=True)
class RunConfig:
    """Resolved, validated run parameters shared by the subcommands."""

    m: Multiplier
    fmt: str
    threads: int
    memory_cap: int | None
    out: str | None

    @classmethod
    def from_options(cls, m_str, fmt, threads, memory_cap, out) -> "RunConfig":
        m = Multiplier.parse(m_str)
        if fmt not in _FORMATS:
            raise ValueError(f"format must be one of {_FORMATS}")
        if threads < 0:
            raise ValueError("threads must be >= 0 (0 = library default)")
        if memory_cap is not None and memory_cap <= 0:
            raise ValueError("memory cap must be positive bytes")
        return cls(m, fmt, threads, memory_cap, out)

    def make_table(self, limit: int) -> PrimeTable:
        if self.threads and _kernels.active_backend() == "numba":
            import numba

            # never exceed what numba detected at startup
            numba.set_num_threads(min(self.threads, numba.config.NUMBA_NUM_THREADS))
        return build_table(int(limit), memory_cap=self.memory_cap)


def _common(f):
    f = click.option("--m", "m_str", default="2", show_default=True,
                     help="Interval multiplier: integer or num/den rational > 1.")(f)
    f = click.option("--format", "fmt", default="json", show_default=True,
                     help="Output format: json, csv, or bfile (sequences only).")(f)
    f = click.option("--threads", default=0, show_default=True,
                     envvar="PRIMEGAPS_THREADS",
                     help="Worker threads for the accelerated backend; 0 = default.")(f)
    f = click.option("--memory-cap", default=None, type=int,
                     envvar="PRIMEGAPS_MEMORY_CAP",
                     help="Refuse builds whose estimated working set exceeds this many bytes.")(f)
    f = click.option("--out", default=None, type=click.Path(),
                     help="Write output to this file instead of stdout.")(f)
    return f


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_json(cfg: RunConfig, obj) -> None:
    _emit(cfg, json.dumps(obj, indent=2) + "\n")


def _no_bfile(cfg: RunConfig) -> None:
    if cfg.fmt == "bfile":
        raise ValueError("bfile format applies to the two special sequences only")


def _seq_out(cfg: RunConfig, seq: special.SpecialPrimeSeq) -> None:
    if cfg.fmt == "json":
        _emit_json(cfg, {
            "kind": seq.kind,
            "m": str(seq.m),
            "count": seq.verified_count,
            "horizon": seq.horizon,
            "certification": seq.certification,
            "terms": [int(v) for v in seq.terms],
        })
        return
    buf = io.StringIO()
    if cfg.fmt == "csv":
        special.write_csv(seq, buf)
    else:
        special.write_bfile(seq, buf)
    _emit(cfg, buf.getvalue())


@click.group()
@click.version_option(version=__version__, prog_name="primegaps")
def cli():
    """Prime gaps toolkit: interval census, special sequences, chains, model runs."""


@cli.command()
@click.option("--limit", type=int, default=None, help="Upper bound for the table.")
@click.option("--between", type=int, nargs=2, default=None,
              help="Two bounds a b: list primes with a < p < b.")
@click.option("--pi", "pi_x", type=int, default=None, help="Print pi(x).")
@click.option("--nth", type=int, default=None, help="Print the n-th prime.")
@_common
def primes(limit, between, pi_x, nth, m_str, fmt, threads, memory_cap, out):
    """Prime utilities: listing, counting, n-th prime."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    chosen = [x for x in (between, pi_x, nth) if x is not None and x != ()]
    if len(chosen) > 1:
        raise ValueError("choose at most one of --between/--pi/--nth")
    if nth is not None:
        if nth < 1:
            raise ValueError("--nth must be >= 1")
        t = cfg.make_table(limit or special.nth_prime_upper(nth))
        obj = {"n": nth, "prime": t.nth_prime(nth)}
        _emit_json(cfg, obj) if cfg.fmt == "json" else _emit(cfg, f"n,prime\n{nth},{obj['prime']}\n")
        return
    if pi_x is not None:
        if pi_x < 0:
            raise ValueError("--pi argument must be >= 0")
        t = cfg.make_table(max(limit or 0, pi_x, 3))
        obj = {"x": pi_x, "pi": t.prime_pi(pi_x)}
        _emit_json(cfg, obj) if cfg.fmt == "json" else _emit(cfg, f"x,pi\n{pi_x},{obj['pi']}\n")
        return
    if between:
        a, b = between
        t = cfg.make_table(max(limit or 0, b - 1, 3))
        vals = [int(v) for v in t.primes_in_open_interval(a, b)]
    else:
        if limit is None:
            raise ValueError("--limit is required to list primes")
        t = cfg.make_table(limit)
        vals = [int(v) for v in t.primes]
    if cfg.fmt == "json":
        _emit_json(cfg, {"count": len(vals), "primes": vals})
    else:
        _emit(cfg, "prime\n" + "".join(f"{v}\n" for v in vals))


def _seq_command(kind):
    @click.option("--count", type=int, required=True, help="How many terms.")
    @_common
    def cmd(count, m_str, fmt, threads, memory_cap, out):
        cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
        if count < 1:
            raise ValueError("--count must be >= 1")
        t = cfg.make_table(special.required_limit(count, cfg.m))
        fn = special.ramanujan_primes if kind == "ramanujan" else special.labos_primes
        _seq_out(cfg, fn(t, count, cfg.m))

    cmd.__name__ = kind
    return cmd


cli.command(name="ramanujan", help="First-kind special sequence (last-occurrence terms).")(
    _seq_command("ramanujan")
)
cli.command(name="labos", help="Second-kind special sequence (first-occurrence terms).")(
    _seq_command("labos")
)


@cli.command(name="classify")
@click.option("--limit", type=int, required=True, help="Census upper bound.")
@click.option("--prime", "prime_q", type=int, default=None,
              help="Classify this single prime instead of dumping all rows.")
@_common
def classify_cmd(limit, prime_q, m_str, fmt, threads, memory_cap, out):
    """Classify primes by their position inside the scaled-prime intervals."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    t = cfg.make_table(max(limit, 3))
    c = classify.census(t, limit, cfg.m)
    if prime_q is not None:
        g = classify.classify_prime(c, prime_q)
        obj = {"prime": prime_q, "class": g.label}
        if g not in (classify.GapClass.INITIAL, classify.GapClass.BOUNDARY):
            i = int(np.searchsorted(c.covered, prime_q))
            k = int(c.covered_interval[i]) + 1
            rec = c.interval(k)
            obj.update(interval=k, lower_prime=rec.lower_prime,
                       upper_prime=rec.upper_prime)
        _emit_json(cfg, obj) if cfg.fmt == "json" else _emit(
            cfg, "prime,class\n" + f"{prime_q},{g.label}\n")
        return
    if cfg.fmt == "json":
        rows = [
            {"prime": int(p), "interval": int(k) + 1, "class": classify.GapClass(int(g)).label}
            for p, k, g in zip(c.covered, c.covered_interval, c.classes)
        ]
        _emit_json(cfg, {"m": str(cfg.m), "limit": limit, "rows": rows})
    else:
        buf = io.StringIO()
        classify.write_classification_csv(c, buf)
        _emit(cfg, buf.getvalue())


@cli.command()
@click.option("--limit", type=int, required=True, help="Census upper bound.")
@_common
def census(limit, m_str, fmt, threads, memory_cap, out):
    """Interval census: histogram of contained-prime counts and class totals."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    t = cfg.make_table(max(limit, 3))
    c = classify.census(t, limit, cfg.m)
    d = classify.census_json_dict(c)
    if cfg.fmt == "json":
        _emit_json(cfg, d)
    else:
        lines = ["key,value"]
        lines += [f"h{i},{v}" for i, v in d["histogram"].items()]
        lines += [f"class_{k},{v}" for k, v in d["class_counts"].items()]
        lines += [f"intervals,{d['intervals']}", f"classified,{d['classified']}"]
        _emit(cfg, "\n".join(lines) + "\n")


@cli.command()
@click.option("--side", type=click.Choice(["ramanujan", "labos"]), default="ramanujan",
              show_default=True, help="Which special sequence to subtract.")
@click.option("--limit", type=int, required=True, help="Search bound.")
@_common
def pseudo(side, limit, m_str, fmt, threads, memory_cap, out):
    """Non-last (or non-first) primes missing from the special sequence."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    t = cfg.make_table(max(2 * limit + 1000, 3))
    c = classify.census(t, limit, cfg.m)
    base = classify.r_primes(c) if side == "ramanujan" else classify.l_primes(c)
    top = int(base[-1]) if base.size else 2
    fn = special.ramanujan_primes_up_to if side == "ramanujan" else special.labos_primes_up_to
    seq = fn(t, top, cfg.m)
    terms = classify.pseudo_primes(c, seq)
    obj = {
        "m": str(cfg.m),
        "side": side,
        "limit": limit,
        "count": int(terms.size),
        "smallest": int(terms[0]) if terms.size else None,
        "terms": [int(v) for v in terms],
    }
    if cfg.fmt == "json":
        _emit_json(cfg, obj)
    else:
        _emit(cfg, "term\n" + "".join(f"{int(v)}\n" for v in terms))


@cli.command()
@click.option("--limit", type=int, required=True, help="Census upper bound.")
@_common
def rstar(limit, m_str, fmt, threads, memory_cap, out):
    """Interval owners whose interval contains two or more primes."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    t = cfg.make_table(max(limit, 3))
    c = classify.census(t, limit, cfg.m)
    terms = classify.r_star_primes(c)
    if cfg.fmt == "json":
        _emit_json(cfg, {
            "m": str(cfg.m),
            "limit": limit,
            "count": int(terms.size),
            "density": terms.size / c.intervals,
            "terms": [int(v) for v in terms],
        })
    else:
        _emit(cfg, "term\n" + "".join(f"{int(v)}\n" for v in terms))


@cli.command()
@click.option("--limit", type=int, required=True, help="Census upper bound.")
@_common
def interleave(limit, m_str, fmt, threads, memory_cap, out):
    """Check the r/l interleaving invariant over a census range."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    t = cfg.make_table(max(limit, 3))
    c = classify.census(t, limit, cfg.m)
    res = classify.check_interleaving(c)
    if not res.ok:
        raise VerificationFailure(
            f"interleaving violated at pair {res.first_violation}"
        )
    _emit_json(cfg, {
        "m": str(cfg.m),
        "limit": limit,
        "pairs": res.pairs,
        "ok": True,
        "initial_excluded": True,
    })


@cli.command(name="bertrand")
@click.option("--seed", type=int, default=None, help="Chain seed prime.")
@click.option("--length", type=int, default=None, help="Chain length (with --seed).")
@click.option("--count", type=int, default=None, help="Construct this many chains.")
@_common
def bertrand_cmd(seed, length, count, m_str, fmt, threads, memory_cap, out):
    """One chain from a seed, or the full greedy chain construction."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    if (seed is None) == (count is None):
        raise ValueError("use either --seed/--length or --count")
    if seed is not None:
        if not length or length < 1:
            raise ValueError("--length >= 1 is required with --seed")
        est = int(seed * cfg.m.ratio ** (length + 1)) + 1000
        if est > 1 << 31:
            raise CoverageError(
                f"chain of length {length} from {seed} needs a table near {est}; "
                "refusing to build one that large"
            )
        t = cfg.make_table(max(est, seed + 10, 1000))
        ch = bertrand.bertrand_chain(t, seed, length, cfg.m)
        _emit_json(cfg, {
            "m": str(cfg.m), "seed": seed, "length": length,
            "terms": list(ch.terms),
        })
        return
    if count < 1:
        raise ValueError("--count must be >= 1")
    est = int(2.6 * special.nth_prime_upper(2 * count + 2)) + 1000
    t = cfg.make_table(est)
    chains = bertrand.construct_chains(t, count, cfg.m)
    _emit_json(cfg, {
        "m": str(cfg.m),
        "count": count,
        "seeds": [c.seed for c in chains],
        "chains": [list(c.terms) for c in chains],
    })


@cli.command(name="verify-thm1")
@click.option("--count", type=int, required=True, help="How many seeds to compare.")
@_common
def verify_thm1(count, m_str, fmt, threads, memory_cap, out):
    """Check chain seeds == [2] + non-last census primes (m = 2 only)."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    if str(cfg.m) != "2":
        raise ValueError("the seed equivalence is stated for m = 2")
    if count < 1:
        raise ValueError("--count must be >= 1")
    est = int(2.6 * special.nth_prime_upper(2 * count + 2)) + 1000
    t = cfg.make_table(est)
    res = bertrand.verify_theorem1(t, count)
    if not res.ok:
        raise VerificationFailure(
            f"seed list diverges from census at n={res.first_mismatch[0]}: "
            f"expected {res.first_mismatch[1]}, got {res.first_mismatch[2]}"
        )
    _emit_json(cfg, {"count": count, "ok": True, "checked": res.checked})


@cli.command(name="lambda")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@_common
def lambda_cmd(tol, m_str, fmt, threads, memory_cap, out):
    """Root of (1-x)ln(1-x) + x^2/m = 0 in (0, 1)."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    lam = stats.solve_lambda(cfg.m, tol)
    residual = abs((1 - lam) * math.log1p(-lam) + lam * lam / cfg.m.ratio)
    _emit_json(cfg, {"m": str(cfg.m), "lambda": lam, "residual": residual})


@cli.command()
@click.option("--tol", type=float, default=1e-12, show_default=True)
@_common
def probs(tol, m_str, fmt, threads, memory_cap, out):
    """Limiting gap-class probabilities for one multiplier."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    ps = stats.theoretical_probabilities(cfg.m, tol)
    _emit_json(cfg, ps.to_json_dict())


@cli.command()
@click.option("--limit", type=int, required=True, help="Census upper bound.")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@_common
def densities(limit, tol, m_str, fmt, threads, memory_cap, out):
    """Empirical class shares vs the limiting model over one range."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    t = cfg.make_table(max(2 * limit + 1000, 3))
    c = classify.census(t, limit, cfg.m)
    top = int(c.covered[-1]) if c.covered.size else 2
    ram = special.ramanujan_primes_up_to(t, top, cfg.m)
    lab = special.labos_primes_up_to(t, top, cfg.m)
    ps = stats.theoretical_probabilities(cfg.m, tol)
    rep = stats.density_report(c, ram, lab, ps)
    if cfg.fmt == "json":
        _emit_json(cfg, rep.to_json_dict())
    else:
        buf = io.StringIO()
        rep.write_csv(buf)
        _emit(cfg, buf.getvalue())


@cli.command(name="cramer")
@click.option("--limit", type=int, required=True, help="Sample upper bound.")
@click.option("--seed", type=int, required=True, help="RNG seed.")
@click.option("--hmax", type=int, default=5, show_default=True,
              help="Largest interval count reported.")
@click.option("--dump", is_flag=True, help="Print the raw sample, one value per line.")
@_common
def cramer_cmd(limit, seed, hmax, dump, m_str, fmt, threads, memory_cap, out):
    """Random-model run: simulate a sample and census its doubled intervals."""
    cfg = RunConfig.from_options(m_str, fmt, threads, memory_cap, out)
    _no_bfile(cfg)
    if dump:
        s = cramer.simulate(limit, seed)
        _emit(cfg, "".join(f"{int(v)}\n" for v in s.members))
        return
    _emit_json(cfg, cramer.run_report(limit, seed, hmax))


def _fail(code: int, msg: str):
    print(f"ERROR {code}: {msg}", file=sys.stderr)
    sys.exit(code)


def main(argv=None):
    try:
        cli.main(args=argv, prog_name="primegaps", standalone_mode=False)
    except click.exceptions.Exit as e:
        sys.exit(e.exit_code)
    except click.UsageError as e:
        _fail(1, e.format_message())
    except (ValueError, ChainStallError) as e:
        _fail(1, str(e))
    except (CoverageError, MemoryCapError, IncompleteResultError, MemoryError) as e:
        _fail(2, str(e))
    except VerificationFailure as e:
        _fail(3, str(e))


if __name__ == "__main__":
    main()
