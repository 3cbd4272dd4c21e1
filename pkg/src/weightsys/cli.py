"""Command-line interface: ``eval``, ``check`` and ``table``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, Sequence

from .diagrams import MAX_ARROWS, DiagramError, canonicalize, enumerate_diagrams, parse_diagram
from .families import FAMILIES, Family, evaluate_weight
from .oracle import oracle_eval, oracle_poly
from .polycount import PolynomialQ, format_rational
from . import relations as rel

DEFAULT_CAP = 4
THREADS_ENV = "WEIGHTSYS_THREADS"
SUITES = ("6t", "4t", "stu", "bialgebra", "averaging", "oracle-match")


class UsageError(Exception):
    """Bad arguments; reported on stderr with exit status 2."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # keep exit status 2 but route through our handler
        raise UsageError(message)


# -- cache ----------------------------------------------------------------------


class ResultCache:
    """File-backed map ``word|family`` -> polynomial JSON.  Purely advisory."""

    def __init__(self, path: str | None):
        self.path = path
        self.data: dict = {}
        self.dirty = False
        if path and os.path.exists(path):
            try:
                with open(path, encoding="utf-8") as fh:
                    loaded = json.load(fh)
                if isinstance(loaded, dict):
                    self.data = loaded
            except (OSError, ValueError):
                self.data = {}

    @staticmethod
    def key(word: str, f: Family) -> str:
        return f"{word}|{f.value}"

    def get(self, word: str, f: Family) -> PolynomialQ | None:
        entry = self.data.get(self.key(word, f))
        if entry is None:
            return None
        try:
            return PolynomialQ.from_json(entry)
        except (KeyError, ValueError, TypeError, ZeroDivisionError):
            return None

    def put(self, word: str, f: Family, p: PolynomialQ) -> None:
        self.data[self.key(word, f)] = p.to_json()
        self.dirty = True

    def save(self) -> None:
        if not (self.path and self.dirty):
            return
        directory = os.path.dirname(os.path.abspath(self.path))
        fd, tmp = tempfile.mkstemp(prefix=".cache-", dir=directory)
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(self.data, fh, sort_keys=True, indent=1)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.dirty = False


# -- helpers ----------------------------------------------------------------------


def _threads(arg: int | None) -> int:
    if arg is not None:
        if arg < 1:
            raise UsageError("--threads must be >= 1")
        return arg
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer") from None
    return 1


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    """Order-preserving map; the worker count never changes the result."""
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def _cap(value: int | None) -> int:
    cap = DEFAULT_CAP if value is None else value
    if not 0 <= cap <= MAX_ARROWS:
        raise UsageError(f"--max-arrows must be between 0 and {MAX_ARROWS}")
    return cap


def _n_range(text: str | None, default: tuple[int, int]) -> list[int]:
    if text is None:
        a, b = default
    else:
        try:
            a_s, b_s = text.split("..")
            a, b = int(a_s), int(b_s)
        except ValueError:
            raise UsageError(f"--n-range must look like a..b, got {text!r}") from None
    if a < 1 or b < a:
        raise UsageError(f"empty or invalid N range {a}..{b}")
    return list(range(a, b + 1))


def _families(text: str | None) -> list[Family]:
    if not text:
        return list(FAMILIES)
    try:
        return [Family.parse(t.strip()) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(str(exc)) from None


# -- eval ---------------------------------------------------------------------------


def run_eval(args) -> int:
    f = Family.parse(args.family)
    try:
        d = parse_diagram(args.diagram, oriented=True)
    except DiagramError as exc:
        raise UsageError(f"cannot parse diagram: {exc}") from None
    cap = _cap(args.max_arrows)
    if d.n > cap:
        raise UsageError(f"diagram has {d.n} arrows, above the cap {cap} (raise with --max-arrows, at most {MAX_ARROWS})")
    _threads(args.threads)  # validated; a single evaluation is not split
    if args.oracle is not None:
        if args.oracle < 1:
            raise UsageError("--oracle needs N >= 1")
        print(json.dumps(format_rational(oracle_eval(d, f, args.oracle))))
        return 0
    word = str(canonicalize(d))
    cache = ResultCache(args.cache)
    p = cache.get(word, f)
    if p is None:
        p = evaluate_weight(d, f)
        cache.put(word, f, p)
        cache.save()
    print(json.dumps(p.to_json()))
    return 0


# -- check ----------------------------------------------------------------------------

# module-level job functions so they can cross process boundaries


def _job_relation(job):
    r, f, mode = job
    return rel.check_relation(r, f, mode).to_json()


def _job_stu(job):
    s, f, n = job
    return rel.check_stu(s, f, n).to_json()


def _job_averaging(job):
    c, f, n = job
    return rel.check_averaging(c, f, n).to_json()


def _job_bialgebra(job):
    f, n = job
    return [r.to_json() for r in rel.check_bialgebra_identities(f, n)]


def _job_fault(job):
    f, n = job
    sc = rel.structure_constants(f, n)
    rep = rel.check_bialgebra_identities(f, n, rel.with_gamma_fault(sc, (0, 1, 2) if sc.size > 2 else (0, 1, 0)))
    caught = any(r.check == "cocycle" and not r.passed for r in rep)
    return {"check": "fault injection (gamma + 1)", "family": f.value, "N": str(n),
            "status": "pass" if caught else "fail", "residual": "detected" if caught else "missed"}


def _job_match(job):
    d, f = job
    fast = evaluate_weight(d, f)
    slow = oracle_poly(d, f)
    ok = fast == slow
    return {"check": "oracle-match", "family": f.value, "N": "poly",
            "status": "pass" if ok else "fail", "residual": str((fast - slow).to_json()["binomial"]),
            "detail": str(d)}


def _suite_jobs(suite: str, cap: int, ns: list[int] | None) -> tuple[Callable, list]:
    if suite == "6t":
        insts = rel.six_t_instances(0) + rel.six_t_instances(1)
        return _job_relation, [(r, f, "poly") for r in insts for f in FAMILIES]
    if suite == "4t":
        insts = rel.four_t_instances(0) + rel.four_t_instances(1)
        jobs = [(r, f, n) for r in insts for f in FAMILIES for n in (ns or [2, 3])]
        jobs += [(rel.averaged_relation(r), f, "poly") for r in insts for f in FAMILIES]
        return _job_relation, jobs
    if suite == "stu":
        return _job_stu, [(s, f, n) for s in rel.stu_instances() for f in FAMILIES for n in (ns or [2, 3])]
    if suite == "bialgebra":
        return _job_bialgebra, [(f, n) for f in FAMILIES for n in (ns or [2, 3])]
    if suite == "averaging":
        diagrams = [c for k in range(min(cap, 3) + 1) for c in enumerate_diagrams(k, oriented=False)]
        return _job_averaging, [(c, f, n) for c in diagrams for f in FAMILIES for n in (ns or [1, 2, 3, 4])]
    if suite == "oracle-match":
        diagrams = [d for k in range(cap + 1) for d in enumerate_diagrams(k)]
        return _job_match, [(d, f) for d in diagrams for f in FAMILIES]
    raise UsageError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES + ('all',))}")


def run_check(args) -> int:
    suites = SUITES if args.suite == "all" else (args.suite,)
    cap = _cap(args.max_arrows if args.max_arrows is not None else 3)
    ns = _n_range(args.n_range, (1, 1)) if args.n_range else None
    threads = _threads(args.threads)
    # validate every suite name before doing any work
    plans = [(s, *_suite_jobs(s, cap, ns)) for s in suites]
    report: list[dict] = []
    for suite, fn, jobs in plans:
        for out in _pmap(fn, jobs, threads):
            report.extend(out if isinstance(out, list) else [out])
        if suite == "bialgebra":
            # self-test: a corrupted cobracket must be reported
            report.extend(_job_fault((f, (ns or [2])[0])) for f in FAMILIES)
    json.dump(report, sys.stdout, indent=1)
    sys.stdout.write("\n")
    failed = sum(1 for r in report if r["status"] != "pass")
    print(f"{len(report) - failed}/{len(report)} checks passed", file=sys.stderr)
    return 0 if failed == 0 else 1


# -- table ------------------------------------------------------------------------------


def format_coeffs(p: PolynomialQ) -> str:
    return ";".join(format_rational(c) for c in p.binomial()) or "0"


def _job_table(job):
    d, f = job
    return str(d), f.value, format_coeffs(evaluate_weight(d, f))


def table_rows(max_arrows: int, families: Iterable[Family], threads: int = 1) -> list[tuple[str, str, str]]:
    fams = list(families)
    jobs = [(d, f) for f in fams for k in range(max_arrows + 1) for d in enumerate_diagrams(k)]
    return _pmap(_job_table, jobs, threads)


def run_table(args) -> int:
    cap = _cap(args.max_arrows)
    fams = _families(args.families)
    rows = table_rows(cap, fams, _threads(args.threads))
    directory = os.path.dirname(os.path.abspath(args.out))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".table-", dir=directory)
    except OSError as exc:
        raise UsageError(f"cannot write {args.out}: {exc}") from None
    try:
        with os.fdopen(fd, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["word", "family", "binomial_coeffs"])
            w.writerows(rows)
        os.replace(tmp, args.out)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise UsageError(f"cannot write {args.out}: {exc}") from None
    print(f"wrote {len(rows)} rows to {args.out}", file=sys.stderr)
    return 0


def read_table(path: str) -> list[tuple[str, Family, PolynomialQ]]:
    """Parse a table written by ``table`` back into polynomials."""
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            coeffs = row["binomial_coeffs"].split(";")
            out.append((row["word"], Family.parse(row["family"]), PolynomialQ.from_binomial(coeffs)))
    return out


# -- entry point ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="weightsys", description="Classical Lie weight systems on arrow diagrams.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate one diagram")
    e.add_argument("--family", required=True, choices=[f.value for f in FAMILIES])
    e.add_argument("--diagram", required=True, help='word such as "t1 t2 h1 h2"; empty for the bare circle')
    e.add_argument("--oracle", type=int, metavar="N", help="evaluate numerically with the matrix oracle at N")
    e.add_argument("--threads", type=int)
    e.add_argument("--cache", metavar="PATH")
    e.add_argument("--max-arrows", type=int)
    e.set_defaults(func=run_eval)

    c = sub.add_parser("check", help="run verification suites")
    c.add_argument("--suite", required=True, help="|".join(SUITES + ("all",)))
    c.add_argument("--max-arrows", type=int)
    c.add_argument("--n-range", metavar="A..B")
    c.add_argument("--threads", type=int)
    c.set_defaults(func=run_check)

    t = sub.add_parser("table", help="tabulate all canonical diagrams")
    t.add_argument("--max-arrows", type=int, required=True)
    t.add_argument("--families", default=",".join(f.value for f in FAMILIES))
    t.add_argument("--out", required=True)
    t.add_argument("--threads", type=int)
    t.set_defaults(func=run_table)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"weightsys: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
