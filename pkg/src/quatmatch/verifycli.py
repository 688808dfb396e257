"""Identity verification harness and command-line interface.

Each theorem check computes both sides of one identity family exactly, row
by row over 1 <= m <= m_max, and records (m, lhs, rhs, pass).  A report is
pure data: re-running with a warm cache is byte-identical (timings are kept
out of report files).

The identity families, with w(p) = -2/(p-1) and W(p) = (p+1)/(p-1):

    1.1  w(q) r_{Dp,N}(m)  + W(q) r_{Dp,Nq}(m)  =  w(p) r_{Dq,N}(m)  + W(p) r_{Dq,Np}(m)
    1.3  w(q) r'_{Dp,N}(m) + W(q) r'_{Dp,Nq}(m) =  w(p) r'_{Dq,N}(m) + W(p) r'_{Dq,Np}(m)
    1.4  r'_{Dp,N}(m)  =  w(p) r_{D,N}(m)  + W(p) r_{D,Np}(m)
    1.5  r_{Dp,N}(m)   =  w(p) r'_{D,N}(m) + W(p) r'_{D,Np}(m)

where r is the genus-averaged representation number (definite side) and r'
the normalised correspondence degree (indefinite side).
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import classsets, heckedeg, weilmatch
from .classsets import ClassSetCache, class_set_for, genus_theta
from .quatalg import is_squarefree


def _prime_factors(n: int):
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


THEOREMS = ("1.1", "1.3", "1.4", "1.5")


@dataclass(frozen=True)
class TheoremCase:
    theorem: str
    D: int
    N: int
    p: int | None = None
    q: int | None = None
    m_max: int = 50
    pins: tuple = field(default=(), compare=False)  # ((m, expected lhs), ...)

    def validate(self):
        if self.theorem not in THEOREMS:
            raise ValueError("unknown theorem %r" % (self.theorem,))
        if self.D < 1 or not is_squarefree(self.D):
            raise ValueError("D must be a squarefree positive integer")
        if self.N < 1:
            raise ValueError("N must be positive")
        if self.m_max < 1:
            raise ValueError("m_max must be at least 1")
        nprimes = len(_prime_factors(self.D))
        needs_q = self.theorem in ("1.1", "1.3")
        if self.p is None or (needs_q and self.q is None):
            raise ValueError("theorem %s needs primes p%s"
                             % (self.theorem, " and q" if needs_q else ""))
        primes = [self.p] + ([self.q] if needs_q else [])
        for r in primes:
            if not _is_prime(r):
                raise ValueError("%r is not prime" % (r,))
            if self.D % r == 0:
                raise ValueError("prime %d must not divide D=%d" % (r, self.D))
        if needs_q and self.p == self.q:
            raise ValueError("p and q must be distinct")
        if self.theorem in ("1.1",) and nprimes % 2:
            raise ValueError("theorem 1.1 needs D with an even number of primes")
        if self.theorem in ("1.3", "1.4") and nprimes % 2 == 0:
            raise ValueError("theorem %s needs D with an odd number of primes"
                             % self.theorem)
        if self.theorem == "1.5" and (self.D == 1 or nprimes % 2):
            raise ValueError("theorem 1.5 needs D > 1 with an even number of primes")
        modulus = self.D * math.prod(primes)
        if math.gcd(self.N, modulus) != 1:
            raise ValueError("N must be coprime to D and the chosen primes")

    def key(self) -> str:
        parts = ["theorem=%s" % self.theorem, "D=%d" % self.D]
        if self.p is not None:
            parts.append("p=%d" % self.p)
        if self.q is not None:
            parts.append("q=%d" % self.q)
        parts.append("N=%d" % self.N)
        parts.append("mmax=%d" % self.m_max)
        return "_".join(parts).replace("=", "").replace(".", "")

    def describe(self) -> str:
        out = "theorem %s, D=%d, N=%d" % (self.theorem, self.D, self.N)
        if self.p is not None:
            out += ", p=%d" % self.p
        if self.q is not None:
            out += ", q=%d" % self.q
        return out + ", m<=%d" % self.m_max


@dataclass
class VerificationReport:
    case: TheoremCase
    rows: list  # (m, lhs: Fraction, rhs: Fraction, ok: bool)
    seconds: float = 0.0  # informational; never serialized
    provenance: str = "in-memory"  # informational; never serialized

    @property
    def all_pass(self) -> bool:
        return all(ok for _m, _l, _r, ok in self.rows)

    def to_table(self) -> str:
        lines = ["# quatmatch verification report v1",
                 "case %s" % self.case.describe(),
                 "m lhs rhs pass"]
        for m, lhs, rhs, ok in self.rows:
            lines.append("%d %s %s %d" % (m, lhs, rhs, int(ok)))
        lines.append("verdict %s" % ("PASS" if self.all_pass else "FAIL"))
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        lines = ["m,lhs,rhs,pass"]
        for m, lhs, rhs, ok in self.rows:
            lines.append("%d,%s,%s,%d" % (m, lhs, rhs, int(ok)))
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        payload = {
            "case": self.case.describe(),
            "rows": [[m, str(lhs), str(rhs), bool(ok)]
                     for m, lhs, rhs, ok in self.rows],
            "all_pass": self.all_pass,
        }
        return json.dumps(payload, sort_keys=True, indent=1) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "table":
            return self.to_table()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json()
        raise ValueError("unknown format %r" % (fmt,))


class ClassSetPool:
    """Shared, optionally disk-backed pool of definite class sets."""

    def __init__(self, cache_dir=None):
        self.cache = ClassSetCache(cache_dir) if cache_dir else None
        self._memo = {}

    def get(self, D: int, N: int):
        key = (D, N)
        if key not in self._memo:
            self._memo[key] = class_set_for(D, N, cache=self.cache)
        return self._memo[key]

    def averages(self, D: int, N: int, m_max: int):
        return genus_theta(self.get(D, N), m_max)


def _weights(p: int):
    return Fraction(-2, p - 1), Fraction(p + 1, p - 1)


def _finish(case, lhs_list, rhs_list, started):
    rows = []
    pins = dict(case.pins)
    for m in range(1, case.m_max + 1):
        lhs, rhs = lhs_list[m], rhs_list[m]
        ok = lhs == rhs
        if m in pins and lhs != Fraction(pins[m]):
            ok = False
        rows.append((m, lhs, rhs, ok))
    return VerificationReport(case, rows, time.monotonic() - started)


def check_theorem_1_1(case: TheoremCase, pool: ClassSetPool) -> VerificationReport:
    case.validate()
    started = time.monotonic()
    D, p, q, N, mm = case.D, case.p, case.q, case.N, case.m_max
    wq, wq2 = _weights(q)
    wp, wp2 = _weights(p)
    a = pool.averages(D * p, N, mm)
    b = pool.averages(D * p, N * q, mm)
    c = pool.averages(D * q, N, mm)
    d = pool.averages(D * q, N * p, mm)
    lhs = [wq * a[m] + wq2 * b[m] for m in range(mm + 1)]
    rhs = [wp * c[m] + wp2 * d[m] for m in range(mm + 1)]
    return _finish(case, lhs, rhs, started)


def check_theorem_1_3(case: TheoremCase, pool=None) -> VerificationReport:
    case.validate()
    started = time.monotonic()
    D, p, q, N, mm = case.D, case.p, case.q, case.N, case.m_max
    wq, wq2 = _weights(q)
    wp, wp2 = _weights(p)
    lhs = [Fraction(1)] + [
        wq * heckedeg.r_prime(D * p, N, m) + wq2 * heckedeg.r_prime(D * p, N * q, m)
        for m in range(1, mm + 1)]
    rhs = [Fraction(1)] + [
        wp * heckedeg.r_prime(D * q, N, m) + wp2 * heckedeg.r_prime(D * q, N * p, m)
        for m in range(1, mm + 1)]
    return _finish(case, lhs, rhs, started)


def check_theorem_1_4(case: TheoremCase, pool: ClassSetPool) -> VerificationReport:
    case.validate()
    started = time.monotonic()
    D, p, N, mm = case.D, case.p, case.N, case.m_max
    wp, wp2 = _weights(p)
    lhs = [Fraction(1)] + [heckedeg.r_prime(D * p, N, m) for m in range(1, mm + 1)]
    a = pool.averages(D, N, mm)
    b = pool.averages(D, N * p, mm)
    rhs = [wp * a[m] + wp2 * b[m] for m in range(mm + 1)]
    return _finish(case, lhs, rhs, started)


def check_theorem_1_5(case: TheoremCase, pool: ClassSetPool) -> VerificationReport:
    case.validate()
    started = time.monotonic()
    D, p, N, mm = case.D, case.p, case.N, case.m_max
    wp, wp2 = _weights(p)
    lhs = pool.averages(D * p, N, mm)
    rhs = [Fraction(1)] + [
        wp * heckedeg.r_prime(D, N, m) + wp2 * heckedeg.r_prime(D, N * p, m)
        for m in range(1, mm + 1)]
    return _finish(case, lhs, rhs, started)


_CHECKERS = {
    "1.1": check_theorem_1_1,
    "1.3": check_theorem_1_3,
    "1.4": check_theorem_1_4,
    "1.5": check_theorem_1_5,
}


def run_case(case: TheoremCase, pool: ClassSetPool) -> VerificationReport:
    return _CHECKERS[case.theorem](case, pool)


def default_suite_cases():
    """The standard verification grid covering every branch of the pipeline."""
    cases = [
        TheoremCase("1.1", D=1, p=2, q=3, N=1, m_max=50),
        TheoremCase("1.4", D=2, p=3, N=1, m_max=50),
        TheoremCase("1.4", D=3, p=2, N=1, m_max=50),
        TheoremCase("1.5", D=6, p=5, N=1, m_max=30),
    ]
    for D in (2, 3, 5):
        others = [r for r in (2, 3, 5, 7) if D % r]
        for i, p in enumerate(others):
            for q in others[i + 1:]:
                small = next(n for n in (2, 3, 5, 7, 11)
                             if math.gcd(n, D * p * q) == 1)
                for N in (1, small):
                    cases.append(TheoremCase("1.3", D=D, p=p, q=q, N=N, m_max=100))
    return cases


@dataclass
class SuiteConfig:
    cases: list
    out_dir: str | None = None
    cache_dir: str | None = None
    fmt: str = "table"


def run_suite(config: SuiteConfig):
    """Run all configured cases; returns (exit_code, reports)."""
    if not config.cases:
        print("warning: empty case list; nothing to verify")
        return 0, []
    pool = ClassSetPool(config.cache_dir)
    reports = []
    for case in sorted(config.cases, key=lambda c: c.key()):
        report = run_case(case, pool)
        if config.cache_dir:
            report.provenance = "disk-cache:%s" % config.cache_dir
        reports.append(report)
        status = "PASS" if report.all_pass else "FAIL"
        print("%-4s %s  (%.2fs)" % (status, case.describe(), report.seconds))
        if not report.all_pass:
            for m, lhs, rhs, ok in report.rows:
                if not ok:
                    print("     first failing row: m=%d lhs=%s rhs=%s" % (m, lhs, rhs))
                    break
    if config.out_dir:
        os.makedirs(config.out_dir, exist_ok=True)
        summary = {"cases": [], "all_pass": all(r.all_pass for r in reports)}
        for report in reports:
            name = "report_%s.%s" % (report.case.key(),
                                     "txt" if config.fmt == "table" else config.fmt)
            path = os.path.join(config.out_dir, name)
            with open(path, "w", encoding="ascii") as fh:
                fh.write(report.render(config.fmt))
            summary["cases"].append({"case": report.case.describe(),
                                     "file": name,
                                     "pass": report.all_pass})
        with open(os.path.join(config.out_dir, "summary.json"), "w",
                  encoding="ascii") as fh:
            json.dump(summary, fh, sort_keys=True, indent=1)
            fh.write("\n")
    return (0 if all(r.all_pass for r in reports) else 1), reports


# ---------------------------------------------------------------------------
# command line

def _parse_pins(pin_args):
    pins = []
    for text in pin_args or ():
        m_text, _, val_text = text.partition(":")
        pins.append((int(m_text), Fraction(val_text)))
    return tuple(pins)


def _read_config(path):
    """key=value lines mirroring the command-line flags; '#' comments."""
    out = {}
    with open(path, encoding="ascii") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, value = line.partition("=")
            key = key.strip().replace("-", "_")
            value = value.strip()
            if key == "pin":
                out.setdefault("pin", []).append(value)
            else:
                out[key] = value
    return out


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="quatmatch",
        description="exact verification of quaternionic counting identities")
    sub = parser.add_subparsers(dest="command", required=True)

    pv = sub.add_parser("verify", help="verify one identity family or the full grid")
    pv.add_argument("--theorem", required=True,
                    choices=list(THEOREMS) + ["all"])
    pv.add_argument("--D", type=int, default=None)
    pv.add_argument("--N", type=int, default=1)
    pv.add_argument("--p", type=int, default=None)
    pv.add_argument("--q", type=int, default=None)
    pv.add_argument("--m-max", type=int, default=None)
    pv.add_argument("--cache-dir", default=None)
    pv.add_argument("--out-dir", default=None)
    pv.add_argument("--format", default="table", choices=("table", "json", "csv"))
    pv.add_argument("--pin", action="append", default=None,
                    metavar="M:VALUE", help="assert lhs(M) == VALUE (harness sanity)")
    pv.add_argument("--config", default=None,
                    help="key=value file supplying defaults for the flags above")

    pc = sub.add_parser("classset", help="print class-set data for (D, N)")
    pc.add_argument("--D", type=int, required=True)
    pc.add_argument("--N", type=int, default=1)
    pc.add_argument("--cache-dir", default=None)

    pl = sub.add_parser("local", help="print local matching tables at a prime")
    pl.add_argument("--p", type=int, required=True)

    pd = sub.add_parser("degree", help="print correspondence degree data")
    pd.add_argument("--D", type=int, required=True)
    pd.add_argument("--N", type=int, default=1)
    pd.add_argument("--m", type=int, required=True)

    po = sub.add_parser("certify", help="run a local orbit-counting oracle")
    po.add_argument("--pattern", required=True,
                    choices=("split", "level", "ramified"))
    po.add_argument("--p", type=int, required=True)
    po.add_argument("--k", type=int, required=True)
    po.add_argument("--M", type=int, required=True)
    return parser


_DEFAULT_MMAX = {"1.1": 50, "1.3": 100, "1.4": 50, "1.5": 30}


def _cmd_verify(args) -> int:
    merged = {}
    if args.config:
        merged.update(_read_config(args.config))
    def pick(name, flag_value, cast):
        if flag_value is not None:
            return flag_value
        if name in merged:
            return cast(merged[name])
        return None
    cache_dir = (args.cache_dir or merged.get("cache_dir")
                 or os.environ.get("QUATMATCH_CACHE_DIR"))
    out_dir = args.out_dir or merged.get("out_dir")
    fmt = args.format if args.format != "table" else merged.get("format", "table")
    pins = _parse_pins(args.pin if args.pin is not None else merged.get("pin"))

    if args.theorem == "all":
        config = SuiteConfig(default_suite_cases(), out_dir, cache_dir, fmt)
        code, _reports = run_suite(config)
        return code
    D = pick("D", args.D, int)
    if D is None:
        raise SystemExit("error: --D is required for a single theorem case")
    case = TheoremCase(
        args.theorem, D=D,
        N=pick("N", args.N if args.N != 1 else None, int) or 1,
        p=pick("p", args.p, int),
        q=pick("q", args.q, int),
        m_max=pick("m_max", args.m_max, int) or _DEFAULT_MMAX[args.theorem],
        pins=pins)
    config = SuiteConfig([case], out_dir, cache_dir, fmt)
    code, reports = run_suite(config)
    if not out_dir:
        sys.stdout.write(reports[0].render(fmt))
    return code


def _cmd_classset(args) -> int:
    cache = ClassSetCache(args.cache_dir) if args.cache_dir else None
    cs = class_set_for(args.D, args.N, cache=cache)
    print("class set for D=%d, N=%d" % (cs.D, cs.N))
    print("mass = %s  (class number %d)" % (cs.mass, cs.class_number))
    for idx, (ideal, w) in enumerate(zip(cs.representatives, cs.weights)):
        print("class %d: nrd=%s weight=%d lattice=[%s]"
              % (idx, ideal.nrd, w, ideal.lattice.to_text()))
    classes = cs.genus()
    print("genus classes: %d" % len(classes))
    for idx, cls in enumerate(classes):
        print("  genus class %d: aut=%d theta=%s"
              % (idx, cls.aut, cls.theta(6)))
    return 0


def _cmd_local(args) -> int:
    print(weilmatch.lambda_table_text(args.p))
    return 0


def _cmd_degree(args) -> int:
    deg = heckedeg.deg_T(args.D, args.N, args.m)
    vol = heckedeg.volume(args.D, args.N)
    print("deg_T(D=%d, N=%d, m=%d) = %d" % (args.D, args.N, args.m, deg))
    print("volume = %s" % vol)
    print("r_prime = %s" % heckedeg.r_prime(args.D, args.N, args.m))
    return 0


def _cmd_certify(args) -> int:
    count = heckedeg.oracle_local_orbits(args.pattern, args.p, args.k, args.M)
    closed = {"split": heckedeg.local_degree_split,
              "level": heckedeg.local_degree_level,
              "ramified": heckedeg.local_degree_ramified}[args.pattern](args.p, args.k)
    print("oracle orbits: %d, closed form: %d, %s"
          % (count, closed, "AGREE" if count == closed else "MISMATCH"))
    return 0 if count == closed else 1


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "verify": _cmd_verify,
        "classset": _cmd_classset,
        "local": _cmd_local,
        "degree": _cmd_degree,
        "certify": _cmd_certify,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
