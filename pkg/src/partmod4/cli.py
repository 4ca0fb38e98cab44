"""Command line interface: ``partmod4 <command> ...`` (or ``python -m partmod4``)."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .binary_qf import ClassGroupData, reduced_forms
from .cache import CacheStore, dumps
from .congruence import (NotQualifyingError, check_qualifying, partition_index_bound,
                         verify_theorem1, components_for)
from .exact_arith import Ring
from .hilbert import IntPolynomial, hilbert_poly
from .mock_theta import f_series, omega_series
from .qseries import (LaurentSeries, PartitionTable, delta_series, invdelta_series, j_series,
                      partition_table, seed_partition_table)
from .sturm import find_relations, relations_among, sturm_bound

SERIES_KINDS = ("P", "f", "omega", "delta", "j", "invdelta")


class CLIError(Exception):
    pass


# -- cached builders ----------------------------------------------------------


def load_classgroup(D: int, cache: CacheStore) -> ClassGroupData:
    name = f"D={D}"
    payload = cache.load("classgroup", name)
    if payload is not None:
        return ClassGroupData.from_json(payload)
    data = reduced_forms(D)
    cache.store("classgroup", name, data.to_json())
    return data


def load_hilbert(D: int, cache: CacheStore, jobs: int = 1) -> IntPolynomial:
    name = f"D={D}"
    payload = cache.load("hilbert", name)
    if payload is not None:
        return IntPolynomial(tuple(int(c) for c in payload["hilbert"]), prec=payload["prec_used"])
    cg = load_classgroup(D, cache)
    poly = hilbert_poly(D, cg, jobs=jobs)
    cache.store("hilbert", name, hilbert_payload(D, cg, poly))
    return poly


def hilbert_payload(D: int, cg: ClassGroupData, poly: IntPolynomial) -> dict:
    return {"D": D, "h": cg.class_number, "prec_used": poly.prec, "hilbert": poly.to_json()}


def load_partitions(N: int, ring: Ring, cache: CacheStore) -> PartitionTable:
    """Partition table through N, reusing any large enough cached table."""
    for M, name in cache.series_names("P", ring.label):
        if M >= N:
            payload = cache.load("series", name)
            if payload is not None:
                s = LaurentSeries.from_json(payload)
                seed_partition_table(PartitionTable(ring, s.dense(0, M)))
                return partition_table(N, ring)
    table = partition_table(N, ring)
    cache.store("series", f"P-{ring.label}-{N}", table.series().to_json())
    return table


def build_series(kind: str, N: int, ring: Ring) -> LaurentSeries:
    if kind == "P":
        return partition_table(N, ring).series()
    if kind == "f":
        return f_series(N, ring)
    if kind == "omega":
        return omega_series(N, ring)
    if kind == "delta":
        return delta_series(N, ring)
    if kind == "j":
        return j_series(N, ring)
    if kind == "invdelta":
        return invdelta_series(N, ring)
    raise CLIError(f"unknown series kind {kind!r}")


def load_series(kind: str, N: int, ring: Ring, cache: CacheStore) -> LaurentSeries:
    name = f"{kind}-{ring.label}-{N}"
    payload = cache.load("series", name)
    if payload is not None:
        return LaurentSeries.from_json(payload)
    s = build_series(kind, N, ring)
    cache.store("series", name, s.to_json())
    return s


# -- commands -----------------------------------------------------------------


def _ring_arg(value: str) -> Ring:
    return Ring.parse(int(value))


def _parse_set(text: str) -> list[int]:
    try:
        out = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise CLIError(f"invalid discriminant list {text!r}") from None
    if not out:
        raise CLIError("empty discriminant set")
    return out


def cmd_partition(args, cache, out):
    if args.upto is not None:
        if args.upto < 0:
            raise CLIError("--upto must be non-negative")
        table = partition_table(args.upto, args.mod)
        out.write(",".join(str(int(v)) for v in table.values) + "\n")
        return 0
    if args.n is None:
        raise CLIError("give n or --upto N")
    if args.n < 0:
        raise CLIError("n must be non-negative")
    out.write(f"{partition_table(args.n, args.mod)[args.n]}\n")
    return 0


def cmd_class(args, cache, out):
    check_qualifying(args.D)
    out.write(dumps(load_classgroup(args.D, cache).to_json()))
    return 0


def cmd_hilbert(args, cache, out):
    check_qualifying(args.D)
    poly = load_hilbert(args.D, cache, args.jobs)
    cg = load_classgroup(args.D, cache)
    out.write(dumps(hilbert_payload(args.D, cg, poly)))
    return 0


def cmd_series(args, cache, out):
    s = load_series(args.kind, args.terms, args.mod, cache)
    if args.format == "csv":
        # power series from q^0, Laurent series from their valuation
        start = min(s.valuation, 0)
        out.write(",".join(str(c) for c in s.coefficients(start, s.order)) + "\n")
    else:
        out.write(dumps({"kind": args.kind, **s.to_json()}))
    return 0


def cmd_verify_thm1(args, cache, out):
    D, N = args.D, args.terms
    check_qualifying(D)
    if N < 1:
        raise CLIError("--terms must be at least 1")
    load_partitions(partition_index_bound(D, N), Ring.MOD4, cache)
    components = components_for(D, N, args.source, Ring.MOD4)
    for spec in args.flip or []:
        j, n = (int(x) for x in spec.split(":"))
        components = components.with_override(j, n, components.coefficient(j, n) + 1)
    report = verify_theorem1(D, N, args.source, components)
    payload = report.to_json()
    payload["source"] = args.source
    if args.flip:
        payload["flipped"] = list(args.flip)
    out.write(dumps(payload))
    return 0 if report.first_mismatch is None else 1


def _fixture_rows():
    """Weight 62 level 1 forms E4^2 E6 Delta^4 (twice) and E4^5 E6 Delta^3, mod 4."""
    from .qseries import e4_series, e6_series

    N = 10 * sturm_bound(5)
    e4, e6, dl = (s(N, Ring.MOD4) for s in (e4_series, e6_series, delta_series))
    g = e4**2 * e6 * dl**4
    h = e4**5 * e6 * dl**3
    return {"g": g, "g_copy": g, "h": h}, sturm_bound(5), N


def cmd_find_relations(args, cache, out):
    if args.fixture:
        if args.fixture != "synthetic":
            raise CLIError(f"unknown fixture {args.fixture!r}")
        rows, B, N = _fixture_rows()
        rels = relations_among(rows, B, args.check_terms or N, ("g", "g_copy", "h"))
    else:
        if not args.set:
            raise CLIError("give --set or --fixture")
        S = sorted(set(_parse_set(args.set)))
        for D in S:
            check_qualifying(D)
        cgs = {D: load_classgroup(D, cache) for D in S}
        hs = {D: cg.class_number for D, cg in cgs.items()}
        B = sturm_bound(max(hs.values()))
        N_check = args.check_terms or 10 * B
        hil = {D: load_hilbert(D, cache, args.jobs).reduce(Ring.MOD4) for D in S}
        load_partitions(max(partition_index_bound(D, B) for D in S), Ring.MOD4, cache)
        rels = find_relations(S, N_check, jobs=args.jobs, hilbert=hil, class_numbers=hs)
    text = dumps([r.to_json() for r in rels])
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="partmod4", description="Partition values mod 4, mock theta series, "
                                "Hilbert class polynomials and mod 4 relations.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("--cache-dir", help="cache root (default: $PARTITION_MOD4_CACHE or ~/.cache/partmod4)")
    p.add_argument("--no-cache", action="store_true", help="neither read nor write the cache")
    p.add_argument("--stats", action="store_true", help="print cache counters to stderr")
    p.add_argument("--jobs", type=int, default=1, help="worker count for the parallel regions")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("partition", help="p(n), or a table p(0..N)")
    sp.add_argument("n", type=int, nargs="?")
    sp.add_argument("--upto", type=int)
    sp.add_argument("--mod", type=_ring_arg, default=Ring.INTEGERS, choices=list(Ring), metavar="{0,2,4}")
    sp.set_defaults(func=cmd_partition)

    sp = sub.add_parser("class", help="reduced forms and class number h(-D)")
    sp.add_argument("D", type=int)
    sp.set_defaults(func=cmd_class)

    sp = sub.add_parser("hilbert", help="Hilbert class polynomial H_{-D}")
    sp.add_argument("D", type=int)
    sp.set_defaults(func=cmd_hilbert)

    sp = sub.add_parser("series", help="q-expansion of a classical series")
    sp.add_argument("kind", choices=SERIES_KINDS)
    sp.add_argument("--terms", type=int, required=True, help="expand through q^N")
    sp.add_argument("--mod", type=_ring_arg, default=Ring.INTEGERS, choices=list(Ring), metavar="{0,2,4}")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_series)

    sp = sub.add_parser("verify-thm1", help="compare P(D;q) with L_D mod 4")
    sp.add_argument("D", type=int)
    sp.add_argument("--terms", type=int, default=500)
    sp.add_argument("--source", choices=("fast", "definition"), default="fast")
    sp.add_argument("--flip", action="append", metavar="J:N",
                    help="fault injection: add 1 to C_R(J;N) before comparing")
    sp.set_defaults(func=cmd_verify_thm1)

    sp = sub.add_parser("find-relations", help="mod 4 relations among normalized series")
    sp.add_argument("--set", help="comma separated discriminants D")
    sp.add_argument("--check-terms", type=int, help="extended verification order (default 10*B)")
    sp.add_argument("--out", help="write the JSON result here instead of stdout")
    sp.add_argument("--fixture", help="use a built-in synthetic row set ('synthetic')")
    sp.set_defaults(func=cmd_find_relations)
    return p


def main(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    args = parser.parse_args(argv)
    cache = CacheStore(args.cache_dir, enabled=not args.no_cache)
    try:
        code = args.func(args, cache, out)
    except (CLIError, NotQualifyingError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = 2
    if args.stats:
        print(json.dumps({"cache": dict(cache.stats)}, sort_keys=True), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
