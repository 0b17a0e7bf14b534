"""Command-line entry point: ``orthoreal <command> ...``.

Every report is a JSON document tagged ``"schema": "orthoreal/1"`` that echoes
the configuration and carries the convention block, so a report can be read
without the source.  Reports go to stdout unless ``--out`` is given; progress
goes to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import linalg as la
from .errors import OrthorealError
from .forms import CONVENTIONS as FORM_CONVENTIONS
from .forms import read_space, standard_space, write_space

SCHEMA = "orthoreal/1"
GROUP_TAGS = {"o": "O", "so": "SO", "k": "K", "t": "T", "omega": "Omega", "pomega": "POmega"}
TYPES = {"plus": 1, "minus": -1}
EXIT_USAGE = 2
EXIT_COMPUTE = 3

CONVENTIONS = {
    **FORM_CONVENTIONS,
    "field_elements": "integer code sum a_i p^i of the coordinates in the fixed polynomial basis",
    "quadratic_form": "odd q: Q(v) = v^T G v with Gram matrix G; even q: Q(v) = v^T A v, A upper triangular",
    "membership_labels": "bit 0: det = -1; bit 1: spinor norm nonsquare (char 2: rank parity for both)",
    "cyclotomic_values": "integer coefficient vectors in powers of z = exp(2 pi i/e) modulo Phi_e",
}


@dataclass
class RunConfig:
    command: str
    q: int | None = None
    n: int | None = None
    type: str | None = None
    group: str | None = None
    cap: int | None = None
    search_cap: int | None = None
    seed: int = 0
    threads: int = 1
    out: str | None = None
    format: str = "json"

    def validate(self) -> None:
        for name in ("cap", "search_cap"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"--{name.replace('_', '-')} must be positive")
        if self.threads < 1:
            raise ValueError("--threads must be positive")
        if self.q is not None:
            from .algebra.field import prime_power

            prime_power(self.q)


def _env_cap() -> int | None:
    env = os.environ.get("ORTHOREAL_CAP")
    return int(float(env)) if env else None


def _report(cfg: RunConfig, field_q: int | None, result) -> dict:
    fieldinfo = None
    if field_q is not None:
        from .algebra.field import prime_power

        p, k = prime_power(field_q)
        fieldinfo = {"q": field_q, "p": p, "k": k}
    return {"schema": SCHEMA, "version": __version__, "config": asdict(cfg), "field": fieldinfo,
            "conventions": CONVENTIONS, "result": result}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=False, default=_json_default) + "\n"


def _json_default(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return str(x)


def _load_element(args):
    from .ogroup import Isometry

    S = read_space(Path(args.space).read_text())
    _, M = la.read_matrix(Path(args.matrix).read_text(), S.field)
    return Isometry(S, M)


def _group_spec(tag: str, S):
    from .ogroup import GroupSpec

    return GroupSpec(GROUP_TAGS[tag], S)


# ---------------------------------------------------------------------------
# commands


def cmd_element_info(args, cfg):
    from .ogroup import GroupSpec, det_sign, dickson_parity, member, spinor_norm

    g = _load_element(args)
    S = g.space
    res = {"det": det_sign(g) if S.odd else 1,
           "spinor_norm": str(spinor_norm(g)) if S.odd else None,
           "dickson_parity": None if S.odd else dickson_parity(g)}
    for tag in ("SO", "K", "T", "Omega"):
        res[f"in_{tag}"] = member(g, GroupSpec(tag, S))
    res["elementary_divisors"] = [[str(f), e] for f, e in la.elementary_divisors(S.field, g.matrix)]
    return S.q, res


def cmd_decompose(args, cfg):
    from .decomp import check_invariants, classify_block_membership, decompose

    g = _load_element(args)
    d = decompose(g, seed=cfg.seed)
    blocks = []
    for b in d.blocks:
        entry = b.to_dict()
        if g.space.odd:
            entry["block_membership"] = classify_block_membership(b).to_dict()
        blocks.append(entry)
    return g.space.q, {"blocks": blocks, "invariants": check_invariants(d)}


def cmd_reality(args, cfg):
    from .reality import decide_reality

    g = _load_element(args)
    G = _group_spec(args.group, g.space)
    v = decide_reality(g, G, projective=args.projective, cap=cfg.search_cap, method=args.method)
    return g.space.q, v.to_dict()


def _std_group(cfg):
    from .ogroup import GroupSpec

    return GroupSpec(GROUP_TAGS[cfg.group], standard_space(cfg.n, cfg.q, TYPES[cfg.type]))


def cmd_census(args, cfg):
    from .reality import census, sampled_census

    G = _std_group(cfg)
    if args.sample:
        return cfg.q, sampled_census(G, count=args.sample, seed=cfg.seed, search_cap=cfg.search_cap)
    return cfg.q, census(G, cap=cfg.cap, search_cap=cfg.search_cap, seed=cfg.seed).to_dict()


def census_csv(result: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["class", "size", "real", "strongly_real", "weakly_real", "representative"])
    for i, c in enumerate(result["classes"]):
        w.writerow([i, c["size"], int(c["real"]), int(c["strongly_real"]), int(c["weakly_real"]),
                    json.dumps(c["rep"], separators=(",", ":"))])
    return buf.getvalue()


def cmd_construct(args, cfg):
    from .constructions import CONSTRUCTIONS, build_weakly_real_family, negative_control

    if args.name == "g-family":
        c = build_weakly_real_family(args.m, cfg.q, cap=cfg.search_cap)
    elif args.name == "negative":
        c = negative_control(cfg.q)
    else:
        c = CONSTRUCTIONS[args.name](cfg.q)
    files = None
    if cfg.out:
        out = Path(cfg.out)
        out.mkdir(parents=True, exist_ok=True)
        stem = c.name
        (out / f"{stem}.space").write_text(write_space(c.space))
        (out / f"{stem}.matrix").write_text(la.write_matrix(c.space.field, c.matrix))
        files = [f"{stem}.space", f"{stem}.matrix", f"{stem}.json"]
    res = c.to_dict()
    res["files"] = files
    return cfg.q, res


def cmd_chartable(args, cfg):
    from .characters import char_table, twisted_indicator

    G = _std_group(cfg)
    T = char_table(G, cap=cfg.cap, seed=cfg.seed)
    res = T.to_dict(with_values=not args.fs)
    res["checks"] = T.validate()
    if args.twist_by:
        _, s = la.read_matrix(Path(args.twist_by).read_text(), G.field)
        res["twisted_indicators"] = [twisted_indicator(T, s, i) for i in range(T.n_classes)]
    return cfg.q, res


def cmd_verify(args, cfg):
    from .verify import run_all

    only = {int(x) for x in args.only.split(",")} if args.only else None
    results = run_all(args.budget, only)
    table = []
    for r in results:
        print(r.line(), file=sys.stderr)
        d = r.to_dict()
        d.pop("seconds")
        table.append(d)
    return None, {"budget": args.budget, "all_passed": all(r.passed for r in results), "criteria": table}


# ---------------------------------------------------------------------------
# parser


def _add_common(p, out_help="write the report here instead of stdout"):
    p.add_argument("--out", help=out_help)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1, help="worker threads for group enumeration")
    p.add_argument("--cap", type=int, default=None, help="group enumeration cap (default ORTHOREAL_CAP or 10^6)")
    p.add_argument("--search-cap", type=int, default=None, help="reality search cost cap")


def _add_elem(p):
    p.add_argument("--space", required=True, help="space file")
    p.add_argument("--matrix", required=True, help="matrix file")


def _add_std(p, group_choices):
    p.add_argument("--type", choices=sorted(TYPES), default="plus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--group", choices=group_choices, required=True)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="orthoreal", description="Reality questions in finite orthogonal groups.")
    ap.add_argument("--version", action="version", version=f"orthoreal {__version__}")
    sub = ap.add_subparsers(dest="command")

    el = sub.add_parser("element", help="element queries")
    elsub = el.add_subparsers(dest="element_command")
    info = elsub.add_parser("info", help="determinant, spinor norm, memberships, elementary divisors")
    _add_elem(info)
    _add_common(info)

    dec = sub.add_parser("decompose", help="orthogonal decomposition into typed blocks")
    _add_elem(dec)
    _add_common(dec)

    rl = sub.add_parser("reality", help="decide real / strongly real / weakly real")
    _add_elem(rl)
    rl.add_argument("--group", choices=sorted(GROUP_TAGS), required=True)
    rl.add_argument("--projective", action="store_true", help="also decide reality modulo the centre")
    rl.add_argument("--method", choices=("auto", "naive", "structured"), default="auto")
    _add_common(rl)

    cen = sub.add_parser("census", help="class-by-class reality census of a standard group")
    _add_std(cen, sorted(GROUP_TAGS))
    cen.add_argument("--format", choices=("json", "csv"), default="json")
    cen.add_argument("--sample", type=int, default=0, help="sample this many random elements instead")
    _add_common(cen)

    con = sub.add_parser("construct", help="build a named element and check its assertions")
    con.add_argument("--name", choices=("u", "s0", "h", "u1", "h0", "eta", "g-family", "negative"), required=True)
    con.add_argument("--q", type=int, required=True)
    con.add_argument("--m", type=int, default=1, help="family index for g-family")
    _add_common(con, "directory for the space, matrix and JSON report files")

    ch = sub.add_parser("chartable", help="character table with Frobenius-Schur indicators")
    _add_std(ch, sorted(GROUP_TAGS))
    ch.add_argument("--fs", action="store_true", help="indicators only, omit character values")
    ch.add_argument("--twist-by", help="matrix file of an involution normalising the group")
    _add_common(ch)

    vp = sub.add_parser("verify-paper", help="run the acceptance suite")
    vp.add_argument("--budget", choices=("desk", "quick"), default="desk")
    vp.add_argument("--only", help="comma-separated criterion numbers")
    _add_common(vp)
    return ap


COMMANDS = {"element": cmd_element_info, "decompose": cmd_decompose, "reality": cmd_reality,
            "census": cmd_census, "construct": cmd_construct, "chartable": cmd_chartable,
            "verify-paper": cmd_verify}


def run(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.command is None or (args.command == "element" and args.element_command is None):
        ap.print_usage(sys.stderr)
        print("orthoreal: error: a command is required", file=sys.stderr)
        return EXIT_USAGE
    cfg = RunConfig(
        command=args.command if args.command != "element" else "element info",
        q=getattr(args, "q", None), n=getattr(args, "n", None), type=getattr(args, "type", None),
        group=getattr(args, "group", None),
        cap=args.cap if args.cap is not None else _env_cap(),
        search_cap=args.search_cap if args.search_cap is not None else _env_cap(),
        seed=args.seed, threads=args.threads,
        out=getattr(args, "out", None), format=getattr(args, "format", "json"))
    try:
        cfg.validate()
    except ValueError as exc:
        ap.print_usage(sys.stderr)
        print(f"orthoreal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(name)s: %(message)s")
    from .ogroup import set_threads

    set_threads(cfg.threads)
    try:
        q, result = COMMANDS[args.command](args, cfg)
    except OrthorealError as exc:
        _emit(_dump({"schema": SCHEMA, "version": __version__, "config": asdict(cfg), **exc.to_dict()}), cfg.out)
        return EXIT_COMPUTE
    except (OSError, ValueError) as exc:
        print(f"orthoreal: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    doc = _report(cfg, q, result)
    if args.command == "construct" and cfg.out:
        Path(cfg.out, f"{result['name']}.json").write_text(_dump(doc))
        sys.stdout.write(_dump(doc))
    elif args.command == "census" and cfg.format == "csv" and not args.sample:
        _emit(census_csv(result), cfg.out)
    else:
        _emit(_dump(doc), cfg.out)
    if args.command == "verify-paper" and not result["all_passed"]:
        return 1
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
