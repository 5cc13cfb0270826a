"""Command-line front end.

Every subcommand builds one result dictionary; ``--format json`` prints it and
``--format text`` renders the same numbers for people. Diagnostics go to
stderr. Exit codes:

    0  success
    1  a verification failed (or another qgr error)
    2  parse or usage error
    3  resource cap exceeded
    4  quiver has a sink or source where a core quiver is required
    5  module window too short or tail not projective
"""

from __future__ import annotations

import argparse
import contextlib
import io
import json
import os
import re
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path as FsPath
from typing import Callable, Sequence

from . import io as qio
from .errors import (CoreRequired, ParseError, QgrError, ResourceLimitError,
                     UnverifiedTail, WindowTooShort)
from .k0 import (Equivalent, K0Class, NotPositiveYet, Positive, k0_equal, k0_positive,
                 morita_equivalent_stationary)
from .leavitt import strongly_graded_certificate, verify_phi, verify_section_identities
from .modules import qgr_class, representation_from_json, tail_decomposition
from .quiver import PATH_CAP_ENV, Quiver, core, torsion_classification, veronese
from .series import expand, hilbert_series
from .tower import bratteli

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_RESOURCE = 3
EXIT_CORE = 4
EXIT_MODULE = 5

FORMATS = ("text", "json", "dot")


class UsageError(QgrError):
    pass


@dataclass
class Config:
    input: str | None
    format: str = "text"
    path_cap: int | None = None
    max_iter: int = 20
    vertex_order: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}")
        if self.path_cap is not None and self.path_cap <= 0:
            raise UsageError("--path-cap must be positive")
        if self.max_iter <= 0:
            raise UsageError("--max-iter must be positive")

    def load(self, path: str | None = None) -> Quiver:
        q = qio.load_quiver(path or self.input)
        if self.vertex_order:
            try:
                q = q.reorder(self.vertex_order)
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        return q


# -- result builders ----------------------------------------------------------

def _quiver_result(q: Quiver) -> dict:
    return {"quiver": qio.quiver_to_json(q)}


def cmd_info(cfg: Config, args) -> dict:
    q = cfg.load()
    t = torsion_classification(q)
    return {
        "vertices": len(q.vertices),
        "arrows": len(q.arrows),
        "sinks": list(q.sinks()),
        "sources": list(q.sources()),
        "acyclic": not t.infinite_vertices,
        "finite_start_vertices": list(t.finite_start_vertices),
        "infinite_vertices": list(t.infinite_vertices),
        "infinite_subquiver": qio.quiver_to_json(t.infinite_subquiver),
        "core": qio.quiver_to_json(core(q)),
        "_dot": qio.quiver_to_dot(q),
    }


def cmd_bratteli(cfg: Config, args) -> dict:
    d = bratteli(cfg.load(), args.levels)
    return {**d.to_json(), "_dot": d.to_dot()}


def cmd_core(cfg: Config, args) -> dict:
    c = core(cfg.load())
    return {**_quiver_result(c), "_dot": qio.quiver_to_dot(c, "core")}


def cmd_veronese(cfg: Config, args) -> dict:
    if args.m < 1:
        raise UsageError("-m must be at least 1")
    v = veronese(cfg.load(), args.m)
    return {**_quiver_result(v), "_dot": qio.quiver_to_dot(v, f"veronese{args.m}")}


def cmd_hilbert(cfg: Config, args) -> dict:
    q = cfg.load()
    h = hilbert_series(q)
    out = {"vertices": list(q.vertices), **h.to_json()}
    if args.expand is not None:
        if args.expand < 0:
            raise UsageError("--expand must be non-negative")
        out["expansion"] = [list(v) for v in expand(h, args.expand)]
    return out


def parse_class(text: str) -> K0Class:
    vec, _, level = text.partition("@")
    try:
        return K0Class(int(level) if level else 0, tuple(int(x) for x in vec.split(",")))
    except ValueError:
        raise UsageError(f"bad K0 class {text!r}; expected e.g. 1,-1@0") from None


def cmd_k0(cfg: Config, args) -> dict:
    q = cfg.load()
    if (args.equal is None) == (args.positive is None):
        raise UsageError("give exactly one of --equal or --positive")
    if args.equal is not None:
        x, y = (parse_class(s) for s in args.equal)
        _check_vec(q, x, y)
        return {"query": "equal", "x": x.to_json(), "y": y.to_json(),
                "equal": k0_equal(q, x, y)}
    x = parse_class(args.positive)
    _check_vec(q, x)
    res = k0_positive(q, x, cfg.max_iter)
    out = {"query": "positive", "x": x.to_json(), "max_iter": cfg.max_iter}
    if isinstance(res, Positive):
        out.update(result="positive", iterations=res.iterations)
    else:
        out.update(result="not-positive-yet")
    return out


def _check_vec(q: Quiver, *xs: K0Class) -> None:
    for x in xs:
        if len(x.vector) != len(q):
            raise UsageError(f"class {x} needs {len(q)} entries")


def cmd_leavitt_verify(cfg: Config, args) -> dict:
    q = cfg.load()
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    phi = verify_phi(q, args.n)
    sec = verify_section_identities(q)
    cert = strongly_graded_certificate(q)
    return {
        "phi": {**phi.to_json(), "summary": phi.summary()},
        "section": sec.to_json(),
        "strongly_graded": cert.to_json(),
        "ok": phi.ok and sec.ok and cert.ok,
    }


def cmd_morita(cfg: Config, args) -> dict:
    q1 = cfg.load(args.a)
    q2 = cfg.load(args.b)
    res = morita_equivalent_stationary(q1, q2)
    if isinstance(res, Equivalent):
        return {"result": "equivalent", "witness": res.witness}
    return {"result": "unknown", "reason": res.reason}


def cmd_module_class(cfg: Config, args) -> dict:
    q = cfg.load()
    mpath = FsPath(args.module)
    try:
        text = mpath.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", source=str(mpath)) from None
    m = representation_from_json(q, text, str(mpath))
    tail = tail_decomposition(m, args.level)
    out = {"vertices": list(q.vertices), "tail": tail.to_json()}
    out["class"] = qgr_class(m, args.level).to_json()
    return out


# -- text rendering -------------------------------------------------------------------

def _fmt_list(xs) -> str:
    return ", ".join(map(str, xs)) if xs else "(none)"


def _render_quiver(qj: dict) -> str:
    q = Quiver(tuple(qj["vertices"]),
               tuple((a["name"], a["from"], a["to"]) for a in qj["arrows"]))
    text = qio.quiver_to_edge_list(q)
    return text if text else "(empty quiver)\n"


def render_text(command: str, r: dict) -> str:
    lines: list[str] = []
    if command == "info":
        lines += [f"vertices: {r['vertices']}", f"arrows: {r['arrows']}",
                  f"sinks: {_fmt_list(r['sinks'])}", f"sources: {_fmt_list(r['sources'])}",
                  f"acyclic: {'yes' if r['acyclic'] else 'no'}",
                  f"finite-start vertices (I0): {_fmt_list(r['finite_start_vertices'])}",
                  f"infinite vertices: {_fmt_list(r['infinite_vertices'])}",
                  f"core vertices: {_fmt_list(r['core']['vertices'])}"]
    elif command == "bratteli":
        width = max([len(str(x)) for row in r["sizes"] for x in row] + [1])
        lines.append("level   " + " ".join(str(n).rjust(width) for n in range(r["levels"])))
        for k, v in enumerate(r["vertices"]):
            row = " ".join(str(s[k]).rjust(width) for s in r["sizes"])
            lines.append(f"{v}:".ljust(8) + row)
        lines.append("edges (n,i) -> (n+1,j):")
        for j, v in enumerate(r["vertices"]):
            for i, u in enumerate(r["vertices"]):
                if r["edges"][j][i]:
                    lines.append(f"  {u} -> {v}: {r['edges'][j][i]}")
    elif command in ("core", "veronese"):
        return _render_quiver(r["quiver"])
    elif command == "hilbert":
        from .series import IntPolynomial
        den = str(IntPolynomial(tuple(r["denominator"])))
        for v, num in zip(r["vertices"], r["numerators"]):
            lines.append(f"{v}: ({IntPolynomial(tuple(num))}) / ({den})")
        if "expansion" in r:
            lines.append("expansion:")
            for n, vec in enumerate(r["expansion"]):
                lines.append(f"  t^{n}: " + " ".join(map(str, vec)))
    elif command == "k0":
        def cls(c):
            return f"({','.join(map(str, c['vector']))})@{c['level']}"
        if r["query"] == "equal":
            rel = "==" if r["equal"] else "!="
            lines.append(f"{cls(r['x'])} {rel} {cls(r['y'])}")
        elif r["result"] == "positive":
            lines.append(f"{cls(r['x'])} positive (after {r['iterations']} steps)")
        else:
            lines.append(f"{cls(r['x'])} not positive yet after {r['max_iter']} steps")
    elif command == "leavitt-verify":
        p = r["phi"]
        lines.append(f"level {p['level']}: {p['summary']}")
        lines.append(f"  dim L0,n = {p['dim_L0']}, dim S_n = {p['dim_S']}, "
                     f"pairs checked = {p['pairs_checked']}")
        lines.append(f"  bijective: {p['bijective']}, anti-multiplicative: "
                     f"{p['anti_multiplicative']}, intertwines: {p['intertwines']}")
        for k, v in r["section"].items():
            lines.append(f"{k}: {v}")
        sg = r["strongly_graded"]
        lines.append("1 = " + " + ".join(f"[{a}][{b}]" for a, b in sg["one_in_L-1_L1"])
                     + f"  verified: {sg['ghost_arrow_verified']}")
        a, b = sg["one_in_L1_L-1"]
        lines.append(f"1 = [{a}][{b}]  verified: {sg['section_verified']}")
        lines.append("all checks passed" if r["ok"] else "CHECKS FAILED")
    elif command == "morita":
        if r["result"] == "equivalent":
            w = ", ".join(f"{k}->{v}" for k, v in r["witness"].items())
            lines.append(f"Morita equivalent (witness {w})")
        else:
            lines.append(f"unknown: {r['reason']}")
    elif command == "module-class":
        t = r["tail"]
        mult = " ".join(f"{v}:{m}" for v, m in zip(r["vertices"], t["multiplicities"]))
        lines.append(f"tail from degree {t['level']}: {mult} (verified: {t['verified']})")
        c = r["class"]
        lines.append(f"class: ({','.join(map(str, c['vector']))})@{c['level']}")
    return "\n".join(lines) + "\n"


COMMANDS: dict[str, Callable[[Config, argparse.Namespace], dict]] = {
    "info": cmd_info,
    "bratteli": cmd_bratteli,
    "core": cmd_core,
    "veronese": cmd_veronese,
    "hilbert": cmd_hilbert,
    "k0": cmd_k0,
    "leavitt-verify": cmd_leavitt_verify,
    "morita": cmd_morita,
    "module-class": cmd_module_class,
}
DOT_COMMANDS = {"info", "bratteli", "core", "veronese"}
_CLASS_ARG = re.compile(r"^-\d+(,-?\d+)*(@\d+)?$")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument("--path-cap", type=int, default=None,
                        help=f"explicit-path cap (default ${PATH_CAP_ENV} or 10^6)")
    common.add_argument("--vertex-order", default=None,
                        help="comma-separated vertex order overriding the file's")

    p = argparse.ArgumentParser(prog="qgr", description=__doc__.split("\n\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        return sp

    sp = add("info", help="counts, sinks, sources, torsion vertices")
    sp.add_argument("input")
    sp = add("bratteli", help="Bratteli diagram levels")
    sp.add_argument("input")
    sp.add_argument("--levels", type=int, required=True)
    sp = add("core", help="delete sinks and sources repeatedly")
    sp.add_argument("input")
    sp = add("veronese", help="quiver of length-m paths")
    sp.add_argument("input")
    sp.add_argument("-m", type=int, required=True)
    sp = add("hilbert", help="Hilbert series of the path algebra")
    sp.add_argument("input")
    sp.add_argument("--expand", type=int, default=None, metavar="N")
    sp = add("k0", help="equality and positivity in K_0")
    sp.add_argument("input")
    sp.add_argument("--equal", nargs=2, metavar=("V1@N1", "V2@N2"))
    sp.add_argument("--positive", metavar="V@N")
    sp.add_argument("--max-iter", type=int, default=20)
    # Let values such as -1,0@2 through instead of reading them as options.
    sp._negative_number_matcher = _CLASS_ARG
    sp = add("leavitt-verify", help="check phi, t+/t- and strong grading")
    sp.add_argument("input")
    sp.add_argument("--n", type=int, required=True)
    sp = add("morita", help="search for a conjugating vertex permutation")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("module-class", help="tail decomposition and K_0 class of a module")
    sp.add_argument("input")
    sp.add_argument("--module", required=True)
    sp.add_argument("--level", type=int, required=True)
    sp = sub.add_parser("fixtures", help="run the bundled regression fixtures")
    sp.add_argument("--dir", default=None, help="fixture directory (default: bundled)")
    sp.add_argument("--update", action="store_true", help="rewrite expected outputs")
    return p


def run(argv: Sequence[str], out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stderr(err):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    if args.command == "fixtures":
        return run_fixtures(args.dir, args.update, out, err)
    try:
        cfg = Config(
            input=getattr(args, "input", None),
            format=args.format,
            path_cap=args.path_cap,
            max_iter=getattr(args, "max_iter", 20),
            vertex_order=tuple(args.vertex_order.split(",")) if args.vertex_order else None,
        )
        if cfg.format == "dot" and args.command not in DOT_COMMANDS:
            raise UsageError(f"--format dot is not available for {args.command}")
        with _path_cap(cfg.path_cap):
            result = COMMANDS[args.command](cfg, args)
    except (ParseError, UsageError) as exc:
        print(f"qgr: error: {exc}", file=err)
        return EXIT_PARSE
    except ResourceLimitError as exc:
        print(f"qgr: resource limit: {exc}", file=err)
        return EXIT_RESOURCE
    except CoreRequired as exc:
        print(f"qgr: {exc}", file=err)
        return EXIT_CORE
    except (WindowTooShort, UnverifiedTail) as exc:
        print(f"qgr: {exc}", file=err)
        return EXIT_MODULE
    except QgrError as exc:
        print(f"qgr: {exc}", file=err)
        return EXIT_FAILED

    dot = result.pop("_dot", None)
    if cfg.format == "json":
        out.write(json.dumps(result, indent=2) + "\n")
    elif cfg.format == "dot":
        out.write(dot)
    else:
        out.write(render_text(args.command, result))
    if result.get("ok") is False:
        return EXIT_FAILED
    return EXIT_OK


@contextlib.contextmanager
def _path_cap(cap: int | None):
    if cap is None:
        yield
        return
    old = os.environ.get(PATH_CAP_ENV)
    os.environ[PATH_CAP_ENV] = str(cap)
    try:
        yield
    finally:
        if old is None:
            del os.environ[PATH_CAP_ENV]
        else:
            os.environ[PATH_CAP_ENV] = old


# -- regression fixtures -------------------------------------------------------------

def fixture_dir() -> FsPath:
    return FsPath(str(resources.files("qgr") / "fixtures"))


def run_fixture_case(case: dict, root: FsPath) -> tuple[int, str]:
    argv = [a.replace("{fixtures}", str(root)) for a in case["args"]]
    buf = io.StringIO()
    code = run(argv, out=buf, err=io.StringIO())
    return code, buf.getvalue()


def run_fixtures(directory: str | None, update: bool, out, err) -> int:
    root = FsPath(directory) if directory else fixture_dir()
    cases = json.loads((root / "cases.json").read_text())
    failures = 0
    for case in cases:
        code, text = run_fixture_case(case, root)
        expected_path = root / "expected" / case["expected"]
        want_code = case.get("exit", 0)
        if code != want_code:
            status = f"FAIL (exit {code}, expected {want_code})"
            failures += 1
        elif update:
            expected_path.parent.mkdir(parents=True, exist_ok=True)
            expected_path.write_text(text)
            status = "updated"
        elif expected_path.exists() and expected_path.read_text() == text:
            status = "ok"
        else:
            status = "FAIL"
            failures += 1
        print(f"{status:8} {case['name']}", file=out)
    print(f"{len(cases) - failures}/{len(cases)} fixtures passed", file=out)
    return EXIT_FAILED if failures else EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    return run(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
