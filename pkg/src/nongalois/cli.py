"""Command-line entry point.

Exit codes: 0 success or no witness, 3 not an absolute Galois group,
1 usage error, 2 input or contract error. Output is JSON with sorted keys;
errors also print a human-readable line on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import cohomology, detector, presentation, tgroup
from .class2 import GeneratorAction
from .fpmod import JordanType, NilpotentAction, jordan_type
from .words import WordSyntaxError, parse_word

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_FLAGGED = 0, 1, 2, 3
RULES = ("thm1.1", "thm1.2", "thm1.3", "tgroup", "h2dec")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit(obj, out):
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_pres(path: str, need_chi: bool = False):
    pres, chi = presentation.parse_presentation(_read(path))
    if need_chi and chi is None:
        raise InputError(f"{path}: no 'chi' line")
    return pres, chi


def _read_matrix(path: str, p: int) -> np.ndarray:
    rows = [line.split() for line in _read(path).splitlines() if line.split("#", 1)[0].strip()]
    try:
        m = np.array([[int(x) for x in r] for r in rows], dtype=np.int64)
    except ValueError:
        raise InputError(f"{path}: matrix entries must be integers") from None
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InputError(f"{path}: expected a square matrix")
    return m % p


def _parse_t(text: str) -> dict[int, int]:
    out = {}
    for item in filter(None, text.split(",")):
        k, eq, v = item.partition("=")
        if not eq:
            raise UsageError(f"--t expects i=n pairs, got {item!r}")
        try:
            out[int(k)] = int(v)
        except ValueError:
            raise UsageError(f"--t expects integers, got {item!r}") from None
    return out


def cmd_decompose(args, out):
    m = _read_matrix(args.matrix, args.p)
    act = NilpotentAction.from_sigma(m, args.p) if args.sigma else NilpotentAction(m, args.p)
    _emit(jordan_type(act).to_json(), out)
    return EXIT_OK


def cmd_tgroup(args, out):
    pres, chi = _load_pres(args.pres, need_chi=True)
    data = presentation.schreier_tgroup(pres, chi)
    _emit(tgroup.invariants_from_data(data).to_json(), out)
    return EXIT_OK


def cmd_canonical(args, out):
    inv = tgroup.TInvariants.from_map(args.p, _parse_t(args.t), args.u)
    _emit(tgroup.canonical(inv).to_json(), out)
    return EXIT_OK


def cmd_cohomology(args, out):
    pres, _ = _load_pres(args.pres)
    act = presentation.parse_action(_read(args.action), pres) if args.action else GeneratorAction.trivial(pres.d, pres.p, pres.names)
    _emit(cohomology.profile(pres, act, args.wedge_sign).to_json(), out)
    return EXIT_OK


def cmd_omega(args, out):
    pres, act = presentation.omega_presentation(args.p)
    res = {
        "p": args.p,
        "presentation": presentation.format_presentation(pres),
        "action": {n: img.format(pres.names) for n, img in zip(pres.names, act.images)},
    }
    code = EXIT_OK
    if args.verify:
        prof = cohomology.profile(pres, act, args.wedge_sign)
        p = args.p
        expected = {"h1": JordanType({p: 1}).to_json(), "h2dec": JordanType({p - 1: 1, p: (p - 3) // 2}).to_json()}
        res.update(prof.to_json())
        res["expected"] = expected
        res["match"] = prof.to_json() == expected
        code = EXIT_OK if res["match"] else EXIT_INPUT
    _emit(res, out)
    return code


def cmd_family(args, out):
    sig = _load_pres(args.sigma)[0] if args.sigma else None
    v = detector.family_detect(args.p, sig)
    _emit(v.to_json(), out)
    return EXIT_FLAGGED if v.flagged else EXIT_OK


def _detect_one(rule: str, path: str, opts: dict) -> dict:
    if rule == "h2dec":
        pres, chi = _load_pres(path)
        act = presentation.parse_action(_read(opts["action"]), pres) if opts.get("action") else GeneratorAction.trivial(pres.d, pres.p)
        has = bool(opts.get("has_zp2"))
        if chi is not None and not has:
            has = presentation.zp2_lift_exists(pres, chi)
        return detector.h2dec_detect(cohomology.h2dec_type(pres, act), pres.p, has).to_json()
    pres, chi = _load_pres(path, need_chi=True)
    if rule == "tgroup":
        return detector.tgroup_detect(pres, chi).to_json()

    def word(key, default=None):
        text = opts.get(key)
        if text is None:
            if default is None:
                raise UsageError(f"rule {rule} needs --{key.replace('_', '-')}")
            return default
        return parse_word(text, pres.names)

    s_default = presentation.Word.gen(next(i for i, v in enumerate(chi.values) if v))
    sigma = word("sigma", s_default)
    if rule == "thm1.1":
        if opts.get("e") is None:
            raise UsageError("rule thm1.1 needs --e")
        return detector.theorem1_case1(pres, chi, sigma, word("tau"), opts["e"]).to_json()
    if rule == "thm1.2":
        return detector.theorem1_case2(pres, chi, sigma, word("tau"), word("tau2")).to_json()
    return detector.theorem1_case3(pres, chi, sigma).to_json()


def _detect_safe(job):
    rule, path, opts = job
    try:
        return _detect_one(rule, path, opts)
    except UsageError:
        raise
    except Exception as exc:  # reported per file in batch mode
        if not isinstance(exc, _INPUT_ERRORS):
            raise
        return {"error": type(exc).__name__, "file": path, "message": str(exc)}


def cmd_detect(args, out):
    opts = {"sigma": args.sigma, "tau": args.tau, "tau2": args.tau2, "e": args.e, "action": args.action, "has_zp2": args.has_zp2}
    if len(args.pres) == 1:
        v = _detect_one(args.rule, args.pres[0], opts)
        _emit(v, out)
        return EXIT_FLAGGED if v["verdict"] == detector.FLAGGED else EXIT_OK
    jobs = [(args.rule, path, opts) for path in args.pres]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            results = list(ex.map(_detect_safe, jobs))
    else:
        results = [_detect_safe(j) for j in jobs]
    flagged = errors = False
    for path, r in zip(args.pres, results):
        r = dict(r, file=path)
        _emit(r, out)
        flagged |= r.get("verdict") == detector.FLAGGED
        errors |= "error" in r
    if errors:
        return EXIT_INPUT
    return EXIT_FLAGGED if flagged else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="nongalois", description="Obstructions to pro-p groups being absolute Galois groups.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("decompose", help="Jordan type of a nilpotent matrix over F_p")
    s.add_argument("--matrix", required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--sigma", action="store_true", help="the matrix is sigma rather than sigma - 1")
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("tgroup", help="T-group invariants of a presentation with a character")
    s.add_argument("--pres", required=True)
    s.set_defaults(func=cmd_tgroup)

    s = sub.add_parser("canonical", help="canonical T-group with given invariants")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--t", default="", help="e.g. 1=1,5=2")
    s.add_argument("--u", type=int, required=True)
    s.set_defaults(func=cmd_canonical)

    s = sub.add_parser("cohomology", help="H^1 and decomposable H^2 Jordan types")
    s.add_argument("--pres", required=True)
    s.add_argument("--action")
    s.add_argument("--wedge-sign", type=int, choices=(1, -1), default=1)
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("omega", help="the group Omega with its C_p-action")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--verify", action="store_true")
    s.add_argument("--wedge-sign", type=int, choices=(1, -1), default=1)
    s.set_defaults(func=cmd_omega)

    s = sub.add_parser("family", help="verdict for the family built from Omega and Sigma")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--sigma", help="presentation file for Sigma (default: trivial group)")
    s.set_defaults(func=cmd_family)

    s = sub.add_parser("detect", help="run one detection rule")
    s.add_argument("--rule", required=True, choices=RULES)
    s.add_argument("--pres", required=True, nargs="+")
    s.add_argument("--sigma")
    s.add_argument("--tau")
    s.add_argument("--tau2")
    s.add_argument("--e", type=int)
    s.add_argument("--action")
    s.add_argument("--has-zp2", action="store_true")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_detect)
    return ap


_INPUT_ERRORS = (
    InputError,
    ValueError,
    WordSyntaxError,
    NotImplementedError,
)


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        _emit({"error": "UsageError", "message": str(exc)}, out)
        err.write(f"usage error: {exc}\n")
        return EXIT_USAGE
    except _INPUT_ERRORS as exc:
        _emit({"error": type(exc).__name__, "message": str(exc)}, out)
        err.write(f"error: {exc}\n")
        return EXIT_INPUT


def main():
    sys.exit(run())
