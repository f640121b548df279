"""Command-line entry point: ``projclust <subcommand> ...``.

Output is JSON unless ``--format table`` is given.  Exit codes: 0 success,
1 IO/parse/domain error (a JSON error object goes to stderr), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import core, frames, gates, golden, nnclassify, tones
from .errors import ProjClustError


def _floats(text: str):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _named_vector(text: str):
    name, sep, rest = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected NAME=x,y,z, got {text!r}")
    return name, _floats(rest)


def _render_table(obj) -> str:
    if isinstance(obj, list) and obj and all(isinstance(r, dict) for r in obj):
        cols = list(obj[0])
        cells = [[_cell(r.get(c)) for c in cols] for r in obj]
        widths = [max(len(c), *(len(row[i]) for row in cells)) for i, c in enumerate(cols)]
        lines = ["  ".join(c.ljust(w) for c, w in zip(cols, widths))]
        lines.append("  ".join("-" * w for w in widths))
        lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
        return "\n".join(lines)
    if isinstance(obj, dict):
        width = max(len(k) for k in obj) if obj else 0
        out = []
        for k, v in obj.items():
            if isinstance(v, (list, dict)) and v and not _flat(v):
                out.append(f"{k}:")
                out.append("  " + _render_table(v).replace("\n", "\n  "))
            else:
                out.append(f"{k.ljust(width)}  {_cell(v)}")
        return "\n".join(out)
    return _cell(obj)


def _flat(v):
    return isinstance(v, list) and all(not isinstance(x, (list, dict)) for x in v)


def _cell(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    if isinstance(v, list):
        return "[" + ", ".join(_cell(x) for x in v) + "]"
    return "" if v is None else str(v)


def _emit(args, obj):
    if args.format == "table":
        print(_render_table(obj))
    else:
        print(json.dumps(obj, indent=2))


def cmd_rgb(args):
    f = core.as_signal(args.color)
    if f.size != 3:
        raise ProjClustError("rgb needs exactly three components")
    cm = golden.rgb_machine()
    refs = [("R", golden.RED), ("G", golden.GREEN), ("B", (0.0, 0.0, 1.0))]
    refs += [(name, tuple(v)) for name, v in args.ref]
    sv = core.project_scores(cm, f)
    verdict = core.classify(cm, f, args.theta_hi, args.theta_lo)
    rows = [{"reference": name, "sq_distance": core.sq_distance(f, v),
             "F": core.dissimilarity_F(f, v)} for name, v in refs]
    _emit(args, {"color": f.tolist(), "scores": dict(zip(cm.labels, sv.scores.tolist())),
                 "verdict": verdict.to_dict(), "references": rows})
    return 0


def cmd_tone_recognize(args):
    if args.noise_bins and args.seed is None:
        raise ProjClustError("--noise-bins requires --seed")
    ranked = tones.recognize_wav(args.file, args.harmonics, args.measure,
                                 args.noise_bins, args.noise_amp, args.seed)
    rows = [{"tone": t.name, "k": t.k, "value": v} for t, v in ranked[: args.top]]
    _emit(args, rows)
    return 0


def cmd_tone_synth(args):
    sig = tones.synth_tone(args.fundamental, args.amps)
    tones.write_wav(args.output, sig)
    _emit(args, {"written": args.output, "fundamental": args.fundamental, "amplitudes": args.amps})
    return 0


def cmd_tone_spectrum(args):
    spec = tones.magnitude_spectrum(tones.load_wav(args.file), normalize=not args.raw)
    text = spec.to_csv()
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_gate(args):
    kinds = [args.kind.upper()] if args.kind else ["XOR", "OR"]
    out = {}
    if args.input is not None:
        for kind in kinds:
            out[kind] = list(gates.gate_scores(kind, args.input))
        _emit(args, out)
        return 0
    for kind in kinds:
        out[kind] = [{"input": f"I{j}", "bits": list(bits), "output": f"O{o + 1}",
                      "q1": q[0], "q2": q[1]} for j, bits, o, q in gates.truth_table(kind)]
    out["transport"] = [
        {"direction": d, "from": p, "to": gates.transport(d, p)}
        for d, p in (("or->xor", "QT1"), ("or->xor", "QT2"), ("xor->or", "Q1"), ("xor->or", "Q2"))
    ]
    out["traces"] = gates.traces()
    _emit(args, out)
    return 0


def _read_queries(path, dim):
    import csv

    queries = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        next(reader, None)
        for rownum, row in enumerate(reader, start=1):
            if not row:
                continue
            if len(row) not in (dim, dim + 1):
                raise ProjClustError(f"{path} row {rownum}: expected {dim} features")
            try:
                queries.append([float(c) for c in row[:dim]])
            except ValueError:
                raise ProjClustError(f"{path} row {rownum}: non-numeric feature") from None
    return queries


def cmd_classify(args):
    ds = nnclassify.load_dataset(args.train, value_range=args.range)
    rows = []
    for q in _read_queries(args.query, ds.dim):
        rows.append(nnclassify.diagnose(ds, q, args.metric, args.normalize).to_dict())
    if args.format == "table":
        print(_render_table(rows))
    else:
        for r in rows:
            print(json.dumps(r))
    return 0


def cmd_frame(args):
    if args.file:
        with open(args.file) as fh:
            fr = frames.frame_from_json(fh.read())
    else:
        dim = args.dim or (len(args.f) if args.f else 3)
        fr = frames.scaled_pair_frame(dim, args.scale)
    A, B = fr.bounds
    out = {"dim": fr.dim, "size": fr.size, "A": A, "B": B, "tight": fr.tight}
    if fr.size * fr.dim <= 10_000:
        dual = fr.dual_vectors
        out["dual"] = (dual.toarray() if hasattr(dual, "toarray") else dual).tolist()
    if args.f is not None or args.g is not None:
        if args.f is None or args.g is None:
            raise ProjClustError("--f and --g must be given together")
        rep = frames.dissimilarity_report(fr, args.f, args.g)
        out.update(delta=rep.delta, nabla=rep.nabla, sup_analysis=rep.sup_analysis,
                   sup_dual=rep.sup_dual, norm=float(np.linalg.norm(np.subtract(args.f, args.g))))
        if args.eps is not None:
            out["member"] = {m: bool(frames.cluster_member(fr, args.g, args.f, args.eps, m))
                             for m in frames.MEASURES}
    _emit(args, out)
    return 0


def cmd_demo(args):
    checks = golden.all_checks()
    if args.format == "table":
        for c in checks:
            print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {_cell(c.value)} (expected {_cell(c.expected)})")
    else:
        print(json.dumps([c.to_dict() for c in checks], indent=2, default=float))
    return 0 if all(c.passed for c in checks) else 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "table"), default="json")

    p = argparse.ArgumentParser(prog="projclust", description="Projector-based clustering toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("rgb", parents=[common], help="score a color against R, G, B")
    s.add_argument("color", type=float, nargs=3, metavar=("R", "G", "B"))
    s.add_argument("--ref", type=_named_vector, action="append", default=[],
                   help="extra reference point NAME=r,g,b")
    s.add_argument("--theta-hi", type=float, default=core.DEFAULT_THETA_HI)
    s.add_argument("--theta-lo", type=float, default=core.DEFAULT_THETA_LO)
    s.set_defaults(func=cmd_rgb)

    t = sub.add_parser("tone", help="tone recognition")
    tsub = t.add_subparsers(dest="tone_command", required=True)
    r = tsub.add_parser("recognize", parents=[common], help="rank reference tones for a WAV file")
    r.add_argument("file")
    r.add_argument("--harmonics", type=int, default=2)
    r.add_argument("--measure", choices=tones.MEASURES, default="sqnorm")
    r.add_argument("--noise-bins", type=int, default=0)
    r.add_argument("--noise-amp", type=float, default=0.1)
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--top", type=int, default=48)
    r.set_defaults(func=cmd_tone_recognize)
    y = tsub.add_parser("synth", parents=[common], help="write a harmonic test tone")
    y.add_argument("--fundamental", type=int, required=True)
    y.add_argument("--amps", type=_floats, default=[1.0])
    y.add_argument("-o", "--output", required=True)
    y.set_defaults(func=cmd_tone_synth)
    c = tsub.add_parser("spectrum", parents=[common], help="export the magnitude spectrum as CSV")
    c.add_argument("file")
    c.add_argument("-o", "--output")
    c.add_argument("--raw", action="store_true", help="skip normalization")
    c.set_defaults(func=cmd_tone_spectrum)

    g = sub.add_parser("gate", parents=[common], help="XOR/OR truth tables and transport")
    g.add_argument("--kind", choices=("xor", "or", "XOR", "OR"))
    g.add_argument("--input", type=_floats)
    g.set_defaults(func=cmd_gate)

    k = sub.add_parser("classify", parents=[common], help="nearest-neighbour diagnosis")
    k.add_argument("--train", required=True)
    k.add_argument("--query", required=True)
    k.add_argument("--metric", choices=nnclassify.METRICS, default="F")
    k.add_argument("--normalize", action="store_true")
    k.add_argument("--range", type=_floats, default=None, help="lo,hi feature bounds check")
    k.set_defaults(func=cmd_classify)

    f = sub.add_parser("frame", parents=[common], help="frame bounds, duals and Delta/nabla")
    f.add_argument("file", nargs="?", help='JSON {"dim": n, "vectors": [...]}')
    f.add_argument("--dim", type=int)
    f.add_argument("--scale", type=float, default=0.5)
    f.add_argument("--f", type=_floats)
    f.add_argument("--g", type=_floats)
    f.add_argument("--eps", type=float)
    f.set_defaults(func=cmd_frame)

    d = sub.add_parser("demo", parents=[common], help="check the worked numeric examples")
    d.set_defaults(func=cmd_demo)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ProjClustError, OSError, ValueError, KeyError) as exc:
        err = {"error": type(exc).__name__, "message": str(exc).strip("'\"")}
        print(json.dumps(err), file=sys.stderr)
        return 1


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
