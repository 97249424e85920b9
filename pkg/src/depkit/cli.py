"""Command-line interface: validate, train, parse, eval, kappa, oracle.

Exit status is 0 on success, 1 on data or validation failure and 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from . import __version__
from .conll import ConllDialect, ConllError, read_conll, write_conll
from .core import Tagset, default_tagset, validate_treebank
from .evaluation import attachment_scores, cohen_kappa
from .features import default_feature_model, parse_feature_spec
from .learner import TrainOptions
from .pipeline import load_model_file, parse_sentences, save_model_file, train_parser
from .transitions import ALIASES, SYSTEMS, NonProjectiveError, derive_sequence, get_system

PROG = "depkit"


class DataError(Exception):
    pass


def _read_text(path: Optional[str]) -> str:
    if path is None or path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8-sig") as f:
            return f.read()
    except OSError as e:
        raise DataError(f"cannot read {path}: {e.strerror}") from None


def _treebank(path: Optional[str]):
    try:
        return read_conll(_read_text(path))
    except ConllError as e:
        raise DataError(f"{path or '<stdin>'}: {e}") from None


def _tagset(path: Optional[str]) -> Tagset:
    if path is None:
        return default_tagset()
    try:
        return Tagset.from_lines(_read_text(path).splitlines())
    except ValueError as e:
        raise DataError(f"{path}: {e}") from None


def _write(text: str, path: Optional[str]):
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def _fmt(x: Optional[float]) -> str:
    return "-" if x is None else f"{x:.4f}"


def cmd_validate(args) -> int:
    sentences = _treebank(args.file)
    report = validate_treebank(sentences, _tagset(args.tagset), require_annotation=args.strict)
    print(f"sentences {len(sentences)}")
    print(report.format())
    return 0 if report.ok else 1


def cmd_train(args) -> int:
    treebank = _treebank(args.train)
    tagset = _tagset(args.tagset)
    if args.features:
        try:
            templates = parse_feature_spec(_read_text(args.features))
        except ValueError as e:
            raise DataError(f"{args.features}: {e}") from None
    else:
        templates = default_feature_model()
    opts = TrainOptions(epochs=args.epochs, seed=args.seed,
                        shuffle=not args.no_shuffle, averaged=not args.no_average)
    try:
        model, report = train_parser(treebank, args.algorithm, templates, tagset, opts)
    except ValueError as e:
        raise DataError(str(e)) from None
    save_model_file(model, args.model)
    print(f"algorithm {model.system.name}")
    print(f"sentences {report.total} used {report.used} skipped {report.skipped_nonprojective}")
    print(f"instances {report.instances}")
    print("mistakes " + " ".join(map(str, report.mistakes)))
    return 0


def cmd_parse(args) -> int:
    try:
        model = load_model_file(args.model)
    except OSError as e:
        raise DataError(f"cannot read {args.model}: {e.strerror}") from None
    except ValueError as e:
        raise DataError(f"{args.model}: {e}") from None
    sentences = _treebank(args.input)
    parsed = parse_sentences(model, sentences, workers=args.workers)
    _write(write_conll(parsed, ConllDialect(columns=args.columns)), args.output)
    return 0


def cmd_eval(args) -> int:
    gold = _treebank(args.gold)
    system = _treebank(args.system)
    exclude = [p for p in (args.exclude_pos or "").split(",") if p]
    try:
        report = attachment_scores(gold, system, exclude)
    except ValueError as e:
        raise DataError(str(e)) from None
    out = []
    if args.format == "json":
        doc = {"las": report.las, "uas": report.uas, "la": report.la,
               "tokens": report.token_count}
        if args.by_deprel:
            doc["per_deprel"] = {k: m.as_dict() for k, m in report.per_deprel.items()}
        out.append(json.dumps(doc, indent=2, ensure_ascii=False))
    elif args.format == "tsv":
        out.append("metric\tvalue")
        out += [f"LAS\t{report.las:.4f}", f"UAS\t{report.uas:.4f}", f"LA\t{report.la:.4f}",
                f"tokens\t{report.token_count}"]
        if args.by_deprel:
            out.append("")
            out.append("deprel\tgold\tsystem\tprecision\trecall\tfscore\tLAS\tUAS")
            for label, m in report.per_deprel.items():
                out.append("\t".join([label, str(m.gold_count), str(m.system_count),
                                      _fmt(m.precision), _fmt(m.recall), _fmt(m.fscore),
                                      _fmt(m.las), _fmt(m.uas)]))
    else:
        out.append(f"LAS {report.las:.4f} UAS {report.uas:.4f} LA {report.la:.4f}")
        out.append(f"tokens {report.token_count}")
        if args.by_deprel:
            width = max([6] + [len(k) for k in report.per_deprel])
            out.append(f"{'deprel':<{width}}  {'gold':>5} {'sys':>5} {'P':>7} {'R':>7} "
                       f"{'F':>7} {'LAS':>7} {'UAS':>7}")
            for label, m in report.per_deprel.items():
                out.append(f"{label:<{width}}  {m.gold_count:>5} {m.system_count:>5} "
                           f"{_fmt(m.precision):>7} {_fmt(m.recall):>7} {_fmt(m.fscore):>7} "
                           f"{_fmt(m.las):>7} {_fmt(m.uas):>7}")
    print("\n".join(out))
    return 0


def cmd_kappa(args) -> int:
    a = _treebank(args.a)
    b = _treebank(args.b)
    try:
        res = cohen_kappa(a, b, on=args.on)
    except ValueError as e:
        raise DataError(str(e)) from None
    print(f"kappa {res.kappa:.4f}")
    print(f"p(A) {res.p_observed:.4f}")
    print(f"p(E) {res.p_expected:.4f}")
    print(f"band {res.band}")
    print(f"tokens {res.n}")
    if res.degenerate:
        print("note: chance agreement is 1 (both annotators constant); kappa set to 1")
    return 0


def cmd_oracle(args) -> int:
    system = get_system(args.algorithm)
    out = []
    derived = 0
    treebank = _treebank(args.train)
    report = validate_treebank(treebank, _tagset(args.tagset), require_annotation=True)
    if not report.ok:
        first = report.issues[0]
        raise DataError(f"sentence {first.sentence} token {first.token}: {first.kind}: {first.message}")
    for i, s in enumerate(treebank):
        try:
            seq = derive_sequence(s, system)
        except NonProjectiveError:
            out.append(f"# sentence {i}: skipped, non-projective\n")
            continue
        derived += 1
        out.append(f"# sentence {i}\n" + "".join(f"{t}\n" for t in seq))
    sys.stdout.write("\n".join(out))
    if not derived and out:
        raise DataError(f"no sentence could be derived with {system.name}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    algorithms = sorted(SYSTEMS) + sorted(ALIASES)
    p = argparse.ArgumentParser(prog=PROG, description="Transition-based dependency parsing toolkit")
    p.add_argument("--version", action="version", version=f"{PROG} {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check CoNLL structure and labels")
    v.add_argument("file")
    v.add_argument("--tagset")
    v.add_argument("--strict", action="store_true", help="require HEAD and DEPREL on every token")
    v.set_defaults(func=cmd_validate)

    t = sub.add_parser("train", help="train a parser model")
    t.add_argument("--train", required=True)
    t.add_argument("--algorithm", required=True, choices=algorithms)
    t.add_argument("--features")
    t.add_argument("--tagset")
    t.add_argument("--epochs", type=int, default=10)
    t.add_argument("--seed", type=int, default=1)
    t.add_argument("--no-shuffle", action="store_true")
    t.add_argument("--no-average", action="store_true")
    t.add_argument("--model", required=True)
    t.set_defaults(func=cmd_train)

    pa = sub.add_parser("parse", help="fill HEAD/DEPREL with a trained model")
    pa.add_argument("--model", required=True)
    pa.add_argument("--input")
    pa.add_argument("--output")
    pa.add_argument("--columns", type=int, choices=(8, 10), default=10)
    pa.add_argument("--workers", type=int, default=1)
    pa.set_defaults(func=cmd_parse)

    e = sub.add_parser("eval", help="LAS/UAS/LA and per-relation scores")
    e.add_argument("--gold", required=True)
    e.add_argument("--system", required=True)
    e.add_argument("--by-deprel", action="store_true")
    e.add_argument("--exclude-pos", help="comma-separated POSTAG values to skip")
    e.add_argument("--format", choices=("text", "tsv", "json"), default="text")
    e.set_defaults(func=cmd_eval)

    k = sub.add_parser("kappa", help="Cohen's kappa between two annotations")
    k.add_argument("--a", required=True)
    k.add_argument("--b", required=True)
    k.add_argument("--on", choices=("label", "head", "both"), default="label")
    k.set_defaults(func=cmd_kappa)

    o = sub.add_parser("oracle", help="dump gold transition sequences")
    o.add_argument("--train", required=True)
    o.add_argument("--algorithm", required=True, choices=algorithms)
    o.add_argument("--tagset")
    o.set_defaults(func=cmd_oracle)
    return p


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    if getattr(args, "epochs", 1) < 1:
        print(f"{PROG}: error: --epochs must be >= 1", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except DataError as e:
        print(f"{PROG}: error: {e}", file=sys.stderr)
        return 1


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
