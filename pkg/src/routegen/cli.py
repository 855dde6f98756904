"""Command-line entry point: synth, train, generate, validate, render, serve.

Exit codes: 0 success, 1 usage error, 2 data error (bad files, bad
positions, bad parameters), 3 numeric failure (non-finite loss/gradient).
Identical invocations on identical inputs produce byte-identical outputs;
nothing here writes timestamps or machine-specific state.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import data, generation, render, vae
from .errors import DataError, NumericError, RouteGenError
from .service import ApiSession, serve
from .vae import checkpoint_hash

_DEFAULTS_NOTE = (
    "Defaults follow the reference MoonBoard 2017 training setup: "
    "2000 epochs, batch size 512, 16 latent dimensions, minimum 6 holds."
)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _env_seed() -> int:
    raw = os.environ.get("ROUTEGEN_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise _UsageError(f"ROUTEGEN_SEED must be an integer, got {raw!r}") from None


def _resolve_seed(value: int | None) -> int:
    return _env_seed() if value is None else value


def _load_config_file(path: str) -> dict:
    """Key=value config file; '#' starts a comment. Flags override these."""
    out: dict = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DataError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.replace("-", "_")
        for conv in (int, float):
            try:
                out[key] = conv(value)
                break
            except ValueError:
                continue
        else:
            out[key] = value
    return out


def build_parser() -> tuple[_Parser, dict]:
    parser = _Parser(prog="routegen",
                     description="Train a route VAE, sample new problems, "
                                 "check their validity, and render boards.",
                     epilog=_DEFAULTS_NOTE)
    sub = parser.add_subparsers(dest="command", metavar="command")
    subparsers: dict = {}

    def add(name: str, help_: str) -> _Parser:
        p = sub.add_parser(name, help=help_, epilog=_DEFAULTS_NOTE)
        p.add_argument("--config", help="key=value config file; flags override it")
        subparsers[name] = p
        return p

    p = add("synth", "write a deterministic synthetic corpus")
    p.add_argument("--count", type=int, required=True, help="number of problems")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed (default: $ROUTEGEN_SEED or 0)")
    p.add_argument("--out", required=True, help="output corpus path (.jsonl)")

    p = add("train", "train a model on a corpus")
    p.add_argument("--corpus", required=True, help="training corpus (.jsonl)")
    p.add_argument("--out", required=True, help="checkpoint output path")
    p.add_argument("--epochs", type=int, default=2000,
                   help="training epochs (default 2000, the reference setup)")
    p.add_argument("--batch", type=int, default=512,
                   help="batch size (default 512, the reference setup; "
                        "clamped to the corpus size)")
    p.add_argument("--latent", type=int, default=16,
                   help="latent dimensions (default 16, the reference setup)")
    p.add_argument("--lr", type=float, default=1e-3, help="Adam learning rate (default 1e-3)")
    p.add_argument("--noise-draws", type=int, default=1,
                   help="latent samples per input per step (default 1)")
    p.add_argument("--seed", type=int, default=None,
                   help="seed for init, shuffling, and noise (default: $ROUTEGEN_SEED or 0)")
    p.add_argument("--test-fraction", type=float, default=0.0,
                   help="hold out this fraction as a test split and report its loss "
                        "(default 0 = train on everything)")
    p.add_argument("--loss-log", help="write per-epoch loss CSV here")

    p = add("generate", "sample candidate routes from a trained model")
    p.add_argument("--model", required=True, help="checkpoint path")
    p.add_argument("--count", type=int, default=50, help="candidates to sample (default 50)")
    p.add_argument("--seed", type=int, default=None,
                   help="sampling seed (default: $ROUTEGEN_SEED or 0)")
    p.add_argument("--out", required=True, help="output candidates file (.jsonl)")
    p.add_argument("--corpus", help="corpus for duplicate checks")
    p.add_argument("--min-holds", type=int, default=6,
                   help="minimum holds per route (default 6, the reference rule)")
    p.add_argument("--reach-limit", type=float, default=5.0,
                   help="max grid distance treated as reachable (default 5.0)")
    p.add_argument("--k", type=int, default=None,
                   help="fixed hold count (default: decoder's expected count)")

    p = add("validate", "re-run validity rules over a problems file")
    p.add_argument("--problems", required=True, help="problems file (.jsonl)")
    p.add_argument("--corpus", help="corpus for duplicate checks")
    p.add_argument("--min-holds", type=int, default=6,
                   help="minimum holds per route (default 6)")
    p.add_argument("--reach-limit", type=float, default=5.0,
                   help="max reachable grid distance (default 5.0)")
    p.add_argument("--out", help="write per-problem reports as JSONL here "
                                 "(default: print a summary)")

    p = add("render", "draw one problem from a problems file")
    p.add_argument("--problem", required=True, help="problems file (.jsonl)")
    p.add_argument("--index", type=int, default=0, help="line index to draw (default 0)")
    p.add_argument("--svg", help="write an SVG here (default: ASCII to stdout)")
    p.add_argument("--cell-size", type=int, default=40, help="SVG cell size (default 40)")

    p = add("serve", "serve the HTTP API for the board UI")
    p.add_argument("--model", required=True, help="checkpoint path")
    p.add_argument("--corpus", help="corpus for duplicate checks")
    p.add_argument("--host", default="127.0.0.1", help="bind address (default 127.0.0.1)")
    p.add_argument("--port", type=int, default=8080, help="port (default 8080)")
    p.add_argument("--min-holds", type=int, default=6, help="minimum holds (default 6)")
    p.add_argument("--reach-limit", type=float, default=5.0,
                   help="max reachable grid distance (default 5.0)")

    return parser, subparsers


def _apply_config(argv: list[str], subparsers: dict) -> None:
    """Pre-scan argv for --config and install its values as defaults."""
    path = None
    for i, arg in enumerate(argv):
        if arg == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif arg.startswith("--config="):
            path = arg.split("=", 1)[1]
    if path is None:
        return
    values = _load_config_file(path)
    if not argv:
        return
    sub = subparsers.get(argv[0])
    if sub is None:
        return
    known = {a.dest for a in sub._actions}
    unknown = set(values) - known
    if unknown:
        raise _UsageError(
            f"config file {path}: unknown key(s) {', '.join(sorted(unknown))}"
        )
    sub.set_defaults(**values)


def _cmd_synth(args) -> int:
    corpus = data.synth_corpus(_resolve_seed(args.seed), args.count)
    data.save_corpus(corpus, args.out)
    print(f"wrote {len(corpus)} synthetic problems to {args.out}")
    return 0


def _cmd_train(args) -> int:
    corpus = data.load_corpus(args.corpus)
    test = None
    if args.test_fraction > 0:
        spec = data.SplitSpec(test_fraction=args.test_fraction, seed=_resolve_seed(args.seed))
        corpus, test = data.split_corpus(corpus, spec)
    seed = _resolve_seed(args.seed)
    config = vae.TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch,
        learning_rate=args.lr,
        seed=seed,
        noise_draws=args.noise_draws,
    )
    model = vae.VaeModel.create(seed=seed, latent_dim=args.latent)
    result = vae.train(model, corpus, config)
    for w in result.warnings:
        print(f"warning: {w}", file=sys.stderr)
    training_meta = {
        "epochs": config.epochs,
        "batch_size": config.batch_size,
        "learning_rate": config.learning_rate,
        "noise_draws": config.noise_draws,
        "seed": seed,
        "corpus_size": len(corpus),
    }
    vae.save_checkpoint(model, args.out, training=training_meta)
    if args.loss_log:
        vae.write_loss_csv(result.history, args.loss_log)
    final = result.history[-1]
    print(f"trained {config.epochs} epochs on {len(corpus)} problems; "
          f"final loss {final.total:.4f} "
          f"(binary {final.binary:.4f}, count {final.count:.4f}, kl {final.kl:.4f})")
    if test is not None and len(test) > 0:
        rep = _mean_eval_loss(model, test)
        print(f"held-out loss over {len(test)} problems: {rep:.4f}")
    print(f"checkpoint written to {args.out}")
    return 0


def _mean_eval_loss(model: vae.VaeModel, corpus: data.Corpus) -> float:
    """Deterministic evaluation loss: decode at the posterior mean."""
    import numpy as np
    from .board import problem_to_vector

    total = 0.0
    for p in corpus:
        x = problem_to_vector(p).astype(np.float64)
        mu, logvar = vae.encode(model, x)
        probs = vae.decode(model, mu)
        total += vae.loss_terms(x, probs, mu, logvar).total
    return total / len(corpus)


def _cmd_generate(args) -> int:
    model, _ = vae.load_checkpoint(args.model)
    corpus = data.load_corpus(args.corpus) if args.corpus else None
    config = generation.GenConfig(
        count=args.count,
        seed=_resolve_seed(args.seed),
        min_holds=args.min_holds,
        k_fixed=args.k,
        reach_limit=args.reach_limit,
    )
    candidates = generation.generate_batch(model, corpus, config)
    generation.write_candidates(candidates, args.out)
    n_valid = sum(1 for c in candidates if c.report.valid)
    print(f"generated {len(candidates)} candidates ({n_valid} pass all checks) "
          f"-> {args.out}")
    return 0


def _cmd_validate(args) -> int:
    corpus = data.load_corpus(args.corpus) if args.corpus else None
    problems = data.load_corpus(args.problems)
    lines = []
    n_valid = 0
    for p in problems:
        report = generation.validate_route(p, min_holds=args.min_holds,
                                           reach_limit=args.reach_limit)
        duplicate = generation.is_duplicate(p, corpus) if corpus else None
        rec = report.to_record()
        rec["duplicate_of"] = duplicate
        rec["valid"] = report.valid and duplicate is None
        if rec["valid"]:
            n_valid += 1
        lines.append({"name": p.name, "report": rec})
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            for entry in lines:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")
        print(f"validated {len(problems)} problems ({n_valid} valid) -> {args.out}")
    else:
        for entry in lines:
            rep = entry["report"]
            flags = " ".join(
                f"{k}={'ok' if rep[k] else 'FAIL'}"
                for k in ("min_holds_ok", "finish_ok", "start_ok", "reachable_ok")
            )
            dup = f" duplicate_of={rep['duplicate_of']}" if rep["duplicate_of"] else ""
            print(f"{entry['name']}: {'valid' if rep['valid'] else 'invalid'} ({flags}){dup}")
        print(f"{n_valid}/{len(problems)} problems pass all checks")
    return 0


def _cmd_render(args) -> int:
    problems = data.load_corpus(args.problem)
    if not (0 <= args.index < len(problems)):
        raise DataError(f"--index {args.index} outside [0, {len(problems) - 1}]")
    problem = problems[args.index]
    if args.svg:
        style = render.RenderStyle(cell_size=args.cell_size)
        Path(args.svg).write_text(render.render_svg(problem, style), encoding="utf-8")
        print(f"wrote {args.svg}")
    else:
        print(render.render_ascii(problem))
    return 0


def _cmd_serve(args) -> int:
    model, sidecar = vae.load_checkpoint(args.model)
    corpus = data.load_corpus(args.corpus) if args.corpus else None
    info = {
        "checkpoint_sha256": checkpoint_hash(args.model),
        "training": (sidecar or {}).get("training"),
    }
    session = ApiSession(model=model, corpus=corpus, info=info,
                         min_holds=args.min_holds, reach_limit=args.reach_limit)
    server = serve(session, host=args.host, port=args.port)
    print(f"serving on http://{args.host}:{server.server_address[1]}/ "
          f"(model {args.model}, {model.n_params} parameters)")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


_COMMANDS = {
    "synth": _cmd_synth,
    "train": _cmd_train,
    "generate": _cmd_generate,
    "validate": _cmd_validate,
    "render": _cmd_render,
    "serve": _cmd_serve,
}


def run(argv: list[str]) -> int:
    parser, subparsers = build_parser()
    try:
        _apply_config(argv, subparsers)
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            print("routegen: a command is required", file=sys.stderr)
            return 1
        return _COMMANDS[args.command](args)
    except _UsageError as e:
        print(f"routegen: {e}", file=sys.stderr)
        return 1
    except SystemExit as e:
        # argparse exits directly for --help; pass its code through
        return int(e.code or 0)
    except FileNotFoundError as e:
        print(f"routegen: {e}", file=sys.stderr)
        return 2
    except NumericError as e:
        print(f"routegen: numeric failure: {e}", file=sys.stderr)
        return 3
    except DataError as e:
        print(f"routegen: {e}", file=sys.stderr)
        return 2
    except RouteGenError as e:
        print(f"routegen: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
