"""Command-line entry points for every workflow.

All subcommands exit nonzero with a single `duetbench: error: ...` line on
stderr when something is wrong. Flags can be provided via environment
variables prefixed DUETBENCH_ (e.g. DUETBENCH_PORT for --port).
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .agents import EmbeddingGuesser, Listener, LiteralGiver, RsaConfig, RsaGiver
from .analysis import analysis_report, load_features_csv, scatter_csv
from .dataset import load_records, to_turn_examples
from .game import Board, GameState, Status, generate_board, new_game
from .harness import ExperimentConfig, ExperimentResources, run_experiment, sweep
from .lexicon import LinearHead, load_embeddings
from .metrics import SimulatedTurn, alignment
from .training import TrainConfig, train


class CliError(ValueError):
    pass


def _env(flag: str):
    return os.environ.get("DUETBENCH_" + flag.upper().replace("-", "_"))


def _load_wordpool(path) -> tuple[str, ...]:
    words = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        w = line.strip().lower()
        if w:
            words.append(w)
    if not words:
        raise CliError(f"{path}: empty word pool")
    return tuple(words)


def _load_heads(paths_or_dir, cultures=None) -> dict:
    heads: dict = {"base": None}
    if paths_or_dir is None:
        return heads
    p = Path(paths_or_dir)
    files = sorted(p.glob("*.json")) if p.is_dir() else [Path(x) for x in str(paths_or_dir).split(",")]
    for f in files:
        heads[f.stem] = LinearHead.load(f)
    if cultures:
        missing = [c for c in cultures if c not in heads]
        if missing:
            raise CliError(f"no head file for cultures: {', '.join(missing)}")
    return heads


def _resources(args, cultures=None) -> ExperimentResources:
    table = load_embeddings(args.embeddings, vocab_limit=getattr(args, "vocab_limit", None))
    wordpool = _load_wordpool(args.wordpool) if getattr(args, "wordpool", None) else ()
    heads = _load_heads(getattr(args, "heads", None) or getattr(args, "heads_dir", None), cultures)
    return ExperimentResources(table=table, wordpool=wordpool, heads=heads)


def cmd_train(args) -> int:
    records, report = load_records(args.records)
    if report.errors:
        print(report.summary(), file=sys.stderr)
    for cond in args.filter or []:
        key, _, value = cond.partition("=")
        if not value:
            raise CliError(f"--filter must look like key=value, got {cond!r}")
        who = "guesser_demographics" if args.filter_on == "guesser" else "giver_demographics"
        records = [r for r in records if getattr(r, who).get(key) == value]
    if args.split:
        records = [r for r in records if r.split == args.split]
    if not records:
        raise CliError("no records left after filtering")
    examples, skipped = to_turn_examples(records, selection=args.selection)
    if skipped:
        print(f"skipped {skipped} turns with no selected words", file=sys.stderr)
    table = load_embeddings(args.embeddings, vocab_limit=args.vocab_limit)
    usable = [
        ex
        for ex in examples
        if ex.clue in table and all(w in table for w in ex.board_words)
    ]
    dropped = len(examples) - len(usable)
    if dropped:
        print(f"dropped {dropped} examples with out-of-vocabulary words", file=sys.stderr)
    if not usable:
        raise CliError("no in-vocabulary training examples")
    if args.config:
        cfg = TrainConfig.from_json(json.loads(Path(args.config).read_text()))
    else:
        cfg = TrainConfig(
            epochs=args.epochs,
            learning_rate=args.lr,
            batch_size=args.batch_size,
            seed=args.seed,
            optimizer=args.optimizer,
            d_out=args.d_out,
            use_bias=args.bias,
        )
    result = train(usable, table, cfg)
    result.head.save(args.out)
    if args.loss_csv:
        with open(args.loss_csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["epoch", "mean_loss"])
            for i, loss in enumerate(result.epoch_losses, start=1):
                writer.writerow([i, f"{loss:.10g}"])
    print(
        f"trained on {len(usable)} examples for {cfg.epochs} epochs; "
        f"final loss {result.epoch_losses[-1]:.5f}; head -> {args.out}"
    )
    return 0


def _experiment_config(args) -> ExperimentConfig:
    cultures = tuple(args.cultures.split(",")) if args.cultures else ()
    return ExperimentConfig(
        giver_kind=args.giver,
        giver_cultures=cultures,
        guesser_kind=args.guesser,
        guesser_culture=args.guesser_culture,
        board_count=args.boards,
        base_seed=args.base_seed,
        runs=args.runs,
        rsa=RsaConfig(
            alpha=args.alpha,
            delta=args.delta,
            clue_vocab_size=args.clue_vocab_size,
        ),
        beta=args.beta,
        max_turns=args.max_turns,
        guesses_per_turn=args.guesses_per_turn,
        external_url=args.external_url,
    )


def cmd_eval(args) -> int:
    cfg = _experiment_config(args)
    needed = set(cfg.giver_cultures)
    if cfg.guesser_culture:
        needed.add(cfg.guesser_culture)
    resources = _resources(args, cultures=[c for c in needed if c != "base"])
    report = run_experiment(cfg, resources)
    payload = report.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True))
    if args.csv:
        row = report.win.csv_row()
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(row))
            writer.writeheader()
            writer.writerow(row)
    if args.transcripts:
        Path(args.transcripts).write_text(report.transcripts_jsonl() + "\n")
    print(
        f"win rate {report.win.rate:.3f} +- {report.win.stderr:.3f} "
        f"({report.win.wins}/{report.win.games} games, {report.win.errored} errored)"
    )
    if not args.out:
        print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_sweep(args) -> int:
    cfg = _experiment_config(args)
    resources = _resources(args, cultures=[c for c in cfg.giver_cultures if c != "base"])
    alphas = [float(x) for x in args.alphas.split(",")]
    deltas = [float(x) for x in args.deltas.split(",")]
    rows = sweep(alphas, deltas, cfg, resources)
    out = args.out or "sweep.csv"
    with open(out, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["alpha", "delta", "wins", "games", "rate", "stderr", "errored"]
        )
        writer.writeheader()
        writer.writerows(rows)
    for row in rows:
        print(
            f"alpha={row['alpha']} delta={row['delta']} rate={row['rate']:.3f} "
            f"stderr={row['stderr']:.3f}"
        )
    print(f"grid -> {out}")
    return 0


def _replay_state(board: Board, unrevealed_words) -> GameState:
    revealed = frozenset(w for w in board.words if w not in set(unrevealed_words))
    state = new_game(board)
    return replace(state, revealed=revealed)


def cmd_replay_metrics(args) -> int:
    records, report = load_records(args.records)
    if report.errors:
        print(report.summary(), file=sys.stderr)
    table = load_embeddings(args.embeddings, vocab_limit=args.vocab_limit)
    head = LinearHead.load(args.head) if args.head else None
    listener = Listener(table, head)
    rsa_cfg = RsaConfig(
        alpha=args.alpha, delta=args.delta, clue_vocab_size=args.clue_vocab_size
    )
    giver_cls = RsaGiver if args.giver == "rsa" else LiteralGiver
    guesser = EmbeddingGuesser(listener)

    simulated = []
    skipped_oov = 0
    for rec in records:
        first = rec.turns[0]
        board = Board(
            words=first.board_words,
            roles={w: r for w, r in first.board_roles.items()},
            seed=0,
        )
        giver = None
        for turn in rec.turns:
            sim = SimulatedTurn()
            try:
                state = _replay_state(board, turn.board_words)
                if giver is None:
                    giver = giver_cls(listener, board, rsa_cfg)
                clue, target = giver.clue(state)
                sim = replace(sim, clue=clue, targets=(target,))
            except Exception:
                skipped_oov += 1
            try:
                dist = guesser.distribution(turn.clue, turn.board_words)
                k = max(1, len(turn.guesses))
                order = np.argsort(-dist.probs, kind="stable")[:k]
                sim = replace(sim, guesses=tuple(dist.support[i] for i in order))
            except Exception:
                skipped_oov += 1
            simulated.append(sim)
    if skipped_oov:
        print(
            f"{skipped_oov} turn simulations failed (out-of-vocabulary or degenerate)",
            file=sys.stderr,
        )
    report = alignment(simulated, records)
    payload = report.to_json()
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True))
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_analyze(args) -> int:
    features = load_features_csv(args.features, labeled=not args.unlabeled)
    payload = analysis_report(
        features,
        pca_k=args.pca_k,
        kmeans_k=args.kmeans_k,
        probe_seeds=args.seeds,
        kmeans_seed=args.kmeans_seed,
    )
    if args.scatter:
        scatter_csv(features, args.scatter)
    if args.out:
        Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True))
    print(json.dumps(payload, indent=2, sort_keys=True))
    return 0


def cmd_gen_boards(args) -> int:
    table = load_embeddings(args.embeddings, vocab_limit=args.vocab_limit) if args.embeddings else None
    pool = _load_wordpool(args.wordpool)
    boards = [
        generate_board(pool, seed, vocab=table)
        for seed in range(args.base_seed, args.base_seed + args.count)
    ]
    payload = [b.to_json() for b in boards]
    Path(args.out).write_text(json.dumps(payload, indent=2, sort_keys=True))
    print(f"{len(boards)} boards (seeds {args.base_seed}..{args.base_seed + args.count - 1}) -> {args.out}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    resources = _resources(args)
    app = create_app(resources, transcript_path=args.transcripts)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_play_tty(args) -> int:
    from .agents import C3Giver, CulturePosterior
    from .game import TurnLog, apply_guess, end_turn, log_turn

    cultures = args.cultures.split(",")
    resources = _resources(args, cultures=[c for c in cultures if c != "base"])
    board = generate_board(resources.wordpool, args.seed, vocab=resources.table)
    state = new_game(board, max_turns=args.max_turns)
    posterior = CulturePosterior.uniform(
        cultures, [resources.listener(c) for c in cultures], beta=args.beta
    )
    giver = C3Giver(posterior, board, RsaConfig(alpha=args.alpha, delta=args.delta))

    print("You are the guesser. Reveal all 9 goal words; 3 avoid words lose.")
    while state.status is Status.ONGOING:
        clue, target = giver.clue(state)
        unrevealed = state.unrevealed()
        grid = [w if w in unrevealed else f"[{board.role_of(w).value}]" for w in board.words]
        for i in range(0, 25, 5):
            print("  " + " | ".join(f"{w:>12}" for w in grid[i : i + 5]))
        print(f"turn {state.turn + 1}/{state.max_turns}  clue: {clue!r} (1 target)")
        word = ""
        while word not in unrevealed:
            word = input("guess> ").strip().lower()
        state, outcome = apply_guess(state, word)
        giver.observe(clue, word, unrevealed)
        state = log_turn(state, TurnLog(clue, (target,), ((word, outcome),)))
        state = end_turn(state)
        shares = giver.posterior.normalized()
        belief = ", ".join(
            f"{c}={s:.2f}" for c, s in zip(giver.posterior.cultures, shares)
        )
        print(f"outcome: {outcome.value}   belief about your culture: {belief}")
    print(f"game {state.status.value} after {state.turn} turns")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="duetbench")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_embeddings(p, required=True):
        p.add_argument("--embeddings", default=_env("embeddings"), required=required and not _env("embeddings"))
        p.add_argument("--vocab-limit", type=int, default=None)

    p = sub.add_parser("train", help="train a culture head on recorded games")
    p.add_argument("--records", required=True)
    add_embeddings(p)
    p.add_argument("--filter", action="append", help="guesser demographic key=value")
    p.add_argument("--filter-on", choices=("guesser", "giver"), default="guesser")
    p.add_argument("--split", choices=("train", "validation", "test"), default=None)
    p.add_argument("--selection", choices=("human_guesses", "giver_targets"), default="human_guesses")
    p.add_argument("--epochs", type=int, default=25)
    p.add_argument("--lr", type=float, default=1e-2)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--optimizer", choices=("sgd", "adam"), default="sgd")
    p.add_argument("--d-out", type=int, default=None)
    p.add_argument("--bias", action="store_true")
    p.add_argument("--out", required=True)
    p.add_argument("--loss-csv", default=None)
    p.add_argument("--config", default=None, help="JSON training config; overrides the tuning flags")
    p.set_defaults(func=cmd_train)

    def add_eval_args(p):
        add_embeddings(p)
        p.add_argument("--wordpool", default=_env("wordpool"), required=not _env("wordpool"))
        p.add_argument("--heads", default=_env("heads"), help="directory or comma-separated head files")
        p.add_argument("--giver", choices=("literal", "rsa", "rsa_c3"), required=True)
        p.add_argument("--cultures", default="", help="comma-separated culture ids")
        p.add_argument("--guesser", choices=("embedding", "scripted", "external"), default="embedding")
        p.add_argument("--guesser-culture", default=None)
        p.add_argument("--boards", type=int, default=100)
        p.add_argument("--base-seed", type=int, default=0)
        p.add_argument("--runs", type=int, default=3)
        p.add_argument("--alpha", type=float, default=0.5)
        p.add_argument("--delta", type=float, default=0.1)
        p.add_argument("--beta", type=float, default=0.5)
        p.add_argument("--clue-vocab-size", type=int, default=2000)
        p.add_argument("--max-turns", type=int, default=15)
        p.add_argument("--guesses-per-turn", type=int, default=1)
        p.add_argument("--external-url", default=None)

    p = sub.add_parser("eval", help="interactive evaluation on a seeded board suite")
    add_eval_args(p)
    p.add_argument("--out", default=None)
    p.add_argument("--csv", default=None, help="also write the win-rate report as a CSV row")
    p.add_argument("--transcripts", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", help="alpha x delta grid over the same boards")
    add_eval_args(p)
    p.add_argument("--alphas", required=True)
    p.add_argument("--deltas", required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("replay-metrics", help="alignment of simulated agents vs human records")
    p.add_argument("--records", required=True)
    add_embeddings(p)
    p.add_argument("--head", default=None)
    p.add_argument("--giver", choices=("literal", "rsa"), default="rsa")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--clue-vocab-size", type=int, default=2000)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_replay_metrics)

    p = sub.add_parser("analyze", help="PCA / k-means / linear probe on a feature CSV")
    p.add_argument("--features", required=True)
    p.add_argument("--unlabeled", action="store_true")
    p.add_argument("--pca-k", type=int, default=5)
    p.add_argument("--kmeans-k", type=int, default=None)
    p.add_argument("--kmeans-seed", type=int, default=0)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--scatter", default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("gen-boards", help="emit a deterministic board suite")
    p.add_argument("--wordpool", default=_env("wordpool"), required=not _env("wordpool"))
    p.add_argument("--embeddings", default=_env("embeddings"))
    p.add_argument("--vocab-limit", type=int, default=None)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--base-seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_boards)

    p = sub.add_parser("serve", help="HTTP session service for live play")
    add_embeddings(p)
    p.add_argument("--wordpool", default=_env("wordpool"), required=not _env("wordpool"))
    p.add_argument("--heads-dir", default=_env("heads_dir"))
    p.add_argument("--host", default=_env("host") or "127.0.0.1")
    p.add_argument("--port", type=int, default=int(_env("port") or 8000))
    p.add_argument("--transcripts", default=_env("transcripts"))
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("play-tty", help="play against the adaptive giver in the terminal")
    add_embeddings(p)
    p.add_argument("--wordpool", default=_env("wordpool"), required=not _env("wordpool"))
    p.add_argument("--heads", default=_env("heads"))
    p.add_argument("--cultures", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--delta", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--max-turns", type=int, default=15)
    p.set_defaults(func=cmd_play_tty)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BrokenPipeError:
        return 1
    except Exception as exc:
        print(f"duetbench: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
