"""
Command-line interface for RevoStore
Every command prints key=value lines on success and exits 0; failures map to the error's exit code
"""

import argparse
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Callable, List, Optional

from cli.keystore import Keystore
from cli.sealed import SealedFile, open_sealed, seal, update_sealed
from config import Config
from game.adversaries import ADVERSARIES, BackdoorAdversary
from game.indcpa import GameConfig, estimate_advantage
from policy.lsss import compile_policy
from scheme import encoding
from scheme.errors import KeystoreError, NotAuthorized, ParameterError, RsabeError, Revoked, TimeTooEarly
from scheme.rsabe import rsabe_genkey, rsabe_setup, rsabe_updatekey
from utils.config_manager import ConfigManager, config_manager, get_config
from utils.helpers import Rng, format_bytes, make_rng, parse_csv_list, setup_logging, write_atomic

logger = logging.getLogger(__name__)

SEED_WARNING = ("WARNING: --seed makes every random choice reproducible. "
                "Keys and ciphertexts produced this way are NOT secret; use it for tests only.")


def _emit(**values) -> None:
    for key, value in values.items():
        print(f"{key}={value}")


def _warn_seed(seed: int) -> None:
    if get_config("seed_warning", True):
        print(SEED_WARNING, file=sys.stderr)
    logger.warning(f"[RNG] deterministic seed {seed} in use")


def _rng(args) -> Rng:
    if args.seed is None:
        return make_rng()
    _warn_seed(args.seed)
    return make_rng(args.seed)


def _read_file(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except FileNotFoundError as e:
        raise KeystoreError(f"no such file: {path}") from e


def _users(text: Optional[str]) -> List[int]:
    try:
        return [int(item) for item in parse_csv_list(text)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"user list must be comma separated integers: {text}") from e


def cmd_setup(args) -> int:
    keystore = Keystore(args.out or args.keystore)
    keystore.ensure_empty()
    attributes = parse_csv_list(args.attrs)
    rng = _rng(args)
    mk, pi, pk = rsabe_setup(args.lam, attributes, args.tmax, args.users, rng,
                             max_duplication=args.max_duplication)
    digest = keystore.initialize(mk.descriptor, mk, pi, pk)
    _emit(keystore=keystore.directory, fingerprint=digest, attributes=",".join(pk.universe.names),
          t_max=pk.t_max, n_max=pk.tree.n_max, tree_nodes=pk.tree.node_count, n_bits=pi.n.bit_length())
    return 0


def cmd_genkey(args) -> int:
    keystore = Keystore(args.keystore)
    pi, pk, mk = keystore.public_info(), keystore.public_key(), keystore.master_key()
    structure = compile_policy(args.policy, pi.n, universe=pk.universe)
    sk = rsabe_genkey(pi, pk, mk, structure, args.user, _rng(args))
    data = encoding.encode_private_key(sk, pk)
    write_atomic(Path(args.out), data)
    _emit(user=sk.user, rows=structure.rows, nodes=len(sk.private_set.nodes), out=args.out, size=len(data))
    return 0


def cmd_updatekey(args) -> int:
    keystore = Keystore(args.keystore)
    pi, pk, mk = keystore.public_info(), keystore.public_key(), keystore.master_key()
    tk = rsabe_updatekey(pi, pk, mk, args.time, _users(args.revoke), _rng(args))
    data = encoding.encode_update_key(tk)
    write_atomic(Path(args.out), data)
    _emit(time=tk.time, revoked=",".join(str(u) for u in sorted(tk.revoked)) or "-",
          cover=",".join(str(node) for node in tk.cover.nodes) or "-", out=args.out, size=len(data))
    return 0


def cmd_encrypt(args) -> int:
    keystore = Keystore(args.keystore)
    pi, pk = keystore.public_info(), keystore.public_key()
    plaintext = _read_file(args.input)
    sealed = seal(pi, pk, plaintext, parse_csv_list(args.attrs), args.time, _rng(args),
                  hash_name=get_config("hash_name", Config.HASH_NAME))
    data = sealed.encode()
    write_atomic(Path(args.out), data)
    _emit(time=sealed.time, attributes=",".join(sorted(sealed.attributes)), out=args.out,
          size=format_bytes(len(data)))
    return 0


def cmd_decrypt(args) -> int:
    keystore = Keystore(args.keystore)
    pi, pk = keystore.public_info(), keystore.public_key()
    sk = encoding.decode_private_key(_read_file(args.key), pi, pk)
    tk = encoding.decode_update_key(_read_file(args.update_key), pi, pk)
    sealed = SealedFile.decode(_read_file(args.input))
    plaintext = open_sealed(sealed, pi, pk, sk, tk)
    write_atomic(Path(args.out), plaintext)
    _emit(user=sk.user, time=sealed.time, key_time=tk.time, out=args.out, size=len(plaintext))
    return 0


def cmd_updatect(args) -> int:
    keystore = Keystore(args.keystore)
    pi, pk = keystore.public_info(), keystore.public_key()
    sealed = SealedFile.decode(_read_file(args.input))
    rng = _rng(args)
    for _ in range(args.steps):
        sealed = update_sealed(sealed, pi, pk, rng)
    write_atomic(Path(args.out or args.input), sealed.encode())
    _emit(time=sealed.time, out=args.out or args.input)
    return 0


def cmd_export(args) -> int:
    source = Keystore(args.keystore)
    digest = source.export(Keystore(args.out))
    _emit(keystore=args.out, mode="client", fingerprint=digest)
    return 0


def cmd_info(args) -> int:
    keystore = Keystore(args.keystore)
    pi, pk = keystore.public_info(), keystore.public_key()
    _emit(keystore=keystore.directory, mode="authority" if keystore.is_authority else "client",
          fingerprint=keystore.fingerprint(), attributes=",".join(pk.universe.names),
          max_duplication=pk.universe.k, t_max=pk.t_max, n_max=pk.tree.n_max,
          q_bits=pi.q.bit_length(), n_bits=pi.n.bit_length())
    return 0


def cmd_game(args) -> int:
    print("NOTE: the game harness checks correctness of the challenger and the scheme; "
          "at these parameter sizes it says nothing about security.", file=sys.stderr)
    if args.seed is not None:
        _warn_seed(args.seed)
    config = GameConfig(lam=args.lam, trials=args.trials, seed=args.seed)
    adversary = ADVERSARIES[args.adversary]
    estimate = estimate_advantage(config, adversary, backdoor=adversary is BackdoorAdversary)
    _emit(adversary=args.adversary, **estimate.summary())
    return 0


def _config_value(manager: ConfigManager, item: str):
    key, sep, text = item.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {item!r}")
    current = manager.get(key, None)
    if current is None:
        raise ParameterError(f"unknown config key: {key}")
    if isinstance(current, bool):
        lowered = text.strip().lower()
        if lowered not in ("true", "false", "1", "0", "yes", "no"):
            raise ParameterError(f"{key} takes true or false, got {text!r}")
        return key, lowered in ("true", "1", "yes")
    if isinstance(current, int):
        try:
            return key, int(text)
        except ValueError as e:
            raise ParameterError(f"{key} takes an integer, got {text!r}") from e
    return key, text


def cmd_config(args) -> int:
    manager = ConfigManager(Path(args.config_dir)) if args.config_dir else config_manager
    if args.action in ("export", "import") and not args.file:
        raise argparse.ArgumentTypeError(f"config {args.action} needs --file")

    if args.action == "set":
        if not args.values:
            raise argparse.ArgumentTypeError("config set needs at least one KEY=VALUE")
        manager.update(**dict(_config_value(manager, item) for item in args.values))
        ok = manager.save_config()
    elif args.action == "reset":
        ok = manager.reset_to_defaults()
    elif args.action == "export":
        ok = manager.export_config(args.file)
    elif args.action == "import":
        ok = manager.import_config(args.file)
    else:
        ok = True
    if not ok:
        raise KeystoreError(f"config {args.action} failed, see the log for details")

    _emit(config_file=manager.config_file, **asdict(manager.config))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revostore", description=Config.APP_DESCRIPTION)
    parser.add_argument("--keystore", default=None,
                        help="keystore directory (default: $RSABE_KEYSTORE or ./keystore)")
    parser.add_argument("--log-level", default=None, help="console log level")
    parser.add_argument("--log-file", action="store_true", help=f"also log to logs/{Config.LOG_FILE}")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable, help_text: str, seeded: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(handler=handler)
        if seeded:
            p.add_argument("--seed", type=int, default=None, help="TEST ONLY: deterministic randomness")
        return p

    p = command("setup", cmd_setup, "create a new authority keystore", seeded=True)
    p.add_argument("--attrs", required=True, help="comma separated attribute universe")
    p.add_argument("--tmax", type=int, default=get_config("default_tmax", Config.DEFAULT_TMAX))
    p.add_argument("--users", type=int, default=get_config("default_users", Config.DEFAULT_USERS))
    p.add_argument("--lambda", dest="lam", type=int, default=get_config("default_lambda", Config.DEFAULT_LAMBDA))
    p.add_argument("--max-duplication", type=int,
                   default=get_config("max_duplication", Config.MAX_DUPLICATION))
    p.add_argument("--out", default=None, help="keystore directory to create")

    p = command("genkey", cmd_genkey, "issue a private key for a user and policy", seeded=True)
    p.add_argument("--user", type=int, required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--out", required=True)

    p = command("updatekey", cmd_updatekey, "issue the time-update key for a time", seeded=True)
    p.add_argument("--time", type=int, required=True)
    p.add_argument("--revoke", default="", help="comma separated revoked users")
    p.add_argument("--out", required=True)

    p = command("encrypt", cmd_encrypt, "seal a file under attributes and a time", seeded=True)
    p.add_argument("--attrs", required=True)
    p.add_argument("--time", type=int, required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)

    p = command("decrypt", cmd_decrypt, "open a sealed file")
    p.add_argument("--key", required=True)
    p.add_argument("--update-key", required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", required=True)

    p = command("updatect", cmd_updatect, "advance a sealed file to the next time", seeded=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", default=None, help="defaults to rewriting the input")
    p.add_argument("--steps", type=int, default=1)

    p = command("export", cmd_export, "copy the public files into a client keystore")
    p.add_argument("--out", required=True)

    command("info", cmd_info, "print public parameters")

    p = command("game", cmd_game, "estimate an adversary's IND-CPA advantage", seeded=True)
    p.add_argument("--adversary", choices=sorted(ADVERSARIES), default="coin")
    p.add_argument("--trials", type=int, default=Config.GAME_MIN_TRIALS)
    p.add_argument("--lambda", dest="lam", type=int, default=Config.GAME_DEFAULT_LAMBDA)

    p = command("config", cmd_config, "show or change the saved operator defaults")
    p.add_argument("action", choices=["show", "set", "reset", "export", "import"])
    p.add_argument("values", nargs="*", metavar="KEY=VALUE", help="settings for `config set`")
    p.add_argument("--file", default=None, help="JSON file for export or import")
    p.add_argument("--config-dir", default=None, help="directory holding user_config.json")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    setup_logging(args.log_level or get_config("log_level", Config.LOG_LEVEL),
                  Config.get_log_file() if args.log_file else None)
    try:
        return args.handler(args)
    except (Revoked, NotAuthorized, TimeTooEarly) as e:
        logger.error(f"[DECRYPT] ❌ {e}")
        print(f"error: decryption refused, {e.condition}: {e}", file=sys.stderr)
        return e.exit_code
    except argparse.ArgumentTypeError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except RsabeError as e:
        logger.error(f"❌ {type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code

