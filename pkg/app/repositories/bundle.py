"""Agent bundle files: manifest line plus actor and critic weight blocks."""

import hashlib
from pathlib import Path
from typing import List, Tuple, Union

from app.adapters.agent.actor_critic import ActorCriticAgent
from app.adapters.agent.base import ActionHead
from app.core.neural import Mlp
from app.exceptions import ConfigError, DataError, FormatError
from app.models.game import EncodingScheme
from app.schemas.evaluation import Role

BLOCKS = ("actor", "critic")


def dump_bundle(agent: ActorCriticAgent) -> str:
    """Serialize an agent; floats are written at 17 significant digits."""
    manifest = " ".join(
        [
            "bundle",
            agent.role.value,
            agent.scheme.value,
            agent.head.value,
            str(agent.input_dim),
            str(agent.actor.hidden_dim),
            str(agent.output_dim),
            "%.17g" % agent.gamma,
            "%.17g" % agent.alpha_actor,
            "%.17g" % agent.alpha_critic,
        ]
    )
    return f"{manifest}\nactor\n{agent.actor.to_text()}critic\n{agent.critic.to_text()}"


def bundle_hash(agent: ActorCriticAgent) -> str:
    """SHA-256 of the serialized bundle."""
    return hashlib.sha256(dump_bundle(agent).encode("utf-8")).hexdigest()


def _parse_block(lines: List[Tuple[int, str]], name: str) -> Mlp:
    lineno, dims_line = lines[0]
    fields = dims_line.split()
    if len(fields) != 4 or fields[0] != "dims":
        raise FormatError(f"{name}: expected 'dims <in> <hid> <out>'", line=lineno)
    try:
        dims = tuple(int(v) for v in fields[1:])
        values = [float(v) for _, line in lines[1:] for v in line.split()]
    except ValueError as exc:
        raise FormatError(f"{name}: {exc}", line=lineno)
    try:
        return Mlp.from_tokens(dims, values)
    except ConfigError as exc:
        raise FormatError(f"{name}: {exc.message}", line=lineno)


def parse_bundle(text: str) -> ActorCriticAgent:
    """Parse bundle text into an agent with learning enabled."""
    lines = [(n, raw.strip()) for n, raw in enumerate(text.splitlines(), start=1) if raw.strip()]
    if not lines:
        raise FormatError("empty bundle", line=1)

    lineno, manifest = lines[0]
    fields = manifest.split()
    if len(fields) != 10 or fields[0] != "bundle":
        raise FormatError("expected 'bundle <role> <scheme> <head> <in> <hidden> <out> <gamma> <alpha_actor> <alpha_critic>'", line=lineno)
    try:
        role = Role(fields[1])
        scheme = EncodingScheme(fields[2])
        head = ActionHead(fields[3])
        input_dim, hidden_dim, output_dim = (int(v) for v in fields[4:7])
        gamma, alpha_actor, alpha_critic = (float(v) for v in fields[7:10])
    except ValueError as exc:
        raise FormatError(f"bad manifest: {exc}", line=lineno)

    starts = {}
    for index, (n, line) in enumerate(lines):
        if line in BLOCKS:
            if line in starts:
                raise FormatError(f"duplicate {line} block", line=n)
            starts[line] = index
    if set(starts) != set(BLOCKS) or starts["actor"] > starts["critic"]:
        raise FormatError("expected an actor block followed by a critic block", line=lineno)

    actor = _parse_block(lines[starts["actor"] + 1 : starts["critic"]], "actor")
    critic = _parse_block(lines[starts["critic"] + 1 :], "critic")
    if actor.dims != (input_dim, hidden_dim, output_dim):
        raise FormatError(f"actor dims {actor.dims} disagree with the manifest", line=lineno)
    if critic.dims != (input_dim, hidden_dim, 1):
        raise FormatError(f"critic dims {critic.dims} disagree with the manifest", line=lineno)
    return ActorCriticAgent(role, scheme, head, actor, critic, gamma, alpha_actor, alpha_critic)


def save_bundle(agent: ActorCriticAgent, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_bundle(agent), encoding="utf-8")
    except OSError as exc:
        raise DataError(f"Cannot write {path}", {"error": str(exc)})
    return path


def load_bundle(path: Union[str, Path]) -> ActorCriticAgent:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DataError(f"Cannot read {path}", {"error": str(exc)})
    return parse_bundle(text)
