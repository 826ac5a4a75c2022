"""Synchronous two-party protocol runtime with exact bit accounting.

The execution model: Alice and Bob run in lockstep supersteps.  In each
superstep both parties read the message the other side emitted in the
previous superstep, may draw shared public coins (free), and emit a new
message.  Messages are bags of tagged bit fields; the transcript records the
exact payload bit counts per round.  Field tags, widths and ordering are all
derivable from shared state, so they cost nothing; only payload bits count.

Party behaviors are generators: they ``yield`` a :class:`Message` and the
yield expression evaluates to the other party's message from the same
superstep.  ``yield from`` composes sub-protocols sequentially, and
:class:`ParallelComposite` multiplexes many sub-protocols into one behavior
(one round of the composite carries one round of every live sub-protocol).

Rounds where both sides send zero bits are elided from the transcript.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Generator, Iterable, Sequence

import numpy as np

DEFAULT_ROUND_CAP = 10**6


class ProtocolError(Exception):
    """A protocol violated its own contract (framing, phases, termination)."""


class InvariantError(Exception):
    """An internal invariant that the analysis guarantees was violated."""


def width_for(max_value: int) -> int:
    """Bits needed for values 0..max_value, i.e. ceil(log2(max_value + 1))."""
    if max_value < 0:
        raise ValueError("max_value must be nonnegative")
    return max_value.bit_length()


@dataclass(frozen=True)
class Bits:
    """An immutable bit string, stored as (value, width).

    Bit i (0-based, LSB-first) of ``value`` is the i-th symbol of the string.
    Zero-width fields are legal and cost zero bits.
    """

    value: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 0:
            raise ValueError("negative width")
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @staticmethod
    def from_bools(flags: Iterable[bool]) -> "Bits":
        value = 0
        width = 0
        for f in flags:
            if f:
                value |= 1 << width
            width += 1
        return Bits(value, width)

    @staticmethod
    def pack(values: Sequence[int], item_width: int) -> "Bits":
        """Concatenate fixed-width integers into one field."""
        acc = 0
        for i, v in enumerate(values):
            if not 0 <= v < (1 << item_width):
                raise ValueError(f"value {v} does not fit in {item_width} bits")
            acc |= v << (i * item_width)
        return Bits(acc, item_width * len(values))

    def unpack(self, item_width: int) -> list[int]:
        if item_width == 0:
            return []
        if self.width % item_width:
            raise ProtocolError("field width is not a multiple of item width")
        mask = (1 << item_width) - 1
        return [(self.value >> (i * item_width)) & mask
                for i in range(self.width // item_width)]

    def to_bools(self, count: int | None = None) -> list[bool]:
        if count is None:
            count = self.width
        if count != self.width:
            raise ProtocolError("bitmap length mismatch")
        return [bool((self.value >> i) & 1) for i in range(count)]

    def bit(self, i: int) -> bool:
        return bool((self.value >> i) & 1)


class Message:
    """One party's emission in one superstep: tagged bit fields plus a phase."""

    __slots__ = ("fields", "phase")

    def __init__(self, fields: dict[str, Bits] | None = None, phase: str | None = None):
        self.fields = fields or {}
        self.phase = phase

    def bit_count(self) -> int:
        return sum(b.width for b in self.fields.values())

    def __getitem__(self, tag: str) -> Bits:
        try:
            return self.fields[tag]
        except KeyError:
            raise ProtocolError(f"missing field {tag!r} in incoming message") from None

    def get(self, tag: str, default: Bits | None = None) -> Bits | None:
        return self.fields.get(tag, default)

    def __bool__(self) -> bool:
        return bool(self.fields)


EMPTY_MESSAGE = Message()

# A party behavior: a generator yielding Messages and receiving Messages.
Party = Generator[Message, Message, object]


@dataclass(frozen=True)
class Round:
    alice_bits: int
    bob_bits: int
    phase: str


@dataclass
class Transcript:
    """Per-round bit accounting; append-only during a run, then frozen."""

    rounds: list[Round] = field(default_factory=list)

    @property
    def total_bits(self) -> int:
        return sum(r.alice_bits + r.bob_bits for r in self.rounds)

    @property
    def total_rounds(self) -> int:
        return len(self.rounds)

    def phase_bits(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for r in self.rounds:
            out[r.phase] = out.get(r.phase, 0) + r.alice_bits + r.bob_bits
        return out

    def to_json_dict(self) -> dict:
        return {
            "rounds": [{"a": r.alice_bits, "b": r.bob_bits, "phase": r.phase}
                       for r in self.rounds],
            "totalBits": self.total_bits,
            "totalRounds": self.total_rounds,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict())


def _key_to_int(key: int | str) -> int:
    if isinstance(key, int):
        return key
    digest = hashlib.sha256(key.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


class PublicCoins:
    """A deterministic shared randomness stream.

    Both parties hold their own :class:`PublicCoins` built from the same seed
    path and therefore observe identical draws in identical order.  Drawing
    consumes no transcript bits.  ``substream`` derives an independent stream
    from a label, so unrelated protocol parts never contend for coins and
    parallel composition matches sequential replay.
    """

    def __init__(self, seed: int, _path: tuple[int, ...] = ()):
        self.seed = seed
        self.path = _path
        self._gen = np.random.Generator(np.random.PCG64(np.random.SeedSequence((seed, *_path))))

    def substream(self, key: int | str) -> "PublicCoins":
        return PublicCoins(self.seed, self.path + (_key_to_int(key),))

    def view(self) -> "PublicCoins":
        """A fresh stream at position zero of the same path (one per party)."""
        return PublicCoins(self.seed, self.path)

    def bit(self) -> int:
        return int(self._gen.integers(0, 2))

    def bernoulli(self, p: float) -> bool:
        # Fixed-point threshold on one 64-bit word: unbiased to 2**-64.
        word = int(self._gen.integers(0, 1 << 64, dtype=np.uint64))
        if p >= 1.0:
            return True
        return word < int(p * (1 << 64))

    def bernoulli_array(self, p: float, size: int) -> np.ndarray:
        words = self._gen.integers(0, 1 << 64, size=size, dtype=np.uint64)
        if p >= 1.0:
            return np.ones(size, dtype=bool)
        threshold = np.uint64(int(p * (1 << 64)))
        return words < threshold

    def randbelow(self, n: int) -> int:
        if n <= 0:
            raise ValueError("n must be positive")
        return int(self._gen.integers(0, n))

    def integers_array(self, n: int, size: int) -> np.ndarray:
        return self._gen.integers(0, n, size=size)

    def binomial(self, n: int, p: float) -> int:
        return int(self._gen.binomial(n, p))

    def permutation(self, m: int) -> list[int]:
        return [int(x) for x in self._gen.permutation(m)]

    def shuffle(self, items: list) -> None:
        self._gen.shuffle(items)


def draw_permutation(coins: PublicCoins, m: int) -> list[int]:
    """A uniform public permutation of range(m); costs zero transcript bits."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return coins.permutation(m)


def run_protocol(alice: Party, bob: Party, *,
                 round_cap: int = DEFAULT_ROUND_CAP) -> tuple[object, object, Transcript]:
    """Execute two party behaviors in lockstep supersteps.

    Returns (alice output, bob output, transcript).  The transcript records a
    round for every superstep in which at least one side sent bits.
    """
    transcript = Transcript()
    a_out = b_out = None
    a_done = b_done = False
    a_prev: Message = EMPTY_MESSAGE
    b_prev: Message = EMPTY_MESSAGE
    steps = 0
    while not (a_done and b_done):
        steps += 1
        if steps > round_cap:
            raise ProtocolError(f"round cap {round_cap} exceeded; non-terminating protocol?")
        a_msg = EMPTY_MESSAGE
        b_msg = EMPTY_MESSAGE
        if not a_done:
            try:
                a_msg = alice.send(b_prev) if steps > 1 else next(alice)
            except StopIteration as stop:
                a_out, a_done = stop.value, True
        if not b_done:
            try:
                b_msg = bob.send(a_prev) if steps > 1 else next(bob)
            except StopIteration as stop:
                b_out, b_done = stop.value, True
        a_bits = a_msg.bit_count()
        b_bits = b_msg.bit_count()
        if a_bits or b_bits:
            phase_a, phase_b = a_msg.phase, b_msg.phase
            if phase_a and phase_b and phase_a != phase_b:
                raise ProtocolError(f"phase disagreement: {phase_a!r} vs {phase_b!r}")
            transcript.rounds.append(Round(a_bits, b_bits, phase_a or phase_b or ""))
        a_prev, b_prev = a_msg, b_msg
    return a_out, b_out, transcript


class ParallelComposite:
    """Run sub-protocols in parallel as one composite party behavior.

    Per superstep the composite emits the concatenation of all live
    sub-protocols' fields, namespaced by sub-protocol index; composite rounds
    equal the max over sub-protocol rounds and bits are the sum.  Iterating
    (``yield from``) a composite inside a party generator drives all
    sub-generators and evaluates to the list of their outputs.
    """

    def __init__(self, parties: Sequence[Party], phase: str | None = None):
        self.parties = list(parties)
        self.phase = phase

    def run(self) -> Party:
        live: dict[int, Party] = dict(enumerate(self.parties))
        outputs: list[object] = [None] * len(self.parties)
        incoming_parts: dict[int, Message] = {}
        first = True
        while live:
            fields: dict[str, Bits] = {}
            for sid in list(live):
                sub = live[sid]
                try:
                    if first:
                        msg = next(sub)
                    else:
                        msg = sub.send(incoming_parts.get(sid, EMPTY_MESSAGE))
                except StopIteration as stop:
                    outputs[sid] = stop.value
                    del live[sid]
                    continue
                for tag, bits in msg.fields.items():
                    key = f"{sid}.{tag}"
                    if key in fields:
                        raise ProtocolError(f"tag collision: {key}")
                    fields[key] = bits
            first = False
            if not live:
                break
            incoming = yield Message(fields, phase=self.phase)
            incoming_parts = {}
            for key, bits in incoming.fields.items():
                sid_str, _, tag = key.partition(".")
                part = incoming_parts.setdefault(int(sid_str), Message(phase=incoming.phase))
                part.fields[tag] = bits
        return outputs

    def __iter__(self) -> Party:
        return self.run()


def parallel_compose(parties: Sequence[Party], phase: str | None = None) -> Party:
    """Composite party behavior running ``parties`` in parallel."""
    return ParallelComposite(parties, phase=phase).run()
