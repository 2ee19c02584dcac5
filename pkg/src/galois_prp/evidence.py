"""Compositeness evidence carried out of the pipeline."""
from dataclasses import dataclass, field

KINDS = (
    "SmallFactor",
    "PerfectPower",
    "MrWitness",
    "ZeroDivisor",
    "FailedIdentity",
    "GaloisWitness",
)


@dataclass(frozen=True)
class CompositeEvidence:
    """A replayable proof that n is composite.

    ``data`` holds plain ints, strings and lists so that it serialises to
    JSON unchanged.
    """

    kind: str
    data: dict = field(default_factory=dict)
    step: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown evidence kind {self.kind!r}")

    def to_json(self):
        return {"kind": self.kind, "step": self.step, **self.data}

    @classmethod
    def from_json(cls, obj):
        obj = dict(obj)
        kind = obj.pop("kind")
        step = obj.pop("step", "")
        return cls(kind, obj, step)


class CompositeDetected(Exception):
    """Raised inside the pipeline as soon as n is proven composite."""

    def __init__(self, evidence):
        super().__init__(f"{evidence.kind} at {evidence.step or '?'}")
        self.evidence = evidence
