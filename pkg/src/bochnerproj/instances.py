"""Reading and writing instance and report files.

One JSON-based schema covers both. An instance file describes a space, an
element, an optional feasible-set descriptor, and an optional direction:

    {
      "space":   {"weights": [1.0, 1.0], "dim": 1, "rho": 2.0, "p": 2.0},
      "element": [[2.0], [3.0]],
      "set":     {"kind": "ball", "support": [0],
                  "center": [[0.0], [0.0]], "rad": 1.0},
      "direction": [[1.0], [0.0]]
    }

``set.kind`` is one of subspace / ball / cylinder; subspace descriptors omit
center and rad.  Floats survive the round trip exactly (shortest-repr JSON
serialization is lossless for binary64).  Loading validates every invariant
and raises :class:`InstanceFormatError` on any violation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .projections import BallSpec, CylinderSpec
from .space import (
    BochnerElement,
    BochnerSpaceSpec,
    InnerNormSpec,
    MeasureSpace,
    SupportSet,
)


class InstanceFormatError(ValueError):
    """The file does not describe a valid instance."""


@dataclass(frozen=True)
class Instance:
    space: BochnerSpaceSpec
    element: BochnerElement
    set_spec: object | None
    direction: BochnerElement | None

    def to_dict(self) -> dict:
        doc = {
            "space": {
                "weights": self.space.weights.tolist(),
                "dim": self.space.dim,
                "rho": self.space.rho,
                "p": self.space.p,
            },
            "element": self.element.values.tolist(),
        }
        spec = self.set_spec
        if isinstance(spec, SupportSet):
            doc["set"] = {"kind": "subspace", "support": spec.indices.tolist()}
        elif isinstance(spec, (BallSpec, CylinderSpec)):
            ball = spec.base if isinstance(spec, CylinderSpec) else spec
            doc["set"] = {
                "kind": "cylinder" if isinstance(spec, CylinderSpec) else "ball",
                "support": ball.support.indices.tolist(),
                "center": ball.center.values.tolist(),
                "rad": ball.rad,
            }
        elif spec is not None:
            raise TypeError(f"unsupported set spec: {type(spec).__name__}")
        if self.direction is not None:
            doc["direction"] = self.direction.values.tolist()
        return doc

    @classmethod
    def from_dict(cls, doc: dict) -> "Instance":
        try:
            sp = doc["space"]
            space = BochnerSpaceSpec(
                MeasureSpace(np.asarray(sp["weights"], dtype=float)),
                InnerNormSpec(int(sp["dim"]), float(sp["rho"])),
                float(sp["p"]),
            )
            element = BochnerElement(
                space, np.asarray(doc["element"], dtype=float)
            )
            set_spec = None
            if "set" in doc and doc["set"] is not None:
                sd = doc["set"]
                kind = sd["kind"]
                support = SupportSet(space, np.asarray(sd["support"], dtype=int))
                if kind == "subspace":
                    set_spec = support
                elif kind in ("ball", "cylinder"):
                    center = BochnerElement(
                        space, np.asarray(sd["center"], dtype=float)
                    )
                    ball = BallSpec(
                        support=support, center=center, rad=float(sd["rad"])
                    )
                    set_spec = CylinderSpec(ball) if kind == "cylinder" else ball
                else:
                    raise InstanceFormatError(f"unknown set kind {kind!r}")
            direction = None
            if "direction" in doc and doc["direction"] is not None:
                direction = BochnerElement(
                    space, np.asarray(doc["direction"], dtype=float)
                )
        except InstanceFormatError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise InstanceFormatError(f"invalid instance file: {exc}") from exc
        return cls(
            space=space, element=element, set_spec=set_spec, direction=direction
        )


def save_instance(path, instance: Instance):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(instance.to_dict(), fh, indent=2)
        fh.write("\n")


def load_instance(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InstanceFormatError(f"cannot read instance file: {exc}") from exc
    if not isinstance(doc, dict):
        raise InstanceFormatError("instance file must hold a JSON object")
    return Instance.from_dict(doc)


def save_json(path, payload: dict):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def load_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)
