"""Hard and soft voting over trained classifier members.

Mode ``auto`` resolves to hard voting when any member cannot emit
probabilities (the margin classifiers svm and sgd), otherwise soft voting:
hard takes the majority of member predictions, soft the argmax of unweighted
summed member distributions. Vote ties resolve to the lexicographically
smallest label, the same rule the classifiers use.

Spec-file format: JSON ``{"mode": ..., "member_model_paths": [...]}`` with
paths resolved relative to the spec file's directory.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path

from . import classifiers
from .errors import CapabilityError, ValidationError

MODES = ("auto", "hard", "soft")


@dataclass(frozen=True)
class EnsembleSpec:
    members: tuple
    mode: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))
        if len(self.members) < 2:
            raise ValidationError("an ensemble needs at least two members")
        if self.mode not in MODES:
            raise ValidationError(f"unknown ensemble mode {self.mode!r}")
        label_lists = {m.label_list for m in self.members}
        if len(label_lists) != 1:
            raise ValidationError("ensemble members must share one label_list")
        dims = {m.feature_dim for m in self.members}
        if len(dims) != 1:
            raise ValidationError("ensemble members must share one feature dim")
        if self.mode == "soft":
            blockers = [m.kind for m in self.members if not m.supports_probability]
            if blockers:
                raise CapabilityError(
                    f"soft voting requires probability support; blocked by: {blockers}"
                )

    @property
    def label_list(self):
        return self.members[0].label_list


def resolve_mode(spec: EnsembleSpec) -> str:
    """``auto`` becomes hard iff some member lacks probability support."""
    if spec.mode != "auto":
        return spec.mode
    if any(not m.supports_probability for m in spec.members):
        return "hard"
    return "soft"


def vote_hard(predictions) -> str:
    """Most frequent label; ties go to the lexicographically smallest."""
    predictions = list(predictions)
    if not predictions:
        raise ValidationError("vote_hard needs at least one prediction")
    counts = Counter(predictions)
    top = max(counts.values())
    return min(label for label, count in counts.items() if count == top)


def vote_soft(distributions) -> str:
    """Argmax of unweighted summed probabilities; same tie rule."""
    distributions = list(distributions)
    if not distributions:
        raise ValidationError("vote_soft needs at least one distribution")
    labels = sorted(distributions[0])
    totals = dict.fromkeys(labels, 0.0)
    for dist in distributions:
        if sorted(dist) != labels:
            raise ValidationError("soft-vote distributions must share one label set")
        total = sum(dist.values())
        if abs(total - 1.0) > 1e-6:
            raise ValidationError(f"distribution sums to {total}, not 1")
        for label in labels:
            totals[label] += dist[label]
    top = max(totals.values())
    return min(label for label in labels if totals[label] == top)


def ensemble_predict(spec: EnsembleSpec, v) -> str:
    mode = resolve_mode(spec)
    if mode == "hard":
        return vote_hard(classifiers.predict(m, v) for m in spec.members)
    return vote_soft(classifiers.predict_proba(m, v) for m in spec.members)


def save_ensemble_file(path, mode, member_model_paths) -> None:
    if mode not in MODES:
        raise ValidationError(f"unknown ensemble mode {mode!r}")
    payload = {"mode": mode, "member_model_paths": [str(p) for p in member_model_paths]}
    Path(path).write_bytes(
        json.dumps(payload, ensure_ascii=False, sort_keys=True).encode("utf-8")
    )


def load_ensemble_file(path) -> EnsembleSpec:
    """Read a spec file and load every member model."""
    path = Path(path)
    try:
        payload = json.loads(path.read_bytes().decode("utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as exc:
        raise ValidationError(f"unreadable ensemble spec {str(path)!r}: {exc}") from exc
    if (
        not isinstance(payload, dict)
        or "mode" not in payload
        or not isinstance(payload.get("member_model_paths"), list)
    ):
        raise ValidationError(f"malformed ensemble spec {str(path)!r}")
    members = []
    for member_path in payload["member_model_paths"]:
        member_path = Path(member_path)
        if not member_path.is_absolute():
            member_path = path.parent / member_path
        members.append(classifiers.load_model(member_path))
    return EnsembleSpec(members=tuple(members), mode=payload["mode"])
